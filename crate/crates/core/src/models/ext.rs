//! The finite counter-model to extensionality.
//!
//! `M_n = {k, l, 1_n..n_n, 1̄_n..n̄_n}`; `f` is the involution swapping
//! `i` and `ī`, and `Lam` sends `1` to `k`, `1̄` to `l` and decrements the
//! other indices.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::{BindingModel, Domain, Ifs, ModelError};
use crate::syntax::Signature;
use crate::theories::ext_signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ExtElem {
    K,
    L,
    Proj(usize),
    Bar(usize),
}

impl ExtElem {
    pub fn negated(self) -> Self {
        match self {
            ExtElem::Proj(i) => ExtElem::Bar(i),
            ExtElem::Bar(i) => ExtElem::Proj(i),
            e => e,
        }
    }

    fn fits(self, n: usize) -> bool {
        match self {
            ExtElem::Proj(i) | ExtElem::Bar(i) => 1 <= i && i <= n,
            _ => true,
        }
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtElem::K => f.write_str("k"),
            ExtElem::L => f.write_str("l"),
            ExtElem::Proj(i) => write!(f, "{i}"),
            ExtElem::Bar(i) => write!(f, "~{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtModel {
    sig: Signature,
}

impl Default for ExtModel {
    fn default() -> Self {
        Self::new()
    }
}

impl ExtModel {
    pub fn new() -> Self {
        Self { sig: ext_signature() }
    }

    /// `Λ̂_n`, from `M_{n+1}` to `M_n`.
    pub fn lam(a: ExtElem) -> ExtElem {
        match a {
            ExtElem::Proj(1) => ExtElem::K,
            ExtElem::Bar(1) => ExtElem::L,
            ExtElem::Proj(i) => ExtElem::Proj(i - 1),
            ExtElem::Bar(i) => ExtElem::Bar(i - 1),
            e => e,
        }
    }

    fn check(n: usize, a: ExtElem) -> Result<ExtElem, ModelError> {
        if a.fits(n) {
            Ok(a)
        } else {
            Err(ModelError::Undefined(format!("{a} is not an element of M_{n}")))
        }
    }
}

impl Ifs for ExtModel {
    type Elem = ExtElem;

    fn proj(&self, i: usize, n: usize) -> Result<ExtElem, ModelError> {
        Self::check(n, ExtElem::Proj(i))
    }

    fn compose(&self, p: usize, n: usize, a: &ExtElem, bs: &[ExtElem]) -> Result<ExtElem, ModelError> {
        if bs.len() != n {
            return Err(ModelError::Undefined(format!("composition at M_{n} with {} arguments", bs.len())));
        }
        let r = match Self::check(n, *a)? {
            ExtElem::Proj(i) => bs[i - 1],
            ExtElem::Bar(i) => bs[i - 1].negated(),
            e => e,
        };
        Self::check(p, r)
    }

    fn elem_eq(&self, _n: usize, a: &ExtElem, b: &ExtElem) -> bool {
        a == b
    }

    fn carrier(&self, n: usize) -> Option<Vec<ExtElem>> {
        let mut v = vec![ExtElem::K, ExtElem::L];
        v.extend((1..=n).map(ExtElem::Proj));
        v.extend((1..=n).map(ExtElem::Bar));
        Some(v)
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> ExtElem {
        let c = self.carrier(n).unwrap();
        c[rng.gen_range(0..c.len())]
    }

    fn show(&self, n: usize, a: &ExtElem) -> String {
        format!("{a}{n}")
    }
}

impl BindingModel for ExtModel {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn fhat(&self, f: &str, p: usize, args: &[ExtElem]) -> Result<ExtElem, ModelError> {
        match (f, args) {
            ("f", [a]) => Self::check(p, *a).map(ExtElem::negated),
            ("Lam", [a]) => Self::check(p, Self::lam(Self::check(p + 1, *a)?)),
            _ => Err(ModelError::UnknownSymbol(f.to_string())),
        }
    }

    fn phat(&self, pred: &str, args: &[ExtElem]) -> Result<bool, ModelError> {
        match (pred, args) {
            ("=", [a, b]) => Ok(a == b),
            _ => Err(ModelError::UnknownSymbol(pred.to_string())),
        }
    }

    fn domain(&self) -> Domain<ExtElem> {
        Domain::Finite(self.carrier(0).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{eval_term, validity, EvalOptions, Verdict};
    use crate::syntax::parse_term;
    use crate::theories::{equality_axioms, ext_instance};
    use std::collections::BTreeMap;

    #[test]
    fn denotations_of_the_two_abstractions() {
        let m = ExtModel::new();
        let s = m.signature().clone();
        let show = |src: &str| {
            let t = parse_term(&s, src).unwrap();
            m.show(0, &eval_term(&m, &t, &[], &BTreeMap::new()).unwrap())
        };
        assert_eq!(show("Lam(x. f(x))"), "l0");
        assert_eq!(show("Lam(x. x)"), "k0");
    }

    #[test]
    fn extensionality_fails() {
        let m = ExtModel::new();
        let (premise, concl) = ext_instance();
        assert_eq!(validity(&m, &premise, EvalOptions::default()).unwrap().verdict, Verdict::Valid);
        assert_eq!(validity(&m, &concl, EvalOptions::default()).unwrap().verdict, Verdict::Invalid);
        for a in equality_axioms(m.signature()) {
            assert_eq!(validity(&m, &a, EvalOptions::default()).unwrap().verdict, Verdict::Valid, "{a}");
        }
    }

    #[test]
    fn composition_is_substitution() {
        let m = ExtModel::new();
        let r = m.compose(1, 2, &ExtElem::Bar(2), &[ExtElem::K, ExtElem::Bar(1)]).unwrap();
        assert_eq!(r, ExtElem::Proj(1));
        assert!(m.compose(0, 1, &ExtElem::Proj(1), &[ExtElem::Proj(1)]).is_err());
    }
}
