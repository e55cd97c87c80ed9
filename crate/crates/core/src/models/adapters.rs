//! Models of the explicit-substitution language, and the passage between
//! them and binding models.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{quantify, Assignment, BindingModel, Domain, Ifs, ModelError, Truth};
use crate::sigma::{LProp, LTerm, LTermGen, SigmaRule};
use crate::syntax::Signature;

/// Interpretation of L′: carriers for terms of each sort `n` and for
/// substitutions of each sort `<n,p>`.
pub trait SigmaStructure: Send + Sync {
    type T: Clone + fmt::Debug + Send + Sync;
    type S: Clone + fmt::Debug + Send + Sync;

    fn signature(&self) -> &Signature;
    fn index(&self, i: usize, n: usize) -> Result<Self::T, ModelError>;
    /// `f_p(args)`.
    fn app(&self, f: &str, p: usize, args: &[Self::T]) -> Result<Self::T, ModelError>;
    /// `t[s]` with `t` of sort `p` and `s` of sort `<n,p>`.
    fn clos(&self, n: usize, p: usize, t: &Self::T, s: &Self::S) -> Result<Self::T, ModelError>;
    fn id(&self, n: usize) -> Result<Self::S, ModelError>;
    /// `up_n`, of sort `<n+1,n>`.
    fn shift(&self, n: usize) -> Result<Self::S, ModelError>;
    /// `t . s` with `t` of sort `n` and `s` of sort `<n,p>`.
    fn cons(&self, n: usize, p: usize, t: &Self::T, s: &Self::S) -> Result<Self::S, ModelError>;
    /// `s1 o s2` with `s1 : <p,m>` and `s2 : <q,p>`.
    fn comp(&self, q: usize, p: usize, m: usize, s1: &Self::S, s2: &Self::S) -> Result<Self::S, ModelError>;
    fn pred(&self, pred: &str, args: &[Self::T]) -> Result<bool, ModelError>;
    fn term_eq(&self, n: usize, a: &Self::T, b: &Self::T) -> bool;
    fn subst_eq(&self, n: usize, p: usize, a: &Self::S, b: &Self::S) -> bool;
    fn term_carrier(&self, n: usize) -> Option<Vec<Self::T>>;
    fn sample_term<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Self::T;
    fn domain(&self) -> Domain<Self::T>;
    fn show(&self, n: usize, a: &Self::T) -> String;
}

/// The L′ model induced by a binding model: a substitution of sort
/// `<n,p>` is a `p`-tuple of elements of `M_n`.
#[derive(Clone, Debug)]
pub struct SigmaModel<M> {
    pub base: M,
}

pub fn sigma_model_from_binding<M: BindingModel>(m: M) -> SigmaModel<M> {
    SigmaModel { base: m }
}

impl<M: BindingModel> SigmaStructure for SigmaModel<M> {
    type T = M::Elem;
    type S = Vec<M::Elem>;

    fn signature(&self) -> &Signature {
        self.base.signature()
    }

    fn index(&self, i: usize, n: usize) -> Result<M::Elem, ModelError> {
        self.base.proj(i, n)
    }

    fn app(&self, f: &str, p: usize, args: &[M::Elem]) -> Result<M::Elem, ModelError> {
        self.base.fhat(f, p, args)
    }

    fn clos(&self, n: usize, p: usize, t: &M::Elem, s: &Vec<M::Elem>) -> Result<M::Elem, ModelError> {
        self.base.compose(n, p, t, s)
    }

    fn id(&self, n: usize) -> Result<Vec<M::Elem>, ModelError> {
        (1..=n).map(|i| self.base.proj(i, n)).collect()
    }

    fn shift(&self, n: usize) -> Result<Vec<M::Elem>, ModelError> {
        (2..=n + 1).map(|i| self.base.proj(i, n + 1)).collect()
    }

    fn cons(&self, _n: usize, _p: usize, t: &M::Elem, s: &Vec<M::Elem>) -> Result<Vec<M::Elem>, ModelError> {
        let mut out = Vec::with_capacity(s.len() + 1);
        out.push(t.clone());
        out.extend_from_slice(s);
        Ok(out)
    }

    fn comp(&self, q: usize, p: usize, _m: usize, s1: &Vec<M::Elem>, s2: &Vec<M::Elem>) -> Result<Vec<M::Elem>, ModelError> {
        s1.iter().map(|a| self.base.compose(q, p, a, s2)).collect()
    }

    fn pred(&self, pred: &str, args: &[M::Elem]) -> Result<bool, ModelError> {
        self.base.phat(pred, args)
    }

    fn term_eq(&self, n: usize, a: &M::Elem, b: &M::Elem) -> bool {
        self.base.elem_eq(n, a, b)
    }

    fn subst_eq(&self, n: usize, _p: usize, a: &Vec<M::Elem>, b: &Vec<M::Elem>) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.base.elem_eq(n, x, y))
    }

    fn term_carrier(&self, n: usize) -> Option<Vec<M::Elem>> {
        self.base.carrier(n)
    }

    fn sample_term<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> M::Elem {
        self.base.sample(n, rng)
    }

    fn domain(&self) -> Domain<M::Elem> {
        self.base.domain()
    }

    fn show(&self, n: usize, a: &M::Elem) -> String {
        self.base.show(n, a)
    }
}

/// The value of an L′ term: an element or a substitution.
pub enum LValue<N: SigmaStructure> {
    Term(N::T),
    Subst(N::S),
}

impl<N: SigmaStructure> Clone for LValue<N> {
    fn clone(&self) -> Self {
        match self {
            LValue::Term(t) => LValue::Term(t.clone()),
            LValue::Subst(s) => LValue::Subst(s.clone()),
        }
    }
}

impl<N: SigmaStructure> fmt::Debug for LValue<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LValue::Term(t) => write!(f, "{t:?}"),
            LValue::Subst(s) => write!(f, "{s:?}"),
        }
    }
}

impl<N: SigmaStructure> LValue<N> {
    fn term(self) -> Result<N::T, ModelError> {
        match self {
            LValue::Term(t) => Ok(t),
            LValue::Subst(_) => Err(ModelError::Undefined("a substitution where a term was expected".into())),
        }
    }

    fn subst(self) -> Result<N::S, ModelError> {
        match self {
            LValue::Subst(s) => Ok(s),
            LValue::Term(_) => Err(ModelError::Undefined("a term where a substitution was expected".into())),
        }
    }
}

/// `⟦t⟧_φ` for an L′ term or substitution. Sorts are read off the term.
pub fn eval_lterm<N: SigmaStructure>(n: &N, t: &LTerm, phi: &Assignment<N::T>) -> Result<LValue<N>, ModelError> {
    let term = |t: &LTerm| eval_lterm(n, t, phi).and_then(LValue::term);
    let subst = |s: &LTerm| eval_lterm(n, s, phi).and_then(LValue::subst);
    Ok(match t {
        LTerm::Index { i, n: lvl } => LValue::Term(n.index(*i, *lvl)?),
        LTerm::Var(x) => LValue::Term(phi.get(x).cloned().ok_or_else(|| ModelError::UnboundVariable(x.clone()))?),
        LTerm::App { f, p, args } => {
            let vals = args.iter().map(term).collect::<Result<Vec<_>, _>>()?;
            LValue::Term(n.app(f, *p, &vals)?)
        }
        LTerm::Clos(a, s) => LValue::Term(n.clos(s.level(), s.arity(), &term(a)?, &subst(s)?)?),
        LTerm::Id(k) => LValue::Subst(n.id(*k)?),
        LTerm::Shift(k) => LValue::Subst(n.shift(*k)?),
        LTerm::Cons(a, s) => LValue::Subst(n.cons(s.level(), s.arity(), &term(a)?, &subst(s)?)?),
        LTerm::Comp(s1, s2) => LValue::Subst(n.comp(s2.level(), s2.arity(), s1.arity(), &subst(s1)?, &subst(s2)?)?),
    })
}

/// Truth of an L′ proposition; quantifiers range over the sort-0 domain.
pub fn eval_lprop<N: SigmaStructure>(n: &N, a: &LProp, phi: &Assignment<N::T>) -> Result<Truth, ModelError> {
    let domain = n.domain();
    let finite = domain.is_finite();
    fn go<N: SigmaStructure>(
        n: &N,
        a: &LProp,
        phi: &mut Assignment<N::T>,
        dom: &[N::T],
        finite: bool,
    ) -> Result<Truth, ModelError> {
        Ok(match a {
            LProp::Atom(p, args) => {
                let vals = args
                    .iter()
                    .map(|t| eval_lterm(n, t, phi).and_then(LValue::term))
                    .collect::<Result<Vec<_>, _>>()?;
                Truth::exact(n.pred(p, &vals)?)
            }
            LProp::Bottom => Truth::exact(false),
            LProp::Imp(a, b) => super::imp(go(n, a, phi, dom, finite)?, go(n, b, phi, dom, finite)?),
            LProp::And(a, b) => super::and(go(n, a, phi, dom, finite)?, go(n, b, phi, dom, finite)?),
            LProp::Or(a, b) => super::or(go(n, a, phi, dom, finite)?, go(n, b, phi, dom, finite)?),
            LProp::Forall(x, body) | LProp::Exists(x, body) => {
                let universal = matches!(a, LProp::Forall(..));
                quantify(phi, x, dom, finite, universal, |phi| go(n, body, phi, dom, finite))?
            }
        })
    }
    go(n, a, &mut phi.clone(), domain.elems(), finite)
}

/// The binding model read back from an L′ model: `a □_{p,n} <b1..bn>` is
/// `a[b1 . ... . bn . up^p]`.
#[derive(Clone, Debug)]
pub struct BindingFromSigma<N> {
    pub base: N,
}

pub fn binding_model_from_sigma<N: SigmaStructure>(n: N) -> BindingFromSigma<N> {
    BindingFromSigma { base: n }
}

impl<N: SigmaStructure> Ifs for BindingFromSigma<N> {
    type Elem = N::T;

    fn proj(&self, i: usize, n: usize) -> Result<N::T, ModelError> {
        self.base.index(i, n)
    }

    fn compose(&self, p: usize, n: usize, a: &N::T, bs: &[N::T]) -> Result<N::T, ModelError> {
        let shifts = eval_lterm(&self.base, &LTerm::shifts(0, p), &BTreeMap::new())?.subst()?;
        let mut s = shifts;
        for (k, b) in bs.iter().enumerate().rev() {
            s = self.base.cons(p, n - k - 1, b, &s)?;
        }
        self.base.clos(p, n, a, &s)
    }

    fn elem_eq(&self, n: usize, a: &N::T, b: &N::T) -> bool {
        self.base.term_eq(n, a, b)
    }

    fn carrier(&self, n: usize) -> Option<Vec<N::T>> {
        self.base.term_carrier(n)
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> N::T {
        self.base.sample_term(n, rng)
    }

    fn show(&self, n: usize, a: &N::T) -> String {
        self.base.show(n, a)
    }
}

impl<N: SigmaStructure> BindingModel for BindingFromSigma<N> {
    fn signature(&self) -> &Signature {
        self.base.signature()
    }

    fn fhat(&self, f: &str, p: usize, args: &[N::T]) -> Result<N::T, ModelError> {
        self.base.app(f, p, args)
    }

    fn phat(&self, pred: &str, args: &[N::T]) -> Result<bool, ModelError> {
        self.base.pred(pred, args)
    }

    fn domain(&self) -> Domain<N::T> {
        self.base.domain()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleValidation {
    pub rule: String,
    pub checked: usize,
    pub failed: usize,
    pub example: Option<String>,
}

/// Checks that both sides of `samples` random redexes of every σ rule
/// denote the same value, under random assignments of their variables.
pub fn validate_sigma_rules<N: SigmaStructure>(n: &N, samples: usize, seed: u64) -> Vec<RuleValidation> {
    let sig = n.signature();
    let gen = LTermGen::new(sig, 3);
    let binders = |f: &str| sig.function(f).map(|a| a.slots().to_vec());
    SigmaRule::ALL
        .iter()
        .enumerate()
        .map(|(ri, &rule)| {
            let results: Vec<(bool, String)> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((ri as u64) << 40) ^ (i as u64).wrapping_mul(0x9e37_79b9));
                    let size = rng.gen_range(1..=6);
                    let t = gen.redex(&mut rng, rule, size);
                    let Some(u) = rule.apply(&t, &binders) else {
                        return (false, format!("{t}: not a redex"));
                    };
                    let phi: Assignment<N::T> = gen
                        .vars
                        .iter()
                        .map(|x| (x.clone(), n.sample_term(0, &mut rng)))
                        .collect();
                    let ok = match (eval_lterm(n, &t, &phi), eval_lterm(n, &u, &phi)) {
                        (Ok(LValue::Term(a)), Ok(LValue::Term(b))) => n.term_eq(t.level(), &a, &b),
                        (Ok(LValue::Subst(a)), Ok(LValue::Subst(b))) => n.subst_eq(t.level(), t.arity(), &a, &b),
                        _ => false,
                    };
                    (ok, format!("{t} -> {u}"))
                })
                .collect();
            let failed: Vec<&(bool, String)> = results.iter().filter(|(ok, _)| !ok).collect();
            RuleValidation {
                rule: rule.name().to_string(),
                checked: results.len(),
                failed: failed.len(),
                example: failed.first().map(|(_, s)| s.clone()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{eval_term, validity, EvalOptions, ExtModel, Verdict};
    use crate::precook::precook;
    use crate::syntax::parse_term;
    use crate::theories::ext_instance;

    #[test]
    fn sigma_rules_hold_in_the_ext_model() {
        let n = sigma_model_from_binding(ExtModel::new());
        for r in validate_sigma_rules(&n, 200, 1) {
            assert_eq!(r.failed, 0, "{r:?}");
        }
    }

    #[test]
    fn precooking_preserves_denotations() {
        let m = ExtModel::new();
        let n = sigma_model_from_binding(m.clone());
        let sig = m.signature().clone();
        let phi: Assignment<_> = [("y".to_string(), crate::models::ExtElem::L)].into();
        for src in ["Lam(x. f(x))", "Lam(x. Lam(z. f(z)))", "f(Lam(x. Lam(z. f(x))))", "Lam(x. f(y))"] {
            let t = parse_term(&sig, src).unwrap();
            let direct = eval_term(&m, &t, &[], &phi).unwrap();
            let via = eval_lterm(&n, &precook(&sig, &t, &[]), &phi).unwrap().term().unwrap();
            assert_eq!(direct, via, "{src}");
        }
    }

    #[test]
    fn round_trip_keeps_verdicts() {
        let back = binding_model_from_sigma(sigma_model_from_binding(ExtModel::new()));
        let (premise, concl) = ext_instance();
        assert_eq!(validity(&back, &premise, EvalOptions::default()).unwrap().verdict, Verdict::Valid);
        assert_eq!(validity(&back, &concl, EvalOptions::default()).unwrap().verdict, Verdict::Invalid);
    }
}
