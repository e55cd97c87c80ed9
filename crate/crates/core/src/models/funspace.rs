//! Models whose `M_n` are functions `A^n -> A`: the full function IFS over
//! a finite set, and the computable model over the naturals used for the
//! disjoint-sum scheme.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BindingModel, Domain, Ifs, ModelError};
use crate::syntax::Signature;
use crate::theories::delta_signature;

/// Largest carrier the full function IFS enumerates.
const MAX_CARRIER: usize = 1 << 20;

/// A function `A^n -> A` over `A = {0, ..., size-1}`, as a value table.
/// The tuple `(x1, ..., xn)` sits at `x1 + x2*size + ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    pub arity: usize,
    pub values: Arc<[u8]>,
}

impl Table {
    pub fn get(&self, size: usize, xs: &[u8]) -> u8 {
        let mut i = 0;
        for &x in xs.iter().rev() {
            i = i * size + x as usize;
        }
        self.values[i]
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for v in self.values.iter() {
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

fn tuples(size: usize, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let count = size.pow(n as u32);
    (0..count).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = (i % size) as u8;
                i /= size;
                d
            })
            .collect()
    })
}

/// The IFS of all functions `A^n -> A` over a finite `A`.
#[derive(Clone, Debug)]
pub struct FullFnIfs {
    pub size: usize,
}

pub fn full_function_ifs(size: usize) -> FullFnIfs {
    assert!((1..=255).contains(&size), "carrier size must be between 1 and 255");
    FullFnIfs { size }
}

impl FullFnIfs {
    pub fn tabulate(&self, n: usize, f: impl Fn(&[u8]) -> u8) -> Table {
        Table {
            arity: n,
            values: tuples(self.size, n).map(|xs| f(&xs)).collect(),
        }
    }

    fn carrier_len(&self, n: usize) -> Option<usize> {
        let cells = self.size.checked_pow(n as u32)?;
        let len = self.size.checked_pow(u32::try_from(cells).ok()?)?;
        (len <= MAX_CARRIER).then_some(len)
    }

    /// The sub-table of `a` in `M_{k+p}` with the last `p` arguments fixed.
    fn section(&self, a: &Table, k: usize, fixed: &[u8]) -> Table {
        self.tabulate(k, |ys| {
            let mut xs = ys.to_vec();
            xs.extend_from_slice(fixed);
            a.get(self.size, &xs)
        })
    }
}

impl Ifs for FullFnIfs {
    type Elem = Table;

    fn proj(&self, i: usize, n: usize) -> Result<Table, ModelError> {
        if i == 0 || i > n {
            return Err(ModelError::Undefined(format!("no projection {i}_{n}")));
        }
        Ok(self.tabulate(n, |xs| xs[i - 1]))
    }

    fn compose(&self, p: usize, n: usize, a: &Table, bs: &[Table]) -> Result<Table, ModelError> {
        if bs.len() != n || a.arity != n || bs.iter().any(|b| b.arity != p) {
            return Err(ModelError::Undefined("composition with mismatched arities".into()));
        }
        Ok(self.tabulate(p, |xs| {
            let ys: Vec<u8> = bs.iter().map(|b| b.get(self.size, xs)).collect();
            a.get(self.size, &ys)
        }))
    }

    fn elem_eq(&self, _n: usize, a: &Table, b: &Table) -> bool {
        a == b
    }

    fn carrier(&self, n: usize) -> Option<Vec<Table>> {
        let len = self.carrier_len(n)?;
        let cells = self.size.pow(n as u32);
        Some(
            (0..len)
                .map(|mut i| {
                    let values: Arc<[u8]> = (0..cells)
                        .map(|_| {
                            let d = (i % self.size) as u8;
                            i /= self.size;
                            d
                        })
                        .collect();
                    Table { arity: n, values }
                })
                .collect(),
        )
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Table {
        let cells = self.size.pow(n as u32);
        Table {
            arity: n,
            values: (0..cells).map(|_| rng.gen_range(0..self.size) as u8).collect(),
        }
    }

    fn show(&self, n: usize, a: &Table) -> String {
        if n == 0 {
            a.values[0].to_string()
        } else {
            format!("{a:?}")
        }
    }
}

/// Interpretation of a symbol in a function-space model: it receives, for
/// each argument, the function of its bound variables.
pub type TableOp = Arc<dyn Fn(&[Table]) -> u8 + Send + Sync>;
pub type TablePred = Arc<dyn Fn(&[Table]) -> bool + Send + Sync>;

/// A binding model over [`FullFnIfs`]. A symbol with arity
/// `<k1, ..., kn>` is given by an operation on functions `A^ki -> A` and
/// lifted pointwise in the free positions, which makes every family
/// coherent.
#[derive(Clone)]
pub struct FullFnModel {
    pub ifs: FullFnIfs,
    sig: Signature,
    ops: BTreeMap<String, TableOp>,
    preds: BTreeMap<String, TablePred>,
}

impl fmt::Debug for FullFnModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FullFnModel")
            .field("size", &self.ifs.size)
            .field("symbols", &self.ops.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl FullFnModel {
    /// Every function symbol sums all values of its arguments modulo the
    /// carrier size; `=` is equality and other predicates hold when the sum
    /// is even.
    pub fn new(sig: &Signature, size: usize) -> Self {
        let ifs = full_function_ifs(size);
        let mut m = Self {
            ifs,
            sig: sig.clone(),
            ops: BTreeMap::new(),
            preds: BTreeMap::new(),
        };
        let total = |args: &[Table]| -> usize { args.iter().flat_map(|t| t.values.iter()).map(|&v| v as usize).sum() };
        for (f, _) in sig.functions() {
            m.ops
                .insert(f.to_string(), Arc::new(move |args: &[Table]| (total(args) % size) as u8));
        }
        for (p, _) in sig.predicates() {
            if p == "=" {
                m.preds.insert(p.to_string(), Arc::new(|args: &[Table]| args[0] == args[1]));
            } else {
                m.preds
                    .insert(p.to_string(), Arc::new(move |args: &[Table]| total(args) % 2 == 0));
            }
        }
        m
    }

    pub fn with_op(mut self, f: &str, op: impl Fn(&[Table]) -> u8 + Send + Sync + 'static) -> Self {
        self.ops.insert(f.to_string(), Arc::new(op));
        self
    }
}

impl Ifs for FullFnModel {
    type Elem = Table;

    fn proj(&self, i: usize, n: usize) -> Result<Table, ModelError> {
        self.ifs.proj(i, n)
    }
    fn compose(&self, p: usize, n: usize, a: &Table, bs: &[Table]) -> Result<Table, ModelError> {
        self.ifs.compose(p, n, a, bs)
    }
    fn elem_eq(&self, n: usize, a: &Table, b: &Table) -> bool {
        self.ifs.elem_eq(n, a, b)
    }
    fn carrier(&self, n: usize) -> Option<Vec<Table>> {
        self.ifs.carrier(n)
    }
    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Table {
        self.ifs.sample(n, rng)
    }
    fn show(&self, n: usize, a: &Table) -> String {
        self.ifs.show(n, a)
    }
}

impl BindingModel for FullFnModel {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn fhat(&self, f: &str, p: usize, args: &[Table]) -> Result<Table, ModelError> {
        let op = self.ops.get(f).ok_or_else(|| ModelError::UnknownSymbol(f.to_string()))?;
        let ks = self
            .sig
            .function(f)
            .ok_or_else(|| ModelError::UnknownSymbol(f.to_string()))?
            .slots()
            .to_vec();
        if ks.len() != args.len() || ks.iter().zip(args).any(|(k, a)| a.arity != k + p) {
            return Err(ModelError::Undefined(format!("{f}_{p} applied to arguments of the wrong level")));
        }
        Ok(self.ifs.tabulate(p, |xs| {
            let sections: Vec<Table> = ks.iter().zip(args).map(|(&k, a)| self.ifs.section(a, k, xs)).collect();
            op(&sections)
        }))
    }

    fn phat(&self, pred: &str, args: &[Table]) -> Result<bool, ModelError> {
        let op = self.preds.get(pred).ok_or_else(|| ModelError::UnknownSymbol(pred.to_string()))?;
        Ok(op(args))
    }

    fn domain(&self) -> Domain<Table> {
        Domain::Finite(self.ifs.carrier(0).unwrap())
    }
}

type NatOp = Arc<dyn Fn(&[u64]) -> u64 + Send + Sync>;

/// A computable function `N^n -> N`.
#[derive(Clone)]
pub struct NatFn {
    pub arity: usize,
    f: NatOp,
}

impl NatFn {
    pub fn new(arity: usize, f: impl Fn(&[u64]) -> u64 + Send + Sync + 'static) -> Self {
        Self { arity, f: Arc::new(f) }
    }

    pub fn constant(arity: usize, c: u64) -> Self {
        Self::new(arity, move |_| c)
    }

    pub fn call(&self, xs: &[u64]) -> u64 {
        (self.f)(xs)
    }

    /// The value of a nullary function.
    pub fn value(&self) -> u64 {
        self.call(&[])
    }
}

impl fmt::Debug for NatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 0 {
            write!(f, "{}", self.value())
        } else {
            write!(f, "<fn N^{} -> N>", self.arity)
        }
    }
}

/// Arguments `0..DEFAULT_PROBE_RANGE` are probed exhaustively for
/// functions of arity at most 2.
pub const DEFAULT_PROBE_RANGE: u64 = 24;

/// Which encoding of the injections the model uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DeltaVariant {
    /// `î(x) = 2x+2`, `ĵ(x) = 2x+3`; 0 and 1 are outside both images.
    #[default]
    Repaired,
    /// `î(x) = 2x`, `ĵ(x) = 2x+1` with `δ̂` sending 0 and 1 to 0, so
    /// `i(0)` is not decoded.
    Literal,
}

/// Functions over the naturals interpreting `i`, `j`, `delta` and `a`.
#[derive(Clone, Debug)]
pub struct DeltaModel {
    pub variant: DeltaVariant,
    /// Quantifiers range over `0..samples`.
    pub samples: u64,
    sig: Signature,
}

impl Default for DeltaModel {
    fn default() -> Self {
        Self::new(DeltaVariant::Repaired)
    }
}

impl DeltaModel {
    pub fn new(variant: DeltaVariant) -> Self {
        Self {
            variant,
            samples: 32,
            sig: delta_signature(),
        }
    }

    pub fn i0(&self, x: u64) -> u64 {
        match self.variant {
            DeltaVariant::Repaired => x.saturating_mul(2).saturating_add(2),
            DeltaVariant::Literal => x.saturating_mul(2),
        }
    }

    pub fn j0(&self, x: u64) -> u64 {
        match self.variant {
            DeltaVariant::Repaired => x.saturating_mul(2).saturating_add(3),
            DeltaVariant::Literal => x.saturating_mul(2).saturating_add(1),
        }
    }

    /// `δ̂_0(d, f, g)`.
    pub fn delta0(variant: DeltaVariant, d: u64, f: impl Fn(u64) -> u64, g: impl Fn(u64) -> u64) -> u64 {
        match variant {
            DeltaVariant::Repaired if d <= 1 => 0,
            DeltaVariant::Repaired if d.is_multiple_of(2) => f((d - 2) / 2),
            DeltaVariant::Repaired => g((d - 3) / 2),
            DeltaVariant::Literal if d <= 1 => 0,
            DeltaVariant::Literal if d.is_multiple_of(2) => f(d / 2),
            DeltaVariant::Literal => g((d - 1) / 2),
        }
    }

    fn probes(n: usize) -> Vec<Vec<u64>> {
        if n <= 2 {
            let r = DEFAULT_PROBE_RANGE;
            return match n {
                0 => vec![vec![]],
                1 => (0..r).map(|x| vec![x]).collect(),
                _ => (0..r).flat_map(|x| (0..r).map(move |y| vec![x, y])).collect(),
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut out: Vec<Vec<u64>> = (0..1u64 << n.min(8)).map(|m| (0..n).map(|i| (m >> i) & 1).collect()).collect();
        out.extend((0..512).map(|_| (0..n).map(|_| rng.gen_range(0..64)).collect()));
        out
    }
}

impl Ifs for DeltaModel {
    type Elem = NatFn;

    fn proj(&self, i: usize, n: usize) -> Result<NatFn, ModelError> {
        if i == 0 || i > n {
            return Err(ModelError::Undefined(format!("no projection {i}_{n}")));
        }
        Ok(NatFn::new(n, move |xs| xs[i - 1]))
    }

    fn compose(&self, p: usize, n: usize, a: &NatFn, bs: &[NatFn]) -> Result<NatFn, ModelError> {
        if bs.len() != n || a.arity != n || bs.iter().any(|b| b.arity != p) {
            return Err(ModelError::Undefined("composition with mismatched arities".into()));
        }
        let (a, bs) = (a.clone(), bs.to_vec());
        Ok(NatFn::new(p, move |xs| {
            let ys: Vec<u64> = bs.iter().map(|b| b.call(xs)).collect();
            a.call(&ys)
        }))
    }

    /// Agreement on a fixed probe set.
    fn elem_eq(&self, n: usize, a: &NatFn, b: &NatFn) -> bool {
        Self::probes(n).iter().all(|xs| a.call(xs) == b.call(xs))
    }

    fn carrier(&self, _n: usize) -> Option<Vec<NatFn>> {
        None
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> NatFn {
        let c = rng.gen_range(0..8u64);
        if n == 0 {
            return NatFn::constant(0, rng.gen_range(0..40));
        }
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        match rng.gen_range(0..6) {
            0 => NatFn::constant(n, c),
            1 => NatFn::new(n, move |xs| xs[i]),
            2 => NatFn::new(n, move |xs| xs[i].saturating_add(c)),
            3 => NatFn::new(n, move |xs| xs[i].saturating_mul(2).saturating_add(c)),
            4 => NatFn::new(n, move |xs| xs[i].saturating_add(xs[j])),
            _ => NatFn::new(n, move |xs| if xs[i] % 2 == 0 { xs[j] } else { c }),
        }
    }

    fn show(&self, n: usize, a: &NatFn) -> String {
        if n == 0 {
            a.value().to_string()
        } else {
            format!("{a:?}")
        }
    }

    fn exact_equality(&self) -> bool {
        false
    }
}

impl BindingModel for DeltaModel {
    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn fhat(&self, f: &str, p: usize, args: &[NatFn]) -> Result<NatFn, ModelError> {
        let bad = || ModelError::Undefined(format!("{f}_{p} applied to arguments of the wrong level"));
        match (f, args) {
            ("a", []) => Ok(NatFn::constant(p, 1)),
            ("i" | "j", [x]) if x.arity == p => {
                let (x, m) = (x.clone(), self.clone());
                Ok(if f == "i" {
                    NatFn::new(p, move |xs| m.i0(x.call(xs)))
                } else {
                    NatFn::new(p, move |xs| m.j0(x.call(xs)))
                })
            }
            ("delta", [d, u, v]) if d.arity == p && u.arity == p + 1 && v.arity == p + 1 => {
                let (d, u, v, variant) = (d.clone(), u.clone(), v.clone(), self.variant);
                Ok(NatFn::new(p, move |xs| {
                    let with = |h: &NatFn, y: u64| {
                        let mut ys = Vec::with_capacity(xs.len() + 1);
                        ys.push(y);
                        ys.extend_from_slice(xs);
                        h.call(&ys)
                    };
                    DeltaModel::delta0(variant, d.call(xs), |y| with(&u, y), |y| with(&v, y))
                }))
            }
            ("a" | "i" | "j" | "delta", _) => Err(bad()),
            _ => Err(ModelError::UnknownSymbol(f.to_string())),
        }
    }

    fn phat(&self, pred: &str, args: &[NatFn]) -> Result<bool, ModelError> {
        match (pred, args) {
            ("=", [a, b]) => Ok(self.elem_eq(a.arity, a, b)),
            _ => Err(ModelError::UnknownSymbol(pred.to_string())),
        }
    }

    fn domain(&self) -> Domain<NatFn> {
        Domain::Sampled((0..self.samples).map(|c| NatFn::constant(0, c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::eval_term;
    use crate::syntax::parse_term;

    fn value(m: &DeltaModel, src: &str, phi: &[(&str, u64)]) -> u64 {
        let t = parse_term(m.signature(), src).unwrap();
        let phi = phi.iter().map(|(x, v)| (x.to_string(), NatFn::constant(0, *v))).collect();
        eval_term(m, &t, &[], &phi).unwrap().value()
    }

    #[test]
    fn delta_denotations() {
        let m = DeltaModel::default();
        assert_eq!(value(&m, "delta(a, x. a, y. a)", &[]), 0);
        assert_eq!(value(&m, "a", &[]), 1);
        assert_eq!(value(&m, "delta(i(x), x. j(x), y. a)", &[("x", 5)]), m.j0(5));
        assert_eq!(value(&m, "delta(j(x), x. a, y. i(y))", &[("x", 0)]), m.i0(0));
    }

    #[test]
    fn literal_variant_loses_zero() {
        let m = DeltaModel::new(DeltaVariant::Literal);
        assert_eq!(value(&m, "delta(i(x), x. x, y. a)", &[("x", 0)]), 0);
        assert_eq!(value(&m, "delta(i(x), x. x, y. a)", &[("x", 3)]), 3);
        for k in 1..20 {
            assert_eq!(DeltaModel::delta0(DeltaVariant::Literal, 2 * k, |y| y + 100, |_| 7), k + 100);
        }
    }

    #[test]
    fn full_function_tables() {
        let ifs = full_function_ifs(2);
        assert_eq!(ifs.carrier(0).unwrap().len(), 2);
        assert_eq!(ifs.carrier(2).unwrap().len(), 16);
        let p2 = ifs.proj(2, 2).unwrap();
        assert_eq!(p2.get(2, &[0, 1]), 1);
        let p1 = ifs.proj(1, 1).unwrap();
        let swapped = ifs.compose(2, 2, &p2, &[p1.clone(), p1]).is_err();
        assert!(swapped);
    }
}
