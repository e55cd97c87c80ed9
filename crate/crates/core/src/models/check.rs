//! Checking the IFS laws and the coherence of symbol families.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{BindingModel, Ifs, ModelError};

/// Examples kept per law.
const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckMode {
    /// Every tuple of carrier elements; fails on infinite carriers.
    Exhaustive,
    /// `samples` random tuples per level combination.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawStats {
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<Violation>,
}

impl LawStats {
    fn merge(mut self, other: LawStats) -> LawStats {
        self.checked += other.checked;
        self.failed += other.failed;
        for v in other.examples {
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(v);
            }
        }
        self
    }

    fn record(&mut self, law: &str, result: Result<bool, ModelError>, detail: impl FnOnce() -> String) {
        self.checked += 1;
        let detail = match result {
            Ok(true) => return,
            Ok(false) => detail(),
            Err(e) => format!("{}: {e}", detail()),
        };
        self.failed += 1;
        if self.examples.len() < MAX_EXAMPLES {
            self.examples.push(Violation {
                law: law.to_string(),
                detail,
            });
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IfsReport {
    /// `i_n □ <a1..an> = ai`.
    pub projection: LawStats,
    /// `a □ <1_n..n_n> = a`.
    pub identity: LawStats,
    /// `(a □ b) □ c = a □ <bi □ c>`.
    pub associativity: LawStats,
}

impl IfsReport {
    pub fn ok(&self) -> bool {
        self.projection.ok() && self.identity.ok() && self.associativity.ok()
    }

    pub fn checked(&self) -> usize {
        self.projection.checked + self.identity.checked + self.associativity.checked
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoherenceReport {
    pub symbol: String,
    pub coherence: LawStats,
    /// `f̂_p(a) = D_p(f̂_{p+1}(I_{p+1}(a)))` for single-binder symbols,
    /// `p >= 1`.
    pub lift_identity: LawStats,
    /// `f̂_q(b □ <2..q+1>) = b` for single-binder symbols. This is a
    /// property of particular models, not a consequence of coherence.
    pub vacuous_binder: LawStats,
}

impl CoherenceReport {
    /// Coherence and its consequences; the vacuous-binder property is
    /// reported separately.
    pub fn ok(&self) -> bool {
        self.coherence.ok() && self.lift_identity.ok()
    }
}

/// Runs `f` on every tuple of elements at the given levels, or on random
/// tuples when sampling. Exhaustive tuples are decoded from an index so
/// they are never all held at once.
fn run<M: Ifs, F>(m: &M, levels: &[usize], mode: CheckMode, salt: u64, f: F) -> Result<LawStats, ModelError>
where
    F: Fn(&[M::Elem], &mut LawStats) + Sync,
{
    let fold = |mut acc: LawStats, case: &[M::Elem]| {
        f(case, &mut acc);
        acc
    };
    match mode {
        CheckMode::Exhaustive => {
            let carriers = levels
                .iter()
                .map(|&n| m.carrier(n).ok_or(ModelError::InfiniteDomainExhaustionRequested))
                .collect::<Result<Vec<_>, _>>()?;
            let total = carriers.iter().map(Vec::len).product::<usize>();
            Ok((0..total)
                .into_par_iter()
                .fold(LawStats::default, |acc, mut i| {
                    let case: Vec<M::Elem> = carriers
                        .iter()
                        .map(|c| {
                            let e = c[i % c.len()].clone();
                            i /= c.len();
                            e
                        })
                        .collect();
                    fold(acc, &case)
                })
                .reduce(LawStats::default, LawStats::merge))
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let cases: Vec<Vec<M::Elem>> = (0..samples)
                .map(|_| levels.iter().map(|&n| m.sample(n, &mut rng)).collect())
                .collect();
            Ok(cases
                .par_iter()
                .fold(LawStats::default, |acc, case| fold(acc, case))
                .reduce(LawStats::default, LawStats::merge))
        }
    }
}

fn projections<M: Ifs>(m: &M, n: usize, idx: impl IntoIterator<Item = usize>) -> Result<Vec<M::Elem>, ModelError> {
    idx.into_iter().map(|i| m.proj(i, n)).collect()
}

/// Checks the three IFS laws for all `n <= bounds.0`, `p <= bounds.1`,
/// `q <= bounds.2`.
pub fn check_ifs<M: Ifs>(m: &M, bounds: (usize, usize, usize), mode: CheckMode) -> Result<IfsReport, ModelError> {
    let (nb, pb, qb) = bounds;
    let mut report = IfsReport::default();
    for n in 0..=nb {
        for p in 0..=pb {
            let stats = run(m, &vec![p; n], mode, (n * 31 + p) as u64, |bs, acc| {
                for i in 1..=n {
                    let r = m
                        .proj(i, n)
                        .and_then(|pi| m.compose(p, n, &pi, bs))
                        .map(|r| m.elem_eq(p, &r, &bs[i - 1]));
                    acc.record("projection", r, || format!("{i}_{n} with p = {p}, b = {bs:?}"));
                }
            })?;
            report.projection = std::mem::take(&mut report.projection).merge(stats);
        }
        let ids = projections(m, n, 1..=n)?;
        let stats = run(m, &[n], mode, 1000 + n as u64, |a, acc| {
            let r = m.compose(n, n, &a[0], &ids).map(|r| m.elem_eq(n, &r, &a[0]));
            acc.record("identity", r, || format!("a = {:?} in M_{n}", a[0]));
        })?;
        report.identity = std::mem::take(&mut report.identity).merge(stats);
        for p in 0..=pb {
            for q in 0..=qb {
                let mut levels = vec![n];
                levels.extend(std::iter::repeat_n(p, n));
                levels.extend(std::iter::repeat_n(q, p));
                let salt = 2000 + (n * 961 + p * 31 + q) as u64;
                let stats = run(m, &levels, mode, salt, |case, acc| {
                    let (a, rest) = case.split_first().unwrap();
                    let (bs, cs) = rest.split_at(n);
                    let r = (|| {
                        let lhs = m.compose(q, p, &m.compose(p, n, a, bs)?, cs)?;
                        let inner = bs.iter().map(|b| m.compose(q, p, b, cs)).collect::<Result<Vec<_>, _>>()?;
                        let rhs = m.compose(q, n, a, &inner)?;
                        Ok(m.elem_eq(q, &lhs, &rhs))
                    })();
                    acc.record("associativity", r, || {
                        format!("n = {n}, p = {p}, q = {q}, a = {a:?}, b = {bs:?}, c = {cs:?}")
                    });
                })?;
                report.associativity = std::mem::take(&mut report.associativity).merge(stats);
            }
        }
    }
    Ok(report)
}

/// `⇑_{q,k,p}(b) = <1..k, b1 □ S, ..., bp □ S>` at level `q+k`, where
/// `S = <(1+k)..(q+k)>`.
fn lift_tuple<M: Ifs>(m: &M, q: usize, k: usize, bs: &[M::Elem]) -> Result<Vec<M::Elem>, ModelError> {
    let s = projections(m, q + k, k + 1..=q + k)?;
    let mut out = projections(m, q + k, 1..=k)?;
    for b in bs {
        out.push(m.compose(q + k, q, b, &s)?);
    }
    Ok(out)
}

/// Checks `f̂_p(a) □_{q,p} b = f̂_q(ai □ ⇑_{q,ki,p}(b))` for all
/// `p <= bounds.0`, `q <= bounds.1`, plus the derived identities for
/// symbols with a single one-binder argument.
pub fn check_coherence<M: BindingModel>(
    m: &M,
    f: &str,
    bounds: (usize, usize),
    mode: CheckMode,
) -> Result<CoherenceReport, ModelError> {
    let ks = m
        .signature()
        .function(f)
        .ok_or_else(|| ModelError::UnknownSymbol(f.to_string()))?
        .slots()
        .to_vec();
    let (pb, qb) = bounds;
    let salt0 = f.bytes().fold(7u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let mut report = CoherenceReport {
        symbol: f.to_string(),
        ..Default::default()
    };
    for p in 0..=pb {
        for q in 0..=qb {
            let mut levels: Vec<usize> = ks.iter().map(|k| p + k).collect();
            levels.extend(std::iter::repeat_n(q, p));
            let stats = run(m, &levels, mode, salt0 ^ (p * 31 + q) as u64, |case, acc| {
                let (args, bs) = case.split_at(ks.len());
                let r = (|| {
                    let lhs = m.compose(q, p, &m.fhat(f, p, args)?, bs)?;
                    let moved = args
                        .iter()
                        .zip(&ks)
                        .map(|(a, &k)| m.compose(q + k, p + k, a, &lift_tuple(m, q, k, bs)?))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rhs = m.fhat(f, q, &moved)?;
                    Ok(m.elem_eq(q, &lhs, &rhs))
                })();
                acc.record("coherence", r, || format!("p = {p}, q = {q}, a = {args:?}, b = {bs:?}"));
            })?;
            report.coherence = std::mem::take(&mut report.coherence).merge(stats);
        }
    }
    if ks == [1] {
        for p in 1..=pb {
            let stats = run(m, &[p + 1], mode, salt0 ^ (5000 + p) as u64, |a, acc| {
                let a = &a[0];
                let r = (|| {
                    let lhs = m.fhat(f, p, std::slice::from_ref(a))?;
                    let mut i_idx = vec![1];
                    i_idx.extend(3..=p + 2);
                    let lifted = m.compose(p + 2, p + 1, a, &projections(m, p + 2, i_idx)?)?;
                    let inner = m.fhat(f, p + 1, &[lifted])?;
                    let mut d_idx = vec![1];
                    d_idx.extend(1..=p);
                    let rhs = m.compose(p, p + 1, &inner, &projections(m, p, d_idx)?)?;
                    Ok(m.elem_eq(p, &lhs, &rhs))
                })();
                acc.record("lift identity", r, || format!("p = {p}, a = {a:?}"));
            })?;
            report.lift_identity = std::mem::take(&mut report.lift_identity).merge(stats);
        }
        for q in 0..=qb {
            let stats = run(m, &[q], mode, salt0 ^ (7000 + q) as u64, |b, acc| {
                let b = &b[0];
                let r = (|| {
                    let shifted = m.compose(q + 1, q, b, &projections(m, q + 1, 2..=q + 1)?)?;
                    let v = m.fhat(f, q, &[shifted])?;
                    Ok(m.elem_eq(q, &v, b))
                })();
                acc.record("vacuous binder", r, || format!("q = {q}, b = {b:?}"));
            })?;
            report.vacuous_binder = std::mem::take(&mut report.vacuous_binder).merge(stats);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{full_function_ifs, DeltaModel, ExtModel, FullFnModel};
    use crate::theories::ext_signature;

    #[test]
    fn ext_model_is_an_ifs_with_coherent_families() {
        let m = ExtModel::new();
        let r = check_ifs(&m, (2, 2, 2), CheckMode::Exhaustive).unwrap();
        assert!(r.ok(), "{r:?}");
        for f in ["f", "Lam"] {
            let c = check_coherence(&m, f, (2, 2), CheckMode::Exhaustive).unwrap();
            assert!(c.ok() && c.vacuous_binder.ok(), "{c:?}");
        }
    }

    #[test]
    fn full_function_ifs_laws() {
        let r = check_ifs(&full_function_ifs(2), (2, 1, 1), CheckMode::Exhaustive).unwrap();
        assert!(r.ok());
        let m = FullFnModel::new(&ext_signature(), 2);
        let c = check_coherence(&m, "Lam", (1, 1), CheckMode::Exhaustive).unwrap();
        assert!(c.ok(), "{c:?}");
    }

    #[test]
    fn delta_model_sampled() {
        let m = DeltaModel::default();
        assert_eq!(
            check_ifs(&m, (1, 1, 1), CheckMode::Exhaustive),
            Err(ModelError::InfiniteDomainExhaustionRequested)
        );
        let mode = CheckMode::Sampled { samples: 50, seed: 3 };
        assert!(check_ifs(&m, (2, 2, 2), mode).unwrap().ok());
        assert!(check_coherence(&m, "delta", (2, 2), mode).unwrap().ok());
    }

    /// `Lam` sends `1_1` to `l` instead of `k` at level 0.
    struct Skewed(ExtModel);

    impl Ifs for Skewed {
        type Elem = crate::models::ExtElem;
        fn proj(&self, i: usize, n: usize) -> Result<Self::Elem, ModelError> {
            self.0.proj(i, n)
        }
        fn compose(&self, p: usize, n: usize, a: &Self::Elem, bs: &[Self::Elem]) -> Result<Self::Elem, ModelError> {
            self.0.compose(p, n, a, bs)
        }
        fn elem_eq(&self, n: usize, a: &Self::Elem, b: &Self::Elem) -> bool {
            self.0.elem_eq(n, a, b)
        }
        fn carrier(&self, n: usize) -> Option<Vec<Self::Elem>> {
            self.0.carrier(n)
        }
        fn sample<R: rand::Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Self::Elem {
            self.0.sample(n, rng)
        }
        fn show(&self, n: usize, a: &Self::Elem) -> String {
            self.0.show(n, a)
        }
    }

    impl BindingModel for Skewed {
        fn signature(&self) -> &crate::syntax::Signature {
            self.0.signature()
        }
        fn fhat(&self, f: &str, p: usize, args: &[Self::Elem]) -> Result<Self::Elem, ModelError> {
            if f == "Lam" && p == 0 && args == [crate::models::ExtElem::Proj(1)] {
                return Ok(crate::models::ExtElem::L);
            }
            self.0.fhat(f, p, args)
        }
        fn phat(&self, pred: &str, args: &[Self::Elem]) -> Result<bool, ModelError> {
            self.0.phat(pred, args)
        }
        fn domain(&self) -> crate::models::Domain<Self::Elem> {
            self.0.domain()
        }
    }

    #[test]
    fn incoherent_family_is_caught() {
        let m = Skewed(ExtModel::new());
        let c = check_coherence(&m, "Lam", (1, 1), CheckMode::Exhaustive).unwrap();
        assert!(!c.ok());
        assert!(!c.coherence.examples.is_empty());
        assert!(check_coherence(&m, "f", (1, 1), CheckMode::Exhaustive).unwrap().ok());
    }
}
