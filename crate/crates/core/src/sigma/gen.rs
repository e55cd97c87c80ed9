//! Random sort-correct L′ terms.

use rand::seq::SliceRandom;
use rand::Rng;

use super::lterm::LTerm;
use super::rules::SigmaRule;
use crate::syntax::Signature;

/// Generator of sort-correct terms over a signature, with every sort
/// index bounded by `max_level`.
#[derive(Clone, Debug)]
pub struct LTermGen {
    symbols: Vec<(String, Vec<usize>)>,
    pub max_level: usize,
    pub vars: Vec<String>,
}

impl LTermGen {
    pub fn new(sig: &Signature, max_level: usize) -> Self {
        Self {
            symbols: sig
                .functions()
                .map(|(f, a)| (f.to_string(), a.slots().to_vec()))
                .collect(),
            max_level,
            vars: ["x", "y", "z"].map(String::from).to_vec(),
        }
    }

    /// A term of sort `n` of roughly `size` nodes.
    pub fn term<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, size: usize) -> LTerm {
        if size <= 1 {
            return self.leaf(rng, n);
        }
        let apps: Vec<_> = self
            .symbols
            .iter()
            .filter(|(_, ks)| !ks.is_empty() && ks.iter().all(|k| k + n <= self.max_level))
            .collect();
        if !apps.is_empty() && rng.gen_bool(0.5) {
            let (f, ks) = apps.choose(rng).unwrap();
            let parts = split(rng, size - 1, ks.len());
            let args = ks.iter().zip(parts).map(|(k, sz)| self.term(rng, k + n, sz));
            return LTerm::app(f.clone(), n, args);
        }
        let p = rng.gen_range(0..=self.max_level);
        let parts = split(rng, size - 1, 2);
        LTerm::clos(self.term(rng, p, parts[0]), self.subst(rng, n, p, parts[1]))
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> LTerm {
        let consts: Vec<_> = self.symbols.iter().filter(|(_, ks)| ks.is_empty()).collect();
        let pick = rng.gen_range(0..3);
        if n >= 1 && (pick == 0 || consts.is_empty() && pick == 2) {
            LTerm::index(rng.gen_range(1..=n), n)
        } else if pick == 2 && !consts.is_empty() {
            LTerm::app(consts.choose(rng).unwrap().0.clone(), n, [])
        } else {
            let x = LTerm::var(self.vars.choose(rng).unwrap().clone());
            if n == 0 {
                x
            } else {
                LTerm::clos(x, LTerm::shifts(0, n))
            }
        }
    }

    /// A substitution of sort `<n,p>` of roughly `size` nodes.
    pub fn subst<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, p: usize, size: usize) -> LTerm {
        if size <= 1 {
            return self.subst_leaf(rng, n, p);
        }
        let parts = split(rng, size - 1, 2);
        match rng.gen_range(0..3) {
            0 if p >= 1 => LTerm::cons(self.term(rng, n, parts[0]), self.subst(rng, n, p - 1, parts[1])),
            1 => {
                let m = rng.gen_range(0..=self.max_level);
                LTerm::comp(self.subst(rng, m, p, parts[0]), self.subst(rng, n, m, parts[1]))
            }
            _ if p >= 1 && rng.gen_bool(0.5) => {
                LTerm::cons(self.term(rng, n, parts[0]), self.subst(rng, n, p - 1, parts[1]))
            }
            _ => {
                let m = rng.gen_range(0..=self.max_level);
                LTerm::comp(self.subst(rng, m, p, parts[0]), self.subst(rng, n, m, parts[1]))
            }
        }
    }

    fn subst_leaf<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, p: usize) -> LTerm {
        if n == p {
            LTerm::Id(n)
        } else if n > p {
            LTerm::shifts(p, n - p)
        } else {
            LTerm::cons(self.leaf(rng, n), self.subst_leaf(rng, n, p - 1))
        }
    }

    /// A term or substitution, at a random sort, with at most `max_size`
    /// nodes.
    pub fn any<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> LTerm {
        loop {
            let size = rng.gen_range(1..=max_size);
            let t = if rng.gen_bool(0.7) {
                let n = rng.gen_range(0..=self.max_level);
                self.term(rng, n, size)
            } else {
                let n = rng.gen_range(0..=self.max_level);
                let p = rng.gen_range(0..=self.max_level);
                self.subst(rng, n, p, size)
            };
            if t.size() <= max_size {
                return t;
            }
        }
    }

    /// A term whose root is a redex of `rule`, with subterms of roughly
    /// `size` nodes.
    pub fn redex<R: Rng + ?Sized>(&self, rng: &mut R, rule: SigmaRule, size: usize) -> LTerm {
        let ml = self.max_level;
        let lv = |rng: &mut R| rng.gen_range(0..=ml);
        let (a, b, c, d) = (lv(rng), lv(rng), lv(rng), lv(rng));
        match rule {
            SigmaRule::IndexShift => {
                let n = rng.gen_range(2..=ml.max(2));
                LTerm::index(rng.gen_range(2..=n), n)
            }
            SigmaRule::VarCons => LTerm::clos(
                LTerm::index(1, b + 1),
                LTerm::cons(self.term(rng, a, size), self.subst(rng, a, b, size)),
            ),
            SigmaRule::CloId => LTerm::clos(self.term(rng, a, size), LTerm::Id(a)),
            SigmaRule::CloClo => LTerm::clos(
                LTerm::clos(self.term(rng, a, size), self.subst(rng, b, a, size)),
                self.subst(rng, c, b, size),
            ),
            SigmaRule::IdL => LTerm::comp(LTerm::Id(a), self.subst(rng, b, a, size)),
            SigmaRule::ShiftCons => LTerm::comp(
                LTerm::Shift(a),
                LTerm::cons(self.term(rng, b, size), self.subst(rng, b, a, size)),
            ),
            SigmaRule::Assoc => LTerm::comp(
                LTerm::comp(self.subst(rng, b, a, size), self.subst(rng, c, b, size)),
                self.subst(rng, d, c, size),
            ),
            SigmaRule::Map => LTerm::comp(
                LTerm::cons(self.term(rng, b, size), self.subst(rng, b, a, size)),
                self.subst(rng, c, b, size),
            ),
            SigmaRule::IdR => LTerm::comp(self.subst(rng, b, a, size), LTerm::Id(b)),
            SigmaRule::VarShift => LTerm::cons(LTerm::index(1, a + 1), LTerm::Shift(a)),
            SigmaRule::SCons => {
                let s = self.subst(rng, a, b + 1, size);
                LTerm::cons(LTerm::clos(LTerm::index(1, b + 1), s.clone()), LTerm::comp(LTerm::Shift(b), s))
            }
            SigmaRule::FunClo => {
                let (f, ks) = self.symbols.choose(rng).expect("a function symbol").clone();
                let args = ks.iter().map(|k| self.term(rng, a + k, size)).collect::<Vec<_>>();
                LTerm::clos(LTerm::app(f, a, args), self.subst(rng, b, a, size))
            }
        }
    }
}


fn split<R: Rng + ?Sized>(rng: &mut R, total: usize, parts: usize) -> Vec<usize> {
    let mut out = vec![1; parts];
    for _ in parts..total.max(parts) {
        out[rng.gen_range(0..parts)] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::{sort_of, Sort};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_terms_are_sort_correct() {
        let sig = Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun d : <0,1,1>\nfun c : <>").unwrap();
        let g = LTermGen::new(&sig, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(0..=3);
            let t = g.term(&mut rng, n, 12);
            assert_eq!(sort_of(&sig, &t), Ok(Sort::Term(n)), "{t}");
            let s = g.subst(&mut rng, 2, 1, 8);
            assert_eq!(sort_of(&sig, &s), Ok(Sort::Subst(2, 1)), "{s}");
            assert!(g.any(&mut rng, 40).size() <= 40);
        }
        let binders = |f: &str| sig.function(f).map(|a| a.slots().to_vec());
        for rule in SigmaRule::ALL {
            for _ in 0..50 {
                let t = g.redex(&mut rng, rule, 4);
                let sort = sort_of(&sig, &t).unwrap();
                let u = rule.apply(&t, &binders).unwrap_or_else(|| panic!("{rule:?} on {t}"));
                assert_eq!(sort_of(&sig, &u), Ok(sort), "{rule:?}: {t} -> {u}");
            }
        }
    }
}
