//! Random well-formed terms and propositions.

use rand::seq::SliceRandom;
use rand::Rng;

use super::signature::Signature;
use super::term::{Arg, Prop, Term};

/// Draws names from a small pool so that shadowing and capture are
/// frequent.
#[derive(Clone, Debug)]
pub struct TermGen {
    functions: Vec<(String, Vec<usize>)>,
    predicates: Vec<(String, Vec<usize>)>,
    pub names: Vec<String>,
}

impl TermGen {
    pub fn new(sig: &Signature) -> Self {
        Self {
            functions: sig.functions().map(|(f, a)| (f.to_string(), a.slots().to_vec())).collect(),
            predicates: sig.predicates().map(|(p, a)| (p.to_string(), a.slots().to_vec())).collect(),
            names: ["x", "y", "z", "u", "v"].map(String::from).to_vec(),
        }
    }

    fn name<R: Rng + ?Sized>(&self, rng: &mut R) -> String {
        self.names.choose(rng).unwrap().clone()
    }

    fn arg<R: Rng + ?Sized>(&self, rng: &mut R, k: usize, size: usize) -> Arg {
        let mut binders: Vec<String> = self.names.choose_multiple(rng, k).cloned().collect();
        binders.extend((binders.len()..k).map(|i| format!("w{i}")));
        Arg::bind(binders, self.term(rng, size))
    }

    /// A term of roughly `size` symbols.
    pub fn term<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> Term {
        let consts: Vec<_> = self.functions.iter().filter(|(_, ks)| ks.is_empty()).collect();
        let apps: Vec<_> = self.functions.iter().filter(|(_, ks)| !ks.is_empty()).collect();
        if size <= 1 || apps.is_empty() {
            return match consts.choose(rng) {
                Some((c, _)) if rng.gen_bool(0.25) => Term::constant(c.clone()),
                _ => Term::var(self.name(rng)),
            };
        }
        let (f, ks) = apps.choose(rng).unwrap();
        let parts = split(rng, size - 1, ks.len());
        Term::app(f.clone(), ks.iter().zip(parts).map(|(&k, s)| self.arg(rng, k, s)))
    }

    /// A proposition of roughly `size` symbols.
    pub fn prop<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> Prop {
        if size <= 2 || self.predicates.is_empty() || rng.gen_bool(0.3) {
            let Some((p, ks)) = self.predicates.choose(rng) else {
                return Prop::Bottom;
            };
            let parts = split(rng, size.max(1), ks.len().max(1));
            return Prop::atom(p.clone(), ks.iter().zip(parts).map(|(&k, s)| self.arg(rng, k, s)));
        }
        match rng.gen_range(0..5) {
            0 => Prop::forall(self.name(rng), self.prop(rng, size - 1)),
            1 => Prop::exists(self.name(rng), self.prop(rng, size - 1)),
            c => {
                let parts = split(rng, size - 1, 2);
                let (a, b) = (self.prop(rng, parts[0]), self.prop(rng, parts[1]));
                match c {
                    2 => Prop::imp(a, b),
                    3 => Prop::and(a, b),
                    _ => Prop::or(a, b),
                }
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
    use crate::syntax::WellFormed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_syntax_is_well_formed() {
        let sig = Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun d : <0,1,2>\nfun c : <>\npred = : <0,0>\npred B : <1>")
            .unwrap();
        let g = TermGen::new(&sig);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            g.term(&mut rng, 10).well_formed(&sig).unwrap();
            g.prop(&mut rng, 10).well_formed(&sig).unwrap();
        }
    }
}
