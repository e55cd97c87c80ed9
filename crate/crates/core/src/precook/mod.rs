//! Pre-cooking: from named binders into L′, and back on F-terms.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::sigma::{is_f_prop, is_f_term, LProp, LTerm, NormalizeError, RewriteSystem};
use crate::syntax::{Arg, CounterFresh, FreshNames, Prop, Signature, SubstMap, Syntax, Term};

mod proof;

pub use proof::{translate_proof, TranslateError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum UncookError {
    #[error("not an F-term: {0}")]
    NotAnFTerm(String),
}

fn lookup(l: &[String], x: &str) -> Option<usize> {
    l.iter().position(|y| y == x).map(|i| i + 1)
}

fn go(sig: &Signature, t: &Term, l: &mut Vec<String>, literal: bool) -> LTerm {
    let n = l.len();
    match t {
        Term::Var(x) => match lookup(l, x) {
            Some(i) if literal || i == 1 => LTerm::index(i, n),
            Some(i) => LTerm::shifted_one(i - 1, n),
            None if n == 0 => LTerm::var(x.clone()),
            None => LTerm::clos(LTerm::var(x.clone()), LTerm::shifts(0, n)),
        },
        Term::App(f, args) => {
            let args: Vec<_> = args.iter().map(|a| go_arg(sig, a, l, literal)).collect();
            LTerm::app(f.clone(), n, args)
        }
    }
}

fn go_arg(sig: &Signature, a: &Arg, l: &mut Vec<String>, literal: bool) -> LTerm {
    let mark = a.binders.len();
    for y in &a.binders {
        l.insert(0, y.clone());
    }
    let out = go(sig, &a.body, l, literal);
    l.drain(..mark);
    out
}

/// Translates `t` in the context `l` (innermost variable first) into an
/// F-term of sort `|l|`. Bound variables other than the innermost are
/// emitted in σ-normal form `1[up^j]`.
pub fn precook(sig: &Signature, t: &Term, l: &[String]) -> LTerm {
    go(sig, t, &mut l.to_vec(), false)
}

/// As [`precook`] but with bound variables as plain indices `n_|l|`; the
/// σ-normal form of the result is [`precook`]'s output.
pub fn precook_literal(sig: &Signature, t: &Term, l: &[String]) -> LTerm {
    go(sig, t, &mut l.to_vec(), true)
}

fn prop_go(sig: &Signature, a: &Prop, literal: bool) -> LProp {
    match a {
        Prop::Atom(p, args) => LProp::Atom(
            p.clone(),
            args.iter().map(|arg| go_arg(sig, arg, &mut Vec::new(), literal)).collect(),
        ),
        Prop::Imp(a, b) => LProp::imp(prop_go(sig, a, literal), prop_go(sig, b, literal)),
        Prop::And(a, b) => LProp::and(prop_go(sig, a, literal), prop_go(sig, b, literal)),
        Prop::Or(a, b) => LProp::or(prop_go(sig, a, literal), prop_go(sig, b, literal)),
        Prop::Bottom => LProp::Bottom,
        Prop::Forall(x, a) => LProp::forall(x.clone(), prop_go(sig, a, literal)),
        Prop::Exists(x, a) => LProp::exists(x.clone(), prop_go(sig, a, literal)),
    }
}

pub fn precook_prop(sig: &Signature, a: &Prop) -> LProp {
    prop_go(sig, a, false)
}

pub fn precook_prop_literal(sig: &Signature, a: &Prop) -> LProp {
    prop_go(sig, a, true)
}

struct Uncooker<'a> {
    sig: &'a Signature,
    avoid: BTreeSet<String>,
    fresh: CounterFresh,
}

impl Uncooker<'_> {
    fn not_f(&self, t: &LTerm) -> UncookError {
        UncookError::NotAnFTerm(t.to_string())
    }

    /// `ctx` holds the names for the indices, innermost first.
    fn term(&mut self, t: &LTerm, ctx: &[String]) -> Result<Term, UncookError> {
        let n = ctx.len();
        match t {
            LTerm::Var(x) if n == 0 => Ok(Term::var(x.clone())),
            LTerm::Index { i: 1, n: m } if *m == n => Ok(Term::var(ctx[0].clone())),
            LTerm::Clos(a, s) => match &**a {
                LTerm::Var(x) if **s == LTerm::shifts(0, n) && n > 0 => Ok(Term::var(x.clone())),
                LTerm::Index { i: 1, n: m } if *m < n && **s == LTerm::shifts(*m, n - m) => {
                    Ok(Term::var(ctx[n - m].clone()))
                }
                _ => Err(self.not_f(t)),
            },
            LTerm::App { f, p, args } if *p == n => {
                let slots: Vec<usize> = match self.sig.function(f) {
                    Some(a) if a.len() == args.len() => a.slots().to_vec(),
                    Some(_) => return Err(self.not_f(t)),
                    None => args.iter().map(|a| a.level().saturating_sub(n)).collect(),
                };
                let args = args
                    .iter()
                    .zip(slots)
                    .map(|(a, k)| self.arg(a, k, ctx))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app(f.clone(), args))
            }
            _ => Err(self.not_f(t)),
        }
    }

    fn arg(&mut self, a: &LTerm, k: usize, ctx: &[String]) -> Result<Arg, UncookError> {
        let binders: Vec<String> = (0..k).map(|_| self.fresh.fresh("x", &mut self.avoid)).collect();
        let mut inner: Vec<String> = binders.iter().rev().cloned().collect();
        inner.extend_from_slice(ctx);
        Ok(Arg::bind(binders, self.term(a, &inner)?))
    }

    fn prop(&mut self, a: &LProp) -> Result<Prop, UncookError> {
        Ok(match a {
            LProp::Atom(p, args) => {
                let slots: Vec<usize> = match self.sig.predicate(p) {
                    Some(ar) if ar.len() == args.len() => ar.slots().to_vec(),
                    _ => args.iter().map(LTerm::level).collect(),
                };
                let args = args
                    .iter()
                    .zip(slots)
                    .map(|(t, k)| self.arg(t, k, &[]))
                    .collect::<Result<Vec<_>, _>>()?;
                Prop::Atom(p.clone(), args)
            }
            LProp::Imp(a, b) => Prop::imp(self.prop(a)?, self.prop(b)?),
            LProp::And(a, b) => Prop::and(self.prop(a)?, self.prop(b)?),
            LProp::Or(a, b) => Prop::or(self.prop(a)?, self.prop(b)?),
            LProp::Bottom => Prop::Bottom,
            LProp::Forall(x, a) => Prop::forall(x.clone(), self.prop(a)?),
            LProp::Exists(x, a) => Prop::exists(x.clone(), self.prop(a)?),
        })
    }
}

/// Inverse of [`precook`] on sort-0 F-terms; binders get fresh names.
pub fn uncook(sig: &Signature, t: &LTerm) -> Result<Term, UncookError> {
    if !is_f_term(t) {
        return Err(UncookError::NotAnFTerm(t.to_string()));
    }
    Uncooker {
        sig,
        avoid: t.vars(),
        fresh: CounterFresh::default(),
    }
    .term(t, &[])
}

pub fn uncook_prop(sig: &Signature, a: &LProp) -> Result<Prop, UncookError> {
    if !is_f_prop(a) {
        return Err(UncookError::NotAnFTerm(a.to_string()));
    }
    Uncooker {
        sig,
        avoid: a.names(),
        fresh: CounterFresh::default(),
    }
    .prop(a)
}

/// `((t/x)u)′` and `<t′/x>u′` have the same σ-normal form.
pub fn subst_commutes_term(rs: &RewriteSystem, t: &Term, u: &Term, x: &str) -> Result<bool, NormalizeError> {
    let sig = rs.signature();
    let lhs = precook(sig, &u.substitute(&SubstMap::single(x, t.clone())), &[]);
    let rhs = precook(sig, u, &[]).graft(x, &precook(sig, t, &[]));
    Ok(rs.normalize(&lhs)? == rs.normalize(&rhs)?)
}

/// `((t/x)A)′` and `(t′/x)A′` have α-equal σ-normal forms.
pub fn subst_commutes(rs: &RewriteSystem, t: &Term, a: &Prop, x: &str) -> Result<bool, NormalizeError> {
    let sig = rs.signature();
    let lhs = precook_prop(sig, &a.substitute(&SubstMap::single(x, t.clone())));
    let rhs = precook_prop(sig, a).substitute(x, &precook(sig, t, &[]));
    Ok(rs.normalize_prop(&lhs)?.alpha_eq(&rs.normalize_prop(&rhs)?))
}

/// A theory modulo: translated axioms and the σ congruence.
#[derive(Clone, Debug)]
pub struct TheoryModulo {
    pub axioms: Vec<LProp>,
    pub congruence: RewriteSystem,
}

pub fn translate_theory(sig: &Signature, axioms: &[Prop]) -> TheoryModulo {
    TheoryModulo {
        axioms: axioms.iter().map(|a| precook_prop(sig, a)).collect(),
        congruence: RewriteSystem::sigma(sig),
    }
}

/// Instances of an axiom scheme: the scheme variable is grafted (captures
/// intended) with each instance term.
pub fn expand_scheme(scheme: &Prop, var: &str, instances: &[Term]) -> Vec<Prop> {
    instances
        .iter()
        .map(|t| scheme.graft(&SubstMap::single(var, t.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::{sort_of, Sort};
    use crate::syntax::{parse_prop, parse_term, ToDeBruijn};

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun g : <0>\nfun lam : <1>\nfun app : <0,0>\npred = : <0,0>")
            .unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn worked_example() {
        let s = sig();
        let a = parse_prop(&s, "forall x. forall y. f(x, y) = Lam(z. f(x, z))").unwrap();
        let out = precook_prop(&s, &a);
        assert_eq!(out.to_string(), "forall x. forall y. f_0(x, y) = Lam_0(f_1(x[up_0], 1_1))");
        let LProp::Forall(_, b) = &out else { panic!() };
        let LProp::Forall(_, c) = &**b else { panic!() };
        let LProp::Atom(_, args) = &**c else { panic!() };
        assert_eq!(sort_of(&s, &args[1]), Ok(Sort::Term(0)));
    }

    #[test]
    fn variable_clauses() {
        let s = sig();
        let x = Term::var("x");
        assert_eq!(precook(&s, &x, &names(&["x"])), LTerm::index(1, 1));
        assert_eq!(precook(&s, &x, &names(&["y", "z"])).to_string(), "x[up_0 o up_1]");
        assert_eq!(precook_literal(&s, &x, &names(&["y", "z", "x", "x"])), LTerm::index(3, 4));
        let nf = RewriteSystem::sigma(&s).normalize(&LTerm::index(3, 4)).unwrap();
        assert_eq!(precook(&s, &x, &names(&["y", "z", "x", "x"])), nf);
    }

    #[test]
    fn rightmost_binder_is_innermost() {
        let s = Signature::parse("fun h : <2>").unwrap();
        let t = parse_term(&s, "h(a b. a)").unwrap();
        assert_eq!(precook(&s, &t, &[]).to_string(), "h_0(1_1[up_1])");
    }

    #[test]
    fn uncook_inverts() {
        let s = sig();
        let t = parse_term(&s, "Lam(z. f(x, z))").unwrap();
        let c = precook(&s, &t, &[]);
        let back = uncook(&s, &c).unwrap();
        assert!(back.alpha_eq(&t));
        assert_eq!(precook(&s, &back, &[]), c);
        assert_eq!(uncook(&s, &LTerm::var("x")), Ok(Term::var("x")));
        assert!(uncook(&s, &LTerm::index(2, 2)).is_err());
        assert!(uncook(&s, &LTerm::clos(LTerm::index(1, 1), LTerm::cons(LTerm::var("t"), LTerm::Id(0)))).is_err());
    }

    #[test]
    fn substitution_under_binder() {
        let s = sig();
        let rs = RewriteSystem::sigma(&s);
        let u = parse_term(&s, "Lam(z. x)").unwrap();
        let t = parse_term(&s, "g(z)").unwrap();
        assert!(subst_commutes_term(&rs, &t, &u, "x").unwrap());
        let a = parse_prop(&s, "forall z. Lam(y. f(x, y)) = x").unwrap();
        assert!(subst_commutes(&rs, &t, &a, "x").unwrap());
    }

    #[test]
    fn beta_instance() {
        let s = sig();
        let scheme = parse_prop(&s, "forall x. app(lam(x. t), x) = t").unwrap();
        let inst = expand_scheme(&scheme, "t", &[Term::var("x")]);
        let th = translate_theory(&s, &inst);
        assert_eq!(th.axioms[0].to_string(), "forall x. app_0(lam_0(1_1), x) = x");
        assert!(translate_theory(&s, &[]).axioms.is_empty());
    }
}
