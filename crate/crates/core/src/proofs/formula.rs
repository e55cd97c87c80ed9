use std::collections::BTreeSet;
use std::fmt;

use crate::lex::ParseError;
use crate::sigma::{check_prop_sorts, parse_lprop, parse_lsequent, parse_lterm, LProp, LTerm, NormalizeError, RewriteSystem};
use crate::syntax::{parse_prop, parse_sequent, parse_term, Prop, Sequent, Signature, SubstMap, Syntax, Term, ToDeBruijn, WellFormed};

/// Top-level shape of a formula.
pub enum View<'a, F> {
    Atom,
    Imp(&'a F, &'a F),
    And(&'a F, &'a F),
    Or(&'a F, &'a F),
    Bottom,
    Forall(&'a str, &'a F),
    Exists(&'a str, &'a F),
}

/// What the proof checkers need from a proposition language.
pub trait Formula: Clone + fmt::Debug + fmt::Display + Send + Sync {
    type Term: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn view(&self) -> View<'_, Self>;
    fn imp(a: Self, b: Self) -> Self;
    fn and(a: Self, b: Self) -> Self;
    fn or(a: Self, b: Self) -> Self;
    fn forall(x: &str, a: Self) -> Self;
    fn exists(x: &str, a: Self) -> Self;
    fn bottom() -> Self;
    fn is_bottom(&self) -> bool {
        matches!(self.view(), View::Bottom)
    }
    /// Capture-avoiding `(t/x)A`.
    fn subst(&self, x: &str, t: &Self::Term) -> Self;
    fn free_vars(&self) -> BTreeSet<String>;
    fn alpha_eq(&self, other: &Self) -> bool;
    fn check(&self, sig: &Signature) -> Result<(), String>;

    fn parse(sig: &Signature, src: &str) -> Result<Self, ParseError>;
    fn parse_term(sig: &Signature, src: &str) -> Result<Self::Term, ParseError>;
    fn parse_sequent(sig: &Signature, src: &str) -> Result<Sequent<Self>, ParseError>;
}

impl Formula for Prop {
    type Term = Term;

    fn view(&self) -> View<'_, Self> {
        match self {
            Prop::Atom(..) => View::Atom,
            Prop::Imp(a, b) => View::Imp(a, b),
            Prop::And(a, b) => View::And(a, b),
            Prop::Or(a, b) => View::Or(a, b),
            Prop::Bottom => View::Bottom,
            Prop::Forall(x, a) => View::Forall(x, a),
            Prop::Exists(x, a) => View::Exists(x, a),
        }
    }
    fn imp(a: Self, b: Self) -> Self {
        Prop::imp(a, b)
    }
    fn and(a: Self, b: Self) -> Self {
        Prop::and(a, b)
    }
    fn or(a: Self, b: Self) -> Self {
        Prop::or(a, b)
    }
    fn forall(x: &str, a: Self) -> Self {
        Prop::forall(x, a)
    }
    fn exists(x: &str, a: Self) -> Self {
        Prop::exists(x, a)
    }
    fn bottom() -> Self {
        Prop::Bottom
    }
    fn subst(&self, x: &str, t: &Term) -> Self {
        self.substitute(&SubstMap::single(x, t.clone()))
    }
    fn free_vars(&self) -> BTreeSet<String> {
        Syntax::free_vars(self)
    }
    fn alpha_eq(&self, other: &Self) -> bool {
        ToDeBruijn::alpha_eq(self, other)
    }
    fn check(&self, sig: &Signature) -> Result<(), String> {
        self.well_formed(sig).map_err(|e| e.to_string())
    }
    fn parse(sig: &Signature, src: &str) -> Result<Self, ParseError> {
        parse_prop(sig, src)
    }
    fn parse_term(sig: &Signature, src: &str) -> Result<Term, ParseError> {
        parse_term(sig, src)
    }
    fn parse_sequent(sig: &Signature, src: &str) -> Result<Sequent<Self>, ParseError> {
        parse_sequent(sig, src)
    }
}

impl Formula for LProp {
    type Term = LTerm;

    fn view(&self) -> View<'_, Self> {
        match self {
            LProp::Atom(..) => View::Atom,
            LProp::Imp(a, b) => View::Imp(a, b),
            LProp::And(a, b) => View::And(a, b),
            LProp::Or(a, b) => View::Or(a, b),
            LProp::Bottom => View::Bottom,
            LProp::Forall(x, a) => View::Forall(x, a),
            LProp::Exists(x, a) => View::Exists(x, a),
        }
    }
    fn imp(a: Self, b: Self) -> Self {
        LProp::imp(a, b)
    }
    fn and(a: Self, b: Self) -> Self {
        LProp::and(a, b)
    }
    fn or(a: Self, b: Self) -> Self {
        LProp::or(a, b)
    }
    fn forall(x: &str, a: Self) -> Self {
        LProp::forall(x, a)
    }
    fn exists(x: &str, a: Self) -> Self {
        LProp::exists(x, a)
    }
    fn bottom() -> Self {
        LProp::Bottom
    }
    fn subst(&self, x: &str, t: &LTerm) -> Self {
        self.substitute(x, t)
    }
    fn free_vars(&self) -> BTreeSet<String> {
        LProp::free_vars(self)
    }
    fn alpha_eq(&self, other: &Self) -> bool {
        LProp::alpha_eq(self, other)
    }
    fn check(&self, sig: &Signature) -> Result<(), String> {
        check_prop_sorts(sig, self).map_err(|e| e.to_string())
    }
    fn parse(sig: &Signature, src: &str) -> Result<Self, ParseError> {
        parse_lprop(sig, src)
    }
    fn parse_term(sig: &Signature, src: &str) -> Result<LTerm, ParseError> {
        parse_lterm(sig, src)
    }
    fn parse_sequent(sig: &Signature, src: &str) -> Result<Sequent<Self>, ParseError> {
        parse_lsequent(sig, src)
    }
}

/// An equivalence on formulas used by the `if A ≡ B` side conditions.
pub trait Congruence<F>: Send + Sync {
    fn equiv(&self, a: &F, b: &F) -> Result<bool, NormalizeError>;

    /// Free variables up to the congruence; used for eigenvariable
    /// conditions.
    fn free_vars(&self, a: &F) -> Result<BTreeSet<String>, NormalizeError>;
}

/// α-equivalence: the congruence of the plain calculus.
#[derive(Clone, Copy, Debug, Default)]
pub struct Syntactic;

impl<F: Formula> Congruence<F> for Syntactic {
    fn equiv(&self, a: &F, b: &F) -> Result<bool, NormalizeError> {
        Ok(a.alpha_eq(b))
    }
    fn free_vars(&self, a: &F) -> Result<BTreeSet<String>, NormalizeError> {
        Ok(a.free_vars())
    }
}

/// Normalize-then-compare over a rewrite system. On binding-logic
/// propositions both sides are pre-cooked first.
#[derive(Clone, Debug)]
pub struct RewriteCongruence {
    pub system: RewriteSystem,
}

impl RewriteCongruence {
    pub fn new(system: RewriteSystem) -> Self {
        Self { system }
    }

    fn cook(&self, a: &Prop) -> Result<LProp, NormalizeError> {
        self.system
            .normalize_prop(&crate::precook::precook_prop(self.system.signature(), a))
    }
}

impl Congruence<LProp> for RewriteCongruence {
    fn equiv(&self, a: &LProp, b: &LProp) -> Result<bool, NormalizeError> {
        if a == b {
            return Ok(true);
        }
        Ok(self.system.normalize_prop(a)?.alpha_eq(&self.system.normalize_prop(b)?))
    }
    fn free_vars(&self, a: &LProp) -> Result<BTreeSet<String>, NormalizeError> {
        Ok(self.system.normalize_prop(a)?.free_vars())
    }
}

impl Congruence<Prop> for RewriteCongruence {
    fn equiv(&self, a: &Prop, b: &Prop) -> Result<bool, NormalizeError> {
        if a == b {
            return Ok(true);
        }
        Ok(self.cook(a)?.alpha_eq(&self.cook(b)?))
    }
    fn free_vars(&self, a: &Prop) -> Result<BTreeSet<String>, NormalizeError> {
        Ok(self.cook(a)?.free_vars())
    }
}

/// Decides `a ≡ b` by comparing normal forms.
pub fn congruence_closure_check<F, C: Congruence<F> + ?Sized>(cong: &C, a: &F, b: &F) -> Result<bool, NormalizeError> {
    cong.equiv(a, b)
}
