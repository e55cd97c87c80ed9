use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One argument slot of a symbol: the variables it binds and its body.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arg {
    pub binders: Vec<String>,
    pub body: Term,
}

impl Arg {
    pub fn plain(body: Term) -> Self {
        Self {
            binders: Vec::new(),
            body,
        }
    }

    pub fn bind<S: Into<String>>(binders: impl IntoIterator<Item = S>, body: Term) -> Self {
        Self {
            binders: binders.into_iter().map(Into::into).collect(),
            body,
        }
    }
}

impl From<Term> for Arg {
    fn from(body: Term) -> Self {
        Arg::plain(body)
    }
}

/// A binding-logic term with named variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Arg>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: impl IntoIterator<Item = Arg>) -> Self {
        Term::App(symbol.into(), args.into_iter().collect())
    }

    pub fn constant(symbol: impl Into<String>) -> Self {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(|a| a.body.size()).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(|a| a.body.depth()).max().unwrap_or(0),
        }
    }
}

/// A binding-logic proposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Atom(String, Vec<Arg>),
    Imp(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Bottom,
    Forall(String, Box<Prop>),
    Exists(String, Box<Prop>),
}

impl Prop {
    pub fn atom(pred: impl Into<String>, args: impl IntoIterator<Item = Arg>) -> Self {
        Prop::Atom(pred.into(), args.into_iter().collect())
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Prop::Atom("=".into(), vec![Arg::plain(lhs), Arg::plain(rhs)])
    }

    pub fn imp(a: Prop, b: Prop) -> Self {
        Prop::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: Prop, b: Prop) -> Self {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Self {
        Prop::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, a: Prop) -> Self {
        Prop::Forall(x.into(), Box::new(a))
    }

    pub fn exists(x: impl Into<String>, a: Prop) -> Self {
        Prop::Exists(x.into(), Box::new(a))
    }

    /// Universally closes over `vars`, outermost first.
    pub fn forall_many<S: AsRef<str>>(vars: &[S], body: Prop) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, x| Prop::forall(x.as_ref(), acc))
    }

    /// Every term occurring as an argument of an atom, outermost first.
    pub fn atom_terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(p: &'a Prop, out: &mut Vec<&'a Term>) {
            match p {
                Prop::Atom(_, args) => out.extend(args.iter().map(|a| &a.body)),
                Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Prop::Bottom => {}
                Prop::Forall(_, a) | Prop::Exists(_, a) => go(a, out),
            }
        }
        go(self, &mut out);
        out
    }
}

/// A finite map from variables to terms, written `t1/x1, ..., tn/xn`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SubstMap(BTreeMap<String, Term>);

impl SubstMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(x: impl Into<String>, t: Term) -> Self {
        let mut m = Self::new();
        m.insert(x, t);
        m
    }

    pub fn insert(&mut self, x: impl Into<String>, t: Term) {
        self.0.insert(x.into(), t);
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.0.get(x)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.0.contains_key(x)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// The restriction of the map to variables outside `removed`.
    pub fn without<S: AsRef<str>>(&self, removed: &[S]) -> SubstMap {
        if !removed.iter().any(|x| self.contains(x.as_ref())) {
            return self.clone();
        }
        SubstMap(
            self.0
                .iter()
                .filter(|(k, _)| !removed.iter().any(|x| x.as_ref() == k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        )
    }

    /// Every name in the domain or occurring (free or bound) in the range.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (x, t) in &self.0 {
            out.insert(x.clone());
            collect_term_names(t, &mut out);
        }
        out
    }
}

impl FromIterator<(String, Term)> for SubstMap {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        SubstMap(iter.into_iter().collect())
    }
}

impl fmt::Display for SubstMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}/{x}")?;
        }
        write!(f, ">")
    }
}

/// Source of fresh variable names for capture-avoiding substitution.
pub trait FreshNames {
    /// A name derived from `base` that is not in `avoid`. The returned name
    /// is added to `avoid`.
    fn fresh(&mut self, base: &str, avoid: &mut BTreeSet<String>) -> String;
}

/// Appends a counter to the base name, skipping names already in use.
#[derive(Clone, Debug, Default)]
pub struct CounterFresh {
    counter: usize,
}

impl FreshNames for CounterFresh {
    fn fresh(&mut self, base: &str, avoid: &mut BTreeSet<String>) -> String {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
        let stem = if stem.is_empty() { "v" } else { stem };
        loop {
            self.counter += 1;
            let candidate = format!("{stem}{}", self.counter);
            if !avoid.contains(&candidate) {
                avoid.insert(candidate.clone());
                return candidate;
            }
        }
    }
}

pub(crate) fn collect_term_names(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::App(_, args) => {
            for a in args {
                out.extend(a.binders.iter().cloned());
                collect_term_names(&a.body, out);
            }
        }
    }
}

fn collect_term_free<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        Term::App(_, args) => collect_args_free(args, bound, out),
    }
}

fn collect_args_free<'a>(args: &'a [Arg], bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    for a in args {
        let mark = bound.len();
        bound.extend(a.binders.iter().map(String::as_str));
        collect_term_free(&a.body, bound, out);
        bound.truncate(mark);
    }
}

fn collect_prop_free<'a>(p: &'a Prop, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match p {
        Prop::Atom(_, args) => collect_args_free(args, bound, out),
        Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => {
            collect_prop_free(a, bound, out);
            collect_prop_free(b, bound, out);
        }
        Prop::Bottom => {}
        Prop::Forall(x, a) | Prop::Exists(x, a) => {
            bound.push(x);
            collect_prop_free(a, bound, out);
            bound.pop();
        }
    }
}

fn collect_prop_names(p: &Prop, out: &mut BTreeSet<String>) {
    match p {
        Prop::Atom(_, args) => {
            for a in args {
                out.extend(a.binders.iter().cloned());
                collect_term_names(&a.body, out);
            }
        }
        Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => {
            collect_prop_names(a, out);
            collect_prop_names(b, out);
        }
        Prop::Bottom => {}
        Prop::Forall(x, a) | Prop::Exists(x, a) => {
            out.insert(x.clone());
            collect_prop_names(a, out);
        }
    }
}

fn graft_term(theta: &SubstMap, t: &Term) -> Term {
    match t {
        Term::Var(x) => theta.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), graft_args(theta, args)),
    }
}

fn graft_args(theta: &SubstMap, args: &[Arg]) -> Vec<Arg> {
    args.iter()
        .map(|a| Arg {
            binders: a.binders.clone(),
            body: graft_term(&theta.without(&a.binders), &a.body),
        })
        .collect()
}

fn graft_prop(theta: &SubstMap, p: &Prop) -> Prop {
    match p {
        Prop::Atom(pred, args) => Prop::Atom(pred.clone(), graft_args(theta, args)),
        Prop::Imp(a, b) => Prop::imp(graft_prop(theta, a), graft_prop(theta, b)),
        Prop::And(a, b) => Prop::and(graft_prop(theta, a), graft_prop(theta, b)),
        Prop::Or(a, b) => Prop::or(graft_prop(theta, a), graft_prop(theta, b)),
        Prop::Bottom => Prop::Bottom,
        Prop::Forall(x, a) => Prop::forall(x.clone(), graft_prop(&theta.without(&[x]), a)),
        Prop::Exists(x, a) => Prop::exists(x.clone(), graft_prop(&theta.without(&[x]), a)),
    }
}

/// Capture-avoiding substitution state: every binder met on the way down is
/// renamed to a fresh name and the renaming is recorded in `env`.
struct Substituter<'a, G> {
    fresh: &'a mut G,
    avoid: BTreeSet<String>,
}

impl<G: FreshNames> Substituter<'_, G> {
    fn term(&mut self, env: &SubstMap, t: &Term) -> Term {
        match t {
            Term::Var(x) => env.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), self.args(env, args)),
        }
    }

    fn args(&mut self, env: &SubstMap, args: &[Arg]) -> Vec<Arg> {
        args.iter()
            .map(|a| {
                let mut inner = env.clone();
                let binders: Vec<String> = a
                    .binders
                    .iter()
                    .map(|x| {
                        let y = self.fresh.fresh(x, &mut self.avoid);
                        inner.insert(x.clone(), Term::Var(y.clone()));
                        y
                    })
                    .collect();
                Arg {
                    binders,
                    body: self.term(&inner, &a.body),
                }
            })
            .collect()
    }

    fn prop(&mut self, env: &SubstMap, p: &Prop) -> Prop {
        match p {
            Prop::Atom(pred, args) => Prop::Atom(pred.clone(), self.args(env, args)),
            Prop::Imp(a, b) => Prop::imp(self.prop(env, a), self.prop(env, b)),
            Prop::And(a, b) => Prop::and(self.prop(env, a), self.prop(env, b)),
            Prop::Or(a, b) => Prop::or(self.prop(env, a), self.prop(env, b)),
            Prop::Bottom => Prop::Bottom,
            Prop::Forall(x, a) | Prop::Exists(x, a) => {
                let y = self.fresh.fresh(x, &mut self.avoid);
                let mut inner = env.clone();
                inner.insert(x.clone(), Term::Var(y.clone()));
                let body = self.prop(&inner, a);
                match p {
                    Prop::Forall(..) => Prop::forall(y, body),
                    _ => Prop::exists(y, body),
                }
            }
        }
    }
}

/// Operations shared by terms and propositions.
pub trait Syntax: Sized {
    /// Variables with an occurrence outside any binder for that name.
    fn free_vars(&self) -> BTreeSet<String>;
    /// Every variable name occurring free or bound.
    fn names(&self) -> BTreeSet<String>;
    /// Textual replacement; captures are allowed. Binders (including
    /// quantifiers) remove their variables from the domain of `theta`.
    fn graft(&self, theta: &SubstMap) -> Self;
    /// Capture-avoiding substitution with a caller-provided name supply.
    fn substitute_with<G: FreshNames>(&self, theta: &SubstMap, fresh: &mut G) -> Self;

    /// Capture-avoiding substitution: every bound variable is renamed to a
    /// name occurring neither in the input nor in `theta`.
    fn substitute(&self, theta: &SubstMap) -> Self {
        self.substitute_with(theta, &mut CounterFresh::default())
    }
}

impl Syntax for Term {
    fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_term_free(self, &mut Vec::new(), &mut out);
        out
    }

    fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_term_names(self, &mut out);
        out
    }

    fn graft(&self, theta: &SubstMap) -> Self {
        graft_term(theta, self)
    }

    fn substitute_with<G: FreshNames>(&self, theta: &SubstMap, fresh: &mut G) -> Self {
        let mut avoid = self.names();
        avoid.extend(theta.names());
        Substituter { fresh, avoid }.term(theta, self)
    }
}

impl Syntax for Prop {
    fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_prop_free(self, &mut Vec::new(), &mut out);
        out
    }

    fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_prop_names(self, &mut out);
        out
    }

    fn graft(&self, theta: &SubstMap) -> Self {
        graft_prop(theta, self)
    }

    fn substitute_with<G: FreshNames>(&self, theta: &SubstMap, fresh: &mut G) -> Self {
        let mut avoid = self.names();
        avoid.extend(theta.names());
        Substituter { fresh, avoid }.prop(theta, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(x: &str, body: Term) -> Term {
        Term::app("Lam", [Arg::bind([x], body)])
    }

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn free_vars_cases() {
        assert_eq!(v("x").free_vars(), BTreeSet::from(["x".to_string()]));
        assert!(lam("x", v("x")).free_vars().is_empty());
        let t = Term::app(
            "f",
            [Arg::bind(["x"], Term::app("g", [v("x").into(), v("y").into()]))],
        );
        assert_eq!(t.free_vars(), BTreeSet::from(["y".to_string()]));
    }

    #[test]
    fn graft_allows_capture() {
        let g = lam("x", v("y")).graft(&SubstMap::single("y", v("x")));
        assert_eq!(g, lam("x", v("x")));
        assert_eq!(v("x").graft(&SubstMap::single("x", v("t"))), v("t"));
        let t = Term::app("f", [Arg::bind(["x"], Term::app("g", [v("x").into()]))]);
        assert_eq!(t.graft(&SubstMap::single("x", Term::constant("a"))), t);
    }

    #[test]
    fn substitution_renames_binders() {
        let s = lam("x", v("y")).substitute(&SubstMap::single("y", v("x")));
        match &s {
            Term::App(_, args) => {
                let y = &args[0].binders[0];
                assert_ne!(y, "x");
                assert_eq!(args[0].body, v("x"));
            }
            _ => panic!("expected application"),
        }
        let p = Prop::forall("x", Prop::atom("P", [v("x").into()]));
        let q = p.substitute(&SubstMap::single("x", v("t")));
        match q {
            Prop::Forall(y, body) => {
                assert_ne!(y, "x");
                assert_eq!(*body, Prop::atom("P", [Term::Var(y.clone()).into()]));
            }
            _ => panic!("expected quantifier"),
        }
    }

    #[test]
    fn degenerate_entries_are_noops() {
        let t = Term::app("f", [v("x").into(), Arg::bind(["y"], v("x"))]);
        let s = t.substitute(&SubstMap::single("x", v("x")));
        assert_eq!(s.free_vars(), t.free_vars());
        assert_eq!(t.graft(&SubstMap::single("x", v("x"))), t);
    }

    #[test]
    fn fresh_names_avoid_everything() {
        let mut avoid: BTreeSet<String> = ["x1", "x2"].iter().map(|s| s.to_string()).collect();
        let mut g = CounterFresh::default();
        assert_eq!(g.fresh("x", &mut avoid), "x3");
        assert_eq!(g.fresh("x3", &mut avoid), "x4");
    }
}
