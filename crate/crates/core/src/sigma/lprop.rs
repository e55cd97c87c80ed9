use std::collections::BTreeSet;
use std::fmt;

use super::lterm::LTerm;
use crate::syntax::{fmt_binary, CounterFresh, FreshNames, PropKind};

/// A proposition of L′. Quantifiers bind sort-0 variables by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LProp {
    Atom(String, Vec<LTerm>),
    Imp(Box<LProp>, Box<LProp>),
    And(Box<LProp>, Box<LProp>),
    Or(Box<LProp>, Box<LProp>),
    Bottom,
    Forall(String, Box<LProp>),
    Exists(String, Box<LProp>),
}

impl LProp {
    pub fn atom(pred: impl Into<String>, args: impl IntoIterator<Item = LTerm>) -> Self {
        LProp::Atom(pred.into(), args.into_iter().collect())
    }

    pub fn eq(lhs: LTerm, rhs: LTerm) -> Self {
        LProp::Atom("=".into(), vec![lhs, rhs])
    }

    pub fn imp(a: LProp, b: LProp) -> Self {
        LProp::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: LProp, b: LProp) -> Self {
        LProp::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LProp, b: LProp) -> Self {
        LProp::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, a: LProp) -> Self {
        LProp::Forall(x.into(), Box::new(a))
    }

    pub fn exists(x: impl Into<String>, a: LProp) -> Self {
        LProp::Exists(x.into(), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            LProp::Atom(_, args) => {
                for a in args {
                    for x in a.vars() {
                        if !bound.contains(&x) {
                            out.insert(x);
                        }
                    }
                }
            }
            LProp::Imp(a, b) | LProp::And(a, b) | LProp::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            LProp::Bottom => {}
            LProp::Forall(x, a) | LProp::Exists(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name, free or bound.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            LProp::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            LProp::Imp(a, b) | LProp::And(a, b) | LProp::Or(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            LProp::Bottom => {}
            LProp::Forall(x, a) | LProp::Exists(x, a) => {
                out.insert(x.clone());
                a.collect_names(out);
            }
        }
    }

    /// Maps every term of every atom.
    pub fn map_terms(&self, f: &mut impl FnMut(&LTerm) -> LTerm) -> LProp {
        match self {
            LProp::Atom(p, args) => LProp::Atom(p.clone(), args.iter().map(&mut *f).collect()),
            LProp::Imp(a, b) => LProp::imp(a.map_terms(f), b.map_terms(f)),
            LProp::And(a, b) => LProp::and(a.map_terms(f), b.map_terms(f)),
            LProp::Or(a, b) => LProp::or(a.map_terms(f), b.map_terms(f)),
            LProp::Bottom => LProp::Bottom,
            LProp::Forall(x, a) => LProp::forall(x.clone(), a.map_terms(f)),
            LProp::Exists(x, a) => LProp::exists(x.clone(), a.map_terms(f)),
        }
    }

    /// Fallible variant of [`LProp::map_terms`].
    pub fn try_map_terms<E>(&self, f: &mut impl FnMut(&LTerm) -> Result<LTerm, E>) -> Result<LProp, E> {
        Ok(match self {
            LProp::Atom(p, args) => LProp::Atom(p.clone(), args.iter().map(&mut *f).collect::<Result<_, _>>()?),
            LProp::Imp(a, b) => LProp::imp(a.try_map_terms(f)?, b.try_map_terms(f)?),
            LProp::And(a, b) => LProp::and(a.try_map_terms(f)?, b.try_map_terms(f)?),
            LProp::Or(a, b) => LProp::or(a.try_map_terms(f)?, b.try_map_terms(f)?),
            LProp::Bottom => LProp::Bottom,
            LProp::Forall(x, a) => LProp::forall(x.clone(), a.try_map_terms(f)?),
            LProp::Exists(x, a) => LProp::exists(x.clone(), a.try_map_terms(f)?),
        })
    }

    pub fn terms(&self) -> Vec<&LTerm> {
        let mut out = Vec::new();
        fn go<'a>(a: &'a LProp, out: &mut Vec<&'a LTerm>) {
            match a {
                LProp::Atom(_, args) => out.extend(args.iter()),
                LProp::Imp(x, y) | LProp::And(x, y) | LProp::Or(x, y) => {
                    go(x, out);
                    go(y, out);
                }
                LProp::Bottom => {}
                LProp::Forall(_, x) | LProp::Exists(_, x) => go(x, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Renames quantified variables to `%d`, `d` being the quantifier
    /// depth; two propositions are α-equivalent iff their canonical
    /// forms are equal.
    pub fn canonical(&self) -> LProp {
        fn go(a: &LProp, bound: &mut Vec<(String, String)>) -> LProp {
            match a {
                LProp::Atom(p, args) => LProp::Atom(
                    p.clone(),
                    args.iter()
                        .map(|t| {
                            let mut t = t.clone();
                            rename_bound(&mut t, bound);
                            t
                        })
                        .collect(),
                ),
                LProp::Imp(x, y) => LProp::imp(go(x, bound), go(y, bound)),
                LProp::And(x, y) => LProp::and(go(x, bound), go(y, bound)),
                LProp::Or(x, y) => LProp::or(go(x, bound), go(y, bound)),
                LProp::Bottom => LProp::Bottom,
                LProp::Forall(x, body) | LProp::Exists(x, body) => {
                    let name = format!("%{}", bound.len());
                    bound.push((x.clone(), name.clone()));
                    let body = go(body, bound);
                    bound.pop();
                    match a {
                        LProp::Forall(..) => LProp::forall(name, body),
                        _ => LProp::exists(name, body),
                    }
                }
            }
        }
        fn rename_bound(t: &mut LTerm, bound: &[(String, String)]) {
            if let LTerm::Var(x) = t {
                if let Some((_, n)) = bound.iter().rev().find(|(y, _)| y == x) {
                    *x = n.clone();
                }
                return;
            }
            for c in t.children_mut() {
                rename_bound(c, bound);
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &LProp) -> bool {
        self.canonical() == other.canonical()
    }

    /// Capture-avoiding substitution `(t/x)A`: the variable `x` is grafted
    /// with `t` in every atom, renaming quantifiers that would capture a
    /// variable of `t`.
    pub fn substitute(&self, x: &str, t: &LTerm) -> LProp {
        let mut avoid = self.names();
        avoid.extend(t.vars());
        avoid.insert(x.to_string());
        let tv = t.vars();
        self.subst_inner(x, t, &tv, &mut avoid, &mut CounterFresh::default())
    }

    fn subst_inner(
        &self,
        x: &str,
        t: &LTerm,
        tv: &BTreeSet<String>,
        avoid: &mut BTreeSet<String>,
        fresh: &mut CounterFresh,
    ) -> LProp {
        match self {
            LProp::Atom(p, args) => LProp::Atom(p.clone(), args.iter().map(|a| a.graft(x, t)).collect()),
            LProp::Imp(a, b) => LProp::imp(a.subst_inner(x, t, tv, avoid, fresh), b.subst_inner(x, t, tv, avoid, fresh)),
            LProp::And(a, b) => LProp::and(a.subst_inner(x, t, tv, avoid, fresh), b.subst_inner(x, t, tv, avoid, fresh)),
            LProp::Or(a, b) => LProp::or(a.subst_inner(x, t, tv, avoid, fresh), b.subst_inner(x, t, tv, avoid, fresh)),
            LProp::Bottom => LProp::Bottom,
            LProp::Forall(y, body) | LProp::Exists(y, body) => {
                let (y2, body2) = if y == x {
                    (y.clone(), (**body).clone())
                } else if tv.contains(y) && body.free_vars().contains(x) {
                    let z = fresh.fresh(y, avoid);
                    let renamed = body.rename_free(y, &z);
                    (z, renamed.subst_inner(x, t, tv, avoid, fresh))
                } else {
                    (y.clone(), body.subst_inner(x, t, tv, avoid, fresh))
                };
                match self {
                    LProp::Forall(..) => LProp::forall(y2, body2),
                    _ => LProp::exists(y2, body2),
                }
            }
        }
    }

    fn rename_free(&self, from: &str, to: &str) -> LProp {
        match self {
            LProp::Atom(p, args) => LProp::Atom(p.clone(), args.iter().map(|a| a.rename_var(from, to)).collect()),
            LProp::Imp(a, b) => LProp::imp(a.rename_free(from, to), b.rename_free(from, to)),
            LProp::And(a, b) => LProp::and(a.rename_free(from, to), b.rename_free(from, to)),
            LProp::Or(a, b) => LProp::or(a.rename_free(from, to), b.rename_free(from, to)),
            LProp::Bottom => LProp::Bottom,
            LProp::Forall(y, _) | LProp::Exists(y, _) if y == from => self.clone(),
            LProp::Forall(y, a) => LProp::forall(y.clone(), a.rename_free(from, to)),
            LProp::Exists(y, a) => LProp::exists(y.clone(), a.rename_free(from, to)),
        }
    }

    pub(crate) fn kind(&self) -> PropKind {
        match self {
            LProp::Imp(..) => PropKind::Imp,
            LProp::Or(..) => PropKind::Or,
            LProp::And(..) => PropKind::And,
            LProp::Forall(..) | LProp::Exists(..) => PropKind::Quant,
            LProp::Atom(..) | LProp::Bottom => PropKind::Atomic,
        }
    }
}

impl fmt::Display for LProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LProp::Atom(p, args) if p == "=" && args.len() == 2 => write!(f, "{} = {}", args[0], args[1]),
            LProp::Atom(p, args) if args.is_empty() => write!(f, "{p}"),
            LProp::Atom(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            LProp::Imp(a, b) => fmt_binary(f, PropKind::Imp, "=>", (&**a, a.kind()), (&**b, b.kind())),
            LProp::Or(a, b) => fmt_binary(f, PropKind::Or, "\\/", (&**a, a.kind()), (&**b, b.kind())),
            LProp::And(a, b) => fmt_binary(f, PropKind::And, "/\\", (&**a, a.kind()), (&**b, b.kind())),
            LProp::Bottom => write!(f, "false"),
            LProp::Forall(x, a) => write!(f, "forall {x}. {a}"),
            LProp::Exists(x, a) => write!(f, "exists {x}. {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str, y: &str) -> LProp {
        LProp::atom("P", [LTerm::var(x), LTerm::var(y)])
    }

    #[test]
    fn alpha_equivalence_of_quantifiers() {
        assert!(LProp::forall("x", p("x", "y")).alpha_eq(&LProp::forall("z", p("z", "y"))));
        assert!(!LProp::forall("x", p("x", "y")).alpha_eq(&LProp::forall("y", p("y", "y"))));
    }

    #[test]
    fn substitution_renames_capturing_quantifiers() {
        let a = LProp::forall("y", p("x", "y"));
        let b = a.substitute("x", &LTerm::var("y"));
        let LProp::Forall(z, _) = &b else { panic!() };
        assert_ne!(z, "y");
        assert!(b.alpha_eq(&LProp::forall("w", p("y", "w"))));
        assert_eq!(LProp::forall("x", p("x", "x")).substitute("x", &LTerm::var("t")), LProp::forall("x", p("x", "x")));
    }

    #[test]
    fn substitution_reaches_under_shifts() {
        let a = LProp::eq(LTerm::clos(LTerm::var("x"), LTerm::Shift(0)), LTerm::index(1, 1));
        let t = LTerm::app("g", 0, []);
        let b = a.substitute("x", &t);
        assert_eq!(b.to_string(), "g_0[up_0] = 1_1");
    }
}
