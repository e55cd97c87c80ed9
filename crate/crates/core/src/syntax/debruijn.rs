//! Nameless canonical forms. Bound occurrences become indices counting
//! binders outward (symbol binders and quantifiers alike); in a slot binding
//! `x1 ... xk` the rightmost binder `xk` is `#1`.

use std::fmt;

use super::term::{Arg, Prop, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DbTerm {
    Bound(usize),
    Free(String),
    App(String, Vec<DbArg>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DbArg {
    pub binders: usize,
    pub body: DbTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DbProp {
    Atom(String, Vec<DbArg>),
    Imp(Box<DbProp>, Box<DbProp>),
    And(Box<DbProp>, Box<DbProp>),
    Or(Box<DbProp>, Box<DbProp>),
    Bottom,
    Forall(Box<DbProp>),
    Exists(Box<DbProp>),
}

fn lookup(stack: &[&str], x: &str) -> Option<usize> {
    stack.iter().rev().position(|y| *y == x).map(|i| i + 1)
}

fn term<'a>(t: &'a Term, stack: &mut Vec<&'a str>) -> DbTerm {
    match t {
        Term::Var(x) => match lookup(stack, x) {
            Some(i) => DbTerm::Bound(i),
            None => DbTerm::Free(x.clone()),
        },
        Term::App(f, args) => DbTerm::App(f.clone(), self::args(args, stack)),
    }
}

fn args<'a>(args: &'a [Arg], stack: &mut Vec<&'a str>) -> Vec<DbArg> {
    args.iter()
        .map(|a| {
            let mark = stack.len();
            stack.extend(a.binders.iter().map(String::as_str));
            let body = term(&a.body, stack);
            stack.truncate(mark);
            DbArg {
                binders: a.binders.len(),
                body,
            }
        })
        .collect()
}

fn prop<'a>(p: &'a Prop, stack: &mut Vec<&'a str>) -> DbProp {
    match p {
        Prop::Atom(pred, a) => DbProp::Atom(pred.clone(), args(a, stack)),
        Prop::Imp(a, b) => DbProp::Imp(Box::new(prop(a, stack)), Box::new(prop(b, stack))),
        Prop::And(a, b) => DbProp::And(Box::new(prop(a, stack)), Box::new(prop(b, stack))),
        Prop::Or(a, b) => DbProp::Or(Box::new(prop(a, stack)), Box::new(prop(b, stack))),
        Prop::Bottom => DbProp::Bottom,
        Prop::Forall(x, a) | Prop::Exists(x, a) => {
            stack.push(x);
            let body = Box::new(prop(a, stack));
            stack.pop();
            match p {
                Prop::Forall(..) => DbProp::Forall(body),
                _ => DbProp::Exists(body),
            }
        }
    }
}

/// Conversion to the nameless canonical form.
pub trait ToDeBruijn {
    type Output: PartialEq + fmt::Display;

    fn to_debruijn(&self) -> Self::Output;

    /// α-equivalence, decided by comparing canonical forms.
    fn alpha_eq(&self, other: &Self) -> bool {
        self.to_debruijn() == other.to_debruijn()
    }
}

impl ToDeBruijn for Term {
    type Output = DbTerm;

    fn to_debruijn(&self) -> DbTerm {
        term(self, &mut Vec::new())
    }
}

impl ToDeBruijn for Prop {
    type Output = DbProp;

    fn to_debruijn(&self) -> DbProp {
        prop(self, &mut Vec::new())
    }
}

fn fmt_args(f: &mut fmt::Formatter<'_>, args: &[DbArg]) -> fmt::Result {
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        if a.binders > 0 {
            write!(f, "{}. ", vec!["•"; a.binders].join(" "))?;
        }
        write!(f, "{}", a.body)?;
    }
    write!(f, ")")
}

impl fmt::Display for DbTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DbTerm::Bound(i) => write!(f, "#{i}"),
            DbTerm::Free(x) => write!(f, "{x}"),
            DbTerm::App(s, args) if args.is_empty() => write!(f, "{s}"),
            DbTerm::App(s, args) => {
                write!(f, "{s}")?;
                fmt_args(f, args)
            }
        }
    }
}

impl fmt::Display for DbProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DbProp::Atom(p, args) => {
                write!(f, "{p}")?;
                fmt_args(f, args)
            }
            DbProp::Imp(a, b) => write!(f, "({a} => {b})"),
            DbProp::And(a, b) => write!(f, "({a} /\\ {b})"),
            DbProp::Or(a, b) => write!(f, "({a} \\/ {b})"),
            DbProp::Bottom => write!(f, "false"),
            DbProp::Forall(a) => write!(f, "forall •. {a}"),
            DbProp::Exists(a) => write!(f, "exists •. {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(x: &str, body: Term) -> Term {
        Term::app("Lam", [Arg::bind([x], body)])
    }

    #[test]
    fn indices_count_outward() {
        let t = lam("x", Term::var("x"));
        assert_eq!(
            t.to_debruijn(),
            DbTerm::App(
                "Lam".into(),
                vec![DbArg {
                    binders: 1,
                    body: DbTerm::Bound(1)
                }]
            )
        );
        assert_eq!(t.to_debruijn().to_string(), "Lam(•. #1)");
        let t = lam("x", lam("y", Term::var("x")));
        assert_eq!(t.to_debruijn().to_string(), "Lam(•. Lam(•. #2))");
    }

    #[test]
    fn rightmost_binder_of_a_slot_is_one() {
        let t = Term::app("mu", [Arg::bind(["x", "y"], Term::var("x"))]);
        assert_eq!(t.to_debruijn().to_string(), "mu(• •. #2)");
    }

    #[test]
    fn alpha_cases() {
        assert!(lam("x", Term::var("x")).alpha_eq(&lam("y", Term::var("y"))));
        assert!(lam("x", Term::var("y")).alpha_eq(&lam("z", Term::var("y"))));
        assert!(!lam("x", Term::var("y")).alpha_eq(&lam("x", Term::var("x"))));
        let p = |x: &str| {
            Prop::forall(x, Prop::atom("P", [Term::var(x).into(), Term::var("y").into()]))
        };
        assert!(p("x").alpha_eq(&p("z")));
        assert!(!p("x").alpha_eq(&p("y")));
    }

    #[test]
    fn quantifier_may_rebind_a_symbol_binder_name() {
        // forall x. P(x. x) vs forall y. P(x. x): the inner x shadows.
        let p = |q: &str| Prop::forall(q, Prop::atom("P", [Arg::bind(["x"], Term::var("x"))]));
        assert!(p("x").alpha_eq(&p("y")));
    }
}
