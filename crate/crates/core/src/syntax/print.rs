use std::fmt;

use super::parse::Sequent;
use super::term::{Arg, Prop, Term};

pub(crate) fn fmt_args(f: &mut fmt::Formatter<'_>, args: &[Arg]) -> fmt::Result {
    write!(f, "(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        if !a.binders.is_empty() {
            write!(f, "{}. ", a.binders.join(" "))?;
        }
        write!(f, "{}", a.body)?;
    }
    write!(f, ")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "{s}")?;
                fmt_args(f, args)
            }
        }
    }
}

/// Binding strength of a connective; quantifiers are weakest.
pub(crate) fn prec(kind: PropKind) -> u8 {
    match kind {
        PropKind::Quant => 0,
        PropKind::Imp => 1,
        PropKind::Or => 2,
        PropKind::And => 3,
        PropKind::Atomic => 4,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum PropKind {
    Quant,
    Imp,
    Or,
    And,
    Atomic,
}

/// Writes `lhs op rhs` for a right-associative connective, adding the
/// parentheses the parser needs.
pub(crate) fn fmt_binary<A: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    kind: PropKind,
    op: &str,
    lhs: (&A, PropKind),
    rhs: (&A, PropKind),
) -> fmt::Result {
    let p = prec(kind);
    if prec(lhs.1) <= p {
        write!(f, "({})", lhs.0)?;
    } else {
        write!(f, "{}", lhs.0)?;
    }
    write!(f, " {op} ")?;
    if prec(rhs.1) < p || rhs.1 == PropKind::Quant {
        write!(f, "({})", rhs.0)
    } else {
        write!(f, "{}", rhs.0)
    }
}

impl Prop {
    pub(crate) fn kind(&self) -> PropKind {
        match self {
            Prop::Imp(..) => PropKind::Imp,
            Prop::Or(..) => PropKind::Or,
            Prop::And(..) => PropKind::And,
            Prop::Forall(..) | Prop::Exists(..) => PropKind::Quant,
            Prop::Atom(..) | Prop::Bottom => PropKind::Atomic,
        }
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Atom(p, args) if p == "=" && args.len() == 2 && args.iter().all(|a| a.binders.is_empty()) => {
                write!(f, "{} = {}", args[0].body, args[1].body)
            }
            Prop::Atom(p, args) if args.is_empty() => write!(f, "{p}"),
            Prop::Atom(p, args) => {
                write!(f, "{p}")?;
                fmt_args(f, args)
            }
            Prop::Imp(a, b) => fmt_binary(f, PropKind::Imp, "=>", (&**a, a.kind()), (&**b, b.kind())),
            Prop::Or(a, b) => fmt_binary(f, PropKind::Or, "\\/", (&**a, a.kind()), (&**b, b.kind())),
            Prop::And(a, b) => fmt_binary(f, PropKind::And, "/\\", (&**a, a.kind()), (&**b, b.kind())),
            Prop::Bottom => write!(f, "false"),
            Prop::Forall(x, a) => write!(f, "forall {x}. {a}"),
            Prop::Exists(x, a) => write!(f, "exists {x}. {a}"),
        }
    }
}

impl<F: fmt::Display> fmt::Display for Sequent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[F]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        let (l, r) = (side(&self.left), side(&self.right));
        match (l.is_empty(), r.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {r}"),
            (false, true) => write!(f, "{l} |-"),
            (false, false) => write!(f, "{l} |- {r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_prop, parse_term, Signature, ToDeBruijn};

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun a : <>\npred = : <0,0>\npred Q : <>\npred P : <0>").unwrap()
    }

    #[test]
    fn prints_terms() {
        let t = parse_term(&sig(), "Lam(z.f(x,z))").unwrap();
        assert_eq!(t.to_string(), "Lam(z. f(x, z))");
    }

    #[test]
    fn prints_with_minimal_parentheses() {
        let s = sig();
        for (src, printed) in [
            ("Q => Q => Q", "Q => Q => Q"),
            ("(Q => Q) => Q", "(Q => Q) => Q"),
            ("Q /\\ (Q \\/ Q)", "Q /\\ (Q \\/ Q)"),
            ("(forall x. P(x)) /\\ Q", "(forall x. P(x)) /\\ Q"),
            ("Q => forall x. P(x)", "Q => (forall x. P(x))"),
            ("forall x. exists y. x = y", "forall x. exists y. x = y"),
        ] {
            let p = parse_prop(&s, src).unwrap();
            assert_eq!(p.to_string(), printed);
            assert_eq!(parse_prop(&s, &p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn round_trip_is_alpha_equal() {
        let s = sig();
        let p = parse_prop(&s, "forall x. forall y. f(x, y) = Lam(z. f(x, z))").unwrap();
        let q = parse_prop(&s, &p.to_string()).unwrap();
        assert!(p.alpha_eq(&q));
    }
}
