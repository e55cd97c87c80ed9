use thiserror::Error;

use super::signature::Signature;
use super::term::{Arg, Prop, Term};
use crate::path::Path;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WfErrorKind {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {slot} of `{symbol}` binds {expected} variables, found {found}")]
    BinderCountMismatch {
        symbol: String,
        slot: usize,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` is bound twice in one argument")]
    DuplicateBinder(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{kind} (at {path})")]
pub struct WfError {
    pub path: Path,
    pub kind: WfErrorKind,
}

fn check_args(sig_arity: &[usize], symbol: &str, args: &[Arg], path: &Path, sig: &Signature) -> Result<(), WfError> {
    let err = |kind| WfError {
        path: path.clone(),
        kind,
    };
    if sig_arity.len() != args.len() {
        return Err(err(WfErrorKind::ArityMismatch {
            symbol: symbol.to_string(),
            expected: sig_arity.len(),
            found: args.len(),
        }));
    }
    for (slot, (k, a)) in sig_arity.iter().zip(args).enumerate() {
        if a.binders.len() != *k {
            return Err(err(WfErrorKind::BinderCountMismatch {
                symbol: symbol.to_string(),
                slot,
                expected: *k,
                found: a.binders.len(),
            }));
        }
        for (i, x) in a.binders.iter().enumerate() {
            if a.binders[..i].contains(x) {
                return Err(WfError {
                    path: path.child(slot),
                    kind: WfErrorKind::DuplicateBinder(x.clone()),
                });
            }
        }
        check_term(sig, &a.body, &path.child(slot))?;
    }
    Ok(())
}

fn check_term(sig: &Signature, t: &Term, path: &Path) -> Result<(), WfError> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(f, args) => {
            let arity = sig.function(f).ok_or_else(|| WfError {
                path: path.clone(),
                kind: WfErrorKind::UnknownSymbol(f.clone()),
            })?;
            check_args(arity.slots(), f, args, path, sig)
        }
    }
}

fn check_prop(sig: &Signature, p: &Prop, path: &Path) -> Result<(), WfError> {
    match p {
        Prop::Atom(pred, args) => {
            let arity = sig.predicate(pred).ok_or_else(|| WfError {
                path: path.clone(),
                kind: WfErrorKind::UnknownSymbol(pred.clone()),
            })?;
            check_args(arity.slots(), pred, args, path, sig)
        }
        Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => {
            check_prop(sig, a, &path.child(0))?;
            check_prop(sig, b, &path.child(1))
        }
        Prop::Bottom => Ok(()),
        Prop::Forall(_, a) | Prop::Exists(_, a) => check_prop(sig, a, &path.child(0)),
    }
}

/// Expressions that can be checked against a signature.
pub trait WellFormed {
    fn well_formed(&self, sig: &Signature) -> Result<(), WfError>;
}

impl WellFormed for Term {
    fn well_formed(&self, sig: &Signature) -> Result<(), WfError> {
        check_term(sig, self, &Path::root())
    }
}

impl WellFormed for Prop {
    fn well_formed(&self, sig: &Signature) -> Result<(), WfError> {
        check_prop(sig, self, &Path::root())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new()
            .with_function("f", &[1])
            .unwrap()
            .with_function("delta", &[0, 1, 1])
            .unwrap()
            .with_function("i", &[0])
            .unwrap()
            .with_predicate("=", &[0, 0])
            .unwrap()
    }

    #[test]
    fn accepts_matching_arities() {
        let t = Term::app("f", [Arg::bind(["x"], Term::var("x"))]);
        assert!(t.well_formed(&sig()).is_ok());
        let d = Term::app(
            "delta",
            [
                Term::app("i", [Term::var("x").into()]).into(),
                Arg::bind(["x"], Term::var("u")),
                Arg::bind(["y"], Term::var("v")),
            ],
        );
        assert!(d.well_formed(&sig()).is_ok());
    }

    #[test]
    fn reports_binder_count_mismatch() {
        let t = Term::app("f", [Arg::bind(["x", "y"], Term::var("x"))]);
        let err = t.well_formed(&sig()).unwrap_err();
        assert!(matches!(err.kind, WfErrorKind::BinderCountMismatch { expected: 1, found: 2, .. }));
    }

    #[test]
    fn reports_paths() {
        let p = Prop::imp(
            Prop::Bottom,
            Prop::eq(Term::var("x"), Term::app("g", [Term::var("y").into()])),
        );
        let err = p.well_formed(&sig()).unwrap_err();
        assert_eq!(err.path, Path(vec![1, 1]));
        assert_eq!(err.kind, WfErrorKind::UnknownSymbol("g".into()));
        let t = Term::app("i", []);
        assert!(matches!(
            t.well_formed(&sig()).unwrap_err().kind,
            WfErrorKind::ArityMismatch { .. }
        ));
    }

    #[test]
    fn reports_duplicate_binders() {
        let s = Signature::new().with_function("mu", &[2]).unwrap();
        let t = Term::app("mu", [Arg::bind(["x", "x"], Term::var("x"))]);
        assert_eq!(
            t.well_formed(&s).unwrap_err(),
            WfError {
                path: Path(vec![0]),
                kind: WfErrorKind::DuplicateBinder("x".into())
            }
        );
    }
}
