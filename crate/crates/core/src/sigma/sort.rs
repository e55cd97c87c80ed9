use std::fmt;

use thiserror::Error;

use super::lprop::LProp;
use super::lterm::LTerm;
use crate::path::Path;
use crate::syntax::Signature;

/// Sorts of L′: `n` for terms under `n` binders, `<n,p>` for
/// substitutions of `p` terms of sort `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Term(usize),
    Subst(usize, usize),
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Term(n) => write!(f, "{n}"),
            Sort::Subst(n, p) => write!(f, "<{n},{p}>"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SortError {
    #[error("at {path}: expected sort {expected}, found {found}")]
    SortMismatch {
        path: Path,
        expected: String,
        found: Sort,
    },
    #[error("at {path}: index {i}_{n} is out of range")]
    IndexOutOfRange { path: Path, i: usize, n: usize },
    #[error("at {path}: unknown symbol `{symbol}`")]
    UnknownSymbol { path: Path, symbol: String },
    #[error("at {path}: `{symbol}` expects {expected} arguments, found {found}")]
    ArityMismatch {
        path: Path,
        symbol: String,
        expected: usize,
        found: usize,
    },
}

fn mismatch(path: &Path, expected: impl Into<String>, found: Sort) -> SortError {
    SortError::SortMismatch {
        path: path.clone(),
        expected: expected.into(),
        found,
    }
}

fn term_sort(sig: &Signature, t: &LTerm, path: &Path) -> Result<usize, SortError> {
    match sort_at(sig, t, path)? {
        Sort::Term(n) => Ok(n),
        s => Err(mismatch(path, "a term sort", s)),
    }
}

fn subst_sort(sig: &Signature, t: &LTerm, path: &Path) -> Result<(usize, usize), SortError> {
    match sort_at(sig, t, path)? {
        Sort::Subst(n, p) => Ok((n, p)),
        s => Err(mismatch(path, "a substitution sort", s)),
    }
}

fn sort_at(sig: &Signature, t: &LTerm, path: &Path) -> Result<Sort, SortError> {
    match t {
        LTerm::Index { i, n } => {
            if *i == 0 || i > n {
                return Err(SortError::IndexOutOfRange {
                    path: path.clone(),
                    i: *i,
                    n: *n,
                });
            }
            Ok(Sort::Term(*n))
        }
        LTerm::Var(_) => Ok(Sort::Term(0)),
        LTerm::App { f, p, args } => {
            let arity = sig.function(f).ok_or_else(|| SortError::UnknownSymbol {
                path: path.clone(),
                symbol: f.clone(),
            })?;
            if arity.len() != args.len() {
                return Err(SortError::ArityMismatch {
                    path: path.clone(),
                    symbol: f.clone(),
                    expected: arity.len(),
                    found: args.len(),
                });
            }
            for (i, (k, a)) in arity.slots().iter().zip(args).enumerate() {
                let sub = path.child(i);
                let s = term_sort(sig, a, &sub)?;
                if s != k + p {
                    return Err(mismatch(&sub, (k + p).to_string(), Sort::Term(s)));
                }
            }
            Ok(Sort::Term(*p))
        }
        LTerm::Clos(t, s) => {
            let p = term_sort(sig, t, &path.child(0))?;
            let (n, p2) = subst_sort(sig, s, &path.child(1))?;
            if p != p2 {
                return Err(mismatch(&path.child(1), format!("<_,{p}>"), Sort::Subst(n, p2)));
            }
            Ok(Sort::Term(n))
        }
        LTerm::Id(n) => Ok(Sort::Subst(*n, *n)),
        LTerm::Cons(t, s) => {
            let n = term_sort(sig, t, &path.child(0))?;
            let (n2, p) = subst_sort(sig, s, &path.child(1))?;
            if n != n2 {
                return Err(mismatch(&path.child(1), format!("<{n},_>"), Sort::Subst(n2, p)));
            }
            Ok(Sort::Subst(n, p + 1))
        }
        LTerm::Shift(n) => Ok(Sort::Subst(n + 1, *n)),
        LTerm::Comp(s1, s2) => {
            let (p, n) = subst_sort(sig, s1, &path.child(0))?;
            let (q, p2) = subst_sort(sig, s2, &path.child(1))?;
            if p != p2 {
                return Err(mismatch(&path.child(1), format!("<_,{p}>"), Sort::Subst(q, p2)));
            }
            Ok(Sort::Subst(q, n))
        }
    }
}

/// The sort of `t`, or the first sort error in left-to-right order.
pub fn sort_of(sig: &Signature, t: &LTerm) -> Result<Sort, SortError> {
    sort_at(sig, t, &Path::root())
}

fn check_prop_at(sig: &Signature, a: &LProp, path: &Path) -> Result<(), SortError> {
    match a {
        LProp::Atom(pred, args) => {
            let arity = sig.predicate(pred).ok_or_else(|| SortError::UnknownSymbol {
                path: path.clone(),
                symbol: pred.clone(),
            })?;
            if arity.len() != args.len() {
                return Err(SortError::ArityMismatch {
                    path: path.clone(),
                    symbol: pred.clone(),
                    expected: arity.len(),
                    found: args.len(),
                });
            }
            for (i, (k, t)) in arity.slots().iter().zip(args).enumerate() {
                let sub = path.child(i);
                let s = term_sort(sig, t, &sub)?;
                if s != *k {
                    return Err(mismatch(&sub, k.to_string(), Sort::Term(s)));
                }
            }
            Ok(())
        }
        LProp::Imp(x, y) | LProp::And(x, y) | LProp::Or(x, y) => {
            check_prop_at(sig, x, &path.child(0))?;
            check_prop_at(sig, y, &path.child(1))
        }
        LProp::Bottom => Ok(()),
        LProp::Forall(_, x) | LProp::Exists(_, x) => check_prop_at(sig, x, &path.child(0)),
    }
}

/// Checks that every atom argument has the sort its predicate demands.
pub fn check_prop_sorts(sig: &Signature, a: &LProp) -> Result<(), SortError> {
    check_prop_at(sig, a, &Path::root())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\npred = : <0,0>").unwrap()
    }

    #[test]
    fn worked_example_has_sort_zero() {
        let inner = LTerm::app(
            "f",
            1,
            [LTerm::clos(LTerm::var("x"), LTerm::Shift(0)), LTerm::index(1, 1)],
        );
        let t = LTerm::app("Lam", 0, [inner.clone()]);
        assert_eq!(sort_of(&sig(), &inner), Ok(Sort::Term(1)));
        assert_eq!(sort_of(&sig(), &t), Ok(Sort::Term(0)));
    }

    #[test]
    fn composed_shifts() {
        let t = LTerm::clos(LTerm::var("x"), LTerm::comp(LTerm::Shift(0), LTerm::Shift(1)));
        assert_eq!(sort_of(&sig(), &t), Ok(Sort::Term(2)));
        assert_eq!(sort_of(&sig(), &LTerm::shifts(1, 3)), Ok(Sort::Subst(4, 1)));
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            sort_of(&sig(), &LTerm::index(3, 2)),
            Err(SortError::IndexOutOfRange { i: 3, n: 2, .. })
        ));
        assert!(sort_of(&sig(), &LTerm::index(0, 2)).is_err());
    }

    #[test]
    fn mismatches_name_the_path() {
        let t = LTerm::app("f", 0, [LTerm::var("x"), LTerm::index(1, 1)]);
        assert_eq!(
            sort_of(&sig(), &t),
            Err(SortError::SortMismatch {
                path: Path(vec![1]),
                expected: "0".into(),
                found: Sort::Term(1)
            })
        );
        let bad = LTerm::comp(LTerm::Shift(0), LTerm::Shift(0));
        assert!(sort_of(&sig(), &bad).is_err());
    }

    #[test]
    fn cheap_levels_agree_with_sorts() {
        let s = LTerm::cons(LTerm::index(1, 2), LTerm::comp(LTerm::Shift(0), LTerm::shifts(1, 1)));
        assert_eq!(sort_of(&sig(), &s), Ok(Sort::Subst(s.level(), s.arity())));
    }
}
