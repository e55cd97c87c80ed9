use std::collections::BTreeSet;
use std::fmt;

use crate::path::Path;

/// A term of the sorted explicit-substitution language.
///
/// Sort annotations live on the leaves (`Index`, `Id`, `Shift`) and on
/// symbol applications; closures, conses and compositions get their sort
/// from their children.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LTerm {
    /// The de Bruijn index `i_n` of sort `n`, `1 <= i <= n`.
    Index { i: usize, n: usize },
    /// A named variable of sort 0.
    Var(String),
    /// `f_p(t1, ..., tn)`.
    App { f: String, p: usize, args: Vec<LTerm> },
    /// `t[s]`.
    Clos(Box<LTerm>, Box<LTerm>),
    /// `id_n` of sort `<n,n>`.
    Id(usize),
    /// `t . s`.
    Cons(Box<LTerm>, Box<LTerm>),
    /// `up_n` of sort `<n+1,n>`.
    Shift(usize),
    /// `s o s'`.
    Comp(Box<LTerm>, Box<LTerm>),
}

impl LTerm {
    pub fn index(i: usize, n: usize) -> Self {
        LTerm::Index { i, n }
    }

    pub fn var(x: impl Into<String>) -> Self {
        LTerm::Var(x.into())
    }

    pub fn app(f: impl Into<String>, p: usize, args: impl IntoIterator<Item = LTerm>) -> Self {
        LTerm::App {
            f: f.into(),
            p,
            args: args.into_iter().collect(),
        }
    }

    pub fn clos(t: LTerm, s: LTerm) -> Self {
        LTerm::Clos(Box::new(t), Box::new(s))
    }

    pub fn cons(t: LTerm, s: LTerm) -> Self {
        LTerm::Cons(Box::new(t), Box::new(s))
    }

    pub fn comp(s1: LTerm, s2: LTerm) -> Self {
        LTerm::Comp(Box::new(s1), Box::new(s2))
    }

    /// `up^k` starting at level `m`: `up_m o (up_{m+1} o ... up_{m+k-1})`,
    /// of sort `<m+k, m>`; `id_m` when `k = 0`.
    pub fn shifts(m: usize, k: usize) -> Self {
        if k == 0 {
            return LTerm::Id(m);
        }
        let mut s = LTerm::Shift(m + k - 1);
        for j in (0..k - 1).rev() {
            s = LTerm::comp(LTerm::Shift(m + j), s);
        }
        s
    }

    /// `1[up^j]` at sort `n`, i.e. the normal form of the index `(j+1)_n`.
    pub fn shifted_one(j: usize, n: usize) -> Self {
        if j == 0 {
            LTerm::index(1, n)
        } else {
            LTerm::clos(LTerm::index(1, n - j), LTerm::shifts(n - j, j))
        }
    }

    /// Whether this node is of substitution kind, judged by its head.
    pub fn is_subst(&self) -> bool {
        matches!(self, LTerm::Id(_) | LTerm::Cons(..) | LTerm::Shift(_) | LTerm::Comp(..))
    }

    /// Level of a term-kind node, or the first sort component `n` of a
    /// substitution of sort `<n,p>`, read off the spine without a
    /// signature.
    pub fn level(&self) -> usize {
        match self {
            LTerm::Index { n, .. } => *n,
            LTerm::Var(_) => 0,
            LTerm::App { p, .. } => *p,
            LTerm::Clos(_, s) => s.level(),
            LTerm::Id(n) => *n,
            LTerm::Cons(_, s) => s.level(),
            LTerm::Shift(n) => n + 1,
            LTerm::Comp(_, s2) => s2.level(),
        }
    }

    /// Second component `p` of a substitution of sort `<n,p>`.
    pub fn arity(&self) -> usize {
        match self {
            LTerm::Id(n) => *n,
            LTerm::Cons(_, s) => s.arity() + 1,
            LTerm::Shift(n) => *n,
            LTerm::Comp(s1, _) => s1.arity(),
            _ => 0,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&LTerm> {
        match self {
            LTerm::App { args, .. } => args.iter().collect(),
            LTerm::Clos(a, b) | LTerm::Cons(a, b) | LTerm::Comp(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut LTerm> {
        match self {
            LTerm::App { args, .. } => args.iter_mut().collect(),
            LTerm::Clos(a, b) | LTerm::Cons(a, b) | LTerm::Comp(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn at(&self, path: &Path) -> Option<&LTerm> {
        let mut t = self;
        for &i in &path.0 {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut LTerm> {
        let mut t = self;
        for &i in &path.0 {
            t = t.children_mut().into_iter().nth(i)?;
        }
        Some(t)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            LTerm::Var(x) => {
                out.insert(x.clone());
            }
            _ => {
                for c in self.children() {
                    c.collect_vars(out);
                }
            }
        }
    }

    /// Replaces every occurrence of the variable `x` by `t` (grafting; L′
    /// terms bind no names).
    pub fn graft(&self, x: &str, t: &LTerm) -> LTerm {
        match self {
            LTerm::Var(y) if y == x => t.clone(),
            LTerm::Var(_) | LTerm::Index { .. } | LTerm::Id(_) | LTerm::Shift(_) => self.clone(),
            LTerm::App { f, p, args } => LTerm::App {
                f: f.clone(),
                p: *p,
                args: args.iter().map(|a| a.graft(x, t)).collect(),
            },
            LTerm::Clos(a, b) => LTerm::clos(a.graft(x, t), b.graft(x, t)),
            LTerm::Cons(a, b) => LTerm::cons(a.graft(x, t), b.graft(x, t)),
            LTerm::Comp(a, b) => LTerm::comp(a.graft(x, t), b.graft(x, t)),
        }
    }

    pub(crate) fn rename_var(&self, from: &str, to: &str) -> LTerm {
        self.graft(from, &LTerm::var(to))
    }
}

fn needs_parens_in_operand(t: &LTerm) -> bool {
    matches!(t, LTerm::Cons(..) | LTerm::Comp(..))
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LTerm::Index { i, n } => write!(f, "{i}_{n}"),
            LTerm::Var(x) => write!(f, "{x}"),
            LTerm::App { f: s, p, args } => {
                write!(f, "{s}_{p}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            LTerm::Clos(t, s) => {
                if needs_parens_in_operand(t) {
                    write!(f, "({t})[{s}]")
                } else {
                    write!(f, "{t}[{s}]")
                }
            }
            LTerm::Id(n) => write!(f, "id_{n}"),
            LTerm::Shift(n) => write!(f, "up_{n}"),
            LTerm::Cons(t, s) => {
                if needs_parens_in_operand(t) {
                    write!(f, "({t}) . {s}")
                } else {
                    write!(f, "{t} . {s}")
                }
            }
            LTerm::Comp(a, b) => {
                if needs_parens_in_operand(a) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                if matches!(**b, LTerm::Cons(..)) {
                    write!(f, " o ({b})")
                } else {
                    write!(f, " o {b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_chains_are_right_associated() {
        let s = LTerm::shifts(0, 3);
        assert_eq!(s.to_string(), "up_0 o up_1 o up_2");
        assert_eq!(s.level(), 3);
        assert_eq!(s.arity(), 0);
        assert_eq!(LTerm::shifts(2, 0), LTerm::Id(2));
    }

    #[test]
    fn prints_closures_and_conses() {
        let t = LTerm::clos(LTerm::index(1, 1), LTerm::cons(LTerm::var("t"), LTerm::Id(0)));
        assert_eq!(t.to_string(), "1_1[t . id_0]");
        let u = LTerm::comp(LTerm::comp(LTerm::Shift(0), LTerm::Shift(1)), LTerm::Shift(2));
        assert_eq!(u.to_string(), "(up_0 o up_1) o up_2");
        let v = LTerm::clos(LTerm::app("Lam", 0, [LTerm::index(1, 1)]), LTerm::Id(0));
        assert_eq!(v.to_string(), "Lam_0(1_1)[id_0]");
    }

    #[test]
    fn paths_address_children() {
        let t = LTerm::clos(LTerm::var("x"), LTerm::comp(LTerm::Shift(0), LTerm::Shift(1)));
        assert_eq!(t.at(&Path(vec![1, 1])), Some(&LTerm::Shift(1)));
        assert_eq!(t.at(&Path(vec![2])), None);
    }
}
