//! The twelve rules of the σ system, as sort-polymorphic schemas whose
//! numeric annotations are read off the matched subterm.

use std::fmt;

use super::lterm::LTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SigmaRule {
    /// `n+1 -> 1[up^n]`
    IndexShift,
    /// `1[t . s] -> t`
    VarCons,
    /// `t[id] -> t`
    CloId,
    /// `t[s][s'] -> t[s o s']`
    CloClo,
    /// `id o s -> s`
    IdL,
    /// `up o (t . s) -> s`
    ShiftCons,
    /// `(s1 o s2) o s3 -> s1 o (s2 o s3)`
    Assoc,
    /// `(t . s) o s' -> t[s'] . (s o s')`
    Map,
    /// `s o id -> s`
    IdR,
    /// `1 . up -> id`
    VarShift,
    /// `1[s] . (up o s) -> s`
    SCons,
    /// `f_p(t1, ..., tn)[s] -> f_q(t1[1 . 1[up] ... 1[up^(k1-1)] . s o up^k1], ...)`
    FunClo,
}

impl SigmaRule {
    pub const ALL: [SigmaRule; 12] = [
        SigmaRule::IndexShift,
        SigmaRule::VarCons,
        SigmaRule::CloId,
        SigmaRule::CloClo,
        SigmaRule::IdL,
        SigmaRule::ShiftCons,
        SigmaRule::Assoc,
        SigmaRule::Map,
        SigmaRule::IdR,
        SigmaRule::VarShift,
        SigmaRule::SCons,
        SigmaRule::FunClo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SigmaRule::IndexShift => "index",
            SigmaRule::VarCons => "var-cons",
            SigmaRule::CloId => "clo-id",
            SigmaRule::CloClo => "clo-clo",
            SigmaRule::IdL => "id-left",
            SigmaRule::ShiftCons => "shift-cons",
            SigmaRule::Assoc => "assoc",
            SigmaRule::Map => "map",
            SigmaRule::IdR => "id-right",
            SigmaRule::VarShift => "var-shift",
            SigmaRule::SCons => "scons",
            SigmaRule::FunClo => "fun-clo",
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            SigmaRule::IndexShift => "n+1 -> 1[up^n]",
            SigmaRule::VarCons => "1[t . s] -> t",
            SigmaRule::CloId => "t[id] -> t",
            SigmaRule::CloClo => "t[s][s'] -> t[s o s']",
            SigmaRule::IdL => "id o s -> s",
            SigmaRule::ShiftCons => "up o (t . s) -> s",
            SigmaRule::Assoc => "(s1 o s2) o s3 -> s1 o (s2 o s3)",
            SigmaRule::Map => "(t . s) o s' -> t[s'] . (s o s')",
            SigmaRule::IdR => "s o id -> s",
            SigmaRule::VarShift => "1 . up -> id",
            SigmaRule::SCons => "1[s] . (up o s) -> s",
            SigmaRule::FunClo => "f_p(t1, ..., tn)[s] -> f_q(t1[1 . 1[up] ... 1[up^(k1-1)] . s o up^k1], ...)",
        }
    }

    /// Applies the rule at the root of `t`, if it matches. `binders`
    /// gives the binding arity of a symbol; when it is unknown the arity is
    /// recovered from the levels of the arguments.
    pub fn apply(self, t: &LTerm, binders: &dyn Fn(&str) -> Option<Vec<usize>>) -> Option<LTerm> {
        match (self, t) {
            (SigmaRule::IndexShift, LTerm::Index { i, n }) if *i >= 2 => {
                let k = i - 1;
                Some(LTerm::shifted_one(k, *n))
            }
            (SigmaRule::VarCons, LTerm::Clos(a, s)) => match (&**a, &**s) {
                (LTerm::Index { i: 1, .. }, LTerm::Cons(t, _)) => Some((**t).clone()),
                _ => None,
            },
            (SigmaRule::CloId, LTerm::Clos(a, s)) if matches!(**s, LTerm::Id(_)) => Some((**a).clone()),
            (SigmaRule::CloClo, LTerm::Clos(a, s2)) => match &**a {
                LTerm::Clos(t, s1) => Some(LTerm::clos((**t).clone(), LTerm::comp((**s1).clone(), (**s2).clone()))),
                _ => None,
            },
            (SigmaRule::IdL, LTerm::Comp(a, s)) if matches!(**a, LTerm::Id(_)) => Some((**s).clone()),
            (SigmaRule::ShiftCons, LTerm::Comp(a, b)) => match (&**a, &**b) {
                (LTerm::Shift(_), LTerm::Cons(_, s)) => Some((**s).clone()),
                _ => None,
            },
            (SigmaRule::Assoc, LTerm::Comp(a, s3)) => match &**a {
                LTerm::Comp(s1, s2) => Some(LTerm::comp(
                    (**s1).clone(),
                    LTerm::comp((**s2).clone(), (**s3).clone()),
                )),
                _ => None,
            },
            (SigmaRule::Map, LTerm::Comp(a, s2)) => match &**a {
                LTerm::Cons(t, s) => Some(LTerm::cons(
                    LTerm::clos((**t).clone(), (**s2).clone()),
                    LTerm::comp((**s).clone(), (**s2).clone()),
                )),
                _ => None,
            },
            (SigmaRule::IdR, LTerm::Comp(s, b)) if matches!(**b, LTerm::Id(_)) => Some((**s).clone()),
            (SigmaRule::VarShift, LTerm::Cons(a, b)) => match (&**a, &**b) {
                (LTerm::Index { i: 1, n }, LTerm::Shift(m)) if *n == m + 1 => Some(LTerm::Id(*n)),
                _ => None,
            },
            (SigmaRule::SCons, LTerm::Cons(a, b)) => match (&**a, &**b) {
                (LTerm::Clos(one, s), LTerm::Comp(up, s2))
                    if matches!(**one, LTerm::Index { i: 1, .. }) && matches!(**up, LTerm::Shift(_)) && s == s2 =>
                {
                    Some((**s).clone())
                }
                _ => None,
            },
            (SigmaRule::FunClo, LTerm::Clos(a, s)) => match &**a {
                LTerm::App { f, p, args } => {
                    let q = s.level();
                    let ks = binders(f)
                        .filter(|ks| ks.len() == args.len())
                        .unwrap_or_else(|| args.iter().map(|t| t.level().saturating_sub(*p)).collect());
                    let args = args
                        .iter()
                        .zip(ks)
                        .map(|(t, k)| LTerm::clos(t.clone(), lift(s, q, k)))
                        .collect();
                    Some(LTerm::App {
                        f: f.clone(),
                        p: q,
                        args,
                    })
                }
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for SigmaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name(), self.text())
    }
}

/// `1 . 1[up] . ... . 1[up^(k-1)] . s o up^k` for `s` of sort `<q,p>`,
/// a substitution of sort `<q+k, p+k>`. For `k = 0` this is `s` itself.
pub fn lift(s: &LTerm, q: usize, k: usize) -> LTerm {
    if k == 0 {
        return s.clone();
    }
    let mut out = LTerm::comp(s.clone(), LTerm::shifts(q, k));
    for j in (0..k).rev() {
        out = LTerm::cons(LTerm::shifted_one(j, q + k), out);
    }
    out
}

/// The first rule (in [`SigmaRule::ALL`] order) that applies at the root.
pub fn root_step(t: &LTerm, binders: &dyn Fn(&str) -> Option<Vec<usize>>) -> Option<(SigmaRule, LTerm)> {
    SigmaRule::ALL
        .iter()
        .find_map(|r| r.apply(t, binders).map(|u| (*r, u)))
}
