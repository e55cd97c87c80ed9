//! User rewrite rules over L′ with term metavariables `?t` and numeric
//! metavariables `?n` (optionally offset, `?n+1`) in level subscripts.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::lterm::LTerm;
use crate::lex::ParseError;
use crate::syntax::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Num {
    Lit(usize),
    /// `?name+offset`
    Meta(String, usize),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Lit(n) => write!(f, "{n}"),
            Num::Meta(m, 0) => write!(f, "?{m}"),
            Num::Meta(m, k) => write!(f, "?{m}+{k}"),
        }
    }
}

/// An L′ term with metavariables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pat {
    Meta(String),
    Index(usize, Num),
    Var(String),
    App(String, Num, Vec<Pat>),
    Clos(Box<Pat>, Box<Pat>),
    Id(Num),
    Cons(Box<Pat>, Box<Pat>),
    Shift(Num),
    Comp(Box<Pat>, Box<Pat>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub terms: BTreeMap<String, LTerm>,
    pub nums: BTreeMap<String, usize>,
}

impl Num {
    fn matches(&self, v: usize, b: &mut Bindings) -> bool {
        match self {
            Num::Lit(c) => *c == v,
            Num::Meta(m, off) => {
                if v < *off {
                    return false;
                }
                match b.nums.get(m) {
                    Some(x) => *x == v - off,
                    None => {
                        b.nums.insert(m.clone(), v - off);
                        true
                    }
                }
            }
        }
    }

    fn value(&self, b: &Bindings) -> Option<usize> {
        match self {
            Num::Lit(c) => Some(*c),
            Num::Meta(m, off) => b.nums.get(m).map(|v| v + off),
        }
    }
}

impl Pat {
    pub fn from_lterm(t: &LTerm) -> Pat {
        match t {
            LTerm::Index { i, n } => Pat::Index(*i, Num::Lit(*n)),
            LTerm::Var(x) => Pat::Var(x.clone()),
            LTerm::App { f, p, args } => Pat::App(f.clone(), Num::Lit(*p), args.iter().map(Pat::from_lterm).collect()),
            LTerm::Clos(a, b) => Pat::Clos(Box::new(Pat::from_lterm(a)), Box::new(Pat::from_lterm(b))),
            LTerm::Id(n) => Pat::Id(Num::Lit(*n)),
            LTerm::Cons(a, b) => Pat::Cons(Box::new(Pat::from_lterm(a)), Box::new(Pat::from_lterm(b))),
            LTerm::Shift(n) => Pat::Shift(Num::Lit(*n)),
            LTerm::Comp(a, b) => Pat::Comp(Box::new(Pat::from_lterm(a)), Box::new(Pat::from_lterm(b))),
        }
    }

    /// The term denoted by a metavariable-free pattern.
    pub fn to_lterm(&self) -> Option<LTerm> {
        self.instantiate(&Bindings::default())
    }

    pub fn has_metas(&self) -> bool {
        !self.metas().is_empty() || self.num_metas_present()
    }

    fn num_metas_present(&self) -> bool {
        let is_meta = |n: &Num| matches!(n, Num::Meta(..));
        match self {
            Pat::Index(_, n) | Pat::Id(n) | Pat::Shift(n) => is_meta(n),
            Pat::App(_, n, args) => is_meta(n) || args.iter().any(Pat::num_metas_present),
            Pat::Clos(a, b) | Pat::Cons(a, b) | Pat::Comp(a, b) => a.num_metas_present() || b.num_metas_present(),
            Pat::Meta(_) | Pat::Var(_) => false,
        }
    }

    /// Term metavariables, in first-occurrence order.
    pub fn metas(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut Vec<String>) {
        match self {
            Pat::Meta(m) => {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
            Pat::App(_, _, args) => args.iter().for_each(|a| a.collect_metas(out)),
            Pat::Clos(a, b) | Pat::Cons(a, b) | Pat::Comp(a, b) => {
                a.collect_metas(out);
                b.collect_metas(out);
            }
            _ => {}
        }
    }

    fn num_metas(&self, out: &mut Vec<String>) {
        let mut add = |n: &Num| {
            if let Num::Meta(m, _) = n {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
        };
        match self {
            Pat::Index(_, n) | Pat::Id(n) | Pat::Shift(n) => add(n),
            Pat::App(_, n, args) => {
                add(n);
                args.iter().for_each(|a| a.num_metas(out));
            }
            Pat::Clos(a, b) | Pat::Cons(a, b) | Pat::Comp(a, b) => {
                a.num_metas(out);
                b.num_metas(out);
            }
            Pat::Meta(_) | Pat::Var(_) => {}
        }
    }

    pub fn matches(&self, t: &LTerm, b: &mut Bindings) -> bool {
        match (self, t) {
            (Pat::Meta(m), _) => match b.terms.get(m) {
                Some(u) => u == t,
                None => {
                    b.terms.insert(m.clone(), t.clone());
                    true
                }
            },
            (Pat::Index(i, n), LTerm::Index { i: j, n: m }) => i == j && n.matches(*m, b),
            (Pat::Var(x), LTerm::Var(y)) => x == y,
            (Pat::App(f, p, args), LTerm::App { f: g, p: q, args: targs }) => {
                f == g
                    && args.len() == targs.len()
                    && p.matches(*q, b)
                    && args.iter().zip(targs).all(|(a, u)| a.matches(u, b))
            }
            (Pat::Clos(a, c), LTerm::Clos(u, v)) | (Pat::Cons(a, c), LTerm::Cons(u, v)) | (Pat::Comp(a, c), LTerm::Comp(u, v)) => {
                a.matches(u, b) && c.matches(v, b)
            }
            (Pat::Id(n), LTerm::Id(m)) | (Pat::Shift(n), LTerm::Shift(m)) => n.matches(*m, b),
            _ => false,
        }
    }

    pub fn instantiate(&self, b: &Bindings) -> Option<LTerm> {
        Some(match self {
            Pat::Meta(m) => b.terms.get(m)?.clone(),
            Pat::Index(i, n) => LTerm::index(*i, n.value(b)?),
            Pat::Var(x) => LTerm::var(x.clone()),
            Pat::App(f, p, args) => LTerm::App {
                f: f.clone(),
                p: p.value(b)?,
                args: args.iter().map(|a| a.instantiate(b)).collect::<Option<_>>()?,
            },
            Pat::Clos(x, y) => LTerm::clos(x.instantiate(b)?, y.instantiate(b)?),
            Pat::Id(n) => LTerm::Id(n.value(b)?),
            Pat::Cons(x, y) => LTerm::cons(x.instantiate(b)?, y.instantiate(b)?),
            Pat::Shift(n) => LTerm::Shift(n.value(b)?),
            Pat::Comp(x, y) => LTerm::comp(x.instantiate(b)?, y.instantiate(b)?),
        })
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, p: &Pat) -> fmt::Result {
    if matches!(p, Pat::Cons(..) | Pat::Comp(..)) {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

fn level(f: &mut fmt::Formatter<'_>, n: &Num) -> fmt::Result {
    match n {
        Num::Lit(k) => write!(f, "_{k}"),
        Num::Meta(..) => write!(f, "_{n}"),
    }
}

impl fmt::Display for Pat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pat::Meta(m) => write!(f, "?{m}"),
            Pat::Index(i, n) => {
                write!(f, "{i}")?;
                level(f, n)
            }
            Pat::Var(x) => write!(f, "{x}"),
            Pat::App(s, p, args) => {
                write!(f, "{s}")?;
                level(f, p)?;
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
            Pat::Clos(t, s) => {
                wrap(f, t)?;
                write!(f, "[{s}]")
            }
            Pat::Id(n) => {
                write!(f, "id")?;
                level(f, n)
            }
            Pat::Shift(n) => {
                write!(f, "up")?;
                level(f, n)
            }
            Pat::Cons(t, s) => {
                wrap(f, t)?;
                write!(f, " . {s}")
            }
            Pat::Comp(a, b) => {
                wrap(f, a)?;
                write!(f, " o ")?;
                if matches!(**b, Pat::Cons(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("rule `{rule}`: the left-hand side is a lone metavariable")]
    LoneMeta { rule: String },
    #[error("rule `{rule}`: metavariable `{meta}` occurs only on the right")]
    UnboundMeta { rule: String, meta: String },
    #[error("rule `{rule}` does not preserve sorts: {msg}")]
    SortsNotPreserved { rule: String, msg: String },
}

/// A named rewrite rule `lhs -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternRule {
    pub name: String,
    pub lhs: Pat,
    pub rhs: Pat,
}

impl fmt::Display for PatternRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.lhs, self.rhs)
    }
}

impl PatternRule {
    /// Builds a rule after the load-time checks: the left side is not a
    /// lone metavariable, right-side metavariables occur on the left, and
    /// every instance of the right side has the sort of the left side.
    pub fn new(sig: &Signature, name: impl Into<String>, lhs: Pat, rhs: Pat) -> Result<Self, RuleError> {
        let name = name.into();
        if matches!(lhs, Pat::Meta(_)) {
            return Err(RuleError::LoneMeta { rule: name });
        }
        let left = lhs.metas();
        if let Some(m) = rhs.metas().into_iter().find(|m| !left.contains(m)) {
            return Err(RuleError::UnboundMeta { rule: name, meta: m });
        }
        let (mut ln, mut rn) = (Vec::new(), Vec::new());
        lhs.num_metas(&mut ln);
        rhs.num_metas(&mut rn);
        if let Some(m) = rn.into_iter().find(|m| !ln.contains(m)) {
            return Err(RuleError::UnboundMeta { rule: name, meta: m });
        }
        check_sorts(sig, &lhs, &rhs).map_err(|msg| RuleError::SortsNotPreserved {
            rule: name.clone(),
            msg,
        })?;
        Ok(Self { name, lhs, rhs })
    }

    pub fn apply(&self, t: &LTerm) -> Option<LTerm> {
        let mut b = Bindings::default();
        if self.lhs.matches(t, &mut b) {
            self.rhs.instantiate(&b)
        } else {
            None
        }
    }
}

/// Parses a rule file: one `name: lhs -> rhs` per line, `#` comments.
pub fn parse_rules(sig: &Signature, text: &str) -> Result<Vec<PatternRule>, RuleError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |msg: &str| RuleError::Malformed {
            line: line_no,
            msg: msg.to_string(),
        };
        let (name, body) = line.split_once(':').ok_or_else(|| malformed("expected `name: lhs -> rhs`"))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(malformed("missing rule name"));
        }
        let (lhs, rhs) = body.split_once("->").ok_or_else(|| malformed("expected `->`"))?;
        let relocate = |mut e: ParseError| {
            e.line = line_no;
            e
        };
        let lhs = super::parse::parse_pattern(sig, lhs).map_err(relocate)?;
        let rhs = super::parse::parse_pattern(sig, rhs).map_err(relocate)?;
        rules.push(PatternRule::new(sig, name, lhs, rhs)?);
    }
    Ok(rules)
}

// Sort inference over patterns with a small unifier. Numeric expressions
// are `var + offset` or constants; a sort is a term sort, a substitution
// sort, or an unknown.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct NE {
    var: Option<usize>,
    off: i64,
}

impl NE {
    fn lit(c: usize) -> Self {
        NE { var: None, off: c as i64 }
    }

    fn plus(self, k: i64) -> Self {
        NE { var: self.var, off: self.off + k }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SE {
    Term(NE),
    Subst(NE, NE),
    Var(usize),
}

#[derive(Default)]
struct Unifier {
    nums: Vec<Option<NE>>,
    sorts: Vec<Option<SE>>,
    rigid_nums: usize,
    rigid_sorts: usize,
    num_names: BTreeMap<String, usize>,
    meta_sorts: BTreeMap<String, usize>,
}

impl Unifier {
    fn fresh_num(&mut self) -> NE {
        self.nums.push(None);
        NE {
            var: Some(self.nums.len() - 1),
            off: 0,
        }
    }

    fn num(&mut self, n: &Num) -> NE {
        match n {
            Num::Lit(c) => NE::lit(*c),
            Num::Meta(m, k) => {
                let v = match self.num_names.get(m) {
                    Some(v) => *v,
                    None => {
                        let v = self.fresh_num().var.unwrap();
                        self.num_names.insert(m.clone(), v);
                        v
                    }
                };
                NE {
                    var: Some(v),
                    off: *k as i64,
                }
            }
        }
    }

    fn resolve_num(&self, mut e: NE) -> NE {
        while let Some(v) = e.var {
            match self.nums[v] {
                Some(b) => e = b.plus(e.off),
                None => break,
            }
        }
        e
    }

    fn resolve_sort(&self, mut s: SE) -> SE {
        while let SE::Var(v) = s {
            match self.sorts[v] {
                Some(b) => s = b,
                None => break,
            }
        }
        s
    }

    fn unify_num(&mut self, a: NE, b: NE) -> Result<(), String> {
        let (a, b) = (self.resolve_num(a), self.resolve_num(b));
        match (a.var, b.var) {
            (None, None) if a.off == b.off => Ok(()),
            (Some(x), Some(y)) if x == y => {
                if a.off == b.off {
                    Ok(())
                } else {
                    Err("a level would have to differ from itself".into())
                }
            }
            (Some(x), _) if x >= self.rigid_nums => {
                self.nums[x] = Some(b.plus(-a.off));
                Ok(())
            }
            (_, Some(y)) if y >= self.rigid_nums => {
                self.nums[y] = Some(a.plus(-b.off));
                Ok(())
            }
            _ => Err("levels fixed by the left-hand side disagree".into()),
        }
    }

    fn unify(&mut self, a: SE, b: SE) -> Result<(), String> {
        let (a, b) = (self.resolve_sort(a), self.resolve_sort(b));
        match (a, b) {
            (SE::Var(x), SE::Var(y)) if x == y => Ok(()),
            (SE::Var(x), other) | (other, SE::Var(x)) if x >= self.rigid_sorts => {
                self.sorts[x] = Some(other);
                Ok(())
            }
            (SE::Term(x), SE::Term(y)) => self.unify_num(x, y),
            (SE::Subst(x1, y1), SE::Subst(x2, y2)) => {
                self.unify_num(x1, x2)?;
                self.unify_num(y1, y2)
            }
            (SE::Var(_), _) | (_, SE::Var(_)) => Err("a metavariable would need a more specific sort".into()),
            _ => Err("a term sort meets a substitution sort".into()),
        }
    }

    fn infer(&mut self, sig: &Signature, p: &Pat) -> Result<SE, String> {
        Ok(match p {
            Pat::Meta(m) => {
                let v = match self.meta_sorts.get(m) {
                    Some(v) => *v,
                    None => {
                        self.sorts.push(None);
                        let v = self.sorts.len() - 1;
                        self.meta_sorts.insert(m.clone(), v);
                        v
                    }
                };
                SE::Var(v)
            }
            Pat::Index(_, n) => SE::Term(self.num(n)),
            Pat::Var(_) => SE::Term(NE::lit(0)),
            Pat::App(f, lvl, args) => {
                let arity = sig.function(f).ok_or_else(|| format!("unknown symbol `{f}`"))?;
                if arity.len() != args.len() {
                    return Err(format!("`{f}` expects {} arguments", arity.len()));
                }
                let p = self.num(lvl);
                for (k, a) in arity.slots().iter().zip(args) {
                    let s = self.infer(sig, a)?;
                    self.unify(s, SE::Term(p.plus(*k as i64)))?;
                }
                SE::Term(p)
            }
            Pat::Clos(t, s) => {
                let (a, b) = (self.fresh_num(), self.fresh_num());
                let st = self.infer(sig, t)?;
                self.unify(st, SE::Term(a))?;
                let ss = self.infer(sig, s)?;
                self.unify(ss, SE::Subst(b, a))?;
                SE::Term(b)
            }
            Pat::Id(n) => {
                let n = self.num(n);
                SE::Subst(n, n)
            }
            Pat::Shift(n) => {
                let n = self.num(n);
                SE::Subst(n.plus(1), n)
            }
            Pat::Cons(t, s) => {
                let (a, b) = (self.fresh_num(), self.fresh_num());
                let st = self.infer(sig, t)?;
                self.unify(st, SE::Term(a))?;
                let ss = self.infer(sig, s)?;
                self.unify(ss, SE::Subst(a, b))?;
                SE::Subst(a, b.plus(1))
            }
            Pat::Comp(s1, s2) => {
                let (p, n, q) = (self.fresh_num(), self.fresh_num(), self.fresh_num());
                let a = self.infer(sig, s1)?;
                self.unify(a, SE::Subst(p, n))?;
                let b = self.infer(sig, s2)?;
                self.unify(b, SE::Subst(q, p))?;
                SE::Subst(q, n)
            }
        })
    }
}

fn check_sorts(sig: &Signature, lhs: &Pat, rhs: &Pat) -> Result<(), String> {
    let mut u = Unifier::default();
    let ls = u.infer(sig, lhs)?;
    u.rigid_nums = u.nums.len();
    u.rigid_sorts = u.sorts.len();
    let rs = u.infer(sig, rhs)?;
    u.unify(ls, rs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::parse::parse_pattern;

    fn arith() -> Signature {
        Signature::parse("fun zero : <>\nfun S : <0>\nfun plus : <0,0>\nfun times : <0,0>\nfun Lam : <1>").unwrap()
    }

    #[test]
    fn parses_and_applies_first_order_rules() {
        let rules = parse_rules(
            &arith(),
            "# arithmetic\nplus0: plus(zero, ?y) -> ?y\nplusS: plus(S(?x), ?y) -> S(plus(?x, ?y))\n",
        )
        .unwrap();
        assert_eq!(rules.len(), 2);
        let t = crate::sigma::parse_lterm(&arith(), "plus(S(zero), zero)").unwrap();
        assert_eq!(rules[1].apply(&t).unwrap().to_string(), "S_0(plus_0(zero_0, zero_0))");
    }

    #[test]
    fn numeric_metavariables() {
        let sig = arith();
        let r = PatternRule::new(
            &sig,
            "idl",
            parse_pattern(&sig, "id_?n o ?s").unwrap(),
            parse_pattern(&sig, "?s").unwrap(),
        )
        .unwrap();
        let t = LTerm::comp(LTerm::Id(2), LTerm::Shift(1));
        assert_eq!(r.apply(&t), Some(LTerm::Shift(1)));
        let lifted = parse_pattern(&sig, "plus_?p(zero_?p, ?y)").unwrap();
        let r = PatternRule::new(&sig, "plus0", lifted, Pat::Meta("y".into())).unwrap();
        let t = LTerm::app("plus", 1, [LTerm::app("zero", 1, []), LTerm::index(1, 1)]);
        assert_eq!(r.apply(&t), Some(LTerm::index(1, 1)));
    }

    #[test]
    fn load_time_checks() {
        let sig = arith();
        let p = |s: &str| parse_pattern(&sig, s).unwrap();
        assert!(matches!(PatternRule::new(&sig, "r", p("?x"), p("zero")), Err(RuleError::LoneMeta { .. })));
        assert!(matches!(
            PatternRule::new(&sig, "r", p("S(?x)"), p("?y")),
            Err(RuleError::UnboundMeta { .. })
        ));
        // A sort-1 index cannot replace a sort-0 term.
        assert!(matches!(
            PatternRule::new(&sig, "r", p("S(?x)"), p("1_1")),
            Err(RuleError::SortsNotPreserved { .. })
        ));
        // t[s] -> t changes the sort unless s is square.
        assert!(matches!(
            PatternRule::new(&sig, "r", p("?t[?s]"), p("?t")),
            Err(RuleError::SortsNotPreserved { .. })
        ));
        assert!(PatternRule::new(&sig, "r", p("?t[id_?n]"), p("?t")).is_ok());
        assert!(PatternRule::new(&sig, "r", p("1_?n+1 . up_?n"), p("id_?n+1")).is_ok());
        assert!(PatternRule::new(&sig, "r", p("1_?n+1 . up_?n"), p("id_?n")).is_err());
    }
}
