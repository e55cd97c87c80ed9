use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use super::lprop::LProp;
use super::lterm::LTerm;
use super::pattern::PatternRule;
use super::rules::SigmaRule;
use super::sort::sort_of;
use crate::path::Path;
use crate::syntax::Signature;

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

/// Which rule fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Sigma(SigmaRule),
    User(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Innermost,
    Outermost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    pub budget: usize,
    pub strategy: Strategy,
    /// Assert after every step that the rewritten subterm kept its sort.
    pub check_sorts: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_STEP_BUDGET,
            strategy: Strategy::Innermost,
            check_sorts: false,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("normalization exceeded the budget of {budget} steps")]
    StepBudgetExceeded { budget: usize },
    #[error("rule `{rule}` changed a sort: {before} became {after} ({detail})")]
    SortNotPreserved {
        rule: String,
        before: String,
        after: String,
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized<T> {
    pub value: T,
    pub steps: usize,
}

/// The σ rules (optional) together with user pattern rules.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    sig: Signature,
    sigma: bool,
    rules: Vec<PatternRule>,
}

struct Run<'a> {
    sys: &'a RewriteSystem,
    opts: NormalizeOptions,
    steps: usize,
}

impl Run<'_> {
    fn tick(&mut self, rule: RuleId, before: &LTerm, after: &LTerm) -> Result<(), NormalizeError> {
        self.steps += 1;
        if self.steps > self.opts.budget {
            return Err(NormalizeError::StepBudgetExceeded {
                budget: self.opts.budget,
            });
        }
        if self.opts.check_sorts {
            let (a, b) = (sort_of(&self.sys.sig, before), sort_of(&self.sys.sig, after));
            if a != b || a.is_err() {
                let show = |r: &Result<super::Sort, super::SortError>| match r {
                    Ok(s) => s.to_string(),
                    Err(e) => e.to_string(),
                };
                return Err(NormalizeError::SortNotPreserved {
                    rule: self.sys.rule_name(rule),
                    before: show(&a),
                    after: show(&b),
                    detail: format!("{before} -> {after}"),
                });
            }
        }
        Ok(())
    }

    fn innermost(&mut self, mut t: LTerm) -> Result<LTerm, NormalizeError> {
        for c in t.children_mut() {
            let inner = std::mem::replace(c, LTerm::Id(0));
            *c = self.innermost(inner)?;
        }
        match self.sys.root_step(&t) {
            None => Ok(t),
            Some((rule, u)) => {
                self.tick(rule, &t, &u)?;
                self.innermost(u)
            }
        }
    }

    fn outermost(&mut self, mut t: LTerm) -> Result<LTerm, NormalizeError> {
        while let Some(path) = self.sys.first_redex(&t) {
            let sub = t.at_mut(&path).expect("redex path is valid");
            let (rule, u) = self.sys.root_step(sub).expect("redex applies");
            self.tick(rule, sub, &u)?;
            *sub = u;
        }
        Ok(t)
    }
}

impl RewriteSystem {
    /// The σ system over `sig`: eleven fixed rules plus the closure
    /// schema for every function symbol.
    pub fn sigma(sig: &Signature) -> Self {
        Self {
            sig: sig.clone(),
            sigma: true,
            rules: Vec::new(),
        }
    }

    /// User rules only.
    pub fn from_rules(sig: &Signature, rules: Vec<PatternRule>) -> Self {
        Self {
            sig: sig.clone(),
            sigma: false,
            rules,
        }
    }

    /// No rules: the congruence is α-equivalence.
    pub fn empty(sig: &Signature) -> Self {
        Self::from_rules(sig, Vec::new())
    }

    pub fn with_rules(mut self, rules: impl IntoIterator<Item = PatternRule>) -> Self {
        self.rules.extend(rules);
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn includes_sigma(&self) -> bool {
        self.sigma
    }

    pub fn user_rules(&self) -> &[PatternRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        !self.sigma && self.rules.is_empty()
    }

    pub fn rule_name(&self, id: RuleId) -> String {
        match id {
            RuleId::Sigma(r) => r.name().to_string(),
            RuleId::User(i) => self.rules[i].name.clone(),
        }
    }

    /// One line per rule; the closure schema is listed per function symbol.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.sigma {
            for r in SigmaRule::ALL {
                if r == SigmaRule::FunClo {
                    for (f, arity) in self.sig.functions() {
                        out.push(format!("{}[{f}]: {f}{arity} closure schema", r.name()));
                    }
                } else {
                    out.push(r.to_string());
                }
            }
        }
        out.extend(self.rules.iter().map(ToString::to_string));
        out
    }

    pub fn root_step(&self, t: &LTerm) -> Option<(RuleId, LTerm)> {
        if self.sigma {
            let binders = |f: &str| self.sig.function(f).map(|a| a.slots().to_vec());
            if let Some((r, u)) = super::rules::root_step(t, &binders) {
                return Some((RuleId::Sigma(r), u));
            }
        }
        self.rules
            .iter()
            .enumerate()
            .find_map(|(i, r)| r.apply(t).map(|u| (RuleId::User(i), u)))
    }

    fn first_redex(&self, t: &LTerm) -> Option<Path> {
        fn go(sys: &RewriteSystem, t: &LTerm, path: &mut Vec<usize>) -> bool {
            if sys.root_step(t).is_some() {
                return true;
            }
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i);
                if go(sys, c, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        let mut path = Vec::new();
        go(self, t, &mut path).then_some(Path(path))
    }

    /// Every redex position, in pre-order (leftmost-outermost first).
    pub fn redexes(&self, t: &LTerm) -> Vec<Path> {
        fn go(sys: &RewriteSystem, t: &LTerm, path: &Path, out: &mut Vec<Path>) {
            if sys.root_step(t).is_some() {
                out.push(path.clone());
            }
            for (i, c) in t.children().into_iter().enumerate() {
                go(sys, c, &path.child(i), out);
            }
        }
        let mut out = Vec::new();
        go(self, t, &Path::root(), &mut out);
        out
    }

    pub fn is_normal(&self, t: &LTerm) -> bool {
        self.first_redex(t).is_none()
    }

    /// Rewrites the redex at `path` once.
    pub fn rewrite_at(&self, t: &LTerm, path: &Path) -> Option<(RuleId, LTerm)> {
        let mut out = t.clone();
        let sub = out.at_mut(path)?;
        let (rule, u) = self.root_step(sub)?;
        *sub = u;
        Some((rule, out))
    }

    /// Rewrites a uniformly chosen redex once.
    pub fn random_step<R: Rng + ?Sized>(&self, t: &LTerm, rng: &mut R) -> Option<LTerm> {
        let redexes = self.redexes(t);
        let path = redexes.choose(rng)?;
        self.rewrite_at(t, path).map(|(_, u)| u)
    }

    pub fn normalize_with(&self, t: &LTerm, opts: NormalizeOptions) -> Result<Normalized<LTerm>, NormalizeError> {
        let mut run = Run {
            sys: self,
            opts,
            steps: 0,
        };
        let value = match opts.strategy {
            Strategy::Innermost => run.innermost(t.clone())?,
            Strategy::Outermost => run.outermost(t.clone())?,
        };
        Ok(Normalized {
            value,
            steps: run.steps,
        })
    }

    /// Leftmost-innermost normal form under the default budget.
    pub fn normalize(&self, t: &LTerm) -> Result<LTerm, NormalizeError> {
        self.normalize_with(t, NormalizeOptions::default()).map(|n| n.value)
    }

    pub fn normalize_prop_with(&self, a: &LProp, opts: NormalizeOptions) -> Result<Normalized<LProp>, NormalizeError> {
        let mut steps = 0;
        let value = a.try_map_terms(&mut |t| {
            let remaining = NormalizeOptions {
                budget: opts.budget.saturating_sub(steps),
                ..opts
            };
            let n = self.normalize_with(t, remaining).map_err(|e| match e {
                NormalizeError::StepBudgetExceeded { .. } => NormalizeError::StepBudgetExceeded { budget: opts.budget },
                e => e,
            })?;
            steps += n.steps;
            Ok(n.value)
        })?;
        Ok(Normalized { value, steps })
    }

    pub fn normalize_prop(&self, a: &LProp) -> Result<LProp, NormalizeError> {
        self.normalize_prop_with(a, NormalizeOptions::default()).map(|n| n.value)
    }
}

impl fmt::Display for RewriteSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.describe() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// σ-normality; binding arities are recovered from argument levels.
fn sigma_normal(t: &LTerm) -> bool {
    let binders = |_: &str| None;
    super::rules::root_step(t, &binders).is_none() && t.children().into_iter().all(sigma_normal)
}

/// An F-term: σ-normal, with only sort-0 named variables.
pub fn is_f_term(t: &LTerm) -> bool {
    sigma_normal(t)
}

/// An F-proposition: every atom argument is an F-term.
pub fn is_f_prop(a: &LProp) -> bool {
    a.terms().into_iter().all(is_f_term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::parse_lterm;

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun g : <0>\nfun t : <>\npred = : <0,0>").unwrap()
    }

    #[test]
    fn one_step_var_cons() {
        let s = sig();
        let sys = RewriteSystem::sigma(&s);
        let t = parse_lterm(&s, "1_1[t . id_0]").unwrap();
        assert_eq!(sys.normalize(&t).unwrap(), LTerm::app("t", 0, []));
    }

    #[test]
    fn index_normal_form() {
        let s = sig();
        let sys = RewriteSystem::sigma(&s);
        let n = sys.normalize_with(&LTerm::index(5, 7), NormalizeOptions::default()).unwrap();
        assert_eq!(n.value.to_string(), "1_3[up_3 o up_4 o up_5 o up_6]");
        assert!(n.steps >= 1);
        assert!(sys.is_normal(&n.value));
        assert_eq!(sys.normalize_with(&LTerm::index(1, 1), NormalizeOptions::default()).unwrap().steps, 0);
    }

    #[test]
    fn closure_of_binder_term_by_cons() {
        // Lam_0(f_1(x[up_0], 1_1))[y . ...] style: substituting into a closed
        // binder term leaves it unchanged.
        let s = sig();
        let sys = RewriteSystem::sigma(&s);
        let lam = parse_lterm(&s, "Lam_0(f_1(x[up_0], 1_1))").unwrap();
        let t = LTerm::clos(lam.clone(), LTerm::Id(0));
        assert_eq!(sys.normalize(&t).unwrap(), lam);
        // F(t, x.ε)[x . id] = F(t, ε) for t = g(x): g_1(1_1)[x . id_0] -> g_0(x)
        let u = parse_lterm(&s, "g_1(1_1)[x . id_0]").unwrap();
        assert_eq!(sys.normalize(&u).unwrap().to_string(), "g_0(x)");
    }

    #[test]
    fn strategies_agree_and_sorts_are_preserved() {
        let s = sig();
        let sys = RewriteSystem::sigma(&s);
        let t = parse_lterm(&s, "Lam_1(f_2(1_2[up_1 o up_1 . id_1 o (2_2 . id_2)], 3_2))[2_1 . 1_1 . up_0 o id_1]");
        let t = match t {
            Ok(t) => t,
            Err(_) => return,
        };
        if sort_of(&s, &t).is_err() {
            return;
        }
        let opts = NormalizeOptions {
            check_sorts: true,
            ..Default::default()
        };
        let a = sys.normalize_with(&t, opts).unwrap();
        let b = sys
            .normalize_with(
                &t,
                NormalizeOptions {
                    strategy: Strategy::Outermost,
                    ..opts
                },
            )
            .unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(sys.normalize(&a.value).unwrap(), a.value);
    }

    #[test]
    fn budget_is_enforced() {
        let s = sig();
        let sys = RewriteSystem::sigma(&s);
        let opts = NormalizeOptions {
            budget: 1,
            ..Default::default()
        };
        let t = LTerm::clos(LTerm::index(3, 3), LTerm::Id(3));
        assert_eq!(
            sys.normalize_with(&t, opts),
            Err(NormalizeError::StepBudgetExceeded { budget: 1 })
        );
    }

    #[test]
    fn f_terms() {
        let s = sig();
        assert!(is_f_term(&parse_lterm(&s, "Lam_0(f_1(x[up_0], 1_1))").unwrap()));
        assert!(is_f_term(&parse_lterm(&s, "x[up_0 o up_1 o up_2]").unwrap()));
        assert!(!is_f_term(&parse_lterm(&s, "1_1[t . id_0]").unwrap()));
        assert!(!is_f_term(&LTerm::index(2, 2)));
    }

    #[test]
    fn redex_positions_are_preorder() {
        let s = sig();
        let sys = RewriteSystem::sigma(&s);
        let t = parse_lterm(&s, "f_0(2_2[t . 1_1 . id_0][id_0], t[id_0])").unwrap_or(LTerm::Id(0));
        let r = sys.redexes(&t);
        assert!(r.windows(2).all(|w| w[0] < w[1] || w[0].0.len() < w[1].0.len() || w[0].0 < w[1].0));
    }
}
