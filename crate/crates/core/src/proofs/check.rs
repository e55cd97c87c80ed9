//! Rule-by-rule proof checking.
//!
//! Contexts are positional: the principal formula is removed from its side
//! and the active formulas of a premise are appended, in order, at the end
//! of their side. Everything else must match the conclusion position by
//! position.

use std::collections::BTreeSet;
use std::marker::PhantomData;

use thiserror::Error;

use crate::path::Path;
use crate::sigma::NormalizeError;
use crate::syntax::{Prop, Signature};

use super::formula::{Congruence, Formula, Syntactic, View};
use super::tree::{ProofTree, Rule, Side};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ProofErrorKind {
    #[error("rule mismatch: {0}")]
    RuleMismatch(String),
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("principal formula missing: {0}")]
    PrincipalFormulaMissing(String),
    #[error("congruence check exceeded its step budget: {0}")]
    CongruenceBudgetExceeded(String),
    #[error("ill-formed formula: {0}")]
    IllFormed(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("at {path}: {kind}")]
pub struct ProofError {
    pub path: Path,
    pub kind: ProofErrorKind,
}

type Check<T> = Result<T, ProofErrorKind>;

fn mismatch<T>(msg: impl Into<String>) -> Check<T> {
    Err(ProofErrorKind::RuleMismatch(msg.into()))
}

struct Checker<'a, F, C: ?Sized> {
    sig: &'a Signature,
    cong: &'a C,
    formula: PhantomData<F>,
}

impl<F: Formula, C: Congruence<F> + ?Sized> Checker<'_, F, C> {
    fn equiv(&self, a: &F, b: &F) -> Check<bool> {
        self.cong.equiv(a, b).map_err(lift)
    }

    fn require(&self, a: &F, b: &F, what: &str) -> Check<()> {
        if self.equiv(a, b)? {
            Ok(())
        } else {
            mismatch(format!("{what}: `{a}` is not congruent to `{b}`"))
        }
    }

    /// Checks `side` is `ctx` followed by `n` active formulas and returns
    /// the active ones.
    fn split<'p>(&self, side: &'p [F], ctx: &[&F], n: usize, which: &str) -> Check<&'p [F]> {
        if side.len() != ctx.len() + n {
            return mismatch(format!(
                "premise {which} side has {} formulas, expected {}",
                side.len(),
                ctx.len() + n
            ));
        }
        for (i, (a, b)) in side.iter().zip(ctx).enumerate() {
            if !self.equiv(a, b)? {
                return mismatch(format!("premise {which} context differs at position {i}: `{a}` vs `{b}`"));
            }
        }
        Ok(&side[ctx.len()..])
    }

    fn node(&self, p: &ProofTree<F>, path: &Path) -> Result<(), ProofError> {
        let at = |kind| ProofError {
            path: path.clone(),
            kind,
        };
        let seq = &p.conclusion;
        for a in seq.left.iter().chain(&seq.right).chain(&p.rule.a) {
            a.check(self.sig).map_err(|e| at(ProofErrorKind::IllFormed(e)))?;
        }
        let rule = p.rule.rule;
        if p.premises.len() != rule.premises() {
            return Err(at(ProofErrorKind::RuleMismatch(format!(
                "{rule} takes {} premises, found {}",
                rule.premises(),
                p.premises.len()
            ))));
        }
        match rule.side() {
            None => self.unprincipled(p).map_err(at)?,
            Some(side) => {
                let len = match side {
                    Side::Left => seq.left.len(),
                    Side::Right => seq.right.len(),
                };
                let candidates: Vec<usize> = match p.rule.principal {
                    Some(i) if i < len => vec![i],
                    Some(i) => {
                        return Err(at(ProofErrorKind::PrincipalFormulaMissing(format!(
                            "index {i} is out of range for a side of {len} formulas"
                        ))))
                    }
                    None => (0..len).collect(),
                };
                if candidates.is_empty() {
                    return Err(at(ProofErrorKind::PrincipalFormulaMissing(format!(
                        "{rule} needs a formula on the {} side",
                        if side == Side::Left { "left" } else { "right" }
                    ))));
                }
                let mut first = None;
                for i in candidates {
                    match self.principled(p, side, i) {
                        Ok(()) => {
                            first = None;
                            break;
                        }
                        Err(e @ ProofErrorKind::CongruenceBudgetExceeded(_)) => return Err(at(e)),
                        Err(e) => {
                            first.get_or_insert(e);
                        }
                    }
                }
                if let Some(e) = first {
                    return Err(at(e));
                }
            }
        }
        for (i, q) in p.premises.iter().enumerate() {
            self.node(q, &path.child(i))?;
        }
        Ok(())
    }

    fn unprincipled(&self, p: &ProofTree<F>) -> Check<()> {
        let seq = &p.conclusion;
        match p.rule.rule {
            Rule::Axiom => {
                if seq.left.len() != 1 || seq.right.len() != 1 {
                    return mismatch("an axiom has exactly one formula on each side");
                }
                self.require(&seq.left[0], &seq.right[0], "axiom")
            }
            Rule::Cut => {
                let l: Vec<&F> = seq.left.iter().collect();
                let r: Vec<&F> = seq.right.iter().collect();
                let (p1, p2) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
                let a = &self.split(&p1.left, &l, 1, "left")?[0];
                self.split(&p1.right, &r, 0, "right")?;
                self.split(&p2.left, &l, 0, "left")?;
                let b = &self.split(&p2.right, &r, 1, "right")?[0];
                self.require(a, b, "cut formulas")?;
                if let Some(c) = &p.rule.a {
                    self.require(c, a, "cut formula")?;
                }
                Ok(())
            }
            _ => unreachable!("rules without a principal formula"),
        }
    }

    fn quantifier(&self, p: &ProofTree<F>, c: &F, universal: bool) -> Check<(String, F)> {
        if let (Some(x), Some(a)) = (&p.rule.x, &p.rule.a) {
            return Ok((x.clone(), a.clone()));
        }
        match (c.view(), universal) {
            (View::Forall(x, a), true) | (View::Exists(x, a), false) => Ok((x.to_string(), a.clone())),
            _ => mismatch(format!(
                "{} needs parameters (x, A) when `{c}` is not syntactically quantified",
                p.rule.rule
            )),
        }
    }

    fn eigen(&self, x: &str, ctx: &[&F]) -> Check<()> {
        let mut fv = BTreeSet::new();
        for a in ctx {
            fv.extend(self.cong.free_vars(a).map_err(lift)?);
        }
        if fv.contains(x) {
            Err(ProofErrorKind::SideConditionViolated(format!("{x} occurs free in context")))
        } else {
            Ok(())
        }
    }

    fn principled(&self, p: &ProofTree<F>, side: Side, i: usize) -> Check<()> {
        let seq = &p.conclusion;
        let all_l: Vec<&F> = seq.left.iter().collect();
        let all_r: Vec<&F> = seq.right.iter().collect();
        let (c, ctx_l, ctx_r) = match side {
            Side::Left => {
                let mut l = all_l.clone();
                (l.remove(i), l, all_r.clone())
            }
            Side::Right => {
                let mut r = all_r.clone();
                (r.remove(i), all_l.clone(), r)
            }
        };
        let prem = |k: usize| &p.premises[k].conclusion;
        match p.rule.rule {
            Rule::WeakL | Rule::WeakR => {
                self.split(&prem(0).left, &ctx_l, 0, "left")?;
                self.split(&prem(0).right, &ctx_r, 0, "right")?;
                Ok(())
            }
            Rule::ContrL => {
                let b = self.split(&prem(0).left, &ctx_l, 2, "left")?;
                self.split(&prem(0).right, &ctx_r, 0, "right")?;
                self.require(c, &b[0], "contraction")?;
                self.require(c, &b[1], "contraction")
            }
            Rule::ContrR => {
                self.split(&prem(0).left, &ctx_l, 0, "left")?;
                let b = self.split(&prem(0).right, &ctx_r, 2, "right")?;
                self.require(c, &b[0], "contraction")?;
                self.require(c, &b[1], "contraction")
            }
            Rule::ImpL => {
                self.split(&prem(0).left, &ctx_l, 0, "left")?;
                let a = &self.split(&prem(0).right, &ctx_r, 1, "right")?[0];
                let b = &self.split(&prem(1).left, &ctx_l, 1, "left")?[0];
                self.split(&prem(1).right, &ctx_r, 0, "right")?;
                self.require(c, &F::imp(a.clone(), b.clone()), "principal formula")
            }
            Rule::ImpR => {
                let a = &self.split(&prem(0).left, &ctx_l, 1, "left")?[0];
                let b = &self.split(&prem(0).right, &ctx_r, 1, "right")?[0];
                self.require(c, &F::imp(a.clone(), b.clone()), "principal formula")
            }
            Rule::AndL => {
                let ab = self.split(&prem(0).left, &ctx_l, 2, "left")?;
                self.split(&prem(0).right, &ctx_r, 0, "right")?;
                self.require(c, &F::and(ab[0].clone(), ab[1].clone()), "principal formula")
            }
            Rule::AndR => {
                self.split(&prem(0).left, &ctx_l, 0, "left")?;
                let a = &self.split(&prem(0).right, &ctx_r, 1, "right")?[0];
                self.split(&prem(1).left, &ctx_l, 0, "left")?;
                let b = &self.split(&prem(1).right, &ctx_r, 1, "right")?[0];
                self.require(c, &F::and(a.clone(), b.clone()), "principal formula")
            }
            Rule::OrL => {
                let a = &self.split(&prem(0).left, &ctx_l, 1, "left")?[0];
                self.split(&prem(0).right, &ctx_r, 0, "right")?;
                let b = &self.split(&prem(1).left, &ctx_l, 1, "left")?[0];
                self.split(&prem(1).right, &ctx_r, 0, "right")?;
                self.require(c, &F::or(a.clone(), b.clone()), "principal formula")
            }
            Rule::OrR => {
                self.split(&prem(0).left, &ctx_l, 0, "left")?;
                let ab = self.split(&prem(0).right, &ctx_r, 2, "right")?;
                self.require(c, &F::or(ab[0].clone(), ab[1].clone()), "principal formula")
            }
            Rule::BotL => self.require(c, &F::bottom(), "principal formula"),
            Rule::AllL | Rule::ExR => {
                let universal = p.rule.rule == Rule::AllL;
                let (x, a) = self.quantifier(p, c, universal)?;
                let Some(t) = &p.rule.t else {
                    return mismatch(format!("{} needs a witness term t", p.rule.rule));
                };
                let inst = if universal {
                    self.split(&prem(0).right, &ctx_r, 0, "right")?;
                    &self.split(&prem(0).left, &ctx_l, 1, "left")?[0]
                } else {
                    self.split(&prem(0).left, &ctx_l, 0, "left")?;
                    &self.split(&prem(0).right, &ctx_r, 1, "right")?[0]
                };
                let q = if universal { F::forall(&x, a.clone()) } else { F::exists(&x, a.clone()) };
                self.require(c, &q, "principal formula")?;
                self.require(inst, &a.subst(&x, t), "instance")
            }
            Rule::AllR | Rule::ExL => {
                let universal = p.rule.rule == Rule::AllR;
                let (x, a) = self.quantifier(p, c, universal)?;
                let body = if universal {
                    self.split(&prem(0).left, &ctx_l, 0, "left")?;
                    &self.split(&prem(0).right, &ctx_r, 1, "right")?[0]
                } else {
                    self.split(&prem(0).right, &ctx_r, 0, "right")?;
                    &self.split(&prem(0).left, &ctx_l, 1, "left")?[0]
                };
                let q = if universal { F::forall(&x, a.clone()) } else { F::exists(&x, a.clone()) };
                self.require(c, &q, "principal formula")?;
                self.require(body, &a, "premise formula")?;
                let ctx: Vec<&F> = ctx_l.iter().chain(&ctx_r).copied().collect();
                self.eigen(&x, &ctx)
            }
            Rule::Axiom | Rule::Cut => unreachable!("rules with a principal formula"),
        }
    }
}

fn lift(e: NormalizeError) -> ProofErrorKind {
    match e {
        NormalizeError::StepBudgetExceeded { .. } => ProofErrorKind::CongruenceBudgetExceeded(e.to_string()),
        e => ProofErrorKind::RuleMismatch(e.to_string()),
    }
}

/// Checks a proof in the plain sequent calculus: formulas match up to
/// α-equivalence.
pub fn check_binding_proof(sig: &Signature, p: &ProofTree<Prop>) -> Result<(), ProofError> {
    check_modulo_proof(sig, &Syntactic, p)
}

/// Checks a proof in sequent calculus modulo `cong`.
pub fn check_modulo_proof<F: Formula, C: Congruence<F> + ?Sized>(
    sig: &Signature,
    cong: &C,
    p: &ProofTree<F>,
) -> Result<(), ProofError> {
    Checker {
        sig,
        cong,
        formula: PhantomData,
    }.node(p, &Path::root())
}

/// The principal index the checker accepts at the root of `p`, without
/// checking the premises' own derivations.
pub(crate) fn resolve_principal<F: Formula, C: Congruence<F> + ?Sized>(
    sig: &Signature,
    cong: &C,
    p: &ProofTree<F>,
) -> Option<usize> {
    let side = p.rule.rule.side()?;
    if let Some(i) = p.rule.principal {
        return Some(i);
    }
    let len = match side {
        Side::Left => p.conclusion.left.len(),
        Side::Right => p.conclusion.right.len(),
    };
    let c = Checker {
        sig,
        cong,
        formula: PhantomData,
    };
    (0..len).find(|&i| c.principled(p, side, i).is_ok())
}
