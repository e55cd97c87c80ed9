//! Intensional functional structures, binding models and denotations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Arg, Prop, Signature, Syntax, Term};

mod adapters;
mod any;
mod check;
mod ext;
mod funspace;
mod table;

pub use adapters::{
    binding_model_from_sigma, eval_lprop, eval_lterm, sigma_model_from_binding, validate_sigma_rules, BindingFromSigma,
    LValue, RuleValidation, SigmaModel, SigmaStructure,
};
pub use any::{AnyModel, ModelReport, ModelSpec};
pub use check::{check_coherence, check_ifs, CheckMode, CoherenceReport, IfsReport, LawStats, Violation};
pub use ext::{ExtElem, ExtModel};
pub use funspace::{
    full_function_ifs, DeltaModel, DeltaVariant, FullFnIfs, FullFnModel, NatFn, Table, DEFAULT_PROBE_RANGE,
};
pub use table::{parse_table_model, TableError, TableModel};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("symbol `{0}` has no interpretation")]
    UnknownSymbol(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("exhaustive quantification over an infinite domain was requested")]
    InfiniteDomainExhaustionRequested,
}

/// Carrier sets `M_n` with projections and composition `□`.
pub trait Ifs: Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;

    /// `i_n`, for `1 <= i <= n`.
    fn proj(&self, i: usize, n: usize) -> Result<Self::Elem, ModelError>;
    /// `a □_{p,n} <b1, ..., bn>` with `a` in `M_n` and each `bi` in `M_p`.
    fn compose(&self, p: usize, n: usize, a: &Self::Elem, bs: &[Self::Elem]) -> Result<Self::Elem, ModelError>;
    fn elem_eq(&self, n: usize, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// Every element of `M_n`, when finite.
    fn carrier(&self, n: usize) -> Option<Vec<Self::Elem>>;
    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Self::Elem;
    fn show(&self, n: usize, a: &Self::Elem) -> String;
    /// Whether `elem_eq` is exact rather than probe-based.
    fn exact_equality(&self) -> bool {
        true
    }
}

/// An IFS with coherent symbol families.
pub trait BindingModel: Ifs {
    fn signature(&self) -> &Signature;
    /// `f̂_p`; argument `i` lives in `M_{p+k_i}`.
    fn fhat(&self, f: &str, p: usize, args: &[Self::Elem]) -> Result<Self::Elem, ModelError>;
    /// `P̂`; argument `i` lives in `M_{k_i}`.
    fn phat(&self, pred: &str, args: &[Self::Elem]) -> Result<bool, ModelError>;
    /// Elements quantifiers range over.
    fn domain(&self) -> Domain<Self::Elem>;
}

#[derive(Clone, Debug)]
pub enum Domain<E> {
    Finite(Vec<E>),
    /// An infinite `M_0`, of which these are probed.
    Sampled(Vec<E>),
}

impl<E> Domain<E> {
    pub fn elems(&self) -> &[E] {
        match self {
            Domain::Finite(v) | Domain::Sampled(v) => v,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Domain::Finite(_))
    }
}

pub type Assignment<E> = BTreeMap<String, E>;

/// `⟦t⟧` in context `ctx` (`x1, ..., xp`; `x1` is index 1), an element of
/// `M_p`. The leftmost occurrence of a name in `ctx` wins.
pub fn eval_term<M: BindingModel>(
    m: &M,
    t: &Term,
    ctx: &[String],
    phi: &Assignment<M::Elem>,
) -> Result<M::Elem, ModelError> {
    let p = ctx.len();
    match t {
        Term::Var(x) => match ctx.iter().position(|y| y == x) {
            Some(k) => m.proj(k + 1, p),
            None => {
                let a = phi.get(x).ok_or_else(|| ModelError::UnboundVariable(x.clone()))?;
                m.compose(p, 0, a, &[])
            }
        },
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_arg(m, a, ctx, phi))
                .collect::<Result<Vec<_>, _>>()?;
            m.fhat(f, p, &vals)
        }
    }
}

fn eval_arg<M: BindingModel>(m: &M, a: &Arg, ctx: &[String], phi: &Assignment<M::Elem>) -> Result<M::Elem, ModelError> {
    let mut inner: Vec<String> = a.binders.iter().rev().cloned().collect();
    inner.extend_from_slice(ctx);
    eval_term(m, &a.body, &inner, phi)
}

/// A truth value; `exact` is false when it rests on sampling an infinite
/// domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truth {
    pub value: bool,
    pub exact: bool,
}

impl Truth {
    pub fn exact(value: bool) -> Self {
        Self { value, exact: true }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value, self.exact) {
            (true, true) => f.write_str("1"),
            (false, true) => f.write_str("0"),
            (true, false) => f.write_str("1 (on samples)"),
            (false, false) => f.write_str("0 (on samples)"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Refuse to sample an infinite domain.
    pub exhaustive: bool,
}

pub(crate) fn imp(a: Truth, b: Truth) -> Truth {
    let value = !a.value || b.value;
    let exact = (a.exact && !a.value) || (b.exact && b.value) || (a.exact && b.exact);
    Truth { value, exact }
}

pub(crate) fn and(a: Truth, b: Truth) -> Truth {
    let value = a.value && b.value;
    let exact = (a.exact && !a.value) || (b.exact && !b.value) || (a.exact && b.exact);
    Truth { value, exact }
}

pub(crate) fn or(a: Truth, b: Truth) -> Truth {
    let value = a.value || b.value;
    let exact = (a.exact && a.value) || (b.exact && b.value) || (a.exact && b.exact);
    Truth { value, exact }
}

/// `∀x` or `∃x` over `domain`. An exact counterexample (or witness)
/// decides; otherwise the result is exact only over a finite domain.
pub(crate) fn quantify<E: Clone>(
    phi: &mut Assignment<E>,
    x: &str,
    domain: &[E],
    finite: bool,
    universal: bool,
    mut body: impl FnMut(&mut Assignment<E>) -> Result<Truth, ModelError>,
) -> Result<Truth, ModelError> {
    let saved = phi.remove(x);
    let mut all_exact = true;
    let mut result = None;
    for e in domain {
        phi.insert(x.to_string(), e.clone());
        let t = match body(phi) {
            Ok(t) => t,
            Err(err) => {
                result = Some(Err(err));
                break;
            }
        };
        if t.value != universal && t.exact {
            result = Some(Ok(Truth::exact(!universal)));
            break;
        }
        if t.value != universal {
            result.get_or_insert(Ok(Truth {
                value: !universal,
                exact: false,
            }));
        }
        all_exact &= t.exact;
    }
    phi.remove(x);
    if let Some(v) = saved {
        phi.insert(x.to_string(), v);
    }
    result.unwrap_or(Ok(Truth {
        value: universal,
        exact: all_exact && finite,
    }))
}

struct PropEval<'a, M: BindingModel> {
    m: &'a M,
    domain: Vec<M::Elem>,
    finite: bool,
}

impl<M: BindingModel> PropEval<'_, M> {
    fn eval(&self, a: &Prop, phi: &mut Assignment<M::Elem>) -> Result<Truth, ModelError> {
        Ok(match a {
            Prop::Atom(p, args) => {
                let vals = args
                    .iter()
                    .map(|a| eval_arg(self.m, a, &[], phi))
                    .collect::<Result<Vec<_>, _>>()?;
                Truth::exact(self.m.phat(p, &vals)?)
            }
            Prop::Bottom => Truth::exact(false),
            Prop::Imp(a, b) => imp(self.eval(a, phi)?, self.eval(b, phi)?),
            Prop::And(a, b) => and(self.eval(a, phi)?, self.eval(b, phi)?),
            Prop::Or(a, b) => or(self.eval(a, phi)?, self.eval(b, phi)?),
            Prop::Forall(x, body) | Prop::Exists(x, body) => {
                let universal = matches!(a, Prop::Forall(..));
                quantify(phi, x, &self.domain, self.finite, universal, |phi| self.eval(body, phi))?
            }
        })
    }
}

/// Closed terms occurring outside every binder; their denotations are
/// added to a sampled domain.
fn closed_subterms(a: &Prop) -> Vec<Term> {
    fn term(t: &Term, out: &mut Vec<Term>) {
        if t.free_vars().is_empty() {
            out.push(t.clone());
        }
        if let Term::App(_, args) = t {
            for a in args.iter().filter(|a| a.binders.is_empty()) {
                term(&a.body, out);
            }
        }
    }
    fn prop(a: &Prop, out: &mut Vec<Term>) {
        match a {
            Prop::Atom(_, args) => {
                for a in args.iter().filter(|a| a.binders.is_empty()) {
                    term(&a.body, out);
                }
            }
            Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => {
                prop(a, out);
                prop(b, out);
            }
            Prop::Bottom => {}
            Prop::Forall(_, a) | Prop::Exists(_, a) => prop(a, out),
        }
    }
    let mut out = Vec::new();
    prop(a, &mut out);
    out
}

fn quantifier_domain<M: BindingModel>(m: &M, a: &Prop, opts: EvalOptions) -> Result<(Vec<M::Elem>, bool), ModelError> {
    match m.domain() {
        Domain::Finite(v) => Ok((v, true)),
        Domain::Sampled(_) if opts.exhaustive => Err(ModelError::InfiniteDomainExhaustionRequested),
        Domain::Sampled(mut v) => {
            for t in closed_subterms(a) {
                let e = eval_term(m, &t, &[], &BTreeMap::new())?;
                if !v.iter().any(|d| m.elem_eq(0, d, &e)) {
                    v.push(e);
                }
            }
            Ok((v, false))
        }
    }
}

/// `⟦A⟧_φ`. Quantifiers range over `M_0`, sampled when it is infinite.
pub fn eval_prop<M: BindingModel>(
    m: &M,
    a: &Prop,
    phi: &Assignment<M::Elem>,
    opts: EvalOptions,
) -> Result<Truth, ModelError> {
    let (domain, finite) = quantifier_domain(m, a, opts)?;
    PropEval { m, domain, finite }.eval(a, &mut phi.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    /// No counterexample among the sampled elements of an infinite domain.
    ValidOnSamples,
    Invalid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "valid",
            Verdict::ValidOnSamples => "valid on samples",
            Verdict::Invalid => "not valid",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub verdict: Verdict,
    /// A falsifying assignment of the free variables, shown.
    pub witness: Option<Vec<(String, String)>>,
}

/// Evaluates `a` under every assignment of its free variables.
pub fn validity<M: BindingModel>(m: &M, a: &Prop, opts: EvalOptions) -> Result<Validity, ModelError> {
    let fv: Vec<String> = a.free_vars().into_iter().collect();
    let (domain, finite) = quantifier_domain(m, a, opts)?;
    let ev = PropEval {
        m,
        domain: domain.clone(),
        finite,
    };
    let mut exact = finite;
    let mut idx = vec![0usize; fv.len()];
    if !fv.is_empty() && domain.is_empty() {
        return Ok(Validity {
            verdict: Verdict::Valid,
            witness: None,
        });
    }
    loop {
        let mut phi: Assignment<M::Elem> = fv
            .iter()
            .zip(&idx)
            .map(|(x, &i)| (x.clone(), domain[i].clone()))
            .collect();
        let t = ev.eval(a, &mut phi)?;
        if !t.value {
            return Ok(Validity {
                verdict: Verdict::Invalid,
                witness: Some(fv.iter().map(|x| (x.clone(), m.show(0, &phi[x]))).collect()),
            });
        }
        exact &= t.exact;
        let mut k = 0;
        loop {
            if k == idx.len() {
                let verdict = if exact { Verdict::Valid } else { Verdict::ValidOnSamples };
                return Ok(Validity { verdict, witness: None });
            }
            idx[k] += 1;
            if idx[k] < domain.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The free variables of several propositions, sorted.
pub fn free_vars_of(props: &[Prop]) -> BTreeSet<String> {
    props.iter().flat_map(Syntax::free_vars).collect()
}
