//! Named built-in models behind one type, for front ends.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use super::{
    check_coherence, check_ifs, eval_prop, eval_term, sigma_model_from_binding, validate_sigma_rules, validity, BindingModel,
    CheckMode, CoherenceReport, DeltaModel, DeltaVariant, EvalOptions, ExtModel, FullFnModel, IfsReport, Ifs, ModelError,
    RuleValidation, TableModel, Truth, Validity, Assignment,
};
use crate::syntax::{Prop, Signature, Term};
use crate::theories::ext_signature;

/// `ext`, `delta`, `delta-literal` or `fullfn:<size>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Ext,
    Delta(DeltaVariant),
    FullFn(usize),
}

impl FromStr for ModelSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ext" => Ok(ModelSpec::Ext),
            "delta" => Ok(ModelSpec::Delta(DeltaVariant::Repaired)),
            "delta-literal" => Ok(ModelSpec::Delta(DeltaVariant::Literal)),
            _ => {
                let size = s
                    .strip_prefix("fullfn:")
                    .ok_or_else(|| format!("unknown model `{s}`; expected ext, delta, delta-literal, fullfn:<size> or a .mdl file"))?;
                match size.parse::<usize>() {
                    Ok(n) if (1..=255).contains(&n) => Ok(ModelSpec::FullFn(n)),
                    _ => Err(format!("bad carrier size `{size}`")),
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum AnyModel {
    Ext(ExtModel),
    Delta(DeltaModel),
    FullFn(FullFnModel),
    Table(TableModel),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            AnyModel::Ext($m) => $body,
            AnyModel::Delta($m) => $body,
            AnyModel::FullFn($m) => $body,
            AnyModel::Table($m) => $body,
        }
    };
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub mode: CheckMode,
    pub ifs: IfsReport,
    pub coherence: Vec<CoherenceReport>,
}

impl ModelReport {
    pub fn ok(&self) -> bool {
        self.ifs.ok() && self.coherence.iter().all(CoherenceReport::ok)
    }
}

impl AnyModel {
    /// A built-in model; full-function models interpret `sig`, or the
    /// extensionality signature when none is given.
    pub fn from_spec(spec: &ModelSpec, sig: Option<&Signature>) -> Self {
        match spec {
            ModelSpec::Ext => AnyModel::Ext(ExtModel::new()),
            ModelSpec::Delta(v) => AnyModel::Delta(DeltaModel::new(*v)),
            ModelSpec::FullFn(n) => AnyModel::FullFn(FullFnModel::new(sig.cloned().as_ref().unwrap_or(&ext_signature()), *n)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AnyModel::Ext(_) => "ext".into(),
            AnyModel::Delta(m) if m.variant == DeltaVariant::Literal => "delta-literal".into(),
            AnyModel::Delta(_) => "delta".into(),
            AnyModel::FullFn(m) => format!("fullfn:{}", m.ifs.size),
            AnyModel::Table(_) => "table".into(),
        }
    }

    pub fn signature(&self) -> &Signature {
        dispatch!(self, m => m.signature())
    }

    pub fn has_finite_domain(&self) -> bool {
        dispatch!(self, m => m.domain().is_finite())
    }

    /// `⟦t⟧` for a term whose free variables are assigned elements of
    /// `M_0` by name.
    pub fn eval_term(&self, t: &Term, phi: &BTreeMap<String, String>) -> Result<String, ModelError> {
        dispatch!(self, m => {
            let env = lookup(m, phi)?;
            eval_term(m, t, &[], &env).map(|e| m.show(0, &e))
        })
    }

    /// Truth of `a` under an assignment by name; variables left free must
    /// all be assigned.
    pub fn eval_prop(&self, a: &Prop, phi: &BTreeMap<String, String>, opts: EvalOptions) -> Result<Truth, ModelError> {
        dispatch!(self, m => {
            let env = lookup(m, phi)?;
            eval_prop(m, a, &env, opts)
        })
    }

    pub fn validity(&self, a: &Prop, opts: EvalOptions) -> Result<Validity, ModelError> {
        dispatch!(self, m => validity(m, a, opts))
    }

    /// IFS laws for `n, p, q` up to `bounds`, and coherence of every
    /// function symbol for `p, q` up to `bounds.1, bounds.2`.
    pub fn verify(&self, bounds: (usize, usize, usize), mode: CheckMode) -> Result<ModelReport, ModelError> {
        dispatch!(self, m => {
            let ifs = check_ifs(m, bounds, mode)?;
            let coherence = m
                .signature()
                .functions()
                .map(|(f, _)| check_coherence(m, f, (bounds.1, bounds.2), mode))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ModelReport { model: self.name(), mode, ifs, coherence })
        })
    }

    /// The model's tables up to `max_level`, as a table model.
    pub fn tabulate(&self, max_level: usize) -> Result<TableModel, ModelError> {
        dispatch!(self, m => TableModel::tabulate(m, max_level))
    }

    /// The σ rules in the L′ model induced by this model.
    pub fn validate_sigma(&self, samples: usize, seed: u64) -> Vec<RuleValidation> {
        dispatch!(self, m => validate_sigma_rules(&sigma_model_from_binding(m.clone()), samples, seed))
    }
}

fn lookup<M: BindingModel>(m: &M, phi: &BTreeMap<String, String>) -> Result<Assignment<M::Elem>, ModelError> {
    let domain = m.domain();
    let mut env = Assignment::new();
    for (x, v) in phi {
        let e = domain
            .elems()
            .iter()
            .find(|e| m.show(0, e) == *v || m.show(0, e) == format!("{v}0"))
            .ok_or_else(|| ModelError::Undefined(format!("`{v}` is not an element of M_0")))?;
        env.insert(x.clone(), e.clone());
    }
    Ok(env)
}
