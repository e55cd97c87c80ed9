//! Python bindings: syntax, σ normalization, proof checking and models.

use std::collections::BTreeMap;
use std::fmt::Display;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use bindlog_core::models::{parse_table_model, AnyModel, CheckMode, EvalOptions, ModelSpec, Verdict};
use bindlog_core::precook::{precook, precook_prop, translate_proof, uncook, uncook_prop};
use bindlog_core::proofs::{check_binding_proof, check_modulo_proof, parse_proof, print_proof, RewriteCongruence};
use bindlog_core::sigma::{
    check_prop_sorts, parse_lprop, parse_lterm, parse_rules, sort_of, LProp as CoreLProp, LTerm as CoreLTerm,
    RewriteSystem,
};
use bindlog_core::syntax::{
    parse_prop, parse_term, Prop as CoreProp, Signature as CoreSignature, SubstMap, Syntax, Term as CoreTerm,
    ToDeBruijn, WellFormed,
};

create_exception!(bindlog, BindlogError, PyException, "Malformed input.");
create_exception!(bindlog, ProofError, BindlogError, "A proof that does not check.");

fn input_err(e: impl Display) -> PyErr {
    BindlogError::new_err(e.to_string())
}

#[pyclass(frozen, skip_from_py_object, module = "bindlog")]
#[derive(Clone)]
struct Signature {
    inner: CoreSignature,
}

#[pymethods]
impl Signature {
    /// From `.sig` text; `fun f : <0,1>` and `pred P : <0>` lines.
    #[new]
    #[pyo3(signature = (text = ""))]
    fn new(text: &str) -> PyResult<Self> {
        CoreSignature::parse(text).map(|inner| Signature { inner }).map_err(input_err)
    }

    fn functions(&self) -> Vec<(String, Vec<usize>)> {
        self.inner.functions().map(|(f, a)| (f.to_string(), a.slots().to_vec())).collect()
    }

    fn predicates(&self) -> Vec<(String, Vec<usize>)> {
        self.inner.predicates().map(|(p, a)| (p.to_string(), a.slots().to_vec())).collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }
}

#[pyclass(frozen, skip_from_py_object, module = "bindlog")]
#[derive(Clone)]
struct Term {
    inner: CoreTerm,
}

#[pymethods]
impl Term {
    #[staticmethod]
    fn parse(sig: &Signature, text: &str) -> PyResult<Self> {
        let t = parse_term(&sig.inner, text).map_err(input_err)?;
        t.well_formed(&sig.inner).map_err(input_err)?;
        Ok(Term { inner: t })
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().collect()
    }

    fn alpha_eq(&self, other: &Term) -> bool {
        self.inner.alpha_eq(&other.inner)
    }

    /// Capture-avoiding `self[u/x]`.
    fn substitute(&self, x: &str, u: &Term) -> Term {
        Term { inner: self.inner.substitute(&SubstMap::single(x, u.inner.clone())) }
    }

    fn precook(&self, sig: &Signature) -> LTerm {
        LTerm { inner: precook(&sig.inner, &self.inner, &[]) }
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn __eq__(&self, other: &Term) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.inner.to_string())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "bindlog")]
#[derive(Clone)]
struct Prop {
    inner: CoreProp,
}

#[pymethods]
impl Prop {
    #[staticmethod]
    fn parse(sig: &Signature, text: &str) -> PyResult<Self> {
        let a = parse_prop(&sig.inner, text).map_err(input_err)?;
        a.well_formed(&sig.inner).map_err(input_err)?;
        Ok(Prop { inner: a })
    }

    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().collect()
    }

    fn alpha_eq(&self, other: &Prop) -> bool {
        self.inner.alpha_eq(&other.inner)
    }

    fn substitute(&self, x: &str, u: &Term) -> Prop {
        Prop { inner: self.inner.substitute(&SubstMap::single(x, u.inner.clone())) }
    }

    fn precook(&self, sig: &Signature) -> LProp {
        LProp { inner: precook_prop(&sig.inner, &self.inner) }
    }

    fn __eq__(&self, other: &Prop) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Prop({:?})", self.inner.to_string())
    }
}

fn rewrite_system(sig: &CoreSignature, rules: Option<&str>) -> PyResult<RewriteSystem> {
    let rs = RewriteSystem::sigma(sig);
    match rules {
        None => Ok(rs),
        Some(text) => Ok(rs.with_rules(parse_rules(sig, text).map_err(input_err)?)),
    }
}

#[pyclass(frozen, skip_from_py_object, module = "bindlog")]
#[derive(Clone)]
struct LTerm {
    inner: CoreLTerm,
}

#[pymethods]
impl LTerm {
    #[staticmethod]
    fn parse(sig: &Signature, text: &str) -> PyResult<Self> {
        let t = parse_lterm(&sig.inner, text).map_err(input_err)?;
        sort_of(&sig.inner, &t).map_err(input_err)?;
        Ok(LTerm { inner: t })
    }

    fn sort(&self, sig: &Signature) -> PyResult<String> {
        sort_of(&sig.inner, &self.inner).map(|s| s.to_string()).map_err(input_err)
    }

    /// Normal form under σ plus the optional `.rw` rules.
    #[pyo3(signature = (sig, rules = None))]
    fn normalize(&self, sig: &Signature, rules: Option<&str>) -> PyResult<LTerm> {
        let rs = rewrite_system(&sig.inner, rules)?;
        rs.normalize(&self.inner).map(|inner| LTerm { inner }).map_err(input_err)
    }

    fn uncook(&self, sig: &Signature) -> PyResult<Term> {
        uncook(&sig.inner, &self.inner).map(|inner| Term { inner }).map_err(input_err)
    }

    fn __eq__(&self, other: &LTerm) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LTerm({:?})", self.inner.to_string())
    }
}

#[pyclass(frozen, skip_from_py_object, module = "bindlog")]
#[derive(Clone)]
struct LProp {
    inner: CoreLProp,
}

#[pymethods]
impl LProp {
    #[staticmethod]
    fn parse(sig: &Signature, text: &str) -> PyResult<Self> {
        let a = parse_lprop(&sig.inner, text).map_err(input_err)?;
        check_prop_sorts(&sig.inner, &a).map_err(input_err)?;
        Ok(LProp { inner: a })
    }

    #[pyo3(signature = (sig, rules = None))]
    fn normalize(&self, sig: &Signature, rules: Option<&str>) -> PyResult<LProp> {
        let rs = rewrite_system(&sig.inner, rules)?;
        rs.normalize_prop(&self.inner).map(|inner| LProp { inner }).map_err(input_err)
    }

    fn uncook(&self, sig: &Signature) -> PyResult<Prop> {
        uncook_prop(&sig.inner, &self.inner).map(|inner| Prop { inner }).map_err(input_err)
    }

    fn __eq__(&self, other: &LProp) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LProp({:?})", self.inner.to_string())
    }
}

/// A binding model: `ext`, `delta`, `delta-literal`, `fullfn:<size>`, or
/// the text of a `.mdl` table file.
#[pyclass(frozen, module = "bindlog")]
struct Model {
    inner: AnyModel,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (spec, sig = None))]
    fn new(spec: &str, sig: Option<&Signature>) -> PyResult<Self> {
        let inner = if spec.trim_start().starts_with(|c: char| c.is_ascii_lowercase()) && !spec.contains('\n') {
            let spec: ModelSpec = spec.parse().map_err(input_err)?;
            AnyModel::from_spec(&spec, sig.map(|s| &s.inner))
        } else {
            AnyModel::Table(parse_table_model(spec).map_err(input_err)?)
        };
        Ok(Model { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn signature(&self) -> Signature {
        Signature { inner: self.inner.signature().clone() }
    }

    #[pyo3(signature = (term, assignment = BTreeMap::new()))]
    fn eval_term(&self, term: &Term, assignment: BTreeMap<String, String>) -> PyResult<String> {
        self.inner.eval_term(&term.inner, &assignment).map_err(input_err)
    }

    /// `(verdict, witness)`; the verdict is `"valid"`, `"valid on samples"`
    /// or `"not valid"`.
    fn validity(&self, prop: &Prop) -> PyResult<(String, Option<BTreeMap<String, String>>)> {
        let v = self.inner.validity(&prop.inner, EvalOptions::default()).map_err(input_err)?;
        Ok((v.verdict.to_string(), v.witness.map(|w| w.into_iter().collect())))
    }

    fn is_valid(&self, prop: &Prop) -> PyResult<bool> {
        let v = self.inner.validity(&prop.inner, EvalOptions::default()).map_err(input_err)?;
        Ok(v.verdict != Verdict::Invalid)
    }

    /// IFS laws and coherence; returns `(ok, failures)` with one line per
    /// violated law.
    #[pyo3(signature = (bounds = (2, 2, 2), samples = None, seed = 0))]
    fn verify(&self, bounds: (usize, usize, usize), samples: Option<usize>, seed: u64) -> PyResult<(bool, Vec<String>)> {
        let mode = match samples {
            Some(samples) => CheckMode::Sampled { samples, seed },
            None if self.inner.has_finite_domain() => CheckMode::Exhaustive,
            None => CheckMode::Sampled { samples: 1000, seed },
        };
        let r = self.inner.verify(bounds, mode).map_err(input_err)?;
        let mut failures = Vec::new();
        let laws = [&r.ifs.projection, &r.ifs.identity, &r.ifs.associativity];
        let coherence = r.coherence.iter().flat_map(|c| [&c.coherence, &c.lift_identity]);
        for stats in laws.into_iter().chain(coherence) {
            failures.extend(stats.examples.iter().map(|v| format!("{}: {}", v.law, v.detail)));
        }
        Ok((r.ok(), failures))
    }
}

/// Checks a proof file; raises `ProofError` when it does not check.
/// With `modulo`, formulas are compared modulo σ and the given rules.
#[pyfunction]
#[pyo3(signature = (sig, text, modulo = false, rules = None))]
fn check_proof(sig: &Signature, text: &str, modulo: bool, rules: Option<&str>) -> PyResult<usize> {
    let p = parse_proof::<CoreProp>(&sig.inner, text).map_err(input_err)?;
    let result = if modulo || rules.is_some() {
        let cong = RewriteCongruence::new(rewrite_system(&sig.inner, rules)?);
        check_modulo_proof(&sig.inner, &cong, &p)
    } else {
        check_binding_proof(&sig.inner, &p)
    };
    result.map_err(|e| ProofError::new_err(e.to_string()))?;
    Ok(p.height())
}

/// Checks a proof file whose formulas are L′ propositions, modulo σ.
#[pyfunction]
#[pyo3(signature = (sig, text, rules = None))]
fn check_lprime_proof(sig: &Signature, text: &str, rules: Option<&str>) -> PyResult<usize> {
    let p = parse_proof::<CoreLProp>(&sig.inner, text).map_err(input_err)?;
    let cong = RewriteCongruence::new(rewrite_system(&sig.inner, rules)?);
    check_modulo_proof(&sig.inner, &cong, &p).map_err(|e| ProofError::new_err(e.to_string()))?;
    Ok(p.height())
}

/// The image of a binding-logic proof as a proof modulo σ, as text.
#[pyfunction]
fn translate(sig: &Signature, text: &str) -> PyResult<String> {
    let p = parse_proof::<CoreProp>(&sig.inner, text).map_err(input_err)?;
    let img = translate_proof(&sig.inner, &p).map_err(|e| ProofError::new_err(e.to_string()))?;
    Ok(print_proof(&img))
}

#[pymodule]
fn bindlog(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Signature>()?;
    m.add_class::<Term>()?;
    m.add_class::<Prop>()?;
    m.add_class::<LTerm>()?;
    m.add_class::<LProp>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(check_proof, m)?)?;
    m.add_function(wrap_pyfunction!(check_lprime_proof, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add("BindlogError", m.py().get_type::<BindlogError>())?;
    m.add("ProofError", m.py().get_type::<ProofError>())?;
    Ok(())
}
