use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use bindlog_core::models::{AnyModel, CheckMode, EvalOptions, LawStats, ModelSpec, Verdict};
use bindlog_core::precook::{precook, precook_literal, precook_prop, precook_prop_literal, translate_proof};
use bindlog_core::proofs::{
    check_binding_proof, check_modulo_proof, parse_proof, print_proof, Formula, ProofError, ProofTree, RewriteCongruence,
    Syntactic,
};
use bindlog_core::sigma::{check_prop_sorts, parse_lprop, parse_lterm, sort_of, LProp, NormalizeOptions, Strategy};
use bindlog_core::syntax::{parse_prop, parse_sequent, parse_term, Prop, Signature, WellFormed};
use bindlog_core::theories::{delta_signature, equality_axioms, ext_instance, ext_signature};

use crate::input::{self, Source};
use crate::{Command, Demo, Failure, Kind, RunConfig, SyntaxKind};

type Report = Result<String, Failure>;

/// Text or JSON, depending on `--json`.
fn emit(cfg: &RunConfig, ok: bool, text: String, summary: Value) -> Report {
    let out = if cfg.json {
        let mut v = summary;
        v["ok"] = json!(ok);
        format!("{v}\n")
    } else {
        text
    };
    if ok {
        Ok(out)
    } else {
        Err(Failure::Semantic(out))
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Report {
    match cmd {
        Command::Parse { input, kind } => parse(cfg, &input, kind),
        Command::CheckProof { proof, syntax, modulo, modulo_sigma } => {
            check_proof(cfg, &proof, syntax, modulo.as_deref(), modulo_sigma)
        }
        Command::Normalize { input, system, prop, outermost } => normalize(cfg, &input, &system, prop, outermost),
        Command::Precook { input, term, literal } => precook_cmd(cfg, &input, term, literal),
        Command::TranslateProof { proof, output } => translate(cfg, &proof, output.as_deref()),
        Command::Eval { model, prop, term, assign } => eval(cfg, &model, prop, term, assign),
        Command::VerifyModel { model, bounds, sampled, sigma, dump } => {
            verify(cfg, &model, bounds, sampled, sigma, dump.as_deref())
        }
        Command::Demo { which: Demo::Extensionality } => demo_extensionality(cfg),
        Command::Demo { which: Demo::DisjointSum } => demo_disjoint_sum(cfg),
    }
}

fn parse(cfg: &RunConfig, arg: &str, kind: Kind) -> Report {
    let sig = input::signature(cfg)?;
    let src = Source::arg(arg)?;
    let text = src.text.trim();
    let printed = match kind {
        Kind::Term => {
            let t = parse_term(&sig, text).map_err(|e| src.err(e))?;
            t.well_formed(&sig).map_err(|e| src.err(e))?;
            t.to_string()
        }
        Kind::Prop => {
            let a = parse_prop(&sig, text).map_err(|e| src.err(e))?;
            a.well_formed(&sig).map_err(|e| src.err(e))?;
            a.to_string()
        }
        Kind::Sequent => {
            let s = parse_sequent(&sig, text).map_err(|e| src.err(e))?;
            for a in s.left.iter().chain(&s.right) {
                a.well_formed(&sig).map_err(|e| src.err(e))?;
            }
            s.to_string()
        }
        Kind::Lterm => {
            let t = parse_lterm(&sig, text).map_err(|e| src.err(e))?;
            let sort = sort_of(&sig, &t).map_err(|e| src.err(e))?;
            format!("{t} : {sort}")
        }
        Kind::Lprop => {
            let a = parse_lprop(&sig, text).map_err(|e| src.err(e))?;
            check_prop_sorts(&sig, &a).map_err(|e| src.err(e))?;
            a.to_string()
        }
    };
    emit(cfg, true, format!("{printed}\n"), json!({ "parsed": printed }))
}

fn proof_error(src: &Source, e: &ProofError, cfg: &RunConfig, height: usize) -> Report {
    let msg = format!("{}: invalid proof: {e}", src.label);
    emit(cfg, false, format!("{msg}\n"), json!({ "file": src.label, "error": e.to_string(), "path": e.path.to_string(), "height": height }))
}

fn check_tree<F: Formula>(
    cfg: &RunConfig,
    src: &Source,
    p: &ProofTree<F>,
    result: Result<(), ProofError>,
    how: &str,
) -> Report {
    match result {
        Err(e) => proof_error(src, &e, cfg, p.height()),
        Ok(()) => {
            let text = format!("{}: valid proof {how} (height {}, {} rule applications)\n", src.label, p.height(), p.size());
            emit(cfg, true, text, json!({ "file": src.label, "height": p.height(), "size": p.size(), "check": how }))
        }
    }
}

fn check_proof(cfg: &RunConfig, path: &Path, syntax: SyntaxKind, rules: Option<&Path>, modulo_sigma: bool) -> Report {
    let sig = input::signature(cfg)?;
    let src = Source::file(path)?;
    match syntax {
        SyntaxKind::Binding => {
            let p = parse_proof::<Prop>(&sig, &src.text).map_err(|e| src.err(e))?;
            if rules.is_some() || modulo_sigma {
                let cong = RewriteCongruence::new(input::rewrite_system(&sig, rules)?);
                check_tree(cfg, &src, &p, check_modulo_proof(&sig, &cong, &p), "modulo the rewrite system")
            } else {
                check_tree(cfg, &src, &p, check_binding_proof(&sig, &p), "in binding logic")
            }
        }
        SyntaxKind::Lprime => {
            let p = parse_proof::<LProp>(&sig, &src.text).map_err(|e| src.err(e))?;
            if rules.is_none() && !modulo_sigma {
                // Plain L′ proofs are still checked modulo σ; the syntactic
                // check is only a fast path.
                if check_modulo_proof(&sig, &Syntactic, &p).is_ok() {
                    return check_tree(cfg, &src, &p, Ok(()), "modulo σ");
                }
            }
            let cong = RewriteCongruence::new(input::rewrite_system(&sig, rules)?);
            check_tree(cfg, &src, &p, check_modulo_proof(&sig, &cong, &p), "modulo σ")
        }
    }
}

fn normalize(cfg: &RunConfig, arg: &str, system: &str, prop: bool, outermost: bool) -> Report {
    let sig = input::signature(cfg)?;
    let rules = (system != "sigma").then(|| Path::new(system));
    let rs = input::rewrite_system(&sig, rules)?;
    let src = Source::arg(arg)?;
    let text = src.text.trim();
    let opts = NormalizeOptions {
        budget: cfg.budget,
        strategy: if outermost { Strategy::Outermost } else { Strategy::Innermost },
        check_sorts: true,
    };
    let (out, steps) = if prop {
        let a = parse_lprop(&sig, text).map_err(|e| src.err(e))?;
        check_prop_sorts(&sig, &a).map_err(|e| src.err(e))?;
        let n = rs.normalize_prop_with(&a, opts).map_err(|e| Failure::Semantic(format!("{}: {e}\n", src.label)))?;
        (n.value.to_string(), n.steps)
    } else {
        let t = parse_lterm(&sig, text).map_err(|e| src.err(e))?;
        sort_of(&sig, &t).map_err(|e| src.err(e))?;
        let n = rs.normalize_with(&t, opts).map_err(|e| Failure::Semantic(format!("{}: {e}\n", src.label)))?;
        (n.value.to_string(), n.steps)
    };
    emit(cfg, true, format!("{out}\n"), json!({ "normal_form": out, "steps": steps }))
}

fn precook_cmd(cfg: &RunConfig, arg: &str, term: bool, literal: bool) -> Report {
    let sig = input::signature(cfg)?;
    let src = Source::arg(arg)?;
    let text = src.text.trim();
    let out = if term {
        let t = parse_term(&sig, text).map_err(|e| src.err(e))?;
        t.well_formed(&sig).map_err(|e| src.err(e))?;
        if literal { precook_literal(&sig, &t, &[]) } else { precook(&sig, &t, &[]) }.to_string()
    } else {
        let a = parse_prop(&sig, text).map_err(|e| src.err(e))?;
        a.well_formed(&sig).map_err(|e| src.err(e))?;
        if literal { precook_prop_literal(&sig, &a) } else { precook_prop(&sig, &a) }.to_string()
    };
    emit(cfg, true, format!("{out}\n"), json!({ "lprime": out }))
}

fn translate(cfg: &RunConfig, path: &Path, output: Option<&Path>) -> Report {
    let sig = input::signature(cfg)?;
    let src = Source::file(path)?;
    let p = parse_proof::<Prop>(&sig, &src.text).map_err(|e| src.err(e))?;
    let img = match translate_proof(&sig, &p) {
        Ok(img) => img,
        Err(e) => {
            let msg = format!("{}: {e}", src.label);
            return emit(cfg, false, format!("{msg}\n"), json!({ "file": src.label, "error": e.to_string() }));
        }
    };
    let text = print_proof(&img);
    match output {
        None if !cfg.json => Ok(text),
        None => emit(cfg, true, String::new(), json!({ "proof": text, "height": img.height() })),
        Some(out) => {
            std::fs::write(out, &text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            let msg = format!("wrote {} (height {})\n", out.display(), img.height());
            emit(cfg, true, msg, json!({ "output": out.display().to_string(), "height": img.height() }))
        }
    }
}

fn model_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn eval(cfg: &RunConfig, name: &str, prop: Option<String>, term: Option<String>, assign: Vec<(String, String)>) -> Report {
    let m = input::model(name, cfg)?;
    let sig = m.signature().clone();
    let phi: BTreeMap<String, String> = assign.into_iter().collect();
    if let Some(arg) = term {
        let src = Source::arg(&arg)?;
        let t = parse_term(&sig, src.text.trim()).map_err(|e| src.err(e))?;
        t.well_formed(&sig).map_err(|e| src.err(e))?;
        let v = m.eval_term(&t, &phi).map_err(model_err)?;
        return emit(cfg, true, format!("⟦{t}⟧ = {v}\n"), json!({ "model": m.name(), "term": t.to_string(), "value": v }));
    }
    let src = Source::arg(prop.as_deref().unwrap_or_default())?;
    let a = parse_prop(&sig, src.text.trim()).map_err(|e| src.err(e))?;
    a.well_formed(&sig).map_err(|e| src.err(e))?;
    let opts = EvalOptions::default();
    if !phi.is_empty() {
        let t = m.eval_prop(&a, &phi, opts).map_err(model_err)?;
        let text = format!("⟦{a}⟧ = {t}\n");
        return emit(cfg, t.value, text, json!({ "model": m.name(), "prop": a.to_string(), "value": t.value, "exact": t.exact }));
    }
    let v = m.validity(&a, opts).map_err(model_err)?;
    let mut text = format!("{a}: {} in {}\n", v.verdict, m.name());
    if let Some(w) = &v.witness {
        let shown: Vec<String> = w.iter().map(|(x, e)| format!("{x} = {e}")).collect();
        let _ = writeln!(text, "  counterexample: {}", if shown.is_empty() { "(closed)".into() } else { shown.join(", ") });
    }
    let witness: Option<BTreeMap<_, _>> = v.witness.clone().map(|w| w.into_iter().collect());
    let ok = v.verdict != Verdict::Invalid;
    emit(cfg, ok, text, json!({ "model": m.name(), "prop": a.to_string(), "verdict": v.verdict.to_string(), "witness": witness }))
}

fn law_line(out: &mut String, name: &str, s: &LawStats) {
    let status = if s.ok() { "ok" } else { "FAILED" };
    let _ = writeln!(out, "  {name:<16} {status:<6} {} checked, {} failed", s.checked, s.failed);
    for v in &s.examples {
        let _ = writeln!(out, "    {}: {}", v.law, v.detail);
    }
}

fn verify(
    cfg: &RunConfig,
    name: &str,
    bounds: (usize, usize, usize),
    sampled: bool,
    sigma: bool,
    dump: Option<&Path>,
) -> Report {
    let m = input::model(name, cfg)?;
    let mode = if sampled || !m.has_finite_domain() {
        CheckMode::Sampled { samples: cfg.samples, seed: cfg.seed }
    } else {
        CheckMode::Exhaustive
    };
    let report = m.verify(bounds, mode).map_err(model_err)?;
    let mut text = String::new();
    let (n, p, q) = bounds;
    let mode_name = match mode {
        CheckMode::Exhaustive => "exhaustive".to_string(),
        CheckMode::Sampled { samples, seed } => format!("{samples} samples, seed {seed}"),
    };
    let _ = writeln!(text, "model {} up to n={n}, p={p}, q={q} ({mode_name})", report.model);
    law_line(&mut text, "projection", &report.ifs.projection);
    law_line(&mut text, "identity", &report.ifs.identity);
    law_line(&mut text, "associativity", &report.ifs.associativity);
    for c in &report.coherence {
        let _ = writeln!(text, "symbol {}", c.symbol);
        law_line(&mut text, "coherence", &c.coherence);
        law_line(&mut text, "lift identity", &c.lift_identity);
        if c.vacuous_binder.checked > 0 {
            let note = if c.vacuous_binder.ok() { "holds" } else { "fails (not required)" };
            let _ = writeln!(text, "  vacuous binder   {note}, {} checked", c.vacuous_binder.checked);
        }
    }
    let mut ok = report.ok();
    let mut summary = serde_json::to_value(&report).map_err(model_err)?;
    if sigma {
        let rules = m.validate_sigma(cfg.samples, cfg.seed);
        let _ = writeln!(text, "σ rules in the induced L′ model");
        for r in &rules {
            let status = if r.failed == 0 { "ok" } else { "FAILED" };
            let _ = writeln!(text, "  {:<16} {status:<6} {} checked, {} failed", r.rule, r.checked, r.failed);
            if let Some(ex) = &r.example {
                let _ = writeln!(text, "    {ex}");
            }
        }
        ok &= rules.iter().all(|r| r.failed == 0);
        summary["sigma"] = serde_json::to_value(&rules).map_err(model_err)?;
    }
    if let Some(path) = dump {
        let level = n.max(p + 2).max(q);
        let table = m.tabulate(level).map_err(model_err)?;
        std::fs::write(path, table.to_text()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let _ = writeln!(text, "tables up to level {level} written to {}", path.display());
    }
    let _ = writeln!(text, "{}", if ok { "all laws hold" } else { "violations found" });
    emit(cfg, ok, text, summary)
}

fn denotation(m: &AnyModel, sig: &Signature, src: &str) -> Result<(String, String), Failure> {
    let t = parse_term(sig, src).map_err(model_err)?;
    let v = m.eval_term(&t, &BTreeMap::new()).map_err(model_err)?;
    Ok((t.to_string(), v))
}

fn demo_extensionality(cfg: &RunConfig) -> Report {
    let sig = ext_signature();
    let m = AnyModel::from_spec(&ModelSpec::Ext, None);
    let opts = EvalOptions { exhaustive: true };
    let mut text = String::from("model ext: M_0 = {k0, l0}\n");
    let mut ok = true;
    let mut axioms = Vec::new();
    for a in equality_axioms(&sig) {
        let v = m.validity(&a, opts).map_err(model_err)?;
        ok &= v.verdict == Verdict::Valid;
        let _ = writeln!(text, "  equality axiom {a}: {}", v.verdict);
        axioms.push(json!({ "axiom": a.to_string(), "verdict": v.verdict.to_string() }));
    }
    let (premise, concl) = ext_instance();
    let pv = m.validity(&premise, opts).map_err(model_err)?.verdict;
    let _ = writeln!(text, "  premise {premise}: {pv}");
    let mut dens = Vec::new();
    for src in ["Lam(x. f(x))", "Lam(x. x)"] {
        let (t, v) = denotation(&m, &sig, src)?;
        let _ = writeln!(text, "  ⟦{t}⟧ = {v}");
        dens.push(json!({ "term": t, "value": v }));
    }
    let cv = m.validity(&concl, opts).map_err(model_err)?.verdict;
    let shown = if cv == Verdict::Invalid { "NOT valid".to_string() } else { cv.to_string() };
    let _ = writeln!(text, "  scheme instance {concl}: {shown}");
    ok &= pv == Verdict::Valid && cv == Verdict::Invalid;
    let _ = writeln!(text, "{}", if ok { "extensionality is independent" } else { "demonstration failed" });
    let summary = json!({
        "model": "ext",
        "axioms": axioms,
        "premise": pv.to_string(),
        "denotations": dens,
        "instance": cv.to_string(),
    });
    emit(cfg, ok, text, summary)
}

fn demo_disjoint_sum(cfg: &RunConfig) -> Report {
    let sig = delta_signature();
    let m = AnyModel::from_spec(&ModelSpec::Delta(Default::default()), None);
    let (lhs, lv) = denotation(&m, &sig, "delta(a, x. a, y. a)")?;
    let (rhs, rv) = denotation(&m, &sig, "a")?;
    let eq = parse_prop(&sig, &format!("{lhs} = {rhs}")).map_err(model_err)?;
    let v = m.validity(&eq, EvalOptions::default()).map_err(model_err)?.verdict;
    let mut text = String::from("model delta: M_0 = N\n");
    let _ = writeln!(text, "  ⟦{lhs}⟧ = {lv}");
    let _ = writeln!(text, "  ⟦{rhs}⟧ = {rv}");
    let _ = writeln!(text, "  {eq}: {v}");
    let ok = v == Verdict::Invalid;
    let _ = writeln!(text, "{}", if ok { "the equation is not provable from the δ schemes" } else { "demonstration failed" });
    let summary = json!({
        "model": "delta",
        "denotations": [{ "term": lhs, "value": lv }, { "term": rhs, "value": rv }],
        "verdict": v.to_string(),
    });
    emit(cfg, ok, text, summary)
}
