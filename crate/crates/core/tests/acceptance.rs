//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bindlog_core::models::{
    binding_model_from_sigma, check_coherence, check_ifs, eval_lterm, eval_term, full_function_ifs,
    sigma_model_from_binding, validate_sigma_rules, validity, Assignment, BindingModel, CheckMode, DeltaModel,
    EvalOptions, ExtElem, ExtModel, Ifs, LValue, NatFn, Verdict,
};
use bindlog_core::precook::{precook, precook_prop, subst_commutes, translate_proof, uncook};
use bindlog_core::proofs::{check_binding_proof, check_modulo_proof, parse_proof, ProofTree, RewriteCongruence, Rule};
use bindlog_core::sigma::{local_confluence_probe, sort_of, termination_probe, ProbeConfig, RewriteSystem, Sort};
use bindlog_core::syntax::{parse_prop, parse_term, Arg, Prop, Signature, Term, TermGen, ToDeBruijn};
use bindlog_core::theories::{
    arith_rules, arith_signature, delta_signature, equality_axioms, ext_instance, four_is_even,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn mixed_signature() -> Signature {
    Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun d : <0,1,2>\nfun c : <>\npred = : <0,0>\npred B : <1>").unwrap()
}

/// Criterion 1 on any model of the extensionality signature.
fn ext_verdicts<M: BindingModel>(m: &M) -> Result<Vec<String>, String> {
    let opts = EvalOptions { exhaustive: true };
    let mut notes = Vec::new();
    let axioms = equality_axioms(m.signature());
    ensure(axioms.len() == 5, format!("{} equality axioms", axioms.len()))?;
    for a in &axioms {
        let v = validity(m, a, opts).map_err(|e| e.to_string())?;
        ensure(v.verdict == Verdict::Valid, format!("axiom `{a}` is {}", v.verdict))?;
    }
    let (premise, concl) = ext_instance();
    let v = validity(m, &premise, opts).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Valid, format!("`{premise}` is {}", v.verdict))?;
    let v = validity(m, &concl, opts).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Invalid, format!("`{concl}` is {}", v.verdict))?;
    for (src, want) in [("Lam(x. f(x))", "l0"), ("Lam(x. x)", "k0")] {
        let t = parse_term(m.signature(), src).unwrap();
        let e = eval_term(m, &t, &[], &BTreeMap::new()).map_err(|e| e.to_string())?;
        let shown = m.show(0, &e);
        ensure(shown == want, format!("⟦{src}⟧ = {shown}, expected {want}"))?;
        notes.push(format!("⟦{src}⟧ = {shown}"));
    }
    Ok(notes)
}

fn criterion_1() -> Outcome {
    let m = ExtModel::new();
    ensure(m.carrier(0).unwrap().len() == 2, "|M_0| != 2")?;
    let notes = ext_verdicts(&m)?;
    Ok(format!("5 axioms valid, ∀x f(x)=x valid, instance invalid; {}", notes.join(", ")))
}

fn delta_value(m: &DeltaModel, t: &Term, phi: &Assignment<NatFn>) -> Result<u64, String> {
    eval_term(m, t, &[], phi).map(|e| e.value()).map_err(|e| e.to_string())
}

fn criterion_2() -> Outcome {
    let m = DeltaModel::default();
    let sig = delta_signature();
    let empty = BTreeMap::new();
    let d = parse_term(&sig, "delta(a, x. a, y. a)").unwrap();
    let a = parse_term(&sig, "a").unwrap();
    ensure(delta_value(&m, &d, &empty)? == 0, "⟦δ(a,x.a,y.a)⟧ != 0")?;
    ensure(delta_value(&m, &a, &empty)? == 1, "⟦a⟧ != 1")?;
    let eq = Prop::eq(d, a);
    let v = validity(&m, &eq, EvalOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::Invalid, format!("δ(a,x.a,y.a) = a is {}", v.verdict))?;

    let mut gen = TermGen::new(&sig);
    gen.names = ["x", "y", "z"].map(String::from).to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples = 1000;
    for (inj, keep_left) in [("i", true), ("j", false)] {
        for k in 0..samples {
            let size_u = rng.gen_range(1..=6);
            let size_v = rng.gen_range(1..=6);
            let u = gen.term(&mut rng, size_u);
            let v = gen.term(&mut rng, size_v);
            let scrutinee = Term::app(inj, [Arg::plain(Term::var(if keep_left { "x" } else { "y" }))]);
            let lhs = Term::app(
                "delta",
                [Arg::plain(scrutinee), Arg::bind(["x"], u.clone()), Arg::bind(["y"], v.clone())],
            );
            let rhs = if keep_left { u } else { v };
            let phi: Assignment<NatFn> = ["x", "y", "z"]
                .iter()
                .map(|x| (x.to_string(), NatFn::constant(0, rng.gen_range(0..50))))
                .collect();
            let (l, r) = (delta_value(&m, &lhs, &phi)?, delta_value(&m, &rhs, &phi)?);
            ensure(l == r, format!("instance {k} of the {inj} scheme fails: {lhs} = {rhs} gives {l} vs {r}"))?;
        }
    }
    Ok(format!("⟦δ(a,x.a,y.a)⟧ = 0, ⟦a⟧ = 1, equation invalid; 2 × {samples} scheme instances hold"))
}

fn criterion_3() -> Outcome {
    let m = ExtModel::new();
    let r = check_ifs(&m, (3, 3, 3), CheckMode::Exhaustive).map_err(|e| e.to_string())?;
    ensure(r.ok(), format!("ext IFS violations: {:?}", r))?;
    let mut checked = r.checked();
    for f in ["f", "Lam"] {
        let c = check_coherence(&m, f, (3, 3), CheckMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure(c.ok(), format!("{f} coherence violations: {c:?}"))?;
        ensure(c.vacuous_binder.ok(), format!("lemma violations for {f}: {:?}", c.vacuous_binder))?;
        if f == "Lam" {
            ensure(c.vacuous_binder.checked > 0, "lemma not exercised")?;
        }
        checked += c.coherence.checked + c.lift_identity.checked + c.vacuous_binder.checked;
    }
    let full = check_ifs(&full_function_ifs(2), (2, 2, 2), CheckMode::Exhaustive).map_err(|e| e.to_string())?;
    ensure(full.ok(), format!("full function IFS violations: {full:?}"))?;
    Ok(format!("{checked} ext instances and {} full-function instances, no violations", full.checked()))
}

fn criterion_4() -> Outcome {
    let sig = Signature::parse("fun f : <0,0>\nfun Lam : <1>\npred = : <0,0>").unwrap();
    let a = parse_prop(&sig, "forall x. forall y. f(x, y) = Lam(z. f(x, z))").unwrap();
    let out = precook_prop(&sig, &a).to_string();
    let want = "forall x. forall y. f_0(x, y) = Lam_0(f_1(x[up_0], 1_1))";
    ensure(out == want, format!("worked example gave `{out}`"))?;

    let sig = mixed_signature();
    let gen = TermGen::new(&sig);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let size = rng.gen_range(1..=20);
        let t = gen.term(&mut rng, size);
        let c = precook(&sig, &t, &[]);
        ensure(sort_of(&sig, &c) == Ok(Sort::Term(0)), format!("sort of `{c}`: {:?}", sort_of(&sig, &c)))?;
        let back = uncook(&sig, &c).map_err(|e| e.to_string())?;
        ensure(back.alpha_eq(&t), format!("uncook(precook({t})) = {back}"))?;
    }
    Ok("worked example exact; 1000 terms have sort 0 and round-trip up to α".into())
}

fn criterion_5() -> Outcome {
    let sig = mixed_signature();
    let rs = RewriteSystem::sigma(&sig);
    let gen = TermGen::new(&sig);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 10_000;
    for k in 0..samples {
        let (st, sa) = (rng.gen_range(1..=6), rng.gen_range(1..=10));
        let t = gen.term(&mut rng, st);
        let a = gen.prop(&mut rng, sa);
        let x = gen.names[rng.gen_range(0..gen.names.len())].clone();
        let ok = subst_commutes(&rs, &t, &a, &x).map_err(|e| e.to_string())?;
        ensure(ok, format!("triple {k}: t = {t}, A = {a}, x = {x}"))?;
    }
    Ok(format!("{samples} triples commute"))
}

fn criterion_6() -> Outcome {
    let sig = mixed_signature();
    let rs = RewriteSystem::sigma(&sig);
    let cfg = ProbeConfig {
        samples: 10_000,
        size_bound: 40,
        seed: 6,
        check_sorts: true,
        ..ProbeConfig::default()
    };
    let term = termination_probe(&rs, &cfg);
    ensure(term.ok(), format!("termination/uniqueness failures: {:?}", &term.failures[..term.failures.len().min(3)]))?;
    let conf = local_confluence_probe(&rs, &cfg);
    ensure(conf.ok(), format!("divergent peaks: {:?}", &conf.divergent[..conf.divergent.len().min(3)]))?;
    Ok(format!(
        "{} terms normalize identically (max {} / {} steps), {} peaks joinable",
        term.samples, term.max_steps_innermost, term.max_steps_outermost, conf.peaks_tested
    ))
}

fn corpus() -> (Signature, Vec<(String, ProofTree<Prop>)>) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/proofs");
    let sig = Signature::parse(&std::fs::read_to_string(dir.join("logic.sig")).unwrap()).unwrap();
    let mut proofs = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries.into_iter().filter(|p| p.extension().is_some_and(|e| e == "prf")) {
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let p = parse_proof(&sig, &text).unwrap_or_else(|e| panic!("{name}: {e}"));
        proofs.push((name, p));
    }
    (sig, proofs)
}

fn criterion_7() -> Outcome {
    let (sig, proofs) = corpus();
    ensure(proofs.len() >= 10, format!("only {} proofs", proofs.len()))?;
    let mut used = std::collections::BTreeSet::new();
    let cong = RewriteCongruence::new(RewriteSystem::sigma(&sig));
    for (name, p) in &proofs {
        check_binding_proof(&sig, p).map_err(|e| format!("{name}: {e}"))?;
        let img = translate_proof(&sig, p).map_err(|e| format!("{name}: {e}"))?;
        check_modulo_proof(&sig, &cong, &img).map_err(|e| format!("{name} (translated): {e}"))?;
        ensure(img.height() == p.height(), format!("{name}: heights {} vs {}", img.height(), p.height()))?;
        used.extend(p.rules());
    }
    let missing: Vec<_> = Rule::ALL.iter().filter(|r| !used.contains(r)).collect();
    ensure(missing.is_empty(), format!("rules without a proof: {missing:?}"))?;
    ensure(proofs.iter().any(|(n, _)| n == "equality"), "no equality derivation")?;

    let arith = arith_signature();
    let four = four_is_even(&arith);
    let cong = RewriteCongruence::new(RewriteSystem::from_rules(&arith, arith_rules(&arith)));
    check_modulo_proof(&arith, &cong, &four).map_err(|e| format!("4 is even: {e}"))?;
    Ok(format!("{} proofs covering all {} rules, translated with equal heights; 4 is even checks", proofs.len(), Rule::ALL.len()))
}

fn criterion_8() -> Outcome {
    let m = ExtModel::new();
    let n = sigma_model_from_binding(m.clone());
    let rules = validate_sigma_rules(&n, 1000, 8);
    for r in &rules {
        ensure(r.checked == 1000 && r.failed == 0, format!("σ rule {}: {r:?}", r.rule))?;
    }
    let sig = m.signature().clone();
    let gen = TermGen::new(&sig);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let size = rng.gen_range(1..=15);
        let t = gen.term(&mut rng, size);
        let phi: Assignment<ExtElem> = gen
            .names
            .iter()
            .map(|x| (x.clone(), if rng.gen_bool(0.5) { ExtElem::K } else { ExtElem::L }))
            .collect();
        let direct = eval_term(&m, &t, &[], &phi).map_err(|e| e.to_string())?;
        let via = match eval_lterm(&n, &precook(&sig, &t, &[]), &phi).map_err(|e| e.to_string())? {
            LValue::Term(e) => e,
            LValue::Subst(_) => return Err(format!("{t} denotes a substitution")),
        };
        ensure(direct == via, format!("⟦{t}⟧ = {direct:?} but its translation denotes {via:?}"))?;
    }
    let back = binding_model_from_sigma(n);
    ext_verdicts(&back).map_err(|e| format!("after the round trip: {e}"))?;
    Ok(format!("{} σ rules × 1000 instances sound; 1000 terms transported; round trip keeps verdicts", rules.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("extensionality independence", criterion_1, Duration::from_secs(1)),
        ("disjoint-sum non-provability", criterion_2, Duration::from_secs(5)),
        ("IFS and coherence sweeps", criterion_3, Duration::from_secs(60)),
        ("pre-cooking fidelity", criterion_4, Duration::from_secs(10)),
        ("substitution commutation", criterion_5, Duration::from_secs(120)),
        ("σ engine health", criterion_6, Duration::from_secs(300)),
        ("proof pipeline", criterion_7, Duration::from_secs(5)),
        ("model adapters", criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {} ({name}): PASS in {took:.2?}: {msg}", i + 1),
            Err(msg) => {
                println!("criterion {} ({name}): FAIL in {took:.2?}: {msg}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria pass", criteria.len());
}
