use std::path::PathBuf;
use std::process::{Command, Output};

fn bindlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bindlog"))
        .args(args)
        .env_remove("BINDLOG_SEED")
        .output()
        .unwrap()
}

fn proofs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/proofs")
}

fn fixture(name: &str) -> String {
    proofs_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("bindlog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn demo_extensionality() {
    let o = bindlog(&["demo", "extensionality"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("⟦Lam(x. f(x))⟧ = l0"), "{out}");
    assert!(out.contains("⟦Lam(x. x)⟧ = k0"), "{out}");
    assert!(out.contains("scheme instance Lam(x. f(x)) = Lam(x. x): NOT valid"), "{out}");
    assert_eq!(out.matches("equality axiom").count(), 5);
    assert!(!out.contains("axiom forall x. x = x: not valid"));
}

#[test]
fn demo_disjoint_sum() {
    let o = bindlog(&["demo", "disjoint-sum"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("⟦delta(a, x. a, y. a)⟧ = 0"), "{out}");
    assert!(out.contains("⟦a⟧ = 1"), "{out}");
    assert!(out.contains("delta(a, x. a, y. a) = a: not valid"), "{out}");
}

#[test]
fn demo_json_is_machine_readable() {
    let o = bindlog(&["--json", "demo", "extensionality"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["instance"], "not valid");
    assert_eq!(v["denotations"][0]["value"], "l0");
}

#[test]
fn normalize_one_step() {
    let sig = scratch("t.sig", "fun t : <>\n");
    let o = bindlog(&["--sig", &sig, "normalize", "1_1[t . id_0]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "t_0\n");
    let o = bindlog(&["--sig", &sig, "--json", "normalize", "1_1[t . id_0]"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"], 1);
}

#[test]
fn normalize_budget_exceeded_is_semantic() {
    let sig = scratch("t2.sig", "fun t : <>\n");
    let o = bindlog(&["--sig", &sig, "--budget", "1", "normalize", "1_1[(1_1[t . id_0]) . id_0]"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn precook_worked_example() {
    let sig = scratch("w.sig", "fun f : <0,0>\nfun Lam : <1>\npred = : <0,0>\n");
    let o = bindlog(&["--sig", &sig, "precook", "forall x. forall y. f(x, y) = Lam(z. f(x, z))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "forall x. forall y. f_0(x, y) = Lam_0(f_1(x[up_0], 1_1))\n");
}

#[test]
fn parse_reprints() {
    let sig = fixture("logic.sig");
    let o = bindlog(&["--sig", &sig, "parse", "forall x.P(x)=>Q(x)"]);
    assert_eq!(stdout(&o), "forall x. P(x) => Q(x)\n");
    let o = bindlog(&["--sig", &sig, "parse", "--kind", "term", "Lam(x. f(x)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_proof_exit_codes() {
    let sig = fixture("logic.sig");
    for name in ["cut.prf", "equality.prf", "forall-right.prf"] {
        let o = bindlog(&["--sig", &sig, "check-proof", &fixture(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
    let bad = scratch(
        "bad.prf",
        "rule imp-left [principal=1] P(x), P(x) => Q(x) |- Q(x)\n  rule axiom P(x) |- P(x)\n  rule axiom Q(x) |- Q(x)\n",
    );
    let o = bindlog(&["--sig", &sig, "check-proof", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("invalid proof: at root"));

    let malformed = scratch("mal.prf", "rule axiom P(x |- P(x)\n");
    let o = bindlog(&["--sig", &sig, "check-proof", &malformed]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("mal.prf: line 1"), "{err}");
}

#[test]
fn translated_proofs_check_modulo_sigma() {
    let sig = fixture("logic.sig");
    for name in ["alpha.prf", "capture.prf", "exists-left.prf", "cut.prf"] {
        let out = scratch(&format!("lp-{name}"), "");
        let o = bindlog(&["--sig", &sig, "translate-proof", &fixture(name), "-o", &out]);
        assert_eq!(o.status.code(), Some(0));
        let o = bindlog(&["--sig", &sig, "check-proof", "--syntax", "lprime", &out]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn eval_verdicts_and_exit_codes() {
    let o = bindlog(&["eval", "--model", "ext", "--prop", "forall x. f(x) = x"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bindlog(&["eval", "--model", "ext", "--prop", "Lam(x. f(x)) = Lam(x. x)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bindlog(&["eval", "--model", "ext", "--term", "f(y)", "--assign", "y=k"]);
    assert_eq!(stdout(&o), "⟦f(y)⟧ = k0\n");
    let o = bindlog(&["eval", "--model", "ext", "--prop", "x = f(x)", "--assign", "x=l"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bindlog(&["eval", "--model", "nope", "--prop", "x = x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eval_reports_witness() {
    let o = bindlog(&["--json", "eval", "--model", "fullfn:2", "--prop", "x = y"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(v["verdict"], "not valid");
    assert_ne!(v["witness"]["x"], v["witness"]["y"]);
    let o = bindlog(&["eval", "--model", "fullfn:2", "--prop", "x = y"]);
    assert!(stdout(&o).contains("counterexample: x = "), "{}", stdout(&o));
}

#[test]
fn verify_model_is_reproducible() {
    let args = ["verify-model", "--model", "delta", "--bounds", "1,1,1", "--samples", "50"];
    let a = bindlog(&args);
    let b = bindlog(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_bindlog")).args(args).env("BINDLOG_SEED", "7").output().unwrap();
    assert!(stdout(&c).contains("seed 7"));
}

#[test]
fn dumped_tables_reload() {
    let mdl = scratch("ext.mdl", "");
    let o = bindlog(&["verify-model", "--model", "ext", "--bounds", "1,1,1", "--dump", &mdl]);
    assert_eq!(o.status.code(), Some(0));
    let o = bindlog(&["verify-model", "--model", &mdl, "--bounds", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = bindlog(&["eval", "--model", &mdl, "--prop", "Lam(x. f(x)) = Lam(x. x)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn broken_table_fails_verification() {
    let mdl = scratch("ext2.mdl", "");
    bindlog(&["verify-model", "--model", "ext", "--bounds", "1,1,1", "--dump", &mdl]);
    let text = std::fs::read_to_string(&mdl).unwrap();
    // Λ(x. x) becomes l, which no longer commutes with substitution.
    assert!(text.contains("apply Lam 0 : 1 = k\n"));
    let broken = scratch("ext3.mdl", &text.replacen("apply Lam 0 : 1 = k", "apply Lam 0 : 1 = l", 1));
    let o = bindlog(&["verify-model", "--model", &broken, "--bounds", "1,1,1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}
