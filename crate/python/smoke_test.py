"""Smoke test for the bindlog extension module."""

import bindlog

SIG = bindlog.Signature(
    "fun f : <0>\nfun Lam : <1>\npred = : <0,0>\npred P : <0>\npred Q : <0>\n"
)


def test_syntax():
    t = bindlog.Term.parse(SIG, "Lam(x. f(y))")
    assert t.free_vars() == ["y"]
    u = t.substitute("y", bindlog.Term.parse(SIG, "x"))
    assert u.free_vars() == ["x"], u
    assert u.alpha_eq(bindlog.Term.parse(SIG, "Lam(z. f(x))"))
    c = t.precook(SIG)
    assert c.sort(SIG) == "0"
    assert c.uncook(SIG).alpha_eq(t)


def test_sigma():
    sig = bindlog.Signature("fun t : <>\n")
    n = bindlog.LTerm.parse(sig, "1_1[t . id_0]").normalize(sig)
    assert str(n) == "t_0", n


def test_models():
    ext = bindlog.Model("ext")
    assert ext.eval_term(bindlog.Term.parse(ext.signature, "Lam(x. f(x))")) == "l0"
    assert ext.eval_term(bindlog.Term.parse(ext.signature, "Lam(x. x)")) == "k0"
    verdict, _ = ext.validity(bindlog.Prop.parse(ext.signature, "forall x. f(x) = x"))
    assert verdict == "valid"
    verdict, _ = ext.validity(bindlog.Prop.parse(ext.signature, "Lam(x. f(x)) = Lam(x. x)"))
    assert verdict == "not valid"
    ok, failures = ext.verify((2, 2, 2))
    assert ok and not failures

    delta = bindlog.Model("delta")
    s = delta.signature
    assert delta.eval_term(bindlog.Term.parse(s, "delta(a, x. a, y. a)")) == "0"
    assert not delta.is_valid(bindlog.Prop.parse(s, "delta(a, x. a, y. a) = a"))


def test_proofs():
    proof = "rule imp-right [principal=0] |- P(x) => P(x)\n  rule axiom P(x) |- P(x)\n"
    assert bindlog.check_proof(SIG, proof) == 2
    image = bindlog.translate(SIG, proof)
    assert bindlog.check_lprime_proof(SIG, image) == 2
    bad = "rule axiom P(x) |- Q(x)\n"
    try:
        bindlog.check_proof(SIG, bad)
    except bindlog.ProofError:
        pass
    else:
        raise AssertionError("invalid proof accepted")
    try:
        bindlog.Term.parse(SIG, "f(")
    except bindlog.BindlogError:
        pass
    else:
        raise AssertionError("malformed term accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
