//! Built-in signatures and theories.

use crate::proofs::{ProofTree, Rule, RuleApp};
use crate::sigma::{parse_rules, PatternRule};
use crate::syntax::{Arg, Prop, Sequent, Signature, Term};

fn sig(text: &str) -> Signature {
    Signature::parse(text).expect("built-in signature")
}

/// `f : <0>`, `Lam : <1>`, `=`.
pub fn ext_signature() -> Signature {
    sig("fun f : <0>\nfun Lam : <1>\npred = : <0,0>")
}

/// `i, j : <0>`, `delta : <0,1,1>`, the constant `a`, `=`.
pub fn delta_signature() -> Signature {
    sig("fun i : <0>\nfun j : <0>\nfun delta : <0,1,1>\nfun a : <>\npred = : <0,0>")
}

/// Untyped λ-calculus: `app : <0,0>`, `lam : <1>`, `=`.
pub fn lambda_signature() -> Signature {
    sig("fun app : <0,0>\nfun lam : <1>\npred = : <0,0>")
}

/// `zero`, `S`, `plus`, `times`, `=`.
pub fn arith_signature() -> Signature {
    sig("fun zero : <>\nfun S : <0>\nfun plus : <0,0>\nfun times : <0,0>\npred = : <0,0>")
}

pub const ARITH_RULES: &str = "\
plus-zero: plus(zero, ?y) -> ?y
plus-succ: plus(S(?x), ?y) -> S(plus(?x, ?y))
times-zero: times(zero, ?y) -> zero
times-succ: times(S(?x), ?y) -> plus(times(?x, ?y), ?y)
";

pub fn arith_rules(sig: &Signature) -> Vec<PatternRule> {
    parse_rules(sig, ARITH_RULES).expect("built-in rules")
}

/// `S(...S(zero))`.
pub fn numeral(n: usize) -> Term {
    (0..n).fold(Term::constant("zero"), |t, _| Term::app("S", [Arg::plain(t)]))
}

fn v(x: &str) -> Term {
    Term::var(x)
}

/// Reflexivity, symmetry, transitivity, then one compatibility axiom per
/// function symbol with arguments.
pub fn equality_axioms(sig: &Signature) -> Vec<Prop> {
    let mut out = vec![
        Prop::forall("x", Prop::eq(v("x"), v("x"))),
        Prop::forall_many(&["x", "y"], Prop::imp(Prop::eq(v("x"), v("y")), Prop::eq(v("y"), v("x")))),
        Prop::forall_many(
            &["x", "y", "z"],
            Prop::imp(
                Prop::eq(v("x"), v("y")),
                Prop::imp(Prop::eq(v("y"), v("z")), Prop::eq(v("x"), v("z"))),
            ),
        ),
    ];
    for (f, arity) in sig.functions() {
        if arity.is_empty() {
            continue;
        }
        let n = arity.len();
        let xs: Vec<String> = (1..=n).map(|i| if n == 1 { "x".into() } else { format!("x{i}") }).collect();
        let ys: Vec<String> = (1..=n).map(|i| if n == 1 { "y".into() } else { format!("y{i}") }).collect();
        let bind = |vars: &[String]| -> Vec<Arg> {
            vars.iter()
                .zip(arity.slots())
                .map(|(x, &k)| {
                    let zs: Vec<String> = (1..=k).map(|j| if k == 1 { "z".into() } else { format!("z{j}") }).collect();
                    Arg::bind(zs, v(x))
                })
                .collect()
        };
        let concl = Prop::eq(Term::app(f, bind(&xs)), Term::app(f, bind(&ys)));
        let body = xs
            .iter()
            .zip(&ys)
            .rev()
            .fold(concl, |acc, (x, y)| Prop::imp(Prop::eq(v(x), v(y)), acc));
        let vars: Vec<&String> = xs.iter().chain(&ys).collect();
        let quantified: Vec<&str> = if n == 1 {
            vec![xs[0].as_str(), ys[0].as_str()]
        } else {
            vars.iter().map(|s| s.as_str()).collect()
        };
        out.push(Prop::forall_many(&quantified, body));
    }
    out
}

/// `∀x∀y (x = y ⇒ Λz x = Λz y)` style compatibility, ∀x f(x) = x, and the
/// extensionality instance `Λx f(x) = Λx x`.
pub fn ext_instance() -> (Prop, Prop) {
    let fx = Term::app("f", [Arg::plain(v("x"))]);
    let premise = Prop::forall("x", Prop::eq(fx.clone(), v("x")));
    let concl = Prop::eq(
        Term::app("Lam", [Arg::bind(["x"], fx)]),
        Term::app("Lam", [Arg::bind(["x"], v("x"))]),
    );
    (premise, concl)
}

/// The proof that 4 is even, modulo the arithmetic rules.
pub fn four_is_even(_sig: &Signature) -> ProofTree<Prop> {
    let refl = Prop::forall("x", Prop::eq(v("x"), v("x")));
    let two = numeral(2);
    let four = numeral(4);
    let times = |a: Term, b: Term| Term::app("times", [Arg::plain(a), Arg::plain(b)]);
    let body = Prop::eq(times(two.clone(), v("x")), four.clone());
    let goal = Prop::exists("x", body.clone());
    let inst = Prop::eq(times(two.clone(), two.clone()), four.clone());
    let axiom = ProofTree::leaf(
        Sequent::new(vec![Prop::eq(four.clone(), four.clone())], vec![inst.clone()]),
        RuleApp::new(Rule::Axiom),
    );
    let all_l = ProofTree::new(
        Sequent::new(vec![refl.clone()], vec![inst]),
        RuleApp::new(Rule::AllL).with("x", Prop::eq(v("x"), v("x")), Some(four)),
        vec![axiom],
    );
    ProofTree::new(
        Sequent::new(vec![refl], vec![goal]),
        RuleApp::new(Rule::ExR).with("x", body, Some(two)),
        vec![all_l],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::WellFormed;

    #[test]
    fn equality_axioms_of_ext_signature() {
        let s = ext_signature();
        let axioms = equality_axioms(&s);
        assert_eq!(axioms.len(), 5);
        let text: Vec<String> = axioms.iter().map(ToString::to_string).collect();
        assert!(text.contains(&"forall x. forall y. x = y => Lam(z. x) = Lam(z. y)".to_string()), "{text:?}");
        for a in &axioms {
            a.well_formed(&s).unwrap();
        }
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral(2).to_string(), "S(S(zero))");
    }
}
