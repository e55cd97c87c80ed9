//! Sequent proofs, plain and modulo a congruence.

mod check;
mod file;
mod formula;
mod tree;

pub(crate) use check::resolve_principal;
pub use check::{check_binding_proof, check_modulo_proof, ProofError, ProofErrorKind};
pub use file::{parse_proof, print_proof, ProofFileError};
pub use formula::{congruence_closure_check, Congruence, Formula, RewriteCongruence, Syntactic, View};
pub use tree::{ProofTree, Rule, RuleApp, Side};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Path;
    use crate::sigma::RewriteSystem;
    use crate::syntax::{parse_prop, parse_sequent, parse_term, Prop, Sequent, Signature};
    use crate::theories;

    fn sig() -> Signature {
        Signature::parse("fun f : <0>\nfun Lam : <1>\npred = : <0,0>\npred P : <0>\npred Q : <0>").unwrap()
    }

    fn seq(s: &Signature, src: &str) -> Sequent<Prop> {
        parse_sequent(s, src).unwrap()
    }

    #[test]
    fn axiom() {
        let s = sig();
        let p = ProofTree::leaf(seq(&s, "P(x) |- P(x)"), RuleApp::new(Rule::Axiom));
        assert_eq!(check_binding_proof(&s, &p), Ok(()));
        let q = ProofTree::leaf(seq(&s, "P(x) |- P(y)"), RuleApp::new(Rule::Axiom));
        assert!(matches!(
            check_binding_proof(&s, &q).unwrap_err().kind,
            ProofErrorKind::RuleMismatch(_)
        ));
    }

    #[test]
    fn forall_right_freshness() {
        let s = sig();
        let p = ProofTree::new(
            seq(&s, "P(x) |- forall x. P(x)"),
            RuleApp::new(Rule::AllR),
            vec![ProofTree::leaf(seq(&s, "P(x) |- P(x)"), RuleApp::new(Rule::Axiom))],
        );
        let e = check_binding_proof(&s, &p).unwrap_err();
        assert_eq!(e.path, Path::root());
        assert!(matches!(e.kind, ProofErrorKind::SideConditionViolated(_)));
    }

    #[test]
    fn equality_derivation() {
        let s = sig();
        let text = "\
rule forall-left [t=y; principal=0] forall y. forall z. y = z => Lam(x. y) = Lam(x. z), y = z |- Lam(x. y) = Lam(x. z)
  rule forall-left [t=z; principal=1] y = z, forall z. y = z => Lam(x. y) = Lam(x. z) |- Lam(x. y) = Lam(x. z)
    rule imp-left [principal=1] y = z, y = z => Lam(x. y) = Lam(x. z) |- Lam(x. y) = Lam(x. z)
      rule weak-right [principal=0] y = z |- Lam(x. y) = Lam(x. z), y = z
        rule axiom y = z |- y = z
      rule weak-left [principal=0] y = z, Lam(x. y) = Lam(x. z) |- Lam(x. y) = Lam(x. z)
        rule axiom Lam(x. y) = Lam(x. z) |- Lam(x. y) = Lam(x. z)
";
        let p: ProofTree<Prop> = parse_proof(&s, text).unwrap();
        assert_eq!(p.size(), 7);
        assert_eq!(check_binding_proof(&s, &p), Ok(()));
        let again: ProofTree<Prop> = parse_proof(&s, &print_proof(&p)).unwrap();
        assert_eq!(print_proof(&again), print_proof(&p));
    }

    #[test]
    fn premise_errors_carry_paths() {
        let s = sig();
        let p = ProofTree::new(
            seq(&s, "P(x), Q(x) |- P(x)"),
            RuleApp::new(Rule::WeakL).at(1),
            vec![ProofTree::leaf(seq(&s, "P(x) |- Q(x)"), RuleApp::new(Rule::Axiom))],
        );
        assert!(matches!(check_binding_proof(&s, &p), Err(ProofError { ref path, .. }) if path.0 == vec![]));
        let p = ProofTree::new(
            seq(&s, "P(x), Q(x) |- Q(x)"),
            RuleApp::new(Rule::WeakL).at(0),
            vec![ProofTree::leaf(seq(&s, "Q(x) |- P(x)"), RuleApp::new(Rule::Axiom))],
        );
        assert!(check_binding_proof(&s, &p).is_err());
        let p = ProofTree::leaf(seq(&s, "|- P(x)"), RuleApp::new(Rule::WeakL));
        assert!(matches!(
            check_binding_proof(&s, &p).unwrap_err().kind,
            ProofErrorKind::RuleMismatch(_) | ProofErrorKind::PrincipalFormulaMissing(_)
        ));
    }

    #[test]
    fn four_is_even() {
        let s = theories::arith_signature();
        let rules = theories::arith_rules(&s);
        let cong = RewriteCongruence::new(RewriteSystem::from_rules(&s, rules));
        let p = theories::four_is_even(&s);
        assert_eq!(p.height(), 3);
        assert_eq!(check_modulo_proof(&s, &cong, &p), Ok(()));
        let axiom = &p.premises[0].premises[0];
        assert_eq!(check_modulo_proof(&s, &cong, axiom), Ok(()));
        let e = check_modulo_proof(&s, &Syntactic, axiom).unwrap_err();
        assert!(matches!(e.kind, ProofErrorKind::RuleMismatch(_)));
    }

    #[test]
    fn congruence_check_on_props() {
        let s = theories::arith_signature();
        let cong = RewriteCongruence::new(RewriteSystem::from_rules(&s, theories::arith_rules(&s)));
        let four = theories::numeral(4);
        let a = Prop::eq(four.clone(), four.clone());
        let b = Prop::eq(
            crate::syntax::Term::app("times", [theories::numeral(2).into(), theories::numeral(2).into()]),
            four,
        );
        assert_eq!(congruence_closure_check(&cong, &a, &b), Ok(true));
        assert_eq!(congruence_closure_check(&cong, &a, &a), Ok(true));
        let _ = parse_term(&s, "S(zero)").unwrap();
        let _ = parse_prop(&s, "zero = zero").unwrap();
    }
}
