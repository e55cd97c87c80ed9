use thiserror::Error;

use crate::proofs::{check_binding_proof, resolve_principal, ProofError, ProofTree, Rule, RuleApp, Syntactic, View};
use crate::sigma::LProp;
use crate::syntax::{Prop, Sequent, Signature};

use super::{precook, precook_prop};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("invalid source proof: {0}")]
    InvalidSourceProof(#[from] ProofError),
}

/// Translates a checked binding-logic proof into a proof modulo σ of the
/// same shape. Quantifier nodes carry `(x, A′, t′)`.
pub fn translate_proof(sig: &Signature, p: &ProofTree<Prop>) -> Result<ProofTree<LProp>, TranslateError> {
    check_binding_proof(sig, p)?;
    Ok(go(sig, p))
}

fn go(sig: &Signature, p: &ProofTree<Prop>) -> ProofTree<LProp> {
    let cook = |a: &Prop| precook_prop(sig, a);
    let rule = p.rule.rule;
    let principal = resolve_principal(sig, &Syntactic, p);
    let mut app = RuleApp::<LProp> {
        rule,
        x: p.rule.x.clone(),
        a: p.rule.a.as_ref().map(cook),
        t: p.rule.t.as_ref().map(|t| precook(sig, t, &[])),
        principal,
    };
    if matches!(rule, Rule::AllL | Rule::AllR | Rule::ExL | Rule::ExR) && app.a.is_none() {
        let side = match rule {
            Rule::AllL | Rule::ExL => &p.conclusion.left,
            _ => &p.conclusion.right,
        };
        if let Some(c) = principal.and_then(|i| side.get(i)) {
            if let View::Forall(x, a) | View::Exists(x, a) = crate::proofs::Formula::view(c) {
                app.x = Some(x.to_string());
                app.a = Some(cook(a));
            }
        }
    }
    ProofTree::new(
        Sequent::new(
            p.conclusion.left.iter().map(cook).collect(),
            p.conclusion.right.iter().map(cook).collect(),
        ),
        app,
        p.premises.iter().map(|q| go(sig, q)).collect(),
    )
}
