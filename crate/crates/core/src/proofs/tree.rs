use std::fmt;
use std::str::FromStr;

use crate::syntax::Sequent;

use super::formula::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Axiom,
    Cut,
    ContrL,
    ContrR,
    WeakL,
    WeakR,
    ImpL,
    ImpR,
    AndL,
    AndR,
    OrL,
    OrR,
    BotL,
    AllL,
    AllR,
    ExL,
    ExR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Rule {
    pub const ALL: [Rule; 17] = [
        Rule::Axiom,
        Rule::Cut,
        Rule::ContrL,
        Rule::ContrR,
        Rule::WeakL,
        Rule::WeakR,
        Rule::ImpL,
        Rule::ImpR,
        Rule::AndL,
        Rule::AndR,
        Rule::OrL,
        Rule::OrR,
        Rule::BotL,
        Rule::AllL,
        Rule::AllR,
        Rule::ExL,
        Rule::ExR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::Cut => "cut",
            Rule::ContrL => "contr-left",
            Rule::ContrR => "contr-right",
            Rule::WeakL => "weak-left",
            Rule::WeakR => "weak-right",
            Rule::ImpL => "imp-left",
            Rule::ImpR => "imp-right",
            Rule::AndL => "and-left",
            Rule::AndR => "and-right",
            Rule::OrL => "or-left",
            Rule::OrR => "or-right",
            Rule::BotL => "bot-left",
            Rule::AllL => "forall-left",
            Rule::AllR => "forall-right",
            Rule::ExL => "exists-left",
            Rule::ExR => "exists-right",
        }
    }

    pub fn premises(self) -> usize {
        match self {
            Rule::Axiom | Rule::BotL => 0,
            Rule::Cut | Rule::ImpL | Rule::AndR | Rule::OrL => 2,
            _ => 1,
        }
    }

    /// Side of the principal formula, if the rule has one.
    pub fn side(self) -> Option<Side> {
        match self {
            Rule::Axiom | Rule::Cut => None,
            Rule::ContrL | Rule::WeakL | Rule::ImpL | Rule::AndL | Rule::OrL | Rule::BotL | Rule::AllL | Rule::ExL => {
                Some(Side::Left)
            }
            _ => Some(Side::Right),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = match s {
            "=>-left" | "⇒-left" => "imp-left",
            "=>-right" | "⇒-right" => "imp-right",
            "all-left" => "forall-left",
            "all-right" => "forall-right",
            "ex-left" => "exists-left",
            "ex-right" => "exists-right",
            s => s,
        };
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A rule together with its annotations. `x`, `a`, `t` are the `(x,A,t)`
/// parameters of quantifier rules (`a` is also the cut formula);
/// `principal` indexes the principal formula on its side.
#[derive(Clone, Debug)]
pub struct RuleApp<F: Formula> {
    pub rule: Rule,
    pub x: Option<String>,
    pub a: Option<F>,
    pub t: Option<F::Term>,
    pub principal: Option<usize>,
}

impl<F: Formula> RuleApp<F> {
    pub fn new(rule: Rule) -> Self {
        Self {
            rule,
            x: None,
            a: None,
            t: None,
            principal: None,
        }
    }

    pub fn at(mut self, principal: usize) -> Self {
        self.principal = Some(principal);
        self
    }

    pub fn with(mut self, x: &str, a: F, t: Option<F::Term>) -> Self {
        self.x = Some(x.to_string());
        self.a = Some(a);
        self.t = t;
        self
    }

    pub fn witness(mut self, t: F::Term) -> Self {
        self.t = Some(t);
        self
    }

    pub fn formula(mut self, a: F) -> Self {
        self.a = Some(a);
        self
    }
}

#[derive(Clone, Debug)]
pub struct ProofTree<F: Formula> {
    pub conclusion: Sequent<F>,
    pub rule: RuleApp<F>,
    pub premises: Vec<ProofTree<F>>,
}

impl<F: Formula> ProofTree<F> {
    pub fn new(conclusion: Sequent<F>, rule: RuleApp<F>, premises: Vec<ProofTree<F>>) -> Self {
        Self {
            conclusion,
            rule,
            premises,
        }
    }

    pub fn leaf(conclusion: Sequent<F>, rule: RuleApp<F>) -> Self {
        Self::new(conclusion, rule, Vec::new())
    }

    /// Number of nodes on the longest branch.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }

    /// Rebuilds the tree with every formula and term mapped.
    pub fn map<G: Formula>(&self, f: &mut impl FnMut(&F) -> G, g: &mut impl FnMut(&F::Term) -> G::Term) -> ProofTree<G> {
        ProofTree {
            conclusion: Sequent::new(
                self.conclusion.left.iter().map(&mut *f).collect(),
                self.conclusion.right.iter().map(&mut *f).collect(),
            ),
            rule: RuleApp {
                rule: self.rule.rule,
                x: self.rule.x.clone(),
                a: self.rule.a.as_ref().map(&mut *f),
                t: self.rule.t.as_ref().map(&mut *g),
                principal: self.rule.principal,
            },
            premises: self.premises.iter().map(|p| p.map(f, g)).collect(),
        }
    }
}
