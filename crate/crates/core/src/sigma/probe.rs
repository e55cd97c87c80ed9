//! Randomized termination, uniqueness and local confluence probes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::gen::LTermGen;
use super::lterm::LTerm;
use super::normalize::{NormalizeOptions, RewriteSystem, Strategy};

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub samples: usize,
    pub size_bound: usize,
    pub max_level: usize,
    pub seed: u64,
    pub budget: usize,
    /// Assert subject reduction at every step.
    pub check_sorts: bool,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            size_bound: 40,
            max_level: 3,
            seed: 0,
            budget: super::DEFAULT_STEP_BUDGET,
            check_sorts: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeFailure {
    pub sample: usize,
    pub term: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TerminationReport {
    pub samples: usize,
    pub max_steps_innermost: usize,
    pub max_steps_outermost: usize,
    pub total_steps: usize,
    pub failures: Vec<ProbeFailure>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub samples: usize,
    /// Samples with at least two redexes.
    pub peaks_tested: usize,
    pub divergent: Vec<ProbeFailure>,
}

impl TerminationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl ConfluenceReport {
    pub fn ok(&self) -> bool {
        self.divergent.is_empty()
    }
}

fn sample(gen: &LTermGen, cfg: &ProbeConfig, i: usize) -> LTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ i as u64);
    gen.any(&mut rng, cfg.size_bound)
}

fn opts(cfg: &ProbeConfig, strategy: Strategy) -> NormalizeOptions {
    NormalizeOptions {
        budget: cfg.budget,
        strategy,
        check_sorts: cfg.check_sorts,
    }
}

/// Normalizes every sample under both strategies and compares the normal
/// forms.
pub fn termination_probe(rs: &RewriteSystem, cfg: &ProbeConfig) -> TerminationReport {
    let gen = LTermGen::new(rs.signature(), cfg.max_level);
    let results: Vec<_> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let t = sample(&gen, cfg, i);
            let fail = |reason: String| ProbeFailure {
                sample: i,
                term: t.to_string(),
                reason,
            };
            let a = rs.normalize_with(&t, opts(cfg, Strategy::Innermost));
            let b = rs.normalize_with(&t, opts(cfg, Strategy::Outermost));
            match (a, b) {
                (Ok(a), Ok(b)) if a.value == b.value => Ok((a.steps, b.steps)),
                (Ok(a), Ok(b)) => Err(fail(format!("normal forms differ: {} vs {}", a.value, b.value))),
                (Err(e), _) | (_, Err(e)) => Err(fail(e.to_string())),
            }
        })
        .collect();
    let mut report = TerminationReport {
        samples: cfg.samples,
        ..Default::default()
    };
    for r in results {
        match r {
            Ok((a, b)) => {
                report.max_steps_innermost = report.max_steps_innermost.max(a);
                report.max_steps_outermost = report.max_steps_outermost.max(b);
                report.total_steps += a;
            }
            Err(f) => report.failures.push(f),
        }
    }
    report
}

/// Checks that all one-step reducts of a term share its normal form.
pub fn check_peak(rs: &RewriteSystem, t: &LTerm, budget: usize) -> Result<bool, String> {
    let redexes = rs.redexes(t);
    if redexes.len() < 2 {
        return Ok(false);
    }
    let o = NormalizeOptions {
        budget,
        ..Default::default()
    };
    let nf = rs.normalize_with(t, o).map_err(|e| e.to_string())?.value;
    for p in &redexes {
        let (rule, u) = rs.rewrite_at(t, p).expect("listed redex");
        let v = rs.normalize_with(&u, o).map_err(|e| e.to_string())?.value;
        if v != nf {
            return Err(format!(
                "rewriting at {p} with {} gives normal form {v}, expected {nf}",
                rs.rule_name(rule)
            ));
        }
    }
    Ok(true)
}

/// Rewrites every redex of each sample once and checks that the results
/// join.
pub fn local_confluence_probe(rs: &RewriteSystem, cfg: &ProbeConfig) -> ConfluenceReport {
    let gen = LTermGen::new(rs.signature(), cfg.max_level);
    let results: Vec<_> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let t = sample(&gen, cfg, i);
            check_peak(rs, &t, cfg.budget).map_err(|reason| ProbeFailure {
                sample: i,
                term: t.to_string(),
                reason,
            })
        })
        .collect();
    let mut report = ConfluenceReport {
        samples: cfg.samples,
        ..Default::default()
    };
    for r in results {
        match r {
            Ok(true) => report.peaks_tested += 1,
            Ok(false) => {}
            Err(f) => report.divergent.push(f),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    fn sig() -> Signature {
        Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun c : <>").unwrap()
    }

    #[test]
    fn small_probes_pass_and_are_deterministic() {
        let rs = RewriteSystem::sigma(&sig());
        let cfg = ProbeConfig {
            samples: 200,
            size_bound: 20,
            ..Default::default()
        };
        let a = termination_probe(&rs, &cfg);
        assert!(a.ok(), "{:?}", a.failures.first());
        assert_eq!(a, termination_probe(&rs, &cfg));
        let c = local_confluence_probe(&rs, &cfg);
        assert!(c.ok(), "{:?}", c.divergent.first());
        assert!(c.peaks_tested > 0);
    }

    #[test]
    fn normal_term_is_vacuous_peak() {
        let rs = RewriteSystem::sigma(&sig());
        assert_eq!(check_peak(&rs, &LTerm::index(1, 1), 100), Ok(false));
    }
}
