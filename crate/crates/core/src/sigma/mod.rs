//! Sorted explicit substitutions: terms, sorts, the σ rewrite system and
//! user pattern rules.

pub mod gen;
mod lprop;
mod lterm;
mod normalize;
pub mod parse;
mod pattern;
pub mod probe;
mod rules;
mod sort;

pub use lprop::LProp;
pub use lterm::LTerm;
pub use normalize::{
    is_f_prop, is_f_term, NormalizeError, NormalizeOptions, Normalized, RewriteSystem, RuleId, Strategy,
    DEFAULT_STEP_BUDGET,
};
pub use parse::{parse_lprop, parse_lsequent, parse_lterm, parse_pattern};
pub use pattern::{parse_rules, Bindings, Num, Pat, PatternRule, RuleError};
pub use rules::{lift, root_step, SigmaRule};
pub use sort::{check_prop_sorts, sort_of, Sort, SortError};
pub use gen::LTermGen;
pub use probe::{check_peak, local_confluence_probe, termination_probe, ConfluenceReport, ProbeConfig, ProbeFailure, TerminationReport};
