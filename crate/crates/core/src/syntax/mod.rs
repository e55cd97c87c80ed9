//! Binding-logic syntax: signatures, named terms and propositions,
//! grafting, substitution and α-equivalence.

mod debruijn;
mod gen;
mod parse;
mod print;
mod signature;
mod term;
mod wf;

pub use gen::TermGen;
pub use debruijn::{DbArg, DbProp, DbTerm, ToDeBruijn};
pub use parse::{parse_prop, parse_sequent, parse_term, Sequent};
pub use signature::{is_identifier, BindingArity, Signature, SignatureError, RESERVED};
pub use term::{Arg, CounterFresh, FreshNames, Prop, SubstMap, Syntax, Term};
pub use wf::{WellFormed, WfError, WfErrorKind};

pub(crate) use print::{fmt_binary, PropKind};
