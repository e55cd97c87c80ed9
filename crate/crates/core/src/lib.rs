//! Binding logic kernel.
//!
//! Named binder syntax ([`syntax`]), sequent proof checking plain and
//! modulo a rewrite congruence ([`proofs`]), the sorted explicit
//! substitution language with its rewrite system ([`sigma`]), the
//! translation between the two ([`precook`]) and binding models
//! ([`models`]).

pub mod lex;
pub mod models;
pub mod path;
pub mod precook;
pub mod proofs;
pub mod sigma;
pub mod syntax;
pub mod theories;

pub use lex::ParseError;
pub use path::Path;
