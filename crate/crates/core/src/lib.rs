//! A workbench for embedding non-ground (disjunctive) logic programs into
//! first-order autoepistemic logic.
//!
//! - [`syntax`]: terms, atoms, formulas, rules, programs, theories.
//! - [`textio`]: parsing and canonical rendering of `.lp` and `.fot` text.
//! - [`lp`]: grounding, reducts, minimal and stable models.
//! - [`foael`]: interpretations, any-name/all-name satisfaction, entailment.
//! - [`embed`]: program embeddings and the unique-names/introspection axioms.
//! - [`expand`]: stable expansions via belief kernels.
//! - [`corr`]: correspondence checks between theories and programs.
//! - [`cli`]: the `aelab` command line.

pub mod cli;
pub mod corr;
pub mod embed;
pub mod error;
pub mod expand;
pub mod foael;
pub mod lp;
pub mod syntax;
pub mod textio;

pub use error::{Caps, Error, ParseError, Result};
