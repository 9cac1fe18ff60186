//! Text formats: search-space configs, traces, formulas and clause filters.
//! Every document may start with the line `force-format v1`; writers always
//! emit it.

mod config;
mod filter;
mod formula_text;
mod lex;
mod traces;

pub use config::{parse_config, write_config};
pub use filter::{export_clause_filter, import_clause_filter, spec_digest, ClauseFilter};
pub use formula_text::{parse_formula, parse_formulas, print_formula, write_formulas};
pub use traces::{parse_traces, write_traces};
