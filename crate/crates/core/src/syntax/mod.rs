//! Concrete syntax: s-expressions, formulas and scenario files.

mod formula;
mod infer;
mod scenario;
mod sexp;

pub use formula::{
    formula_from_sexp, formula_from_sexp_checked, parse_formula, parse_rational, parse_term,
    print_formula, print_rational, print_term, term_from_sexp, term_from_sexp_checked,
    ParseError,
};
pub use infer::infer_signature;
pub use scenario::{
    load_scenario, parse_scenario, parse_scenario_bytes, Config, Diagnostic, DiagnosticKind,
    Query, Scenario, ScenarioError,
};
pub use sexp::{parse_sexp, parse_sexps, Sexp, SexpKind, SyntaxError};
