//! Unification, matching and anti-unification of terms, formulas and
//! formula sets.

mod formula_set;
mod lgg;
mod unify;

pub use formula_set::{generalize_formula_set, universal_closure, FormulaSetGeneralization, FormulaSetOptions};
pub use lgg::{
    anti_unify_formulas, anti_unify_ho, anti_unify_term_list, anti_unify_terms, AntiUnifier,
    GeneralizeError, Generalization,
};
pub use unify::{
    match_formula, match_formula_with, match_term, match_term_with, respects_sorts, unify, unify_all,
    unify_sorted,
};
