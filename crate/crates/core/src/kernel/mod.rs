//! Sorted terms and formulas of the calculus: signatures, substitution,
//! alpha-equivalence and sort checking.

mod alpha;
mod ast;
mod check;
mod sort;
mod subst;

pub use alpha::{alpha_equivalent, alpha_equivalent_terms, canonical_form, canonical_term};
pub use ast::{
    conjoin, Comparison, CountBound, Formula, ModalOp, Pred, Term, UtilityAtom, Var,
};
pub use check::{check_sorts, sort_of, SortError, SortErrorKind, SortedFormula, Span};
pub use sort::{FunctionSig, Signature, SignatureError, Sort, EQUALITY};
pub use subst::Substitution;

/// Apply `s` to `f`, renaming bound variables where needed.
pub fn apply_substitution(f: &Formula, s: &Substitution) -> Formula {
    s.apply(f)
}
