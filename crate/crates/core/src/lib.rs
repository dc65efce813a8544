//! Symbolic reasoning for exemplar-based virtue ethics: a sorted modal
//! event calculus, utility of events, admiration, trait learning by
//! anti-unification, and exemplar and virtue queries.

pub mod eventcalc;
pub mod generalize;
pub mod kernel;
pub mod reasoner;
pub mod syntax;
pub mod pipeline;
pub mod virtue;
