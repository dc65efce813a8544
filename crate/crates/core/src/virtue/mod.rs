//! Admiration, exemplars, trait learning and firing, and the virtuous
//! person and virtue queries.

mod admiration;
mod learning;
mod queries;

pub use admiration::{admiration_belief, detect_admiration, pleased_times, AdmirationRecord};
pub use learning::{
    assert_exemplar, exemplar_fact, exemplar_witnesses, exemplars_of, fire_traits, is_exemplar, learn_traits,
    observations_of, observed_situation, FiredAction, LearnedTrait,
};
pub use queries::{admirers_of, is_virtue, trait_holders, virtuous, VirtueVerdict};
