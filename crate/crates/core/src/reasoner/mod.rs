//! Bounded forward chaining over belief-indexed judgments, goal-directed
//! introduction, proof traces and their independent replay.

mod bounds;
mod goal;
mod kb;
mod oracle;
mod prove;
mod replay;
mod saturate;
mod traits;

pub use bounds::ProverBounds;
pub use goal::native_truth;
pub use kb::{epistemic_depth, Context, Derivation, Judgment, KnowledgeBase, Rule, Step};
pub use oracle::{as_event, ScenarioOracle, UtilityOracle};
pub use prove::{prove, prove_saturated, ProofResult, Verdict};
pub use replay::{replay, ReplayEnv, ReplayError};
pub use saturate::{saturate, BoundKind, SaturationReport};
pub use traits::{check_trait_schema, identity_of, Observation, Trait, TraitError};

pub(crate) use goal::GoalSearch;
