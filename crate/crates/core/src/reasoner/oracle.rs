use std::fmt;

use num_rational::Rational64;

use crate::kernel::{sort_of, Signature, Sort, Term};
use crate::syntax::Scenario;

/// Evaluates `ν(event, t)` from the viewpoint of a belief context.
pub trait UtilityOracle: Send + Sync + fmt::Debug {
    /// `None` when the value is undefined (non-ground event, moment at or
    /// past the horizon, or an action type with no performer in scope).
    fn nu(&self, context: &[(Term, i64)], event: &Term, time: i64) -> Option<Rational64>;
}

/// Turn a bare action type into the event of `performer` doing it.
pub fn as_event(sig: &Signature, event: &Term, performer: Option<&Term>) -> Option<Term> {
    let sort = sort_of(event, sig).ok()?;
    if sig.is_subsort(&sort, &Sort::event()) {
        Some(event.clone())
    } else if sig.is_subsort(&sort, &Sort::action_type()) {
        performer.map(|a| Term::action(a.clone(), event.clone()))
    } else {
        None
    }
}

/// ν computed from a scenario's causal laws and μ. Inside a belief context
/// the innermost believer's laws and μ are used, and a bare action type
/// stands for that believer performing it.
#[derive(Debug, Clone)]
pub struct ScenarioOracle {
    scenario: Scenario,
}

impl ScenarioOracle {
    pub fn new(scenario: Scenario) -> Self {
        ScenarioOracle { scenario }
    }
}

impl UtilityOracle for ScenarioOracle {
    fn nu(&self, context: &[(Term, i64)], event: &Term, time: i64) -> Option<Rational64> {
        let viewer = context.last().map(|(a, _)| a);
        let e = as_event(&self.scenario.signature, event, viewer)?;
        let model = match viewer {
            Some(Term::Const(a)) => self.scenario.agent_model(a),
            Some(_) => return None,
            None => self.scenario.world_model(),
        };
        model.event_utility(&e, time).ok()
    }
}
