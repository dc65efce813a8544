//! Event-calculus state and the horizon-summed utility of events.
//!
//! For an event `e` at moment `t` with initiated fluents `I` and terminated
//! fluents `T`, the utility up to horizon `H` is
//!
//! ```text
//! ν(e, t) = Σ_{y=t+1..H} ( Σ_{f∈I} μ(f, y) − Σ_{f∈T} μ(f, y) )
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::generalize::{match_term, respects_sorts};
use crate::kernel::{Signature, Term};
use crate::syntax::{print_term, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LawKind {
    Initiates,
    Terminates,
}

impl LawKind {
    pub fn keyword(self) -> &'static str {
        match self {
            LawKind::Initiates => "initiates",
            LawKind::Terminates => "terminates",
        }
    }
}

/// Inclusive moment range; `None` bounds are open.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeGuard {
    pub from: Option<i64>,
    pub until: Option<i64>,
}

impl TimeGuard {
    pub fn always() -> Self {
        TimeGuard::default()
    }

    pub fn at(t: i64) -> Self {
        TimeGuard {
            from: Some(t),
            until: Some(t),
        }
    }

    pub fn admits(&self, t: i64) -> bool {
        self.from.is_none_or(|f| t >= f) && self.until.is_none_or(|u| t <= u)
    }

    pub fn overlaps(&self, other: &TimeGuard) -> bool {
        let lo = match (self.from, other.from) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.until, other.until) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        match (lo, hi) {
            (Some(l), Some(h)) => l <= h,
            _ => true,
        }
    }
}

/// `initiates(event, fluent)` or `terminates(event, fluent)`, optionally
/// restricted in time and optionally private to one agent's beliefs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalLaw {
    pub kind: LawKind,
    pub event: Term,
    pub fluent: Term,
    pub guard: TimeGuard,
    pub owner: Option<String>,
}

impl CausalLaw {
    pub fn new(kind: LawKind, event: Term, fluent: Term) -> Self {
        CausalLaw {
            kind,
            event,
            fluent,
            guard: TimeGuard::always(),
            owner: None,
        }
    }

    /// Fluent instance produced when this law fires for `(e, t)`.
    pub fn fire(&self, e: &Term, t: i64, sig: &Signature) -> Option<Term> {
        if !self.guard.admits(t) {
            return None;
        }
        let s = match_term(&self.event, e)?;
        if !respects_sorts(&s, sig) {
            return None;
        }
        Some(s.apply_term(&self.fluent))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct UtilityEntry {
    guard: TimeGuard,
    value: Rational64,
}

/// The utility function μ over (fluent, moment). Unlisted pairs are 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UtilityTable {
    entries: BTreeMap<Term, Vec<UtilityEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("utility for `{fluent}` is declared twice for overlapping moments")]
pub struct DuplicateUtility {
    pub fluent: String,
}

impl UtilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        fluent: Term,
        guard: TimeGuard,
        value: Rational64,
    ) -> Result<(), DuplicateUtility> {
        let slot = self.entries.entry(fluent.clone()).or_default();
        if slot.iter().any(|e| e.guard.overlaps(&guard)) {
            return Err(DuplicateUtility {
                fluent: print_term(&fluent),
            });
        }
        slot.push(UtilityEntry { guard, value });
        Ok(())
    }

    /// μ(f, y)
    pub fn get(&self, fluent: &Term, y: i64) -> Rational64 {
        self.entries
            .get(fluent)
            .and_then(|es| es.iter().find(|e| e.guard.admits(y)))
            .map_or_else(Rational64::zero, |e| e.value)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn fluents(&self) -> impl Iterator<Item = &Term> {
        self.entries.keys()
    }

    /// Every declared entry as `(fluent, guard, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (&Term, TimeGuard, Rational64)> {
        self.entries
            .iter()
            .flat_map(|(f, es)| es.iter().map(move |e| (f, e.guard, e.value)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventCalcError {
    #[error("event `{0}` is not ground")]
    NonGroundEvent(String),
    #[error("moment {time} is not before the horizon {horizon}")]
    HorizonExceeded { time: i64, horizon: i64 },
}

/// The causal laws and utilities one viewpoint uses: the world's, or a
/// particular agent's beliefs.
#[derive(Clone, Debug)]
pub struct CausalModel<'a> {
    pub signature: &'a Signature,
    pub laws: Vec<&'a CausalLaw>,
    pub utilities: &'a UtilityTable,
    pub horizon: i64,
}

impl<'a> CausalModel<'a> {
    fn affected(&self, kind: LawKind, e: &Term, t: i64) -> Result<BTreeSet<Term>, EventCalcError> {
        if !e.is_ground() {
            return Err(EventCalcError::NonGroundEvent(print_term(e)));
        }
        Ok(self
            .laws
            .iter()
            .filter(|l| l.kind == kind)
            .filter_map(|l| l.fire(e, t, self.signature))
            .collect())
    }

    /// `e_I^t`
    pub fn initiated(&self, e: &Term, t: i64) -> Result<BTreeSet<Term>, EventCalcError> {
        self.affected(LawKind::Initiates, e, t)
    }

    /// `e_T^t`
    pub fn terminated(&self, e: &Term, t: i64) -> Result<BTreeSet<Term>, EventCalcError> {
        self.affected(LawKind::Terminates, e, t)
    }

    pub fn event_utility(&self, e: &Term, t: i64) -> Result<Rational64, EventCalcError> {
        if t >= self.horizon {
            return Err(EventCalcError::HorizonExceeded {
                time: t,
                horizon: self.horizon,
            });
        }
        let initiated = self.initiated(e, t)?;
        let terminated = self.terminated(e, t)?;
        let mut total = Rational64::zero();
        for y in (t + 1)..=self.horizon {
            for f in &initiated {
                total += self.utilities.get(f, y);
            }
            for f in &terminated {
                total -= self.utilities.get(f, y);
            }
        }
        Ok(total)
    }
}

pub fn initiated_fluents(scn: &Scenario, e: &Term, t: i64) -> Result<BTreeSet<Term>, EventCalcError> {
    scn.world_model().initiated(e, t)
}

pub fn terminated_fluents(scn: &Scenario, e: &Term, t: i64) -> Result<BTreeSet<Term>, EventCalcError> {
    scn.world_model().terminated(e, t)
}

pub fn event_utility(scn: &Scenario, e: &Term, t: i64) -> Result<Rational64, EventCalcError> {
    scn.world_model().event_utility(e, t)
}

/// Inertia over the scenario's `happens` facts: `f` holds at `t` when it was
/// initiated at some `t' < t` (or holds initially) and no event in between
/// terminates it. Effects take hold one moment after the event.
pub fn holds_at(scn: &Scenario, f: &Term, t: i64) -> bool {
    let model = scn.world_model();
    let events = scn.happenings();
    let initiated_at = |t0: i64| {
        events
            .iter()
            .filter(|(_, et)| *et == t0)
            .any(|(e, _)| model.initiated(e, t0).is_ok_and(|s| s.contains(f)))
    };
    let terminated_in = |lo: i64, hi: i64| {
        events
            .iter()
            .filter(|(_, et)| *et >= lo && *et < hi)
            .any(|(e, et)| model.terminated(e, *et).is_ok_and(|s| s.contains(f)))
    };
    if (0..t).any(|t0| initiated_at(t0) && !terminated_in(t0 + 1, t)) {
        return true;
    }
    scn.initially_holds(f) && !terminated_in(0, t)
}
