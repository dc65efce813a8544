use serde::Serialize;

use super::bounds::ProverBounds;
use super::goal::GoalSearch;
use super::kb::{Judgment, KnowledgeBase, Step};
use super::saturate::{saturate, saturate_with, SaturationReport};
use crate::kernel::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Proved,
    /// Not derivable within the bounds. This is not a claim of falsity.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ProofResult {
    pub verdict: Verdict,
    /// Steps from the axioms to the goal, premises first.
    pub trace: Vec<Step>,
    /// Some bound was reached before a fixpoint.
    pub partial: bool,
    pub reason: Option<String>,
    pub saturation: SaturationReport,
}

impl ProofResult {
    pub fn proved(&self) -> bool {
        self.verdict == Verdict::Proved
    }

    fn unknown(reason: &str) -> Self {
        ProofResult {
            verdict: Verdict::Unknown,
            trace: Vec::new(),
            partial: false,
            reason: Some(reason.to_string()),
            saturation: SaturationReport::default(),
        }
    }
}

/// Try to derive the closed formula `goal` from `kb`. The knowledge base
/// itself is not modified. A first pass instantiates universals only where
/// they match known formulas or the goal; full enumeration runs only when
/// that pass fails.
pub fn prove(kb: &KnowledgeBase, goal: &Formula, bounds: &ProverBounds) -> ProofResult {
    if goal.has_pred_vars() {
        return ProofResult::unknown("goal contains predicate variables");
    }
    if !goal.free_vars().is_empty() {
        return ProofResult::unknown("goal is not closed");
    }
    let mut focused = kb.clone();
    focused.add_hint(goal.clone());
    let report = saturate_with(&mut focused, bounds, false);
    let quick = prove_in(&mut focused, goal, bounds, report);
    if quick.proved() {
        return quick;
    }
    let mut work = kb.clone();
    work.add_hint(goal.clone());
    let report = saturate(&mut work, bounds);
    prove_in(&mut work, goal, bounds, report)
}

/// Like [`prove`] but reuses `kb`, which must already be saturated.
pub fn prove_saturated(kb: &mut KnowledgeBase, goal: &Formula, bounds: &ProverBounds) -> ProofResult {
    if goal.has_pred_vars() || !goal.free_vars().is_empty() {
        return ProofResult::unknown("goal is not a closed first-order formula");
    }
    let report = SaturationReport {
        partial: !kb.is_complete(),
        ..SaturationReport::default()
    };
    prove_in(kb, goal, bounds, report)
}

fn prove_in(
    kb: &mut KnowledgeBase,
    goal: &Formula,
    bounds: &ProverBounds,
    report: SaturationReport,
) -> ProofResult {
    let mut steps = Vec::new();
    let found = {
        let search = GoalSearch::new(kb, kb.len(), bounds.max_depth, bounds.max_term_depth);
        search.establish(&Vec::new(), goal, &mut steps)
    };
    let partial = report.partial;
    if !found {
        return ProofResult {
            verdict: Verdict::Unknown,
            trace: Vec::new(),
            partial,
            reason: Some(if partial {
                "bounds reached before a fixpoint".to_string()
            } else {
                "not derivable".to_string()
            }),
            saturation: report,
        };
    }
    for s in steps {
        kb.insert_step(s);
    }
    ProofResult {
        verdict: Verdict::Proved,
        trace: kb.trace_of(&Judgment::top(goal.clone())),
        partial,
        reason: None,
        saturation: report,
    }
}
