//! The full run over a scenario: saturate, detect admiration, establish
//! exemplars, learn traits, then act on the scenario's queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::eventcalc::holds_at;
use crate::kernel::{sort_of, Sort, Term};
use crate::reasoner::{saturate, Judgment, KnowledgeBase, ProverBounds, SaturationReport};
use crate::syntax::{print_formula, print_term, Scenario};
use crate::virtue::{
    assert_exemplar, detect_admiration, exemplar_witnesses, fire_traits, is_virtue, learn_traits, virtuous,
    AdmirationRecord, FiredAction, LearnedTrait, VirtueVerdict,
};

/// Command-line overrides of a scenario's configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub horizon: Option<i64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub max_rounds: Option<usize>,
    pub max_depth: Option<usize>,
    pub max_term_depth: Option<usize>,
    pub budget: Option<Duration>,
}

impl RunConfig {
    /// The scenario with every override applied.
    pub fn apply(&self, scn: &Scenario) -> Scenario {
        let mut s = scn.clone();
        let c = &mut s.config;
        if let Some(h) = self.horizon {
            c.horizon = h;
        }
        if let Some(m) = self.m {
            c.m = m;
        }
        if let Some(n) = self.n {
            c.n = n;
        }
        let b: &mut ProverBounds = &mut c.bounds;
        if let Some(r) = self.max_rounds {
            b.max_rounds = r;
        }
        if let Some(d) = self.max_depth {
            b.max_depth = d;
        }
        if let Some(d) = self.max_term_depth {
            b.max_term_depth = d;
        }
        if let Some(d) = self.budget {
            b.budget = d;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExemplarRecord {
    #[serde(serialize_with = "ser_term")]
    pub exemplar: Term,
    #[serde(serialize_with = "ser_term")]
    pub learner: Term,
    /// Moment at which the status was established.
    pub since: i64,
    /// Distinct admired actions.
    pub admired_actions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionRecord {
    pub fired: FiredAction,
    /// Whether the fluent the action reports on holds in the world at the
    /// time; `None` when the action type has no fluent argument.
    pub accurate: Option<bool>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub traits: Vec<LearnedTrait>,
    pub exemplars: Vec<ExemplarRecord>,
    pub admirations: Vec<AdmirationRecord>,
    pub actions: Vec<ActionRecord>,
    /// Agents that are exemplars for somebody, with their admirers.
    pub virtuous: BTreeMap<Term, BTreeSet<Term>>,
    /// One verdict per distinct learned trait, with threshold `n`.
    pub virtues: Vec<(String, VirtueVerdict)>,
    pub saturation: SaturationReport,
    pub duration: Duration,
    pub kb: KnowledgeBase,
}

fn ser_term<S: serde::Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&print_term(t))
}

fn merge(total: &mut SaturationReport, r: SaturationReport) {
    total.rounds += r.rounds;
    total.added += r.added;
    total.partial |= r.partial;
    total.exceeded.extend(r.exceeded);
}

/// The fluent an action type reports on: its first argument of sort Fluent.
pub fn reported_fluent(scn: &Scenario, alpha: &Term) -> Option<Term> {
    let Term::App(_, args) = alpha else { return None };
    args.iter()
        .find(|a| {
            sort_of(a, &scn.signature).is_ok_and(|s| scn.signature.is_subsort(&s, &Sort::fluent()))
        })
        .cloned()
}

pub fn run_scenario(scn: &Scenario, config: &RunConfig) -> RunResult {
    let start = Instant::now();
    let scn = config.apply(scn);
    let bounds = scn.config.bounds;
    let (m, n) = (scn.config.m, scn.config.n);
    let agents: Vec<Term> = scn.agents().iter().map(|a| Term::constant(a)).collect();

    let mut kb = KnowledgeBase::from_scenario(&scn);
    let mut report = SaturationReport::default();
    merge(&mut report, saturate(&mut kb, &bounds));

    let mut admirations = Vec::new();
    let mut exemplars: Vec<ExemplarRecord> = Vec::new();
    let mut learned_from: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    let mut traits = Vec::new();

    for t in 0..=scn.config.horizon {
        let before = kb.len();
        for a in &agents {
            admirations.extend(detect_admiration(&mut kb, a, t, &bounds));
        }
        for l in &agents {
            for e in &agents {
                let count = exemplar_witnesses(&admirations, e, l).len();
                let known = exemplars.iter().any(|r| &r.exemplar == e && &r.learner == l);
                if !known && count >= n.max(1) {
                    assert_exemplar(&mut kb, &admirations, e, l);
                    exemplars.push(ExemplarRecord {
                        exemplar: e.clone(),
                        learner: l.clone(),
                        since: t,
                        admired_actions: count,
                    });
                }
            }
        }
        for l in &agents {
            let skip = learned_from.entry(l.clone()).or_default().clone();
            for lt in learn_traits(&mut kb, l, t, m, &skip, &bounds) {
                learned_from.get_mut(l).unwrap().insert(lt.exemplar.clone());
                traits.push(lt);
            }
        }
        if kb.len() > before {
            merge(&mut report, saturate(&mut kb, &bounds));
        }
    }

    let mut actions = Vec::new();
    let mut queries = scn.queries.clone();
    queries.sort();
    for q in &queries {
        let l = Term::constant(&q.agent);
        let mine: Vec<_> = traits
            .iter()
            .filter(|lt| lt.learner == l && lt.time <= q.time)
            .map(|lt| lt.learned.clone())
            .collect();
        for fired in fire_traits(&mut kb, &l, &mine, q.time, &bounds) {
            let accurate = reported_fluent(&scn, &fired.action).map(|f| holds_at(&scn, &f, q.time));
            let trace = kb
                .trace_of(&Judgment::top(fired.fact()))
                .iter()
                .map(|s| s.to_string())
                .collect();
            actions.push(ActionRecord {
                fired,
                accurate,
                trace,
            });
        }
    }

    let mut virtuous_map = BTreeMap::new();
    for s in &agents {
        let admirers = crate::virtue::admirers_of(&kb, s);
        if virtuous(&kb, s, 1) {
            virtuous_map.insert(s.clone(), admirers);
        }
    }
    let mut virtues: Vec<(String, VirtueVerdict)> = Vec::new();
    let mut seen = BTreeSet::new();
    for lt in &traits {
        if seen.insert(lt.learned.identity()) {
            let verdict = is_virtue(&kb, &lt.learned.formula(), n);
            virtues.push((print_formula(&lt.learned.formula()), verdict));
        }
    }

    RunResult {
        traits,
        exemplars,
        admirations,
        actions,
        virtuous: virtuous_map,
        virtues,
        saturation: report,
        duration: start.elapsed(),
        kb,
    }
}

impl RunResult {
    /// The JSON report. `duration_ms` is the only field that varies
    /// between identical runs.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let traits: Vec<_> = self
            .traits
            .iter()
            .map(|lt| {
                let t = &lt.learned;
                json!({
                    "learner": print_term(&lt.learner),
                    "exemplar": print_term(&lt.exemplar),
                    "learned_at": lt.time,
                    "situation": print_formula(&t.situation),
                    "action": print_term(&t.action),
                    "formula": print_formula(&t.formula()),
                    "observations": lt.observed.observations,
                })
            })
            .collect();
        let actions: Vec<_> = self
            .actions
            .iter()
            .map(|a| {
                json!({
                    "agent": print_term(&a.fired.agent),
                    "action": print_term(&a.fired.action),
                    "time": a.fired.time,
                    "accurate": a.accurate,
                    "trace": a.trace,
                })
            })
            .collect();
        let virtuous: Vec<_> = self
            .virtuous
            .iter()
            .map(|(s, ls)| {
                json!({
                    "agent": print_term(s),
                    "exemplar_for": ls.iter().map(print_term).collect::<Vec<_>>(),
                })
            })
            .collect();
        let virtues: Vec<_> = self
            .virtues
            .iter()
            .map(|(f, v)| json!({"trait": f, "verdict": v}))
            .collect();
        json!({
            "traits": traits,
            "exemplars": self.exemplars,
            "admirations": self.admirations,
            "actions": actions,
            "virtuous": virtuous,
            "virtues": virtues,
            "saturation": self.saturation,
            "duration_ms": self.duration.as_millis() as u64,
        })
    }

    /// Human-readable report listing each trait with its observations.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "admirations: {}", self.admirations.len());
        for r in &self.admirations {
            let _ = writeln!(
                out,
                "  {} admires {} for {} (done at {}, judged at {})",
                print_term(&r.admirer),
                print_term(&r.admired),
                print_term(&r.action),
                r.action_time,
                r.time
            );
        }
        let _ = writeln!(out, "exemplars: {}", self.exemplars.len());
        for e in &self.exemplars {
            let _ = writeln!(
                out,
                "  {} is an exemplar for {} since {} ({} admired actions)",
                print_term(&e.exemplar),
                print_term(&e.learner),
                e.since,
                e.admired_actions
            );
        }
        let _ = writeln!(out, "traits: {}", self.traits.len());
        for lt in &self.traits {
            let t = &lt.learned;
            let _ = writeln!(
                out,
                "  {} learned from {} at {}:\n    situation {}\n    action    {}",
                print_term(&lt.learner),
                print_term(&lt.exemplar),
                lt.time,
                print_formula(&t.situation),
                print_term(&t.action)
            );
            for o in &lt.observed.observations {
                let sit: Vec<String> = o.situation.iter().map(print_formula).collect();
                let _ = writeln!(
                    out,
                    "    observed {} doing {} at {} when {}",
                    print_term(&o.performer),
                    print_term(&o.action),
                    o.time,
                    sit.join(", ")
                );
            }
        }
        let _ = writeln!(out, "actions: {}", self.actions.len());
        for a in &self.actions {
            let acc = match a.accurate {
                Some(true) => " (accurate)",
                Some(false) => " (inaccurate)",
                None => "",
            };
            let _ = writeln!(
                out,
                "  {} does {} at {}{}",
                print_term(&a.fired.agent),
                print_term(&a.fired.action),
                a.fired.time,
                acc
            );
        }
        for (f, v) in &self.virtues {
            let _ = writeln!(
                out,
                "virtue {}: {} holder(s), {} virtuous, n = {}: {}",
                f,
                v.holders.len(),
                v.virtuous_holders.len(),
                v.n,
                if v.is_virtue() { "yes" } else { "no" }
            );
        }
        if self.saturation.partial {
            let _ = writeln!(out, "note: saturation stopped at a bound; results may be incomplete");
        }
        let _ = writeln!(out, "duration: {} ms", self.duration.as_millis());
        out
    }
}
