use std::collections::BTreeSet;

use serde::Serialize;

use crate::kernel::{conjoin, Comparison, Formula, Term};
use crate::reasoner::{GoalSearch, Judgment, KnowledgeBase, ProverBounds, Rule};
use crate::syntax::print_term;

/// `admirer` admires `admired` at `time` for doing `action` at `action_time`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmirationRecord {
    pub admirer: Term,
    pub admired: Term,
    pub action: Term,
    pub action_time: i64,
    pub time: i64,
}

impl AdmirationRecord {
    /// `holds(admires(admirer, admired, action), time)`
    pub fn fact(&self) -> Formula {
        Formula::holds(
            Term::app(
                "admires",
                vec![self.admirer.clone(), self.admired.clone(), self.action.clone()],
            ),
            Term::Int(self.time),
        )
    }
}

impl Serialize for AdmirationRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AdmirationRecord", 5)?;
        st.serialize_field("admirer", &print_term(&self.admirer))?;
        st.serialize_field("admired", &print_term(&self.admired))?;
        st.serialize_field("action", &print_term(&self.action))?;
        st.serialize_field("action_time", &self.action_time)?;
        st.serialize_field("time", &self.time)?;
        st.end()
    }
}

/// What `a` must believe at `t` to admire `b` for doing `alpha` at `t0`.
pub fn admiration_belief(a: &Term, b: &Term, alpha: &Term, t0: i64, t: i64) -> Formula {
    let event = Term::action(b.clone(), alpha.clone());
    Formula::believes(
        a.clone(),
        Term::Int(t),
        conjoin(vec![
            Formula::not(Formula::atom("=", vec![a.clone(), b.clone()])),
            Formula::atom("prior", vec![Term::Int(t0), Term::Int(t)]),
            Formula::happens(event.clone(), Term::Int(t0)),
            Formula::utility(event, Term::Int(t0), Comparison::Gt, 0.into()),
        ]),
    )
}

/// Moments at which `a` is pleased, taken from the axioms of `kb`.
pub fn pleased_times(kb: &KnowledgeBase, a: &Term) -> BTreeSet<i64> {
    kb.judgments()
        .filter(|(j, d)| j.context.is_empty() && d.rule == Rule::Axiom)
        .filter_map(|(j, _)| {
            let args = j.formula.atom_args("pleased")?;
            (&args[0] == a).then(|| args[1].as_int()).flatten()
        })
        .collect()
}

/// Every admiration of `a` established at `t`. Each record's fact is
/// asserted into `kb` together with the belief it rests on.
pub fn detect_admiration(
    kb: &mut KnowledgeBase,
    a: &Term,
    t: i64,
    bounds: &ProverBounds,
) -> Vec<AdmirationRecord> {
    let pleased = pleased_times(kb, a);
    let mut candidates = BTreeSet::new();
    for f in kb.in_context(&[(a.clone(), t)]) {
        let Some([Term::App(func, ev), time]) = f.atom_args("happens") else {
            continue;
        };
        let Some(t0) = time.as_int() else { continue };
        if func == "action" && ev.len() == 2 && ev[0].is_ground() && ev[1].is_ground() && pleased.contains(&t0) {
            candidates.insert((t0, ev[0].clone(), ev[1].clone()));
        }
    }

    let mut found = Vec::new();
    for (t0, b, alpha) in candidates {
        let belief = admiration_belief(a, &b, &alpha, t0, t);
        let mut steps = Vec::new();
        let ok = GoalSearch::new(kb, kb.len(), bounds.max_depth, bounds.max_term_depth).establish(
            &Vec::new(),
            &belief,
            &mut steps,
        );
        if !ok {
            continue;
        }
        for s in steps {
            kb.insert_step(s);
        }
        let rec = AdmirationRecord {
            admirer: a.clone(),
            admired: b,
            action: alpha,
            action_time: t0,
            time: t,
        };
        let pleased_fact = Formula::atom("pleased", vec![a.clone(), Term::Int(t0)]);
        kb.assert_derived(
            Judgment::top(rec.fact()),
            Rule::Admiration,
            vec![Judgment::top(pleased_fact), Judgment::top(belief)],
            Default::default(),
        );
        found.push(rec);
    }
    found
}
