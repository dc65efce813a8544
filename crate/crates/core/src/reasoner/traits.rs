//! Traits: a generalized situation paired with a generalized action type,
//! abstracted from observed instances.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::bounds::ProverBounds;
use crate::generalize::{generalize_formula_set, FormulaSetOptions, GeneralizeError};
use crate::kernel::{canonical_form, conjoin, Formula, Signature, Sort, Substitution, Term, Var};
use crate::syntax::{print_formula, print_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraitError {
    #[error("{have} observation(s) but the trait threshold is {need}")]
    InsufficientObservations { have: usize, need: usize },
    #[error(transparent)]
    Generalize(#[from] GeneralizeError),
}

/// One observed action together with the situation the observer believed
/// held when it happened.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub performer: Term,
    /// Ground action type.
    pub action: Term,
    pub time: i64,
    /// Ground literals believed by the observer at `time`.
    pub situation: Vec<Formula>,
}

impl Observation {
    fn happens(&self) -> Formula {
        Formula::happens(
            Term::action(self.performer.clone(), self.action.clone()),
            Term::Int(self.time),
        )
    }
}

impl Serialize for Observation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Observation", 4)?;
        st.serialize_field("performer", &print_term(&self.performer))?;
        st.serialize_field("action", &print_term(&self.action))?;
        st.serialize_field("time", &self.time)?;
        let sit: Vec<String> = self.situation.iter().map(print_formula).collect();
        st.serialize_field("situation", &sit)?;
        st.end()
    }
}

/// `⟨σ, α⟩` held by `holder`, with the observations it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trait {
    pub holder: Term,
    /// Generalized situation; free variables include `time_var`.
    pub situation: Formula,
    /// Generalized action type.
    pub action: Term,
    pub time_var: Var,
    pub observations: Vec<Observation>,
    /// `witnesses[i]` maps the generalization onto `observations[i]`.
    pub witnesses: Vec<Substitution>,
}

impl Trait {
    /// `σ ∧ happens(action(holder, α), T)`
    pub fn body(&self) -> Formula {
        Formula::And(vec![
            self.situation.clone(),
            Formula::happens(
                Term::action(self.holder.clone(), self.action.clone()),
                Term::Var(self.time_var.clone()),
            ),
        ])
    }

    /// The single-formula form `Trait(σ ∧ happens(action(holder, α), T), holder)`.
    pub fn formula(&self) -> Formula {
        Formula::Trait {
            body: Box::new(self.body()),
            agent: self.holder.clone(),
        }
    }

    /// The same trait performed by `agent`; the situation is unchanged.
    pub fn with_holder(&self, agent: &Term) -> Trait {
        Trait {
            holder: agent.clone(),
            ..self.clone()
        }
    }

    /// Free variables of the situation other than the time variable.
    pub fn parameters(&self) -> BTreeSet<Var> {
        let mut vs = self.situation.free_vars();
        vs.remove(&self.time_var);
        vs
    }

    /// Canonical form with the holder abstracted, used to compare traits
    /// held by different agents.
    pub fn identity(&self) -> Formula {
        identity_of(&self.formula(), &self.holder)
    }

    pub fn same_as(&self, other: &Trait) -> bool {
        self.identity() == other.identity()
    }

    /// `(σ, α)` with every witness applied; reproduces each observation.
    pub fn instance(&self, i: usize) -> (Formula, Term) {
        let w = &self.witnesses[i];
        (w.apply(&self.situation), w.apply_term(&self.action))
    }

    /// The time variable bound to `t`.
    pub fn at(&self, t: i64) -> Substitution {
        Substitution::single(self.time_var.clone(), Term::Int(t))
    }
}

/// Canonical form of a trait formula with `holder` replaced by a variable.
pub fn identity_of(f: &Formula, holder: &Term) -> Formula {
    let me = Term::Var(Var::new("self", Sort::agent()));
    canonical_form(&f.map_terms(&|t| t.replace(holder, &me)))
}

/// Generalize the observations of `performer` made by `learner` into a
/// trait of `performer`. The situation becomes
/// `Believes(learner, T, ⋀ literals)` where `T` abstracts the observation
/// times. Literals without a counterpart in every observation are dropped.
pub fn check_trait_schema(
    learner: &Term,
    performer: &Term,
    observations: &[Observation],
    m: usize,
    sig: &Signature,
    verify: Option<&ProverBounds>,
) -> Result<Trait, TraitError> {
    if observations.len() < m.max(1) {
        return Err(TraitError::InsufficientObservations {
            have: observations.len(),
            need: m.max(1),
        });
    }
    let head = |t: &Term| match t {
        Term::App(f, args) => Some((f.clone(), args.len())),
        Term::Const(c) => Some((c.clone(), 0)),
        _ => None,
    };
    let h0 = head(&observations[0].action);
    if h0.is_none() || observations.iter().any(|o| head(&o.action) != h0) {
        return Err(GeneralizeError::NoAlignment(format!(
            "observed action types `{}` and `{}` do not share a functor and arity",
            print_term(&observations[0].action),
            print_term(&observations.iter().find(|o| head(&o.action) != h0).unwrap_or(&observations[0]).action)
        ))
        .into());
    }

    let time_var = fresh_time_var(observations);
    let sets: Vec<Vec<Formula>> = observations
        .iter()
        .map(|o| {
            let mut s = o.situation.clone();
            s.push(o.happens());
            s
        })
        .collect();

    let (open, witnesses, happens_group) = if sets.len() == 1 {
        let tv = Term::Var(time_var.clone());
        let t = Term::Int(observations[0].time);
        let open: Vec<Formula> = sets[0].iter().map(|f| f.map_terms(&|x| x.replace(&t, &tv))).collect();
        let w = Substitution::single(time_var.clone(), t);
        (open, vec![w], Some(sets[0].len() - 1))
    } else {
        let options = FormulaSetOptions {
            lenient: true,
            higher_order: false,
            verify: verify.copied(),
            preassigned: vec![(
                observations.iter().map(|o| Term::Int(o.time)).collect(),
                time_var.clone(),
            )],
        };
        let g = generalize_formula_set(&sets, sig, &options)?;
        let last = sets[0].len() - 1;
        let idx = g.alignment.iter().position(|grp| grp[0] == last);
        let mut witnesses = g.witnesses;
        // All observations at one moment leave the time as a constant.
        let t0 = Term::Int(observations[0].time);
        let mut open = g.open;
        if observations.iter().all(|o| o.time == observations[0].time) {
            let tv = Term::Var(time_var.clone());
            open = open.iter().map(|f| f.map_terms(&|x| x.replace(&t0, &tv))).collect();
            for w in &mut witnesses {
                w.bind(time_var.clone(), t0.clone());
            }
        }
        (open, witnesses, idx)
    };

    let Some(hi) = happens_group else {
        return Err(GeneralizeError::NoAlignment("observed actions do not align".into()).into());
    };
    let happens = &open[hi];
    let action = match happens.atom_args("happens") {
        Some([Term::App(f, ev), Term::Var(t)]) if f == "action" && ev.len() == 2 && *t == time_var => {
            ev[1].clone()
        }
        _ => {
            return Err(GeneralizeError::NoAlignment(format!(
                "observed actions generalize to `{}`",
                print_formula(happens)
            ))
            .into())
        }
    };
    let literals: Vec<Formula> = open
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != hi)
        .map(|(_, f)| f.clone())
        .collect();
    if literals.is_empty() {
        return Err(GeneralizeError::NoAlignment("the observed situations share no literal".into()).into());
    }
    let situation = Formula::believes(learner.clone(), Term::Var(time_var.clone()), conjoin(literals));

    let mut allowed = situation.free_vars();
    allowed.insert(time_var.clone());
    if let Some(v) = action.vars().into_iter().find(|v| !allowed.contains(v)) {
        return Err(GeneralizeError::NoAlignment(format!(
            "action variable `{}` is not determined by the situation",
            v.name
        ))
        .into());
    }

    let keep: BTreeSet<Var> = allowed;
    let witnesses = witnesses
        .into_iter()
        .map(|w| {
            let mut out = Substitution::new();
            for (v, t) in w.bindings() {
                if keep.contains(v) {
                    out.bind(v.clone(), t.clone());
                }
            }
            out
        })
        .collect();
    Ok(Trait {
        holder: performer.clone(),
        situation,
        action,
        time_var,
        observations: observations.to_vec(),
        witnesses,
    })
}

fn fresh_time_var(observations: &[Observation]) -> Var {
    let mut taken = BTreeSet::new();
    for o in observations {
        for f in &o.situation {
            taken.extend(f.all_vars().into_iter().map(|v| v.name));
        }
    }
    let mut name = "T".to_string();
    let mut i = 1;
    while taken.contains(&name) {
        name = format!("T{i}");
        i += 1;
    }
    Var::new(name, Sort::moment())
}
