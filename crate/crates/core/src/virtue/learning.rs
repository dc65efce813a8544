use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::admiration::AdmirationRecord;
use crate::kernel::{Comparison, Formula, Pred, Signature, Substitution, Term, Var};
use crate::reasoner::{
    check_trait_schema, GoalSearch, Judgment, KnowledgeBase, Observation, ProverBounds, Rule, Trait, TraitError,
};
use crate::syntax::print_term;

/// Distinct admired action instances `(action time, action type)` of `e` by `l`.
pub fn exemplar_witnesses<'r>(
    records: impl IntoIterator<Item = &'r AdmirationRecord>,
    e: &Term,
    l: &Term,
) -> BTreeSet<(i64, Term)> {
    records
        .into_iter()
        .filter(|r| &r.admirer == l && &r.admired == e)
        .map(|r| (r.action_time, r.action.clone()))
        .collect()
}

/// `e` is an exemplar for `l` once `l` has admired at least `n` distinct
/// actions of `e`.
pub fn is_exemplar<'r>(
    records: impl IntoIterator<Item = &'r AdmirationRecord>,
    e: &Term,
    l: &Term,
    n: usize,
) -> bool {
    exemplar_witnesses(records, e, l).len() >= n
}

/// Assert `exemplar(e, l)`, citing the admiration facts it rests on.
pub fn assert_exemplar(kb: &mut KnowledgeBase, records: &[AdmirationRecord], e: &Term, l: &Term) -> bool {
    let premises: Vec<Judgment> = records
        .iter()
        .filter(|r| &r.admirer == l && &r.admired == e)
        .map(|r| Judgment::top(r.fact()))
        .collect();
    kb.assert_derived(
        Judgment::top(exemplar_fact(e, l)),
        Rule::ExemplarStatus,
        premises,
        Substitution::new(),
    )
}

pub fn exemplar_fact(e: &Term, l: &Term) -> Formula {
    Formula::atom("exemplar", vec![e.clone(), l.clone()])
}

/// Agents `e` with `exemplar(e, l)` in `kb`.
pub fn exemplars_of(kb: &KnowledgeBase, l: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = kb
        .in_context(&[])
        .filter_map(|f| {
            let a = f.atom_args("exemplar")?;
            (&a[1] == l && a[0].is_ground()).then(|| a[0].clone())
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn constants(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const(c) => {
            out.insert(c.clone());
        }
        Term::App(_, args) => args.iter().for_each(|a| constants(a, out)),
        _ => {}
    }
}

fn functors(t: &Term, out: &mut BTreeSet<String>) {
    if let Term::App(f, args) = t {
        out.insert(f.clone());
        args.iter().for_each(|a| functors(a, out));
    }
}

/// Does `f` mention any symbol of `slice`?
fn touches(f: &Formula, slice: &BTreeSet<String>, by_functor: bool) -> bool {
    f.own_terms().into_iter().any(|t| {
        let mut s = BTreeSet::new();
        if by_functor {
            functors(t, &mut s);
        } else {
            constants(t, &mut s);
        }
        !s.is_disjoint(slice)
    })
}

/// The situation `l` believed at `t` around `performer` doing `alpha`:
/// believed `holds(·, t)` atoms and ground atoms of declared predicates that
/// share a constant with `alpha` (its functors when it has no constants),
/// plus `ν(alpha, t) > 0` when `l` judges the action beneficial.
pub fn observed_situation(kb: &KnowledgeBase, l: &Term, performer: &Term, alpha: &Term, t: i64) -> Vec<Formula> {
    let mut slice = BTreeSet::new();
    constants(alpha, &mut slice);
    if let Term::Const(p) = performer {
        slice.remove(p);
    }
    let by_functor = slice.is_empty();
    if by_functor {
        functors(alpha, &mut slice);
    }
    let ctx = [(l.clone(), t)];
    let mut out: Vec<Formula> = kb
        .in_context(&ctx)
        .filter(|f| f.is_ground() && f.free_vars().is_empty())
        .filter(|f| match f {
            Formula::Atom {
                pred: Pred::Sym(p),
                args,
            } => {
                let timely = match p.as_str() {
                    "holds" => args[1].as_int() == Some(t),
                    _ => !Signature::is_builtin_predicate(p),
                };
                timely && touches(f, &slice, by_functor)
            }
            _ => false,
        })
        .cloned()
        .collect();
    out.sort();
    let event = Term::action(performer.clone(), alpha.clone());
    let positive = kb
        .oracle()
        .and_then(|o| o.nu(&ctx, &event, t))
        .is_some_and(|v| v > 0.into());
    if positive {
        out.push(Formula::utility(alpha.clone(), Term::Int(t), Comparison::Gt, 0.into()));
    }
    out
}

/// Actions of `e` that `l` believed, at the moment they happened, to be
/// happening, before `before`.
pub fn observations_of(kb: &KnowledgeBase, l: &Term, e: &Term, before: i64) -> Vec<Observation> {
    let mut seen = BTreeSet::new();
    for ctx in kb.contexts() {
        let [(who, t)] = ctx.as_slice() else { continue };
        if who != l || *t >= before {
            continue;
        }
        for f in kb.in_context(ctx) {
            let Some([Term::App(func, ev), time]) = f.atom_args("happens") else {
                continue;
            };
            if func == "action" && ev.len() == 2 && &ev[0] == e && time.as_int() == Some(*t) && ev[1].is_ground() {
                seen.insert((*t, ev[1].clone()));
            }
        }
    }
    seen.into_iter()
        .map(|(t, alpha)| Observation {
            performer: e.clone(),
            situation: observed_situation(kb, l, e, &alpha, t),
            action: alpha,
            time: t,
        })
        .collect()
}

/// A trait `learner` took over from `exemplar` at `time`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnedTrait {
    pub learner: Term,
    pub exemplar: Term,
    pub time: i64,
    /// The trait as held by the learner.
    pub learned: Trait,
    /// The trait the learner attributed to the exemplar.
    pub observed: Trait,
}

/// Learn from every exemplar of `l` that has at least `m` observed actions
/// before `t`. Each exemplar yields at most one trait; exemplars listed in
/// `skip` are ignored.
pub fn learn_traits(
    kb: &mut KnowledgeBase,
    l: &Term,
    t: i64,
    m: usize,
    skip: &BTreeSet<Term>,
    bounds: &ProverBounds,
) -> Vec<LearnedTrait> {
    let mut out = Vec::new();
    for e in exemplars_of(kb, l) {
        if skip.contains(&e) {
            continue;
        }
        let obs = observations_of(kb, l, &e, t);
        let observed = match check_trait_schema(l, &e, &obs, m, kb.signature(), Some(bounds)) {
            Ok(tr) => tr,
            Err(TraitError::InsufficientObservations { .. }) => continue,
            Err(err) => {
                log::info!("no trait of {} for {}: {err}", print_term(&e), print_term(l));
                continue;
            }
        };
        let believed = Judgment::top(Formula::believes(l.clone(), Term::Int(t), observed.formula()));
        let premises = obs
            .iter()
            .map(|o| {
                Judgment::new(
                    vec![(l.clone(), o.time)],
                    Formula::happens(Term::action(e.clone(), o.action.clone()), Term::Int(o.time)),
                )
            })
            .collect();
        kb.assert_derived(believed.clone(), Rule::TraitIntro, premises, Substitution::new());
        let learned = observed.with_holder(l);
        kb.assert_derived(
            Judgment::top(learned.formula()),
            Rule::LearnTrait,
            vec![Judgment::top(exemplar_fact(&e, l)), believed],
            Substitution::new(),
        );
        out.push(LearnedTrait {
            learner: l.clone(),
            exemplar: e,
            time: t,
            learned,
            observed,
        });
    }
    out
}

/// An action performed because a learned trait's situation was established.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiredAction {
    pub agent: Term,
    pub action: Term,
    pub time: i64,
    /// Binding of the trait's variables that established the situation.
    pub binding: Substitution,
}

impl FiredAction {
    pub fn fact(&self) -> Formula {
        Formula::happens(Term::action(self.agent.clone(), self.action.clone()), Term::Int(self.time))
    }
}

/// Extend `s` so that every atom literal of `lits` matches a formula of `pool`.
fn join(lits: &[&Formula], pool: &[&Formula], s: Substitution, out: &mut Vec<Substitution>) {
    let Some((first, rest)) = lits.split_first() else {
        out.push(s);
        return;
    };
    let pattern = s.apply(first);
    for target in pool {
        let mut s2 = s.clone();
        if crate::generalize::match_formula_with(&pattern, target, &mut s2) {
            join(rest, pool, s2, out);
        }
    }
}

/// Every grounding of the trait's situation at `t`, keyed by binding.
fn groundings(kb: &KnowledgeBase, tr: &Trait, t: i64, bounds: &ProverBounds) -> BTreeSet<Substitution> {
    let at = tr.at(t);
    let sigma = at.apply(&tr.situation);
    let Some((who, _, body)) = sigma.as_belief() else {
        return BTreeSet::new();
    };
    let ctx = [(who.clone(), t)];
    let pool: Vec<&Formula> = kb.in_context(&ctx).filter(|f| f.free_vars().is_empty()).collect();
    let atoms: Vec<&Formula> = body
        .conjuncts()
        .into_iter()
        .filter(|f| matches!(f, Formula::Atom { .. }) && !f.free_vars().is_empty())
        .collect();
    let mut partial = Vec::new();
    join(&atoms, &pool, Substitution::new(), &mut partial);

    let params: Vec<Var> = tr.parameters().into_iter().collect();
    let mut out = BTreeSet::new();
    for s in partial {
        let mut stack = vec![s];
        for v in &params {
            let mut next = Vec::new();
            for s in stack {
                if s.get(v).is_some() {
                    next.push(s);
                    continue;
                }
                for w in kb.universe(&v.sort, bounds.max_term_depth) {
                    let mut s2 = s.clone();
                    s2.bind(v.clone(), w);
                    next.push(s2);
                }
            }
            stack = next;
        }
        for s in stack {
            let mut full = s;
            full.bind(tr.time_var.clone(), Term::Int(t));
            if crate::generalize::respects_sorts(&full, kb.signature()) {
                out.insert(full);
            }
        }
    }
    out
}

/// Perform at `t` every action a trait of `l` calls for: one per grounding
/// of its situation that `kb` establishes. The actions are asserted.
pub fn fire_traits(
    kb: &mut KnowledgeBase,
    l: &Term,
    traits: &[Trait],
    t: i64,
    bounds: &ProverBounds,
) -> Vec<FiredAction> {
    let mut fired = BTreeMap::new();
    for tr in traits.iter().filter(|tr| &tr.holder == l) {
        for theta in groundings(kb, tr, t, bounds) {
            let sigma = theta.apply(&tr.situation);
            let mut steps = Vec::new();
            let ok = GoalSearch::new(kb, kb.len(), bounds.max_depth, bounds.max_term_depth).establish(
                &Vec::new(),
                &sigma,
                &mut steps,
            );
            if !ok {
                continue;
            }
            for s in steps {
                kb.insert_step(s);
            }
            let act = FiredAction {
                agent: l.clone(),
                action: theta.apply_term(&tr.action),
                time: t,
                binding: theta.clone(),
            };
            kb.assert_derived(
                Judgment::top(act.fact()),
                Rule::TraitFiring,
                vec![Judgment::top(sigma), Judgment::top(tr.formula())],
                theta,
            );
            fired.entry(act.fact()).or_insert(act);
        }
    }
    fired.into_values().collect()
}

impl Serialize for FiredAction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FiredAction", 3)?;
        st.serialize_field("agent", &print_term(&self.agent))?;
        st.serialize_field("action", &print_term(&self.action))?;
        st.serialize_field("time", &self.time)?;
        st.end()
    }
}
