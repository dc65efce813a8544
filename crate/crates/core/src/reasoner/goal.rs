//! Goal-directed introduction rules evaluated against a fixed knowledge base.

use std::cell::RefCell;
use std::collections::BTreeMap;

use super::kb::{Context, Judgment, KnowledgeBase, Rule, Step};
use crate::kernel::{CountBound, Formula, Pred, Sort, Substitution, Term, EQUALITY};

/// Upper bound on witnesses tried for one quantified goal.
pub(crate) const WITNESS_CAP: usize = 4096;

pub(crate) struct GoalSearch<'a> {
    kb: &'a KnowledgeBase,
    /// Only entries below this index count as established.
    limit: usize,
    max_depth: usize,
    max_term_depth: usize,
    universe: RefCell<BTreeMap<Sort, Vec<Term>>>,
}

impl<'a> GoalSearch<'a> {
    pub fn new(kb: &'a KnowledgeBase, limit: usize, max_depth: usize, max_term_depth: usize) -> Self {
        GoalSearch {
            kb,
            limit,
            max_depth,
            max_term_depth,
            universe: RefCell::new(BTreeMap::new()),
        }
    }

    fn lookup(&self, j: &Judgment) -> bool {
        self.kb.position(j).is_some_and(|i| i < self.limit)
    }

    fn candidates(&self, sort: &Sort) -> Vec<Term> {
        self.universe
            .borrow_mut()
            .entry(sort.clone())
            .or_insert_with(|| {
                let mut u = self.kb.universe(sort, self.max_term_depth);
                u.truncate(WITNESS_CAP);
                u
            })
            .clone()
    }

    /// Try to establish `goal` in `ctx`, appending the introduction steps
    /// used (premises first). On failure `steps` is left unchanged.
    pub fn establish(&self, ctx: &Context, goal: &Formula, steps: &mut Vec<Step>) -> bool {
        let mark = steps.len();
        let ok = self.establish_inner(ctx, goal, steps);
        if !ok {
            steps.truncate(mark);
        }
        ok
    }

    fn establish_inner(&self, ctx: &Context, goal: &Formula, steps: &mut Vec<Step>) -> bool {
        let j = Judgment::new(ctx.clone(), goal.clone());
        if self.lookup(&j) {
            return true;
        }
        if steps.iter().any(|s| s.conclusion == j) {
            return true;
        }
        if goal.has_pred_vars() || !goal.free_vars().is_empty() {
            return false;
        }
        match goal {
            Formula::Atom { .. } | Formula::Not(_) => {
                if native_truth(goal) {
                    steps.push(Step::new(j, Rule::Native, Vec::new()));
                    return true;
                }
                false
            }
            Formula::Utility(u) => {
                let (Some(t), true) = (u.time.as_int(), u.event.is_ground()) else {
                    return false;
                };
                let Some(oracle) = self.kb.oracle() else {
                    return false;
                };
                match oracle.nu(ctx, &u.event, t) {
                    Some(v) if u.cmp.test(v, u.value) => {
                        steps.push(Step::new(j, Rule::UtilityEval, Vec::new()));
                        true
                    }
                    _ => false,
                }
            }
            Formula::And(xs) => {
                for x in xs {
                    if !self.establish(ctx, x, steps) {
                        return false;
                    }
                }
                let premises = xs.iter().map(|x| Judgment::new(ctx.clone(), x.clone())).collect();
                steps.push(Step::new(j, Rule::AndIntro, premises));
                true
            }
            Formula::Or(xs) => {
                for x in xs {
                    if self.establish(ctx, x, steps) {
                        let p = Judgment::new(ctx.clone(), x.clone());
                        steps.push(Step::new(j, Rule::OrIntro, vec![p]));
                        return true;
                    }
                }
                false
            }
            Formula::Exists(v, body) => {
                for w in self.candidates(&v.sort) {
                    let s = Substitution::single(v.clone(), w);
                    let inst = s.apply(body);
                    if self.establish(ctx, &inst, steps) {
                        let p = Judgment::new(ctx.clone(), inst);
                        steps.push(Step::new(j, Rule::ExistsIntro, vec![p]).with_bindings(s));
                        return true;
                    }
                }
                false
            }
            Formula::Count { bound, var, body } => {
                let (need, exact) = match bound {
                    CountBound::AtLeast(n) => (*n as usize, false),
                    CountBound::Exactly(n) => (*n as usize, true),
                };
                if exact && !self.kb.is_complete() {
                    return false;
                }
                let mut premises = Vec::new();
                for w in self.candidates(&var.sort) {
                    if !exact && premises.len() >= need {
                        break;
                    }
                    let inst = Substitution::single(var.clone(), w).apply(body);
                    if self.establish(ctx, &inst, steps) {
                        premises.push(Judgment::new(ctx.clone(), inst));
                    }
                }
                let ok = if exact {
                    premises.len() == need
                } else {
                    premises.len() >= need
                };
                if ok {
                    steps.push(Step::new(j, Rule::CountIntro, premises));
                }
                ok
            }
            _ => {
                if let Some((a, t, body)) = KnowledgeBase::is_belief_op(goal) {
                    if ctx.len() >= self.max_depth {
                        return false;
                    }
                    let mut inner = ctx.clone();
                    inner.push((a.clone(), t));
                    if self.establish(&inner, body, steps) {
                        let p = Judgment::new(inner, body.clone());
                        steps.push(Step::new(j, Rule::BeliefIntro, vec![p]));
                        return true;
                    }
                }
                false
            }
        }
    }
}

/// Truth of atoms decided without the knowledge base: moment order,
/// syntactic equality of ground terms, and distinctness under unique names.
pub fn native_truth(f: &Formula) -> bool {
    match f {
        Formula::Atom {
            pred: Pred::Sym(p),
            args,
        } if args.len() == 2 && args.iter().all(Term::is_ground) => match p.as_str() {
            "prior" => matches!((args[0].as_int(), args[1].as_int()), (Some(a), Some(b)) if a < b),
            EQUALITY => args[0] == args[1],
            _ => false,
        },
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Atom {
                pred: Pred::Sym(p),
                args,
            } if p == EQUALITY && args.len() == 2 => {
                args.iter().all(Term::is_ground) && args[0] != args[1]
            }
            _ => false,
        },
        _ => false,
    }
}
