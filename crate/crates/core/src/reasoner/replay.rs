//! Independent checker for proof traces. Each step is re-validated
//! against the shape of its rule without consulting the prover.

use std::collections::HashSet;

use thiserror::Error;

use super::kb::{Judgment, Rule, Step};
use super::oracle::UtilityOracle;
use crate::generalize::respects_sorts;
use crate::kernel::{canonical_form, check_sorts, CountBound, Formula, ModalOp, Pred, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: premise `{premise}` was not established earlier")]
    MissingPremise { step: usize, premise: String },
    #[error("step {step} ({rule}): {reason}")]
    BadStep {
        step: usize,
        rule: &'static str,
        reason: String,
    },
    #[error("the trace does not conclude the goal")]
    GoalNotReached,
}

pub struct ReplayEnv<'a> {
    pub signature: &'a Signature,
    pub horizon: i64,
    pub oracle: Option<&'a dyn UtilityOracle>,
}

fn key(j: &Judgment) -> (Vec<(Term, i64)>, Formula) {
    (j.context.clone(), canonical_form(&j.formula))
}

fn same(a: &Formula, b: &Formula) -> bool {
    canonical_form(a) == canonical_form(b)
}

fn belief(f: &Formula) -> Option<(&Term, i64, &Formula)> {
    match f {
        Formula::Modal {
            op: ModalOp::Believes,
            agents,
            time,
            body,
        } if agents.len() == 1 => time.as_int().map(|t| (&agents[0], t, body.as_ref())),
        _ => None,
    }
}

/// Check `trace` step by step from `axioms` and confirm it ends in `goal`.
/// An empty trace is accepted when `goal` is itself an axiom.
pub fn replay(
    axioms: &[Judgment],
    trace: &[Step],
    goal: &Judgment,
    env: &ReplayEnv<'_>,
) -> Result<(), ReplayError> {
    let mut known: HashSet<(Vec<(Term, i64)>, Formula)> = axioms.iter().map(key).collect();
    for (i, step) in trace.iter().enumerate() {
        for p in &step.premises {
            if !known.contains(&key(p)) {
                return Err(ReplayError::MissingPremise {
                    step: i,
                    premise: p.to_string(),
                });
            }
        }
        check_step(step, env).map_err(|reason| ReplayError::BadStep {
            step: i,
            rule: step.rule.name(),
            reason,
        })?;
        known.insert(key(&step.conclusion));
    }
    if known.contains(&key(goal)) {
        Ok(())
    } else {
        Err(ReplayError::GoalNotReached)
    }
}

fn ensure(ok: bool, msg: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn premise_count(s: &Step, n: usize) -> Result<(), String> {
    ensure(s.premises.len() == n, &format!("expected {n} premise(s), found {}", s.premises.len()))
}

fn check_step(s: &Step, env: &ReplayEnv<'_>) -> Result<(), String> {
    let c = &s.conclusion;
    let ps = &s.premises;
    match s.rule {
        Rule::Axiom => Err("axioms cannot appear as steps".into()),
        Rule::Assume => {
            premise_count(s, 1)?;
            let (a, t, body) = belief(&ps[0].formula).ok_or("premise is not a belief")?;
            let mut ctx = ps[0].context.clone();
            ctx.push((a.clone(), t));
            ensure(c.context == ctx && same(&c.formula, body), "conclusion is not the opened belief")
        }
        Rule::AndElim => {
            premise_count(s, 1)?;
            let Formula::And(xs) = &ps[0].formula else {
                return Err("premise is not a conjunction".into());
            };
            ensure(
                c.context == ps[0].context && xs.iter().any(|x| same(x, &c.formula)),
                "conclusion is not a conjunct",
            )
        }
        Rule::ModusPonens | Rule::IffElim => {
            premise_count(s, 2)?;
            ensure(
                ps.iter().all(|p| p.context == c.context),
                "premises and conclusion must share a context",
            )?;
            let (major, minor) = (&ps[0].formula, &ps[1].formula);
            let ok = match (s.rule, major) {
                (Rule::ModusPonens, Formula::Implies(a, b)) => same(a, minor) && same(b, &c.formula),
                (Rule::IffElim, Formula::Iff(a, b)) => {
                    (same(a, minor) && same(b, &c.formula)) || (same(b, minor) && same(a, &c.formula))
                }
                _ => false,
            };
            ensure(ok, "premises do not detach the conclusion")
        }
        Rule::ForallElim => {
            premise_count(s, 1)?;
            ensure(c.context == ps[0].context, "context changed")?;
            let mut body = &ps[0].formula;
            let mut vars = Vec::new();
            while let Formula::Forall(v, b) = body {
                vars.push(v.clone());
                body = b;
            }
            ensure(!vars.is_empty(), "premise is not universally quantified")?;
            ensure(
                vars.iter().all(|v| s.bindings.get(v).is_some_and(Term::is_ground)),
                "bindings do not ground every quantified variable",
            )?;
            ensure(respects_sorts(&s.bindings, env.signature), "binding violates a sort")?;
            ensure(same(&s.bindings.apply(body), &c.formula), "conclusion is not the instance")
        }
        Rule::SchemaInst => {
            premise_count(s, 1)?;
            ensure(c.context == ps[0].context, "context changed")?;
            ensure(ps[0].formula.has_pred_vars(), "premise has no predicate variables")?;
            ensure(
                s.bindings.pred_bindings().all(|(_, sym)| env.signature.predicate(sym).is_some()),
                "binding names an undeclared predicate",
            )?;
            let inst = s.bindings.apply(&ps[0].formula);
            ensure(same(&inst, &c.formula), "conclusion is not the instance")?;
            ensure(check_sorts(&inst, env.signature).is_ok(), "instance is ill-sorted")
        }
        Rule::BeliefClosure => {
            premise_count(s, 1)?;
            let ((a, t1), outer) = ps[0].context.split_last().ok_or("premise has no belief context")?;
            let (b, t2, body) = belief(&c.formula).ok_or("conclusion is not a belief")?;
            ensure(
                c.context == outer && a == b && *t1 < t2 && t2 <= env.horizon && same(body, &ps[0].formula),
                "conclusion does not close the premise context at a later moment",
            )
        }
        Rule::BeliefIntro => {
            premise_count(s, 1)?;
            let ((a, t1), outer) = ps[0].context.split_last().ok_or("premise has no belief context")?;
            let (b, t2, body) = belief(&c.formula).ok_or("conclusion is not a belief")?;
            ensure(
                c.context == outer && a == b && *t1 == t2 && same(body, &ps[0].formula),
                "conclusion does not close the premise context",
            )
        }
        Rule::SaysBelief => {
            premise_count(s, 1)?;
            let Formula::Modal {
                op: ModalOp::Says,
                agents,
                time,
                body,
            } = &ps[0].formula
            else {
                return Err("premise is not a report".into());
            };
            ensure(agents.len() == 2, "report needs a speaker and a hearer")?;
            let want = Formula::believes(
                agents[1].clone(),
                time.clone(),
                Formula::believes(agents[0].clone(), time.clone(), (**body).clone()),
            );
            ensure(c.context == ps[0].context && same(&want, &c.formula), "wrong hearer belief")
        }
        Rule::OughtIntention => {
            premise_count(s, 3)?;
            let Formula::Ought {
                agent,
                time,
                condition,
                action,
            } = &ps[2].formula
            else {
                return Err("third premise is not an obligation".into());
            };
            let ctx = &ps[2].context;
            let b_cond = Formula::believes(agent.clone(), time.clone(), (**condition).clone());
            let b_ought = Formula::believes(agent.clone(), time.clone(), ps[2].formula.clone());
            let concl = Formula::knows(
                agent.clone(),
                time.clone(),
                Formula::intends(agent.clone(), time.clone(), (**action).clone()),
            );
            ensure(
                ps.iter().all(|p| &p.context == ctx)
                    && &c.context == ctx
                    && same(&ps[0].formula, &b_cond)
                    && same(&ps[1].formula, &b_ought)
                    && same(&c.formula, &concl),
                "premises do not match the obligation",
            )
        }
        Rule::AndIntro => {
            let Formula::And(xs) = &c.formula else {
                return Err("conclusion is not a conjunction".into());
            };
            ensure(
                xs.len() == ps.len()
                    && xs.iter().zip(ps).all(|(x, p)| p.context == c.context && same(x, &p.formula)),
                "premises are not the conjuncts",
            )
        }
        Rule::OrIntro => {
            premise_count(s, 1)?;
            let Formula::Or(xs) = &c.formula else {
                return Err("conclusion is not a disjunction".into());
            };
            ensure(
                ps[0].context == c.context && xs.iter().any(|x| same(x, &ps[0].formula)),
                "premise is not a disjunct",
            )
        }
        Rule::ExistsIntro => {
            premise_count(s, 1)?;
            let Formula::Exists(v, body) = &c.formula else {
                return Err("conclusion is not existential".into());
            };
            let w = s.bindings.get(v).ok_or("no witness recorded")?;
            ensure(w.is_ground(), "witness is not ground")?;
            ensure(respects_sorts(&s.bindings, env.signature), "witness violates the sort")?;
            ensure(
                ps[0].context == c.context && same(&s.bindings.apply(body), &ps[0].formula),
                "premise is not the witnessed instance",
            )
        }
        Rule::CountIntro => {
            let Formula::Count { bound, var, body } = &c.formula else {
                return Err("conclusion is not a counting quantifier".into());
            };
            let mut witnesses = HashSet::new();
            for p in ps {
                ensure(p.context == c.context, "context changed")?;
                let m = crate::generalize::match_formula(body, &p.formula).ok_or("premise is not an instance")?;
                let w = m.get(var).cloned().ok_or("premise does not fix the counted variable")?;
                ensure(w.is_ground(), "witness is not ground")?;
                ensure(same(&m.apply(body), &p.formula), "premise is not an instance")?;
                witnesses.insert(w);
            }
            ensure(witnesses.len() == ps.len(), "witnesses repeat")?;
            let need = match bound {
                CountBound::AtLeast(n) | CountBound::Exactly(n) => *n as usize,
            };
            match bound {
                CountBound::AtLeast(_) => ensure(witnesses.len() >= need, "too few witnesses"),
                CountBound::Exactly(_) => ensure(witnesses.len() == need, "wrong number of witnesses"),
            }
        }
        Rule::Native => {
            premise_count(s, 0)?;
            ensure(native(&c.formula), "atom is not natively true")
        }
        Rule::UtilityEval => {
            premise_count(s, 0)?;
            let Formula::Utility(u) = &c.formula else {
                return Err("conclusion is not a utility comparison".into());
            };
            let oracle = env.oracle.ok_or("no utility oracle available")?;
            let t = u.time.as_int().ok_or("utility time is not a moment literal")?;
            let v = oracle.nu(&c.context, &u.event, t).ok_or("utility is undefined")?;
            ensure(u.cmp.test(v, u.value), "comparison does not hold")
        }
        Rule::Admiration => {
            let ok = c
                .formula
                .atom_args("holds")
                .is_some_and(|a| matches!(&a[0], Term::App(f, xs) if f == "admires" && xs.len() == 3));
            ensure(ok && ps.len() >= 2, "not an admiration record")
        }
        Rule::ExemplarStatus => ensure(
            c.formula.atom_args("exemplar").is_some() && !ps.is_empty(),
            "not an exemplar status",
        ),
        Rule::TraitIntro => ensure(
            belief(&c.formula).is_some_and(|(_, _, b)| matches!(b, Formula::Trait { .. })),
            "not a believed trait",
        ),
        Rule::LearnTrait => ensure(
            matches!(c.formula, Formula::Trait { .. }) && ps.len() == 2,
            "not a learned trait",
        ),
        Rule::TraitFiring => ensure(
            c.formula.atom_args("happens").is_some() && !ps.is_empty(),
            "not a trait firing",
        ),
    }
}

/// Moment order, syntactic equality and unique names, decided directly.
fn native(f: &Formula) -> bool {
    let ground_pair = |args: &[Term]| args.len() == 2 && args.iter().all(Term::is_ground);
    match f {
        Formula::Atom {
            pred: Pred::Sym(p),
            args,
        } if ground_pair(args) => match (p.as_str(), args[0].as_int(), args[1].as_int()) {
            ("prior", Some(a), Some(b)) => a < b,
            ("=", _, _) => args[0] == args[1],
            _ => false,
        },
        Formula::Not(g) => matches!(
            g.as_ref(),
            Formula::Atom { pred: Pred::Sym(p), args } if p == "=" && ground_pair(args) && args[0] != args[1]
        ),
        _ => false,
    }
}
