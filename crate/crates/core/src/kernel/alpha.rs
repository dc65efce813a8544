use std::collections::BTreeMap;

use super::ast::{Formula, Pred, Term, UtilityAtom, Var};

struct Canonicalizer {
    next: usize,
    free: BTreeMap<Var, Var>,
    bound: Vec<(Var, Var)>,
    preds: BTreeMap<String, String>,
}

impl Canonicalizer {
    fn new() -> Self {
        Canonicalizer {
            next: 0,
            free: BTreeMap::new(),
            bound: Vec::new(),
            preds: BTreeMap::new(),
        }
    }

    fn fresh(&mut self, v: &Var) -> Var {
        let out = Var::new(format!("_{}", self.next), v.sort.clone());
        self.next += 1;
        out
    }

    fn var(&mut self, v: &Var) -> Var {
        if let Some((_, c)) = self.bound.iter().rev().find(|(b, _)| b == v) {
            return c.clone();
        }
        if let Some(c) = self.free.get(v) {
            return c.clone();
        }
        let c = self.fresh(v);
        self.free.insert(v.clone(), c.clone());
        c
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.var(v)),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect()),
            other => other.clone(),
        }
    }

    fn under<F>(&mut self, v: &Var, body: &Formula, wrap: F) -> Formula
    where
        F: FnOnce(Var, Formula) -> Formula,
    {
        let c = self.fresh(v);
        self.bound.push((v.clone(), c.clone()));
        let b = self.formula(body);
        self.bound.pop();
        wrap(c, b)
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Atom { pred, args } => {
                let pred = match pred {
                    Pred::Var(p) => {
                        let n = self.preds.len();
                        let name = self
                            .preds
                            .entry(p.clone())
                            .or_insert_with(|| format!("_P{}", n))
                            .clone();
                        Pred::Var(name)
                    }
                    s => s.clone(),
                };
                Formula::Atom {
                    pred,
                    args: args.iter().map(|a| self.term(a)).collect(),
                }
            }
            Formula::Not(g) => Formula::not(self.formula(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.formula(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.formula(g)).collect()),
            Formula::Implies(a, b) => {
                let a = self.formula(a);
                Formula::implies(a, self.formula(b))
            }
            Formula::Iff(a, b) => {
                let a = self.formula(a);
                Formula::iff(a, self.formula(b))
            }
            Formula::Forall(v, body) => self.under(v, body, Formula::forall),
            Formula::Exists(v, body) => self.under(v, body, Formula::exists),
            Formula::Count { bound, var, body } => {
                let bound = *bound;
                self.under(var, body, |var, body| Formula::Count {
                    bound,
                    var,
                    body: Box::new(body),
                })
            }
            Formula::Modal {
                op,
                agents,
                time,
                body,
            } => {
                let agents = agents.iter().map(|a| self.term(a)).collect();
                let time = self.term(time);
                Formula::Modal {
                    op: *op,
                    agents,
                    time,
                    body: Box::new(self.formula(body)),
                }
            }
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => {
                let agent = self.term(agent);
                let time = self.term(time);
                let condition = self.formula(condition);
                Formula::ought(agent, time, condition, self.formula(action))
            }
            Formula::Trait { body, agent } => {
                let body = self.formula(body);
                Formula::trait_of(body, self.term(agent))
            }
            Formula::Utility(u) => {
                let event = self.term(&u.event);
                Formula::Utility(UtilityAtom {
                    event,
                    time: self.term(&u.time),
                    cmp: u.cmp,
                    value: u.value,
                })
            }
        }
    }
}

/// Rename every variable (bound or free) and predicate variable by order of
/// first appearance. Two formulas are alpha-equivalent exactly when their
/// canonical forms are equal.
pub fn canonical_form(f: &Formula) -> Formula {
    Canonicalizer::new().formula(f)
}

pub fn canonical_term(t: &Term) -> Term {
    Canonicalizer::new().term(t)
}

pub fn alpha_equivalent(f1: &Formula, f2: &Formula) -> bool {
    canonical_form(f1) == canonical_form(f2)
}

pub fn alpha_equivalent_terms(t1: &Term, t2: &Term) -> bool {
    canonical_term(t1) == canonical_term(t2)
}
