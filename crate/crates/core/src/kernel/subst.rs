use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::ast::{Formula, Pred, Term, UtilityAtom, Var};

/// Mapping from variables to terms and from predicate variables to
/// predicate symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Substitution {
    terms: BTreeMap<Var, Term>,
    preds: BTreeMap<String, String>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(v: Var, t: Term) -> Self {
        let mut s = Self::new();
        s.bind(v, t);
        s
    }

    pub fn bind(&mut self, v: Var, t: Term) {
        if t == Term::Var(v.clone()) {
            self.terms.remove(&v);
        } else {
            self.terms.insert(v, t);
        }
    }

    pub fn bind_pred(&mut self, var: &str, sym: &str) {
        self.preds.insert(var.to_string(), sym.to_string());
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.terms.get(v)
    }

    pub fn get_pred(&self, p: &str) -> Option<&str> {
        self.preds.get(p).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.preds.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len() + self.preds.len()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.terms.iter()
    }

    pub fn pred_bindings(&self) -> impl Iterator<Item = (&str, &str)> {
        self.preds.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.terms.keys().cloned().collect()
    }

    /// Variables occurring in the range.
    pub fn introduced(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.terms.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    /// Domain and range variables are disjoint, so applying twice is the
    /// same as applying once.
    pub fn is_idempotent(&self) -> bool {
        self.domain().is_disjoint(&self.introduced())
    }

    pub fn without(&self, v: &Var) -> Substitution {
        let mut s = self.clone();
        s.terms.remove(v);
        s
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.terms.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) | Term::Int(_) => t.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    /// Capture-avoiding application; bound variables are renamed when a
    /// substituted term would otherwise be captured.
    pub fn apply(&self, f: &Formula) -> Formula {
        if self.is_empty() {
            return f.clone();
        }
        match f {
            Formula::Atom { pred, args } => {
                let pred = match pred {
                    Pred::Var(p) => match self.preds.get(p) {
                        Some(sym) => Pred::Sym(sym.clone()),
                        None => pred.clone(),
                    },
                    Pred::Sym(_) => pred.clone(),
                };
                Formula::Atom {
                    pred,
                    args: args.iter().map(|a| self.apply_term(a)).collect(),
                }
            }
            Formula::Not(g) => Formula::Not(Box::new(self.apply(g))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.apply(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.apply(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.apply(a), self.apply(b)),
            Formula::Iff(a, b) => Formula::iff(self.apply(a), self.apply(b)),
            Formula::Forall(v, body) => {
                let (v, body) = self.apply_under_binder(v, body);
                Formula::Forall(v, Box::new(body))
            }
            Formula::Exists(v, body) => {
                let (v, body) = self.apply_under_binder(v, body);
                Formula::Exists(v, Box::new(body))
            }
            Formula::Count { bound, var, body } => {
                let (var, body) = self.apply_under_binder(var, body);
                Formula::Count {
                    bound: *bound,
                    var,
                    body: Box::new(body),
                }
            }
            Formula::Modal {
                op,
                agents,
                time,
                body,
            } => Formula::Modal {
                op: *op,
                agents: agents.iter().map(|a| self.apply_term(a)).collect(),
                time: self.apply_term(time),
                body: Box::new(self.apply(body)),
            },
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => Formula::Ought {
                agent: self.apply_term(agent),
                time: self.apply_term(time),
                condition: Box::new(self.apply(condition)),
                action: Box::new(self.apply(action)),
            },
            Formula::Trait { body, agent } => Formula::Trait {
                body: Box::new(self.apply(body)),
                agent: self.apply_term(agent),
            },
            Formula::Utility(u) => Formula::Utility(UtilityAtom {
                event: self.apply_term(&u.event),
                time: self.apply_term(&u.time),
                cmp: u.cmp,
                value: u.value,
            }),
        }
    }

    fn apply_under_binder(&self, v: &Var, body: &Formula) -> (Var, Formula) {
        let inner = self.without(v);
        let free = body.free_vars();
        let captures = inner
            .terms
            .iter()
            .filter(|(k, _)| free.contains(k))
            .any(|(_, t)| t.contains_var(v));
        if !captures {
            return (v.clone(), inner.apply(body));
        }
        let mut avoid: BTreeSet<String> = free.iter().map(|w| w.name.clone()).collect();
        for t in inner.terms.values() {
            for w in t.vars() {
                avoid.insert(w.name);
            }
        }
        for w in body.all_vars() {
            avoid.insert(w.name);
        }
        let fresh = fresh_var(v, &avoid);
        let mut renamed = inner;
        renamed.terms.insert(v.clone(), Term::Var(fresh.clone()));
        (fresh, renamed.apply(body))
    }

    /// `compose(s1, s2)` applies `s1` then `s2`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.terms {
            out.bind(v.clone(), then.apply_term(t));
        }
        for (v, t) in &then.terms {
            if !self.terms.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out.preds = self.preds.clone();
        for (p, s) in &then.preds {
            out.preds.entry(p.clone()).or_insert_with(|| s.clone());
        }
        out
    }
}

fn fresh_var(v: &Var, avoid: &BTreeSet<String>) -> Var {
    (1..)
        .map(|i| format!("{}_{}", v.name, i))
        .find(|n| !avoid.contains(n))
        .map(|n| Var::new(n, v.sort.clone()))
        .expect("unbounded name supply")
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (p, s) in &self.preds {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "?{p} -> {s}")?;
        }
        for (v, t) in &self.terms {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(
                f,
                "?{}:{} -> {}",
                v.name,
                v.sort,
                crate::syntax::print_term(t)
            )?;
        }
        write!(f, "}}")
    }
}
