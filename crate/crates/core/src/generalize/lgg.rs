//! Least general generalization (anti-unification) of terms and formulas.
//!
//! Mismatching subterm tuples map to fresh variables through a table, so
//! the same tuple is always generalized by the same variable. Atoms whose
//! predicate symbols differ may optionally be generalized by a predicate
//! variable of the same arity.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use crate::kernel::{sort_of, Formula, Pred, Signature, Sort, Substitution, Term, Var};
use crate::syntax::{print_formula, print_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneralizeError {
    #[error("cannot generalize `{left}` and `{right}`: their sorts have no common supersort")]
    SortMismatch { left: String, right: String },
    #[error("cannot generalize atoms of different arity: `{left}` and `{right}`")]
    ArityMismatch { left: String, right: String },
    #[error("no shape-consistent alignment: {0}")]
    NoAlignment(String),
    #[error("generalization does not entail `{0}` within the prover bounds")]
    ContractFailed(String),
    #[error("generalization needs at least two inputs")]
    TooFewInputs,
}

/// A generalization `general` with one witness per input:
/// `witnesses[i].apply(general) == inputs[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generalization<T> {
    pub general: T,
    pub witnesses: Vec<Substitution>,
}

/// Shared state of an n-ary anti-unification run.
#[derive(Clone, Debug)]
pub struct AntiUnifier<'a> {
    sig: &'a Signature,
    arity: usize,
    higher_order: bool,
    taken: BTreeSet<String>,
    vars: IndexMap<Vec<Term>, Var>,
    preds: IndexMap<Vec<String>, String>,
    bound: Vec<Var>,
}

impl<'a> AntiUnifier<'a> {
    /// `arity` is the number of inputs; `taken` are names that fresh
    /// variables must avoid.
    pub fn new(sig: &'a Signature, arity: usize, higher_order: bool) -> Self {
        AntiUnifier {
            sig,
            arity,
            higher_order,
            taken: BTreeSet::new(),
            vars: IndexMap::new(),
            preds: IndexMap::new(),
            bound: Vec::new(),
        }
    }

    pub fn avoid_names_in(&mut self, f: &Formula) {
        self.taken.extend(f.all_vars().into_iter().map(|v| v.name));
        self.taken.extend(f.pred_vars());
    }

    pub fn avoid_names_in_term(&mut self, t: &Term) {
        self.taken.extend(t.vars().into_iter().map(|v| v.name));
    }

    /// Number of variables introduced so far (term and predicate).
    pub fn introduced(&self) -> usize {
        self.vars.len() + self.preds.len()
    }

    pub fn introduced_vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.values()
    }

    /// Pre-assign a variable to a tuple, e.g. the shared time variable.
    pub fn assign(&mut self, tuple: Vec<Term>, var: Var) {
        self.taken.insert(var.name.clone());
        self.vars.insert(tuple, var);
    }

    fn fresh(&self, prefix: &str, n: usize) -> String {
        let mut i = n;
        loop {
            let name = format!("{prefix}{i}");
            if !self.taken.contains(&name)
                && !self.vars.values().any(|v| v.name == name)
                && !self.preds.values().any(|p| *p == name)
            {
                return name;
            }
            i += 1;
        }
    }

    fn sort_join(&self, ts: &[&Term]) -> Result<Sort, GeneralizeError> {
        let mismatch = || GeneralizeError::SortMismatch {
            left: print_term(ts[0]),
            right: print_term(ts[ts.len() - 1]),
        };
        let mut acc: Option<Sort> = None;
        for t in ts {
            let s = sort_of(t, self.sig).map_err(|_| mismatch())?;
            acc = Some(match acc {
                None => s,
                Some(a) => self.sig.join(&a, &s).ok_or_else(mismatch)?,
            });
        }
        acc.ok_or_else(mismatch)
    }

    pub fn term(&mut self, ts: &[&Term]) -> Result<Term, GeneralizeError> {
        debug_assert_eq!(ts.len(), self.arity);
        if ts.iter().all(|t| *t == ts[0]) {
            return Ok(ts[0].clone());
        }
        if let Term::App(f, args) = ts[0] {
            let same_head = ts.iter().all(|t| matches!(t, Term::App(g, a) if g == f && a.len() == args.len()));
            if same_head {
                let mut out = Vec::with_capacity(args.len());
                for i in 0..args.len() {
                    let column: Vec<&Term> = ts
                        .iter()
                        .map(|t| match t {
                            Term::App(_, a) => &a[i],
                            _ => unreachable!(),
                        })
                        .collect();
                    out.push(self.term(&column)?);
                }
                return Ok(Term::App(f.clone(), out));
            }
        }
        if ts
            .iter()
            .any(|t| self.bound.iter().any(|b| t.contains_var(b)))
        {
            return Err(GeneralizeError::NoAlignment(format!(
                "bound variable would escape when generalizing `{}`",
                print_term(ts[0])
            )));
        }
        let key: Vec<Term> = ts.iter().map(|t| (*t).clone()).collect();
        if let Some(v) = self.vars.get(&key) {
            return Ok(Term::Var(v.clone()));
        }
        let sort = self.sort_join(ts)?;
        let v = Var::new(self.fresh("X", 1), sort);
        self.vars.insert(key, v.clone());
        Ok(Term::Var(v))
    }

    fn terms(&mut self, rows: &[Vec<&Term>]) -> Result<Vec<Term>, GeneralizeError> {
        // rows[i] holds the i-th term position across all inputs.
        rows.iter().map(|col| self.term(col)).collect()
    }

    fn pred(&mut self, fs: &[&Formula], ps: &[&Pred]) -> Result<Pred, GeneralizeError> {
        if ps.iter().all(|p| *p == ps[0]) {
            return Ok(ps[0].clone());
        }
        let syms: Option<Vec<String>> = ps
            .iter()
            .map(|p| match p {
                Pred::Sym(s) if s != crate::kernel::EQUALITY => Some(s.clone()),
                _ => None,
            })
            .collect();
        match syms {
            Some(syms) if self.higher_order => {
                if let Some(p) = self.preds.get(&syms) {
                    return Ok(Pred::Var(p.clone()));
                }
                let name = self.fresh("P", 1);
                self.preds.insert(syms, name.clone());
                Ok(Pred::Var(name))
            }
            _ => Err(GeneralizeError::NoAlignment(format!(
                "predicates of `{}` and `{}` differ",
                print_formula(fs[0]),
                print_formula(fs[fs.len() - 1])
            ))),
        }
    }

    pub fn formula(&mut self, fs: &[&Formula]) -> Result<Formula, GeneralizeError> {
        debug_assert_eq!(fs.len(), self.arity);
        let clash = || {
            GeneralizeError::NoAlignment(format!(
                "`{}` and `{}` have different shapes",
                print_formula(fs[0]),
                print_formula(fs[fs.len() - 1])
            ))
        };
        let same_kind = fs
            .iter()
            .all(|f| std::mem::discriminant(*f) == std::mem::discriminant(fs[0]));
        if !same_kind {
            return Err(clash());
        }
        let col = |i: usize| -> Vec<&Formula> { fs.iter().map(|f| f.children()[i]).collect() };
        match fs[0] {
            Formula::Atom { args, .. } => {
                let mut preds = Vec::new();
                let mut rows = vec![Vec::new(); args.len()];
                for f in fs {
                    let Formula::Atom { pred, args: a } = f else { unreachable!() };
                    if a.len() != args.len() {
                        return Err(GeneralizeError::ArityMismatch {
                            left: print_formula(fs[0]),
                            right: print_formula(f),
                        });
                    }
                    preds.push(pred);
                    for (i, t) in a.iter().enumerate() {
                        rows[i].push(t);
                    }
                }
                let pred = self.pred(fs, &preds)?;
                Ok(Formula::Atom {
                    pred,
                    args: self.terms(&rows)?,
                })
            }
            Formula::Not(_) => Ok(Formula::Not(Box::new(self.formula(&col(0))?))),
            Formula::And(xs) | Formula::Or(xs) => {
                if fs.iter().any(|f| f.children().len() != xs.len()) {
                    return Err(clash());
                }
                let parts = (0..xs.len())
                    .map(|i| self.formula(&col(i)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(if matches!(fs[0], Formula::And(_)) {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                })
            }
            Formula::Implies(..) | Formula::Iff(..) => {
                let a = self.formula(&col(0))?;
                let b = self.formula(&col(1))?;
                Ok(if matches!(fs[0], Formula::Implies(..)) {
                    Formula::implies(a, b)
                } else {
                    Formula::iff(a, b)
                })
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                if fs.iter().any(|f| f.binder() != Some(v)) {
                    return Err(clash());
                }
                self.bound.push(v.clone());
                let body = self.formula(&col(0));
                self.bound.pop();
                let body = Box::new(body?);
                Ok(if matches!(fs[0], Formula::Forall(..)) {
                    Formula::Forall(v.clone(), body)
                } else {
                    Formula::Exists(v.clone(), body)
                })
            }
            Formula::Count { bound, var, .. } => {
                let ok = fs.iter().all(|f| {
                    matches!(f, Formula::Count { bound: b, var: w, .. } if b == bound && w == var)
                });
                if !ok {
                    return Err(clash());
                }
                self.bound.push(var.clone());
                let body = self.formula(&col(0));
                self.bound.pop();
                Ok(Formula::Count {
                    bound: *bound,
                    var: var.clone(),
                    body: Box::new(body?),
                })
            }
            Formula::Modal { op, agents, .. } => {
                let ok = fs.iter().all(|f| {
                    matches!(f, Formula::Modal { op: o, agents: a, .. } if o == op && a.len() == agents.len())
                });
                if !ok {
                    return Err(clash());
                }
                let mut rows = vec![Vec::new(); agents.len() + 1];
                for f in fs {
                    for (i, t) in f.own_terms().into_iter().enumerate() {
                        rows[i].push(t);
                    }
                }
                let mut terms = self.terms(&rows)?;
                let time = terms.pop().unwrap();
                let body = self.formula(&col(0))?;
                Ok(Formula::Modal {
                    op: *op,
                    agents: terms,
                    time,
                    body: Box::new(body),
                })
            }
            Formula::Ought { .. } => {
                let mut rows = vec![Vec::new(); 2];
                for f in fs {
                    for (i, t) in f.own_terms().into_iter().enumerate() {
                        rows[i].push(t);
                    }
                }
                let terms = self.terms(&rows)?;
                let condition = self.formula(&col(0))?;
                let action = self.formula(&col(1))?;
                Ok(Formula::Ought {
                    agent: terms[0].clone(),
                    time: terms[1].clone(),
                    condition: Box::new(condition),
                    action: Box::new(action),
                })
            }
            Formula::Trait { .. } => {
                let body = self.formula(&col(0))?;
                let agents: Vec<&Term> = fs.iter().map(|f| f.own_terms()[0]).collect();
                let agent = self.term(&agents)?;
                Ok(Formula::Trait {
                    body: Box::new(body),
                    agent,
                })
            }
            Formula::Utility(u) => {
                let ok = fs.iter().all(|f| {
                    matches!(f, Formula::Utility(w) if w.cmp == u.cmp && w.value == u.value)
                });
                if !ok {
                    return Err(clash());
                }
                let events: Vec<&Term> = fs.iter().map(|f| f.own_terms()[0]).collect();
                let times: Vec<&Term> = fs.iter().map(|f| f.own_terms()[1]).collect();
                let event = self.term(&events)?;
                let time = self.term(&times)?;
                Ok(Formula::utility(event, time, u.cmp, u.value))
            }
        }
    }

    /// The witness substitution of input `i`.
    pub fn witness(&self, i: usize) -> Substitution {
        let mut s = Substitution::new();
        for (tuple, v) in &self.vars {
            s.bind(v.clone(), tuple[i].clone());
        }
        for (syms, p) in &self.preds {
            s.bind_pred(p, &syms[i]);
        }
        s
    }

    pub fn witnesses(&self) -> Vec<Substitution> {
        (0..self.arity).map(|i| self.witness(i)).collect()
    }
}

/// First-order least general generalization of two terms.
pub fn anti_unify_terms(
    t1: &Term,
    t2: &Term,
    sig: &Signature,
) -> Result<Generalization<Term>, GeneralizeError> {
    anti_unify_term_list(&[t1.clone(), t2.clone()], sig)
}

/// Generalize any number of terms at once.
pub fn anti_unify_term_list(
    ts: &[Term],
    sig: &Signature,
) -> Result<Generalization<Term>, GeneralizeError> {
    if ts.len() < 2 {
        return Err(GeneralizeError::TooFewInputs);
    }
    let refs: Vec<&Term> = ts.iter().collect();
    let mut au = AntiUnifier::new(sig, ts.len(), false);
    for t in ts {
        au.avoid_names_in_term(t);
    }
    // Inputs must share a sort family before any generalization is attempted.
    au.sort_join(&refs)?;
    let general = au.term(&refs)?;
    Ok(Generalization {
        general,
        witnesses: au.witnesses(),
    })
}

/// Generalize two atoms, abstracting differing predicate symbols into a
/// predicate variable of the same arity.
pub fn anti_unify_ho(
    f1: &Formula,
    f2: &Formula,
    sig: &Signature,
) -> Result<Generalization<Formula>, GeneralizeError> {
    let (Some((_, a1)), Some((_, a2))) = (f1.as_atom(), f2.as_atom()) else {
        return Err(GeneralizeError::NoAlignment(
            "higher-order anti-unification applies to atoms".into(),
        ));
    };
    if a1.len() != a2.len() {
        return Err(GeneralizeError::ArityMismatch {
            left: print_formula(f1),
            right: print_formula(f2),
        });
    }
    anti_unify_formulas(&[f1.clone(), f2.clone()], sig, true)
}

/// Generalize formulas of identical shape.
pub fn anti_unify_formulas(
    fs: &[Formula],
    sig: &Signature,
    higher_order: bool,
) -> Result<Generalization<Formula>, GeneralizeError> {
    if fs.len() < 2 {
        return Err(GeneralizeError::TooFewInputs);
    }
    let mut au = AntiUnifier::new(sig, fs.len(), higher_order);
    for f in fs {
        au.avoid_names_in(f);
    }
    let refs: Vec<&Formula> = fs.iter().collect();
    let general = au.formula(&refs)?;
    Ok(Generalization {
        general,
        witnesses: au.witnesses(),
    })
}
