use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use super::sort::Sort;

/// A sorted variable. Two variables are the same only if both name and
/// sort agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var {
            name: name.into(),
            sort,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    /// Declared constant; its sort lives in the signature.
    Const(String),
    /// Moment literal.
    Int(i64),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str, sort: Sort) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(name.to_string())
    }

    pub fn app(functor: &str, args: Vec<Term>) -> Self {
        Term::App(functor.to_string(), args)
    }

    /// `action(agent, action_type)`
    pub fn action(agent: Term, action_type: Term) -> Self {
        Term::App("action".into(), vec![agent, action_type])
    }

    /// Replace every occurrence of the subterm `from` by `to`.
    pub fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        match self {
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| a.replace(from, to)).collect()),
            other => other.clone(),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Int(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
            _ => false,
        }
    }

    /// Function and constant symbols occurring in the term.
    pub fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_symbols(out));
            }
            _ => {}
        }
    }

    /// Pre-order traversal of all subterms, including `self`.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            if let Term::App(_, args) = t {
                stack.extend(args.iter().rev());
            }
        }
        out
    }
}

/// Predicate position of an atom: a declared symbol, or a predicate
/// variable introduced by higher-order anti-unification.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Sym(String),
    Var(String),
}

impl Pred {
    pub fn sym(name: &str) -> Self {
        Pred::Sym(name.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Pred::Sym(s) | Pred::Var(s) => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModalOp {
    Perceives,
    Knows,
    Believes,
    Desires,
    Intends,
    Says,
    Common,
}

impl ModalOp {
    pub const ALL: [ModalOp; 7] = [
        ModalOp::Perceives,
        ModalOp::Knows,
        ModalOp::Believes,
        ModalOp::Desires,
        ModalOp::Intends,
        ModalOp::Says,
        ModalOp::Common,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ModalOp::Perceives => "perceives",
            ModalOp::Knows => "knows",
            ModalOp::Believes => "believes",
            ModalOp::Desires => "desires",
            ModalOp::Intends => "intends",
            ModalOp::Says => "says",
            ModalOp::Common => "common",
        }
    }

    pub fn from_keyword(kw: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.keyword() == kw)
    }

    /// Accepted numbers of agent arguments.
    pub fn agent_arities(self) -> &'static [usize] {
        match self {
            ModalOp::Common => &[0],
            ModalOp::Says => &[2, 1],
            _ => &[1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CountBound {
    AtLeast(u32),
    Exactly(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Comparison {
    Gt,
    Ge,
    Lt,
    Le,
    Eq,
}

impl Comparison {
    pub const ALL: [Comparison; 5] = [
        Comparison::Gt,
        Comparison::Ge,
        Comparison::Lt,
        Comparison::Le,
        Comparison::Eq,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Eq => "=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.symbol() == s)
    }

    pub fn test(self, lhs: Rational64, rhs: Rational64) -> bool {
        match self {
            Comparison::Gt => lhs > rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Eq => lhs == rhs,
        }
    }
}

/// `ν(event, time) ⋈ value`. The event term may be an `Event` or an
/// `ActionType`; in the latter case the performer comes from context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UtilityAtom {
    pub event: Term,
    pub time: Term,
    pub cmp: Comparison,
    pub value: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom {
        pred: Pred,
        args: Vec<Term>,
    },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    Count {
        bound: CountBound,
        var: Var,
        body: Box<Formula>,
    },
    Modal {
        op: ModalOp,
        agents: Vec<Term>,
        time: Term,
        body: Box<Formula>,
    },
    /// `Ought(agent, time, condition, action)`; the action clause is a
    /// possibly negated `happens` atom.
    Ought {
        agent: Term,
        time: Term,
        condition: Box<Formula>,
        action: Box<Formula>,
    },
    Trait {
        body: Box<Formula>,
        agent: Term,
    },
    Utility(UtilityAtom),
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom {
            pred: Pred::sym(pred),
            args,
        }
    }

    pub fn holds(fluent: Term, time: Term) -> Self {
        Formula::atom("holds", vec![fluent, time])
    }

    pub fn happens(event: Term, time: Term) -> Self {
        Formula::atom("happens", vec![event, time])
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Exists(v, Box::new(body))
    }

    pub fn modal(op: ModalOp, agents: Vec<Term>, time: Term, body: Formula) -> Self {
        Formula::Modal {
            op,
            agents,
            time,
            body: Box::new(body),
        }
    }

    pub fn believes(agent: Term, time: Term, body: Formula) -> Self {
        Formula::modal(ModalOp::Believes, vec![agent], time, body)
    }

    pub fn knows(agent: Term, time: Term, body: Formula) -> Self {
        Formula::modal(ModalOp::Knows, vec![agent], time, body)
    }

    pub fn intends(agent: Term, time: Term, body: Formula) -> Self {
        Formula::modal(ModalOp::Intends, vec![agent], time, body)
    }

    pub fn says(speaker: Term, hearer: Term, time: Term, body: Formula) -> Self {
        Formula::modal(ModalOp::Says, vec![speaker, hearer], time, body)
    }

    pub fn ought(agent: Term, time: Term, condition: Formula, action: Formula) -> Self {
        Formula::Ought {
            agent,
            time,
            condition: Box::new(condition),
            action: Box::new(action),
        }
    }

    pub fn trait_of(body: Formula, agent: Term) -> Self {
        Formula::Trait {
            body: Box::new(body),
            agent,
        }
    }

    pub fn utility(event: Term, time: Term, cmp: Comparison, value: Rational64) -> Self {
        Formula::Utility(UtilityAtom {
            event,
            time,
            cmp,
            value,
        })
    }

    /// `(believes agent time body)` split into its parts.
    pub fn as_belief(&self) -> Option<(&Term, &Term, &Formula)> {
        match self {
            Formula::Modal {
                op: ModalOp::Believes,
                agents,
                time,
                body,
            } if agents.len() == 1 => Some((&agents[0], time, body)),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<(&Pred, &[Term])> {
        match self {
            Formula::Atom { pred, args } => Some((pred, args)),
            _ => None,
        }
    }

    /// Atom with the given predicate symbol.
    pub fn atom_args(&self, name: &str) -> Option<&[Term]> {
        match self {
            Formula::Atom {
                pred: Pred::Sym(p),
                args,
            } if p == name => Some(args),
            _ => None,
        }
    }

    /// Terms directly held by this node (not by sub-formulas).
    pub fn own_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Atom { args, .. } => args.iter().collect(),
            Formula::Modal { agents, time, .. } => agents.iter().chain(Some(time)).collect(),
            Formula::Ought { agent, time, .. } => vec![agent, time],
            Formula::Trait { agent, .. } => vec![agent],
            Formula::Utility(u) => vec![&u.event, &u.time],
            _ => Vec::new(),
        }
    }

    /// Immediate sub-formulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom { .. } | Formula::Utility(_) => Vec::new(),
            Formula::Not(f) => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            Formula::Forall(_, b) | Formula::Exists(_, b) => vec![b],
            Formula::Count { body, .. } => vec![body],
            Formula::Modal { body, .. } => vec![body],
            Formula::Ought {
                condition, action, ..
            } => vec![condition, action],
            Formula::Trait { body, .. } => vec![body],
        }
    }

    pub fn binder(&self) -> Option<&Var> {
        match self {
            Formula::Forall(v, _) | Formula::Exists(v, _) => Some(v),
            Formula::Count { var, .. } => Some(var),
            _ => None,
        }
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        for t in self.own_terms() {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        }
        let binder = self.binder().cloned();
        if let Some(b) = &binder {
            bound.push(b.clone());
        }
        for c in self.children() {
            c.collect_free(bound, out);
        }
        if binder.is_some() {
            bound.pop();
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// Free variables in first-occurrence (left-to-right) order.
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            for t in f.own_terms() {
                for s in t.subterms() {
                    if let Term::Var(v) = s {
                        if !bound.contains(v) && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
            }
            let binder = f.binder().cloned();
            if let Some(b) = &binder {
                bound.push(b.clone());
            }
            for c in f.children() {
                walk(c, bound, out);
            }
            if binder.is_some() {
                bound.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// All variables, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            for t in f.own_terms() {
                t.collect_vars(&mut out);
            }
            if let Some(b) = f.binder() {
                out.insert(b.clone());
            }
        });
        out
    }

    pub fn pred_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom {
                pred: Pred::Var(p), ..
            } = f
            {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn has_pred_vars(&self) -> bool {
        !self.pred_vars().is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty() && !self.has_pred_vars()
    }

    /// Pre-order visit of every sub-formula.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Predicate, function and constant symbols, excluding moment literals.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom {
                pred: Pred::Sym(p), ..
            } = f
            {
                out.insert(p.clone());
            }
            for t in f.own_terms() {
                t.collect_symbols(&mut out);
            }
        });
        out
    }

    /// Ground terms occurring anywhere in the formula (all subterms).
    pub fn ground_subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            for t in f.own_terms() {
                for s in t.subterms() {
                    if s.is_ground() {
                        out.insert(s.clone());
                    }
                }
            }
        });
        out
    }

    pub fn max_term_depth(&self) -> usize {
        let mut d = 0;
        self.visit(&mut |f| {
            for t in f.own_terms() {
                d = d.max(t.depth());
            }
        });
        d
    }

    /// Maximum nesting of `Believes` operators.
    pub fn belief_depth(&self) -> usize {
        let below = self
            .children()
            .into_iter()
            .map(Formula::belief_depth)
            .max()
            .unwrap_or(0);
        match self {
            Formula::Modal {
                op: ModalOp::Believes,
                ..
            } => below + 1,
            _ => below,
        }
    }

    /// Maximum nesting of any modal operator (including `Ought` and `Trait`).
    pub fn modal_depth(&self) -> usize {
        let below = self
            .children()
            .into_iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0);
        match self {
            Formula::Modal { .. } | Formula::Ought { .. } | Formula::Trait { .. } => below + 1,
            _ => below,
        }
    }

    /// Rebuild the formula with `f` applied to every maximal term, binders
    /// included unchanged.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        let m = |g: &Formula| Box::new(g.map_terms(f));
        match self {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args.iter().map(f).collect(),
            },
            Formula::Not(x) => Formula::Not(m(x)),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| x.map_terms(f)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| x.map_terms(f)).collect()),
            Formula::Implies(a, b) => Formula::Implies(m(a), m(b)),
            Formula::Iff(a, b) => Formula::Iff(m(a), m(b)),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), m(b)),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), m(b)),
            Formula::Count { bound, var, body } => Formula::Count {
                bound: *bound,
                var: var.clone(),
                body: m(body),
            },
            Formula::Modal {
                op,
                agents,
                time,
                body,
            } => Formula::Modal {
                op: *op,
                agents: agents.iter().map(f).collect(),
                time: f(time),
                body: m(body),
            },
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => Formula::Ought {
                agent: f(agent),
                time: f(time),
                condition: m(condition),
                action: m(action),
            },
            Formula::Trait { body, agent } => Formula::Trait {
                body: m(body),
                agent: f(agent),
            },
            Formula::Utility(u) => Formula::Utility(UtilityAtom {
                event: f(&u.event),
                time: f(&u.time),
                cmp: u.cmp,
                value: u.value,
            }),
        }
    }

    /// Conjuncts of a conjunction, or the formula itself.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(fs) => fs.iter().flat_map(|f| f.conjuncts()).collect(),
            other => vec![other],
        }
    }
}

/// Build a conjunction, collapsing the single-element case.
pub fn conjoin(mut fs: Vec<Formula>) -> Formula {
    if fs.len() == 1 {
        fs.pop().unwrap()
    } else {
        Formula::And(fs)
    }
}
