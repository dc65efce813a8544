//! Bounded forward chaining over judgments.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;

use super::bounds::ProverBounds;
use super::goal::GoalSearch;
use super::kb::{Judgment, KnowledgeBase, Rule, Step};
use crate::generalize::{match_formula, respects_sorts};
use crate::kernel::{check_sorts, Formula, ModalOp, Pred, Sort, Substitution, Term, Var};

/// Instantiations per quantified formula beyond which blind enumeration
/// gives way to matching against known formulas.
pub(crate) const ENUMERATION_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum BoundKind {
    Rounds,
    Depth,
    TermDepth,
    Budget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub rounds: usize,
    pub added: usize,
    /// True when some bound stopped saturation short of a fixpoint.
    pub partial: bool,
    pub exceeded: BTreeSet<BoundKind>,
}

impl KnowledgeBase {
    /// Saturate a copy; the original is untouched.
    pub fn saturated(&self, bounds: &ProverBounds) -> (KnowledgeBase, SaturationReport) {
        let mut kb = self.clone();
        let report = saturate(&mut kb, bounds);
        (kb, report)
    }
}

/// Apply every rule until nothing new is derived or a bound is reached.
/// Each round only uses judgments present when the round began.
pub fn saturate(kb: &mut KnowledgeBase, bounds: &ProverBounds) -> SaturationReport {
    saturate_with(kb, bounds, true)
}

/// Saturation where universals are only instantiated by matching known
/// formulas when `enumerate` is false. The result is never marked complete
/// in that mode.
pub(crate) fn saturate_with(kb: &mut KnowledgeBase, bounds: &ProverBounds, enumerate: bool) -> SaturationReport {
    let start = Instant::now();
    let mut report = SaturationReport::default();
    loop {
        if start.elapsed() > bounds.budget {
            report.exceeded.insert(BoundKind::Budget);
            break;
        }
        if report.rounds >= bounds.max_rounds {
            report.exceeded.insert(BoundKind::Rounds);
            break;
        }
        let limit = kb.entries.len();
        let mut round = Round::new(kb, bounds, limit, start);
        round.enumerate = enumerate;
        let (steps, instantiated, timed_out) = round.run();
        kb.instantiated.extend(instantiated);
        kb.delta_start = limit;

        let mut added = 0;
        for s in steps {
            if s.conclusion.nesting() > bounds.max_depth {
                report.exceeded.insert(BoundKind::Depth);
                continue;
            }
            if s.conclusion.formula.max_term_depth() > bounds.max_term_depth {
                report.exceeded.insert(BoundKind::TermDepth);
                continue;
            }
            if !s.premises.iter().all(|p| kb.contains(p)) {
                continue;
            }
            if kb.insert_step(s) {
                added += 1;
            }
        }
        report.rounds += 1;
        report.added += added;
        kb.generation += 1;
        log::debug!("round {}: {} new judgments", report.rounds, added);
        if timed_out {
            report.exceeded.insert(BoundKind::Budget);
            break;
        }
        if added == 0 {
            // A round that derives nothing leaves nothing new for the next.
            report.exceeded.remove(&BoundKind::Rounds);
            break;
        }
    }
    report.partial = !report.exceeded.is_empty();
    kb.complete = enumerate && !report.partial;
    report
}

struct Round<'a> {
    kb: &'a KnowledgeBase,
    bounds: &'a ProverBounds,
    limit: usize,
    start: Instant,
    search: GoalSearch<'a>,
    /// Ground atoms, utility atoms and modal formulas seen anywhere, by head.
    targets: BTreeMap<String, Vec<Formula>>,
    universe: BTreeMap<Sort, Vec<Term>>,
    enumerate: bool,
}

fn head_key(f: &Formula) -> Option<String> {
    match f {
        Formula::Atom {
            pred: Pred::Sym(p),
            args,
        } => Some(format!("{p}/{}", args.len())),
        Formula::Modal { op, .. } => Some(op.keyword().to_string()),
        Formula::Utility(_) => Some("nu".to_string()),
        Formula::Ought { .. } => Some("ought".to_string()),
        Formula::Trait { .. } => Some("trait".to_string()),
        _ => None,
    }
}

fn is_leaf(f: &Formula) -> bool {
    head_key(f).is_some()
}

impl<'a> Round<'a> {
    fn new(kb: &'a KnowledgeBase, bounds: &'a ProverBounds, limit: usize, start: Instant) -> Self {
        let mut targets: BTreeMap<String, BTreeSet<Formula>> = BTreeMap::new();
        let sources = kb.entries[..limit]
            .iter()
            .map(|(j, _)| &j.formula)
            .chain(kb.hints.iter());
        for f in sources {
            f.visit(&mut |g| {
                if is_leaf(g) && g.free_vars().is_empty() && !g.has_pred_vars() {
                    targets.entry(head_key(g).unwrap()).or_default().insert(g.clone());
                }
            });
        }
        Round {
            kb,
            bounds,
            limit,
            start,
            search: GoalSearch::new(kb, limit, bounds.max_depth, bounds.max_term_depth),
            targets: targets
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
            universe: BTreeMap::new(),
            enumerate: true,
        }
    }

    fn present(&self, j: &Judgment) -> bool {
        self.kb.position(j).is_some_and(|i| i < self.limit)
    }

    fn run(mut self) -> (Vec<Step>, Vec<(usize, Substitution)>, bool) {
        let mut out = Vec::new();
        let mut instantiated = Vec::new();
        let kb = self.kb;
        let delta = kb.delta_start;
        for i in 0..self.limit {
            if i % 256 == 0 && self.start.elapsed() > self.bounds.budget {
                return (out, instantiated, true);
            }
            let (j, _) = &kb.entries[i];
            let is_new = i >= delta;
            if is_new {
                self.single_premise(j, &mut out);
            }
            self.implications(j, &mut out);
            self.obligation(j, &mut out);
            if matches!(j.formula, Formula::Forall(..)) {
                self.forall(i, j, &mut out, &mut instantiated);
            }
            if j.formula.has_pred_vars() {
                self.schema(i, j, &mut out, &mut instantiated);
            }
        }
        (out, instantiated, false)
    }

    fn single_premise(&self, j: &Judgment, out: &mut Vec<Step>) {
        let ctx = &j.context;
        match &j.formula {
            Formula::And(xs) => {
                for x in xs {
                    out.push(Step::new(
                        Judgment::new(ctx.clone(), x.clone()),
                        Rule::AndElim,
                        vec![j.clone()],
                    ));
                }
            }
            Formula::Modal {
                op: ModalOp::Says,
                agents,
                time,
                body,
            } if agents.len() == 2 => {
                let (s, h) = (&agents[0], &agents[1]);
                let inner = Formula::believes(s.clone(), time.clone(), (**body).clone());
                let f = Formula::believes(h.clone(), time.clone(), inner);
                out.push(Step::new(
                    Judgment::new(ctx.clone(), f),
                    Rule::SaysBelief,
                    vec![j.clone()],
                ));
            }
            f => {
                if let Some((a, t, body)) = KnowledgeBase::is_belief_op(f) {
                    if ctx.len() < self.bounds.max_depth {
                        let mut inner = ctx.clone();
                        inner.push((a.clone(), t));
                        out.push(Step::new(
                            Judgment::new(inner, body.clone()),
                            Rule::Assume,
                            vec![j.clone()],
                        ));
                    }
                }
            }
        }
        if let Some(((a, t1), outer)) = ctx.split_last() {
            for t2 in (t1 + 1)..=self.kb.horizon {
                let f = Formula::believes(a.clone(), Term::Int(t2), j.formula.clone());
                out.push(Step::new(
                    Judgment::new(outer.to_vec(), f),
                    Rule::BeliefClosure,
                    vec![j.clone()],
                ));
            }
        }
    }

    fn detach(&self, j: &Judgment, from: &Formula, to: &Formula, rule: Rule, out: &mut Vec<Step>) {
        let concl = Judgment::new(j.context.clone(), to.clone());
        if self.kb.contains(&concl) {
            return;
        }
        let mut steps = Vec::new();
        if self.search.establish(&j.context, from, &mut steps) {
            out.extend(steps);
            out.push(Step::new(
                concl,
                rule,
                vec![j.clone(), Judgment::new(j.context.clone(), from.clone())],
            ));
        }
    }

    fn implications(&self, j: &Judgment, out: &mut Vec<Step>) {
        match &j.formula {
            Formula::Implies(a, b) => self.detach(j, a, b, Rule::ModusPonens, out),
            Formula::Iff(a, b) => {
                self.detach(j, a, b, Rule::IffElim, out);
                self.detach(j, b, a, Rule::IffElim, out);
            }
            _ => {}
        }
    }

    fn obligation(&self, j: &Judgment, out: &mut Vec<Step>) {
        let Formula::Ought {
            agent,
            time,
            condition,
            action,
        } = &j.formula
        else {
            return;
        };
        let ctx = &j.context;
        let believes_cond = Judgment::new(
            ctx.clone(),
            Formula::believes(agent.clone(), time.clone(), (**condition).clone()),
        );
        let believes_ought = Judgment::new(
            ctx.clone(),
            Formula::believes(agent.clone(), time.clone(), j.formula.clone()),
        );
        if self.present(&believes_cond) && self.present(&believes_ought) {
            let intends = Formula::intends(agent.clone(), time.clone(), (**action).clone());
            let concl = Judgment::new(ctx.clone(), Formula::knows(agent.clone(), time.clone(), intends));
            if !self.kb.contains(&concl) {
                out.push(Step::new(
                    concl,
                    Rule::OughtIntention,
                    vec![believes_cond, believes_ought, j.clone()],
                ));
            }
        }
    }

    fn universe(&mut self, sort: &Sort) -> &[Term] {
        if !self.universe.contains_key(sort) {
            let u = self.kb.universe(sort, self.bounds.max_term_depth);
            self.universe.insert(sort.clone(), u);
        }
        &self.universe[sort]
    }

    /// Extend `partial` to every assignment of the remaining variables,
    /// unless that would exceed the enumeration cap.
    fn complete(&mut self, vars: &[Var], partial: Substitution, out: &mut BTreeSet<Substitution>) {
        let open: Vec<&Var> = vars.iter().filter(|v| partial.get(v).is_none()).collect();
        if !self.enumerate && !open.is_empty() {
            return;
        }
        let domains: Vec<Vec<Term>> = open.iter().map(|v| self.universe(&v.sort).to_vec()).collect();
        let product = domains
            .iter()
            .try_fold(1usize, |acc, d| acc.checked_mul(d.len()))
            .unwrap_or(usize::MAX);
        if product > ENUMERATION_CAP || product == 0 {
            return;
        }
        let mut stack = vec![partial];
        for (v, dom) in open.iter().zip(&domains) {
            let mut next = Vec::with_capacity(stack.len() * dom.len());
            for s in &stack {
                for t in dom {
                    let mut s2 = s.clone();
                    s2.bind((*v).clone(), t.clone());
                    next.push(s2);
                }
            }
            stack = next;
        }
        out.extend(stack);
    }

    fn forall(
        &mut self,
        idx: usize,
        j: &Judgment,
        out: &mut Vec<Step>,
        instantiated: &mut Vec<(usize, Substitution)>,
    ) {
        let mut vars = Vec::new();
        let mut body = &j.formula;
        while let Formula::Forall(v, b) = body {
            vars.push(v.clone());
            body = b;
        }
        let prefix: BTreeSet<&Var> = vars.iter().collect();
        let mut patterns = Vec::new();
        body.visit(&mut |g| {
            if is_leaf(g) && g.free_vars().iter().any(|v| prefix.contains(v)) {
                patterns.push(g.clone());
            }
        });

        let mut candidates = BTreeSet::new();
        let mut whole = Vec::new();
        for p in &patterns {
            let Some(key) = head_key(p) else { continue };
            let targets = self.targets.get(&key).cloned().unwrap_or_default();
            for t in &targets {
                let Some(m) = match_formula(p, t) else { continue };
                let mut s = Substitution::new();
                for v in &vars {
                    if let Some(term) = m.get(v) {
                        s.bind(v.clone(), term.clone());
                    }
                }
                if !s.is_empty() && respects_sorts(&s, &self.kb.signature) {
                    self.complete(&vars, s, &mut candidates);
                }
            }
        }
        // Whole-body matches against parts of the goal.
        for h in &self.kb.hints {
            h.visit(&mut |g| {
                if !g.free_vars().is_empty() {
                    return;
                }
                if let Some(m) = match_formula(body, g) {
                    let mut s = Substitution::new();
                    for v in &vars {
                        if let Some(term) = m.get(v) {
                            s.bind(v.clone(), term.clone());
                        }
                    }
                    if respects_sorts(&s, &self.kb.signature) {
                        whole.push(s);
                    }
                }
            });
        }
        for s in whole {
            self.complete(&vars, s, &mut candidates);
        }
        self.complete(&vars, Substitution::new(), &mut candidates);

        for s in candidates {
            if s.bindings().any(|(_, t)| t.depth() > self.bounds.max_term_depth) {
                continue;
            }
            let key = (idx, s.clone());
            if self.kb.instantiated.contains(&key) {
                continue;
            }
            let concl = Judgment::new(j.context.clone(), s.apply(body));
            instantiated.push(key);
            if self.kb.contains(&concl) {
                continue;
            }
            out.push(Step::new(concl, Rule::ForallElim, vec![j.clone()]).with_bindings(s));
        }
    }

    fn schema(
        &mut self,
        idx: usize,
        j: &Judgment,
        out: &mut Vec<Step>,
        instantiated: &mut Vec<(usize, Substitution)>,
    ) {
        let mut options: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        j.formula.visit(&mut |g| {
            if let Formula::Atom {
                pred: Pred::Var(p),
                args,
            } = g
            {
                let entry = options.entry(p.clone()).or_default();
                for (key, targets) in &self.targets {
                    if !key.ends_with(&format!("/{}", args.len())) {
                        continue;
                    }
                    for t in targets {
                        if let Some(m) = match_formula(g, t) {
                            if let Some(sym) = m.get_pred(p) {
                                entry.insert(sym.to_string());
                            }
                        }
                    }
                }
            }
        });
        let mut combos = vec![Substitution::new()];
        for (p, syms) in &options {
            let mut next = Vec::new();
            for s in &combos {
                for sym in syms {
                    let mut s2 = s.clone();
                    s2.bind_pred(p, sym);
                    next.push(s2);
                }
            }
            combos = next;
            if combos.len() > ENUMERATION_CAP {
                return;
            }
        }
        for s in combos {
            if s.is_empty() {
                continue;
            }
            let key = (idx, s.clone());
            if self.kb.instantiated.contains(&key) {
                continue;
            }
            instantiated.push(key);
            let f = s.apply(&j.formula);
            if check_sorts(&f, &self.kb.signature).is_err() {
                continue;
            }
            let concl = Judgment::new(j.context.clone(), f);
            if !self.kb.contains(&concl) {
                out.push(Step::new(concl, Rule::SchemaInst, vec![j.clone()]).with_bindings(s));
            }
        }
    }
}
