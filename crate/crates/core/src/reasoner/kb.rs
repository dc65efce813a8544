use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::oracle::{ScenarioOracle, UtilityOracle};
use crate::kernel::{canonical_form, sort_of, Formula, ModalOp, Signature, Sort, Substitution, Term};
use crate::syntax::{print_formula, print_term, Scenario};

/// A stack of belief contexts: `[(a1, t1), ..., (ak, tk)]` stands for
/// `Believes(a1, t1, ... Believes(ak, tk, ·))`.
pub type Context = Vec<(Term, i64)>;

/// A formula asserted inside a (possibly empty) belief context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Judgment {
    pub context: Context,
    pub formula: Formula,
}

impl Judgment {
    pub fn top(formula: Formula) -> Self {
        Judgment {
            context: Vec::new(),
            formula,
        }
    }

    pub fn new(context: Context, formula: Formula) -> Self {
        Judgment { context, formula }
    }

    /// The equivalent formula with every context level written as `Believes`.
    pub fn to_formula(&self) -> Formula {
        self.context
            .iter()
            .rev()
            .fold(self.formula.clone(), |acc, (a, t)| {
                Formula::believes(a.clone(), Term::Int(*t), acc)
            })
    }

    /// Context length plus the epistemic nesting of the formula.
    pub fn nesting(&self) -> usize {
        self.context.len() + epistemic_depth(&self.formula)
    }

    pub(crate) fn canonical(&self) -> Judgment {
        Judgment {
            context: self.context.clone(),
            formula: canonical_form(&self.formula),
        }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            return f.write_str(&print_formula(&self.formula));
        }
        let ctx: Vec<String> = self
            .context
            .iter()
            .map(|(a, t)| format!("{}@{}", print_term(a), t))
            .collect();
        write!(f, "[{}] {}", ctx.join(" "), print_formula(&self.formula))
    }
}

/// Nesting of agent-indexed modal operators. `Says` counts as one level:
/// a report turns into beliefs one level at a time.
pub fn epistemic_depth(f: &Formula) -> usize {
    let below = f
        .children()
        .into_iter()
        .map(epistemic_depth)
        .max()
        .unwrap_or(0);
    match f {
        Formula::Modal { .. } => below + 1,
        _ => below,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    Axiom,
    /// Open a belief: `(P, B(a,t,φ))` gives `(P+(a,t), φ)`.
    Assume,
    AndElim,
    ModusPonens,
    IffElim,
    ForallElim,
    /// Instantiate predicate variables with predicate symbols.
    SchemaInst,
    /// Beliefs persist into later moments, closed under derivation.
    BeliefClosure,
    /// What a speaker says to a hearer, the hearer believes the speaker believes.
    SaysBelief,
    /// Believed, applicable obligations become known intentions.
    OughtIntention,
    AndIntro,
    OrIntro,
    ExistsIntro,
    CountIntro,
    /// Moment order, equality and the unique-names assumption.
    Native,
    UtilityEval,
    /// A formula established inside context `(a,t)` is believed by `a` at `t`.
    BeliefIntro,
    Admiration,
    ExemplarStatus,
    TraitIntro,
    LearnTrait,
    TraitFiring,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::Assume => "assume",
            Rule::AndElim => "and-elim",
            Rule::ModusPonens => "modus-ponens",
            Rule::IffElim => "iff-elim",
            Rule::ForallElim => "forall-elim",
            Rule::SchemaInst => "schema-inst",
            Rule::BeliefClosure => "belief-closure",
            Rule::SaysBelief => "says-belief",
            Rule::OughtIntention => "ought-intention",
            Rule::AndIntro => "and-intro",
            Rule::OrIntro => "or-intro",
            Rule::ExistsIntro => "exists-intro",
            Rule::CountIntro => "count-intro",
            Rule::Native => "native",
            Rule::UtilityEval => "utility-eval",
            Rule::BeliefIntro => "belief-intro",
            Rule::Admiration => "admiration",
            Rule::ExemplarStatus => "exemplar",
            Rule::TraitIntro => "trait-intro",
            Rule::LearnTrait => "learn-trait",
            Rule::TraitFiring => "trait-firing",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a judgment entered the knowledge base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub premises: Vec<Judgment>,
    /// Instantiation used by quantifier and schema rules.
    pub bindings: Substitution,
}

impl Derivation {
    pub fn axiom() -> Self {
        Derivation {
            rule: Rule::Axiom,
            premises: Vec::new(),
            bindings: Substitution::new(),
        }
    }
}

/// One rule application of a proof trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub conclusion: Judgment,
    pub rule: Rule,
    pub premises: Vec<Judgment>,
    pub bindings: Substitution,
}

impl Step {
    pub fn new(conclusion: Judgment, rule: Rule, premises: Vec<Judgment>) -> Self {
        Step {
            conclusion,
            rule,
            premises,
            bindings: Substitution::new(),
        }
    }

    pub fn with_bindings(mut self, s: Substitution) -> Self {
        self.bindings = s;
        self
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  by {}", self.conclusion, self.rule)?;
        if !self.bindings.is_empty() {
            write!(f, " {}", self.bindings)?;
        }
        if !self.premises.is_empty() {
            let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
            write!(f, "  from {}", ps.join("; "))?;
        }
        Ok(())
    }
}

/// A monotonically growing set of judgments with their derivations.
#[derive(Clone)]
pub struct KnowledgeBase {
    pub(crate) signature: Signature,
    pub(crate) horizon: i64,
    pub(crate) entries: Vec<(Judgment, Derivation)>,
    index: HashMap<Judgment, usize>,
    by_context: BTreeMap<Context, Vec<usize>>,
    pub(crate) hints: Vec<Formula>,
    pub(crate) oracle: Option<Arc<dyn UtilityOracle>>,
    /// Entries at or beyond this index were added by the last round.
    pub(crate) delta_start: usize,
    pub(crate) generation: u64,
    pub(crate) complete: bool,
    pub(crate) instantiated: BTreeSet<(usize, Substitution)>,
}

impl fmt::Debug for KnowledgeBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KnowledgeBase")
            .field("judgments", &self.entries.len())
            .field("horizon", &self.horizon)
            .field("generation", &self.generation)
            .finish()
    }
}

impl KnowledgeBase {
    pub fn new(signature: Signature, horizon: i64) -> Self {
        KnowledgeBase {
            signature,
            horizon,
            entries: Vec::new(),
            index: HashMap::new(),
            by_context: BTreeMap::new(),
            hints: Vec::new(),
            oracle: None,
            delta_start: 0,
            generation: 0,
            complete: false,
            instantiated: BTreeSet::new(),
        }
    }

    /// The scenario's facts as axioms, with ν evaluated from its causal laws.
    pub fn from_scenario(scn: &Scenario) -> Self {
        let mut kb = KnowledgeBase::new(scn.signature.clone(), scn.config.horizon)
            .with_oracle(Arc::new(ScenarioOracle::new(scn.clone())));
        for f in &scn.facts {
            kb.add_axiom(f.clone());
        }
        kb
    }

    pub fn with_oracle(mut self, oracle: Arc<dyn UtilityOracle>) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn oracle(&self) -> Option<&dyn UtilityOracle> {
        self.oracle.as_deref()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn horizon(&self) -> i64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of saturation rounds run so far.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// Whether the last saturation reached a fixpoint within its bounds.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn add_axiom(&mut self, f: Formula) -> bool {
        self.insert(Judgment::top(f), Derivation::axiom())
    }

    pub fn add_axiom_in(&mut self, context: Context, f: Formula) -> bool {
        self.insert(Judgment::new(context, f), Derivation::axiom())
    }

    /// Record a judgment produced outside saturation (e.g. by the virtue layer).
    pub fn assert_derived(
        &mut self,
        j: Judgment,
        rule: Rule,
        premises: Vec<Judgment>,
        bindings: Substitution,
    ) -> bool {
        self.insert(
            j,
            Derivation {
                rule,
                premises,
                bindings,
            },
        )
    }

    pub(crate) fn insert_step(&mut self, s: Step) -> bool {
        self.assert_derived(s.conclusion, s.rule, s.premises, s.bindings)
    }

    pub(crate) fn insert(&mut self, j: Judgment, d: Derivation) -> bool {
        let key = j.canonical();
        if self.index.contains_key(&key) {
            return false;
        }
        let idx = self.entries.len();
        self.index.insert(key, idx);
        self.by_context.entry(j.context.clone()).or_default().push(idx);
        self.entries.push((j, d));
        self.complete = false;
        true
    }

    pub(crate) fn position(&self, j: &Judgment) -> Option<usize> {
        self.index.get(&j.canonical()).copied()
    }

    pub fn contains(&self, j: &Judgment) -> bool {
        self.position(j).is_some()
    }

    pub fn contains_formula(&self, f: &Formula) -> bool {
        self.contains(&Judgment::top(f.clone()))
    }

    /// The stored judgment alpha-equivalent to `j`, with its derivation.
    pub fn get(&self, j: &Judgment) -> Option<(&Judgment, &Derivation)> {
        self.position(j).map(|i| (&self.entries[i].0, &self.entries[i].1))
    }

    pub fn judgments(&self) -> impl Iterator<Item = (&Judgment, &Derivation)> {
        self.entries.iter().map(|(j, d)| (j, d))
    }

    pub fn axioms(&self) -> Vec<Judgment> {
        self.entries
            .iter()
            .filter(|(_, d)| d.rule == Rule::Axiom)
            .map(|(j, _)| j.clone())
            .collect()
    }

    pub(crate) fn context_indices(&self, ctx: &[(Term, i64)]) -> &[usize] {
        self.by_context.get(ctx).map_or(&[], Vec::as_slice)
    }

    /// Formulas asserted in exactly `ctx`.
    pub fn in_context<'a>(&'a self, ctx: &[(Term, i64)]) -> impl Iterator<Item = &'a Formula> + 'a {
        self.context_indices(ctx)
            .iter()
            .map(move |&i| &self.entries[i].0.formula)
    }

    pub fn contexts(&self) -> impl Iterator<Item = &Context> {
        self.by_context.keys()
    }

    /// Formulas that guide instantiation during saturation, typically the
    /// goal of a proof attempt.
    pub fn add_hint(&mut self, f: Formula) {
        if !self.hints.contains(&f) {
            self.hints.push(f);
            self.complete = false;
        }
    }

    /// Steps leading to `j`, premises first. Axioms are not listed.
    pub fn trace_of(&self, j: &Judgment) -> Vec<Step> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        if let Some(i) = self.position(j) {
            self.collect_trace(i, &mut seen, &mut out);
        }
        out
    }

    fn collect_trace(&self, i: usize, seen: &mut BTreeSet<usize>, out: &mut Vec<Step>) {
        if !seen.insert(i) {
            return;
        }
        let (j, d) = &self.entries[i];
        if d.rule == Rule::Axiom {
            return;
        }
        for p in &d.premises {
            if let Some(pi) = self.position(p) {
                self.collect_trace(pi, seen, out);
            }
        }
        out.push(Step {
            conclusion: j.clone(),
            rule: d.rule,
            premises: d.premises.clone(),
            bindings: d.bindings.clone(),
        });
    }

    /// Candidate ground terms of sort `sort`: declared constants, moments up
    /// to the horizon, and ground subterms of the judgments and hints.
    pub fn universe(&self, sort: &Sort, max_term_depth: usize) -> Vec<Term> {
        let sig = &self.signature;
        let mut out: BTreeSet<Term> = sig
            .constants_of(sort)
            .map(Term::constant)
            .collect();
        if sig.is_subsort(&Sort::moment(), sort) {
            out.extend((0..=self.horizon).map(Term::Int));
        }
        let sources = self
            .entries
            .iter()
            .map(|(j, _)| &j.formula)
            .chain(self.hints.iter());
        for f in sources {
            for t in f.ground_subterms() {
                if t.depth() <= max_term_depth
                    && sort_of(&t, sig).is_ok_and(|s| sig.is_subsort(&s, sort))
                {
                    out.insert(t);
                }
            }
        }
        for (j, _) in &self.entries {
            for (a, t) in &j.context {
                if sort_of(a, sig).is_ok_and(|s| sig.is_subsort(&s, sort)) {
                    out.insert(a.clone());
                }
                if sig.is_subsort(&Sort::moment(), sort) {
                    out.insert(Term::Int(*t));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Largest epistemic nesting over all judgments.
    pub fn max_nesting(&self) -> usize {
        self.entries
            .iter()
            .map(|(j, _)| j.nesting())
            .max()
            .unwrap_or(0)
    }

    /// Believed formulas of `agent` at `t` in the top-level context.
    pub fn beliefs_of<'a>(&'a self, agent: &Term, t: i64) -> impl Iterator<Item = &'a Formula> + 'a {
        self.in_context(&[(agent.clone(), t)])
    }

    pub(crate) fn is_belief_op(f: &Formula) -> Option<(&Term, i64, &Formula)> {
        match f {
            Formula::Modal {
                op: ModalOp::Believes,
                agents,
                time,
                body,
            } if agents.len() == 1 && agents[0].is_ground() => {
                time.as_int().map(|t| (&agents[0], t, body.as_ref()))
            }
            _ => None,
        }
    }
}
