//! The `.scn` scenario format: declarations, causal laws, utilities, facts
//! and queries as a sequence of top-level forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::time::Duration;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use super::formula::{
    formula_from_sexp_checked, parse_int, parse_rational, parse_symbol, print_formula,
    print_rational, print_term, term_from_sexp_checked, ParseError,
};
use super::sexp::{parse_sexps, Sexp, SyntaxError};
use crate::eventcalc::{CausalLaw, CausalModel, LawKind, TimeGuard, UtilityTable};
use crate::generalize::unify_all;
use crate::kernel::{Formula, Signature, Sort, Span, Substitution, Term, Var};
use crate::reasoner::ProverBounds;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub horizon: i64,
    /// Observations needed before a trait can be learned.
    pub m: usize,
    /// Admirations needed before someone counts as an exemplar.
    pub n: usize,
    pub bounds: ProverBounds,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            horizon: 10,
            m: 2,
            n: 2,
            bounds: ProverBounds::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Query {
    pub agent: String,
    pub time: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagnosticKind {
    Syntax,
    Sort,
    Validation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
    pub span: Option<Span>,
}

impl Diagnostic {
    fn validation(message: impl Into<String>, span: Option<Span>) -> Self {
        Diagnostic {
            kind: DiagnosticKind::Validation,
            message: message.into(),
            span,
        }
    }
}

impl From<SyntaxError> for Diagnostic {
    fn from(e: SyntaxError) -> Self {
        Diagnostic {
            kind: DiagnosticKind::Syntax,
            message: e.message,
            span: Some(e.span),
        }
    }
}

impl From<ParseError> for Diagnostic {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Syntax(s) => s.into(),
            ParseError::Sort(s) => Diagnostic {
                kind: DiagnosticKind::Sort,
                message: s.to_string(),
                span: s.location,
            },
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Sort => "sort error",
            DiagnosticKind::Validation => "validation error",
        };
        match self.span {
            Some(sp) => write!(f, "{sp}: {kind}: {}", self.message),
            None => write!(f, "{kind}: {}", self.message),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{}", render(.0))]
    Invalid(Vec<Diagnostic>),
}

fn render(ds: &[Diagnostic]) -> String {
    ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

impl ScenarioError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            ScenarioError::Invalid(ds) => ds,
            ScenarioError::Io { .. } => &[],
        }
    }
}

/// A fully validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub signature: Signature,
    pub config: Config,
    pub laws: Vec<CausalLaw>,
    /// The world's μ.
    pub utilities: UtilityTable,
    /// Private μ tables, keyed by agent.
    pub agent_utilities: BTreeMap<String, UtilityTable>,
    pub facts: Vec<Formula>,
    pub queries: Vec<Query>,
}

impl Scenario {
    /// Causal laws and μ as they are in the world.
    pub fn world_model(&self) -> CausalModel<'_> {
        CausalModel {
            signature: &self.signature,
            laws: self.laws.iter().filter(|l| l.owner.is_none()).collect(),
            utilities: &self.utilities,
            horizon: self.config.horizon,
        }
    }

    /// Causal laws and μ as `agent` believes them to be: shared laws plus its
    /// private ones, and its private μ when it has one.
    pub fn agent_model(&self, agent: &str) -> CausalModel<'_> {
        CausalModel {
            signature: &self.signature,
            laws: self
                .laws
                .iter()
                .filter(|l| l.owner.as_deref().is_none_or(|o| o == agent))
                .collect(),
            utilities: self.agent_utilities.get(agent).unwrap_or(&self.utilities),
            horizon: self.config.horizon,
        }
    }

    /// Ground top-level `happens` facts, in source order.
    pub fn happenings(&self) -> Vec<(Term, i64)> {
        self.facts
            .iter()
            .filter_map(|f| {
                let args = f.atom_args("happens")?;
                let t = args[1].as_int()?;
                args[0].is_ground().then(|| (args[0].clone(), t))
            })
            .collect()
    }

    pub fn initially_holds(&self, fluent: &Term) -> bool {
        self.facts.iter().any(|f| {
            f.atom_args("holds")
                .is_some_and(|a| &a[0] == fluent && a[1].as_int() == Some(0))
        })
    }

    /// Moments at which `agent` is pleased.
    pub fn pleased_times(&self, agent: &str) -> BTreeSet<i64> {
        self.facts
            .iter()
            .filter_map(|f| {
                let a = f.atom_args("pleased")?;
                (a[0] == Term::constant(agent)).then(|| a[1].as_int()).flatten()
            })
            .collect()
    }

    pub fn agents(&self) -> Vec<String> {
        self.signature
            .constants_of(&Sort::agent())
            .map(str::to_string)
            .collect()
    }

    /// Canonical source text; loading it yields an equal scenario.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        out.push_str(&format!(
            "(config (horizon {}) (m {}) (n {}) (max-rounds {}) (max-depth {}) (max-term-depth {}) (budget-ms {}))\n",
            c.horizon,
            c.m,
            c.n,
            c.bounds.max_rounds,
            c.bounds.max_depth,
            c.bounds.max_term_depth,
            c.bounds.budget.as_millis()
        ));
        let sig = &self.signature;
        for s in sig.sorts().filter(|s| !Signature::is_builtin_sort(s)) {
            match sig.parent(s) {
                Some(p) => out.push_str(&format!("(sort {s} {p})\n")),
                None => out.push_str(&format!("(sort {s})\n")),
            }
        }
        for (name, sort) in sig.constants() {
            out.push_str(&format!("(constant {name} {sort})\n"));
        }
        for (name, f) in sig
            .functions()
            .filter(|(n, _)| !Signature::is_builtin_function(n))
        {
            let args: Vec<_> = f.args.iter().map(Sort::name).collect();
            out.push_str(&format!("(function {name} ({}) {})\n", args.join(" "), f.result));
        }
        for (name, args) in sig
            .predicates()
            .filter(|(n, _)| !Signature::is_builtin_predicate(n))
        {
            let args: Vec<_> = args.iter().map(Sort::name).collect();
            out.push_str(&format!("(predicate {name} ({}))\n", args.join(" ")));
        }
        for l in &self.laws {
            out.push_str(&format!(
                "(law {} {} {}{}{})\n",
                l.kind.keyword(),
                print_term(&l.event),
                print_term(&l.fluent),
                guard_text(&l.guard),
                l.owner
                    .as_ref()
                    .map_or(String::new(), |o| format!(" :agent {o}"))
            ));
        }
        let tables = std::iter::once((None, &self.utilities))
            .chain(self.agent_utilities.iter().map(|(a, t)| (Some(a), t)));
        for (owner, table) in tables {
            for (f, guard, v) in table.iter() {
                out.push_str(&format!(
                    "(utility {} {}{}{})\n",
                    print_term(f),
                    print_rational(&v),
                    guard_text(&guard),
                    owner.map_or(String::new(), |o| format!(" :agent {o}"))
                ));
            }
        }
        for f in &self.facts {
            out.push_str(&print_formula(f));
            out.push('\n');
        }
        for q in &self.queries {
            out.push_str(&format!("(query {} {})\n", q.agent, q.time));
        }
        out
    }
}

fn guard_text(g: &TimeGuard) -> String {
    let mut s = String::new();
    if let Some(f) = g.from {
        s.push_str(&format!(" :from {f}"));
    }
    if let Some(u) = g.until {
        s.push_str(&format!(" :until {u}"));
    }
    s
}

const DECLARATIONS: &[&str] = &[
    "config",
    "sort",
    "constant",
    "function",
    "predicate",
    "law",
    "utility",
    "query",
];

struct Loader {
    diags: Vec<Diagnostic>,
}

type Res<T> = Result<T, Diagnostic>;

fn shape(s: &Sexp, msg: &str) -> Diagnostic {
    Diagnostic {
        kind: DiagnosticKind::Syntax,
        message: msg.to_string(),
        span: Some(s.span),
    }
}

fn sig_err(e: crate::kernel::SignatureError, s: &Sexp) -> Diagnostic {
    Diagnostic::validation(e.to_string(), Some(s.span))
}

/// Parse `:key value` pairs.
fn options<'a>(s: &Sexp, rest: &'a [Sexp], allowed: &[&str]) -> Res<BTreeMap<String, &'a Sexp>> {
    let mut out = BTreeMap::new();
    let mut it = rest.iter();
    while let Some(k) = it.next() {
        let key = k
            .atom()
            .filter(|a| a.starts_with(':'))
            .ok_or_else(|| shape(k, &format!("expected an option such as `{}`", allowed[0])))?;
        if !allowed.contains(&key) {
            return Err(shape(
                k,
                &format!("unknown option `{key}`; expected one of {}", allowed.join(", ")),
            ));
        }
        let v = it
            .next()
            .ok_or_else(|| shape(s, &format!("option `{key}` needs a value")))?;
        if out.insert(key.to_string(), v).is_some() {
            return Err(shape(k, &format!("option `{key}` given twice")));
        }
    }
    Ok(out)
}

fn guard_from(s: &Sexp, opts: &BTreeMap<String, &Sexp>) -> Res<TimeGuard> {
    let get = |k: &str| opts.get(k).map(|v| parse_int(v)).transpose();
    let at = get(":at")?;
    let from = get(":from")?;
    let until = get(":until")?;
    if at.is_some() && (from.is_some() || until.is_some()) {
        return Err(shape(s, "`:at` cannot be combined with `:from` or `:until`"));
    }
    let g = match at {
        Some(t) => TimeGuard::at(t),
        None => TimeGuard { from, until },
    };
    if let (Some(f), Some(u)) = (g.from, g.until) {
        if f > u {
            return Err(Diagnostic::validation(
                format!("empty time range {f}..{u}"),
                Some(s.span),
            ));
        }
    }
    Ok(g)
}

impl Loader {
    fn note<T>(&mut self, r: Res<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(d) => {
                self.diags.push(d);
                None
            }
        }
    }

    fn config(&self, s: &Sexp, items: &[Sexp]) -> Res<Config> {
        let mut c = Config::default();
        for item in &items[1..] {
            let kv = item
                .list()
                .filter(|l| l.len() == 2)
                .ok_or_else(|| shape(item, "config entries look like `(horizon 10)`"))?;
            let key = kv[0]
                .atom()
                .ok_or_else(|| shape(&kv[0], "config key must be a symbol"))?;
            let v = parse_int(&kv[1])?;
            if v < 1 {
                return Err(Diagnostic::validation(
                    format!("`{key}` must be positive"),
                    Some(kv[1].span),
                ));
            }
            let u = v as usize;
            match key {
                "horizon" => c.horizon = v,
                "m" => c.m = u,
                "n" => c.n = u,
                "max-rounds" => c.bounds.max_rounds = u,
                "max-depth" => c.bounds.max_depth = u,
                "max-term-depth" => c.bounds.max_term_depth = u,
                "budget-ms" => c.bounds.budget = Duration::from_millis(v as u64),
                other => {
                    return Err(shape(&kv[0], &format!("unknown config key `{other}`")));
                }
            }
        }
        let _ = s;
        Ok(c)
    }

    fn sort_name(s: &Sexp) -> Res<Sort> {
        Ok(Sort::new(parse_symbol(s, "a sort name")?))
    }

    fn sorts(&mut self, sig: &mut Signature, forms: &[(&Sexp, &[Sexp])]) {
        let mut pending = Vec::new();
        for (s, items) in forms {
            if !(2..=3).contains(&items.len()) {
                self.diags
                    .push(shape(s, "expected `(sort Name)` or `(sort Name Parent)`"));
                continue;
            }
            let name = Self::sort_name(&items[1]);
            let parent = items.get(2).map(Self::sort_name).transpose();
            if let (Some(n), Some(p)) = (self.note(name), self.note(parent)) {
                pending.push((*s, n, p));
            }
        }
        // Parents may be declared after their children.
        loop {
            let before = pending.len();
            pending.retain(|(s, name, parent)| {
                let ready = parent.as_ref().is_none_or(|p| sig.has_sort(p));
                if ready {
                    if let Err(e) = sig.declare_sort(name.clone(), parent.clone()) {
                        self.diags.push(sig_err(e, s));
                    }
                }
                !ready
            });
            if pending.len() == before {
                break;
            }
        }
        for (s, name, parent) in pending {
            let parent = parent.unwrap();
            self.diags.push(Diagnostic::validation(
                format!("sort `{name}` has unknown or cyclic parent `{parent}`"),
                Some(s.span),
            ));
        }
    }

    fn sort_list(s: &Sexp) -> Res<Vec<Sort>> {
        s.list()
            .ok_or_else(|| shape(s, "expected a parenthesized list of sorts"))?
            .iter()
            .map(Self::sort_name)
            .collect()
    }

    fn declaration(&mut self, sig: &mut Signature, s: &Sexp, items: &[Sexp]) -> Res<()> {
        match items[0].atom().unwrap() {
            "constant" => {
                if items.len() < 3 {
                    return Err(shape(s, "expected `(constant name... Sort)`"));
                }
                let sort = Self::sort_name(items.last().unwrap())?;
                for n in &items[1..items.len() - 1] {
                    let name = parse_symbol(n, "a constant name")?;
                    sig.declare_constant(name, sort.clone())
                        .map_err(|e| sig_err(e, n))?;
                }
                Ok(())
            }
            "function" => {
                if items.len() != 4 {
                    return Err(shape(s, "expected `(function name (Sort...) Sort)`"));
                }
                let name = parse_symbol(&items[1], "a function name")?;
                let args = Self::sort_list(&items[2])?;
                if args.is_empty() {
                    return Err(shape(
                        &items[2],
                        "functions take at least one argument; declare a constant instead",
                    ));
                }
                let result = Self::sort_name(&items[3])?;
                sig.declare_function(name, args, result)
                    .map_err(|e| sig_err(e, s))
            }
            "predicate" => {
                if !(2..=3).contains(&items.len()) {
                    return Err(shape(s, "expected `(predicate name (Sort...))`"));
                }
                let name = parse_symbol(&items[1], "a predicate name")?;
                let args = items.get(2).map(Self::sort_list).transpose()?.unwrap_or_default();
                sig.declare_predicate(name, args).map_err(|e| sig_err(e, s))
            }
            _ => unreachable!(),
        }
    }

    fn agent(sig: &Signature, s: &Sexp) -> Res<String> {
        let name = parse_symbol(s, "an agent")?;
        match sig.constant_sort(name) {
            Some(sort) if sig.is_subsort(sort, &Sort::agent()) => Ok(name.to_string()),
            _ => Err(Diagnostic {
                kind: DiagnosticKind::Sort,
                message: format!("`{name}` is not a declared agent"),
                span: Some(s.span),
            }),
        }
    }

    fn typed_term(sig: &Signature, s: &Sexp, want: &Sort, what: &str) -> Res<Term> {
        let (t, sort) = term_from_sexp_checked(s, sig)?;
        if !sig.is_subsort(&sort, want) {
            return Err(Diagnostic {
                kind: DiagnosticKind::Sort,
                message: format!("{what} `{}` has sort {sort}, expected {want}", print_term(&t)),
                span: Some(s.span),
            });
        }
        Ok(t)
    }

    fn law(sig: &Signature, s: &Sexp, items: &[Sexp]) -> Res<CausalLaw> {
        if items.len() < 4 {
            return Err(shape(s, "expected `(law initiates|terminates EVENT FLUENT ...)`"));
        }
        let kind = match items[1].atom() {
            Some("initiates") => LawKind::Initiates,
            Some("terminates") => LawKind::Terminates,
            _ => return Err(shape(&items[1], "expected `initiates` or `terminates`")),
        };
        let event = Self::typed_term(sig, &items[2], &Sort::event(), "event")?;
        let fluent = Self::typed_term(sig, &items[3], &Sort::fluent(), "fluent")?;
        let extra: BTreeSet<Var> = fluent.vars().difference(&event.vars()).cloned().collect();
        if let Some(v) = extra.iter().next() {
            return Err(Diagnostic::validation(
                format!("fluent variable `?{}` does not occur in the event", v.name),
                Some(items[3].span),
            ));
        }
        let opts = options(s, &items[4..], &[":from", ":until", ":agent"])?;
        let guard = guard_from(s, &opts)?;
        let owner = opts.get(":agent").map(|a| Self::agent(sig, a)).transpose()?;
        Ok(CausalLaw {
            kind,
            event,
            fluent,
            guard,
            owner,
        })
    }

    fn utility(
        sig: &Signature,
        s: &Sexp,
        items: &[Sexp],
    ) -> Res<(Option<String>, Term, TimeGuard, Rational64)> {
        if items.len() < 3 {
            return Err(shape(s, "expected `(utility FLUENT VALUE ...)`"));
        }
        let fluent = Self::typed_term(sig, &items[1], &Sort::fluent(), "fluent")?;
        if !fluent.is_ground() {
            return Err(Diagnostic::validation(
                "utility keys must be ground fluents",
                Some(items[1].span),
            ));
        }
        let value = parse_rational(&items[2])?;
        let opts = options(s, &items[3..], &[":at", ":from", ":until", ":agent"])?;
        let guard = guard_from(s, &opts)?;
        let owner = opts.get(":agent").map(|a| Self::agent(sig, a)).transpose()?;
        Ok((owner, fluent, guard, value))
    }

    fn query(sig: &Signature, s: &Sexp, items: &[Sexp]) -> Res<Query> {
        if items.len() != 3 {
            return Err(shape(s, "expected `(query AGENT MOMENT)`"));
        }
        Ok(Query {
            agent: Self::agent(sig, &items[1])?,
            time: parse_int(&items[2])?,
        })
    }
}

fn rename_apart(t: &Term) -> (Term, Substitution) {
    let mut s = Substitution::new();
    for v in t.vars() {
        s.bind(
            v.clone(),
            Term::Var(Var::new(format!("{}'", v.name), v.sort.clone())),
        );
    }
    (s.apply_term(t), s)
}

fn conflicting(a: &CausalLaw, b: &CausalLaw) -> bool {
    if a.kind == b.kind || !a.guard.overlaps(&b.guard) {
        return false;
    }
    if let (Some(x), Some(y)) = (&a.owner, &b.owner) {
        if x != y {
            return false;
        }
    }
    let (be, s) = rename_apart(&b.event);
    let bf = s.apply_term(&b.fluent);
    unify_all([(&a.event, &be), (&a.fluent, &bf)]).is_some()
}

fn max_moment(f: &Formula) -> Option<i64> {
    f.ground_subterms().iter().filter_map(Term::as_int).max()
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let sexps = parse_sexps(text).map_err(|e| ScenarioError::Invalid(vec![e.into()]))?;
    let mut ld = Loader { diags: Vec::new() };

    let mut config = Config::default();
    let mut forms: BTreeMap<&str, Vec<(&Sexp, &[Sexp])>> = BTreeMap::new();
    let mut facts_src = Vec::new();
    for (i, s) in sexps.iter().enumerate() {
        let head = s.head().filter(|h| DECLARATIONS.contains(h));
        match head {
            Some("config") => {
                if i != 0 {
                    ld.diags.push(Diagnostic::validation(
                        "`config` must be the first form",
                        Some(s.span),
                    ));
                } else if let Some(c) = ld.note(ld.config(s, s.list().unwrap())) {
                    config = c;
                }
            }
            Some(h) => forms.entry(h).or_default().push((s, s.list().unwrap())),
            None => facts_src.push(s),
        }
    }

    let mut sig = Signature::new();
    let get = |k: &str| forms.get(k).cloned().unwrap_or_default();
    ld.sorts(&mut sig, &get("sort"));
    for k in ["constant", "function", "predicate"] {
        for (s, items) in get(k) {
            let r = ld.declaration(&mut sig, s, items);
            ld.note(r);
        }
    }

    let mut laws = Vec::new();
    for (s, items) in get("law") {
        if let Some(l) = ld.note(Loader::law(&sig, s, items)) {
            laws.push((s, l));
        }
    }
    for i in 0..laws.len() {
        for j in (i + 1)..laws.len() {
            if conflicting(&laws[i].1, &laws[j].1) {
                ld.diags.push(Diagnostic::validation(
                    format!(
                        "laws `{} {} {}` and `{} {} {}` can initiate and terminate the same fluent for one event",
                        laws[i].1.kind.keyword(),
                        print_term(&laws[i].1.event),
                        print_term(&laws[i].1.fluent),
                        laws[j].1.kind.keyword(),
                        print_term(&laws[j].1.event),
                        print_term(&laws[j].1.fluent),
                    ),
                    Some(laws[j].0.span),
                ));
            }
        }
    }

    let mut utilities = UtilityTable::new();
    let mut agent_utilities: BTreeMap<String, UtilityTable> = BTreeMap::new();
    let mut moments: Vec<(i64, Span)> = Vec::new();
    for (s, items) in get("utility") {
        if let Some((owner, f, guard, v)) = ld.note(Loader::utility(&sig, s, items)) {
            let table = match &owner {
                Some(a) => agent_utilities.entry(a.clone()).or_default(),
                None => &mut utilities,
            };
            if let Err(e) = table.insert(f, guard, v) {
                ld.diags.push(Diagnostic::validation(
                    format!("duplicate utility entry for `{}`", e.fluent),
                    Some(s.span),
                ));
            }
        }
    }

    let mut queries = Vec::new();
    for (s, items) in get("query") {
        if let Some(q) = ld.note(Loader::query(&sig, s, items)) {
            moments.push((q.time, s.span));
            queries.push(q);
        }
    }

    let mut facts = Vec::new();
    for s in facts_src {
        let f = match formula_from_sexp_checked(s, &sig) {
            Ok(f) => f,
            Err(e) => {
                ld.diags.push(e.into());
                continue;
            }
        };
        if !f.free_vars().is_empty() || f.has_pred_vars() {
            ld.diags.push(Diagnostic::validation(
                format!("fact `{}` has free variables", print_formula(&f)),
                Some(s.span),
            ));
            continue;
        }
        if let Some(m) = max_moment(&f) {
            moments.push((m, s.span));
        }
        if let Some(m) = f.ground_subterms().iter().filter_map(Term::as_int).min() {
            if m < 0 {
                ld.diags.push(Diagnostic::validation(
                    format!("negative moment {m}"),
                    Some(s.span),
                ));
            }
        }
        facts.push(f);
    }
    for (m, span) in moments {
        if m > config.horizon {
            ld.diags.push(Diagnostic::validation(
                format!("moment {m} lies beyond the horizon {}", config.horizon),
                Some(span),
            ));
        } else if m < 0 {
            ld.diags.push(Diagnostic::validation(
                format!("negative moment {m}"),
                Some(span),
            ));
        }
    }

    if !ld.diags.is_empty() {
        ld.diags.sort_by_key(|d| d.span);
        ld.diags.dedup();
        return Err(ScenarioError::Invalid(ld.diags));
    }
    Ok(Scenario {
        signature: sig,
        config,
        laws: laws.into_iter().map(|(_, l)| l).collect(),
        utilities,
        agent_utilities,
        facts,
        queries,
    })
}

/// Load from raw bytes. Never panics: anything that is not a valid scenario
/// produces diagnostics.
pub fn parse_scenario_bytes(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_scenario(text),
        Err(e) => Err(ScenarioError::Invalid(vec![Diagnostic {
            kind: DiagnosticKind::Syntax,
            message: format!("input is not valid UTF-8 (byte {})", e.valid_up_to()),
            span: None,
        }])),
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario_bytes(&bytes)
}
