//! Random scenario and formula generators shared by the integration suites,
//! with brute-force reference evaluators that do not go through the library.

#![allow(dead_code)]

use std::fmt::Write as _;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn guard_text(from: Option<i64>, until: Option<i64>) -> String {
    let mut s = String::new();
    if let Some(f) = from {
        let _ = write!(s, " :from {f}");
    }
    if let Some(u) = until {
        let _ = write!(s, " :until {u}");
    }
    s
}

fn admits(from: Option<i64>, until: Option<i64>, t: i64) -> bool {
    from.is_none_or(|f| f <= t) && until.is_none_or(|u| t <= u)
}

/// Which events a law applies to.
#[derive(Clone, Debug, PartialEq)]
pub enum EventPattern {
    Const(String),
    /// `action(performer, alpha)`; `None` matches any agent.
    Action { performer: Option<String>, alpha: String },
}

impl EventPattern {
    fn text(&self) -> String {
        match self {
            EventPattern::Const(e) => e.clone(),
            EventPattern::Action { performer, alpha } => {
                let who = performer.clone().unwrap_or_else(|| "?A:Agent".into());
                format!("(action {who} {alpha})")
            }
        }
    }
}

/// A concrete event: an `Event` constant or an agent performing an action type.
#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Const(String),
    Action(String, String),
}

impl Event {
    pub fn text(&self) -> String {
        match self {
            Event::Const(e) => e.clone(),
            Event::Action(b, alpha) => format!("(action {b} {alpha})"),
        }
    }

    fn matches(&self, p: &EventPattern) -> bool {
        match (self, p) {
            (Event::Const(a), EventPattern::Const(b)) => a == b,
            (Event::Action(b, alpha), EventPattern::Action { performer, alpha: pa }) => {
                alpha == pa && performer.as_ref().is_none_or(|p| p == b)
            }
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Law {
    pub initiates: bool,
    pub event: EventPattern,
    pub fluent: String,
    pub from: Option<i64>,
    pub until: Option<i64>,
    pub owner: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Mu {
    pub fluent: String,
    pub from: Option<i64>,
    pub until: Option<i64>,
    pub value: Rational64,
    pub owner: Option<String>,
}

/// Causal laws and utilities written both as scenario text and as plain data
/// for the reference evaluator.
#[derive(Clone, Debug, Default)]
pub struct Causal {
    pub horizon: i64,
    pub fluents: Vec<String>,
    pub laws: Vec<Law>,
    pub mu: Vec<Mu>,
}

impl Causal {
    /// Add `law` unless some law of the opposite kind could fire for the
    /// same event and fluent, which scenarios reject.
    fn push_law(&mut self, law: Law) {
        let key = |p: &EventPattern| match p {
            EventPattern::Const(e) => e.clone(),
            EventPattern::Action { alpha, .. } => alpha.clone(),
        };
        let clash = self
            .laws
            .iter()
            .any(|l| l.initiates != law.initiates && l.fluent == law.fluent && key(&l.event) == key(&law.event));
        if !clash {
            self.laws.push(law);
        }
    }

    pub fn source(&self) -> String {
        let mut s = String::new();
        for l in &self.laws {
            let kind = if l.initiates { "initiates" } else { "terminates" };
            let owner = l.owner.as_ref().map(|o| format!(" :agent {o}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "(law {kind} {} {}{}{owner})",
                l.event.text(),
                l.fluent,
                guard_text(l.from, l.until)
            );
        }
        for m in &self.mu {
            let owner = m.owner.as_ref().map(|o| format!(" :agent {o}")).unwrap_or_default();
            let guard = match (m.from, m.until) {
                (Some(a), Some(b)) if a == b => format!(" :at {a}"),
                (f, u) => guard_text(f, u),
            };
            let _ = writeln!(s, "(utility {} {}{guard}{owner})", m.fluent, rational(m.value));
        }
        s
    }

    /// ν(e, t) from the viewpoint of `agent` (`None` for the world), summed
    /// over every (fluent, moment) pair.
    pub fn brute_nu(&self, e: &Event, t: i64, agent: Option<&str>) -> Rational64 {
        let has_private = agent.is_some_and(|a| self.mu.iter().any(|m| m.owner.as_deref() == Some(a)));
        let law_visible = |l: &Law| l.owner.is_none() || l.owner.as_deref() == agent;
        let mu_visible = |m: &Mu| {
            if has_private {
                m.owner.as_deref() == agent
            } else {
                m.owner.is_none()
            }
        };
        let fires = |init: bool, f: &str| {
            self.laws.iter().any(|l| {
                l.initiates == init && l.fluent == f && law_visible(l) && admits(l.from, l.until, t) && e.matches(&l.event)
            })
        };
        let mut total = Rational64::from_integer(0);
        for y in (t + 1)..=self.horizon {
            for f in &self.fluents {
                let mu: Rational64 = self
                    .mu
                    .iter()
                    .filter(|m| &m.fluent == f && mu_visible(m) && admits(m.from, m.until, y))
                    .map(|m| m.value)
                    .sum();
                if fires(true, f) {
                    total += mu;
                }
                if fires(false, f) {
                    total -= mu;
                }
            }
        }
        total
    }
}

fn random_value(rng: &mut impl Rng) -> Rational64 {
    Rational64::new(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_guard(rng: &mut impl Rng, h: i64) -> (Option<i64>, Option<i64>) {
    match rng.gen_range(0..4) {
        0 => {
            let a = rng.gen_range(0..=h);
            (Some(a), Some(rng.gen_range(a..=h)))
        }
        1 => (Some(rng.gen_range(0..=h)), None),
        2 => (None, Some(rng.gen_range(0..=h))),
        _ => (None, None),
    }
}

/// Non-overlapping utility entries for one fluent.
fn random_mu(rng: &mut impl Rng, fluent: &str, h: i64, owner: Option<&str>, out: &mut Vec<Mu>) {
    if rng.gen_bool(0.3) {
        out.push(Mu {
            fluent: fluent.into(),
            from: None,
            until: None,
            value: random_value(rng),
            owner: owner.map(str::to_string),
        });
        return;
    }
    let mut y = 0;
    while y <= h {
        let end = rng.gen_range(y..=h);
        if rng.gen_bool(0.7) {
            out.push(Mu {
                fluent: fluent.into(),
                from: Some(y),
                until: Some(end),
                value: random_value(rng),
                owner: owner.map(str::to_string),
            });
        }
        y = end + 1;
    }
}

/// A scenario of `Event` constants with random laws and μ, and the events
/// and moments to evaluate ν at.
pub struct NuCase {
    pub source: String,
    pub causal: Causal,
    pub events: Vec<Event>,
}

pub fn nu_case(rng: &mut impl Rng) -> NuCase {
    let h = rng.gen_range(1..=8);
    let nf = rng.gen_range(1..=5);
    let ne = rng.gen_range(1..=4);
    let fluents: Vec<String> = (0..nf).map(|i| format!("f{i}")).collect();
    let events: Vec<Event> = (0..ne).map(|i| Event::Const(format!("e{i}"))).collect();
    let mut causal = Causal {
        horizon: h,
        fluents: fluents.clone(),
        ..Default::default()
    };
    for _ in 0..rng.gen_range(0..=8) {
        let (from, until) = random_guard(rng, h);
        causal.push_law(Law {
            initiates: rng.gen_bool(0.6),
            event: EventPattern::Const(format!("e{}", rng.gen_range(0..ne))),
            fluent: fluents.choose(rng).unwrap().clone(),
            from,
            until,
            owner: None,
        });
    }
    for f in &fluents {
        if rng.gen_bool(0.8) {
            random_mu(rng, f, h, None, &mut causal.mu);
        }
    }
    let mut source = format!("(config (horizon {h}))\n");
    let _ = writeln!(source, "(constant {} Fluent)", fluents.join(" "));
    let names: Vec<String> = events.iter().map(Event::text).collect();
    let _ = writeln!(source, "(constant {} Event)", names.join(" "));
    source.push_str(&causal.source());
    NuCase { source, causal, events }
}

/// The conjunct of the admiration condition removed from a generated case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ablation {
    None,
    Pleased,
    BelievedHappens,
    Distinct,
    Before,
    Positive,
}

impl Ablation {
    pub const ALL: [Ablation; 6] = [
        Ablation::None,
        Ablation::Pleased,
        Ablation::BelievedHappens,
        Ablation::Distinct,
        Ablation::Before,
        Ablation::Positive,
    ];
}

/// One admiration case: admirer `a` judging at `time` whether to admire
/// `performer` for `alpha` done at `action_time`.
pub struct AdmirationCase {
    pub source: String,
    pub ablation: Ablation,
    pub admirer: String,
    pub performer: String,
    pub alpha: String,
    pub action_time: i64,
    pub time: i64,
    /// ν of the action from the admirer's viewpoint, by the reference sum.
    pub nu: Rational64,
}

impl AdmirationCase {
    pub fn expected(&self) -> bool {
        self.ablation == Ablation::None
    }
}

pub fn admiration_case(rng: &mut impl Rng, ablation: Ablation) -> AdmirationCase {
    loop {
        if let Some(c) = try_admiration_case(rng, ablation) {
            return c;
        }
    }
}

fn try_admiration_case(rng: &mut impl Rng, ablation: Ablation) -> Option<AdmirationCase> {
    let h = rng.gen_range(4..=7);
    let agents = ["a", "b", "c"];
    let alphas = ["help", "share", "wave"];
    let fluents: Vec<String> = (0..rng.gen_range(2..=4)).map(|i| format!("g{i}")).collect();
    let admirer = "a";
    let performer = if ablation == Ablation::Distinct { "a" } else { *["b", "c"].choose(rng).unwrap() };
    let alpha = *alphas.choose(rng).unwrap();
    let (action_time, time) = if ablation == Ablation::Before {
        let t = rng.gen_range(1..h);
        (rng.gen_range(t..h), t)
    } else {
        let t0 = rng.gen_range(0..h - 1);
        (t0, rng.gen_range(t0 + 1..h))
    };

    let mut causal = Causal {
        horizon: h,
        fluents: fluents.clone(),
        ..Default::default()
    };
    if ablation != Ablation::Positive || rng.gen_bool(0.5) {
        for _ in 0..rng.gen_range(1..=4) {
            let (from, until) = if rng.gen_bool(0.7) { (None, None) } else { random_guard(rng, h) };
            causal.push_law(Law {
                initiates: rng.gen_bool(0.7),
                event: EventPattern::Action {
                    performer: rng.gen_bool(0.3).then(|| agents.choose(rng).unwrap().to_string()),
                    alpha: alphas.choose(rng).unwrap().to_string(),
                },
                fluent: fluents.choose(rng).unwrap().clone(),
                from,
                until,
                owner: rng.gen_bool(0.2).then(|| agents.choose(rng).unwrap().to_string()),
            });
        }
    }
    for f in &fluents {
        random_mu(rng, f, h, None, &mut causal.mu);
        if rng.gen_bool(0.2) {
            let owner = *agents.choose(rng).unwrap();
            random_mu(rng, f, h, Some(owner), &mut causal.mu);
        }
    }
    let nu = causal.brute_nu(
        &Event::Action(performer.into(), alpha.into()),
        action_time,
        Some(admirer),
    );
    let positive = nu > Rational64::from_integer(0);
    if positive == (ablation == Ablation::Positive) {
        return None;
    }

    let mut s = format!("(config (horizon {h}))\n(constant a b c Agent)\n");
    let _ = writeln!(s, "(constant {} ActionType)", alphas.join(" "));
    let _ = writeln!(s, "(constant {} Fluent)", fluents.join(" "));
    s.push_str(&causal.source());
    let happens = format!("(happens (action {performer} {alpha}) {action_time})");
    let _ = writeln!(s, "{happens}");
    if ablation != Ablation::BelievedHappens {
        let seen = rng.gen_range(action_time.min(time)..=time);
        let _ = writeln!(s, "(believes {admirer} {seen} {happens})");
    } else if rng.gen_bool(0.5) {
        // Someone else saw it; that is not enough.
        let _ = writeln!(s, "(believes c {time} {happens})");
    }
    if ablation != Ablation::Pleased {
        let _ = writeln!(s, "(pleased {admirer} {action_time})");
    } else if rng.gen_bool(0.5) {
        let other = (0..h).find(|t| *t != action_time).unwrap();
        let _ = writeln!(s, "(pleased {admirer} {other})");
    }
    Some(AdmirationCase {
        source: s,
        ablation,
        admirer: admirer.into(),
        performer: performer.into(),
        alpha: alpha.into(),
        action_time,
        time,
        nu,
    })
}

/// Options for the seller/observer marketplace generator.
#[derive(Clone, Debug)]
pub struct MarketOptions {
    pub sellers: usize,
    pub observers: usize,
    pub items: usize,
    pub horizon: i64,
    pub m: usize,
    pub n: usize,
    /// Chance that a seller states an item's condition truthfully.
    pub honesty: f64,
    /// Chance that an observer notices a statement.
    pub attention: f64,
}

impl Default for MarketOptions {
    fn default() -> Self {
        MarketOptions {
            sellers: 2,
            observers: 2,
            items: 4,
            horizon: 8,
            m: 2,
            n: 2,
            honesty: 0.8,
            attention: 0.7,
        }
    }
}

/// Sellers `s*` state the condition of items `i*`; observers `o*` see some
/// of those statements, are pleased by some, and later answer queries about
/// items whose condition they believe.
pub fn market(rng: &mut impl Rng, o: &MarketOptions) -> String {
    let sellers: Vec<String> = (0..o.sellers).map(|i| format!("s{i}")).collect();
    let observers: Vec<String> = (0..o.observers).map(|i| format!("o{i}")).collect();
    let items: Vec<String> = (0..o.items).map(|i| format!("i{i}")).collect();
    let h = o.horizon;
    let mut s = format!("(config (horizon {h}) (m {}) (n {}))\n(sort Item Object)\n", o.m, o.n);
    let _ = writeln!(s, "(constant {} {} Agent)", sellers.join(" "), observers.join(" "));
    let _ = writeln!(s, "(constant {} Item)", items.join(" "));
    s.push_str(
        "(function new (Item) Fluent)\n(function old (Item) Fluent)\n(function stated (Fluent) Fluent)\n\
         (function utter (Fluent) ActionType)\n\
         (law initiates (action ?A:Agent (utter ?F:Fluent)) (stated ?F:Fluent))\n",
    );
    let state: Vec<bool> = items.iter().map(|_| rng.gen_bool(0.5)).collect();
    let cond = |i: usize, truth: bool| {
        let new = state[i] == truth;
        format!("({} {})", if new { "new" } else { "old" }, items[i])
    };
    for (i, it) in items.iter().enumerate() {
        let _ = writeln!(s, "(holds {} 0)", cond(i, true));
        let _ = writeln!(s, "(utility (stated {}) {})", cond(i, true), rng.gen_range(1..=3));
        let _ = writeln!(s, "(utility (stated {}) {})", cond(i, false), -rng.gen_range(1..=3));
        let _ = it;
    }
    let half = (h / 2).max(1);
    for seller in &sellers {
        for t in 1..half {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let i = rng.gen_range(0..items.len());
            let said = cond(i, rng.gen_bool(o.honesty));
            let ev = format!("(happens (action {seller} (utter {said})) {t})");
            let _ = writeln!(s, "{ev}");
            for obs in &observers {
                if rng.gen_bool(o.attention) {
                    let _ = writeln!(s, "(believes {obs} {t} (holds {} {t}))", cond(i, true));
                    let _ = writeln!(s, "(believes {obs} {t} {ev})");
                    if rng.gen_bool(0.8) {
                        let _ = writeln!(s, "(pleased {obs} {t})");
                    }
                }
            }
        }
    }
    for obs in &observers {
        let t = rng.gen_range(half..h);
        let i = rng.gen_range(0..items.len());
        let _ = writeln!(s, "(believes {obs} {t} (holds {} {t}))", cond(i, true));
        let _ = writeln!(s, "(query {obs} {t})");
    }
    s
}

/// Learner `d` watches exemplar `a` state `observed` item conditions, then
/// at each of `later` distinct moments believes the condition of a fresh
/// item, and again one moment later. Returns the source and the
/// (moment, fresh item, is new) queries.
pub fn learning_scenario(rng: &mut impl Rng, observed: usize, later: usize) -> (String, Vec<(i64, String, bool)>) {
    let h = (2 * observed + 2 * later + 2) as i64;
    let n_items = observed + later;
    let items: Vec<String> = (0..n_items).map(|i| format!("i{i}")).collect();
    let mut s = format!("(config (horizon {h}) (m 2) (n 2))\n(sort Item Object)\n(constant a d Agent)\n");
    let _ = writeln!(s, "(constant {} Item)", items.join(" "));
    s.push_str(
        "(function new (Item) Fluent)\n(function old (Item) Fluent)\n(function stated (Fluent) Fluent)\n\
         (function utter (Fluent) ActionType)\n\
         (law initiates (action ?A:Agent (utter ?F:Fluent)) (stated ?F:Fluent))\n",
    );
    // The first two observed items differ in condition so that the
    // condition itself is generalized.
    let first = rng.gen_bool(0.5);
    let state: Vec<bool> = (0..n_items)
        .map(|i| if i < 2 { first ^ (i == 1) } else { rng.gen_bool(0.5) })
        .collect();
    let cond = |i: usize, truth: bool| {
        let new = state[i] == truth;
        format!("({} {})", if new { "new" } else { "old" }, items[i])
    };
    for i in 0..n_items {
        let _ = writeln!(s, "(holds {} 0)", cond(i, true));
        let _ = writeln!(s, "(utility (stated {}) {})", cond(i, true), rng.gen_range(1..=3));
        let _ = writeln!(s, "(utility (stated {}) {})", cond(i, false), -rng.gen_range(1..=3));
    }
    for i in 0..observed {
        let t = 2 * i as i64 + 1;
        let ev = format!("(happens (action a (utter {})) {t})", cond(i, true));
        let _ = writeln!(s, "{ev}\n(believes d {t} (holds {} {t}))\n(believes d {t} {ev})\n(pleased d {t})", cond(i, true));
    }
    let mut queries = Vec::new();
    for k in 0..later {
        let i = observed + k;
        let t = (2 * observed + 2 * k + 2) as i64;
        let _ = writeln!(s, "(believes d {t} (holds {} {t}))\n(query d {t})", cond(i, true));
        let _ = writeln!(s, "(believes d {} (holds {} {}))", t + 1, cond(i, true), t + 1);
        queries.push((t, items[i].clone(), state[i]));
    }
    (s, queries)
}

/// Symbols for generated formulas.
pub const FORMULA_SIGNATURE: &str = "(sort Item Object)
    (constant a b c Agent)
    (constant x y z Item)
    (constant e1 e2 Event)
    (constant f1 Fluent)
    (function new (Item) Fluent)
    (function pair (Item Item) Item)
    (function utter (Fluent) ActionType)
    (predicate p ())
    (predicate q (Item))
    (predicate r (Agent Item))";

#[derive(Clone, Copy)]
enum Sort {
    Agent,
    Item,
    Fluent,
    Event,
    ActionType,
    Moment,
}

fn gen_term(rng: &mut impl Rng, sort: Sort, depth: u32) -> String {
    let var = |rng: &mut dyn rand::RngCore, name: &str| {
        let k = rng.gen_range(1..=2);
        format!("?{name}{k}")
    };
    match sort {
        Sort::Agent => {
            if rng.gen_bool(0.2) {
                format!("{}:Agent", var(rng, "A"))
            } else {
                ["a", "b", "c"].choose(rng).unwrap().to_string()
            }
        }
        Sort::Item => match rng.gen_range(0..5) {
            0 => format!("{}:Item", var(rng, "X")),
            1 if depth > 0 => format!(
                "(pair {} {})",
                gen_term(rng, Sort::Item, depth - 1),
                gen_term(rng, Sort::Item, depth - 1)
            ),
            _ => ["x", "y", "z"].choose(rng).unwrap().to_string(),
        },
        Sort::Fluent => match rng.gen_range(0..3) {
            0 => "f1".into(),
            1 => format!("{}:Fluent", var(rng, "F")),
            _ => format!("(new {})", gen_term(rng, Sort::Item, depth.saturating_sub(1))),
        },
        Sort::ActionType => format!("(utter {})", gen_term(rng, Sort::Fluent, depth.saturating_sub(1))),
        Sort::Event => match rng.gen_range(0..3) {
            0 => ["e1", "e2"].choose(rng).unwrap().to_string(),
            _ => format!(
                "(action {} {})",
                gen_term(rng, Sort::Agent, depth),
                gen_term(rng, Sort::ActionType, depth)
            ),
        },
        Sort::Moment => {
            if rng.gen_bool(0.25) {
                "?T:Moment".into()
            } else {
                rng.gen_range(0..=9).to_string()
            }
        }
    }
}

fn gen_atom(rng: &mut impl Rng, depth: u32) -> String {
    match rng.gen_range(0..8) {
        0 => "p".into(),
        1 => format!("(q {})", gen_term(rng, Sort::Item, depth)),
        2 => format!("(r {} {})", gen_term(rng, Sort::Agent, depth), gen_term(rng, Sort::Item, depth)),
        3 => format!("(holds {} {})", gen_term(rng, Sort::Fluent, depth), gen_term(rng, Sort::Moment, 0)),
        4 => format!("(happens {} {})", gen_term(rng, Sort::Event, depth), gen_term(rng, Sort::Moment, 0)),
        5 => format!("(= {} {})", gen_term(rng, Sort::Item, depth), gen_term(rng, Sort::Item, depth)),
        6 => format!("(?P{} {})", rng.gen_range(1..=2), gen_term(rng, Sort::Item, depth)),
        _ => format!("(prior {} {})", gen_term(rng, Sort::Moment, 0), gen_term(rng, Sort::Moment, 0)),
    }
}

fn gen_utility(rng: &mut impl Rng, depth: u32) -> String {
    let cmp = [">", ">=", "<", "<=", "="].choose(rng).unwrap();
    let ev = if rng.gen_bool(0.5) {
        gen_term(rng, Sort::Event, depth)
    } else {
        gen_term(rng, Sort::ActionType, depth)
    };
    format!("({cmp} (nu {ev} {}) {})", gen_term(rng, Sort::Moment, 0), rational(random_value(rng)))
}

/// A random well-sorted formula over [`FORMULA_SIGNATURE`].
pub fn gen_formula(rng: &mut impl Rng, depth: u32) -> String {
    if depth == 0 {
        return if rng.gen_bool(0.15) { gen_utility(rng, 1) } else { gen_atom(rng, 1) };
    }
    let sub = |rng: &mut ChaCha8Rng| gen_formula(rng, depth - 1);
    let mut r = ChaCha8Rng::seed_from_u64(rng.gen());
    match r.gen_range(0..16) {
        0 => format!("(not {})", sub(&mut r)),
        1 | 2 => {
            let head = if r.gen_bool(0.5) { "and" } else { "or" };
            let k = r.gen_range(2..=3);
            let parts: Vec<String> = (0..k).map(|_| sub(&mut r)).collect();
            format!("({head} {})", parts.join(" "))
        }
        3 => format!("(implies {} {})", sub(&mut r), sub(&mut r)),
        4 => format!("(iff {} {})", sub(&mut r), sub(&mut r)),
        5 => {
            let head = if r.gen_bool(0.5) { "forall" } else { "exists" };
            format!("({head} ?X{}:Item {})", r.gen_range(1..=2), sub(&mut r))
        }
        6 => {
            let head = if r.gen_bool(0.5) { "exists>=" } else { "exists!" };
            format!("({head} {} ?A{}:Agent {})", r.gen_range(0..=3), r.gen_range(1..=2), sub(&mut r))
        }
        7 | 8 => {
            let op = ["perceives", "knows", "believes", "desires", "intends"].choose(&mut r).unwrap();
            let who = gen_term(&mut r, Sort::Agent, 0);
            format!("({op} {who} {} {})", gen_term(&mut r, Sort::Moment, 0), sub(&mut r))
        }
        9 => {
            let speaker = gen_term(&mut r, Sort::Agent, 0);
            let t = gen_term(&mut r, Sort::Moment, 0);
            if r.gen_bool(0.5) {
                let hearer = gen_term(&mut r, Sort::Agent, 0);
                format!("(says {speaker} {hearer} {t} {})", sub(&mut r))
            } else {
                format!("(says {speaker} {t} {})", sub(&mut r))
            }
        }
        10 => format!("(common {} {})", gen_term(&mut r, Sort::Moment, 0), sub(&mut r)),
        11 => {
            let who = gen_term(&mut r, Sort::Agent, 0);
            let t = gen_term(&mut r, Sort::Moment, 0);
            let happens = format!(
                "(happens {} {})",
                gen_term(&mut r, Sort::Event, 1),
                gen_term(&mut r, Sort::Moment, 0)
            );
            let act = if r.gen_bool(0.3) { format!("(not {happens})") } else { happens };
            format!("(ought {who} {t} {} {act})", sub(&mut r))
        }
        12 => format!("(trait {} {})", sub(&mut r), gen_term(&mut r, Sort::Agent, 0)),
        13 => gen_utility(&mut r, 1),
        _ => gen_atom(&mut r, 2),
    }
}

/// Two shuffled instantiations of one random template formula set.
pub fn aligned_sets(rng: &mut impl Rng) -> (Vec<String>, Vec<String>) {
    let n = rng.gen_range(1..=4);
    let templates: Vec<String> = (0..n).map(|_| template(rng)).collect();
    let inst = |rng: &mut dyn rand::RngCore| {
        let items = ["x", "y", "z"];
        let agents = ["a", "b", "c"];
        let x1 = items[rng.gen_range(0..3)];
        let x2 = items[rng.gen_range(0..3)];
        let a1 = agents[rng.gen_range(0..3)];
        let t = rng.gen_range(1..=5).to_string();
        templates
            .iter()
            .map(|f| f.replace("$X1", x1).replace("$X2", x2).replace("$A1", a1).replace("$T", &t))
            .collect::<Vec<_>>()
    };
    let mut l = inst(rng);
    let mut r = inst(rng);
    l.shuffle(rng);
    r.shuffle(rng);
    (l, r)
}

fn template(rng: &mut impl Rng) -> String {
    let item = |rng: &mut dyn rand::RngCore| match rng.gen_range(0..4) {
        0 => "$X1".to_string(),
        1 => "$X2".to_string(),
        2 => "(pair $X1 z)".to_string(),
        _ => ["x", "y"][rng.gen_range(0..2)].to_string(),
    };
    let atom = |rng: &mut dyn rand::RngCore| match rng.gen_range(0..4) {
        0 => format!("(q {})", item(rng)),
        1 => format!("(r $A1 {})", item(rng)),
        2 => format!("(holds (new {}) $T)", item(rng)),
        _ => "p".to_string(),
    };
    match rng.gen_range(0..5) {
        0 => format!("(implies {} {})", atom(rng), atom(rng)),
        1 => format!("(believes $A1 $T {})", atom(rng)),
        2 => format!("(and {} {})", atom(rng), atom(rng)),
        _ => atom(rng),
    }
}

/// Symbols for generated reasoning problems.
pub const REASONER_SIGNATURE: &str = "(sort Item Object)
    (constant a s h Agent)
    (constant x y Item)
    (constant e Event)
    (predicate p ()) (predicate q ()) (predicate r ())
    (predicate good (Item)) (predicate kept (Item))";

fn prop_atom(rng: &mut impl Rng) -> String {
    match rng.gen_range(0..5) {
        0 => "p".into(),
        1 => "q".into(),
        2 => "r".into(),
        3 => format!("(good {})", ["x", "y"].choose(rng).unwrap()),
        _ => format!("(kept {})", ["x", "y"].choose(rng).unwrap()),
    }
}

fn prop_formula(rng: &mut impl Rng) -> String {
    match rng.gen_range(0..6) {
        0 => format!("(implies {} {})", prop_atom(rng), prop_atom(rng)),
        1 => format!("(and {} {})", prop_atom(rng), prop_atom(rng)),
        2 => format!("(iff {} {})", prop_atom(rng), prop_atom(rng)),
        _ => prop_atom(rng),
    }
}

/// A random knowledge base over [`REASONER_SIGNATURE`] and goals to ask of it.
pub fn reasoner_case(rng: &mut impl Rng) -> (String, Vec<String>) {
    let h = rng.gen_range(2..=4);
    let agents = ["a", "s", "h"];
    let mut s = format!("(config (horizon {h}))\n{REASONER_SIGNATURE}\n");
    for _ in 0..rng.gen_range(1..=7) {
        let t = rng.gen_range(0..h);
        let who = *agents.choose(rng).unwrap();
        let fact = match rng.gen_range(0..9) {
            0 | 1 => prop_formula(rng),
            2 | 3 => format!("(believes {who} {t} {})", prop_formula(rng)),
            4 => {
                let hearer = agents.iter().find(|x| **x != who).unwrap();
                format!("(says {who} {hearer} {t} {})", prop_atom(rng))
            }
            5 => {
                let c = prop_atom(rng);
                let act = format!("(happens e {})", t + 1);
                format!(
                    "(ought {who} {t} {c} {act})\n(believes {who} {t} (ought {who} {t} {c} {act}))\n(believes {who} {t} {c})"
                )
            }
            6 => "(forall ?v:Item (implies (good ?v:Item) (kept ?v:Item)))".into(),
            7 => format!("(believes {who} {t} (forall ?v:Item (implies (good ?v:Item) (kept ?v:Item))))"),
            _ => format!("(knows {who} {t} {})", prop_atom(rng)),
        };
        let _ = writeln!(s, "{fact}");
    }
    let goals = (0..6)
        .map(|_| {
            let t = rng.gen_range(0..=h);
            let who = *agents.choose(rng).unwrap();
            match rng.gen_range(0..7) {
                0 | 1 => prop_atom(rng),
                2 | 3 => format!("(believes {who} {t} {})", prop_atom(rng)),
                4 => format!("(knows {who} {t} (intends {who} {t} (happens e {})))", t + 1),
                5 => format!("(and {} (believes {who} {t} {}))", prop_atom(rng), prop_atom(rng)),
                _ => "(exists ?v:Item (kept ?v:Item))".to_string(),
            }
        })
        .collect();
    (s, goals)
}
