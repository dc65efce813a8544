mod common;

use std::time::Duration;

use exemplar_core::kernel::Formula;
use exemplar_core::reasoner::{
    prove, replay, saturate, BoundKind, Derivation, Judgment, KnowledgeBase, ProverBounds, ReplayEnv, Rule, Verdict,
};
use exemplar_core::syntax::{parse_formula, parse_scenario, Scenario};
use proptest::prelude::*;
use rand::Rng;

fn scenario(src: &str) -> Scenario {
    parse_scenario(src).unwrap_or_else(|e| panic!("{e:?}"))
}

fn f(scn: &Scenario, text: &str) -> Formula {
    parse_formula(text, &scn.signature).unwrap()
}

const BASE: &str = "(config (horizon 6))
    (constant a s h Agent)
    (constant e Event)
    (predicate p ()) (predicate q ()) (predicate r ())";

fn check_replays(kb: &KnowledgeBase, scn: &Scenario, goal: &Formula) {
    let res = prove(kb, goal, &scn.config.bounds);
    assert_eq!(res.verdict, Verdict::Proved, "{goal:?}");
    let env = ReplayEnv {
        signature: &scn.signature,
        horizon: scn.config.horizon,
        oracle: kb.oracle(),
    };
    replay(&kb.axioms(), &res.trace, &Judgment::top(goal.clone()), &env).unwrap();
}

#[test]
fn says_gives_hearer_belief_about_speaker() {
    let scn = scenario(&format!("{BASE} (says s h 5 p)"));
    let mut kb = KnowledgeBase::from_scenario(&scn);
    saturate(&mut kb, &scn.config.bounds);
    assert!(kb.contains_formula(&f(&scn, "(believes h 5 (believes s 5 p))")));
}

#[test]
fn belief_is_closed_under_modus_ponens_at_later_moments() {
    let scn = scenario(&format!("{BASE} (believes a 1 p) (believes a 1 (implies p q))"));
    let mut kb = KnowledgeBase::from_scenario(&scn);
    saturate(&mut kb, &scn.config.bounds);
    assert!(kb.contains_formula(&f(&scn, "(believes a 2 q)")));
    assert!(!kb.contains_formula(&f(&scn, "(believes a 1 q)")));
    check_replays(&KnowledgeBase::from_scenario(&scn), &scn, &f(&scn, "(believes a 2 q)"));
}

#[test]
fn obligations_become_known_intentions() {
    let src = format!(
        "{BASE} (believes a 2 p) (believes a 2 (ought a 2 p (happens e 3))) (ought a 2 p (happens e 3))"
    );
    let scn = scenario(&src);
    let mut kb = KnowledgeBase::from_scenario(&scn);
    saturate(&mut kb, &scn.config.bounds);
    let want = f(&scn, "(knows a 2 (intends a 2 (happens e 3)))");
    assert!(kb.contains_formula(&want));
    check_replays(&KnowledgeBase::from_scenario(&scn), &scn, &want);
}

#[test]
fn obligation_needs_all_premises() {
    let scn = scenario(&format!("{BASE} (believes a 2 p) (ought a 2 p (happens e 3))"));
    let mut kb = KnowledgeBase::from_scenario(&scn);
    saturate(&mut kb, &scn.config.bounds);
    assert!(!kb.contains_formula(&f(&scn, "(knows a 2 (intends a 2 (happens e 3)))")));
}

#[test]
fn axiom_goal_has_empty_trace() {
    let scn = scenario(&format!("{BASE} p"));
    let res = prove(&KnowledgeBase::from_scenario(&scn), &f(&scn, "p"), &scn.config.bounds);
    assert_eq!(res.verdict, Verdict::Proved);
    assert!(res.trace.is_empty());
}

#[test]
fn modus_ponens_is_one_step() {
    let scn = scenario(&format!("{BASE} p (implies p q)"));
    let res = prove(&KnowledgeBase::from_scenario(&scn), &f(&scn, "q"), &scn.config.bounds);
    assert_eq!(res.verdict, Verdict::Proved);
    assert_eq!(res.trace.len(), 1);
    assert_eq!(res.trace[0].rule, Rule::ModusPonens);
}

#[test]
fn deep_nesting_beyond_bounds_is_unknown() {
    let src = format!("{BASE} (believes a 1 (believes s 1 (believes h 1 (believes a 1 p))))");
    let scn = scenario(&src);
    let tight = ProverBounds {
        max_depth: 2,
        ..ProverBounds::default()
    };
    let kb = KnowledgeBase::from_scenario(&scn);
    let goal = f(&scn, "(believes a 2 (believes s 1 (believes h 1 (believes a 1 p))))");
    let res = prove(&kb, &goal, &tight);
    assert_eq!(res.verdict, Verdict::Unknown);
    assert!(res.partial);
    assert!(res.saturation.exceeded.contains(&BoundKind::Depth));
    assert_eq!(prove(&kb, &goal, &ProverBounds::default()).verdict, Verdict::Proved);
}

#[test]
fn universal_axioms_are_instantiated_from_the_goal() {
    let src = "(config (horizon 3)) (sort Person Agent) (constant jack jill Person)
               (predicate talkingWith (Person)) (predicate honest (Person))
               (forall ?x:Person (implies (talkingWith ?x:Person) (honest ?x:Person)))
               (talkingWith jill)";
    let scn = scenario(src);
    check_replays(&KnowledgeBase::from_scenario(&scn), &scn, &f(&scn, "(honest jill)"));
    let res = prove(&KnowledgeBase::from_scenario(&scn), &f(&scn, "(honest jack)"), &scn.config.bounds);
    assert_eq!(res.verdict, Verdict::Unknown);
}

#[test]
fn existential_and_counting_goals() {
    let src = "(config (horizon 3)) (constant a b c Agent) (predicate kind (Agent))
               (kind a) (kind b)";
    let scn = scenario(src);
    let kb = KnowledgeBase::from_scenario(&scn);
    check_replays(&kb, &scn, &f(&scn, "(exists ?x:Agent (kind ?x:Agent))"));
    check_replays(&kb, &scn, &f(&scn, "(exists>= 2 ?x:Agent (kind ?x:Agent))"));
    check_replays(&kb, &scn, &f(&scn, "(exists! 2 ?x:Agent (kind ?x:Agent))"));
    let three = prove(&kb, &f(&scn, "(exists>= 3 ?x:Agent (kind ?x:Agent))"), &scn.config.bounds);
    assert_eq!(three.verdict, Verdict::Unknown);
}

#[test]
fn unique_names_and_moment_order_are_native() {
    let scn = scenario(BASE);
    let kb = KnowledgeBase::from_scenario(&scn);
    check_replays(&kb, &scn, &f(&scn, "(and (not (= a s)) (prior 1 2))"));
    let same = prove(&kb, &f(&scn, "(not (= a a))"), &scn.config.bounds);
    assert_eq!(same.verdict, Verdict::Unknown);
}

#[test]
fn open_and_higher_order_goals_are_unknown() {
    let scn = scenario(BASE);
    let kb = KnowledgeBase::from_scenario(&scn);
    let open = prove(&kb, &f(&scn, "(believes ?x:Agent 1 p)"), &scn.config.bounds);
    assert_eq!(open.verdict, Verdict::Unknown);
    let ho = prove(&kb, &f(&scn, "(?P a)"), &scn.config.bounds);
    assert_eq!(ho.verdict, Verdict::Unknown);
}

#[test]
fn tampered_traces_are_rejected() {
    let scn = scenario(&format!("{BASE} p (implies p q)"));
    let kb = KnowledgeBase::from_scenario(&scn);
    let goal = f(&scn, "q");
    let mut res = prove(&kb, &goal, &scn.config.bounds);
    let env = ReplayEnv {
        signature: &scn.signature,
        horizon: scn.config.horizon,
        oracle: None,
    };
    res.trace[0].conclusion = Judgment::top(f(&scn, "r"));
    assert!(replay(&kb.axioms(), &res.trace, &Judgment::top(goal.clone()), &env).is_err());
    assert!(replay(&kb.axioms(), &[], &Judgment::top(goal), &env).is_err());
}

#[test]
fn saturation_is_idempotent_at_fixpoint() {
    let scn = scenario(&format!("{BASE} (believes a 1 p) (believes a 1 (implies p q)) (says s h 2 r)"));
    let mut kb = KnowledgeBase::from_scenario(&scn);
    let first = saturate(&mut kb, &scn.config.bounds);
    assert!(!first.partial);
    let len = kb.len();
    let again = saturate(&mut kb, &scn.config.bounds);
    assert_eq!(again.added, 0);
    assert_eq!(kb.len(), len);
}

#[test]
fn exhausted_budget_is_partial() {
    let scn = scenario(&format!("{BASE} (believes a 0 p)"));
    let mut kb = KnowledgeBase::from_scenario(&scn);
    let none = ProverBounds {
        budget: Duration::ZERO,
        ..ProverBounds::default()
    };
    let rep = saturate(&mut kb, &none);
    assert!(rep.partial);
    assert!(!kb.is_complete());
}

/// A random case: its scenario, the same scenario without one fact, and goals.
fn case(seed: u64) -> (Scenario, Scenario, Vec<Formula>) {
    let mut rng = common::rng(seed);
    let (src, goals) = common::reasoner_case(&mut rng);
    let lines: Vec<&str> = src.lines().collect();
    let first_fact = lines.iter().position(|l| l.contains("(predicate good")).unwrap() + 1;
    let drop = rng.gen_range(first_fact..lines.len());
    let smaller: Vec<&str> = lines.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, l)| *l).collect();
    let full = scenario(&src);
    let goals = goals.iter().map(|g| f(&full, g)).collect();
    (full, scenario(&smaller.join("\n")), goals)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn more_axioms_never_lose_a_proof(seed in any::<u64>()) {
        let (full, smaller, goals) = case(seed);
        let big = KnowledgeBase::from_scenario(&full);
        let small = KnowledgeBase::from_scenario(&smaller);
        for g in &goals {
            if prove(&small, g, &smaller.config.bounds).proved() {
                prop_assert!(prove(&big, g, &full.config.bounds).proved(), "{:?}", g);
            }
        }
    }

    #[test]
    fn saturating_twice_adds_nothing(seed in any::<u64>()) {
        let (scn, _, _) = case(seed);
        let mut kb = KnowledgeBase::from_scenario(&scn);
        let first = saturate(&mut kb, &scn.config.bounds);
        prop_assume!(!first.partial);
        prop_assert_eq!(saturate(&mut kb, &scn.config.bounds).added, 0);
    }

    #[test]
    fn derived_judgments_respect_the_depth_bound(seed in any::<u64>(), depth in 1usize..4) {
        let (scn, _, _) = case(seed);
        let bounds = ProverBounds { max_depth: depth, ..ProverBounds::default() };
        let mut kb = KnowledgeBase::from_scenario(&scn);
        saturate(&mut kb, &bounds);
        for (j, d) in kb.judgments() {
            if *d != Derivation::axiom() {
                prop_assert!(j.nesting() <= depth, "{} at depth {}", j, depth);
            }
        }
    }

    #[test]
    fn larger_bounds_never_flip_a_proof(seed in any::<u64>(), depth in 1usize..4, rounds in 1usize..4) {
        let (scn, _, goals) = case(seed);
        let tight = ProverBounds { max_depth: depth, max_rounds: rounds, ..ProverBounds::default() };
        let kb = KnowledgeBase::from_scenario(&scn);
        for g in &goals {
            if prove(&kb, g, &tight).proved() {
                prop_assert!(prove(&kb, g, &ProverBounds::default()).proved(), "{:?}", g);
            }
        }
    }
}
