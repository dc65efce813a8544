mod common;

use exemplar_core::generalize::{
    anti_unify_terms, generalize_formula_set, match_term, FormulaSetOptions,
};
use exemplar_core::kernel::{alpha_equivalent, alpha_equivalent_terms, Formula, Signature, Sort, Term};
use exemplar_core::reasoner::{prove, KnowledgeBase, ProverBounds};
use exemplar_core::syntax::{parse_formula, parse_scenario, print_term};
use proptest::prelude::*;

fn signature() -> Signature {
    parse_scenario(&format!("(config (horizon 9)) {}", common::FORMULA_SIGNATURE))
        .unwrap()
        .signature
}

fn item() -> Sort {
    Sort::new("Item")
}

fn pair(a: Term, b: Term) -> Term {
    Term::app("pair", vec![a, b])
}

fn ground_item() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Term::constant);
    leaf.prop_recursive(2, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| pair(a, b)))
}

/// Every Item pattern of depth at most 2 over `x`, `y`, `pair` and two
/// variables.
fn patterns() -> Vec<Term> {
    let mut level: Vec<Term> = vec![
        Term::constant("x"),
        Term::constant("y"),
        Term::var("V1", item()),
        Term::var("V2", item()),
    ];
    for _ in 0..2 {
        let mut next = level.clone();
        for a in &level {
            for b in &level {
                next.push(pair(a.clone(), b.clone()));
            }
        }
        next.sort_by_key(print_term);
        next.dedup();
        level = next;
    }
    level
}

proptest! {
    #[test]
    fn witnesses_reconstruct_inputs(t1 in ground_item(), t2 in ground_item()) {
        let sig = signature();
        let g = anti_unify_terms(&t1, &t2, &sig).unwrap();
        prop_assert_eq!(g.witnesses[0].apply_term(&g.general), t1);
        prop_assert_eq!(g.witnesses[1].apply_term(&g.general), t2);
    }

    #[test]
    fn lgg_commutes_up_to_renaming(t1 in ground_item(), t2 in ground_item()) {
        let sig = signature();
        let ab = anti_unify_terms(&t1, &t2, &sig).unwrap().general;
        let ba = anti_unify_terms(&t2, &t1, &sig).unwrap().general;
        prop_assert!(alpha_equivalent_terms(&ab, &ba), "{} vs {}", print_term(&ab), print_term(&ba));
    }

    #[test]
    fn lgg_of_a_term_with_itself_is_the_term(t in ground_item()) {
        let g = anti_unify_terms(&t, &t, &signature()).unwrap();
        prop_assert_eq!(g.general, t);
        prop_assert!(g.witnesses.iter().all(|w| w.is_empty()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lgg_is_an_instance_of_every_common_generalization(t1 in ground_item(), t2 in ground_item()) {
        let g = anti_unify_terms(&t1, &t2, &signature()).unwrap().general;
        for h in patterns() {
            if match_term(&h, &t1).is_some() && match_term(&h, &t2).is_some() {
                prop_assert!(
                    match_term(&h, &g).is_some(),
                    "{} generalizes both inputs but not {}", print_term(&h), print_term(&g)
                );
            }
        }
    }

    #[test]
    fn generalized_set_entails_each_input(seed in any::<u64>()) {
        let sig = signature();
        let mut rng = common::rng(seed);
        let (l, r) = common::aligned_sets(&mut rng);
        let parse = |xs: Vec<String>| -> Vec<Formula> {
            xs.iter().map(|t| parse_formula(t, &sig).unwrap()).collect()
        };
        let sets = [parse(l), parse(r)];
        let g = generalize_formula_set(&sets, &sig, &FormulaSetOptions::default()).unwrap();
        for (gi, group) in g.alignment.iter().enumerate() {
            for (i, &k) in group.iter().enumerate() {
                prop_assert!(alpha_equivalent(&g.witnesses[i].apply(&g.open[gi]), &sets[i][k]));
            }
        }
        let mut kb = KnowledgeBase::new(sig.clone(), 9);
        for c in &g.closed {
            kb.add_axiom(c.clone());
        }
        for psi in sets.iter().flatten() {
            prop_assert!(prove(&kb, psi, &ProverBounds::default()).proved());
        }
    }
}

#[test]
fn identical_sets_generalize_to_themselves() {
    let sig = signature();
    let set: Vec<Formula> = ["(q x)", "(r a (pair x y))"]
        .iter()
        .map(|t| parse_formula(t, &sig).unwrap())
        .collect();
    let g = generalize_formula_set(&[set.clone(), set.clone()], &sig, &FormulaSetOptions::default()).unwrap();
    assert_eq!(g.closed, set);
}

#[test]
fn unmatched_formulas_fail_unless_lenient() {
    let sig = signature();
    let l = vec![parse_formula("(q x)", &sig).unwrap(), parse_formula("p", &sig).unwrap()];
    let r = vec![parse_formula("(q y)", &sig).unwrap()];
    let sets = [l, r];
    assert!(generalize_formula_set(&sets, &sig, &FormulaSetOptions::default()).is_err());
    let lenient = FormulaSetOptions {
        lenient: true,
        ..FormulaSetOptions::default()
    };
    let g = generalize_formula_set(&sets, &sig, &lenient).unwrap();
    assert_eq!(g.closed.len(), 1);
    assert_eq!(g.alignment, vec![vec![0, 0]]);
}
