//! Generalization of finite formula sets: align formulas across the sets,
//! anti-unify each aligned group with one shared variable table, and close
//! the results universally.

use crate::kernel::{Formula, Pred, Signature, Substitution, Term, Var};
use crate::reasoner::{prove, KnowledgeBase, ProverBounds};
use crate::syntax::print_formula;

use super::lgg::{AntiUnifier, GeneralizeError};

#[derive(Clone, Debug, Default)]
pub struct FormulaSetOptions {
    /// Drop formulas that have no counterpart in every set instead of failing.
    pub lenient: bool,
    /// Allow predicate variables where predicate symbols differ.
    pub higher_order: bool,
    /// Check that the closed result entails every aligned input formula.
    pub verify: Option<ProverBounds>,
    /// Tuples (one term per set) that must generalize to a given variable.
    pub preassigned: Vec<(Vec<Term>, Var)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSetGeneralization {
    /// Generalized formulas sharing free variables.
    pub open: Vec<Formula>,
    /// Each open formula closed universally over its free variables.
    pub closed: Vec<Formula>,
    /// `witnesses[i]` maps the open formulas onto set `i`.
    pub witnesses: Vec<Substitution>,
    /// `alignment[g][i]` is the index in set `i` of group `g`'s formula.
    pub alignment: Vec<Vec<usize>>,
}

/// Grouping key: connective structure plus predicate symbols. With
/// `erase_preds` predicate symbols are replaced by their arity.
fn shape(f: &Formula, erase_preds: bool) -> String {
    let inner = |g: &Formula| shape(g, erase_preds);
    match f {
        Formula::Atom { pred, args } => match pred {
            Pred::Sym(p) if !erase_preds || p == crate::kernel::EQUALITY => {
                format!("{p}/{}", args.len())
            }
            _ => format!("?/{}", args.len()),
        },
        Formula::Not(x) => format!("not({})", inner(x)),
        Formula::And(xs) | Formula::Or(xs) => {
            let head = if matches!(f, Formula::And(_)) { "and" } else { "or" };
            let parts: Vec<String> = xs.iter().map(inner).collect();
            format!("{head}({})", parts.join(","))
        }
        Formula::Implies(a, b) => format!("implies({},{})", inner(a), inner(b)),
        Formula::Iff(a, b) => format!("iff({},{})", inner(a), inner(b)),
        Formula::Forall(v, b) => format!("forall {}({})", v.name, inner(b)),
        Formula::Exists(v, b) => format!("exists {}({})", v.name, inner(b)),
        Formula::Count { bound, var, body } => format!("count {bound:?} {}({})", var.name, inner(body)),
        Formula::Modal { op, agents, body, .. } => {
            format!("{}/{}({})", op.keyword(), agents.len(), inner(body))
        }
        Formula::Ought {
            condition, action, ..
        } => format!("ought({},{})", inner(condition), inner(action)),
        Formula::Trait { body, .. } => format!("trait({})", inner(body)),
        Formula::Utility(u) => format!("nu {} {}", u.cmp.symbol(), u.value),
    }
}

/// Variables introduced when generalizing `a` and `b` alone, or `None`
/// when they cannot be generalized.
fn pair_cost(a: &Formula, b: &Formula, sig: &Signature, higher_order: bool) -> Option<usize> {
    let mut au = AntiUnifier::new(sig, 2, higher_order);
    au.avoid_names_in(a);
    au.avoid_names_in(b);
    au.formula(&[a, b]).ok().map(|_| au.introduced())
}

/// Universal closure over free variables in first-occurrence order.
pub fn universal_closure(f: &Formula) -> Formula {
    f.free_vars_ordered()
        .into_iter()
        .rev()
        .fold(f.clone(), |acc, v| Formula::forall(v, acc))
}

/// Generalize `sets` into one formula set that entails each of them.
pub fn generalize_formula_set(
    sets: &[Vec<Formula>],
    sig: &Signature,
    options: &FormulaSetOptions,
) -> Result<FormulaSetGeneralization, GeneralizeError> {
    if sets.len() < 2 {
        return Err(GeneralizeError::TooFewInputs);
    }
    let k = sets.len();
    let mut au = AntiUnifier::new(sig, k, options.higher_order);
    for f in sets.iter().flatten() {
        au.avoid_names_in(f);
    }
    for (tuple, v) in &options.preassigned {
        au.assign(tuple.clone(), v.clone());
    }

    let mut used: Vec<Vec<bool>> = sets.iter().map(|s| vec![false; s.len()]).collect();
    let mut open = Vec::new();
    let mut alignment = Vec::new();

    for (p, pivot) in sets[0].iter().enumerate() {
        let mut group = vec![p];
        for j in 1..k {
            let pick = |erase: bool| {
                let key = shape(pivot, erase);
                sets[j]
                    .iter()
                    .enumerate()
                    .filter(|(q, g)| !used[j][*q] && shape(g, erase) == key)
                    .filter_map(|(q, g)| pair_cost(pivot, g, sig, options.higher_order).map(|c| (c, q)))
                    .min()
                    .map(|(_, q)| q)
            };
            let choice = pick(false).or_else(|| if options.higher_order { pick(true) } else { None });
            match choice {
                Some(q) => group.push(q),
                None => break,
            }
        }
        if group.len() < k {
            if options.lenient {
                continue;
            }
            return Err(GeneralizeError::NoAlignment(format!(
                "`{}` has no counterpart in every set",
                print_formula(pivot)
            )));
        }
        let members: Vec<&Formula> = group.iter().enumerate().map(|(i, &q)| &sets[i][q]).collect();
        let mut trial = au.clone();
        match trial.formula(&members) {
            Ok(g) => {
                au = trial;
                for (i, &q) in group.iter().enumerate() {
                    used[i][q] = true;
                }
                open.push(g);
                alignment.push(group);
            }
            Err(e) if !options.lenient => return Err(e),
            Err(_) => {}
        }
    }
    if !options.lenient {
        for (i, u) in used.iter().enumerate() {
            if let Some(q) = u.iter().position(|x| !x) {
                return Err(GeneralizeError::NoAlignment(format!(
                    "`{}` has no counterpart in every set",
                    print_formula(&sets[i][q])
                )));
            }
        }
    }
    if open.is_empty() && sets.iter().any(|s| !s.is_empty()) {
        return Err(GeneralizeError::NoAlignment("no formula aligns across all sets".into()));
    }

    let closed: Vec<Formula> = open.iter().map(universal_closure).collect();
    let result = FormulaSetGeneralization {
        open,
        closed,
        witnesses: au.witnesses(),
        alignment,
    };
    if let Some(bounds) = &options.verify {
        verify_contract(sets, &result, sig, bounds)?;
    }
    Ok(result)
}

/// Check that the closed generalization proves every aligned input.
fn verify_contract(
    sets: &[Vec<Formula>],
    g: &FormulaSetGeneralization,
    sig: &Signature,
    bounds: &ProverBounds,
) -> Result<(), GeneralizeError> {
    let horizon = sets
        .iter()
        .flatten()
        .flat_map(|f| f.ground_subterms())
        .filter_map(|t| t.as_int())
        .max()
        .unwrap_or(0)
        .max(0);
    let mut kb = KnowledgeBase::new(sig.clone(), horizon);
    for f in &g.closed {
        kb.add_axiom(f.clone());
    }
    for group in &g.alignment {
        for (i, &q) in group.iter().enumerate() {
            let goal = &sets[i][q];
            if !prove(&kb, goal, bounds).proved() {
                return Err(GeneralizeError::ContractFailed(print_formula(goal)));
            }
        }
    }
    Ok(())
}
