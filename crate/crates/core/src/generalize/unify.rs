//! Syntactic unification and one-way matching.

use crate::kernel::{sort_of, Formula, Pred, Signature, Substitution, Term, Var};

fn walk<'a>(t: &'a Term, s: &'a Substitution) -> &'a Term {
    let mut cur = t;
    while let Term::Var(v) = cur {
        match s.get(v) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

fn occurs(v: &Var, t: &Term, s: &Substitution) -> bool {
    match walk(t, s) {
        Term::Var(w) => w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a, s)),
        _ => false,
    }
}

fn unify_into(t1: &Term, t2: &Term, s: &mut Substitution) -> bool {
    let a = walk(t1, s).clone();
    let b = walk(t2, s).clone();
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), other) | (other, Term::Var(x)) => {
            if occurs(x, other, s) {
                return false;
            }
            s.bind(x.clone(), other.clone());
            true
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| unify_into(x, y, s))
        }
        _ => a == b,
    }
}

/// Fully resolve triangular bindings so the result is idempotent.
fn resolve(s: &Substitution) -> Substitution {
    fn deep(t: &Term, s: &Substitution) -> Term {
        match walk(t, s) {
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| deep(a, s)).collect()),
            other => other.clone(),
        }
    }
    let mut out = Substitution::new();
    for (v, t) in s.bindings() {
        out.bind(v.clone(), deep(t, s));
    }
    out
}

/// Most general unifier with occurs check.
pub fn unify(t1: &Term, t2: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    unify_into(t1, t2, &mut s).then(|| resolve(&s))
}

/// Unify several term pairs simultaneously.
pub fn unify_all<'a>(pairs: impl IntoIterator<Item = (&'a Term, &'a Term)>) -> Option<Substitution> {
    let mut s = Substitution::new();
    for (a, b) in pairs {
        if !unify_into(a, b, &mut s) {
            return None;
        }
    }
    Some(resolve(&s))
}

/// Like [`unify`], additionally requiring every binding to respect the
/// variable's sort.
pub fn unify_sorted(t1: &Term, t2: &Term, sig: &Signature) -> Option<Substitution> {
    let s = unify(t1, t2)?;
    respects_sorts(&s, sig).then_some(s)
}

pub fn respects_sorts(s: &Substitution, sig: &Signature) -> bool {
    s.bindings().all(|(v, t)| match sort_of(t, sig) {
        Ok(sort) => sig.is_subsort(&sort, &v.sort),
        Err(_) => false,
    })
}

/// One-way matching: find `θ` extending `s` with `pattern θ = target`.
/// Variables in `target` are treated as constants.
pub fn match_term_with(pattern: &Term, target: &Term, s: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match s.get(v) {
            Some(bound) => bound == target,
            None => {
                s.bind(v.clone(), target.clone());
                true
            }
        },
        Term::App(f, xs) => match target {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| match_term_with(x, y, s))
            }
            _ => false,
        },
        other => other == target,
    }
}

pub fn match_term(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    match_term_with(pattern, target, &mut s).then_some(s)
}

/// One-way matching of formulas. Bound variables must correspond
/// positionally; free variables and predicate variables of `pattern` are
/// bound.
pub fn match_formula_with(pattern: &Formula, target: &Formula, s: &mut Substitution) -> bool {
    match_formula_rec(pattern, target, s, &mut Vec::new())
}

pub fn match_formula(pattern: &Formula, target: &Formula) -> Option<Substitution> {
    let mut s = Substitution::new();
    match_formula_with(pattern, target, &mut s).then_some(s)
}

fn match_terms_scoped(
    p: &Term,
    t: &Term,
    s: &mut Substitution,
    bound: &[(Var, Var)],
) -> bool {
    match p {
        Term::Var(v) => {
            if let Some((_, tv)) = bound.iter().rev().find(|(pv, _)| pv == v) {
                return matches!(t, Term::Var(w) if w == tv);
            }
            // A free pattern variable may not capture a bound target variable.
            if let Term::Var(w) = t {
                if bound.iter().any(|(_, tv)| tv == w) {
                    return false;
                }
            }
            if t.vars().iter().any(|w| bound.iter().any(|(_, tv)| tv == w)) {
                return false;
            }
            match_term_with(p, t, s)
        }
        Term::App(f, xs) => match t {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => xs
                .iter()
                .zip(ys)
                .all(|(x, y)| match_terms_scoped(x, y, s, bound)),
            _ => false,
        },
        other => other == t,
    }
}

fn match_formula_rec(
    p: &Formula,
    t: &Formula,
    s: &mut Substitution,
    bound: &mut Vec<(Var, Var)>,
) -> bool {
    let terms = |s: &mut Substitution, bound: &Vec<(Var, Var)>, ps: &[&Term], ts: &[&Term]| {
        ps.len() == ts.len()
            && ps
                .iter()
                .zip(ts)
                .all(|(a, b)| match_terms_scoped(a, b, s, bound))
    };
    match (p, t) {
        (Formula::Atom { pred: pp, args: pa }, Formula::Atom { pred: tp, args: ta }) => {
            let pred_ok = match (pp, tp) {
                (Pred::Var(v), Pred::Sym(sym)) => match s.get_pred(v) {
                    Some(bound_sym) => bound_sym == sym,
                    None => {
                        s.bind_pred(v, sym);
                        true
                    }
                },
                (a, b) => a == b,
            };
            pred_ok
                && pa.len() == ta.len()
                && pa
                    .iter()
                    .zip(ta)
                    .all(|(a, b)| match_terms_scoped(a, b, s, bound))
        }
        (Formula::Not(a), Formula::Not(b)) => match_formula_rec(a, b, s, bound),
        (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
            std::mem::discriminant(p) == std::mem::discriminant(t)
                && xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| match_formula_rec(x, y, s, bound))
        }
        (Formula::Implies(a1, b1), Formula::Implies(a2, b2))
        | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => {
            match_formula_rec(a1, a2, s, bound) && match_formula_rec(b1, b2, s, bound)
        }
        (Formula::Forall(v1, b1), Formula::Forall(v2, b2))
        | (Formula::Exists(v1, b1), Formula::Exists(v2, b2)) => {
            if v1.sort != v2.sort {
                return false;
            }
            bound.push((v1.clone(), v2.clone()));
            let ok = match_formula_rec(b1, b2, s, bound);
            bound.pop();
            ok
        }
        (
            Formula::Count {
                bound: c1,
                var: v1,
                body: b1,
            },
            Formula::Count {
                bound: c2,
                var: v2,
                body: b2,
            },
        ) => {
            if c1 != c2 || v1.sort != v2.sort {
                return false;
            }
            bound.push((v1.clone(), v2.clone()));
            let ok = match_formula_rec(b1, b2, s, bound);
            bound.pop();
            ok
        }
        (
            Formula::Modal {
                op: o1,
                agents: a1,
                time: t1,
                body: b1,
            },
            Formula::Modal {
                op: o2,
                agents: a2,
                time: t2,
                body: b2,
            },
        ) => {
            o1 == o2
                && terms(
                    s,
                    bound,
                    &a1.iter().chain(Some(t1)).collect::<Vec<_>>(),
                    &a2.iter().chain(Some(t2)).collect::<Vec<_>>(),
                )
                && match_formula_rec(b1, b2, s, bound)
        }
        (
            Formula::Ought {
                agent: a1,
                time: t1,
                condition: c1,
                action: x1,
            },
            Formula::Ought {
                agent: a2,
                time: t2,
                condition: c2,
                action: x2,
            },
        ) => {
            terms(s, bound, &[a1, t1], &[a2, t2])
                && match_formula_rec(c1, c2, s, bound)
                && match_formula_rec(x1, x2, s, bound)
        }
        (Formula::Trait { body: b1, agent: a1 }, Formula::Trait { body: b2, agent: a2 }) => {
            match_formula_rec(b1, b2, s, bound) && terms(s, bound, &[a1], &[a2])
        }
        (Formula::Utility(u1), Formula::Utility(u2)) => {
            u1.cmp == u2.cmp
                && u1.value == u2.value
                && terms(s, bound, &[&u1.event, &u1.time], &[&u2.event, &u2.time])
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Sort;

    fn x() -> Term {
        Term::var("X", Sort::agent())
    }

    #[test]
    fn textbook_mgu() {
        let s = unify(
            &Term::app("hungry", vec![x()]),
            &Term::app("hungry", vec![Term::constant("jack")]),
        )
        .unwrap();
        assert_eq!(s.get(&Var::new("X", Sort::agent())), Some(&Term::constant("jack")));
    }

    #[test]
    fn clash_fails() {
        let a = Term::app("likes", vec![x(), x()]);
        let b = Term::app("likes", vec![Term::constant("jack"), Term::constant("jill")]);
        assert!(unify(&a, &b).is_none());
    }

    #[test]
    fn occurs_check() {
        assert!(unify(&x(), &Term::app("f", vec![x()])).is_none());
    }

    #[test]
    fn mgu_is_idempotent() {
        let y = Term::var("Y", Sort::agent());
        let a = Term::app("f", vec![x(), Term::app("g", vec![y.clone()])]);
        let b = Term::app("f", vec![Term::app("h", vec![y.clone()]), Term::app("g", vec![Term::constant("c")])]);
        let s = unify(&a, &b).unwrap();
        assert!(s.is_idempotent());
        assert_eq!(s.apply_term(&a), s.apply_term(&b));
    }

    #[test]
    fn matching_is_one_way() {
        let pat = Term::app("f", vec![x()]);
        assert!(match_term(&pat, &Term::app("f", vec![Term::constant("a")])).is_some());
        assert!(match_term(&Term::app("f", vec![Term::constant("a")]), &pat).is_none());
    }

    #[test]
    fn formula_matching_binds_predicate_variables() {
        let pat = Formula::Atom {
            pred: Pred::Var("P".into()),
            args: vec![Term::constant("jill"), x()],
        };
        let target = Formula::atom("loves", vec![Term::constant("jill"), Term::constant("jim")]);
        let s = match_formula(&pat, &target).unwrap();
        assert_eq!(s.get_pred("P"), Some("loves"));
        assert_eq!(s.apply(&pat), target);
    }
}
