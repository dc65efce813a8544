//! Guess a signature from bare expressions, for commands that work on
//! formulas or terms outside any scenario.

use super::formula::is_int_token;
use super::sexp::{Sexp, SexpKind};
use crate::kernel::{ModalOp, Signature, Sort};

fn guess_sort(sig: &Signature, s: &Sexp) -> Sort {
    match &s.kind {
        SexpKind::Atom(tok) if tok.starts_with('?') => tok
            .split_once(':')
            .map_or_else(Sort::object, |(_, sort)| Sort::new(sort)),
        SexpKind::Atom(tok) if is_int_token(tok) => Sort::moment(),
        SexpKind::Atom(tok) => sig
            .constant_sort(tok)
            .cloned()
            .unwrap_or_else(Sort::object),
        SexpKind::List(items) => items
            .first()
            .and_then(Sexp::atom)
            .and_then(|f| sig.function(f))
            .map_or_else(Sort::object, |f| f.result.clone()),
    }
}

fn term(sig: &mut Signature, s: &Sexp, want: Sort) {
    match &s.kind {
        SexpKind::Atom(tok) => {
            if !tok.starts_with('?') && !is_int_token(tok) && sig.constant_sort(tok).is_none() {
                let _ = sig.declare_constant(tok, want);
            }
        }
        SexpKind::List(items) => {
            let Some(f) = items.first().and_then(Sexp::atom) else {
                return;
            };
            let args = &items[1..];
            if sig.function(f).is_none() && !args.is_empty() {
                let sorts = args.iter().map(|a| guess_sort(sig, a)).collect();
                let _ = sig.declare_function(f, sorts, want);
            }
            let expected = sig.function(f).map(|fs| fs.args.clone()).unwrap_or_default();
            for (a, w) in args.iter().zip(expected) {
                term(sig, a, w);
            }
        }
    }
}

fn formula(sig: &mut Signature, s: &Sexp) {
    let Some(items) = s.list() else {
        if let Some(tok) = s.atom() {
            if !tok.starts_with('?') && sig.predicate(tok).is_none() {
                let _ = sig.declare_predicate(tok, Vec::new());
            }
        }
        return;
    };
    let Some(head) = items.first().and_then(Sexp::atom) else {
        return;
    };
    let rest = &items[1..];
    match head {
        "not" | "and" | "or" | "implies" | "iff" => rest.iter().for_each(|f| formula(sig, f)),
        "forall" | "exists" => rest.iter().skip(1).for_each(|f| formula(sig, f)),
        "exists>=" | "exists!" => rest.iter().skip(2).for_each(|f| formula(sig, f)),
        "trait" if rest.len() == 2 => {
            formula(sig, &rest[0]);
            term(sig, &rest[1], Sort::agent());
        }
        "ought" if rest.len() == 4 => {
            term(sig, &rest[0], Sort::agent());
            term(sig, &rest[1], Sort::moment());
            formula(sig, &rest[2]);
            formula(sig, &rest[3]);
        }
        _ if ModalOp::from_keyword(head).is_some() && rest.len() >= 2 => {
            let n = rest.len() - 2;
            for a in &rest[..n] {
                term(sig, a, Sort::agent());
            }
            term(sig, &rest[n], Sort::moment());
            formula(sig, &rest[n + 1]);
        }
        _ if rest.first().and_then(Sexp::head) == Some("nu") => {
            if let Some(nu) = rest[0].list().filter(|l| l.len() == 3) {
                let want = if nu[1].head() == Some("action") {
                    Sort::event()
                } else {
                    Sort::action_type()
                };
                term(sig, &nu[1], want);
                term(sig, &nu[2], Sort::moment());
            }
        }
        _ if head.starts_with('?') => {
            for a in rest {
                let w = guess_sort(sig, a);
                term(sig, a, w);
            }
        }
        _ => {
            if sig.predicate(head).is_none() && head != crate::kernel::EQUALITY {
                let sorts = rest.iter().map(|a| guess_sort(sig, a)).collect();
                let _ = sig.declare_predicate(head, sorts);
            }
            let expected = sig
                .predicate(head)
                .map(<[Sort]>::to_vec)
                .unwrap_or_else(|| rest.iter().map(|a| guess_sort(sig, a)).collect());
            for (a, w) in rest.iter().zip(expected) {
                term(sig, a, w);
            }
        }
    }
}

/// Extend `sig` with declarations that make `exprs` well-sorted where
/// possible. Unknown constants default to `Object` unless their position
/// fixes a sort. Existing declarations are left untouched.
pub fn infer_signature(sig: &mut Signature, exprs: &[Sexp], as_terms: bool) {
    for e in exprs {
        if as_terms {
            let want = guess_sort(sig, e);
            term(sig, e, want);
        } else {
            formula(sig, e);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sexp};

    #[test]
    fn infers_predicates_from_atoms() {
        let mut sig = Signature::new();
        let a = parse_sexp("(likes jill jack)").unwrap();
        let b = parse_sexp("(loves jill jim)").unwrap();
        infer_signature(&mut sig, &[a, b], false);
        assert!(parse_formula("(likes jill jack)", &sig).is_ok());
        assert!(parse_formula("(loves jim jill)", &sig).is_ok());
    }

    #[test]
    fn builtin_positions_fix_sorts() {
        let mut sig = Signature::new();
        let e = parse_sexp("(believes d 2 (holds (new x) 2))").unwrap();
        infer_signature(&mut sig, &[e], false);
        assert_eq!(sig.constant_sort("d"), Some(&Sort::agent()));
        assert_eq!(sig.function("new").unwrap().result, Sort::fluent());
    }
}
