//! Concrete syntax of terms and formulas: parenthesized prefix notation with
//! `?name:Sort` variables.

use std::fmt::Write as _;

use num_rational::Rational64;

use super::sexp::{parse_sexp, Sexp, SexpKind, SyntaxError};
use crate::kernel::{
    check_sorts, sort_of, Comparison, CountBound, Formula, ModalOp, Pred, Signature, SortError,
    Sort, Term, UtilityAtom, Var, EQUALITY,
};

pub const RESERVED: &[&str] = &[
    "not", "and", "or", "implies", "iff", "forall", "exists", "exists>=", "exists!", "ought",
    "trait", "nu", "perceives", "knows", "believes", "desires", "intends", "says", "common", ">",
    ">=", "<", "<=",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Sort(#[from] SortError),
}

pub fn is_int_token(tok: &str) -> bool {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub fn parse_int(s: &Sexp) -> Result<i64, SyntaxError> {
    match s.atom() {
        Some(tok) if is_int_token(tok) => tok
            .parse()
            .map_err(|_| SyntaxError::new(format!("integer `{tok}` out of range"), s.span)),
        _ => Err(SyntaxError::new(format!("expected an integer, found `{s}`"), s.span)),
    }
}

pub fn parse_rational(s: &Sexp) -> Result<Rational64, SyntaxError> {
    let tok = s
        .atom()
        .ok_or_else(|| SyntaxError::new(format!("expected a number, found `{s}`"), s.span))?;
    let bad = || SyntaxError::new(format!("malformed number `{tok}`"), s.span);
    match tok.split_once('/') {
        None if is_int_token(tok) => tok.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad()),
        Some((n, d)) if is_int_token(n) && is_int_token(d) && !d.starts_with('-') => {
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(SyntaxError::new("zero denominator", s.span));
            }
            Ok(Rational64::new(n, d))
        }
        _ => Err(bad()),
    }
}

fn is_identifier(tok: &str) -> bool {
    !tok.is_empty()
        && !tok.starts_with('?')
        && !tok.starts_with(':')
        && !tok.contains('/')
        && !is_int_token(tok)
}

pub fn parse_symbol<'a>(s: &'a Sexp, what: &str) -> Result<&'a str, SyntaxError> {
    match s.atom() {
        Some(tok) if is_identifier(tok) => Ok(tok),
        _ => Err(SyntaxError::new(format!("expected {what}, found `{s}`"), s.span)),
    }
}

fn parse_var_token(tok: &str, s: &Sexp) -> Result<Var, SyntaxError> {
    let body = &tok[1..];
    match body.split_once(':') {
        Some((name, sort)) if is_identifier(name) && is_identifier(sort) => {
            Ok(Var::new(name, Sort::new(sort)))
        }
        _ => Err(SyntaxError::new(
            format!("variables are written `?name:Sort`, found `{tok}`"),
            s.span,
        )),
    }
}

pub fn parse_var(s: &Sexp) -> Result<Var, SyntaxError> {
    match s.atom() {
        Some(tok) if tok.starts_with('?') => parse_var_token(tok, s),
        _ => Err(SyntaxError::new(format!("expected a variable, found `{s}`"), s.span)),
    }
}

pub fn term_from_sexp(s: &Sexp) -> Result<Term, SyntaxError> {
    match &s.kind {
        SexpKind::Atom(tok) => {
            if tok.starts_with('?') {
                Ok(Term::Var(parse_var_token(tok, s)?))
            } else if is_int_token(tok) {
                Ok(Term::Int(parse_int(s)?))
            } else if is_identifier(tok) {
                Ok(Term::Const(tok.clone()))
            } else {
                Err(SyntaxError::new(format!("unexpected token `{tok}`"), s.span))
            }
        }
        SexpKind::List(items) => {
            let (head, args) = items
                .split_first()
                .ok_or_else(|| SyntaxError::new("empty application", s.span))?;
            let f = parse_symbol(head, "a function symbol")?;
            if args.is_empty() {
                return Err(SyntaxError::new(
                    format!("`({f})` has no arguments; write constants without parentheses"),
                    s.span,
                ));
            }
            let args = args.iter().map(term_from_sexp).collect::<Result<_, _>>()?;
            Ok(Term::App(f.to_string(), args))
        }
    }
}

fn expect_len(s: &Sexp, items: &[Sexp], n: usize, what: &str) -> Result<(), SyntaxError> {
    if items.len() == n + 1 {
        Ok(())
    } else {
        Err(SyntaxError::new(
            format!("`{what}` expects {n} argument(s), got {}", items.len() - 1),
            s.span,
        ))
    }
}

fn boxed(s: &Sexp) -> Result<Box<Formula>, SyntaxError> {
    formula_from_sexp(s).map(Box::new)
}

/// Structural conversion; sorts are not checked here.
pub fn formula_from_sexp(s: &Sexp) -> Result<Formula, SyntaxError> {
    let items = match &s.kind {
        SexpKind::Atom(tok) => {
            if let Some(name) = tok.strip_prefix('?') {
                if is_identifier(name) {
                    return Ok(Formula::Atom {
                        pred: Pred::Var(name.to_string()),
                        args: Vec::new(),
                    });
                }
            } else if is_identifier(tok) && !RESERVED.contains(&tok.as_str()) && tok != EQUALITY {
                return Ok(Formula::atom(tok, Vec::new()));
            }
            return Err(SyntaxError::new(
                format!("expected a formula, found `{tok}`"),
                s.span,
            ));
        }
        SexpKind::List(items) => items,
    };
    let head_sexp = items
        .first()
        .ok_or_else(|| SyntaxError::new("empty formula", s.span))?;
    let head = head_sexp.atom().ok_or_else(|| {
        SyntaxError::new("formula head must be a symbol", head_sexp.span)
    })?;
    let rest = &items[1..];
    match head {
        "not" => {
            expect_len(s, items, 1, head)?;
            Ok(Formula::Not(boxed(&rest[0])?))
        }
        "and" => Ok(Formula::And(
            rest.iter().map(formula_from_sexp).collect::<Result<_, _>>()?,
        )),
        "or" => Ok(Formula::Or(
            rest.iter().map(formula_from_sexp).collect::<Result<_, _>>()?,
        )),
        "implies" => {
            expect_len(s, items, 2, head)?;
            Ok(Formula::Implies(boxed(&rest[0])?, boxed(&rest[1])?))
        }
        "iff" => {
            expect_len(s, items, 2, head)?;
            Ok(Formula::Iff(boxed(&rest[0])?, boxed(&rest[1])?))
        }
        "forall" | "exists" => {
            expect_len(s, items, 2, head)?;
            let v = parse_var(&rest[0])?;
            let body = boxed(&rest[1])?;
            Ok(if head == "forall" {
                Formula::Forall(v, body)
            } else {
                Formula::Exists(v, body)
            })
        }
        "exists>=" | "exists!" => {
            expect_len(s, items, 3, head)?;
            let n = parse_int(&rest[0])?;
            let n = u32::try_from(n)
                .map_err(|_| SyntaxError::new("count must be non-negative", rest[0].span))?;
            let bound = if head == "exists>=" {
                CountBound::AtLeast(n)
            } else {
                CountBound::Exactly(n)
            };
            Ok(Formula::Count {
                bound,
                var: parse_var(&rest[1])?,
                body: boxed(&rest[2])?,
            })
        }
        "ought" => {
            expect_len(s, items, 4, head)?;
            Ok(Formula::Ought {
                agent: term_from_sexp(&rest[0])?,
                time: term_from_sexp(&rest[1])?,
                condition: boxed(&rest[2])?,
                action: boxed(&rest[3])?,
            })
        }
        "trait" => {
            expect_len(s, items, 2, head)?;
            Ok(Formula::Trait {
                body: boxed(&rest[0])?,
                agent: term_from_sexp(&rest[1])?,
            })
        }
        _ if ModalOp::from_keyword(head).is_some() => {
            let op = ModalOp::from_keyword(head).unwrap();
            let n_agents = rest.len().saturating_sub(2);
            if rest.len() < 2 || !op.agent_arities().contains(&n_agents) {
                let allowed: Vec<String> = op
                    .agent_arities()
                    .iter()
                    .map(|k| (k + 2).to_string())
                    .collect();
                return Err(SyntaxError::new(
                    format!(
                        "`{head}` expects {} argument(s), got {}",
                        allowed.join(" or "),
                        rest.len()
                    ),
                    s.span,
                ));
            }
            let agents = rest[..n_agents]
                .iter()
                .map(term_from_sexp)
                .collect::<Result<_, _>>()?;
            Ok(Formula::Modal {
                op,
                agents,
                time: term_from_sexp(&rest[n_agents])?,
                body: boxed(&rest[n_agents + 1])?,
            })
        }
        _ if Comparison::from_symbol(head).is_some()
            && rest.first().and_then(Sexp::head) == Some("nu") =>
        {
            expect_len(s, items, 2, head)?;
            let nu = rest[0].list().unwrap();
            if nu.len() != 3 {
                return Err(SyntaxError::new(
                    "`nu` expects an event and a moment",
                    rest[0].span,
                ));
            }
            Ok(Formula::Utility(UtilityAtom {
                event: term_from_sexp(&nu[1])?,
                time: term_from_sexp(&nu[2])?,
                cmp: Comparison::from_symbol(head).unwrap(),
                value: parse_rational(&rest[1])?,
            }))
        }
        "nu" => Err(SyntaxError::new(
            "`nu` may only appear as `(> (nu <event> <moment>) <value>)`",
            s.span,
        )),
        _ => {
            let pred = if let Some(name) = head.strip_prefix('?') {
                if !is_identifier(name) {
                    return Err(SyntaxError::new(
                        format!("malformed predicate variable `{head}`"),
                        head_sexp.span,
                    ));
                }
                Pred::Var(name.to_string())
            } else if head == EQUALITY || (is_identifier(head) && !RESERVED.contains(&head)) {
                Pred::Sym(head.to_string())
            } else {
                return Err(SyntaxError::new(
                    format!("`{head}` cannot be used as a predicate"),
                    head_sexp.span,
                ));
            };
            let args = rest.iter().map(term_from_sexp).collect::<Result<_, _>>()?;
            Ok(Formula::Atom { pred, args })
        }
    }
}

fn locate(mut e: SortError, s: &Sexp) -> SortError {
    e.location = Some(s.locate(&e.path));
    e
}

/// Parse and sort-check a formula.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let s = parse_sexp(text)?;
    formula_from_sexp_checked(&s, sig)
}

pub fn formula_from_sexp_checked(s: &Sexp, sig: &Signature) -> Result<Formula, ParseError> {
    let f = formula_from_sexp(s)?;
    check_sorts(&f, sig).map_err(|e| locate(e, s))?;
    Ok(f)
}

/// Parse and sort-check a term, returning it with its sort.
pub fn parse_term(text: &str, sig: &Signature) -> Result<(Term, Sort), ParseError> {
    let s = parse_sexp(text)?;
    term_from_sexp_checked(&s, sig)
}

pub fn term_from_sexp_checked(s: &Sexp, sig: &Signature) -> Result<(Term, Sort), ParseError> {
    let t = term_from_sexp(s)?;
    let sort = sort_of(&t, sig).map_err(|e| locate(e, s))?;
    Ok((t, sort))
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => {
            let _ = write!(out, "?{}:{}", v.name, v.sort);
        }
        Term::Const(c) => out.push_str(c),
        Term::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Term::App(f, args) => {
            out.push('(');
            out.push_str(f);
            for a in args {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

pub fn print_rational(r: &Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn write_list(out: &mut String, head: &str, terms: &[&Term], formulas: &[&Formula]) {
    out.push('(');
    out.push_str(head);
    for t in terms {
        out.push(' ');
        write_term(out, t);
    }
    for f in formulas {
        out.push(' ');
        write_formula(out, f);
    }
    out.push(')');
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom { pred, args } => {
            let head = match pred {
                Pred::Sym(s) => s.clone(),
                Pred::Var(v) => format!("?{v}"),
            };
            if args.is_empty() {
                out.push_str(&head);
            } else {
                write_list(out, &head, &args.iter().collect::<Vec<_>>(), &[]);
            }
        }
        Formula::Not(g) => write_list(out, "not", &[], &[g]),
        Formula::And(gs) => write_list(out, "and", &[], &gs.iter().collect::<Vec<_>>()),
        Formula::Or(gs) => write_list(out, "or", &[], &gs.iter().collect::<Vec<_>>()),
        Formula::Implies(a, b) => write_list(out, "implies", &[], &[a, b]),
        Formula::Iff(a, b) => write_list(out, "iff", &[], &[a, b]),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let head = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            write_list(out, head, &[&Term::Var(v.clone())], &[body]);
        }
        Formula::Count { bound, var, body } => {
            let (head, n) = match bound {
                CountBound::AtLeast(n) => ("exists>=", n),
                CountBound::Exactly(n) => ("exists!", n),
            };
            let _ = write!(out, "({head} {n} ");
            write_term(out, &Term::Var(var.clone()));
            out.push(' ');
            write_formula(out, body);
            out.push(')');
        }
        Formula::Modal {
            op,
            agents,
            time,
            body,
        } => {
            let terms: Vec<&Term> = agents.iter().chain(Some(time)).collect();
            write_list(out, op.keyword(), &terms, &[body]);
        }
        Formula::Ought {
            agent,
            time,
            condition,
            action,
        } => write_list(out, "ought", &[agent, time], &[condition, action]),
        Formula::Trait { body, agent } => {
            out.push_str("(trait ");
            write_formula(out, body);
            out.push(' ');
            write_term(out, agent);
            out.push(')');
        }
        Formula::Utility(u) => {
            let _ = write!(out, "({} (nu ", u.cmp.symbol());
            write_term(out, &u.event);
            out.push(' ');
            write_term(out, &u.time);
            let _ = write!(out, ") {})", print_rational(&u.value));
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare_constant("l", Sort::agent()).unwrap();
        s.declare_constant("e", Sort::agent()).unwrap();
        s.declare_constant("d", Sort::agent()).unwrap();
        s.declare_constant("a", Sort::agent()).unwrap();
        s.declare_constant("x", Sort::object()).unwrap();
        s.declare_function("utter", vec![Sort::object()], Sort::action_type())
            .unwrap();
        s.declare_predicate("hungry", vec![Sort::object()]).unwrap();
        s
    }

    #[test]
    fn parses_admiration_fluent() {
        let f = parse_formula("(holds (admires l e (utter x)) 3)", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::holds(
                Term::app(
                    "admires",
                    vec![
                        Term::constant("l"),
                        Term::constant("e"),
                        Term::app("utter", vec![Term::constant("x")])
                    ]
                ),
                Term::Int(3)
            )
        );
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        assert!(matches!(
            parse_formula("", &sig()),
            Err(ParseError::Syntax(_))
        ));
    }

    #[test]
    fn belief_about_utility() {
        let f = parse_formula("(believes d 2 (> (nu (action a (utter x)) 2) 0))", &sig()).unwrap();
        let (agent, time, body) = f.as_belief().unwrap();
        assert_eq!(agent, &Term::constant("d"));
        assert_eq!(time, &Term::Int(2));
        assert!(matches!(body, Formula::Utility(u) if u.cmp == Comparison::Gt));
    }

    #[test]
    fn prints_sorted_variables() {
        let f = Formula::atom("hungry", vec![Term::var("X", Sort::object())]);
        assert_eq!(print_formula(&f), "(hungry ?X:Object)");
    }

    #[test]
    fn nested_beliefs_round_trip() {
        let src = "(believes d 2 (believes a 1 (hungry x)))";
        let f = parse_formula(src, &sig()).unwrap();
        assert_eq!(print_formula(&f), src);
        assert_eq!(parse_formula(&print_formula(&f), &sig()).unwrap(), f);
    }

    #[test]
    fn sort_errors_carry_locations() {
        let err = parse_formula("(hungry\n   d)", &sig()).unwrap_err();
        match err {
            ParseError::Sort(e) => {
                assert_eq!(e.location, Some(crate::kernel::Span { line: 2, column: 4 }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rationals() {
        let f = parse_formula("(<= (nu (action a (utter x)) 0) -3/6)", &sig()).unwrap();
        assert_eq!(print_formula(&f), "(<= (nu (action a (utter x)) 0) -1/2)");
        assert!(parse_formula("(> (nu (action a (utter x)) 0) 1/0)", &sig()).is_err());
    }

    #[test]
    fn says_has_two_forms() {
        let s = sig();
        assert!(parse_formula("(says a d 1 (hungry x))", &s).is_ok());
        assert!(parse_formula("(says a 1 (hungry x))", &s).is_ok());
        assert!(parse_formula("(says 1 (hungry x))", &s).is_err());
    }
}
