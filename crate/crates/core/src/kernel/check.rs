use std::fmt;

use thiserror::Error;

use super::ast::{Formula, Pred, Term};
use super::sort::{Signature, Sort, EQUALITY};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SortErrorKind {
    UnknownSymbol,
    ArityMismatch,
    SortMismatch,
}

impl fmt::Display for SortErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SortErrorKind::UnknownSymbol => "unknown symbol",
            SortErrorKind::ArityMismatch => "arity mismatch",
            SortErrorKind::SortMismatch => "sort mismatch",
        })
    }
}

/// Line/column of a source position (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A sort-checking diagnostic. `path` holds the child indices of the
/// offending node in the printed s-expression; the parser resolves it to a
/// source span.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind}: {message} (in `{subterm}`{})", .location.map(|s| format!(" at {s}")).unwrap_or_default())]
pub struct SortError {
    pub kind: SortErrorKind,
    pub message: String,
    pub subterm: String,
    pub path: Vec<usize>,
    pub location: Option<Span>,
}

/// A formula that passed sort checking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedFormula(Formula);

impl SortedFormula {
    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_inner(self) -> Formula {
        self.0
    }
}

struct Checker<'a> {
    sig: &'a Signature,
    path: Vec<usize>,
}

impl Checker<'_> {
    fn err(&self, kind: SortErrorKind, message: String, subterm: String) -> SortError {
        SortError {
            kind,
            message,
            subterm,
            path: self.path.clone(),
            location: None,
        }
    }

    fn at<T>(&mut self, idx: usize, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(idx);
        let out = f(self);
        self.path.pop();
        out
    }

    fn term(&mut self, t: &Term) -> Result<Sort, SortError> {
        match t {
            Term::Int(_) => Ok(Sort::moment()),
            Term::Var(v) => {
                if self.sig.has_sort(&v.sort) {
                    Ok(v.sort.clone())
                } else {
                    Err(self.err(
                        SortErrorKind::UnknownSymbol,
                        format!("unknown sort `{}`", v.sort),
                        crate::syntax::print_term(t),
                    ))
                }
            }
            Term::Const(c) => self.sig.constant_sort(c).cloned().ok_or_else(|| {
                self.err(
                    SortErrorKind::UnknownSymbol,
                    format!("undeclared constant `{c}`"),
                    c.clone(),
                )
            }),
            Term::App(f, args) => {
                let fsig = self.sig.function(f).cloned().ok_or_else(|| {
                    self.err(
                        SortErrorKind::UnknownSymbol,
                        format!("undeclared function `{f}`"),
                        crate::syntax::print_term(t),
                    )
                })?;
                if fsig.args.len() != args.len() {
                    return Err(self.err(
                        SortErrorKind::ArityMismatch,
                        format!(
                            "`{f}` takes {} argument(s), got {}",
                            fsig.args.len(),
                            args.len()
                        ),
                        crate::syntax::print_term(t),
                    ));
                }
                for (i, (a, want)) in args.iter().zip(&fsig.args).enumerate() {
                    self.at(i + 1, |c| c.expect(a, want))?;
                }
                Ok(fsig.result)
            }
        }
    }

    fn expect(&mut self, t: &Term, want: &Sort) -> Result<(), SortError> {
        let got = self.term(t)?;
        if self.sig.is_subsort(&got, want) {
            Ok(())
        } else {
            Err(self.err(
                SortErrorKind::SortMismatch,
                format!("expected {want}, found {got}"),
                crate::syntax::print_term(t),
            ))
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<(), SortError> {
        match f {
            Formula::Atom { pred, args } => self.atom(f, pred, args),
            Formula::Not(g) => self.at(1, |c| c.formula(g)),
            Formula::And(gs) | Formula::Or(gs) => {
                for (i, g) in gs.iter().enumerate() {
                    self.at(i + 1, |c| c.formula(g))?;
                }
                Ok(())
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.at(1, |c| c.formula(a))?;
                self.at(2, |c| c.formula(b))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                self.at(1, |c| c.term(&Term::Var(v.clone())))?;
                self.at(2, |c| c.formula(body))
            }
            Formula::Count { var, body, .. } => {
                self.at(2, |c| c.term(&Term::Var(var.clone())))?;
                self.at(3, |c| c.formula(body))
            }
            Formula::Modal {
                op,
                agents,
                time,
                body,
            } => {
                if !op.agent_arities().contains(&agents.len()) {
                    return Err(self.err(
                        SortErrorKind::ArityMismatch,
                        format!(
                            "`{}` does not take {} agent argument(s)",
                            op.keyword(),
                            agents.len()
                        ),
                        crate::syntax::print_formula(f),
                    ));
                }
                for (i, a) in agents.iter().enumerate() {
                    self.at(i + 1, |c| c.expect(a, &Sort::agent()))?;
                }
                let k = agents.len();
                self.at(k + 1, |c| c.expect(time, &Sort::moment()))?;
                self.at(k + 2, |c| c.formula(body))
            }
            Formula::Ought {
                agent,
                time,
                condition,
                action,
            } => {
                self.at(1, |c| c.expect(agent, &Sort::agent()))?;
                self.at(2, |c| c.expect(time, &Sort::moment()))?;
                self.at(3, |c| c.formula(condition))?;
                let inner = match action.as_ref() {
                    Formula::Not(g) => g.as_ref(),
                    g => g,
                };
                if inner.atom_args("happens").is_none() {
                    return self.at(4, |c| {
                        Err(c.err(
                            SortErrorKind::SortMismatch,
                            "obligation clause must be a (negated) happens atom".into(),
                            crate::syntax::print_formula(action),
                        ))
                    });
                }
                self.at(4, |c| c.formula(action))
            }
            Formula::Trait { body, agent } => {
                self.at(1, |c| c.formula(body))?;
                self.at(2, |c| c.expect(agent, &Sort::agent()))
            }
            Formula::Utility(u) => {
                let got = self.at(1, |c| c.at(1, |c| c.term(&u.event)))?;
                if !self.sig.is_subsort(&got, &Sort::event())
                    && !self.sig.is_subsort(&got, &Sort::action_type())
                {
                    return self.at(1, |c| {
                        c.at(1, |c| {
                            Err(c.err(
                                SortErrorKind::SortMismatch,
                                format!("expected Event or ActionType, found {got}"),
                                crate::syntax::print_term(&u.event),
                            ))
                        })
                    });
                }
                self.at(1, |c| c.at(2, |c| c.expect(&u.time, &Sort::moment())))
            }
        }
    }

    fn atom(&mut self, f: &Formula, pred: &Pred, args: &[Term]) -> Result<(), SortError> {
        match pred {
            Pred::Var(_) => {
                for (i, a) in args.iter().enumerate() {
                    self.at(i + 1, |c| c.term(a))?;
                }
                Ok(())
            }
            Pred::Sym(p) if p == EQUALITY => {
                if args.len() != 2 {
                    return Err(self.err(
                        SortErrorKind::ArityMismatch,
                        "`=` takes 2 arguments".into(),
                        crate::syntax::print_formula(f),
                    ));
                }
                let a = self.at(1, |c| c.term(&args[0]))?;
                let b = self.at(2, |c| c.term(&args[1]))?;
                if self.sig.join(&a, &b).is_none() {
                    return Err(self.err(
                        SortErrorKind::SortMismatch,
                        format!("cannot compare {a} with {b}"),
                        crate::syntax::print_formula(f),
                    ));
                }
                Ok(())
            }
            Pred::Sym(p) => {
                let want = self.sig.predicate(p).map(<[Sort]>::to_vec).ok_or_else(|| {
                    self.err(
                        SortErrorKind::UnknownSymbol,
                        format!("undeclared predicate `{p}`"),
                        crate::syntax::print_formula(f),
                    )
                })?;
                if want.len() != args.len() {
                    return Err(self.err(
                        SortErrorKind::ArityMismatch,
                        format!(
                            "`{p}` takes {} argument(s), got {}",
                            want.len(),
                            args.len()
                        ),
                        crate::syntax::print_formula(f),
                    ));
                }
                for (i, (a, s)) in args.iter().zip(&want).enumerate() {
                    self.at(i + 1, |c| c.expect(a, s))?;
                }
                Ok(())
            }
        }
    }
}

/// Sort of a term under `sig`.
pub fn sort_of(t: &Term, sig: &Signature) -> Result<Sort, SortError> {
    Checker {
        sig,
        path: Vec::new(),
    }
    .term(t)
}

pub fn check_sorts(formula: &Formula, sig: &Signature) -> Result<SortedFormula, SortError> {
    Checker {
        sig,
        path: Vec::new(),
    }
    .formula(formula)?;
    Ok(SortedFormula(formula.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ModalOp;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare_constant("x", Sort::object()).unwrap();
        s.declare_constant("a", Sort::agent()).unwrap();
        s.declare_function("new", vec![Sort::object()], Sort::fluent())
            .unwrap();
        s.declare_function("utter", vec![Sort::object()], Sort::action_type())
            .unwrap();
        s
    }

    #[test]
    fn holds_over_fluent_is_well_sorted() {
        let f = Formula::holds(Term::app("new", vec![Term::constant("x")]), Term::Int(1));
        assert!(check_sorts(&f, &sig()).is_ok());
    }

    #[test]
    fn fluent_is_not_an_event() {
        let f = Formula::happens(Term::app("new", vec![Term::constant("x")]), Term::Int(1));
        let e = check_sorts(&f, &sig()).unwrap_err();
        assert_eq!(e.kind, SortErrorKind::SortMismatch);
        assert_eq!(e.path, vec![1]);
        assert_eq!(e.subterm, "(new x)");
    }

    #[test]
    fn action_application_has_sort_action() {
        let t = Term::action(
            Term::constant("a"),
            Term::app("utter", vec![Term::constant("x")]),
        );
        let s = sig();
        assert_eq!(sort_of(&t, &s).unwrap(), Sort::action());
        let f = Formula::happens(t, Term::Int(2));
        assert!(check_sorts(&f, &s).is_ok());
    }

    #[test]
    fn reports_unknown_and_arity() {
        let s = sig();
        let f = Formula::holds(Term::app("nope", vec![]), Term::Int(1));
        assert_eq!(
            check_sorts(&f, &s).unwrap_err().kind,
            SortErrorKind::UnknownSymbol
        );
        let f = Formula::atom("holds", vec![Term::Int(1)]);
        assert_eq!(
            check_sorts(&f, &s).unwrap_err().kind,
            SortErrorKind::ArityMismatch
        );
    }

    #[test]
    fn modal_agent_arity_is_checked() {
        let p = Formula::holds(Term::app("new", vec![Term::constant("x")]), Term::Int(1));
        let bad = Formula::modal(
            ModalOp::Believes,
            vec![Term::constant("a"), Term::constant("a")],
            Term::Int(1),
            p.clone(),
        );
        assert_eq!(
            check_sorts(&bad, &sig()).unwrap_err().kind,
            SortErrorKind::ArityMismatch
        );
        let one_agent_says =
            Formula::modal(ModalOp::Says, vec![Term::constant("a")], Term::Int(1), p);
        assert!(check_sorts(&one_agent_says, &sig()).is_ok());
    }
}
