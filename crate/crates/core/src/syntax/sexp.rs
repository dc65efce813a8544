use std::fmt;

use thiserror::Error;

use crate::kernel::Span;

const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SexpKind {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sexp {
    pub kind: SexpKind,
    pub span: Span,
}

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(a) => Some(a),
            SexpKind::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            SexpKind::Atom(_) => None,
        }
    }

    /// Head symbol of a list, if it is an atom.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|l| l.first()).and_then(Sexp::atom)
    }

    /// Follow a path of child indices; stops at the deepest existing node.
    pub fn locate(&self, path: &[usize]) -> Span {
        let mut cur = self;
        for &i in path {
            match cur.list().and_then(|l| l.get(i)) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur.span
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SexpKind::Atom(a) => f.write_str(a),
            SexpKind::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{it}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {span}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub span: Span,
}

impl SyntaxError {
    pub fn new(message: impl Into<String>, span: Span) -> Self {
        SyntaxError {
            message: message.into(),
            span,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
    fn pos(&self) -> Span {
        Span {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self, depth: usize) -> Result<Sexp, SyntaxError> {
        self.skip_trivia();
        let start = self.pos();
        match self.chars.peek().copied() {
            None => Err(SyntaxError::new("unexpected end of input", start)),
            Some(')') => Err(SyntaxError::new("unexpected `)`", start)),
            Some('(') => {
                if depth >= MAX_NESTING {
                    return Err(SyntaxError::new("expression nested too deeply", start));
                }
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(SyntaxError::new("unclosed `(`", start)),
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.read(depth + 1)?),
                    }
                }
                Ok(Sexp {
                    kind: SexpKind::List(items),
                    span: start,
                })
            }
            Some(_) => {
                let mut tok = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    tok.push(c);
                    self.bump();
                }
                Ok(Sexp {
                    kind: SexpKind::Atom(tok),
                    span: start,
                })
            }
        }
    }
}

/// Read every top-level s-expression in `text`.
pub fn parse_sexps(text: &str) -> Result<Vec<Sexp>, SyntaxError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        r.skip_trivia();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read(0)?);
    }
}

/// Read exactly one s-expression.
pub fn parse_sexp(text: &str) -> Result<Sexp, SyntaxError> {
    let mut all = parse_sexps(text)?;
    match all.len() {
        0 => Err(SyntaxError::new(
            "empty input",
            Span { line: 1, column: 1 },
        )),
        1 => Ok(all.pop().unwrap()),
        _ => Err(SyntaxError::new(
            "expected a single expression",
            all[1].span,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = parse_sexp("(holds\n  (new x) 3) ; trailing").unwrap();
        assert_eq!(s.head(), Some("holds"));
        assert_eq!(s.locate(&[1]), Span { line: 2, column: 3 });
        assert_eq!(s.to_string(), "(holds (new x) 3)");
    }

    #[test]
    fn reports_unbalanced_input() {
        assert!(parse_sexp("(a (b)").is_err());
        assert!(parse_sexp(")").is_err());
        assert!(parse_sexp("").is_err());
        assert!(parse_sexp("a b").is_err());
    }

    #[test]
    fn refuses_pathological_nesting() {
        let deep = "(".repeat(10_000);
        assert!(parse_sexps(&deep).is_err());
    }
}
