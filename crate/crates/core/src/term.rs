//! Terms over an operation signature, with an s-expression reader and printer.
//!
//! Syntax: variables are `x1`, `x2`, ...; an application is `(<op> t1 ... tk)`. A bare symbol
//! that is not a variable is read as a nullary application, so `0` and `(0)` are the same term.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Variable `x_i`, 1-indexed.
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        assert!(i >= 1, "variables are 1-indexed");
        Term::Var(i)
    }

    pub fn app(op: impl Into<String>, children: Vec<Term>) -> Term {
        Term::App(op.into(), children)
    }

    /// `op(x1, ..., xn)`.
    pub fn basic(op: impl Into<String>, n: usize) -> Term {
        Term::App(op.into(), (1..=n).map(Term::Var).collect())
    }

    /// Largest variable index occurring in the term, 0 for ground terms.
    pub fn max_var(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::App(_, children) => children.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, children) => 1 + children.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, children) => 1 + children.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replaces `x_i` by `args[i - 1]`. Variables beyond `args` are left alone.
    pub fn substitute(&self, args: &[Term]) -> Term {
        match self {
            Term::Var(i) => args.get(i - 1).cloned().unwrap_or(Term::Var(*i)),
            Term::App(op, children) => Term::App(
                op.clone(),
                children.iter().map(|c| c.substitute(args)).collect(),
            ),
        }
    }

    /// `self(x_{slots[0]}, x_{slots[1]}, ...)`: substitutes variables by variables.
    pub fn with_slots(&self, slots: &[usize]) -> Term {
        let args: Vec<Term> = slots.iter().map(|&v| Term::Var(v)).collect();
        self.substitute(&args)
    }

    /// Left-nested fold of `op` over `terms`, or `None` if `terms` is empty.
    pub fn left_nested(op: &str, terms: impl IntoIterator<Item = Term>) -> Option<Term> {
        terms
            .into_iter()
            .reduce(|acc, t| Term::App(op.to_string(), vec![acc, t]))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(op, children) if children.is_empty() => write!(f, "{op}"),
            Term::App(op, children) => {
                write!(f, "({op}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn format_term(t: &Term) -> String {
    t.to_string()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: unexpected end of input")]
    UnexpectedEnd { position: usize },
    #[error("syntax error at byte {position}: unexpected `{found}`")]
    Unexpected { position: usize, found: char },
    #[error("syntax error at byte {position}: expected an operation symbol")]
    MissingOperator { position: usize },
    #[error("syntax error at byte {position}: variable index must be at least 1")]
    ZeroVariable { position: usize },
    #[error("syntax error at byte {position}: trailing input")]
    Trailing { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::UnexpectedEnd { position }
            | ParseError::Unexpected { position, .. }
            | ParseError::MissingOperator { position }
            | ParseError::ZeroVariable { position }
            | ParseError::Trailing { position } => position,
        }
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

fn is_symbol_char(c: char) -> bool {
    !c.is_whitespace() && c != '(' && c != ')'
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn symbol(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !is_symbol_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(ParseError::UnexpectedEnd { position: self.pos }),
            Some(')') => Err(ParseError::Unexpected {
                position: self.pos,
                found: ')',
            }),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let op_pos = self.pos;
                let op = self.symbol();
                if variable_index(op).is_some() {
                    return Err(ParseError::MissingOperator { position: op_pos });
                }
                if op.is_empty() {
                    return match self.peek() {
                        None => Err(ParseError::UnexpectedEnd { position: self.pos }),
                        Some(_) => Err(ParseError::MissingOperator { position: op_pos }),
                    };
                }
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(ParseError::UnexpectedEnd { position: self.pos }),
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Term::App(op.to_string(), children));
                        }
                        Some(_) => children.push(self.term()?),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                let sym = self.symbol();
                match variable_index(sym) {
                    Some(0) => Err(ParseError::ZeroVariable { position: start }),
                    Some(i) => Ok(Term::Var(i)),
                    None => Ok(Term::App(sym.to_string(), Vec::new())),
                }
            }
        }
    }
}

fn variable_index(sym: &str) -> Option<usize> {
    let digits = sym.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut r = Reader { src, pos: 0 };
    let t = r.term()?;
    r.skip_ws();
    if r.pos != src.len() {
        return Err(ParseError::Trailing { position: r.pos });
    }
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
