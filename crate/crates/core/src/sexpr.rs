//! A small s-expression reader and printer: symbols and lists, whitespace
//! insensitive, with `;` line comments.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Sym(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn sym(s: impl Into<String>) -> Sexp {
        Sexp::Sym(s.into())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items)
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Sexp::Sym(s) => Some(s),
            Sexp::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::Sym(_) => None,
            Sexp::List(items) => Some(items),
        }
    }

    /// The head symbol of a list form, if any.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|items| items.first()).and_then(Sexp::as_sym)
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(input: &'a str) -> Self {
        Reader {
            chars: input.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn read(&mut self) -> Result<Sexp> {
        self.skip_trivia();
        match self.chars.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(self.err("unclosed parenthesis")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items));
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(')') => Err(self.err("unmatched closing parenthesis")),
            _ => {
                let mut sym = String::new();
                while let Some(c) = self.chars.peek() {
                    if c.is_whitespace() || *c == '(' || *c == ')' || *c == ';' {
                        break;
                    }
                    sym.push(*c);
                    self.bump();
                }
                Ok(Sexp::Sym(sym))
            }
        }
    }

    fn read_all(&mut self) -> Result<Vec<Sexp>> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            if self.chars.peek().is_none() {
                return Ok(out);
            }
            out.push(self.read()?);
        }
    }
}

pub fn parse_all(input: &str) -> Result<Vec<Sexp>> {
    Reader::new(input).read_all()
}

pub fn parse_one(input: &str) -> Result<Sexp> {
    let mut r = Reader::new(input);
    let s = r.read()?;
    r.skip_trivia();
    if r.chars.peek().is_some() {
        return Err(r.err("trailing input after expression"));
    }
    Ok(s)
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Sym(s) => write!(f, "{s}"),
            Sexp::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Indented rendering: lists whose compact form exceeds the width break
/// after their head.
pub fn pretty(s: &Sexp, width: usize) -> String {
    let mut out = String::new();
    pretty_rec(s, 0, width, &mut out);
    out
}

fn pretty_rec(s: &Sexp, indent: usize, width: usize, out: &mut String) {
    let compact = s.to_string();
    if indent + compact.len() <= width || matches!(s, Sexp::Sym(_)) {
        out.push_str(&compact);
        return;
    }
    let Sexp::List(items) = s else { unreachable!() };
    out.push('(');
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
            out.push_str(&" ".repeat(indent + 2));
        }
        pretty_rec(item, indent + 2, width, out);
    }
    out.push(')');
}
