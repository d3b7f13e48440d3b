//! Parser for algebra element expressions.
//!
//! ```text
//! element := ['+'|'-'] term (('+'|'-') term)*
//! term    := scalar '*' atom | scalar | atom
//! atom    := '[' path ';' path ']'      (Leavitt path algebra monomial)
//!          | NAME                       (groupoid morphism)
//! path    := NAME ('.' NAME)*
//! scalar  := [0-9]+ ('/' [0-9]+)?
//! ```
//!
//! A bare scalar stands for that multiple of the identity. The parser
//! produces a syntax tree with source positions; name resolution happens in
//! [`crate::lpa`] and [`crate::groupoid`] callers, which report unknown names
//! at their column.

use std::fmt;

use thiserror::Error;

/// A parse or resolution error at a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.column, self.message)
    }
}

impl ParseError {
    pub fn new(column: usize, message: impl Into<String>) -> Self {
        ParseError { column, message: message.into() }
    }

    /// Renders the error under the offending input line with a caret.
    pub fn render(&self, input: &str) -> String {
        let pad = " ".repeat(self.column.saturating_sub(1));
        format!("{input}\n{pad}^ {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub value: T,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    /// No atom: the term is a bare scalar.
    Identity,
    Monomial { alpha: Vec<Spanned<String>>, beta: Vec<Spanned<String>> },
    Name(Spanned<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    /// Scalar literal text, `None` for an implicit 1.
    pub scalar: Option<Spanned<String>>,
    pub atom: Atom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Number(&'a str),
    Name(&'a str),
    Sym(char),
    End,
}

struct Lexer<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn column(&self, byte: usize) -> usize {
        self.input[..byte].chars().count() + 1
    }

    fn skip_ws(&mut self) {
        let rest = &self.input[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and its 1-based column.
    fn next(&mut self) -> Result<(Tok<'a>, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let col = self.column(start);
        let rest = &self.input[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, col));
        };
        if c.is_ascii_digit() {
            let mut end = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            if rest[end..].starts_with('/') {
                let tail = &rest[end + 1..];
                let den = tail.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(tail.len());
                if den == 0 {
                    return Err(ParseError::new(self.column(start + end + 1), "expected denominator after `/`"));
                }
                end += 1 + den;
            }
            self.pos += end;
            return Ok((Tok::Number(&rest[..end]), col));
        }
        if c.is_alphabetic() || c == '_' {
            let end = rest
                .find(|ch: char| !(ch.is_alphanumeric() || ch == '_' || ch == '\''))
                .unwrap_or(rest.len());
            self.pos += end;
            return Ok((Tok::Name(&rest[..end]), col));
        }
        if "+-*[];.".contains(c) {
            self.pos += c.len_utf8();
            return Ok((Tok::Sym(c), col));
        }
        Err(ParseError::new(col, format!("unexpected character `{c}`")))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok<'a>,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { input, pos: 0 };
        let (tok, col) = lexer.next()?;
        Ok(Parser { lexer, tok, col })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, col) = self.lexer.next()?;
        self.tok = tok;
        self.col = col;
        Ok(())
    }

    fn describe(&self) -> String {
        match self.tok {
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expected(&self, what: &str) -> ParseError {
        ParseError::new(self.col, format!("expected {what}, found {}", self.describe()))
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.tok != Tok::Sym(c) {
            return Err(self.expected(&format!("`{c}`")));
        }
        self.bump()
    }

    fn element(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        let mut negative = false;
        if let Tok::Sym(c @ ('+' | '-')) = self.tok {
            negative = c == '-';
            self.bump()?;
        }
        loop {
            terms.push(self.term(negative)?);
            match self.tok {
                Tok::Sym(c @ ('+' | '-')) => {
                    negative = c == '-';
                    self.bump()?;
                }
                Tok::End => return Ok(terms),
                _ => return Err(self.expected("`+`, `-` or end of input")),
            }
        }
    }

    fn term(&mut self, negative: bool) -> Result<Term, ParseError> {
        let scalar = match self.tok {
            Tok::Number(n) => {
                let s = Spanned { value: n.to_string(), column: self.col };
                self.bump()?;
                if self.tok != Tok::Sym('*') {
                    return Ok(Term { negative, scalar: Some(s), atom: Atom::Identity });
                }
                self.bump()?;
                Some(s)
            }
            _ => None,
        };
        let atom = self.atom()?;
        Ok(Term { negative, scalar, atom })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.tok {
            Tok::Sym('[') => {
                self.bump()?;
                let alpha = self.path()?;
                self.expect_sym(';')?;
                let beta = self.path()?;
                self.expect_sym(']')?;
                Ok(Atom::Monomial { alpha, beta })
            }
            Tok::Name(n) => {
                let name = Spanned { value: n.to_string(), column: self.col };
                self.bump()?;
                Ok(Atom::Name(name))
            }
            _ => Err(self.expected("a scalar, `[` or a name")),
        }
    }

    fn path(&mut self) -> Result<Vec<Spanned<String>>, ParseError> {
        let mut names = Vec::new();
        loop {
            let Tok::Name(n) = self.tok else {
                return Err(self.expected("a vertex or edge name"));
            };
            names.push(Spanned { value: n.to_string(), column: self.col });
            self.bump()?;
            if self.tok != Tok::Sym('.') {
                return Ok(names);
            }
            self.bump()?;
        }
    }
}

/// Parses an element expression into signed terms.
pub fn parse_element(input: &str) -> Result<Vec<Term>, ParseError> {
    Parser::new(input)?.element()
}
