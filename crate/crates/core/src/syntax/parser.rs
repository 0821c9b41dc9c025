//! Recursive-descent parser for `.fpl` programs and goals.
//!
//! ```text
//! rule    := atom [ '<-'[label] body [ 'with' truth ] ] '.'
//! body    := conj { '|'[label] conj }
//! conj    := primary { '&'[label] primary }
//! primary := truth | atom | '(' body ')'
//!          | ('&' | '|' | '@') label? '(' body { ',' body } ')'
//! term    := Var | number | ident [ '(' term { ',' term } ')' ]
//! ```
//!
//! `%` starts a line comment. Truth literals are recognised by the active
//! lattice: numbers on the unit interval, element names on finite carriers.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{Atom, ConnectiveKind, ConnectiveRef, Expression, Rule, Symbol, Term, Var};
use crate::lattice::Lattice;

/// Label used for `&` and `|` written without one.
pub const DEFAULT_LOGIC: &str = "godel";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// What the parser needs to know beyond the text itself.
#[derive(Clone, Copy)]
pub struct ParseContext<'a> {
    pub lattice: &'a Lattice,
    pub default_logic: &'a str,
}

impl<'a> ParseContext<'a> {
    pub fn new(lattice: &'a Lattice) -> Self {
        ParseContext {
            lattice,
            default_logic: DEFAULT_LOGIC,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Arrow(Option<String>),
    Sigil(ConnectiveKind, Option<String>),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Number(s) => write!(f, "'{s}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Arrow(l) => write!(f, "'<-{}'", l.as_deref().unwrap_or("")),
            Tok::Sigil(k, l) => write!(f, "'{}{}'", k.sigil(), l.as_deref().unwrap_or("")),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let read_label = |from: usize| -> (Option<String>, usize) {
            let mut j = from;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            let label: String = chars[from..j].iter().collect();
            ((!label.is_empty()).then_some(label), j - from)
        };
        let tok = match c {
            '(' => {
                advance(1, &mut i);
                Tok::LParen
            }
            ')' => {
                advance(1, &mut i);
                Tok::RParen
            }
            ',' => {
                advance(1, &mut i);
                Tok::Comma
            }
            '.' => {
                advance(1, &mut i);
                Tok::Dot
            }
            '<' if chars.get(i + 1) == Some(&'-') => {
                let (label, n) = read_label(i + 2);
                advance(2 + n, &mut i);
                Tok::Arrow(label)
            }
            '&' | '|' | '@' => {
                let kind = match c {
                    '&' => ConnectiveKind::Conjunction,
                    '|' => ConnectiveKind::Disjunction,
                    _ => ConnectiveKind::Aggregator,
                };
                let (label, n) = read_label(i + 1);
                advance(1 + n, &mut i);
                Tok::Sigil(kind, label)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let s: String = chars[i..j].iter().collect();
                advance(j - i, &mut i);
                Tok::Number(s)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                advance(j - i, &mut i);
                if c.is_lowercase() {
                    Tok::Ident(s)
                } else {
                    Tok::Var(s)
                }
            }
            other => return Err(err(line, col, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned {
            tok,
            line: start_line,
            col: start_col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ctx: ParseContext<'a>,
    anon: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &str, ctx: ParseContext<'a>) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            ctx,
            anon: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn rule(&mut self, id: usize) -> Result<Rule, ParseError> {
        let head = match self.peek().clone() {
            Tok::Ident(name) => {
                if self.ctx.lattice.has_named_elements()
                    && self.ctx.lattice.parse_literal(&name).is_some()
                    && *self.peek_at(1) != Tok::LParen
                {
                    return Err(self.error_here(format!(
                        "rule head must be an atom, found truth value '{name}'"
                    )));
                }
                self.bump();
                self.atom_rest(&name)?
            }
            Tok::Number(_) | Tok::Sigil(..) | Tok::Var(_) | Tok::LParen => {
                return Err(
                    self.error_here(format!("rule head must be an atom, found {}", self.peek()))
                )
            }
            _ => return Err(self.unexpected("a rule head")),
        };
        let body = match self.peek().clone() {
            Tok::Dot => Expression::TruthLit(self.ctx.lattice.top()),
            Tok::Arrow(label) => {
                self.bump();
                let body = self.body()?;
                if matches!(self.peek(), Tok::Ident(w) if w == "with") {
                    self.bump();
                    let weight = self.truth_literal()?;
                    let label = label.unwrap_or_else(|| self.ctx.default_logic.to_string());
                    Expression::ConnApp(
                        ConnectiveRef::conjunction(label),
                        vec![Expression::TruthLit(weight), body],
                    )
                } else {
                    body
                }
            }
            _ => return Err(self.unexpected("'<-' or '.'")),
        };
        self.expect(Tok::Dot, "'.' at end of rule")?;
        Ok(Rule { id, head, body })
    }

    fn truth_literal(&mut self) -> Result<crate::lattice::TruthValue, ParseError> {
        let text = match self.peek().clone() {
            Tok::Number(s) | Tok::Ident(s) => s,
            _ => return Err(self.unexpected("a truth value")),
        };
        match self.ctx.lattice.parse_literal(&text) {
            Some(v) => {
                self.bump();
                Ok(v)
            }
            None => Err(self.error_here(format!(
                "'{text}' is not a truth value of lattice '{}'",
                self.ctx.lattice.name()
            ))),
        }
    }

    fn atom_rest(&mut self, name: &str) -> Result<Atom, ParseError> {
        let args = if *self.peek() == Tok::LParen {
            self.bump();
            self.term_list()?
        } else {
            Vec::new()
        };
        Ok(Atom {
            predicate: Symbol {
                name: Arc::from(name),
                arity: args.len(),
            },
            args,
        })
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.term()?];
        loop {
            match self.bump() {
                Tok::Comma => args.push(self.term()?),
                Tok::RParen => return Ok(args),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("',' or ')'"));
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(name) => {
                self.bump();
                if name == "_" {
                    self.anon += 1;
                    Ok(Term::Var(Var::new(format!("_G{}", self.anon))))
                } else {
                    Ok(Term::Var(Var::new(name)))
                }
            }
            Tok::Number(n) => {
                self.bump();
                Ok(Term::Compound(
                    Symbol {
                        name: Arc::from(n),
                        arity: 0,
                    },
                    Vec::new(),
                ))
            }
            Tok::Ident(name) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen {
                    self.bump();
                    self.term_list()?
                } else {
                    Vec::new()
                };
                Ok(Term::Compound(
                    Symbol {
                        name: Arc::from(name),
                        arity: args.len(),
                    },
                    args,
                ))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn label_or_default(
        &self,
        kind: ConnectiveKind,
        label: Option<String>,
    ) -> Result<String, ParseError> {
        match (label, kind) {
            (Some(l), _) => Ok(l),
            (None, ConnectiveKind::Aggregator) => {
                Err(self.error_here("aggregators need a label, as in '@aver'"))
            }
            (None, _) => Ok(self.ctx.default_logic.to_string()),
        }
    }

    fn body(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.conj()?;
        while let Tok::Sigil(ConnectiveKind::Disjunction, label) = self.peek().clone() {
            self.bump();
            let label = self.label_or_default(ConnectiveKind::Disjunction, label)?;
            let rhs = self.conj()?;
            lhs = Expression::ConnApp(
                ConnectiveRef::new(ConnectiveKind::Disjunction, label),
                vec![lhs, rhs],
            );
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.primary()?;
        while let Tok::Sigil(ConnectiveKind::Conjunction, label) = self.peek().clone() {
            self.bump();
            let label = self.label_or_default(ConnectiveKind::Conjunction, label)?;
            let rhs = self.primary()?;
            lhs = Expression::ConnApp(ConnectiveRef::conjunction(label), vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        match self.peek().clone() {
            Tok::Number(_) => Ok(Expression::TruthLit(self.truth_literal()?)),
            Tok::LParen => {
                self.bump();
                let e = self.body()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Sigil(kind, label) => {
                self.bump();
                let label = self.label_or_default(kind, label)?;
                self.expect(Tok::LParen, "'(' after connective")?;
                let mut args = vec![self.body()?];
                loop {
                    match self.bump() {
                        Tok::Comma => args.push(self.body()?),
                        Tok::RParen => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("',' or ')'"));
                        }
                    }
                }
                Ok(Expression::ConnApp(ConnectiveRef::new(kind, label), args))
            }
            Tok::Ident(name) => {
                if *self.peek_at(1) != Tok::LParen && self.ctx.lattice.has_named_elements() {
                    if let Some(v) = self.ctx.lattice.parse_literal(&name) {
                        self.bump();
                        return Ok(Expression::TruthLit(v));
                    }
                }
                self.bump();
                Ok(Expression::Atom(self.atom_rest(&name)?))
            }
            Tok::Var(v) => {
                Err(self.error_here(format!("variable '{v}' cannot stand for a formula")))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a program; rules are numbered `1..=n` in source order.
pub fn parse_program(text: &str, ctx: &ParseContext<'_>) -> Result<Vec<Rule>, ParseError> {
    let mut p = Parser::new(text, *ctx)?;
    let mut rules = Vec::new();
    while *p.peek() != Tok::Eof {
        p.anon = 0;
        let id = rules.len() + 1;
        rules.push(p.rule(id)?);
    }
    Ok(rules)
}

/// Parses a single goal formula, optionally terminated by a dot.
pub fn parse_goal(text: &str, ctx: &ParseContext<'_>) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text, *ctx)?;
    let e = p.body()?;
    if *p.peek() == Tok::Dot {
        p.bump();
    }
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of goal"));
    }
    Ok(e)
}
