//! Parser for `.sim` files.
//!
//! ```text
//! ~tnorm = godel.
//! elegant/1 ~ vanguardist/1 = 0.6.
//! metro ~ bus = 0.5.       % arity defaults to 0
//! ```

use std::sync::Arc;

use super::{SimError, SimilarityEquation};
use crate::lattice::Lattice;
use crate::syntax::Symbol;

/// Equations in source order and the last `~tnorm` directive, if any.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimFile {
    pub equations: Vec<SimilarityEquation>,
    pub tnorm: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Slash,
    Tilde,
    Eq,
    Dot,
    Eof,
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SimError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            '/' => {
                i += 1;
                Tok::Slash
            }
            '~' => {
                i += 1;
                Tok::Tilde
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                Tok::Number(chars[start..i].iter().collect())
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => {
                return Err(SimError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Spanned { tok, line, col });
        col += i - start;
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
    lat: &'a Lattice,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> SimError {
        let s = &self.toks[self.pos];
        SimError::Syntax {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SimError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn symbol(&mut self) -> Result<Symbol, SimError> {
        let name = match self.bump() {
            Tok::Ident(s) if s.starts_with(|c: char| c.is_ascii_lowercase()) => s,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a symbol name"));
            }
        };
        let arity = if *self.peek() == Tok::Slash {
            self.bump();
            match self.bump() {
                Tok::Number(n) => n.parse().map_err(|_| {
                    self.pos -= 1;
                    self.error(format!("bad arity '{n}'"))
                })?,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected an arity after '/'"));
                }
            }
        } else {
            0
        };
        Ok(Symbol {
            name: Arc::from(name),
            arity,
        })
    }
}

/// Parses a `.sim` file; degrees are read by `lat`.
pub fn parse_sim(text: &str, lat: &Lattice) -> Result<SimFile, SimError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        lat,
    };
    let mut file = SimFile::default();
    while *p.peek() != Tok::Eof {
        if *p.peek() == Tok::Tilde {
            p.bump();
            match p.bump() {
                Tok::Ident(w) if w == "tnorm" => {}
                _ => {
                    p.pos -= 1;
                    return Err(p.error("expected 'tnorm' after '~'"));
                }
            }
            p.expect(Tok::Eq, "'='")?;
            match p.bump() {
                Tok::Ident(label) => file.tnorm = Some(label),
                _ => {
                    p.pos -= 1;
                    return Err(p.error("expected a t-norm label"));
                }
            }
            if *p.peek() == Tok::Dot {
                p.bump();
            }
            continue;
        }
        let line = p.line();
        let left = p.symbol()?;
        p.expect(Tok::Tilde, "'~'")?;
        let right = p.symbol()?;
        p.expect(Tok::Eq, "'='")?;
        let value_line = p.line();
        let text = match p.bump() {
            Tok::Number(s) | Tok::Ident(s) => s,
            _ => {
                p.pos -= 1;
                return Err(p.error("expected a degree"));
            }
        };
        let degree = p.lat.parse_literal(&text).ok_or(SimError::NotAMember {
            line: value_line,
            value: text,
        })?;
        p.expect(Tok::Dot, "'.' after equation")?;
        if left.arity != right.arity {
            return Err(SimError::ArityMismatch { line, left, right });
        }
        file.equations.push(SimilarityEquation {
            left,
            right,
            degree,
        });
    }
    Ok(file)
}
