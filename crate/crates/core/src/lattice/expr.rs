//! The small expression language used to define connectives and orders in
//! lattice files.
//!
//! Over the unit interval an expression may use its parameters, numeric
//! literals, `+ - * / ^`, `min`, `max` and parentheses. Over a finite carrier
//! only parameters, element names, `min` (meet) and `max` (join) are allowed,
//! which keeps every definable function total.

use super::FiniteCarrier;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Param(usize),
    Num(f64),
    Elem(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
}

/// A binary comparison between two real expressions; used for `leq`.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub op: CmpOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Comparison {
    pub fn eval(&self, xs: &[f64]) -> bool {
        let a = self.lhs.eval_real(xs);
        let b = self.rhs.eval_real(xs);
        match self.op {
            CmpOp::Le => a <= b,
            CmpOp::Lt => a < b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
            CmpOp::Eq => a == b,
        }
    }
}

impl Expr {
    pub fn eval_real(&self, xs: &[f64]) -> f64 {
        match self {
            Expr::Param(i) => xs[*i],
            Expr::Num(v) => *v,
            Expr::Elem(_) => f64::NAN,
            Expr::Neg(e) => -e.eval_real(xs),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval_real(xs), b.eval_real(xs));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Min(es) => es
                .iter()
                .map(|e| e.eval_real(xs))
                .fold(f64::INFINITY, f64::min),
            Expr::Max(es) => es
                .iter()
                .map(|e| e.eval_real(xs))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Evaluates over element indices; `None` when a meet or join is missing.
    pub fn eval_finite(&self, fc: &FiniteCarrier, xs: &[usize]) -> Option<usize> {
        match self {
            Expr::Param(i) => Some(xs[*i]),
            Expr::Elem(i) => Some(*i),
            Expr::Min(es) | Expr::Max(es) => {
                let is_min = matches!(self, Expr::Min(_));
                let mut it = es.iter();
                let mut acc = it.next()?.eval_finite(fc, xs)?;
                for e in it {
                    let v = e.eval_finite(fc, xs)?;
                    acc = if is_min {
                        fc.meet(acc, v)?
                    } else {
                        fc.join(acc, v)?
                    };
                }
                Some(acc)
            }
            Expr::Num(_) | Expr::Neg(_) | Expr::Bin(..) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    Cmp(CmpOp),
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Tok::Op(c));
                i += 1
            }
            '<' | '>' | '=' => {
                let next = chars.get(i + 1).copied();
                let (op, len) = match (c, next) {
                    ('<', Some('=')) => (CmpOp::Le, 2),
                    ('=', Some('<')) => (CmpOp::Le, 2),
                    ('>', Some('=')) => (CmpOp::Ge, 2),
                    ('=', Some('=')) => (CmpOp::Eq, 2),
                    ('<', _) => (CmpOp::Lt, 1),
                    ('>', _) => (CmpOp::Gt, 1),
                    _ => (CmpOp::Eq, 1),
                };
                out.push(Tok::Cmp(op));
                i += len;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse().map_err(|_| format!("bad number '{s}'"))?;
                out.push(Tok::Num(v));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    params: &'a [String],
    finite: Option<&'a FiniteCarrier>,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), String> {
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err(format!("expected {tok:?}, found {t:?}")),
            None => Err(format!("expected {tok:?}, found end of expression")),
        }
    }

    fn arith(&self, op: char) -> Result<(), String> {
        if self.finite.is_some() {
            Err(format!(
                "operator '{op}' is not defined on a finite carrier"
            ))
        } else {
            Ok(())
        }
    }

    fn sum(&mut self) -> Result<Expr, String> {
        let mut lhs = self.product()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.arith(op)?;
            self.pos += 1;
            let rhs = self.product()?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.arith(op)?;
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.arith('-')?;
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.arith('^')?;
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.bump() {
            Some(Tok::Num(v)) => {
                if self.finite.is_some() {
                    return Err(format!("numeric literal {v} on a finite carrier"));
                }
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(i) = self.params.iter().position(|p| *p == name) {
                    return Ok(Expr::Param(i));
                }
                if name == "min" || name == "max" {
                    self.expect(Tok::LParen)?;
                    let mut args = vec![self.sum()?];
                    while let Some(Tok::Comma) = self.peek() {
                        self.pos += 1;
                        args.push(self.sum()?);
                    }
                    self.expect(Tok::RParen)?;
                    return Ok(if name == "min" {
                        Expr::Min(args)
                    } else {
                        Expr::Max(args)
                    });
                }
                if let Some(i) = self.finite.and_then(|fc| fc.index_of(&name)) {
                    return Ok(Expr::Elem(i));
                }
                Err(format!("unknown identifier '{name}'"))
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }

    fn finish(&self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(format!("unexpected trailing {t:?}")),
        }
    }
}

pub(crate) fn parse_expr(
    text: &str,
    params: &[String],
    finite: Option<&FiniteCarrier>,
) -> Result<Expr, String> {
    let mut p = ExprParser {
        toks: tokenize(text)?,
        pos: 0,
        params,
        finite,
    };
    let e = p.sum()?;
    p.finish()?;
    Ok(e)
}

pub(crate) fn parse_comparison(text: &str, params: &[String]) -> Result<Comparison, String> {
    let mut p = ExprParser {
        toks: tokenize(text)?,
        pos: 0,
        params,
        finite: None,
    };
    let lhs = p.sum()?;
    let op = match p.bump() {
        Some(Tok::Cmp(op)) => op,
        _ => return Err("expected a comparison operator".into()),
    };
    let rhs = p.sum()?;
    p.finish()?;
    Ok(Comparison { op, lhs, rhs })
}
