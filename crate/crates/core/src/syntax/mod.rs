//! Terms, formulas, rules and substitutions, plus the program and goal parser.

mod parser;
mod subst;

use std::fmt;
use std::sync::Arc;

pub use crate::lattice::{ConnectiveKind, ConnectiveRef, TruthValue};
pub use parser::{parse_goal, parse_program, ParseContext, ParseError, DEFAULT_LOGIC};
pub use subst::{apply, compose, rename_apart, restrict, Renamer, Substitution};

/// A logic variable, named as in the source (`X`, `_Tmp`) or by renaming (`X1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub Arc<str>);

impl Var {
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A function or predicate symbol keyed by name and arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: Arc<str>,
    pub arity: usize,
}

impl Symbol {
    /// Panics unless `name` is a lowercase identifier or a numeric literal.
    pub fn new(name: impl Into<Arc<str>>, arity: usize) -> Self {
        let name = name.into();
        assert!(
            is_symbol_name(&name),
            "symbol names start with a lowercase letter: {name:?}"
        );
        Symbol { name, arity }
    }

    pub fn constant(name: impl Into<Arc<str>>) -> Self {
        Self::new(name, 0)
    }
}

fn is_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => name.parse::<f64>().is_ok(),
        _ => false,
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Compound(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Self {
        Term::Compound(Symbol::constant(name), Vec::new())
    }

    /// `name(args...)`, with the arity taken from `args`.
    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::Compound(Symbol::new(name, args.len()), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Appends the variables of the term, first occurrence order, no duplicates.
    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Compound(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Compound(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

fn write_args<T: fmt::Display>(f: &mut fmt::Formatter<'_>, args: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Compound(sym, args) => {
                f.write_str(&sym.name)?;
                if args.is_empty() {
                    Ok(())
                } else {
                    write_args(f, args)
                }
            }
        }
    }
}

/// An atomic formula `p(t1, ..., tn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(name: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: Symbol::new(name, args.len()),
            args,
        }
    }

    /// The atom viewed as a term, for unification.
    pub fn to_term(&self) -> Term {
        Term::Compound(self.predicate.clone(), self.args.clone())
    }

    /// Inverse of [`Atom::to_term`]; `None` for variables.
    pub fn from_term(t: Term) -> Option<Self> {
        match t {
            Term::Compound(predicate, args) => Some(Atom { predicate, args }),
            Term::Var(_) => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate.name)?;
        if self.args.is_empty() {
            Ok(())
        } else {
            write_args(f, &self.args)
        }
    }
}

/// A well-formed formula: a truth value, an atom, or a connective applied to
/// formulas.
#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    TruthLit(TruthValue),
    Atom(Atom),
    ConnApp(ConnectiveRef, Vec<Expression>),
}

impl Expression {
    pub fn atom(name: &str, args: Vec<Term>) -> Self {
        Expression::Atom(Atom::new(name, args))
    }

    pub fn conn(kind: ConnectiveKind, label: &str, args: Vec<Expression>) -> Self {
        Expression::ConnApp(ConnectiveRef::new(kind, label), args)
    }

    pub fn real(v: f64) -> Self {
        Expression::TruthLit(TruthValue::Real(v))
    }

    pub fn as_truth(&self) -> Option<&TruthValue> {
        match self {
            Expression::TruthLit(v) => Some(v),
            _ => None,
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Expression::TruthLit(_) => {}
            Expression::Atom(a) => a.args.iter().for_each(|t| t.collect_vars(out)),
            Expression::ConnApp(_, args) => args.iter().for_each(|e| e.collect_vars(out)),
        }
    }

    /// Variables in first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            Expression::TruthLit(_) => false,
            Expression::Atom(_) => true,
            Expression::ConnApp(_, args) => args.iter().any(Expression::has_atoms),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::TruthLit(v) => write!(f, "{v}"),
            Expression::Atom(a) => write!(f, "{a}"),
            Expression::ConnApp(c, args) => {
                write!(f, "{}{}", c.kind.sigil(), c.label)?;
                write_args(f, args)
            }
        }
    }
}

/// A program rule `head <- body`. Facts have a truth literal as body.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub id: usize,
    pub head: Atom,
    pub body: Expression,
}

impl Rule {
    pub fn is_fact(&self) -> bool {
        matches!(self.body, Expression::TruthLit(_))
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.head.args.iter().for_each(|t| t.collect_vars(&mut out));
        self.body.collect_vars(&mut out);
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {}.", self.head, self.body)
    }
}
