//! Similarity relations on symbols.
//!
//! Users write a handful of equations `f/n ~ g/n = r`; [`close`] completes
//! them into a reflexive, symmetric and transitive relation under a chosen
//! t-norm. Symbols never mentioned are similar only to themselves.

mod parse;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use log::warn;
use thiserror::Error;

use crate::lattice::{Lattice, LatticeError, TruthValue};
use crate::syntax::{Symbol, Term};

pub use parse::{parse_sim, SimFile};

/// t-norm used when a `.sim` file carries no `~tnorm` directive.
pub const DEFAULT_TNORM: &str = "godel";

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityEquation {
    pub left: Symbol,
    pub right: Symbol,
    pub degree: TruthValue,
}

impl fmt::Display for SimilarityEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {} = {}.", self.left, self.right, self.degree)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}: '{left}' and '{right}' have different arities")]
    ArityMismatch {
        line: usize,
        left: Symbol,
        right: Symbol,
    },
    #[error("{line}: '{value}' is not a member of the lattice")]
    NotAMember { line: usize, value: String },
    #[error("equation {left} ~ {right}: arities differ")]
    UnequalArity { left: Symbol, right: Symbol },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// How the transitive step of [`close_with`] is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClosureMode {
    /// Repeat the double loop until nothing changes.
    #[default]
    Fixpoint,
    /// Run the double loop exactly once.
    SinglePass,
}

/// A closed similarity relation together with its t-norm.
#[derive(Clone, Debug)]
pub struct SimilarityRelation {
    symbols: Vec<Symbol>,
    entries: HashMap<(Symbol, Symbol), TruthValue>,
    tnorm: Arc<str>,
    top: TruthValue,
    bot: TruthValue,
    warnings: Vec<String>,
}

impl SimilarityRelation {
    /// The identity relation: every symbol is similar only to itself.
    pub fn identity(lat: &Lattice, tnorm: &str) -> Result<Self, SimError> {
        close(&[], lat, tnorm)
    }

    pub fn tnorm(&self) -> &str {
        &self.tnorm
    }

    /// Symbols mentioned by the equations, in first-mention order.
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Warnings about incomparable degrees met during closure.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Degree of `f ~ g`: the stored entry, `⊤` for identical symbols and `⊥`
    /// for anything else, including symbols of different arity.
    pub fn query(&self, f: &Symbol, g: &Symbol) -> TruthValue {
        if let Some(v) = self.entries.get(&(f.clone(), g.clone())) {
            return v.clone();
        }
        if f == g {
            self.top.clone()
        } else {
            self.bot.clone()
        }
    }

    /// Stored off-diagonal pairs `(f, g, degree)` with `f` before `g`.
    pub fn pairs(&self) -> Vec<(Symbol, Symbol, TruthValue)> {
        let mut out = Vec::new();
        for (i, f) in self.symbols.iter().enumerate() {
            for g in &self.symbols[i + 1..] {
                if let Some(v) = self.entries.get(&(f.clone(), g.clone())) {
                    out.push((f.clone(), g.clone(), v.clone()));
                }
            }
        }
        out
    }
}

/// Free-function form of [`SimilarityRelation::query`].
pub fn query(rel: &SimilarityRelation, f: &Symbol, g: &Symbol) -> TruthValue {
    rel.query(f, g)
}

/// Reflexive, symmetric and transitive closure, iterated to a fixpoint.
pub fn close(
    eqs: &[SimilarityEquation],
    lat: &Lattice,
    tnorm: &str,
) -> Result<SimilarityRelation, SimError> {
    close_with(eqs, lat, tnorm, ClosureMode::Fixpoint)
}

/// Outcome of comparing a candidate degree against an existing one.
enum Upgrade {
    Keep,
    Replace,
    Incomparable,
}

fn upgrade(
    lat: &Lattice,
    existing: &TruthValue,
    candidate: &TruthValue,
) -> Result<Upgrade, LatticeError> {
    if lat.leq(candidate, existing)? {
        Ok(Upgrade::Keep)
    } else if lat.leq(existing, candidate)? {
        Ok(Upgrade::Replace)
    } else {
        Ok(Upgrade::Incomparable)
    }
}

pub fn close_with(
    eqs: &[SimilarityEquation],
    lat: &Lattice,
    tnorm: &str,
    mode: ClosureMode,
) -> Result<SimilarityRelation, SimError> {
    let conj = lat.tnorm(tnorm)?;
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut index: HashMap<Symbol, usize> = HashMap::new();
    let mut intern = |s: &Symbol, symbols: &mut Vec<Symbol>| -> usize {
        *index.entry(s.clone()).or_insert_with(|| {
            symbols.push(s.clone());
            symbols.len() - 1
        })
    };
    let mut pairs = Vec::with_capacity(eqs.len());
    for eq in eqs {
        if eq.left.arity != eq.right.arity {
            return Err(SimError::UnequalArity {
                left: eq.left.clone(),
                right: eq.right.clone(),
            });
        }
        if !lat.is_member(&eq.degree) {
            return Err(LatticeError::NotAMember(eq.degree.to_string()).into());
        }
        let a = intern(&eq.left, &mut symbols);
        let b = intern(&eq.right, &mut symbols);
        pairs.push((a, b, eq.degree.clone()));
    }

    let n = symbols.len();
    let mut m: Vec<Vec<Option<TruthValue>>> = vec![vec![None; n]; n];
    let mut warnings = Vec::new();
    let note = |msg: String, warnings: &mut Vec<String>| {
        if !warnings.contains(&msg) {
            warn!("{msg}");
            warnings.push(msg);
        }
    };

    // reflexive
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Some(lat.top());
    }
    // symmetric: both orientations hold the larger degree
    for (a, b, r) in pairs {
        if a == b {
            continue;
        }
        let next = match &m[a][b] {
            None => r,
            Some(cur) => match upgrade(lat, cur, &r)? {
                Upgrade::Keep => continue,
                Upgrade::Replace => r,
                Upgrade::Incomparable => {
                    note(
                        format!(
                            "{} ~ {}: degrees {cur} and {r} are incomparable, keeping {cur}",
                            symbols[a], symbols[b]
                        ),
                        &mut warnings,
                    );
                    continue;
                }
            },
        };
        m[a][b] = Some(next.clone());
        m[b][a] = Some(next);
    }

    // transitive: r(a,c) := max(r(a,c), r(a,b) ∧ r(b,c))
    let max_passes = n * n + 2;
    let mut passes = 0;
    loop {
        passes += 1;
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                let Some(r1) = m[a][b].clone() else { continue };
                if a == b {
                    continue;
                }
                for c in 0..n {
                    if c == a || c == b {
                        continue;
                    }
                    let Some(r2) = m[b][c].clone() else { continue };
                    let r = lat.apply(conj, &[r1.clone(), r2])?;
                    if lat.is_bot(&r) && m[a][c].is_none() {
                        continue;
                    }
                    let replace = match &m[a][c] {
                        None => true,
                        Some(cur) => match upgrade(lat, cur, &r)? {
                            Upgrade::Keep => false,
                            Upgrade::Replace => true,
                            Upgrade::Incomparable => {
                                note(
                                    format!(
                                        "{} ~ {}: transitive degree {r} is incomparable with {cur}, keeping {cur}",
                                        symbols[a], symbols[c]
                                    ),
                                    &mut warnings,
                                );
                                false
                            }
                        },
                    };
                    if replace {
                        m[a][c] = Some(r.clone());
                        m[c][a] = Some(r);
                        changed = true;
                    }
                }
            }
        }
        if !changed || mode == ClosureMode::SinglePass {
            break;
        }
        if passes >= max_passes {
            note(
                format!("transitive closure stopped after {passes} passes without a fixpoint"),
                &mut warnings,
            );
            break;
        }
    }

    let mut entries = HashMap::new();
    for (i, row) in m.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            if let Some(v) = v {
                entries.insert((symbols[i].clone(), symbols[j].clone()), v);
            }
        }
    }
    Ok(SimilarityRelation {
        symbols,
        entries,
        tnorm: tnorm.into(),
        top: lat.top(),
        bot: lat.bot(),
        warnings,
    })
}

/// Extends the relation to terms by structural induction: variables are
/// similar only to themselves, equal-arity compounds combine the root degree
/// with their arguments' degrees under the t-norm, everything else is `⊥`.
pub fn extend_to_terms(
    rel: &SimilarityRelation,
    lat: &Lattice,
    t1: &Term,
    t2: &Term,
) -> Result<TruthValue, LatticeError> {
    let conj = lat.tnorm(rel.tnorm())?;
    extend(rel, lat, conj, t1, t2)
}

fn extend(
    rel: &SimilarityRelation,
    lat: &Lattice,
    conj: &crate::lattice::Connective,
    t1: &Term,
    t2: &Term,
) -> Result<TruthValue, LatticeError> {
    match (t1, t2) {
        (Term::Var(x), Term::Var(y)) if x == y => Ok(lat.top()),
        (Term::Compound(f, xs), Term::Compound(g, ys)) if xs.len() == ys.len() => {
            let mut d = rel.query(f, g);
            for (a, b) in xs.iter().zip(ys) {
                if lat.is_bot(&d) {
                    break;
                }
                let e = extend(rel, lat, conj, a, b)?;
                d = lat.apply(conj, &[d, e])?;
            }
            Ok(d)
        }
        _ => Ok(lat.bot()),
    }
}
