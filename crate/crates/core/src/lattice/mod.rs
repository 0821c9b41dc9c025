//! Complete lattices of truth degrees and their connective registries.
//!
//! A [`Lattice`] is either the real unit interval or a finite carrier given by
//! a Hasse diagram. Every lattice carries a registry of named connectives,
//! keyed by kind (conjunction, disjunction, aggregator) and label, which the
//! interpreter resolves whenever it evaluates a `&label`, `|label` or `@label`
//! application.

mod axioms;
mod expr;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use axioms::{check_axioms, AxiomReport, Law, Violation};
pub use expr::{Comparison, Expr};
pub use parse::parse_lattice;

/// Slack allowed when a floating point connective lands just outside `[0,1]`.
const CARRIER_SLACK: f64 = 1e-12;

/// An element of a lattice carrier.
#[derive(Clone, Debug, PartialEq)]
pub enum TruthValue {
    /// A point of the unit interval.
    Real(f64),
    /// A named element of a finite carrier.
    Elem(Arc<str>),
}

impl TruthValue {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            TruthValue::Real(v) => Some(*v),
            TruthValue::Elem(_) => None,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::Real(v) => f.write_str(&format_real(*v)),
            TruthValue::Elem(name) => f.write_str(name),
        }
    }
}

/// Renders a real with at most nine decimals and no trailing zeros, so that
/// `0.38000000000000006` prints as `0.38`.
pub fn format_real(v: f64) -> String {
    let mut s = format!("{v:.9}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// The three families of connectives a program may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnectiveKind {
    Conjunction,
    Disjunction,
    Aggregator,
}

impl ConnectiveKind {
    /// Source sigil used in program text.
    pub fn sigil(self) -> char {
        match self {
            ConnectiveKind::Conjunction => '&',
            ConnectiveKind::Disjunction => '|',
            ConnectiveKind::Aggregator => '@',
        }
    }

    /// Keyword used in lattice definition files (`and`, `or`, `agr`).
    pub fn keyword(self) -> &'static str {
        match self {
            ConnectiveKind::Conjunction => "and",
            ConnectiveKind::Disjunction => "or",
            ConnectiveKind::Aggregator => "agr",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "and" => Some(ConnectiveKind::Conjunction),
            "or" => Some(ConnectiveKind::Disjunction),
            "agr" => Some(ConnectiveKind::Aggregator),
            _ => None,
        }
    }
}

impl fmt::Display for ConnectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectiveKind::Conjunction => "conjunction",
            ConnectiveKind::Disjunction => "disjunction",
            ConnectiveKind::Aggregator => "aggregator",
        })
    }
}

/// A reference to a connective by kind and label, as written in a program.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConnectiveRef {
    pub kind: ConnectiveKind,
    pub label: Arc<str>,
}

impl ConnectiveRef {
    pub fn new(kind: ConnectiveKind, label: impl Into<Arc<str>>) -> Self {
        ConnectiveRef {
            kind,
            label: label.into(),
        }
    }

    pub fn conjunction(label: impl Into<Arc<str>>) -> Self {
        Self::new(ConnectiveKind::Conjunction, label)
    }
}

impl fmt::Display for ConnectiveRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind.keyword(), self.label)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("unknown {kind} '{label}'")]
    UnknownConnective { kind: ConnectiveKind, label: String },
    #[error("{kind} '{label}' expects {expected} argument(s), got {found}")]
    ArityMismatch {
        kind: ConnectiveKind,
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("'{0}' is not a member of the lattice")]
    NotAMember(String),
    #[error("{kind} '{label}' produced {value}, which is outside the carrier")]
    OutsideCarrier {
        kind: ConnectiveKind,
        label: String,
        value: String,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing mandatory section '{0}'")]
    MissingSection(&'static str),
    #[error("not a complete lattice: {0}")]
    NotALattice(String),
    #[error("truth table of '{label}' has no entry for ({missing})")]
    IncompleteTable { label: String, missing: String },
}

/// How the carrier of a lattice is given.
#[derive(Clone, Debug)]
pub enum Carrier {
    /// Reals in `[0, 1]`.
    UnitInterval,
    /// Finitely many named elements with an explicit order.
    Finite(FiniteCarrier),
}

/// A finite partial order with its meet and join tables.
#[derive(Clone, Debug)]
pub struct FiniteCarrier {
    elements: Vec<Arc<str>>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<Option<usize>>>,
    join: Vec<Vec<Option<usize>>>,
}

impl FiniteCarrier {
    /// Builds the carrier from elements and covering pairs `(lower, upper)`.
    /// The order is the reflexive-transitive closure of the pairs.
    pub fn new(elements: Vec<Arc<str>>, pairs: &[(usize, usize)]) -> Self {
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        // Warshall
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_order(elements, leq)
    }

    /// Builds the carrier from an already closed order matrix, without
    /// checking the partial-order axioms.
    pub fn from_order(elements: Vec<Arc<str>>, leq: Vec<Vec<bool>>) -> Self {
        let n = elements.len();
        let mut meet = vec![vec![None; n]; n];
        let mut join = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                meet[a][b] = extremal_bound(&leq, a, b, true);
                join[a][b] = extremal_bound(&leq, a, b, false);
            }
        }
        FiniteCarrier {
            elements,
            leq,
            meet,
            join,
        }
    }

    pub fn elements(&self) -> &[Arc<str>] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| &**e == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.join[a][b]
    }

    fn value(&self, i: usize) -> TruthValue {
        TruthValue::Elem(self.elements[i].clone())
    }
}

/// Greatest lower bound (`lower = true`) or least upper bound of `a` and `b`.
fn extremal_bound(leq: &[Vec<bool>], a: usize, b: usize, lower: bool) -> Option<usize> {
    let n = leq.len();
    let below = |x: usize, y: usize| if lower { leq[x][y] } else { leq[y][x] };
    let bounds: Vec<usize> = (0..n).filter(|&x| below(x, a) && below(x, b)).collect();
    bounds
        .iter()
        .copied()
        .find(|&m| bounds.iter().all(|&x| below(x, m)))
}

/// The truth function attached to a connective.
#[derive(Clone)]
pub enum TruthFn {
    /// Native code over the unit interval.
    Builtin(fn(&[f64]) -> f64),
    /// Expression in the lattice-definition language.
    Expr(Expr),
    /// Complete truth table over a finite carrier, row-major by argument index.
    Table(Vec<usize>),
}

impl fmt::Debug for TruthFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthFn::Builtin(_) => f.write_str("Builtin"),
            TruthFn::Expr(e) => write!(f, "Expr({e:?})"),
            TruthFn::Table(t) => write!(f, "Table({} entries)", t.len()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Connective {
    pub kind: ConnectiveKind,
    pub label: Arc<str>,
    pub arity: usize,
    pub func: TruthFn,
}

#[derive(Clone, Debug)]
enum UnitOrder {
    Numeric,
    Expr(Comparison),
}

#[derive(Clone, Debug)]
pub struct Lattice {
    name: String,
    carrier: Carrier,
    unit_order: UnitOrder,
    bot: TruthValue,
    top: TruthValue,
    connectives: BTreeMap<(ConnectiveKind, Arc<str>), Connective>,
}

fn prod_and(a: &[f64]) -> f64 {
    a[0] * a[1]
}
fn godel_and(a: &[f64]) -> f64 {
    a[0].min(a[1])
}
fn luka_and(a: &[f64]) -> f64 {
    (a[0] + a[1] - 1.0).max(0.0)
}
fn prod_or(a: &[f64]) -> f64 {
    a[0] + a[1] - a[0] * a[1]
}
fn godel_or(a: &[f64]) -> f64 {
    a[0].max(a[1])
}
fn luka_or(a: &[f64]) -> f64 {
    (a[0] + a[1]).min(1.0)
}
fn aver(a: &[f64]) -> f64 {
    (a[0] + a[1]) / 2.0
}
fn very(a: &[f64]) -> f64 {
    a[0] * a[0]
}

type BuiltinEntry = (ConnectiveKind, &'static str, usize, fn(&[f64]) -> f64);

/// The unit interval with the product, Gödel and Łukasiewicz conjunctions and
/// disjunctions, the binary average `@aver` and the unary modifier `@very`.
pub fn builtin_unit_interval() -> Lattice {
    use ConnectiveKind::*;
    let mut lat = Lattice::unit_interval("unit");
    let table: [BuiltinEntry; 8] = [
        (Conjunction, "prod", 2, prod_and),
        (Conjunction, "godel", 2, godel_and),
        (Conjunction, "luka", 2, luka_and),
        (Disjunction, "prod", 2, prod_or),
        (Disjunction, "godel", 2, godel_or),
        (Disjunction, "luka", 2, luka_or),
        (Aggregator, "aver", 2, aver),
        (Aggregator, "very", 1, very),
    ];
    for (kind, label, arity, f) in table {
        lat.register(Connective {
            kind,
            label: label.into(),
            arity,
            func: TruthFn::Builtin(f),
        });
    }
    lat
}

impl Lattice {
    /// The bare unit interval with no connectives.
    pub fn unit_interval(name: impl Into<String>) -> Self {
        Lattice {
            name: name.into(),
            carrier: Carrier::UnitInterval,
            unit_order: UnitOrder::Numeric,
            bot: TruthValue::Real(0.0),
            top: TruthValue::Real(1.0),
            connectives: BTreeMap::new(),
        }
    }

    /// A finite lattice with explicit bounds and no connectives. Neither the
    /// order nor the bounds are validated here; see [`check_axioms`].
    pub fn finite(name: impl Into<String>, carrier: FiniteCarrier, bot: usize, top: usize) -> Self {
        let bot = carrier.value(bot);
        let top = carrier.value(top);
        Lattice {
            name: name.into(),
            carrier: Carrier::Finite(carrier),
            unit_order: UnitOrder::Numeric,
            bot,
            top,
            connectives: BTreeMap::new(),
        }
    }

    pub(crate) fn set_unit_order(&mut self, cmp: Comparison) {
        self.unit_order = UnitOrder::Expr(cmp);
    }

    pub(crate) fn set_bounds(&mut self, bot: TruthValue, top: TruthValue) {
        self.bot = bot;
        self.top = top;
    }

    /// Adds or replaces a connective.
    pub fn register(&mut self, conn: Connective) {
        self.connectives
            .insert((conn.kind, conn.label.clone()), conn);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn bot(&self) -> TruthValue {
        self.bot.clone()
    }

    pub fn top(&self) -> TruthValue {
        self.top.clone()
    }

    pub fn connectives(&self) -> impl Iterator<Item = &Connective> {
        self.connectives.values()
    }

    pub fn connective(
        &self,
        kind: ConnectiveKind,
        label: &str,
    ) -> Result<&Connective, LatticeError> {
        self.connectives
            .get(&(kind, Arc::from(label)))
            .ok_or_else(|| LatticeError::UnknownConnective {
                kind,
                label: label.to_string(),
            })
    }

    /// Resolves a binary conjunction usable as a t-norm.
    pub fn tnorm(&self, label: &str) -> Result<&Connective, LatticeError> {
        let conn = self.connective(ConnectiveKind::Conjunction, label)?;
        if conn.arity != 2 {
            return Err(LatticeError::ArityMismatch {
                kind: conn.kind,
                label: label.to_string(),
                expected: 2,
                found: conn.arity,
            });
        }
        Ok(conn)
    }

    pub fn is_member(&self, v: &TruthValue) -> bool {
        match (&self.carrier, v) {
            (Carrier::UnitInterval, TruthValue::Real(x)) => (0.0..=1.0).contains(x),
            (Carrier::Finite(fc), TruthValue::Elem(name)) => fc.index_of(name).is_some(),
            _ => false,
        }
    }

    fn check_member(&self, v: &TruthValue) -> Result<(), LatticeError> {
        if self.is_member(v) {
            Ok(())
        } else {
            Err(LatticeError::NotAMember(v.to_string()))
        }
    }

    fn index(&self, v: &TruthValue) -> Result<usize, LatticeError> {
        match (&self.carrier, v) {
            (Carrier::Finite(fc), TruthValue::Elem(name)) => fc
                .index_of(name)
                .ok_or_else(|| LatticeError::NotAMember(v.to_string())),
            _ => Err(LatticeError::NotAMember(v.to_string())),
        }
    }

    /// Interprets a source literal: numbers on the unit interval, element
    /// names on finite carriers. Returns `None` when the text is not a member.
    pub fn parse_literal(&self, text: &str) -> Option<TruthValue> {
        match &self.carrier {
            Carrier::UnitInterval => {
                let v: f64 = text.parse().ok()?;
                let v = TruthValue::Real(v);
                self.is_member(&v).then_some(v)
            }
            Carrier::Finite(fc) => fc.index_of(text).map(|i| fc.value(i)),
        }
    }

    /// Whether identifiers (rather than numbers) denote truth values.
    pub fn has_named_elements(&self) -> bool {
        matches!(self.carrier, Carrier::Finite(_))
    }

    /// The lattice order.
    pub fn leq(&self, a: &TruthValue, b: &TruthValue) -> Result<bool, LatticeError> {
        self.check_member(a)?;
        self.check_member(b)?;
        match (&self.carrier, a, b) {
            (Carrier::UnitInterval, TruthValue::Real(x), TruthValue::Real(y)) => {
                Ok(match &self.unit_order {
                    UnitOrder::Numeric => x <= y,
                    UnitOrder::Expr(cmp) => cmp.eval(&[*x, *y]),
                })
            }
            (Carrier::Finite(fc), _, _) => Ok(fc.leq(self.index(a)?, self.index(b)?)),
            _ => unreachable!("membership already checked"),
        }
    }

    /// Strict order: `a ≤ b` and `a ≠ b`.
    pub fn lt(&self, a: &TruthValue, b: &TruthValue) -> Result<bool, LatticeError> {
        Ok(a != b && self.leq(a, b)?)
    }

    pub fn is_bot(&self, v: &TruthValue) -> bool {
        *v == self.bot
    }

    pub fn is_top(&self, v: &TruthValue) -> bool {
        *v == self.top
    }

    /// Applies the truth function of `conn` to already validated arguments.
    pub fn apply(
        &self,
        conn: &Connective,
        args: &[TruthValue],
    ) -> Result<TruthValue, LatticeError> {
        if args.len() != conn.arity {
            return Err(LatticeError::ArityMismatch {
                kind: conn.kind,
                label: conn.label.to_string(),
                expected: conn.arity,
                found: args.len(),
            });
        }
        for a in args {
            self.check_member(a)?;
        }
        let outside = |value: String| LatticeError::OutsideCarrier {
            kind: conn.kind,
            label: conn.label.to_string(),
            value,
        };
        match &self.carrier {
            Carrier::UnitInterval => {
                let xs: Vec<f64> = args.iter().filter_map(TruthValue::as_real).collect();
                let v = match &conn.func {
                    TruthFn::Builtin(f) => f(&xs),
                    TruthFn::Expr(e) => e.eval_real(&xs),
                    TruthFn::Table(_) => return Err(outside("table on a real carrier".into())),
                };
                if v.is_nan() || !(-CARRIER_SLACK..=1.0 + CARRIER_SLACK).contains(&v) {
                    return Err(outside(format_real(v)));
                }
                Ok(TruthValue::Real(v.clamp(0.0, 1.0)))
            }
            Carrier::Finite(fc) => {
                let idx: Vec<usize> = args
                    .iter()
                    .map(|a| self.index(a))
                    .collect::<Result<_, _>>()?;
                let out = match &conn.func {
                    TruthFn::Table(table) => {
                        let n = fc.elements.len();
                        let pos = idx.iter().fold(0usize, |acc, &i| acc * n + i);
                        table.get(pos).copied()
                    }
                    TruthFn::Expr(e) => e.eval_finite(fc, &idx),
                    TruthFn::Builtin(_) => None,
                };
                out.map(|i| fc.value(i))
                    .ok_or_else(|| outside("undefined".into()))
            }
        }
    }

    /// Resolves `cref` in the registry and evaluates it on `args`.
    pub fn eval(
        &self,
        cref: &ConnectiveRef,
        args: &[TruthValue],
    ) -> Result<TruthValue, LatticeError> {
        let conn = self.connective(cref.kind, &cref.label)?;
        self.apply(conn, args)
    }

    /// Least upper bound of two members, if it exists in the carrier.
    pub fn join(&self, a: &TruthValue, b: &TruthValue) -> Result<Option<TruthValue>, LatticeError> {
        if self.leq(a, b)? {
            return Ok(Some(b.clone()));
        }
        if self.leq(b, a)? {
            return Ok(Some(a.clone()));
        }
        Ok(match &self.carrier {
            Carrier::UnitInterval => None,
            Carrier::Finite(fc) => fc.join(self.index(a)?, self.index(b)?).map(|i| fc.value(i)),
        })
    }
}

/// Free-function form of [`Lattice::eval`].
pub fn eval_connective(
    lat: &Lattice,
    cref: &ConnectiveRef,
    args: &[TruthValue],
) -> Result<TruthValue, LatticeError> {
    lat.eval(cref, args)
}

/// Free-function form of [`Lattice::leq`].
pub fn leq(lat: &Lattice, a: &TruthValue, b: &TruthValue) -> Result<bool, LatticeError> {
    lat.leq(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> TruthValue {
        TruthValue::Real(v)
    }

    fn eval(label: &str, kind: ConnectiveKind, args: &[f64]) -> f64 {
        let lat = builtin_unit_interval();
        let args: Vec<_> = args.iter().map(|&v| r(v)).collect();
        lat.eval(&ConnectiveRef::new(kind, label), &args)
            .unwrap()
            .as_real()
            .unwrap()
    }

    #[test]
    fn builtin_values() {
        use ConnectiveKind::*;
        assert_eq!(eval("godel", Conjunction, &[0.9, 0.6]), 0.6);
        assert!((eval("very", Aggregator, &[0.4]) - 0.16).abs() < 1e-9);
        assert_eq!(eval("aver", Aggregator, &[0.8, 0.0]), 0.4);
        assert!((eval("aver", Aggregator, &[0.6, 0.16]) - 0.38).abs() < 1e-9);
        for x in [0.0, 0.25, 0.3, 0.77, 1.0] {
            assert!((eval("luka", Conjunction, &[x, 1.0]) - x).abs() < 1e-12);
            assert_eq!(eval("prod", Disjunction, &[0.0, x]), x);
        }
        assert_eq!(eval("luka", Disjunction, &[0.7, 0.6]), 1.0);
        assert!((eval("prod", Conjunction, &[0.5, 0.3]) - 0.15).abs() < 1e-12);
    }

    #[test]
    fn order() {
        let lat = builtin_unit_interval();
        assert!(lat.leq(&r(0.38), &r(0.4)).unwrap());
        assert!(lat.leq(&lat.bot(), &lat.top()).unwrap());
        assert!(!lat.leq(&r(0.5), &r(0.4)).unwrap());
        assert!(matches!(
            lat.leq(&r(1.5), &r(0.4)),
            Err(LatticeError::NotAMember(_))
        ));
    }

    #[test]
    fn eval_errors_name_the_culprit() {
        let lat = builtin_unit_interval();
        let err = lat
            .eval(
                &ConnectiveRef::new(ConnectiveKind::Aggregator, "nope"),
                &[r(0.1)],
            )
            .unwrap_err();
        assert_eq!(err.to_string(), "unknown aggregator 'nope'");
        let err = lat
            .eval(
                &ConnectiveRef::new(ConnectiveKind::Aggregator, "very"),
                &[r(0.1), r(0.2)],
            )
            .unwrap_err();
        assert!(matches!(
            err,
            LatticeError::ArityMismatch {
                expected: 1,
                found: 2,
                ..
            }
        ));
        let err = lat
            .eval(&ConnectiveRef::conjunction("godel"), &[r(0.1), r(2.0)])
            .unwrap_err();
        assert_eq!(err, LatticeError::NotAMember("2".into()));
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.38000000000000006), "0.38");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(0.16000000000000003), "0.16");
        assert_eq!(format_real(0.123456789), "0.123456789");
    }

    #[test]
    fn finite_meet_and_join() {
        let names: Vec<Arc<str>> = ["bot", "a", "b", "top"]
            .iter()
            .map(|s| Arc::from(*s))
            .collect();
        let fc = FiniteCarrier::new(names, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(fc.meet(1, 2), Some(0));
        assert_eq!(fc.join(1, 2), Some(3));
        assert!(fc.leq(0, 3));
        assert!(!fc.leq(1, 2));
    }
}
