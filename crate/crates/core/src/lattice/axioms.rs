//! Axiom checker for lattices and their connectives.
//!
//! Finite carriers are checked exhaustively. The unit interval is checked on
//! the boundary points, a dyadic grid (where results are compared exactly)
//! and a batch of seeded pseudo-random tuples compared at `1e-12`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Carrier, Connective, ConnectiveKind, Lattice, TruthValue};

const TOLERANCE: f64 = 1e-12;
const SEED: u64 = 0x5eed_fa51;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    Reflexivity,
    Antisymmetry,
    Transitivity,
    Bottom,
    Top,
    Meet,
    Join,
    Arity,
    Closure,
    Commutativity,
    Associativity,
    Identity,
    Monotonicity,
    TopBoundary,
    BottomBoundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub law: Law,
    /// `order` or the connective as `and_label`.
    pub subject: String,
    pub witness: Vec<TruthValue>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.witness.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{:?} fails for {} at ({})",
            self.law,
            self.subject,
            w.join(", ")
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    /// Number of individual law instances evaluated.
    pub checks: usize,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

/// A sample point plus whether results built from it should compare exactly.
#[derive(Clone)]
struct Point {
    value: TruthValue,
    exact: bool,
}

struct Checker<'a> {
    lat: &'a Lattice,
    report: AxiomReport,
}

impl<'a> Checker<'a> {
    fn fail(&mut self, law: Law, subject: &str, witness: &[&Point]) {
        // one witness per law and subject keeps reports readable
        if self
            .report
            .violations
            .iter()
            .any(|v| v.law == law && v.subject == subject)
        {
            return;
        }
        self.report.violations.push(Violation {
            law,
            subject: subject.to_string(),
            witness: witness.iter().map(|p| p.value.clone()).collect(),
        });
    }

    fn eq(&self, a: &TruthValue, b: &TruthValue, exact: bool) -> bool {
        match (a, b) {
            (TruthValue::Real(x), TruthValue::Real(y)) => {
                if exact {
                    x == y
                } else {
                    (x - y).abs() <= TOLERANCE
                }
            }
            _ => a == b,
        }
    }

    fn le(&self, a: &TruthValue, b: &TruthValue, exact: bool) -> bool {
        match (a, b) {
            (TruthValue::Real(x), TruthValue::Real(y)) if !exact => *x <= *y + TOLERANCE,
            _ => self.lat.leq(a, b).unwrap_or(false),
        }
    }

    fn apply(&mut self, conn: &Connective, subject: &str, args: &[&Point]) -> Option<TruthValue> {
        self.report.checks += 1;
        let vals: Vec<TruthValue> = args.iter().map(|p| p.value.clone()).collect();
        match self.lat.apply(conn, &vals) {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(Law::Closure, subject, args);
                None
            }
        }
    }

    fn check_order(&mut self, points: &[Point]) {
        let lat = self.lat;
        let bot = Point {
            value: lat.bot(),
            exact: true,
        };
        let top = Point {
            value: lat.top(),
            exact: true,
        };
        for x in points {
            self.report.checks += 1;
            if !lat.leq(&x.value, &x.value).unwrap_or(false) {
                self.fail(Law::Reflexivity, "order", &[x]);
            }
            if !lat.leq(&bot.value, &x.value).unwrap_or(false) {
                self.fail(Law::Bottom, "order", &[x]);
            }
            if !lat.leq(&x.value, &top.value).unwrap_or(false) {
                self.fail(Law::Top, "order", &[x]);
            }
            for y in points {
                let xy = lat.leq(&x.value, &y.value).unwrap_or(false);
                let yx = lat.leq(&y.value, &x.value).unwrap_or(false);
                if xy && yx && x.value != y.value {
                    self.fail(Law::Antisymmetry, "order", &[x, y]);
                }
                if let Carrier::Finite(fc) = lat.carrier() {
                    let (i, j) = (index(fc, &x.value), index(fc, &y.value));
                    if fc.meet(i, j).is_none() {
                        self.fail(Law::Meet, "order", &[x, y]);
                    }
                    if fc.join(i, j).is_none() {
                        self.fail(Law::Join, "order", &[x, y]);
                    }
                }
                if !xy {
                    continue;
                }
                for z in points {
                    self.report.checks += 1;
                    if lat.leq(&y.value, &z.value).unwrap_or(false)
                        && !lat.leq(&x.value, &z.value).unwrap_or(false)
                    {
                        self.fail(Law::Transitivity, "order", &[x, y, z]);
                    }
                }
            }
        }
    }

    fn check_tnorm_like(&mut self, conn: &Connective, points: &[Point], triples: &[[usize; 3]]) {
        let subject = connective_name(conn);
        if conn.arity != 2 {
            self.fail(Law::Arity, &subject, &[]);
            return;
        }
        let identity = Point {
            value: match conn.kind {
                ConnectiveKind::Conjunction => self.lat.top(),
                _ => self.lat.bot(),
            },
            exact: true,
        };
        for t in triples {
            let (x, y, z) = (&points[t[0]], &points[t[1]], &points[t[2]]);
            let exact = x.exact && y.exact && z.exact;

            let (Some(xy), Some(yx)) = (
                self.apply(conn, &subject, &[x, y]),
                self.apply(conn, &subject, &[y, x]),
            ) else {
                continue;
            };
            if !self.eq(&xy, &yx, exact) {
                self.fail(Law::Commutativity, &subject, &[x, y]);
            }

            if let Some(xe) = self.apply(conn, &subject, &[x, &identity]) {
                if !self.eq(&xe, &x.value, x.exact) {
                    self.fail(Law::Identity, &subject, &[x]);
                }
            }

            let yz = self.apply(conn, &subject, &[y, z]);
            if let Some(yz) = yz {
                let yz = Point { value: yz, exact };
                let xy_p = Point {
                    value: xy.clone(),
                    exact,
                };
                if let (Some(l), Some(r)) = (
                    self.apply(conn, &subject, &[x, &yz]),
                    self.apply(conn, &subject, &[&xy_p, z]),
                ) {
                    if !self.eq(&l, &r, exact) {
                        self.fail(Law::Associativity, &subject, &[x, y, z]);
                    }
                }
            }

            // monotone in each argument: x ≤ z ⇒ f(x, y) ≤ f(z, y) and f(y, x) ≤ f(y, z)
            if self.lat.leq(&x.value, &z.value).unwrap_or(false) {
                if let (Some(a), Some(b)) = (Some(xy.clone()), self.apply(conn, &subject, &[z, y]))
                {
                    if !self.le(&a, &b, exact) {
                        self.fail(Law::Monotonicity, &subject, &[x, z, y]);
                    }
                }
                if let (Some(a), Some(b)) = (Some(yx.clone()), self.apply(conn, &subject, &[y, z]))
                {
                    if !self.le(&a, &b, exact) {
                        self.fail(Law::Monotonicity, &subject, &[y, x, z]);
                    }
                }
            }
        }
    }

    fn check_aggregator(&mut self, conn: &Connective, points: &[Point], tuples: &[Vec<usize>]) {
        let subject = connective_name(conn);
        let top = Point {
            value: self.lat.top(),
            exact: true,
        };
        let bot = Point {
            value: self.lat.bot(),
            exact: true,
        };
        let tops = vec![&top; conn.arity];
        if let Some(v) = self.apply(conn, &subject, &tops) {
            if !self.eq(&v, &top.value, false) {
                self.fail(Law::TopBoundary, &subject, &tops);
            }
        }
        let bots = vec![&bot; conn.arity];
        if let Some(v) = self.apply(conn, &subject, &bots) {
            if !self.eq(&v, &bot.value, false) {
                self.fail(Law::BottomBoundary, &subject, &bots);
            }
        }
        for t in tuples {
            let args: Vec<&Point> = t[..conn.arity].iter().map(|&i| &points[i]).collect();
            let exact = args.iter().all(|p| p.exact);
            let Some(base) = self.apply(conn, &subject, &args) else {
                continue;
            };
            let bump = &points[t[conn.arity]];
            for i in 0..conn.arity {
                if !self.lat.leq(&args[i].value, &bump.value).unwrap_or(false) {
                    continue;
                }
                let mut raised = args.clone();
                raised[i] = bump;
                if let Some(v) = self.apply(conn, &subject, &raised) {
                    if !self.le(&base, &v, exact && bump.exact) {
                        let mut w = args.clone();
                        w.push(bump);
                        self.fail(Law::Monotonicity, &subject, &w);
                    }
                }
            }
        }
    }
}

fn index(fc: &super::FiniteCarrier, v: &TruthValue) -> usize {
    match v {
        TruthValue::Elem(n) => fc.index_of(n).unwrap_or(0),
        TruthValue::Real(_) => 0,
    }
}

fn connective_name(conn: &Connective) -> String {
    format!("{}_{}", conn.kind.keyword(), conn.label)
}

/// Checks the partial-order axioms, bounds, and the laws of every
/// registered connective. Violations are collected, never raised.
pub fn check_axioms(lat: &Lattice, samples: usize) -> AxiomReport {
    let mut checker = Checker {
        lat,
        report: AxiomReport::default(),
    };
    let max_arity = lat.connectives().map(|c| c.arity).max().unwrap_or(2).max(2);

    match lat.carrier() {
        Carrier::Finite(fc) => {
            let points: Vec<Point> = fc
                .elements()
                .iter()
                .map(|e| Point {
                    value: TruthValue::Elem(e.clone()),
                    exact: true,
                })
                .collect();
            checker.check_order(&points);
            let n = points.len();
            let triples: Vec<[usize; 3]> = (0..n)
                .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
                .collect();
            let conns: Vec<Connective> = lat.connectives().cloned().collect();
            for conn in &conns {
                match conn.kind {
                    ConnectiveKind::Aggregator => {
                        let tuples = all_tuples(n, conn.arity + 1);
                        checker.check_aggregator(conn, &points, &tuples);
                    }
                    _ => checker.check_tnorm_like(conn, &points, &triples),
                }
            }
        }
        Carrier::UnitInterval => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let mut points = vec![
                Point {
                    value: TruthValue::Real(0.0),
                    exact: true,
                },
                Point {
                    value: TruthValue::Real(1.0),
                    exact: true,
                },
            ];
            // dyadic grid k/16
            for k in 1..16 {
                points.push(Point {
                    value: TruthValue::Real(k as f64 / 16.0),
                    exact: true,
                });
            }
            let exact_count = points.len();
            checker.check_order(&points);
            let mut triples: Vec<[usize; 3]> = Vec::new();
            for a in 0..exact_count {
                for b in 0..exact_count {
                    triples.push([a, b, (a * 7 + b * 3) % exact_count]);
                }
            }
            for _ in 0..samples {
                let base = points.len();
                for _ in 0..3 {
                    points.push(Point {
                        value: TruthValue::Real(rng.gen::<f64>()),
                        exact: false,
                    });
                }
                triples.push([base, base + 1, base + 2]);
            }
            let mut tuples: Vec<Vec<usize>> = all_tuples(exact_count.min(5), max_arity + 1);
            for _ in 0..samples {
                let base = points.len();
                for _ in 0..=max_arity {
                    points.push(Point {
                        value: TruthValue::Real(rng.gen::<f64>()),
                        exact: false,
                    });
                }
                tuples.push((base..=base + max_arity).collect());
            }
            let conns: Vec<Connective> = lat.connectives().cloned().collect();
            for conn in &conns {
                match conn.kind {
                    ConnectiveKind::Aggregator => checker.check_aggregator(conn, &points, &tuples),
                    _ => checker.check_tnorm_like(conn, &points, &triples),
                }
            }
        }
    }
    checker.report
}

fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}
