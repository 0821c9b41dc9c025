mod support;

use fasill::similarity::{close_with, parse_sim, ClosureMode, SimilarityEquation};
use fasill::{builtin_unit_interval, close, Lattice, SimilarityRelation, Symbol, TruthValue};
use rand::Rng;
use support::*;

fn equations(symbols: &[Symbol], pairs: &[(usize, usize, f64)]) -> Vec<SimilarityEquation> {
    pairs
        .iter()
        .map(|&(i, j, d)| SimilarityEquation {
            left: symbols[i].clone(),
            right: symbols[j].clone(),
            degree: TruthValue::Real(d),
        })
        .collect()
}

fn matrix(rel: &SimilarityRelation, symbols: &[Symbol]) -> Matrix {
    MatrixRel::from_relation(rel, symbols).m
}

fn assert_similarity(m: &Matrix, t: fn(f64, f64) -> f64) {
    let n = m.len();
    for i in 0..n {
        assert_eq!(m[i][i], 1.0);
        for j in 0..n {
            assert_eq!(m[i][j], m[j][i]);
            for k in 0..n {
                assert!(m[i][j] + 1e-12 >= t(m[i][k], m[k][j]), "{i} {j} via {k}");
            }
        }
    }
}

fn constants(n: usize) -> Vec<Symbol> {
    (0..n).map(|i| Symbol::constant(format!("s{i}"))).collect()
}

#[test]
fn repair_of_inconsistent_equations() {
    let lat = builtin_unit_interval();
    let rel = close(
        &parse_sim("a ~ b = 0.8.\nb ~ c = 0.6.\na ~ c = 0.3.", &lat)
            .unwrap()
            .equations,
        &lat,
        "godel",
    )
    .unwrap();
    let q = |x: &str, y: &str| rel.query(&Symbol::constant(x), &Symbol::constant(y));
    assert_eq!(q("a", "c"), TruthValue::Real(0.6));
    assert_eq!(q("c", "a"), TruthValue::Real(0.6));
    assert_eq!(q("a", "b"), TruthValue::Real(0.8));
    assert_eq!(q("b", "c"), TruthValue::Real(0.6));
}

#[test]
fn hotel_matrix() {
    let p = hotel();
    let names = ["vanguardist", "elegant", "metro", "taxi", "bus"];
    let expected = [
        [1.0, 0.6, 0.0, 0.0, 0.0],
        [0.6, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.4, 0.5],
        [0.0, 0.0, 0.4, 1.0, 0.4],
        [0.0, 0.0, 0.5, 0.4, 1.0],
    ];
    let arity = |n: &str| {
        if n.starts_with('v') || n.starts_with('e') {
            1
        } else {
            0
        }
    };
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            let got = p
                .relation
                .query(&Symbol::new(*a, arity(a)), &Symbol::new(*b, arity(b)));
            assert_eq!(got, TruthValue::Real(expected[i][j]), "{a} {b}");
        }
    }
}

fn check_random(lat: &Lattice, label: &str, t: fn(f64, f64) -> f64, seed: u64, runs: usize) {
    let mut r = rng(seed);
    for run in 0..runs {
        let n = r.gen_range(1..=8);
        let syms = constants(n);
        let pairs = random_relation(&mut r, &syms, 0.4);
        let eqs = equations(&syms, &pairs);
        let rel = close(&eqs, lat, label).unwrap();
        let got = matrix(&rel, &syms);
        assert_similarity(&got, t);
        let want = closure_oracle(n, &pairs, t);
        for i in 0..n {
            for j in 0..n {
                assert!((got[i][j] - want[i][j]).abs() < 1e-12, "run {run}: {i} {j}");
            }
        }
        // Idempotent: closing the closed relation changes nothing.
        let again: Vec<SimilarityEquation> = rel
            .pairs()
            .into_iter()
            .map(|(left, right, degree)| SimilarityEquation {
                left,
                right,
                degree,
            })
            .collect();
        let twice = close(&again, lat, label).unwrap();
        assert_eq!(matrix(&twice, &syms), got);
        // Inflationary: every input degree is kept or raised.
        for &(i, j, d) in &pairs {
            assert!(got[i][j] >= d);
        }
        // A single pass never goes beyond the fixpoint.
        let single = matrix(
            &close_with(&eqs, lat, label, ClosureMode::SinglePass).unwrap(),
            &syms,
        );
        for i in 0..n {
            for j in 0..n {
                assert!(single[i][j] <= got[i][j] + 1e-12);
            }
        }
    }
}

#[test]
fn random_relations_match_max_min_oracle() {
    check_random(&builtin_unit_interval(), "godel", f64::min, 11, 200);
}

#[test]
fn random_relations_under_product() {
    check_random(&builtin_unit_interval(), "prod", |x, y| x * y, 12, 100);
}

#[test]
fn one_pass_can_fall_short() {
    let lat = builtin_unit_interval();
    let syms = constants(6);
    let pairs = [
        (0, 1, 0.4),
        (0, 4, 0.9),
        (0, 5, 0.4),
        (1, 2, 0.7),
        (1, 3, 0.1),
        (1, 4, 0.5),
        (2, 3, 0.3),
        (2, 5, 0.6),
        (3, 4, 0.9),
        (3, 5, 0.9),
    ];
    let eqs = equations(&syms, &pairs);
    let fix = matrix(&close(&eqs, &lat, "godel").unwrap(), &syms);
    assert_eq!(fix, closure_oracle(6, &pairs, f64::min));
    let single = matrix(
        &close_with(&eqs, &lat, "godel", ClosureMode::SinglePass).unwrap(),
        &syms,
    );
    assert_ne!(single, fix);
}
