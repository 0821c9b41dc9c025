//! Independent reference implementations used as test oracles, plus
//! generators and fixtures. Nothing here calls the algorithms it checks.

#![allow(dead_code)]

use std::collections::HashMap;

use fasill::engine::HeadUnifier;
use fasill::similarity::parse_sim;
use fasill::{
    builtin_unit_interval, close, parse_goal, parse_program, Expression, LatticeError,
    ParseContext, Program, SimilarityRelation, Substitution, Symbol, Term, Var, WmguResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HOTEL_FPL: &str = include_str!("../../../cli/fixtures/hotel.fpl");
pub const HOTEL_SIM: &str = include_str!("../../../cli/fixtures/hotel.sim");

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn program(rules: &str, sim: &str) -> Program {
    let lat = builtin_unit_interval();
    let rules = parse_program(rules, &ParseContext::new(&lat)).expect("program parses");
    let sim = parse_sim(sim, &lat).expect("sim parses");
    let tnorm = sim.tnorm.unwrap_or_else(|| "godel".into());
    let rel = close(&sim.equations, &lat, &tnorm).expect("closure");
    Program::new(rules, lat, rel)
}

pub fn hotel() -> Program {
    program(HOTEL_FPL, HOTEL_SIM)
}

pub fn goal(p: &Program, text: &str) -> Expression {
    parse_goal(text, &ParseContext::new(&p.lattice)).expect("goal parses")
}

// ---------------------------------------------------------------- generators

/// A signature entry: name and arity.
pub type Sig = [(&'static str, usize)];

pub fn random_term(rng: &mut ChaCha8Rng, sig: &Sig, vars: &[&str], depth: usize) -> Term {
    let leaf_only = depth == 0;
    if !vars.is_empty() && rng.gen_bool(0.3) {
        return Term::var(vars[rng.gen_range(0..vars.len())]);
    }
    let choices: Vec<&(&str, usize)> = sig.iter().filter(|(_, n)| !leaf_only || *n == 0).collect();
    let (name, arity) = *choices[rng.gen_range(0..choices.len())];
    let args = (0..arity)
        .map(|_| random_term(rng, sig, vars, depth - 1))
        .collect();
    Term::app(name, args)
}

/// Every ground term over `sig` of depth at most `depth`.
pub fn ground_terms(sig: &Sig, depth: usize) -> Vec<Term> {
    let mut out: Vec<Term> = sig
        .iter()
        .filter(|(_, n)| *n == 0)
        .map(|(c, _)| Term::constant(c))
        .collect();
    for _ in 0..depth {
        let prev = out.clone();
        let mut next = prev.clone();
        for (f, n) in sig.iter().filter(|(_, n)| *n > 0) {
            for args in product(&prev, *n) {
                let t = Term::app(f, args);
                if !next.contains(&t) {
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

fn product(items: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..n {
        acc = acc
            .into_iter()
            .flat_map(|v| {
                items.iter().map(move |t| {
                    let mut w = v.clone();
                    w.push(t.clone());
                    w
                })
            })
            .collect();
    }
    acc
}

// ------------------------------------------------------- similarity oracles

/// Dense matrix over `n` symbols, `m[i][j]` in [0, 1].
pub type Matrix = Vec<Vec<f64>>;

/// Reflexive, symmetric (max) and then transitive closure of a list of
/// weighted pairs, by repeated max-t composition until stable.
pub fn closure_oracle(n: usize, pairs: &[(usize, usize, f64)], t: fn(f64, f64) -> f64) -> Matrix {
    let mut m = vec![vec![0.0f64; n]; n];
    for &(i, j, d) in pairs {
        m[i][j] = m[i][j].max(d);
        m[j][i] = m[j][i].max(d);
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    loop {
        let mut next = m.clone();
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    next[i][j] = next[i][j].max(t(m[i][k], m[k][j]));
                }
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

/// Looks up symbol similarity in a dense matrix, identity outside it.
pub struct MatrixRel {
    pub names: Vec<Symbol>,
    pub m: Matrix,
}

impl MatrixRel {
    pub fn from_relation(rel: &SimilarityRelation, symbols: &[Symbol]) -> Self {
        let m = symbols
            .iter()
            .map(|a| {
                symbols
                    .iter()
                    .map(|b| rel.query(a, b).as_real().unwrap())
                    .collect()
            })
            .collect();
        MatrixRel {
            names: symbols.to_vec(),
            m,
        }
    }

    pub fn get(&self, f: &Symbol, g: &Symbol) -> f64 {
        let i = self.names.iter().position(|s| s == f);
        let j = self.names.iter().position(|s| s == g);
        match (i, j) {
            (Some(i), Some(j)) => self.m[i][j],
            _ if f == g => 1.0,
            _ => 0.0,
        }
    }

    /// Structural extension to terms under min.
    pub fn terms(&self, a: &Term, b: &Term) -> f64 {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                if x == y {
                    1.0
                } else {
                    0.0
                }
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) if xs.len() == ys.len() => xs
                .iter()
                .zip(ys)
                .fold(self.get(f, g), |d, (x, y)| d.min(self.terms(x, y))),
            _ => 0.0,
        }
    }
}

/// A closed relation from random equations over the given symbols.
pub fn random_relation(
    rng: &mut ChaCha8Rng,
    symbols: &[Symbol],
    density: f64,
) -> Vec<(usize, usize, f64)> {
    let n = symbols.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if symbols[i].arity == symbols[j].arity && rng.gen_bool(density) {
                pairs.push((i, j, rng.gen_range(1..=10) as f64 / 10.0));
            }
        }
    }
    pairs
}

// ----------------------------------------------------- classical unification

fn walk(t: &Term, s: &HashMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => match s.get(v) {
            Some(b) => walk(b, s),
            None => t.clone(),
        },
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| walk(a, s)).collect())
        }
    }
}

fn occurs_in(v: &Var, t: &Term, s: &HashMap<Var, Term>) -> bool {
    match walk(t, s) {
        Term::Var(w) => &w == v,
        Term::Compound(_, args) => args.iter().any(|a| occurs_in(v, a, s)),
    }
}

/// Syntactic most general unifier with triangular bindings resolved at the
/// end. Variables on the left are bound first, as in Robinson's algorithm
/// over an equation list.
pub fn classical_mgu(a: &Term, b: &Term) -> Option<Substitution> {
    let mut s: HashMap<Var, Term> = HashMap::new();
    let mut order: Vec<Var> = Vec::new();
    let mut todo = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = todo.pop() {
        let (x, y) = (walk(&x, &s), walk(&y, &s));
        match (x, y) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if occurs_in(&v, &t, &s) {
                    return None;
                }
                order.push(v.clone());
                s.insert(v, t);
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                todo.extend(xs.into_iter().zip(ys).rev());
            }
        }
    }
    Some(Substitution::from_pairs(
        order
            .into_iter()
            .map(|v| (v.clone(), walk(&Term::Var(v), &s))),
    ))
}

/// Head unification by the classical oracle, always at degree ⊤.
pub struct ClassicalUnifier;

impl HeadUnifier for ClassicalUnifier {
    fn unify(&self, head: &Term, atom: &Term, prog: &Program) -> Result<WmguResult, LatticeError> {
        Ok(match classical_mgu(head, atom) {
            Some(theta) => WmguResult::Success {
                theta,
                degree: prog.lattice.top(),
            },
            None => WmguResult::Failure,
        })
    }
}

/// Whether two substitutions agree on `vars` up to a consistent renaming of
/// the variables in their images.
pub fn equal_up_to_renaming(a: &Substitution, b: &Substitution, vars: &[Var]) -> bool {
    let mut map: HashMap<Var, Var> = HashMap::new();
    let mut back: HashMap<Var, Var> = HashMap::new();
    vars.iter().all(|v| {
        let ta = a.apply_term(&Term::Var(v.clone()));
        let tb = b.apply_term(&Term::Var(v.clone()));
        same_shape(&ta, &tb, &mut map, &mut back)
    })
}

fn same_shape(
    a: &Term,
    b: &Term,
    map: &mut HashMap<Var, Var>,
    back: &mut HashMap<Var, Var>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let fwd = map.entry(x.clone()).or_insert_with(|| y.clone()).clone();
            let rev = back.entry(y.clone()).or_insert_with(|| x.clone()).clone();
            &fwd == y && &rev == x
        }
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| same_shape(x, y, map, back))
        }
        _ => false,
    }
}

// ------------------------------------------------------------ MALP programs

/// Programs and goals run with the identity similarity relation. Each uses
/// only syntactic matching, so weak and classical unification must agree.
pub const MALP_SUITE: &[(&str, &str)] = &[
    (
        "p(a) <- 0.7.\np(b) <- 0.4.\nq(X) <- &prod(p(X), 0.5).",
        "q(X)",
    ),
    (
        "edge(a, b) <- 0.9.\nedge(b, c) <- 0.8.\npath(X, Y) <- edge(X, Y).\npath(X, Y) <- &godel(edge(X, Z), path(Z, Y)).",
        "path(a, Y)",
    ),
    (
        "nat(zero) <- 1.\nnat(s(X)) <- &prod(0.9, nat(X)).",
        "nat(N)",
    ),
    (
        "add(zero, Y, Y).\nadd(s(X), Y, s(Z)) <- add(X, Y, Z).",
        "add(s(s(zero)), s(zero), R)",
    ),
    (
        "likes(ann, tea) <- 0.6.\nlikes(bob, tea) <- 0.3.\nlikes(ann, jazz) <- 0.9.\nfan(X) <- |godel(likes(X, tea), likes(X, jazz)).",
        "fan(P)",
    ),
    (
        "warm(jul) <- 0.9.\nwarm(jan) <- 0.1.\nsunny(jul) <- 0.8.\nnice(M) <- @aver(warm(M), sunny(M)).",
        "nice(M)",
    ),
    (
        "pair(f(X), X) <- 0.5.\ntest(Y) <- pair(f(g(Y)), g(b)).",
        "test(Y)",
    ),
    (
        "app(nil, L, L).\napp(cons(H, T), L, cons(H, R)) <- app(T, L, R).",
        "app(A, B, cons(a, cons(b, nil)))",
    ),
    (
        "r(X, X) <- 0.8.\ns(Y) <- r(f(Y), f(c)).",
        "s(Y)",
    ),
    (
        "strong(x1) <- 0.7.\nstrong(x2) <- 0.2.\nvery_strong(X) <- @very(strong(X)).\nok(X) <- &luka(very_strong(X), 0.9).",
        "ok(X)",
    ),
    (
        "occ(X, f(X)) <- 0.5.\nloop(Y) <- occ(Y, Y).",
        "loop(Y)",
    ),
    (
        "t(a, b) <- 0.3.\nt(b, a) <- 0.6.\nsym(X, Y) <- |prod(t(X, Y), t(Y, X)).",
        "sym(a, W)",
    ),
];
