//! Weak unification as a state transition system.
//!
//! A state holds pending equations, the substitution built so far and the
//! unification degree. Six transitions rewrite it:
//!
//! 1. decompose `f(t̄) ≈ g(s̄)` when `R(f, g) > ⊥`, meeting the degree with `R(f, g)`
//! 2. delete `X ≈ X`
//! 3. bind `X ≈ t` when `X` does not occur in `t`
//! 4. orient `t ≈ X` into `X ≈ t` when `t` is not a variable
//! 5. fail on `X ≈ t` when `X` occurs in `t`
//! 6. fail on `f(t̄) ≈ g(s̄)` when `R(f, g) = ⊥`, arity clashes included
//!
//! The leftmost equation is always selected, and decomposition pushes the
//! argument equations to the front in order.

use std::collections::VecDeque;
use std::fmt;

use crate::lattice::{Lattice, LatticeError, TruthValue};
use crate::similarity::SimilarityRelation;
use crate::syntax::{Substitution, Term, Var};

/// Which of the six transitions fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transition {
    Decompose = 1,
    Delete = 2,
    Bind = 3,
    Orient = 4,
    OccursCheck = 5,
    Clash = 6,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnifState {
    /// Pending equations, or `None` once the `Fail` marker is reached.
    pub equations: Option<VecDeque<(Term, Term)>>,
    pub theta: Substitution,
    pub alpha: TruthValue,
}

impl UnifState {
    /// `⟨{e1 ≈ e2}, id, ⊤⟩`
    pub fn initial(e1: &Term, e2: &Term, lat: &Lattice) -> Self {
        UnifState {
            equations: Some(VecDeque::from([(e1.clone(), e2.clone())])),
            theta: Substitution::identity(),
            alpha: lat.top(),
        }
    }

    pub fn is_fail(&self) -> bool {
        self.equations.is_none()
    }

    pub fn is_solved(&self) -> bool {
        matches!(&self.equations, Some(eqs) if eqs.is_empty())
    }
}

impl fmt::Display for UnifState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        match &self.equations {
            None => f.write_str("Fail")?,
            Some(eqs) => {
                f.write_str("{")?;
                for (i, (a, b)) in eqs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a} ≈ {b}")?;
                }
                f.write_str("}")?;
            }
        }
        write!(f, ", {}, {}⟩", self.theta, self.alpha)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WmguResult {
    Success {
        theta: Substitution,
        degree: TruthValue,
    },
    Failure,
}

impl WmguResult {
    pub fn is_success(&self) -> bool {
        matches!(self, WmguResult::Success { .. })
    }

    pub fn degree(&self) -> Option<&TruthValue> {
        match self {
            WmguResult::Success { degree, .. } => Some(degree),
            WmguResult::Failure => None,
        }
    }
}

pub fn occurs(x: &Var, t: &Term) -> bool {
    t.contains_var(x)
}

fn fail(theta: Substitution, alpha: TruthValue) -> UnifState {
    UnifState {
        equations: None,
        theta,
        alpha,
    }
}

/// Applies exactly one transition to the leftmost equation of `s`.
///
/// Panics if `s` is already solved or failed.
pub fn step(
    s: UnifState,
    rel: &SimilarityRelation,
    lat: &Lattice,
    tnorm: &str,
) -> Result<(Transition, UnifState), LatticeError> {
    let UnifState {
        equations,
        theta,
        alpha,
    } = s;
    let mut eqs = equations.expect("step on a failed state");
    let (lhs, rhs) = eqs.pop_front().expect("step on a solved state");
    match (lhs, rhs) {
        (Term::Var(x), Term::Var(y)) if x == y => Ok((
            Transition::Delete,
            UnifState {
                equations: Some(eqs),
                theta,
                alpha,
            },
        )),
        (Term::Var(x), t) => {
            if occurs(&x, &t) {
                return Ok((Transition::OccursCheck, fail(theta, alpha)));
            }
            let bind = Substitution::single(x, t);
            let eqs = eqs
                .into_iter()
                .map(|(a, b)| (bind.apply_term(&a), bind.apply_term(&b)))
                .collect();
            Ok((
                Transition::Bind,
                UnifState {
                    equations: Some(eqs),
                    theta: theta.compose(&bind),
                    alpha,
                },
            ))
        }
        (t @ Term::Compound(..), Term::Var(x)) => {
            eqs.push_front((Term::Var(x), t));
            Ok((
                Transition::Orient,
                UnifState {
                    equations: Some(eqs),
                    theta,
                    alpha,
                },
            ))
        }
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            let r = rel.query(&f, &g);
            if xs.len() != ys.len() || lat.is_bot(&r) {
                return Ok((Transition::Clash, fail(theta, alpha)));
            }
            let alpha = if lat.is_top(&r) {
                alpha
            } else {
                lat.apply(lat.tnorm(tnorm)?, &[alpha, r])?
            };
            for pair in xs.into_iter().zip(ys).rev() {
                eqs.push_front(pair);
            }
            Ok((
                Transition::Decompose,
                UnifState {
                    equations: Some(eqs),
                    theta,
                    alpha,
                },
            ))
        }
    }
}

/// Runs [`step`] to a final state, recording every intermediate state.
pub fn weak_unify_traced(
    e1: &Term,
    e2: &Term,
    rel: &SimilarityRelation,
    lat: &Lattice,
    tnorm: &str,
) -> Result<(WmguResult, Vec<(Transition, UnifState)>), LatticeError> {
    let mut state = UnifState::initial(e1, e2, lat);
    let mut trace = Vec::new();
    loop {
        if state.is_fail() {
            return Ok((WmguResult::Failure, trace));
        }
        if lat.is_bot(&state.alpha) {
            return Ok((WmguResult::Failure, trace));
        }
        if state.is_solved() {
            let result = WmguResult::Success {
                theta: state.theta,
                degree: state.alpha,
            };
            return Ok((result, trace));
        }
        let (rule, next) = step(state, rel, lat, tnorm)?;
        trace.push((rule, next.clone()));
        state = next;
    }
}

/// Weak most general unifier of `e1` and `e2` with its degree, or failure.
pub fn weak_unify(
    e1: &Term,
    e2: &Term,
    rel: &SimilarityRelation,
    lat: &Lattice,
    tnorm: &str,
) -> Result<WmguResult, LatticeError> {
    let mut state = UnifState::initial(e1, e2, lat);
    loop {
        if state.is_fail() || lat.is_bot(&state.alpha) {
            return Ok(WmguResult::Failure);
        }
        if state.is_solved() {
            return Ok(WmguResult::Success {
                theta: state.theta,
                degree: state.alpha,
            });
        }
        state = step(state, rel, lat, tnorm)?.1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtin_unit_interval;
    use crate::similarity::{close, SimilarityEquation};
    use crate::syntax::Symbol;

    fn rel(lat: &Lattice) -> SimilarityRelation {
        let eq = |a: &str, b: &str, n, d| SimilarityEquation {
            left: Symbol::new(a, n),
            right: Symbol::new(b, n),
            degree: TruthValue::Real(d),
        };
        close(
            &[
                eq("elegant", "vanguardist", 1, 0.6),
                eq("metro", "bus", 0, 0.5),
                eq("bus", "taxi", 0, 0.4),
            ],
            lat,
            "godel",
        )
        .unwrap()
    }

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn occurs_check() {
        let x = Var::new("X");
        assert!(occurs(
            &x,
            &Term::app("f", vec![Term::app("g", vec![Term::var("X")])])
        ));
        assert!(!occurs(&x, &Term::var("Y")));
        assert!(occurs(&x, &Term::var("X")));
    }

    #[test]
    fn single_steps() {
        let lat = builtin_unit_interval();
        let rel = rel(&lat);
        let s = UnifState::initial(
            &Term::app("elegant", vec![c("taxi")]),
            &Term::app("vanguardist", vec![c("metro")]),
            &lat,
        );
        let (rule, s) = step(s, &rel, &lat, "godel").unwrap();
        assert_eq!(rule, Transition::Decompose);
        assert_eq!(s.to_string(), "⟨{taxi ≈ metro}, {}, 0.6⟩");

        let s = UnifState {
            equations: Some(VecDeque::from([(c("taxi"), Term::var("X"))])),
            theta: Substitution::identity(),
            alpha: TruthValue::Real(0.6),
        };
        let (rule, s) = step(s, &rel, &lat, "godel").unwrap();
        assert_eq!(rule, Transition::Orient);
        assert_eq!(s.to_string(), "⟨{X ≈ taxi}, {}, 0.6⟩");

        let x = Term::var("X");
        let s = UnifState::initial(&x, &Term::app("f", vec![x.clone()]), &lat);
        let (rule, s) = step(s, &rel, &lat, "godel").unwrap();
        assert_eq!(rule, Transition::OccursCheck);
        assert!(s.is_fail());
    }

    #[test]
    fn hotel_unifiers() {
        let lat = builtin_unit_interval();
        let rel = rel(&lat);
        let r = weak_unify(
            &Term::app("elegant", vec![c("taxi")]),
            &Term::app("vanguardist", vec![c("metro")]),
            &rel,
            &lat,
            "godel",
        )
        .unwrap();
        assert_eq!(
            r,
            WmguResult::Success {
                theta: Substitution::identity(),
                degree: TruthValue::Real(0.4)
            }
        );
        let (r, trace) = weak_unify_traced(
            &Term::app("elegant", vec![c("taxi")]),
            &Term::app("vanguardist", vec![Term::var("X")]),
            &rel,
            &lat,
            "godel",
        )
        .unwrap();
        assert_eq!(
            r,
            WmguResult::Success {
                theta: Substitution::single(Var::new("X"), c("taxi")),
                degree: TruthValue::Real(0.6)
            }
        );
        let rules: Vec<Transition> = trace.iter().map(|(t, _)| *t).collect();
        assert_eq!(
            rules,
            [Transition::Decompose, Transition::Orient, Transition::Bind]
        );
    }

    #[test]
    fn clash_without_similarity() {
        let lat = builtin_unit_interval();
        let empty = close(&[], &lat, "godel").unwrap();
        let r = weak_unify(
            &Term::app("p", vec![c("a")]),
            &Term::app("q", vec![c("b")]),
            &empty,
            &lat,
            "godel",
        )
        .unwrap();
        assert_eq!(r, WmguResult::Failure);
        let r = weak_unify(
            &Term::app("p", vec![c("a")]),
            &Term::app("p", vec![c("a"), c("b")]),
            &empty,
            &lat,
            "godel",
        )
        .unwrap();
        assert_eq!(r, WmguResult::Failure);
    }

    #[test]
    fn numbers_unify_syntactically() {
        let lat = builtin_unit_interval();
        let empty = close(&[], &lat, "godel").unwrap();
        let n = |s: &str| Term::Compound(Symbol::constant(s), vec![]);
        assert!(weak_unify(&n("0.5"), &n("0.5"), &empty, &lat, "godel")
            .unwrap()
            .is_success());
        assert!(!weak_unify(&n("0.5"), &n("0.7"), &empty, &lat, "godel")
            .unwrap()
            .is_success());
        assert!(
            weak_unify(&n("0.5"), &Term::var("X"), &empty, &lat, "godel")
                .unwrap()
                .is_success()
        );
    }

    #[test]
    fn degree_collapse_is_failure() {
        // luka: 0.5 ∧ 0.5 = 0
        let lat = builtin_unit_interval();
        let eq = |a: &str, b: &str| SimilarityEquation {
            left: Symbol::constant(a),
            right: Symbol::constant(b),
            degree: TruthValue::Real(0.5),
        };
        let rel = close(&[eq("a", "b"), eq("c", "d")], &lat, "luka").unwrap();
        let r = weak_unify(
            &Term::app("f", vec![c("a"), c("c")]),
            &Term::app("f", vec![c("b"), c("d")]),
            &rel,
            &lat,
            "luka",
        )
        .unwrap();
        assert_eq!(r, WmguResult::Failure);
    }
}
