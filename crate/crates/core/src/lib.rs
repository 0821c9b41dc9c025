//! An interpreter for FASILL, a fuzzy logic programming language that mixes
//! truth degrees drawn from a complete lattice, user-defined connectives and
//! similarity-based weak unification.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: truth degrees, connectives and lattice definition files
//! - [`syntax`]: terms, formulas, rules, substitutions and the program parser
//! - [`similarity`]: similarity equations and their closure into a relation
//! - [`unification`]: the weak unification transition system
//! - [`engine`]: successful, failure and interpretive steps, derivation trees
//!   and fuzzy computed answers

pub mod engine;
pub mod lattice;
pub mod similarity;
pub mod syntax;
pub mod unification;

pub use engine::{
    build_tree, fcas, format_answer, DerivationTree, Engine, EngineError, FuzzyComputedAnswer,
    GoalState, Program, StepLabel, DEFAULT_MAX_DEPTH,
};
pub use lattice::{
    builtin_unit_interval, ConnectiveKind, ConnectiveRef, Lattice, LatticeError, TruthValue,
};
pub use similarity::{close, SimilarityEquation, SimilarityRelation};
pub use syntax::{
    parse_goal, parse_program, Atom, Expression, ParseContext, Rule, Substitution, Symbol, Term,
    Var,
};
pub use unification::{weak_unify, WmguResult};
