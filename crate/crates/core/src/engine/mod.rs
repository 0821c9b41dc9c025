//! Goal evaluation: successful, failure and interpretive steps, derivation
//! trees and fuzzy computed answers.
//!
//! A node with an atom expands by one successful step per matching rule, in
//! rule order, or by a single failure step when no rule matches. A node
//! without atoms expands by interpretive steps until a truth value remains.

mod render;

use std::fmt;

use thiserror::Error;

use crate::lattice::{ConnectiveRef, Lattice, LatticeError, TruthValue};
use crate::similarity::SimilarityRelation;
use crate::syntax::{rename_apart, Expression, Renamer, Rule, Substitution, Term, Var};
use crate::unification::{weak_unify, WmguResult};

pub use render::{format_answer, render_dot, render_structured, render_text, rules_document};

pub const DEFAULT_MAX_DEPTH: usize = 30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Rules together with the lattice and the closed similarity relation they
/// are interpreted over.
#[derive(Clone, Debug)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub lattice: Lattice,
    pub relation: SimilarityRelation,
}

impl Program {
    pub fn new(rules: Vec<Rule>, lattice: Lattice, relation: SimilarityRelation) -> Self {
        Program {
            rules,
            lattice,
            relation,
        }
    }

    /// The conjunction used for closure and for `B ∧ r` in successful steps.
    pub fn tnorm(&self) -> &str {
        self.relation.tnorm()
    }

    pub fn rule(&self, id: usize) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }
}

/// Unifies a rule head (first argument) with the selected atom.
pub trait HeadUnifier {
    fn unify(&self, head: &Term, atom: &Term, prog: &Program) -> Result<WmguResult, LatticeError>;
}

/// Similarity-based unification.
#[derive(Clone, Copy, Debug, Default)]
pub struct WeakUnifier;

impl HeadUnifier for WeakUnifier {
    fn unify(&self, head: &Term, atom: &Term, prog: &Program) -> Result<WmguResult, LatticeError> {
        weak_unify(head, atom, &prog.relation, &prog.lattice, prog.tnorm())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoalState {
    pub goal: Expression,
    pub sigma: Substitution,
}

impl GoalState {
    pub fn new(goal: Expression) -> Self {
        GoalState {
            goal,
            sigma: Substitution::identity(),
        }
    }

    pub fn is_final(&self) -> bool {
        matches!(self.goal, Expression::TruthLit(_))
    }

    fn vars_in_use(&self) -> Vec<Var> {
        let mut vars = self.goal.vars();
        for v in self.sigma.all_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }
}

impl fmt::Display for GoalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sigma.is_identity() {
            write!(f, "⟨{}, id⟩", self.goal)
        } else {
            write!(f, "⟨{}, {}⟩", self.goal, self.sigma)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepLabel {
    Ss {
        rule: usize,
        degree: TruthValue,
    },
    Fs,
    /// Connectives evaluated in the step, left to right.
    Is(Vec<ConnectiveRef>),
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepLabel::Ss { rule, .. } => write!(f, "R{rule}"),
            StepLabel::Fs => f.write_str("R0"),
            StepLabel::Is(_) => f.write_str("is"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub state: GoalState,
    /// The step that produced this node; `None` at the root.
    pub step: Option<StepLabel>,
    pub depth: usize,
    pub children: Vec<Node>,
    /// Runtime failure that stopped expansion of this node.
    pub error: Option<String>,
}

impl Node {
    fn leaf(state: GoalState, step: Option<StepLabel>, depth: usize) -> Self {
        Node {
            state,
            step,
            depth,
            children: Vec::new(),
            error: None,
        }
    }

    /// Nodes in depth-first, left-to-right order.
    pub fn walk(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTree {
    pub root: Node,
    pub max_depth: usize,
}

impl DerivationTree {
    pub fn goal_vars(&self) -> Vec<Var> {
        self.root.state.goal.vars()
    }

    pub fn node_count(&self) -> usize {
        self.root.walk().len()
    }

    pub fn answers(&self) -> Vec<FuzzyComputedAnswer> {
        fcas(self, &self.goal_vars())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyComputedAnswer {
    pub value: TruthValue,
    pub answer: Substitution,
}

impl fmt::Display for FuzzyComputedAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}⟩", self.value, self.answer)
    }
}

/// Path to the leftmost atom in a depth-first, left-to-right traversal, as
/// argument indices from the root.
pub fn select_atom(q: &Expression) -> Option<Vec<usize>> {
    match q {
        Expression::TruthLit(_) => None,
        Expression::Atom(_) => Some(Vec::new()),
        Expression::ConnApp(_, args) => args.iter().enumerate().find_map(|(i, a)| {
            select_atom(a).map(|mut p| {
                p.insert(0, i);
                p
            })
        }),
    }
}

pub fn subexpr<'a>(q: &'a Expression, path: &[usize]) -> &'a Expression {
    path.iter().fold(q, |e, &i| match e {
        Expression::ConnApp(_, args) => &args[i],
        _ => panic!("path leaves the expression"),
    })
}

fn replace_at(q: &Expression, path: &[usize], with: Expression) -> Expression {
    match path.split_first() {
        None => with,
        Some((&i, rest)) => match q {
            Expression::ConnApp(c, args) => {
                let mut args = args.clone();
                args[i] = replace_at(&args[i], rest, with);
                Expression::ConnApp(c.clone(), args)
            }
            _ => panic!("path leaves the expression"),
        },
    }
}

/// Evaluation of goals against one program.
pub struct Engine<'p, U = WeakUnifier> {
    prog: &'p Program,
    unifier: U,
}

impl<'p> Engine<'p, WeakUnifier> {
    pub fn new(prog: &'p Program) -> Self {
        Engine {
            prog,
            unifier: WeakUnifier,
        }
    }
}

impl<'p, U: HeadUnifier> Engine<'p, U> {
    pub fn with_unifier(prog: &'p Program, unifier: U) -> Self {
        Engine { prog, unifier }
    }

    pub fn program(&self) -> &Program {
        self.prog
    }

    /// Resolves the selected atom of `s` with `rule`, renaming the rule apart
    /// with suffix `step`. Returns the new state and the unification degree.
    pub fn ss_step(
        &self,
        s: &GoalState,
        rule: &Rule,
        step: usize,
    ) -> Result<Option<(GoalState, TruthValue)>, EngineError> {
        let Some(path) = select_atom(&s.goal) else {
            return Ok(None);
        };
        let Expression::Atom(atom) = subexpr(&s.goal, &path) else {
            unreachable!()
        };
        let lat = &self.prog.lattice;
        let mut renamer = Renamer::new(step, s.vars_in_use());
        let rule = rename_apart(rule, &mut renamer);
        let (theta, degree) =
            match self
                .unifier
                .unify(&rule.head.to_term(), &atom.to_term(), self.prog)?
            {
                WmguResult::Success { theta, degree } if !lat.is_bot(&degree) => (theta, degree),
                _ => return Ok(None),
            };
        let replacement = if lat.is_top(&degree) {
            rule.body
        } else {
            Expression::ConnApp(
                ConnectiveRef::conjunction(self.prog.tnorm()),
                vec![rule.body, Expression::TruthLit(degree.clone())],
            )
        };
        let goal = theta.apply_expr(&replace_at(&s.goal, &path, replacement));
        let sigma = s.sigma.compose(&theta);
        Ok(Some((GoalState { goal, sigma }, degree)))
    }

    /// All successful steps from `s`, in rule order.
    fn ss_children(
        &self,
        s: &GoalState,
        step: usize,
    ) -> Result<Vec<(usize, GoalState, TruthValue)>, EngineError> {
        let mut out = Vec::new();
        for rule in &self.prog.rules {
            if let Some((next, d)) = self.ss_step(s, rule, step)? {
                out.push((rule.id, next, d));
            }
        }
        Ok(out)
    }

    /// Replaces the selected atom by `⊥` when no rule head unifies with it.
    pub fn fs_step(&self, s: &GoalState) -> Result<Option<GoalState>, EngineError> {
        let Some(path) = select_atom(&s.goal) else {
            return Ok(None);
        };
        if !self.ss_children(s, 0)?.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.fail_at(s, &path)))
    }

    fn fail_at(&self, s: &GoalState, path: &[usize]) -> GoalState {
        GoalState {
            goal: replace_at(&s.goal, path, Expression::TruthLit(self.prog.lattice.bot())),
            sigma: s.sigma.clone(),
        }
    }

    /// One interpretive step. See [`is_step`].
    pub fn is_step(
        &self,
        s: &GoalState,
    ) -> Result<Option<(GoalState, Vec<ConnectiveRef>)>, EngineError> {
        is_step(s, &self.prog.lattice)
    }

    /// Children of `s` at depth `depth + 1`, with their step labels.
    fn expand(
        &self,
        s: &GoalState,
        depth: usize,
    ) -> Result<Vec<(StepLabel, GoalState)>, EngineError> {
        if s.is_final() {
            return Ok(Vec::new());
        }
        if let Some(path) = select_atom(&s.goal) {
            let ss = self.ss_children(s, depth + 1)?;
            if ss.is_empty() {
                return Ok(vec![(StepLabel::Fs, self.fail_at(s, &path))]);
            }
            return Ok(ss
                .into_iter()
                .map(|(rule, next, degree)| (StepLabel::Ss { rule, degree }, next))
                .collect());
        }
        Ok(self
            .is_step(s)?
            .map(|(next, conns)| (StepLabel::Is(conns), next))
            .into_iter()
            .collect())
    }

    pub fn build_tree(&self, goal: Expression, max_depth: usize) -> DerivationTree {
        let mut root = Node::leaf(GoalState::new(goal), None, 0);
        self.grow(&mut root, max_depth);
        DerivationTree { root, max_depth }
    }

    fn grow(&self, node: &mut Node, max_depth: usize) {
        if node.depth >= max_depth {
            return;
        }
        match self.expand(&node.state, node.depth) {
            Ok(children) => {
                node.children = children
                    .into_iter()
                    .map(|(label, state)| Node::leaf(state, Some(label), node.depth + 1))
                    .collect();
            }
            Err(e) => node.error = Some(e.to_string()),
        }
        for child in &mut node.children {
            self.grow(child, max_depth);
        }
    }

    /// Answers produced lazily in the same order as [`fcas`] over
    /// [`Engine::build_tree`].
    pub fn answers(&self, goal: Expression, max_depth: usize) -> Answers<'_, 'p, U> {
        let vars = goal.vars();
        Answers {
            engine: self,
            vars,
            stack: vec![(GoalState::new(goal), 0)],
            max_depth,
        }
    }
}

/// Streaming depth-first answer enumeration.
pub struct Answers<'e, 'p, U> {
    engine: &'e Engine<'p, U>,
    vars: Vec<Var>,
    stack: Vec<(GoalState, usize)>,
    max_depth: usize,
}

impl<U: HeadUnifier> Iterator for Answers<'_, '_, U> {
    type Item = Result<FuzzyComputedAnswer, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some((state, depth)) = self.stack.pop() {
            if let Expression::TruthLit(v) = &state.goal {
                return Some(Ok(FuzzyComputedAnswer {
                    value: v.clone(),
                    answer: state.sigma.restrict(&self.vars),
                }));
            }
            if depth >= self.max_depth {
                continue;
            }
            match self.engine.expand(&state, depth) {
                Ok(children) => self
                    .stack
                    .extend(children.into_iter().rev().map(|(_, s)| (s, depth + 1))),
                Err(e) => return Some(Err(e)),
            }
        }
        None
    }
}

/// Evaluates, in one step, every connective application whose arguments are
/// all truth values. Returns `None` when there is none.
pub fn is_step(
    s: &GoalState,
    lat: &Lattice,
) -> Result<Option<(GoalState, Vec<ConnectiveRef>)>, EngineError> {
    let mut fired = Vec::new();
    let goal = reduce_ready(&s.goal, lat, &mut fired)?;
    if fired.is_empty() {
        return Ok(None);
    }
    Ok(Some((
        GoalState {
            goal,
            sigma: s.sigma.clone(),
        },
        fired,
    )))
}

fn reduce_ready(
    e: &Expression,
    lat: &Lattice,
    fired: &mut Vec<ConnectiveRef>,
) -> Result<Expression, LatticeError> {
    let Expression::ConnApp(c, args) = e else {
        return Ok(e.clone());
    };
    let values: Option<Vec<TruthValue>> = args.iter().map(|a| a.as_truth().cloned()).collect();
    if let Some(values) = values {
        fired.push(c.clone());
        return Ok(Expression::TruthLit(lat.eval(c, &values)?));
    }
    let args = args
        .iter()
        .map(|a| reduce_ready(a, lat, fired))
        .collect::<Result<_, _>>()?;
    Ok(Expression::ConnApp(c.clone(), args))
}

pub fn build_tree(prog: &Program, goal: Expression, max_depth: usize) -> DerivationTree {
    Engine::new(prog).build_tree(goal, max_depth)
}

/// One answer per leaf holding a truth value, left to right, with the
/// substitution restricted to `goal_vars`.
pub fn fcas(tree: &DerivationTree, goal_vars: &[Var]) -> Vec<FuzzyComputedAnswer> {
    tree.root
        .walk()
        .into_iter()
        .filter_map(|n| match &n.state.goal {
            Expression::TruthLit(v) => Some(FuzzyComputedAnswer {
                value: v.clone(),
                answer: n.state.sigma.restrict(goal_vars),
            }),
            _ => None,
        })
        .collect()
}
