use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;

use super::{Atom, Expression, Rule, Term, Var};

/// A finite map from variables to terms. Bindings keep insertion order, which
/// is the order answers are printed in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: IndexMap<Var, Term>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a substitution from pairs, dropping trivial `X/X` bindings.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Self::identity();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    /// The single binding `{v/t}`.
    pub fn single(v: Var, t: Term) -> Self {
        Self::from_pairs([(v, t)])
    }

    fn insert(&mut self, v: Var, t: Term) {
        if t != Term::Var(v.clone()) {
            self.bindings.insert(v, t);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    /// Whether no bound variable occurs in any binding's image.
    pub fn is_idempotent(&self) -> bool {
        self.bindings
            .values()
            .all(|t| self.bindings.keys().all(|v| !t.contains_var(v)))
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.is_identity() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Compound(sym, args) => Term::Compound(
                sym.clone(),
                args.iter().map(|a| self.apply_term(a)).collect(),
            ),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_expr(&self, e: &Expression) -> Expression {
        match e {
            Expression::TruthLit(_) => e.clone(),
            Expression::Atom(a) => Expression::Atom(self.apply_atom(a)),
            Expression::ConnApp(c, args) => {
                Expression::ConnApp(c.clone(), args.iter().map(|a| self.apply_expr(a)).collect())
            }
        }
    }

    /// The substitution that behaves as `self` followed by `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::identity();
        for (v, t) in &self.bindings {
            out.insert(v.clone(), then.apply_term(t));
        }
        for (v, t) in &then.bindings {
            if !self.bindings.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// Keeps only bindings of the given variables.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
        let keep: HashSet<&Var> = vars.into_iter().collect();
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    /// Variables appearing in the domain or in any image.
    pub fn all_vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self.bindings.keys().cloned().collect();
        for t in self.bindings.values() {
            t.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{t}")?;
        }
        f.write_str("}")
    }
}

pub fn apply(sub: &Substitution, t: &Term) -> Term {
    sub.apply_term(t)
}

pub fn compose(first: &Substitution, then: &Substitution) -> Substitution {
    first.compose(then)
}

pub fn restrict<'a>(sub: &Substitution, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
    sub.restrict(vars)
}

/// Source of fresh variable names for one derivation step: `X` becomes
/// `X<step>`, with a further `_k` suffix if that name is already in use.
#[derive(Debug, Clone)]
pub struct Renamer {
    step: usize,
    used: HashSet<Var>,
    renamed: Vec<(Var, Var)>,
}

impl Renamer {
    pub fn new(step: usize, in_use: impl IntoIterator<Item = Var>) -> Self {
        Renamer {
            step,
            used: in_use.into_iter().collect(),
            renamed: Vec::new(),
        }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Every `(original, fresh)` pair produced so far.
    pub fn renamed(&self) -> &[(Var, Var)] {
        &self.renamed
    }

    pub fn fresh(&mut self, v: &Var) -> Var {
        let base = format!("{}{}", v.name(), self.step);
        let mut candidate = Var::new(base.as_str());
        let mut k = 1;
        while self.used.contains(&candidate) {
            candidate = Var::new(format!("{base}_{k}"));
            k += 1;
        }
        self.used.insert(candidate.clone());
        self.renamed.push((v.clone(), candidate.clone()));
        candidate
    }
}

/// Replaces every variable of `rule` by a fresh one.
pub fn rename_apart(rule: &Rule, renamer: &mut Renamer) -> Rule {
    let vars = rule.vars();
    if vars.is_empty() {
        return rule.clone();
    }
    let sub = Substitution {
        bindings: vars
            .iter()
            .map(|v| (v.clone(), Term::Var(renamer.fresh(v))))
            .collect(),
    };
    Rule {
        id: rule.id,
        head: sub.apply_atom(&rule.head),
        body: sub.apply_expr(&rule.body),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: &str) -> Var {
        Var::new(n)
    }

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn apply_examples() {
        let s = Substitution::single(v("X"), c("taxi"));
        let e = Term::app("elegant", vec![Term::var("X")]);
        assert_eq!(apply(&s, &e), Term::app("elegant", vec![c("taxi")]));
        assert_eq!(apply(&Substitution::identity(), &e), e);
        let s = Substitution::single(v("X"), Term::app("f", vec![Term::var("Y")]));
        let g = Term::app("g", vec![Term::var("X"), Term::var("X")]);
        let fy = Term::app("f", vec![Term::var("Y")]);
        assert_eq!(apply(&s, &g), Term::app("g", vec![fy.clone(), fy]));
    }

    #[test]
    fn compose_examples() {
        let s1 = Substitution::single(v("X1"), Term::var("X"));
        let s2 = Substitution::single(v("X"), c("ritz"));
        let s = compose(&s1, &s2);
        assert_eq!(s.to_string(), "{X1/ritz, X/ritz}");
        assert_eq!(compose(&Substitution::identity(), &s2), s2);
        let s = compose(
            &Substitution::single(v("X"), Term::var("Y")),
            &Substitution::single(v("Y"), c("a")),
        );
        assert_eq!(s.to_string(), "{X/a, Y/a}");
    }

    #[test]
    fn restrict_examples() {
        let s = Substitution::from_pairs([(v("X1"), c("ritz")), (v("X"), c("ritz"))]);
        assert_eq!(restrict(&s, &[v("X")]).to_string(), "{X/ritz}");
        assert!(restrict(&Substitution::identity(), &[v("X")]).is_identity());
        let s = Substitution::from_pairs([(v("X"), c("a")), (v("Y"), c("b"))]);
        assert!(restrict(&s, &[]).is_identity());
    }

    #[test]
    fn renaming() {
        let rule = Rule {
            id: 4,
            head: Atom::new("good_hotel", vec![Term::var("X")]),
            body: Expression::atom("elegant", vec![Term::var("X")]),
        };
        let mut r = Renamer::new(1, [v("X")]);
        let renamed = rename_apart(&rule, &mut r);
        assert_eq!(renamed.head.to_string(), "good_hotel(X1)");
        assert_eq!(renamed.body.to_string(), "elegant(X1)");
        let again = rename_apart(&rule, &mut r);
        assert_eq!(again.head.to_string(), "good_hotel(X1_1)");
        let a = renamed.vars();
        assert!(again.vars().iter().all(|x| !a.contains(x)));

        let ground = Rule {
            id: 1,
            head: Atom::new("p", vec![c("a")]),
            body: Expression::real(0.5),
        };
        assert_eq!(rename_apart(&ground, &mut r), ground);
    }

    const VARS: [&str; 4] = ["X", "Y", "Z", "W"];

    fn term_strategy(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            prop::sample::select(vars).prop_map(Term::var),
            prop::sample::select(&["a", "b"][..]).prop_map(Term::constant),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop::collection::vec(inner, 1..=2).prop_map(|args| Term::app("f", args))
        })
    }

    /// An idempotent substitution over `dom` whose images use only `range`.
    fn subst_strategy(
        dom: &'static [&'static str],
        range: &'static [&'static str],
    ) -> impl Strategy<Value = Substitution> {
        prop::collection::vec((prop::sample::select(dom), term_strategy(range)), 0..=3).prop_map(
            |pairs| Substitution::from_pairs(pairs.into_iter().map(|(v, t)| (Var::new(v), t))),
        )
    }

    proptest! {
        #[test]
        fn compose_is_sequential_application(
            t in term_strategy(&VARS),
            s1 in subst_strategy(&["X", "Y"], &["Z", "W"]),
            s2 in subst_strategy(&["Z", "X"], &["W"]),
        ) {
            let lhs = compose(&s1, &s2).apply_term(&t);
            let rhs = s2.apply_term(&s1.apply_term(&t));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn compose_keeps_idempotence(
            s1 in subst_strategy(&["X", "Y"], &["Z", "W"]),
            s2 in subst_strategy(&["Z"], &["W"]),
        ) {
            prop_assert!(s1.is_idempotent() && s2.is_idempotent());
            prop_assert!(compose(&s1, &s2).is_idempotent());
        }
    }
}
