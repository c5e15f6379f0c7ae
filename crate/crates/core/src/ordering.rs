//! The layered term ordering and its abstracted variant.
//!
//! Ground terms are first compared through their A-reduced forms (every
//! abducible replaced by the minimal abducible `a0`) with a lexicographic path
//! ordering. Terms with the same A-reduced form are then ordered by the
//! abducibles they contain: leaves by the abducible order, compound terms
//! argument-wise. The abstracted ordering compares terms after mapping every
//! abducible variable to `a0`.

use std::cmp::Ordering;

use crate::term::{Abducibles, Clause, Literal, Symbol, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl OrderResult {
    pub fn reverse(self) -> OrderResult {
        match self {
            OrderResult::Less => OrderResult::Greater,
            OrderResult::Greater => OrderResult::Less,
            other => other,
        }
    }

    fn from_cmp(o: Ordering) -> OrderResult {
        match o {
            Ordering::Less => OrderResult::Less,
            Ordering::Equal => OrderResult::Equal,
            Ordering::Greater => OrderResult::Greater,
        }
    }
}

/// A term after `γ0` with its A-reduced form.
#[derive(Clone, Debug)]
struct Prepared {
    term: Term,
    reduced: Term,
}

impl PartialEq for Prepared {
    fn eq(&self, other: &Self) -> bool {
        self.term == other.term
    }
}

/// Immutable ordering parameters: the abducibles with their order, from
/// which the symbol precedence is derived.
#[derive(Clone, Debug, Default)]
pub struct OrderingContext {
    abducibles: Abducibles,
    a0: Option<Term>,
}

impl OrderingContext {
    pub fn new(abducibles: Abducibles) -> Self {
        let a0 = abducibles.min().map(|s| Term::app(s.clone(), Vec::new()));
        OrderingContext { abducibles, a0 }
    }

    pub fn abducibles(&self) -> &Abducibles {
        &self.abducibles
    }

    pub fn a0(&self) -> Option<&Term> {
        self.a0.as_ref()
    }

    /// `t↓A`: every abducible constant replaced by `a0`.
    pub fn reduce_to_a0(&self, t: &Term) -> Term {
        match &self.a0 {
            None => t.clone(),
            Some(a0) => t.map_constants(&|s| self.abducibles.contains(s), a0),
        }
    }

    pub fn reduce_literal(&self, l: &Literal) -> Literal {
        l.map_terms(|t| self.reduce_to_a0(t))
    }

    pub fn reduce_clause(&self, c: &Clause) -> Clause {
        c.map_literals(|l| self.reduce_literal(l))
    }

    /// `tγ0`: every abducible variable replaced by `a0`.
    pub fn apply_gamma0(&self, t: &Term) -> Term {
        match &self.a0 {
            None => t.clone(),
            Some(a0) => t.map_vars(&mut |v| if v.is_abducible() { a0.clone() } else { Term::Var(v) }),
        }
    }

    fn precedence_key<'a>(&self, f: &'a Symbol, arity: usize) -> (u8, usize, &'a str) {
        if arity == 0 {
            let is_a0 = self.abducibles.min() == Some(f);
            if is_a0 {
                (0, 0, "")
            } else {
                (1, 0, f.name())
            }
        } else {
            (2, arity, f.name())
        }
    }

    fn precedence(&self, f: &Symbol, fa: usize, g: &Symbol, ga: usize) -> Ordering {
        self.precedence_key(f, fa).cmp(&self.precedence_key(g, ga))
    }

    /// Lexicographic path ordering over the fixed precedence
    /// `a0 < constants (by name) < function symbols (by arity, then name)`.
    pub fn lpo(&self, s: &Term, t: &Term) -> OrderResult {
        if s == t {
            return OrderResult::Equal;
        }
        match (s, t) {
            (_, Term::Var(v)) => {
                if s.contains_var(*v) {
                    OrderResult::Greater
                } else {
                    OrderResult::Incomparable
                }
            }
            (Term::Var(v), _) => {
                if t.contains_var(*v) {
                    OrderResult::Less
                } else {
                    OrderResult::Incomparable
                }
            }
            (Term::App(f, ss), Term::App(g, ts)) => {
                if ss.iter().any(|si| matches!(self.lpo(si, t), OrderResult::Greater | OrderResult::Equal)) {
                    return OrderResult::Greater;
                }
                if ts.iter().any(|tj| matches!(self.lpo(tj, s), OrderResult::Greater | OrderResult::Equal)) {
                    return OrderResult::Less;
                }
                match self.precedence(f, ss.len(), g, ts.len()) {
                    Ordering::Greater => {
                        if ts.iter().all(|tj| self.lpo(s, tj) == OrderResult::Greater) {
                            OrderResult::Greater
                        } else {
                            OrderResult::Incomparable
                        }
                    }
                    Ordering::Less => {
                        if ss.iter().all(|si| self.lpo(t, si) == OrderResult::Greater) {
                            OrderResult::Less
                        } else {
                            OrderResult::Incomparable
                        }
                    }
                    Ordering::Equal => {
                        for (si, ti) in ss.iter().zip(ts.iter()) {
                            match self.lpo(si, ti) {
                                OrderResult::Equal => continue,
                                OrderResult::Greater => {
                                    return if ts.iter().all(|tj| self.lpo(s, tj) == OrderResult::Greater) {
                                        OrderResult::Greater
                                    } else {
                                        OrderResult::Incomparable
                                    };
                                }
                                OrderResult::Less => {
                                    return if ss.iter().all(|si| self.lpo(t, si) == OrderResult::Greater) {
                                        OrderResult::Less
                                    } else {
                                        OrderResult::Incomparable
                                    };
                                }
                                OrderResult::Incomparable => return OrderResult::Incomparable,
                            }
                        }
                        // Same symbol and arity with equal arguments means s == t.
                        OrderResult::Equal
                    }
                }
            }
        }
    }

    /// The layered ordering `≺`.
    pub fn compare_terms(&self, t: &Term, s: &Term) -> OrderResult {
        if t == s {
            return OrderResult::Equal;
        }
        let (tr, sr) = (self.reduce_to_a0(t), self.reduce_to_a0(s));
        match self.lpo(&tr, &sr) {
            OrderResult::Equal => {
                if t.is_ground() && s.is_ground() {
                    self.tie_break(t, s)
                } else {
                    OrderResult::Incomparable
                }
            }
            other => other,
        }
    }

    /// Order inside one A-reduction class of ground terms.
    fn tie_break(&self, t: &Term, s: &Term) -> OrderResult {
        if t == s {
            return OrderResult::Equal;
        }
        let (rt, rs) = (
            t.symbol().and_then(|f| self.abducibles.rank(f)),
            s.symbol().and_then(|f| self.abducibles.rank(f)),
        );
        if let (Some(i), Some(j)) = (rt, rs) {
            if t.is_constant() && s.is_constant() {
                return OrderResult::from_cmp(i.cmp(&j));
            }
        }
        for (ti, si) in t.args().iter().zip(s.args()) {
            match self.tie_break(ti, si) {
                OrderResult::Equal => continue,
                other => return other,
            }
        }
        OrderResult::Equal
    }

    /// `t ≺_A s` iff `tγ0 ≺ sγ0`.
    pub fn compare_terms_a(&self, t: &Term, s: &Term) -> OrderResult {
        self.compare_terms(&self.apply_gamma0(t), &self.apply_gamma0(s))
    }

    fn prepare(&self, t: &Term) -> Prepared {
        let term = self.apply_gamma0(t);
        let reduced = self.reduce_to_a0(&term);
        Prepared { term, reduced }
    }

    /// [`compare_terms`](Self::compare_terms) on terms reduced in advance.
    fn compare_prepared(&self, t: &Prepared, s: &Prepared) -> OrderResult {
        if t.term == s.term {
            return OrderResult::Equal;
        }
        match self.lpo(&t.reduced, &s.reduced) {
            OrderResult::Equal if t.term.is_ground() && s.term.is_ground() => self.tie_break(&t.term, &s.term),
            OrderResult::Equal => OrderResult::Incomparable,
            other => other,
        }
    }

    /// Multiset encoding of a literal: `{s, t}` when positive, `{s, s, t, t}`
    /// when negative, after `γ0`.
    fn literal_measure(&self, l: &Literal) -> Vec<Prepared> {
        let (a, b) = (self.prepare(l.lhs()), self.prepare(l.rhs()));
        if l.is_positive() {
            vec![a, b]
        } else {
            vec![a.clone(), a, b.clone(), b]
        }
    }

    fn compare_measures(&self, m: &[Prepared], n: &[Prepared]) -> OrderResult {
        multiset_compare(m, n, |a, b| self.compare_prepared(a, b))
    }

    /// The multiset extension of `≺_A` to literals.
    pub fn compare_literals_a(&self, l: &Literal, m: &Literal) -> OrderResult {
        self.compare_measures(&self.literal_measure(l), &self.literal_measure(m))
    }

    /// Multiset extension of the literal ordering to clauses.
    pub fn compare_clauses_a(&self, c: &Clause, d: &Clause) -> OrderResult {
        let cm: Vec<Vec<Prepared>> = c.literals().iter().map(|l| self.literal_measure(l)).collect();
        let dm: Vec<Vec<Prepared>> = d.literals().iter().map(|l| self.literal_measure(l)).collect();
        multiset_compare(&cm, &dm, |a, b| self.compare_measures(a, b))
    }

    /// True when no other literal of `lits` is strictly greater than `lits[i]`.
    pub fn is_maximal_at(&self, lits: &[Literal], i: usize) -> bool {
        let li = self.literal_measure(&lits[i]);
        lits.iter().enumerate().all(|(j, m)| {
            j == i || self.compare_measures(&li, &self.literal_measure(m)) != OrderResult::Less
        })
    }

    /// Indices of the `≺_A`-maximal literals of `c`.
    pub fn maximal_literals(&self, c: &Clause) -> Vec<usize> {
        let measures: Vec<Vec<Prepared>> = c.literals().iter().map(|l| self.literal_measure(l)).collect();
        (0..measures.len())
            .filter(|&i| {
                (0..measures.len())
                    .all(|j| j == i || self.compare_measures(&measures[i], &measures[j]) != OrderResult::Less)
            })
            .collect()
    }

    /// Some maximal literal is `x ≃ t` with `x` a variable and `x ⊀_A t`.
    pub fn is_variable_eligible(&self, c: &Clause) -> bool {
        self.maximal_literals(c).into_iter().any(|i| {
            let l = &c.literals()[i];
            l.is_positive()
                && l.orientations().into_iter().any(|(x, t)| {
                    x.is_var() && self.compare_terms_a(x, t) != OrderResult::Less
                })
        })
    }
}

/// Huet–Oppen multiset extension of a (possibly partial) ordering.
pub fn multiset_compare<T: PartialEq + Clone>(
    m: &[T],
    n: &[T],
    cmp: impl Fn(&T, &T) -> OrderResult,
) -> OrderResult {
    let mut m_rest: Vec<&T> = m.iter().collect();
    let mut n_rest: Vec<&T> = Vec::new();
    for y in n {
        if let Some(p) = m_rest.iter().position(|x| *x == y) {
            m_rest.swap_remove(p);
        } else {
            n_rest.push(y);
        }
    }
    if m_rest.is_empty() && n_rest.is_empty() {
        return OrderResult::Equal;
    }
    let m_dominates = n_rest
        .iter()
        .all(|y| m_rest.iter().any(|x| cmp(x, y) == OrderResult::Greater));
    if m_dominates {
        return OrderResult::Greater;
    }
    let n_dominates = m_rest
        .iter()
        .all(|x| n_rest.iter().any(|y| cmp(y, x) == OrderResult::Greater));
    if n_dominates {
        return OrderResult::Less;
    }
    OrderResult::Incomparable
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Var;

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn f(args: Vec<Term>) -> Term {
        Term::func("f", args)
    }

    fn ctx(names: &[&str]) -> OrderingContext {
        OrderingContext::new(Abducibles::new(names.iter().copied()))
    }

    #[test]
    fn reduction_of_example_clause() {
        // A = {a, b, c}, a < b < c.
        let o = ctx(&["a", "b", "c"]);
        let x = Term::Var(Var::ordinary(0));
        let clause = Clause::new(vec![
            Literal::pos(f(vec![c("b"), c("c")]), Term::func("g", vec![c("d")])),
            Literal::neg(x.clone(), c("b")),
            Literal::neg(f(vec![c("a"), c("b")]), f(vec![c("c"), c("d")])),
        ]);
        let expected = Clause::new(vec![
            Literal::pos(f(vec![c("a"), c("a")]), Term::func("g", vec![c("d")])),
            Literal::neg(x, c("a")),
            Literal::neg(f(vec![c("a"), c("a")]), f(vec![c("a"), c("d")])),
        ]);
        assert_eq!(o.reduce_clause(&clause), expected);
        assert_eq!(o.reduce_clause(&expected), expected);
        assert_eq!(o.reduce_to_a0(&Term::func("g", vec![c("d")])), Term::func("g", vec![c("d")]));
        assert_eq!(o.reduce_to_a0(&c("b")), c("a"));
    }

    #[test]
    fn gamma0_maps_only_abducible_variables() {
        let o = ctx(&["a", "b"]);
        let xa = Term::Var(Var::abducible(0));
        let y = Term::Var(Var::ordinary(1));
        assert_eq!(o.apply_gamma0(&xa), c("a"));
        assert_eq!(o.apply_gamma0(&f(vec![xa, y.clone()])), f(vec![c("a"), y]));
        let g = Term::func("g", vec![c("b")]);
        assert_eq!(o.apply_gamma0(&g), g);
    }

    #[test]
    fn ground_comparisons() {
        let o = ctx(&["a", "b"]);
        assert_eq!(o.compare_terms(&c("a"), &c("b")), OrderResult::Less);
        assert_eq!(o.compare_terms(&c("b"), &f(vec![c("a")])), OrderResult::Less);
        // Same reduction f(a0); tie-break on the argument.
        assert_eq!(o.compare_terms(&f(vec![c("a")]), &f(vec![c("b")])), OrderResult::Less);
        assert_eq!(o.compare_terms(&f(vec![c("b")]), &f(vec![c("b")])), OrderResult::Equal);
        // Non-abducible constants sit above every abducible.
        assert_eq!(o.compare_terms(&c("b"), &c("d")), OrderResult::Less);
    }

    #[test]
    fn abstracted_comparisons() {
        let o = ctx(&["a", "b"]);
        let x = Term::Var(Var::abducible(0));
        let y = Term::Var(Var::abducible(1));
        let z = Term::Var(Var::ordinary(2));
        assert_eq!(o.compare_terms_a(&x, &y), OrderResult::Equal);
        assert_eq!(o.compare_terms_a(&x, &f(vec![z])), OrderResult::Less);
        let fx = f(vec![x.clone()]);
        assert_eq!(o.compare_terms_a(&fx, &Term::func("g", vec![fx.clone()])), OrderResult::Less);
    }

    #[test]
    fn maximal_literals_examples() {
        let o = ctx(&["i", "j", "b", "c"]);
        let x1 = Term::Var(Var::abducible(0));
        let y1 = Term::Var(Var::abducible(1));
        let store = Term::func("store", vec![c("a"), x1.clone(), y1.clone()]);
        let clause = Clause::new(vec![
            Literal::neg(x1, c("i")),
            Literal::neg(y1, c("b")),
            Literal::pos(c("d1"), store.clone()),
        ]);
        let max = o.maximal_literals(&clause);
        assert_eq!(max.len(), 1);
        assert_eq!(clause.literals()[max[0]], Literal::pos(c("d1"), store));

        let unit = Clause::unit(Literal::pos(c("a"), c("b")));
        assert_eq!(o.maximal_literals(&unit), vec![0]);

        let twice = Clause::new(vec![Literal::pos(c("i"), c("j")), Literal::pos(c("i"), c("j"))]);
        assert_eq!(o.maximal_literals(&twice), vec![0, 1]);
    }

    #[test]
    fn variable_eligibility() {
        let o = ctx(&["a"]);
        let x = Term::Var(Var::ordinary(0));
        let y = Term::Var(Var::ordinary(1));
        assert!(o.is_variable_eligible(&Clause::unit(Literal::pos(x.clone(), y))));
        assert!(!o.is_variable_eligible(&Clause::unit(Literal::pos(x.clone(), f(vec![x])))));
        assert!(!o.is_variable_eligible(&Clause::unit(Literal::pos(c("a"), c("d")))));
    }

    #[test]
    fn multiset_extension() {
        let cmp = |a: &i32, b: &i32| OrderResult::from_cmp(a.cmp(b));
        assert_eq!(multiset_compare(&[3, 1], &[2, 2, 2], cmp), OrderResult::Greater);
        assert_eq!(multiset_compare(&[1, 1], &[1, 1], cmp), OrderResult::Equal);
        assert_eq!(multiset_compare(&[1], &[1, 1], cmp), OrderResult::Less);
    }

    #[test]
    fn negative_literal_beats_positive_on_same_sides() {
        let o = ctx(&["a"]);
        let p = Literal::pos(c("d"), c("e"));
        assert_eq!(o.compare_literals_a(&p.complement(), &p), OrderResult::Greater);
    }
}
