//! The generating inference rules, in their abstracted form: unifiers must be
//! A-compliant and ordering conditions are checked with `≺_A` after applying
//! the unifier. The plain variant uses ordinary mgus.

use crate::ordering::{OrderResult, OrderingContext};
use crate::term::{Apply, Clause, Literal, Substitution, Term};
use crate::unification::{a_compliant_mgu, mgu};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    /// Abducibles abstracted, A-compliant unifiers, A-reduction.
    Abstracted,
    /// Unmodified superposition: no abstraction, any mgu.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Superposition,
    Paramodulation,
    Reflection,
    EqualityFactoring,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Superposition => "superposition",
            Rule::Paramodulation => "paramodulation",
            Rule::Reflection => "reflection",
            Rule::EqualityFactoring => "equality-factoring",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Conclusion {
    pub rule: Rule,
    pub clause: Clause,
    pub mgu: Substitution,
}

pub struct Inferences<'a> {
    pub ordering: &'a OrderingContext,
    pub calculus: Calculus,
}

fn not_less(r: OrderResult) -> bool {
    r != OrderResult::Less
}

impl Inferences<'_> {
    fn unify(&self, a: &Term, b: &Term) -> Option<Substitution> {
        match self.calculus {
            Calculus::Abstracted => a_compliant_mgu(a, b, self.ordering.abducibles()).ok(),
            Calculus::Plain => mgu(a, b).ok(),
        }
    }

    fn term_not_less(&self, s: &Term, t: &Term) -> bool {
        not_less(self.ordering.compare_terms_a(s, t))
    }

    /// `lit ⊀ L` for every `L` in `others`.
    fn literal_not_below(&self, lit: &Literal, others: &[Literal]) -> bool {
        others.iter().all(|m| not_less(self.ordering.compare_literals_a(lit, m)))
    }

    /// Superposition (into positive literals) and paramodulation (into
    /// negative literals) of `from` into `into`. The premises must not share
    /// variables.
    pub fn rewrite(&self, into: &Clause, from: &Clause) -> Vec<Conclusion> {
        let into_max = self.ordering.maximal_literals(into);
        let from_max = self.ordering.maximal_literals(from);
        self.rewrite_maximal(into, &into_max, from, &from_max)
    }

    /// As [`rewrite`](Self::rewrite), given the maximal literal indices of
    /// both premises.
    pub fn rewrite_maximal(&self, into: &Clause, into_max: &[usize], from: &Clause, from_max: &[usize]) -> Vec<Conclusion> {
        let mut out = Vec::new();
        for &j in from_max {
            let eq = &from.literals()[j];
            if !eq.is_positive() {
                continue;
            }
            for (u, t) in eq.orientations() {
                if self.ordering.compare_terms_a(u, t) == OrderResult::Less {
                    continue;
                }
                for &i in into_max {
                    let lit = &into.literals()[i];
                    for (l, r) in lit.orientations() {
                        if self.ordering.compare_terms_a(l, r) == OrderResult::Less {
                            continue;
                        }
                        for p in l.non_var_positions() {
                            let sub = l.subterm_at(&p).expect("position of l");
                            let Some(sigma) = self.unify(sub, u) else { continue };
                            if let Some(c) = self.rewrite_conclusion(into, i, l, r, &p, from, j, u, t, &sigma) {
                                out.push(c);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn rewrite_conclusion(
        &self,
        into: &Clause,
        i: usize,
        l: &Term,
        r: &Term,
        p: &[usize],
        from: &Clause,
        j: usize,
        u: &Term,
        t: &Term,
        sigma: &Substitution,
    ) -> Option<Conclusion> {
        let positive = into.literals()[i].is_positive();
        let (us, ts) = (u.apply(sigma), t.apply(sigma));
        if !self.term_not_less(&us, &ts) {
            return None;
        }
        let d: Vec<Literal> = from.without(j).iter().map(|m| m.apply(sigma)).collect();
        if !self.literal_not_below(&Literal::pos(us, ts.clone()), &d) {
            return None;
        }
        let (ls, rs) = (l.apply(sigma), r.apply(sigma));
        if !self.term_not_less(&ls, &rs) {
            return None;
        }
        let c: Vec<Literal> = into.without(i).iter().map(|m| m.apply(sigma)).collect();
        if !self.literal_not_below(&Literal::new(positive, ls.clone(), rs.clone()), &c) {
            return None;
        }
        let rewritten = ls.replace_at(p, ts);
        let mut lits = c;
        lits.extend(d);
        lits.push(Literal::new(positive, rewritten, rs));
        let rule = if positive { Rule::Superposition } else { Rule::Paramodulation };
        Some(Conclusion { rule, clause: Clause::new(lits), mgu: sigma.clone() })
    }

    pub fn reflection(&self, c: &Clause) -> Vec<Conclusion> {
        let mut out = Vec::new();
        for i in self.ordering.maximal_literals(c) {
            let lit = &c.literals()[i];
            if lit.is_positive() {
                continue;
            }
            let Some(sigma) = self.unify(lit.lhs(), lit.rhs()) else { continue };
            let rest: Vec<Literal> = c.without(i).iter().map(|m| m.apply(&sigma)).collect();
            if !self.literal_not_below(&lit.apply(&sigma), &rest) {
                continue;
            }
            out.push(Conclusion { rule: Rule::Reflection, clause: Clause::new(rest), mgu: sigma });
        }
        out
    }

    pub fn equality_factoring(&self, c: &Clause) -> Vec<Conclusion> {
        let mut out = Vec::new();
        let lits = c.literals();
        for i in self.ordering.maximal_literals(c) {
            if !lits[i].is_positive() {
                continue;
            }
            for j in 0..lits.len() {
                if j == i || !lits[j].is_positive() {
                    continue;
                }
                for (u, t) in lits[i].orientations() {
                    for (u2, t2) in lits[j].orientations() {
                        let Some(sigma) = self.unify(u, u2) else { continue };
                        let (us, ts) = (u.apply(&sigma), t.apply(&sigma));
                        if !self.term_not_less(&us, &ts) {
                            continue;
                        }
                        let mut rest: Vec<Literal> = lits
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != i && k != j)
                            .map(|(_, m)| m.apply(&sigma))
                            .collect();
                        let mut others = rest.clone();
                        others.push(lits[j].apply(&sigma));
                        if !self.literal_not_below(&Literal::pos(us.clone(), ts.clone()), &others) {
                            continue;
                        }
                        rest.push(Literal::neg(ts, t2.apply(&sigma)));
                        rest.push(Literal::pos(us, t2.apply(&sigma)));
                        out.push(Conclusion { rule: Rule::EqualityFactoring, clause: Clause::new(rest), mgu: sigma });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsumption::is_variant;
    use crate::term::{Abducibles, Var};

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn x(id: u32) -> Term {
        Term::Var(Var::ordinary(id))
    }

    fn xa(id: u32) -> Term {
        Term::Var(Var::abducible(id))
    }

    fn sel(a: Term, i: Term) -> Term {
        Term::func("select", vec![a, i])
    }

    fn store(a: Term, i: Term, v: Term) -> Term {
        Term::func("store", vec![a, i, v])
    }

    fn array_ctx() -> OrderingContext {
        OrderingContext::new(Abducibles::new(["i", "j", "b", "c"]))
    }

    fn clause_3prime() -> Clause {
        // x' ≄ i ∨ y' ≄ b ∨ d1 ≃ store(a, x', y')
        Clause::new(vec![
            Literal::neg(xa(10), c("i")),
            Literal::neg(xa(11), c("b")),
            Literal::pos(c("d1"), store(c("a"), xa(10), xa(11))),
        ])
    }

    #[test]
    fn superposition_into_read_over_write() {
        let ord = array_ctx();
        let inf = Inferences { ordering: &ord, calculus: Calculus::Abstracted };
        // select(store(X, Z, V), Z) ≃ V
        let ax1 = Clause::unit(Literal::pos(sel(store(x(0), x(1), x(2)), x(1)), x(2)));
        let got = inf.rewrite(&ax1, &clause_3prime());
        let expected = Clause::new(vec![
            Literal::neg(xa(10), c("i")),
            Literal::neg(xa(11), c("b")),
            Literal::pos(sel(c("d1"), xa(10)), xa(11)),
        ]);
        assert!(got.iter().any(|k| is_variant(&k.clause, &expected)), "{got:?}");

        // select(store(X, Z, V), W) ≃ select(X, W) ∨ Z ≃ W
        let ax2 = Clause::new(vec![
            Literal::pos(sel(store(x(0), x(1), x(2)), x(3)), sel(x(0), x(3))),
            Literal::pos(x(1), x(3)),
        ]);
        let got = inf.rewrite(&ax2, &clause_3prime());
        let expected = Clause::new(vec![
            Literal::neg(xa(10), c("i")),
            Literal::neg(xa(11), c("b")),
            Literal::pos(x(3), xa(10)),
            Literal::pos(sel(c("d1"), x(3)), sel(c("a"), x(3))),
        ]);
        assert!(got.iter().any(|k| is_variant(&k.clause, &expected)), "{got:?}");
    }

    #[test]
    fn non_compliant_unifiers_are_skipped() {
        let ord = OrderingContext::new(Abducibles::new(["a", "b"]));
        let inf = Inferences { ordering: &ord, calculus: Calculus::Abstracted };
        // f(x) ≄ c with x abducible, against f(g(y)) ≃ d: x ↦ g(y) is not compliant.
        let into = Clause::new(vec![Literal::neg(Term::func("f", vec![xa(0)]), c("c")), Literal::neg(xa(0), c("a"))]);
        let from = Clause::unit(Literal::pos(Term::func("f", vec![Term::func("g", vec![x(5)])]), c("d")));
        assert!(inf.rewrite(&into, &from).is_empty());
        let plain = Inferences { ordering: &ord, calculus: Calculus::Plain };
        assert!(!plain.rewrite(&into, &from).is_empty());
    }

    #[test]
    fn reflection_examples() {
        let ord = OrderingContext::new(Abducibles::new(["a", "b"]));
        let inf = Inferences { ordering: &ord, calculus: Calculus::Abstracted };
        let abstracted = Clause::new(vec![
            Literal::neg(xa(0), c("a")),
            Literal::neg(xa(1), c("b")),
            Literal::neg(Term::func("f", vec![xa(0)]), Term::func("f", vec![xa(1)])),
        ]);
        let got = inf.reflection(&abstracted);
        assert_eq!(got.len(), 1);
        let expected = Clause::new(vec![Literal::neg(xa(0), c("a")), Literal::neg(xa(0), c("b"))]);
        assert!(is_variant(&got[0].clause, &expected));

        let aa = Clause::unit(Literal::neg(c("a"), c("a")));
        assert_eq!(inf.reflection(&aa)[0].clause, Clause::empty());
        assert!(inf.reflection(&Clause::unit(Literal::pos(c("a"), c("b")))).is_empty());
    }

    #[test]
    fn equality_factoring_examples() {
        // a is the largest abducible and a ≃ b the maximal literal.
        let ord = OrderingContext::new(Abducibles::new(["c", "b", "a"]));
        let inf = Inferences { ordering: &ord, calculus: Calculus::Abstracted };
        let ground = Clause::new(vec![Literal::pos(c("a"), c("b")), Literal::pos(c("a"), c("c"))]);
        let got: Vec<Clause> = inf.equality_factoring(&ground).into_iter().map(|k| k.clause).collect();
        assert!(got.contains(&Clause::new(vec![Literal::neg(c("b"), c("c")), Literal::pos(c("a"), c("c"))])), "{got:?}");
        assert!(inf.equality_factoring(&Clause::unit(Literal::pos(c("a"), c("b")))).is_empty());

        let plain = OrderingContext::new(Abducibles::default());
        let inf = Inferences { ordering: &plain, calculus: Calculus::Abstracted };
        let f = |t| Term::func("f", vec![t]);
        let open = Clause::new(vec![Literal::pos(f(x(0)), x(1)), Literal::pos(f(x(2)), x(1))]);
        let expected = Clause::new(vec![Literal::neg(x(1), x(1)), Literal::pos(f(x(0)), x(1))]);
        let got = inf.equality_factoring(&open);
        assert!(got.iter().any(|k| is_variant(&k.clause, &expected)), "{got:?}");
    }

    #[test]
    fn ground_a_clauses() {
        let ord = OrderingContext::new(Abducibles::new(["a", "b", "c"]));
        let inf = Inferences { ordering: &ord, calculus: Calculus::Abstracted };
        let ab = Clause::unit(Literal::pos(c("a"), c("b")));
        let bc = Clause::unit(Literal::pos(c("b"), c("c")));
        // Neither maximal side can be rewritten.
        assert!(inf.rewrite(&ab, &bc).is_empty());
        assert!(inf.rewrite(&bc, &ab).is_empty());
        let ac = Clause::unit(Literal::pos(c("a"), c("c")));
        let got: Vec<Clause> = inf.rewrite(&ac, &bc).into_iter().map(|k| k.clause).collect();
        assert_eq!(got, vec![ab]);
    }
}
