//! Decidable redundancy tests: tautologies, subsumption compatible with the
//! `ν` substitution, and demodulation by unit equations.

use crate::abstraction::nu_of;
use crate::ordering::{OrderResult, OrderingContext};
use crate::subsumption::find_subsumer;
use crate::term::{Abducibles, Apply, Clause, Literal, Term};
use crate::unification::{bindings_to_substitution, match_term, Bindings};

use super::rules::Calculus;

/// `D` subsumes `C` through a matcher `σ`. In the abstracted calculus `σ`
/// must map abducible variables to abducible variables, keep images
/// abstracted, and agree with the constraints: `ν_C(xσ) = ν_D(x)`.
pub fn subsumes_in(d: &Clause, c: &Clause, calculus: Calculus, abducibles: &Abducibles) -> bool {
    match calculus {
        Calculus::Plain => find_subsumer(d, c, &|_| true).is_some(),
        Calculus::Abstracted => {
            let nu_c = nu_of(c, abducibles);
            let nu_d = nu_of(d, abducibles);
            let accept = |b: &Bindings| {
                b.iter().all(|(v, t)| {
                    if !t.is_abstracted(abducibles) {
                        return false;
                    }
                    if !v.is_abducible() {
                        return true;
                    }
                    match t.as_var() {
                        Some(w) if w.is_abducible() => nu_c.get(w) == nu_d.get(*v),
                        _ => false,
                    }
                })
            };
            find_subsumer(d, c, &accept).is_some()
        }
    }
}

/// A unit equation usable for rewriting: no abducible variables or
/// constants, left side strictly greater than the right side.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    pub fn from_clause(c: &Clause, ordering: &OrderingContext) -> Vec<RewriteRule> {
        if !c.is_unit() {
            return Vec::new();
        }
        let lit = &c.literals()[0];
        let abducibles = ordering.abducibles();
        if lit.is_negative() || lit.is_a_literal(abducibles) || !c.abducible_vars().is_empty() {
            return Vec::new();
        }
        let has_abducible = |t: &Term| !t.is_abstracted(abducibles);
        if has_abducible(lit.lhs()) || has_abducible(lit.rhs()) {
            return Vec::new();
        }
        lit.orientations()
            .into_iter()
            .filter(|(l, r)| ordering.compare_terms_a(l, r) == OrderResult::Greater)
            .map(|(l, r)| RewriteRule { lhs: l.clone(), rhs: r.clone() })
            .collect()
    }
}

/// Rewrites `t` to normal form; `top_guard` decides whether a rewrite at the
/// root is allowed, given the reduct.
fn normalize(t: &Term, rules: &[RewriteRule], top_guard: &dyn Fn(&Term) -> bool, budget: &mut usize) -> Term {
    let mut cur = t.clone();
    loop {
        let inner = match &cur {
            Term::App(f, args) if !args.is_empty() => Term::app(
                f.clone(),
                args.iter().map(|a| normalize(a, rules, &|_| true, budget)).collect(),
            ),
            _ => cur.clone(),
        };
        let mut next = None;
        if *budget > 0 {
            for r in rules {
                let mut b = Bindings::new();
                if match_term(&r.lhs, &inner, &mut b) {
                    let reduct = r.rhs.apply(&bindings_to_substitution(&b));
                    if top_guard(&reduct) {
                        next = Some(reduct);
                        break;
                    }
                }
            }
        }
        match next {
            Some(n) => {
                *budget -= 1;
                cur = n;
            }
            None => return inner,
        }
    }
}

/// Demodulated form of `c`, or `None` when no rewrite applies. A side at the
/// root of a positive literal `s ≃ t` is rewritten only when the reduct is
/// smaller than `t`.
pub fn demodulate(c: &Clause, rules: &[RewriteRule], ordering: &OrderingContext) -> Option<Clause> {
    if rules.is_empty() {
        return None;
    }
    let mut budget = 1000usize;
    let lits: Vec<Literal> = c
        .literals()
        .iter()
        .map(|l| {
            let mut side = |s: &Term, other: &Term| {
                if l.is_positive() {
                    let guard = |reduct: &Term| ordering.compare_terms_a(other, reduct) == OrderResult::Greater;
                    normalize(s, rules, &guard, &mut budget)
                } else {
                    normalize(s, rules, &|_| true, &mut budget)
                }
            };
            let (a, b) = (side(l.lhs(), l.rhs()), side(l.rhs(), l.lhs()));
            Literal::new(l.is_positive(), a, b)
        })
        .collect();
    let out = Clause::new(lits);
    (out != *c).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Var;

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn x(id: u32) -> Term {
        Term::Var(Var::ordinary(id))
    }

    fn xa(id: u32) -> Term {
        Term::Var(Var::abducible(id))
    }

    #[test]
    fn subsumption_checks_constraints() {
        let a = Abducibles::new(["a", "b"]);
        let f = |t| Term::func("f", vec![t]);
        // x ≄ a ∨ f(x) ≃ c  versus  y ≄ b ∨ f(y) ≃ c: different abducibles.
        let d = Clause::new(vec![Literal::neg(xa(0), c("a")), Literal::pos(f(xa(0)), c("c"))]);
        let other = Clause::new(vec![Literal::neg(xa(1), c("b")), Literal::pos(f(xa(1)), c("c"))]);
        assert!(!subsumes_in(&d, &other, Calculus::Abstracted, &a));
        let longer = Clause::new(vec![
            Literal::neg(xa(1), c("a")),
            Literal::pos(f(xa(1)), c("c")),
            Literal::pos(c("d"), c("e")),
        ]);
        assert!(subsumes_in(&d, &longer, Calculus::Abstracted, &a));
        // Ordinary variables may not capture abducible variables' positions through constants.
        let g = Clause::unit(Literal::pos(f(x(0)), c("c")));
        assert!(subsumes_in(&g, &longer, Calculus::Abstracted, &a));
        let ground_a = Clause::unit(Literal::pos(f(c("a")), c("c")));
        assert!(!subsumes_in(&g, &ground_a, Calculus::Abstracted, &a));
        assert!(subsumes_in(&g, &ground_a, Calculus::Plain, &a));
    }

    #[test]
    fn demodulation_rewrites_to_normal_form() {
        let ord = OrderingContext::new(Abducibles::new(["a"]));
        let f = |t| Term::func("f", vec![t]);
        let unit = Clause::unit(Literal::pos(f(f(x(0))), x(0)));
        let rules = RewriteRule::from_clause(&unit, &ord);
        assert_eq!(rules.len(), 1);
        let target = Clause::unit(Literal::neg(f(f(f(c("e")))), c("d")));
        assert_eq!(demodulate(&target, &rules, &ord), Some(Clause::unit(Literal::neg(f(c("e")), c("d")))));
        let with_abducible = Clause::unit(Literal::pos(f(c("a")), c("d")));
        assert!(RewriteRule::from_clause(&with_abducible, &ord).is_empty());
    }

    #[test]
    fn root_rewrites_of_positive_literals_are_guarded() {
        let ord = OrderingContext::new(Abducibles::default());
        let rules = RewriteRule::from_clause(&Clause::unit(Literal::pos(c("e"), c("d"))), &ord);
        assert_eq!(rules[0].lhs, c("e"));
        // e ≃ d itself must not be rewritten to d ≃ d.
        assert_eq!(demodulate(&Clause::unit(Literal::pos(c("e"), c("d"))), &rules, &ord), None);
        let bigger = Clause::unit(Literal::pos(c("e"), c("z")));
        assert_eq!(demodulate(&bigger, &rules, &ord), Some(Clause::unit(Literal::pos(c("d"), c("z")))));
    }
}
