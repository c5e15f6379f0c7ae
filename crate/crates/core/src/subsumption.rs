//! Multiset subsumption and variant checks on clauses.

use crate::term::{Clause, Literal};
use crate::unification::{match_term, Bindings};

fn match_literal(l: &Literal, m: &Literal, b: &Bindings) -> Vec<Bindings> {
    if l.is_positive() != m.is_positive() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(2);
    let mut straight = b.clone();
    if match_term(l.lhs(), m.lhs(), &mut straight) && match_term(l.rhs(), m.rhs(), &mut straight) {
        out.push(straight);
    }
    let mut swapped = b.clone();
    if match_term(l.lhs(), m.rhs(), &mut swapped)
        && match_term(l.rhs(), m.lhs(), &mut swapped)
        && !out.contains(&swapped)
    {
        out.push(swapped);
    }
    out
}

/// Searches for `σ` with `Cσ ⊆ D` as multisets, accepted by `accept`.
/// `accept` is also applied to partial bindings, so it must hold of every
/// subset of an acceptable binding set.
pub fn find_subsumer(c: &Clause, d: &Clause, accept: &dyn Fn(&Bindings) -> bool) -> Option<Bindings> {
    if c.len() > d.len() {
        return None;
    }
    let empty = Bindings::new();
    let mut order: Vec<(usize, Vec<usize>)> = Vec::with_capacity(c.len());
    for (i, l) in c.literals().iter().enumerate() {
        let candidates: Vec<usize> =
            (0..d.len()).filter(|&j| !match_literal(l, &d.literals()[j], &empty).is_empty()).collect();
        if candidates.is_empty() {
            return None;
        }
        order.push((i, candidates));
    }
    order.sort_by_key(|(_, cands)| cands.len());
    let mut used = vec![false; d.len()];
    search(c.literals(), d.literals(), &order, 0, &empty, &mut used, accept)
}

fn search(
    c: &[Literal],
    d: &[Literal],
    order: &[(usize, Vec<usize>)],
    k: usize,
    b: &Bindings,
    used: &mut [bool],
    accept: &dyn Fn(&Bindings) -> bool,
) -> Option<Bindings> {
    if k == order.len() {
        return Some(b.clone());
    }
    let (i, candidates) = &order[k];
    for &j in candidates {
        if used[j] {
            continue;
        }
        for nb in match_literal(&c[*i], &d[j], b) {
            if !accept(&nb) {
                continue;
            }
            used[j] = true;
            let found = search(c, d, order, k + 1, &nb, used, accept);
            used[j] = false;
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    find_subsumer(c, d, &|_| true).is_some()
}

/// Equal up to a renaming of variables.
pub fn is_variant(c: &Clause, d: &Clause) -> bool {
    if c.len() != d.len() {
        return false;
    }
    let injective = |b: &Bindings| {
        let mut seen = std::collections::BTreeSet::new();
        b.iter().all(|(v, t)| {
            t.as_var().is_some_and(|w| w.class() == v.class() && seen.insert(w))
        })
    };
    find_subsumer(c, d, &injective).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Term, Var};

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn x(id: u32) -> Term {
        Term::Var(Var::ordinary(id))
    }

    #[test]
    fn subsumption_respects_multiplicity() {
        let p = Clause::new(vec![Literal::pos(x(0), c("a")), Literal::pos(x(1), c("a"))]);
        let d = Clause::unit(Literal::pos(c("b"), c("a")));
        assert!(!subsumes(&p, &d));
        let d2 = Clause::new(vec![Literal::pos(c("b"), c("a")), Literal::pos(c("c"), c("d"))]);
        assert!(!subsumes(&p, &d2));
        let d3 = Clause::new(vec![Literal::pos(c("b"), c("a")), Literal::pos(c("c"), c("a"))]);
        assert!(subsumes(&p, &d3));
    }

    #[test]
    fn subsumption_uses_symmetry() {
        let p = Clause::unit(Literal::neg(Term::func("f", vec![x(0)]), c("a")));
        let d = Clause::new(vec![Literal::neg(c("a"), Term::func("f", vec![c("b")])), Literal::pos(c("c"), c("d"))]);
        assert!(subsumes(&p, &d));
        assert!(!subsumes(&d, &p));
    }

    #[test]
    fn variants() {
        let p = Clause::new(vec![Literal::pos(x(0), x(1)), Literal::neg(x(1), c("a"))]);
        let q = Clause::new(vec![Literal::pos(x(7), x(3)), Literal::neg(x(3), c("a"))]);
        let r = Clause::new(vec![Literal::pos(x(3), x(3)), Literal::neg(x(3), c("a"))]);
        assert!(is_variant(&p, &q));
        assert!(!is_variant(&p, &r));
    }
}
