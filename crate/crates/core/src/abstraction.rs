//! Abstraction of abducibles into constrained abducible variables, the `ν`
//! substitution, A-reduction, and naming of ground subterms.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::term::{Abducibles, Apply, Clause, Literal, Substitution, Symbol, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbstractionError {
    #[error("flattening target is not ground: {0}")]
    NonGroundTarget(String),
}

/// Replaces every abducible occurring in a non-A-literal by a fresh abducible
/// variable `x` and adds the constraint `x ≄ a`. One variable per occurrence.
pub fn abstract_clause(c: &Clause, abducibles: &Abducibles) -> Clause {
    let mut next = c.max_var_id().map_or(0, |m| m + 1);
    let mut constraints = Vec::new();
    let mut lits = Vec::with_capacity(c.len());
    for lit in c.literals() {
        if lit.is_a_literal(abducibles) {
            lits.push(lit.clone());
            continue;
        }
        let mut replace = |t: &Term| abstract_term(t, abducibles, &mut next, &mut constraints);
        let l = replace(lit.lhs());
        let r = replace(lit.rhs());
        lits.push(Literal::new(lit.is_positive(), l, r));
    }
    lits.extend(constraints);
    Clause::new(lits)
}

fn abstract_term(t: &Term, abducibles: &Abducibles, next: &mut u32, constraints: &mut Vec<Literal>) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(_, args) if args.is_empty() => {
            if abducibles.contains_term(t) {
                let x = Term::Var(Var::abducible(*next));
                *next += 1;
                constraints.push(Literal::neg(x.clone(), t.clone()));
                x
            } else {
                t.clone()
            }
        }
        Term::App(f, args) => Term::app(
            f.clone(),
            args.iter().map(|a| abstract_term(a, abducibles, next, constraints)).collect(),
        ),
    }
}

/// `ν_C`: each constrained abducible variable goes to the least abducible
/// among its constraints.
pub fn nu_of(c: &Clause, abducibles: &Abducibles) -> Substitution {
    let mut best: BTreeMap<Var, (usize, &Symbol)> = BTreeMap::new();
    for lit in c.literals() {
        if let Some((x, a)) = lit.constraint_parts(abducibles) {
            let rank = abducibles.rank(a).expect("constraint names an abducible");
            best.entry(x)
                .and_modify(|cur| {
                    if rank < cur.0 {
                        *cur = (rank, a);
                    }
                })
                .or_insert((rank, a));
        }
    }
    Substitution::from_pairs(
        best.into_iter()
            .map(|(x, (_, a))| (x, Term::app(a.clone(), Vec::new()))),
    )
}

/// The A-reduction rule: `C ⟹ Cν_C` for an A-clause with `ν_C ≠ id`.
pub fn a_reduce(c: &Clause, abducibles: &Abducibles) -> Option<Clause> {
    if !c.is_a_clause(abducibles) {
        return None;
    }
    let nu = nu_of(c, abducibles);
    if nu.is_identity() {
        return None;
    }
    Some(c.apply(&nu))
}

/// Drops constraint literals on abducible variables that occur nowhere else.
///
/// For a variable `y` occurring only in `y ≄ a1 ∨ ... ∨ y ≄ ak`, the clause
/// is equivalent to its instance at `y = min(ai)`; the false literal
/// `min ≄ min` is then removed, leaving `min ≄ ai` for the other `ai`.
/// A-clauses are left to [`a_reduce`].
pub fn eliminate_isolated_constraints(c: &Clause, abducibles: &Abducibles) -> Option<Clause> {
    if c.is_a_clause(abducibles) {
        return None;
    }
    let mut constrained_only: BTreeSet<Var> = BTreeSet::new();
    let mut elsewhere: HashSet<Var> = HashSet::new();
    for lit in c.literals() {
        match lit.constraint_parts(abducibles) {
            Some((x, _)) => {
                constrained_only.insert(x);
            }
            None => {
                let mut vs = BTreeSet::new();
                lit.collect_vars(&mut vs);
                elsewhere.extend(vs);
            }
        }
    }
    constrained_only.retain(|x| !elsewhere.contains(x));
    if constrained_only.is_empty() {
        return None;
    }
    let nu = nu_of(c, abducibles);
    let mut lits = Vec::with_capacity(c.len());
    for lit in c.literals() {
        match lit.constraint_parts(abducibles) {
            Some((x, a)) if constrained_only.contains(&x) => {
                let min = nu.get(x).expect("constrained variable is in dom(ν)");
                let a = Term::app(a.clone(), Vec::new());
                if *min != a {
                    lits.push(Literal::neg(min.clone(), a));
                }
            }
            _ => lits.push(lit.clone()),
        }
    }
    Some(Clause::new(lits))
}

/// Identifies abducible variables that `ν` sends to the same abducible:
/// `x ≄ a ∨ x' ≄ a ∨ C` becomes `x ≄ a ∨ C{x' ↦ x}`. Both clauses have
/// the same `ν`-instance up to a repeated literal.
pub fn merge_constraint_variables(c: &Clause, abducibles: &Abducibles) -> Option<Clause> {
    let nu = nu_of(c, abducibles);
    let mut first: BTreeMap<&Term, Var> = BTreeMap::new();
    let mut renaming = Substitution::identity();
    for (x, a) in nu.iter() {
        match first.get(a) {
            Some(&y) => renaming.bind(x, Term::Var(y)),
            None => {
                first.insert(a, x);
            }
        }
    }
    if renaming.is_identity() {
        return None;
    }
    Some(c.apply(&renaming).merge_duplicates())
}

/// Keeps one constraint per abducible variable: `x ≄ a ∨ x ≄ b ∨ C` with
/// `a = ν(x)` becomes `x ≄ a ∨ a ≄ b ∨ C`, which has the same `ν`-instance.
/// A-clauses are left to [`a_reduce`].
pub fn collapse_constraints(c: &Clause, abducibles: &Abducibles) -> Option<Clause> {
    if c.is_a_clause(abducibles) {
        return None;
    }
    let nu = nu_of(c, abducibles);
    let mut changed = false;
    let lits = c
        .literals()
        .iter()
        .map(|lit| match lit.constraint_parts(abducibles) {
            Some((x, a)) => {
                let min = nu.get(x).expect("constrained variable is in dom(ν)");
                let a = Term::app(a.clone(), Vec::new());
                if *min == a {
                    lit.clone()
                } else {
                    changed = true;
                    Literal::neg(min.clone(), a)
                }
            }
            None => lit.clone(),
        })
        .collect();
    changed.then(|| Clause::new(lits))
}

/// Result of naming ground subterms with fresh constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flattening {
    /// Input clauses with every target replaced by its name.
    pub clauses: Vec<Clause>,
    /// Fresh names in order of introduction.
    pub fresh: Vec<Symbol>,
    /// Defining unit equations `d ≃ t'`, one per fresh name.
    pub definitions: Vec<Clause>,
    /// The constant naming each target, in target order.
    pub names: Vec<Term>,
}

/// Names each target, innermost compound subterm first, with a fresh constant
/// `d1, d2, ...` (skipping names already in use), replacing it everywhere.
pub fn flatten_named_terms(
    clauses: &[Clause],
    targets: &[Term],
    used_names: &HashSet<String>,
) -> Result<Flattening, AbstractionError> {
    for t in targets {
        if !t.is_ground() {
            return Err(AbstractionError::NonGroundTarget(t.to_string()));
        }
    }
    let mut names: Vec<(Term, Term)> = Vec::new();
    let mut fresh = Vec::new();
    let mut definitions = Vec::new();
    let mut counter = 0usize;
    let mut taken: HashSet<String> = used_names.clone();
    for target in targets {
        let mut pending = Vec::new();
        collect_compound_postorder(target, &mut pending);
        for sub in pending {
            if names.iter().any(|(orig, _)| *orig == sub) {
                continue;
            }
            let replaced = replace_named_args(&sub, &names);
            let name = loop {
                counter += 1;
                let candidate = format!("d{counter}");
                if taken.insert(candidate.clone()) {
                    break candidate;
                }
            };
            let sym = Symbol::new(&name);
            let d = Term::app(sym.clone(), Vec::new());
            definitions.push(Clause::unit(Literal::pos(d.clone(), replaced)));
            fresh.push(sym);
            names.push((sub, d));
        }
    }
    let clauses = clauses
        .iter()
        .map(|c| c.map_literals(|l| l.map_terms(|t| replace_named(t, &names))))
        .collect();
    let target_names = targets.iter().map(|t| replace_named(t, &names)).collect();
    Ok(Flattening { clauses, fresh, definitions, names: target_names })
}

fn collect_compound_postorder(t: &Term, out: &mut Vec<Term>) {
    if let Term::App(_, args) = t {
        for a in args.iter() {
            collect_compound_postorder(a, out);
        }
        if !args.is_empty() && !out.contains(t) {
            out.push(t.clone());
        }
    }
}

fn replace_named(t: &Term, names: &[(Term, Term)]) -> Term {
    if let Some((_, d)) = names.iter().find(|(orig, _)| orig == t) {
        return d.clone();
    }
    replace_named_args(t, names)
}

fn replace_named_args(t: &Term, names: &[(Term, Term)]) -> Term {
    match t {
        Term::App(f, args) if !args.is_empty() => {
            Term::app(f.clone(), args.iter().map(|a| replace_named(a, names)).collect())
        }
        _ => t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsumption::is_variant;

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
    fn abstraction_of_worked_example() {
        let a = Abducibles::new(["a", "b"]);
        // a ≃ b ∨ a ≃ c ∨ f(b,d,x) ≄ g(b,y)
        let input = Clause::new(vec![
            Literal::pos(c("a"), c("b")),
            Literal::pos(c("a"), c("c")),
            Literal::neg(Term::func("f", vec![c("b"), c("d"), x(0)]), Term::func("g", vec![c("b"), x(1)])),
        ]);
        let expected = Clause::new(vec![
            Literal::neg(xa(11), c("a")),
            Literal::neg(xa(12), c("b")),
            Literal::neg(xa(13), c("b")),
            Literal::pos(c("a"), c("b")),
            Literal::pos(xa(11), c("c")),
            Literal::neg(Term::func("f", vec![xa(12), c("d"), x(0)]), Term::func("g", vec![xa(13), x(1)])),
        ]);
        let out = abstract_clause(&input, &a);
        assert!(is_variant(&out, &expected), "{out}");
        let k = out.classify(&a);
        assert!(k.abstracted && k.va_stable);
    }

    #[test]
    fn a_clauses_are_their_own_abstraction() {
        let a = Abducibles::new(["a", "b"]);
        let ab = Clause::unit(Literal::pos(c("a"), c("b")));
        assert_eq!(abstract_clause(&ab, &a), ab);
    }

    #[test]
    fn one_variable_per_occurrence() {
        let a = Abducibles::new(["a", "b"]);
        let input = Clause::unit(Literal::neg(Term::func("f", vec![c("a")]), Term::func("f", vec![c("b")])));
        let expected = Clause::new(vec![
            Literal::neg(xa(0), c("a")),
            Literal::neg(xa(1), c("b")),
            Literal::neg(Term::func("f", vec![xa(0)]), Term::func("f", vec![xa(1)])),
        ]);
        assert!(is_variant(&abstract_clause(&input, &a), &expected));
    }

    #[test]
    fn nu_examples() {
        let a = Abducibles::new(["a", "b", "c"]);
        let gamma = Clause::new(vec![
            Literal::neg(xa(0), c("a")),
            Literal::neg(xa(0), c("c")),
            Literal::neg(xa(1), c("b")),
            Literal::neg(xa(2), c("a")),
            Literal::neg(xa(1), c("c")),
        ]);
        let expected = Substitution::from_pairs([
            (Var::abducible(0), c("a")),
            (Var::abducible(1), c("b")),
            (Var::abducible(2), c("a")),
        ]);
        assert_eq!(nu_of(&gamma, &a), expected);
        assert!(nu_of(&Clause::unit(Literal::pos(c("d"), c("e"))), &a).is_identity());
        let single = Clause::unit(Literal::neg(xa(0), c("c")));
        assert_eq!(nu_of(&single, &a), Substitution::from_pairs([(Var::abducible(0), c("c"))]));
    }

    #[test]
    fn a_reduction_examples() {
        let a = Abducibles::new(["a", "b", "c"]);
        let clause = Clause::new(vec![
            Literal::neg(xa(0), c("a")),
            Literal::neg(xa(0), c("b")),
            Literal::pos(xa(0), c("c")),
        ]);
        let expected = Clause::new(vec![
            Literal::neg(c("a"), c("a")),
            Literal::neg(c("a"), c("b")),
            Literal::pos(c("a"), c("c")),
        ]);
        assert_eq!(a_reduce(&clause, &a), Some(expected));
        assert_eq!(a_reduce(&Clause::unit(Literal::neg(c("a"), c("b"))), &a), None);

        let ij = Abducibles::new(["i", "j", "b", "c"]);
        let non_a = Clause::new(vec![
            Literal::neg(xa(0), c("i")),
            Literal::neg(xa(1), c("b")),
            Literal::pos(c("d1"), Term::func("store", vec![c("a"), xa(0), xa(1)])),
        ]);
        assert_eq!(a_reduce(&non_a, &ij), None);
    }

    #[test]
    fn variables_with_equal_constraints_are_merged() {
        let a = Abducibles::new(["i", "j"]);
        let clause = Clause::new(vec![
            Literal::neg(xa(0), c("i")),
            Literal::neg(xa(1), c("i")),
            Literal::neg(xa(2), c("j")),
            Literal::pos(c("k"), xa(0)),
            Literal::pos(c("k"), xa(1)),
            Literal::pos(c("k"), xa(2)),
        ]);
        let expected = Clause::new(vec![
            Literal::neg(xa(0), c("i")),
            Literal::neg(xa(2), c("j")),
            Literal::pos(c("k"), xa(0)),
            Literal::pos(c("k"), xa(2)),
        ]);
        assert_eq!(merge_constraint_variables(&clause, &a), Some(expected));
        let distinct = Clause::new(vec![Literal::neg(xa(0), c("i")), Literal::neg(xa(1), c("j")), Literal::pos(xa(0), xa(1))]);
        assert_eq!(merge_constraint_variables(&distinct, &a), None);
    }

    #[test]
    fn constraints_collapse_to_the_least_abducible() {
        let a = Abducibles::new(["a", "b", "c"]);
        let f = |t| Term::func("f", vec![t]);
        let clause = Clause::new(vec![
            Literal::neg(xa(0), c("c")),
            Literal::neg(xa(0), c("a")),
            Literal::pos(f(xa(0)), c("d")),
        ]);
        let expected = Clause::new(vec![
            Literal::neg(xa(0), c("a")),
            Literal::neg(c("a"), c("c")),
            Literal::pos(f(xa(0)), c("d")),
        ]);
        assert_eq!(collapse_constraints(&clause, &a), Some(expected.clone()));
        assert_eq!(collapse_constraints(&expected, &a), None);
    }

    #[test]
    fn isolated_constraints_are_dropped() {
        let a = Abducibles::new(["i", "j", "b", "c"]);
        let clause = Clause::new(vec![
            Literal::neg(xa(0), c("i")),
            Literal::neg(xa(1), c("b")),
            Literal::pos(x(2), xa(0)),
            Literal::pos(Term::func("select", vec![c("d1"), x(2)]), Term::func("select", vec![c("a"), x(2)])),
        ]);
        let out = eliminate_isolated_constraints(&clause, &a).unwrap();
        assert_eq!(out.len(), 3);
        assert!(!out.literals().contains(&Literal::neg(xa(1), c("b"))));

        let two = Clause::new(vec![
            Literal::neg(xa(1), c("c")),
            Literal::neg(xa(1), c("b")),
            Literal::pos(c("d1"), c("d2")),
        ]);
        let out = eliminate_isolated_constraints(&two, &a).unwrap();
        assert_eq!(out, Clause::new(vec![Literal::neg(c("b"), c("c")), Literal::pos(c("d1"), c("d2"))]));
    }

    #[test]
    fn flattening_names_inner_terms_first() {
        let t = Term::func(
            "select",
            vec![Term::func("store", vec![c("a"), c("i"), c("b")]), c("j")],
        );
        let goal = Clause::unit(Literal::neg(t.clone(), c("e")));
        let out = flatten_named_terms(&[goal], &[t], &HashSet::new()).unwrap();
        assert_eq!(out.fresh, vec![Symbol::new("d1"), Symbol::new("d2")]);
        assert_eq!(
            out.definitions,
            vec![
                Clause::unit(Literal::pos(c("d1"), Term::func("store", vec![c("a"), c("i"), c("b")]))),
                Clause::unit(Literal::pos(c("d2"), Term::func("select", vec![c("d1"), c("j")]))),
            ]
        );
        assert_eq!(out.clauses, vec![Clause::unit(Literal::neg(c("d2"), c("e")))]);
        assert_eq!(out.names, vec![c("d2")]);
    }

    #[test]
    fn flattening_constants_is_a_no_op() {
        let goal = Clause::unit(Literal::neg(c("a"), c("e")));
        let out = flatten_named_terms(std::slice::from_ref(&goal), &[c("a")], &HashSet::new()).unwrap();
        assert!(out.fresh.is_empty());
        assert_eq!(out.clauses, vec![goal]);
    }

    #[test]
    fn flattening_skips_used_names_and_rejects_variables() {
        let t = Term::func("f", vec![c("d1")]);
        let used: HashSet<String> = ["d1".to_string()].into_iter().collect();
        let out = flatten_named_terms(&[], &[t], &used).unwrap();
        assert_eq!(out.fresh, vec![Symbol::new("d2")]);
        let open = Term::func("f", vec![x(0)]);
        assert!(flatten_named_terms(&[], &[open], &HashSet::new()).is_err());
    }
}
