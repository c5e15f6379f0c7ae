#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use abduce_core::oracle::is_satisfiable;
use abduce_core::{Abducibles, Clause, Literal, Term};

pub const CONSTANTS: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random ground term of depth at most `depth` over the first `n`
/// constants, `f/1` and `g/2`.
pub fn ground_term(rng: &mut StdRng, n: usize, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.5) {
        return Term::constant(CONSTANTS[rng.gen_range(0..n)]);
    }
    if rng.gen_bool(0.6) {
        Term::func("f", vec![ground_term(rng, n, depth - 1)])
    } else {
        Term::func("g", vec![ground_term(rng, n, depth - 1), ground_term(rng, n, depth - 1)])
    }
}

pub struct Instance {
    pub clauses: Vec<Clause>,
    pub abducibles: Abducibles,
}

/// At most 6 clauses of at most 3 literals, at most 5 constants of which 2
/// or 3 are abducible, unary and binary functions, depth at most 2.
pub fn ground_instance(rng: &mut StdRng) -> Instance {
    let n_abd = rng.gen_range(2..=3);
    let n = rng.gen_range(n_abd.max(3)..=5);
    let n_clauses = rng.gen_range(1..=6);
    let clauses = (0..n_clauses)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            Clause::new(
                (0..len)
                    .map(|_| {
                        let (s, t) = (ground_term(rng, n, 2), ground_term(rng, n, 2));
                        Literal::new(rng.gen_bool(0.5), s, t)
                    })
                    .collect(),
            )
        })
        .collect();
    Instance { clauses, abducibles: Abducibles::new(CONSTANTS[..n_abd].iter().copied()) }
}

/// `count` satisfiable instances drawn from `seed`.
pub fn satisfiable_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let inst = ground_instance(&mut r);
        if is_satisfiable(&inst.clauses).unwrap() {
            out.push(inst);
        }
    }
    out
}

/// Random flat ground clauses over a theory signature: each literal is
/// `c ⋈ d` or `c ⋈ h(d1, ..., dn)` for constants `c, d, di`.
pub fn flat_ground_clauses(
    rng: &mut StdRng,
    functions: &[(&str, usize)],
    constants: &[&str],
    max_clauses: usize,
    max_len: usize,
) -> Vec<Clause> {
    let constant = |rng: &mut StdRng| Term::constant(constants.choose(rng).unwrap());
    (0..rng.gen_range(1..=max_clauses))
        .map(|_| {
            Clause::new(
                (0..rng.gen_range(1..=max_len))
                    .map(|_| {
                        let lhs = constant(rng);
                        let rhs = if rng.gen_bool(0.6) {
                            let (h, arity) = *functions.choose(rng).unwrap();
                            Term::func(h, (0..arity).map(|_| constant(rng)).collect())
                        } else {
                            constant(rng)
                        };
                        Literal::new(rng.gen_bool(0.5), lhs, rhs)
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Random ground terms over `a..e`, `f/1`, `g/2` up to `depth`.
pub fn term_pairs(seed: u64, count: usize, depth: usize) -> Vec<(Term, Term)> {
    let mut r = rng(seed);
    (0..count).map(|_| (ground_term(&mut r, 5, depth), ground_term(&mut r, 5, depth))).collect()
}
