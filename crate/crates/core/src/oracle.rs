//! Brute-force decision procedures for ground equational clause sets:
//! satisfiability by case splitting over congruence closure, entailment, and
//! exhaustive enumeration of A-implicates.

use std::collections::HashMap;

use thiserror::Error;

use crate::term::{Abducibles, Clause, Literal, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("clause is not ground: {0}")]
    NonGround(String),
    #[error("input clause set is unsatisfiable")]
    InputUnsatisfiable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat,
    Unsat,
}

#[derive(Default)]
struct TermGraph {
    nodes: Vec<(Symbol, Vec<usize>)>,
    index: HashMap<Term, usize>,
}

impl TermGraph {
    fn intern(&mut self, t: &Term) -> usize {
        if let Some(&id) = self.index.get(t) {
            return id;
        }
        let (f, args) = match t {
            Term::App(f, args) => (f.clone(), args),
            Term::Var(_) => unreachable!("ground terms only"),
        };
        let children = args.iter().map(|a| self.intern(a)).collect();
        let id = self.nodes.len();
        self.nodes.push((f, children));
        self.index.insert(t.clone(), id);
        id
    }
}

#[derive(Clone)]
struct Congruence {
    parent: Vec<usize>,
}

impl Congruence {
    fn new(graph: &TermGraph, eqs: &[(usize, usize)]) -> Self {
        let mut cc = Congruence { parent: (0..graph.nodes.len()).collect() };
        for &(a, b) in eqs {
            cc.union(a, b);
        }
        cc.close(graph);
        cc
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn close(&mut self, graph: &TermGraph) {
        loop {
            let mut changed = false;
            let mut sigs: HashMap<(&Symbol, Vec<usize>), usize> = HashMap::new();
            for (n, (f, children)) in graph.nodes.iter().enumerate() {
                if children.is_empty() {
                    continue;
                }
                let sig = (f, children.iter().map(|&c| self.find(c)).collect());
                match sigs.get(&sig) {
                    Some(&m) => changed |= self.union(m, n),
                    None => {
                        sigs.insert(sig, n);
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }
}

#[derive(Clone, Copy)]
struct GLit {
    positive: bool,
    a: usize,
    b: usize,
}

enum Value {
    True,
    False,
    Open,
}

struct Search<'g> {
    graph: &'g TermGraph,
    clauses: Vec<Vec<GLit>>,
}

impl Search<'_> {
    fn value(&self, cc: &Congruence, diseqs: &[(usize, usize)], l: GLit) -> Value {
        let (ra, rb) = (cc.find(l.a), cc.find(l.b));
        let equal = ra == rb;
        let disequal = diseqs.iter().any(|&(x, y)| {
            let (rx, ry) = (cc.find(x), cc.find(y));
            (rx == ra && ry == rb) || (rx == rb && ry == ra)
        });
        match (l.positive, equal, disequal) {
            (true, true, _) | (false, _, true) => Value::True,
            (true, _, true) | (false, true, _) => Value::False,
            _ => Value::Open,
        }
    }

    fn solve(&self, eqs: &mut Vec<(usize, usize)>, diseqs: &mut Vec<(usize, usize)>) -> bool {
        let cc = Congruence::new(self.graph, eqs);
        if diseqs.iter().any(|&(a, b)| cc.find(a) == cc.find(b)) {
            return false;
        }
        let mut branch: Option<Vec<GLit>> = None;
        for clause in &self.clauses {
            let mut open = Vec::new();
            let mut satisfied = false;
            for &l in clause {
                match self.value(&cc, diseqs, l) {
                    Value::True => {
                        satisfied = true;
                        break;
                    }
                    Value::Open => open.push(l),
                    Value::False => {}
                }
            }
            if satisfied {
                continue;
            }
            if open.is_empty() {
                return false;
            }
            if branch.as_ref().is_none_or(|b| open.len() < b.len()) {
                branch = Some(open);
            }
        }
        let Some(open) = branch else {
            return true;
        };
        let (eq_mark, diseq_mark) = (eqs.len(), diseqs.len());
        for l in &open {
            if l.positive {
                eqs.push((l.a, l.b));
            } else {
                diseqs.push((l.a, l.b));
            }
            if self.solve(eqs, diseqs) {
                return true;
            }
            eqs.truncate(eq_mark);
            diseqs.truncate(diseq_mark);
            // Later branches may assume this literal false.
            if l.positive {
                diseqs.push((l.a, l.b));
            } else {
                eqs.push((l.a, l.b));
            }
        }
        eqs.truncate(eq_mark);
        diseqs.truncate(diseq_mark);
        false
    }
}

/// Satisfiability of a finite set of ground clauses modulo equality.
pub fn decide_sat(clauses: &[Clause]) -> Result<SatResult, OracleError> {
    let mut graph = TermGraph::default();
    let mut glits = Vec::with_capacity(clauses.len());
    for c in clauses {
        if !c.is_ground() {
            return Err(OracleError::NonGround(c.to_string()));
        }
        let lits = c
            .literals()
            .iter()
            .map(|l| GLit { positive: l.is_positive(), a: graph.intern(l.lhs()), b: graph.intern(l.rhs()) })
            .collect();
        glits.push(lits);
    }
    let search = Search { graph: &graph, clauses: glits };
    Ok(if search.solve(&mut Vec::new(), &mut Vec::new()) { SatResult::Sat } else { SatResult::Unsat })
}

pub fn is_satisfiable(clauses: &[Clause]) -> Result<bool, OracleError> {
    decide_sat(clauses).map(|r| r == SatResult::Sat)
}

/// `S ⊨ C`, decided as unsatisfiability of `S ∪ ¬C`.
pub fn entails(s: &[Clause], c: &Clause) -> Result<bool, OracleError> {
    let negated = c.negate_ground().map_err(|_| OracleError::NonGround(c.to_string()))?;
    let mut all = s.to_vec();
    all.extend(negated);
    Ok(decide_sat(&all)? == SatResult::Unsat)
}

/// The literals `a ⋈ b` with `a <_A b`, positive before negative.
pub fn canonical_a_literals(abducibles: &Abducibles) -> Vec<Literal> {
    let atoms: Vec<Term> = abducibles.iter().map(|a| Term::app(a.clone(), Vec::new())).collect();
    let mut out = Vec::new();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            out.push(Literal::pos(atoms[i].clone(), atoms[j].clone()));
            out.push(Literal::neg(atoms[i].clone(), atoms[j].clone()));
        }
    }
    out
}

/// Every canonical non-tautological A-clause of at most `max_len` literals.
pub fn canonical_a_clauses(abducibles: &Abducibles, max_len: usize) -> Vec<Clause> {
    let lits = canonical_a_literals(abducibles);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    for len in 1..=max_len {
        pick(&lits, 0, len, &mut chosen, &mut out);
    }
    out
}

fn pick(lits: &[Literal], from: usize, len: usize, chosen: &mut Vec<Literal>, out: &mut Vec<Clause>) {
    if chosen.len() == len {
        out.push(Clause::new(chosen.clone()));
        return;
    }
    for i in from..lits.len() {
        let l = &lits[i];
        if chosen.iter().any(|m| *m == l.complement()) {
            continue;
        }
        chosen.push(l.clone());
        pick(lits, i + 1, len, chosen, out);
        chosen.pop();
    }
}

/// All canonical A-clauses of length at most `max_len` entailed by `s`.
pub fn enumerate_a_implicates(
    s: &[Clause],
    abducibles: &Abducibles,
    max_len: usize,
) -> Result<Vec<Clause>, OracleError> {
    if decide_sat(s)? == SatResult::Unsat {
        return Err(OracleError::InputUnsatisfiable);
    }
    let mut out = Vec::new();
    for c in canonical_a_clauses(abducibles, max_len) {
        if entails(s, &c)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Drops every clause entailed by another kept one. Among equivalent clauses
/// the first is kept.
pub fn prime_subset(implicates: &[Clause]) -> Result<Vec<Clause>, OracleError> {
    let mut kept: Vec<Clause> = implicates.to_vec();
    let mut i = kept.len();
    while i > 0 {
        i -= 1;
        let c = kept[i].clone();
        let mut redundant = false;
        for (j, d) in kept.iter().enumerate() {
            if j != i && entails(std::slice::from_ref(d), &c)? {
                redundant = true;
                break;
            }
        }
        if redundant {
            kept.remove(i);
        }
    }
    Ok(kept)
}
