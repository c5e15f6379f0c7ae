//! The explanation pipeline: abstraction, saturation, ground resolution over
//! the A-clauses plus the equality axioms on abducibles, and minimization of
//! the resulting implicates.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::abstraction::{abstract_clause, flatten_named_terms, AbstractionError};
use crate::oracle::{entails, OracleError};
use crate::ordering::OrderingContext;
use crate::problem::ProblemFile;
use crate::saturation::{saturate_with, Limit, SaturationConfig, SaturationOutcome, SaturationStatus};
use crate::term::{Abducibles, Clause, Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbductionError {
    #[error("no abducible constants declared")]
    EmptyAbducibleSet,
    #[error("entailment minimization needs a terminated saturation and resolution closure")]
    EntailmentModeUnavailable,
    #[error(transparent)]
    Abstraction(#[from] AbstractionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Reflexivity, symmetry and transitivity instantiated over `A`, in that
/// order: `|A| + |A|² + |A|³` ground clauses.
pub fn eq_axioms(abducibles: &Abducibles) -> Vec<Clause> {
    let atoms: Vec<Term> = abducibles.iter().map(|a| Term::app(a.clone(), Vec::new())).collect();
    let mut out = Vec::new();
    for x in &atoms {
        out.push(Clause::unit(Literal::pos(x.clone(), x.clone())));
    }
    for x in &atoms {
        for y in &atoms {
            out.push(Clause::new(vec![Literal::neg(x.clone(), y.clone()), Literal::pos(y.clone(), x.clone())]));
        }
    }
    for x in &atoms {
        for y in &atoms {
            for z in &atoms {
                out.push(Clause::new(vec![
                    Literal::neg(x.clone(), y.clone()),
                    Literal::neg(y.clone(), z.clone()),
                    Literal::pos(x.clone(), z.clone()),
                ]));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ClosureOutcome {
    pub clauses: Vec<Clause>,
    pub saturated: bool,
}

/// Closure of ground clauses under binary resolution and merging of
/// duplicate literals. Derived tautologies and subsumed clauses are
/// deleted; input clauses are kept even when tautological, since the
/// reflexivity units are what resolve `a ≄ a` away.
pub fn resolution_closure(input: &[Clause], max_clauses: usize) -> ClosureOutcome {
    let mut atoms: HashMap<Literal, usize> = HashMap::new();
    let mut table: Vec<Literal> = Vec::new();
    let mut encode = |l: &Literal| -> usize {
        let key = if l.is_positive() { l.clone() } else { l.complement() };
        let id = *atoms.entry(key.clone()).or_insert_with(|| {
            table.push(key);
            table.len() - 1
        });
        2 * id + usize::from(l.is_negative())
    };
    let mut seeds: Vec<(Vec<usize>, bool)> = Vec::new();
    for c in input {
        let mut lits: Vec<usize> = c.literals().iter().map(&mut encode).collect();
        lits.sort_unstable();
        lits.dedup();
        seeds.push((lits, true));
    }
    let tautology = |lits: &[usize], table: &[Literal]| {
        lits.iter().any(|&l| l % 2 == 0 && table[l / 2].lhs() == table[l / 2].rhs())
            || lits.windows(2).any(|w| w[0] / 2 == w[1] / 2)
    };
    let subset = |a: &[usize], b: &[usize]| {
        let mut j = 0;
        for &x in a {
            while j < b.len() && b[j] < x {
                j += 1;
            }
            if j == b.len() || b[j] != x {
                return false;
            }
            j += 1;
        }
        true
    };

    let mut active: Vec<Vec<usize>> = Vec::new();
    let mut passive: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut store: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for (lits, _) in seeds {
        if seen.insert(lits.clone()) {
            passive.insert((lits.len(), store.len()));
            store.push(lits);
        }
    }
    let mut saturated = true;
    while let Some((_, id)) = passive.pop_first() {
        if active.len() + passive.len() > max_clauses {
            saturated = false;
            break;
        }
        let given = store[id].clone();
        if active.iter().any(|a| subset(a, &given)) {
            continue;
        }
        active.retain(|a| !subset(&given, a));
        for other in active.iter().chain(std::iter::once(&given)) {
            for &l in &given {
                let comp = l ^ 1;
                if other.binary_search(&comp).is_err() {
                    continue;
                }
                let mut resolvent: Vec<usize> =
                    given.iter().copied().filter(|&x| x != l).chain(other.iter().copied().filter(|&x| x != comp)).collect();
                resolvent.sort_unstable();
                resolvent.dedup();
                if tautology(&resolvent, &table) || !seen.insert(resolvent.clone()) {
                    continue;
                }
                if active.iter().any(|a| subset(a, &resolvent)) || subset(&given, &resolvent) {
                    continue;
                }
                passive.insert((resolvent.len(), store.len()));
                store.push(resolvent);
            }
        }
        active.push(given);
    }
    let decode = |lits: &[usize]| {
        Clause::new(
            lits.iter()
                .map(|&l| if l % 2 == 0 { table[l / 2].clone() } else { table[l / 2].complement() })
                .collect(),
        )
    };
    let mut clauses: Vec<Clause> = active.iter().map(|c| decode(c)).collect();
    if !saturated {
        clauses.extend(passive.iter().map(|&(_, id)| decode(&store[id])));
    }
    clauses.sort();
    ClosureOutcome { clauses, saturated }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimizeMode {
    Subsumption,
    Entailment,
    /// Entailment when both stages terminated, otherwise subsumption.
    Auto,
}

/// True in every model: some positive literal's sides are equated by the
/// negative literals.
pub fn is_valid_ground(c: &Clause) -> bool {
    let mut parent: HashMap<&Term, &Term> = HashMap::new();
    fn find<'t>(parent: &HashMap<&'t Term, &'t Term>, mut t: &'t Term) -> &'t Term {
        while let Some(&p) = parent.get(t) {
            if p == t {
                break;
            }
            t = p;
        }
        t
    }
    for l in c.literals().iter().filter(|l| l.is_negative()) {
        let (a, b) = (find(&parent, l.lhs()), find(&parent, l.rhs()));
        if a != b {
            parent.insert(a, b);
        }
    }
    c.literals().iter().filter(|l| l.is_positive()).any(|l| find(&parent, l.lhs()) == find(&parent, l.rhs()))
}

/// Canonical sort key of a ground A-literal: ranks of its sides, smaller
/// first, then positive before negative.
fn literal_key(l: &Literal, abducibles: &Abducibles) -> (usize, usize, bool) {
    let rank = |t: &Term| t.symbol().and_then(|s| abducibles.rank(s)).unwrap_or(usize::MAX);
    let (x, y) = (rank(l.lhs()), rank(l.rhs()));
    (x.min(y), x.max(y), l.is_negative())
}

pub fn canonical_literals(c: &Clause, abducibles: &Abducibles) -> Vec<Literal> {
    let mut lits = c.literals().to_vec();
    lits.sort_by_key(|l| literal_key(l, abducibles));
    lits
}

/// Sorts implicates by length, then literal by literal.
pub fn sort_canonical(clauses: &mut [Clause], abducibles: &Abducibles) {
    clauses.sort_by_cached_key(|c| {
        let keys: Vec<_> = canonical_literals(c, abducibles).iter().map(|l| literal_key(l, abducibles)).collect();
        (c.len(), keys)
    });
}

/// `a = b` with the `<_A`-smaller abducible on the left.
pub fn display_a_literal(l: &Literal, abducibles: &Abducibles) -> String {
    let rank = |t: &Term| t.symbol().and_then(|s| abducibles.rank(s)).unwrap_or(usize::MAX);
    let (a, b) = if rank(l.lhs()) <= rank(l.rhs()) { (l.lhs(), l.rhs()) } else { (l.rhs(), l.lhs()) };
    format!("{a} {} {b}", if l.is_positive() { "=" } else { "!=" })
}

pub fn display_a_clause(c: &Clause, abducibles: &Abducibles) -> String {
    if c.is_empty() {
        return "[]".to_string();
    }
    canonical_literals(c, abducibles).iter().map(|l| display_a_literal(l, abducibles)).collect::<Vec<_>>().join(" | ")
}

/// Removes valid clauses, then clauses strictly subsumed by (or, in
/// entailment mode, entailed by) the other kept clauses.
pub fn minimize_prime(
    clauses: &[Clause],
    mode: MinimizeMode,
    fixpoint: bool,
    abducibles: &Abducibles,
) -> Result<Vec<Clause>, AbductionError> {
    let entailment = match mode {
        MinimizeMode::Subsumption => false,
        MinimizeMode::Entailment if !fixpoint => return Err(AbductionError::EntailmentModeUnavailable),
        MinimizeMode::Entailment => true,
        MinimizeMode::Auto => fixpoint,
    };
    let mut kept: Vec<Clause> = clauses.iter().map(|c| c.merge_duplicates()).filter(|c| !is_valid_ground(c)).collect();
    kept.sort();
    kept.dedup();
    let subset = |a: &Clause, b: &Clause| a.literals().iter().all(|l| b.literals().contains(l));
    let snapshot = kept.clone();
    kept.retain(|c| !snapshot.iter().any(|d| d.len() < c.len() && subset(d, c)));
    sort_canonical(&mut kept, abducibles);
    if entailment {
        let mut i = kept.len();
        while i > 0 {
            i -= 1;
            let rest: Vec<Clause> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, d)| d.clone()).collect();
            if entails(&rest, &kept[i])? {
                kept.remove(i);
            }
        }
    }
    Ok(kept)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Unknown,
}

/// Whether the hypothesis `¬C` is satisfiable together with the axioms.
pub fn consistency_filter(
    axioms: &[Clause],
    implicate: &Clause,
    abducibles: &Abducibles,
    config: &SaturationConfig,
) -> Consistency {
    let Ok(negated) = implicate.negate_ground() else { return Consistency::Unknown };
    let input: Vec<Clause> = axioms.iter().chain(negated.iter()).map(|c| abstract_clause(c, abducibles)).collect();
    let config = SaturationConfig { record_log: false, ..config.clone() };
    let out = saturate_with(&input, &OrderingContext::new(abducibles.clone()), &config, &mut |_| {});
    match out.status {
        SaturationStatus::Saturated => Consistency::Consistent,
        SaturationStatus::Unsatisfiable => Consistency::Inconsistent,
        SaturationStatus::LimitReached => Consistency::Unknown,
    }
}

#[derive(Clone, Debug)]
pub struct ExplainConfig {
    pub saturation: SaturationConfig,
    pub minimize: MinimizeMode,
    pub consistency_filter: bool,
    pub closure_limit: usize,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig {
            saturation: SaturationConfig::default(),
            minimize: MinimizeMode::Auto,
            consistency_filter: false,
            closure_limit: 200_000,
        }
    }
}

/// Axioms and negated goal, with the abducibles and ground terms to name.
#[derive(Clone, Debug, Default)]
pub struct ExplainInput {
    pub axioms: Vec<Clause>,
    pub goals: Vec<Clause>,
    pub abducibles: Abducibles,
    pub flatten: Vec<Term>,
}

impl ExplainInput {
    pub fn from_problem(p: &ProblemFile) -> Self {
        ExplainInput { axioms: p.axioms(), goals: p.goals(), abducibles: p.abducibles(), flatten: p.flatten_targets() }
    }

    pub fn new(clauses: Vec<Clause>, abducibles: Abducibles) -> Self {
        ExplainInput { axioms: Vec::new(), goals: clauses, abducibles, flatten: Vec::new() }
    }

    /// Applies flattening: each target is named by a fresh constant, which
    /// becomes abducible; defining equations join the axioms.
    pub fn prepared(&self) -> Result<ExplainInput, AbductionError> {
        if self.flatten.is_empty() {
            return Ok(self.clone());
        }
        let mut used: HashSet<String> = HashSet::new();
        for c in self.axioms.iter().chain(&self.goals) {
            for l in c.literals() {
                collect_names(l.lhs(), &mut used);
                collect_names(l.rhs(), &mut used);
            }
        }
        for a in self.abducibles.iter() {
            used.insert(a.name().to_string());
        }
        for t in &self.flatten {
            collect_names(t, &mut used);
        }
        let n_axioms = self.axioms.len();
        let all: Vec<Clause> = self.axioms.iter().chain(&self.goals).cloned().collect();
        let f = flatten_named_terms(&all, &self.flatten, &used)?;
        let mut axioms = f.clauses[..n_axioms].to_vec();
        axioms.extend(f.definitions);
        let goals = f.clauses[n_axioms..].to_vec();
        let mut names: Vec<String> = self.abducibles.iter().map(|s| s.name().to_string()).collect();
        for n in &f.names {
            let name = n.symbol().expect("names are constants").name().to_string();
            if !names.contains(&name) {
                names.push(name);
            }
        }
        Ok(ExplainInput { axioms, goals, abducibles: Abducibles::new(names.iter().map(String::as_str)), flatten: Vec::new() })
    }

    pub fn clauses(&self) -> Vec<Clause> {
        self.axioms.iter().chain(&self.goals).cloned().collect()
    }
}

fn collect_names(t: &Term, out: &mut HashSet<String>) {
    if let Term::App(f, args) = t {
        out.insert(f.name().to_string());
        for a in args.iter() {
            collect_names(a, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    VariableEligible,
    SaturationLimit(Limit),
    ClosureLimit,
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::VariableEligible => "variable_eligible",
            Warning::SaturationLimit(_) => "saturation_limit",
            Warning::ClosureLimit => "closure_limit",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Warning::VariableEligible => "a variable-eligible clause was generated; completeness is not guaranteed".into(),
            Warning::SaturationLimit(l) => format!("saturation stopped at the {} limit; output may be incomplete", limit_name(*l)),
            Warning::ClosureLimit => "resolution closure stopped at its clause limit; output may be incomplete".into(),
        }
    }
}

fn limit_name(l: Limit) -> &'static str {
    match l {
        Limit::Clauses => "clause",
        Limit::Iterations => "iteration",
        Limit::Weight => "weight",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportStatus {
    /// Implicates computed; complete when no warning was raised.
    Explained,
    /// The input itself is unsatisfiable: every clause is an implicate.
    InputUnsatisfiable,
}

#[derive(Clone, Debug)]
pub struct Implicate {
    pub clause: Clause,
    pub consistency: Option<Consistency>,
}

#[derive(Clone, Debug, Default)]
pub struct ReportStats {
    pub generated: usize,
    pub kept: usize,
    pub closure_size: usize,
    pub saturation_time: Duration,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct ImplicateReport {
    pub status: ReportStatus,
    pub abducibles: Abducibles,
    pub t_infinity: Vec<Clause>,
    pub implicates: Vec<Implicate>,
    pub minimization: MinimizeMode,
    pub complete: bool,
    pub warnings: Vec<Warning>,
    pub stats: ReportStats,
    pub saturation: SaturationOutcome,
}

impl ImplicateReport {
    pub fn clauses(&self) -> Vec<Clause> {
        self.implicates.iter().map(|i| i.clause.clone()).collect()
    }

    /// For each implicate `C`, the hypothesis `¬C` as a list of literals.
    pub fn explanations(&self) -> Vec<Vec<Literal>> {
        self.implicates
            .iter()
            .map(|i| i.clause.literals().iter().map(Literal::complement).collect())
            .collect()
    }

    pub fn display_explanation(&self, hypothesis: &[Literal]) -> String {
        let mut lits = hypothesis.to_vec();
        lits.sort_by_key(|l| literal_key(l, &self.abducibles));
        lits.iter().map(|l| display_a_literal(l, &self.abducibles)).collect::<Vec<_>>().join(" & ")
    }

    /// The disjunction of all hypotheses, each of which suffices on its own.
    pub fn display_disjunction(&self) -> String {
        self.explanations()
            .iter()
            .map(|h| {
                let s = self.display_explanation(h);
                if h.len() > 1 {
                    format!("({s})")
                } else {
                    s
                }
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

pub fn explain(input: &ExplainInput, config: &ExplainConfig) -> Result<ImplicateReport, AbductionError> {
    explain_with(input, config, &mut |_| {})
}

/// As [`explain`], passing each A-clause to `on_a_clause` as saturation
/// activates it.
pub fn explain_with(
    input: &ExplainInput,
    config: &ExplainConfig,
    on_a_clause: &mut dyn FnMut(&Clause),
) -> Result<ImplicateReport, AbductionError> {
    let start = Instant::now();
    let input = input.prepared()?;
    let abducibles = input.abducibles.clone();
    if abducibles.is_empty() {
        return Err(AbductionError::EmptyAbducibleSet);
    }
    let ordering = OrderingContext::new(abducibles.clone());
    let abstracted: Vec<Clause> = input.clauses().iter().map(|c| abstract_clause(c, &abducibles)).collect();
    let sat = saturate_with(&abstracted, &ordering, &config.saturation, on_a_clause);

    let mut warnings = Vec::new();
    if sat.variable_eligible_seen {
        warnings.push(Warning::VariableEligible);
    }
    if let Some(limit) = sat.limit {
        warnings.push(Warning::SaturationLimit(limit));
    }
    let mut stats = ReportStats {
        generated: sat.stats.generated,
        kept: sat.stats.kept,
        saturation_time: sat.stats.elapsed,
        ..ReportStats::default()
    };

    if sat.status == SaturationStatus::Unsatisfiable {
        stats.elapsed = start.elapsed();
        return Ok(ImplicateReport {
            status: ReportStatus::InputUnsatisfiable,
            abducibles,
            t_infinity: sat.t_infinity.clone(),
            implicates: vec![Implicate { clause: Clause::empty(), consistency: None }],
            minimization: config.minimize,
            complete: true,
            warnings,
            stats,
            saturation: sat,
        });
    }

    let mut seed = sat.t_infinity.clone();
    seed.extend(eq_axioms(&abducibles));
    let closure = resolution_closure(&seed, config.closure_limit);
    stats.closure_size = closure.clauses.len();
    if !closure.saturated {
        warnings.push(Warning::ClosureLimit);
    }
    let fixpoint = sat.status == SaturationStatus::Saturated && closure.saturated;
    let minimal = minimize_prime(&closure.clauses, config.minimize, fixpoint, &abducibles)?;
    let minimization = match config.minimize {
        MinimizeMode::Auto if fixpoint => MinimizeMode::Entailment,
        MinimizeMode::Auto => MinimizeMode::Subsumption,
        m => m,
    };
    let implicates = minimal
        .into_iter()
        .map(|clause| {
            let consistency = config
                .consistency_filter
                .then(|| consistency_filter(&input.axioms, &clause, &abducibles, &config.saturation));
            Implicate { clause, consistency }
        })
        .collect();
    stats.elapsed = start.elapsed();
    Ok(ImplicateReport {
        status: ReportStatus::Explained,
        abducibles,
        t_infinity: sat.t_infinity.clone(),
        implicates,
        minimization,
        complete: warnings.is_empty(),
        warnings,
        stats,
        saturation: sat,
    })
}
