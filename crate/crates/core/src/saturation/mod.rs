//! Given-clause saturation with the abstracted superposition calculus.

pub mod redundancy;
pub mod rules;
pub mod state;

use std::time::{Duration, Instant};

use crate::abstraction::{a_reduce, collapse_constraints, eliminate_isolated_constraints, merge_constraint_variables};
use crate::ordering::OrderingContext;
use crate::term::{Abducibles, Clause, Substitution};

use redundancy::{demodulate, subsumes_in, RewriteRule};
pub use rules::{Calculus, Conclusion, Inferences, Rule};
use state::{Active, ClauseId, Passive, Seen};

#[derive(Clone, Debug)]
pub struct SaturationConfig {
    pub calculus: Calculus,
    pub max_clauses: usize,
    pub max_iterations: usize,
    /// Heavier generated clauses are dropped, which forfeits saturation.
    pub max_weight: Option<usize>,
    /// Given-clause picks by weight per pick by age.
    pub weight_picks: usize,
    pub age_picks: usize,
    pub demodulation: bool,
    pub record_log: bool,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            calculus: Calculus::Abstracted,
            max_clauses: 50_000,
            max_iterations: 200_000,
            max_weight: None,
            weight_picks: 4,
            age_picks: 1,
            demodulation: true,
            record_log: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationStatus {
    Saturated,
    Unsatisfiable,
    LimitReached,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Clauses,
    Iterations,
    Weight,
}

/// One generating inference. `premises` are the clauses exactly as unified,
/// so `conclusion` follows from them and `mgu` alone.
#[derive(Clone, Debug)]
pub struct InferenceRecord {
    pub rule: Rule,
    pub premises: Vec<Clause>,
    pub mgu: Substitution,
    pub conclusion: Clause,
}

#[derive(Clone, Debug, Default)]
pub struct SaturationStats {
    pub iterations: usize,
    pub generated: usize,
    pub kept: usize,
    pub discarded: usize,
    pub backward_removed: usize,
    pub elapsed: Duration,
}

/// Violations of the structural invariants of the abstracted calculus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantCounters {
    /// Activated clauses that are not abstracted.
    pub not_abstracted: usize,
    /// Activated clauses with an unconstrained abducible variable.
    pub not_stable: usize,
    /// Binary inferences between an A-clause and a non-A-clause.
    pub mixed_inferences: usize,
}

impl InvariantCounters {
    pub fn total(&self) -> usize {
        self.not_abstracted + self.not_stable + self.mixed_inferences
    }
}

#[derive(Clone, Debug)]
pub struct SaturationOutcome {
    pub status: SaturationStatus,
    pub limit: Option<Limit>,
    /// Active and passive clauses at the end of the run.
    pub clauses: Vec<Clause>,
    pub t_infinity: Vec<Clause>,
    pub variable_eligible_seen: bool,
    pub log: Vec<InferenceRecord>,
    pub stats: SaturationStats,
    pub invariants: InvariantCounters,
}

/// The A-clauses of `clauses`, sorted and without repetitions.
pub fn extract_t_infinity(clauses: &[Clause], abducibles: &Abducibles) -> Vec<Clause> {
    let mut out: Vec<Clause> = clauses.iter().filter(|c| c.is_a_clause(abducibles)).cloned().collect();
    out.sort();
    out.dedup();
    out
}

pub fn saturate(input: &[Clause], ordering: &OrderingContext, config: &SaturationConfig) -> SaturationOutcome {
    saturate_with(input, ordering, config, &mut |_| {})
}

/// As [`saturate`], calling `on_a_clause` on every A-clause as it becomes
/// active.
pub fn saturate_with(
    input: &[Clause],
    ordering: &OrderingContext,
    config: &SaturationConfig,
    on_a_clause: &mut dyn FnMut(&Clause),
) -> SaturationOutcome {
    Prover::new(ordering, config).run(input, on_a_clause)
}

struct Prover<'a> {
    ordering: &'a OrderingContext,
    config: &'a SaturationConfig,
    active: Active,
    passive: Passive,
    seen: Seen,
    rules: Vec<RewriteRule>,
    next_id: ClauseId,
    log: Vec<InferenceRecord>,
    stats: SaturationStats,
    invariants: InvariantCounters,
    variable_eligible_seen: bool,
    weight_dropped: bool,
}

impl<'a> Prover<'a> {
    fn new(ordering: &'a OrderingContext, config: &'a SaturationConfig) -> Self {
        Prover {
            ordering,
            config,
            active: Active::default(),
            passive: Passive::default(),
            seen: Seen::default(),
            rules: Vec::new(),
            next_id: 0,
            log: Vec::new(),
            stats: SaturationStats::default(),
            invariants: InvariantCounters::default(),
            variable_eligible_seen: false,
            weight_dropped: false,
        }
    }

    fn abducibles(&self) -> &Abducibles {
        self.ordering.abducibles()
    }

    fn abstracted(&self) -> bool {
        self.config.calculus == Calculus::Abstracted
    }

    /// Duplicate merging, merging of equally constrained variables, one
    /// constraint per variable, elimination of isolated constraints,
    /// A-reduction and deletion of `t ≄ t` until nothing shrinks, then
    /// variable normalization and tautology deletion.
    fn simplify(&self, c: &Clause) -> Option<Clause> {
        let mut c = c.merge_duplicates();
        loop {
            let before = c.len();
            if self.abstracted() {
                if let Some(r) = merge_constraint_variables(&c, self.abducibles()) {
                    c = r;
                }
                if let Some(r) = collapse_constraints(&c, self.abducibles()) {
                    c = r.merge_duplicates();
                }
                if let Some(r) = eliminate_isolated_constraints(&c, self.abducibles()) {
                    c = r.merge_duplicates();
                }
                if let Some(r) = a_reduce(&c, self.abducibles()) {
                    c = r.merge_duplicates();
                }
            }
            if c.literals().iter().any(|l| l.is_negative() && l.lhs() == l.rhs()) {
                c = Clause::new(c.literals().iter().filter(|l| !(l.is_negative() && l.lhs() == l.rhs())).cloned().collect());
            }
            if c.len() == before {
                break;
            }
        }
        let c = c.normalize_vars();
        (!c.is_tautology()).then_some(c)
    }

    fn subsumed(&self, c: &Clause) -> bool {
        self.active
            .iter()
            .any(|(_, d)| d.len() <= c.len() && subsumes_in(d, c, self.config.calculus, self.abducibles()))
    }

    fn is_redundant(&self, c: &Clause) -> bool {
        if c.is_tautology() || self.subsumed(c) {
            return true;
        }
        if self.config.demodulation {
            if let Some(d) = demodulate(c, &self.rules, self.ordering) {
                return d.is_tautology() || self.subsumed(&d);
            }
        }
        false
    }

    fn enqueue(&mut self, c: Clause) {
        if self.seen.insert(&c) {
            let id = self.next_id;
            self.next_id += 1;
            self.passive.push(id, c);
        }
    }

    fn finish(mut self, status: SaturationStatus, limit: Option<Limit>, start: Instant, empty: bool) -> SaturationOutcome {
        let mut clauses: Vec<Clause> = self.active.iter().map(|(_, c)| c.clone()).collect();
        clauses.extend(self.passive.iter().map(|(_, c)| c.clone()));
        if empty {
            clauses.push(Clause::empty());
        }
        self.stats.kept = self.active.len() + self.passive.len();
        self.stats.elapsed = start.elapsed();
        let t_infinity = extract_t_infinity(&clauses, self.abducibles());
        SaturationOutcome {
            status,
            limit,
            clauses,
            t_infinity,
            variable_eligible_seen: self.variable_eligible_seen,
            log: self.log,
            stats: self.stats,
            invariants: self.invariants,
        }
    }

    fn run(mut self, input: &[Clause], on_a_clause: &mut dyn FnMut(&Clause)) -> SaturationOutcome {
        let start = Instant::now();
        for c in input {
            let Some(c) = self.simplify(c) else { continue };
            if c.is_empty() {
                return self.finish(SaturationStatus::Unsatisfiable, None, start, true);
            }
            self.enqueue(c);
        }
        let period = (self.config.weight_picks + self.config.age_picks).max(1);
        loop {
            if self.passive.is_empty() {
                let status = if self.weight_dropped { SaturationStatus::LimitReached } else { SaturationStatus::Saturated };
                let limit = self.weight_dropped.then_some(Limit::Weight);
                return self.finish(status, limit, start, false);
            }
            if self.stats.iterations >= self.config.max_iterations {
                return self.finish(SaturationStatus::LimitReached, Some(Limit::Iterations), start, false);
            }
            if self.active.len() + self.passive.len() > self.config.max_clauses {
                return self.finish(SaturationStatus::LimitReached, Some(Limit::Clauses), start, false);
            }
            let by_weight = self.stats.iterations % period < self.config.weight_picks;
            self.stats.iterations += 1;
            let picked = if by_weight { self.passive.pop_lightest() } else { self.passive.pop_oldest() };
            let Some((id, given)) = picked else { continue };
            if self.is_redundant(&given) {
                self.stats.discarded += 1;
                continue;
            }
            if self.activate(id, given.clone(), on_a_clause) {
                return self.finish(SaturationStatus::Unsatisfiable, None, start, true);
            }
        }
    }

    /// Moves `given` to the active set and queues its consequences. Returns
    /// true once the empty clause is derived.
    fn activate(&mut self, id: ClauseId, given: Clause, on_a_clause: &mut dyn FnMut(&Clause)) -> bool {
        let abducibles = self.abducibles().clone();
        if self.abstracted() {
            if !given.is_abstracted(&abducibles) {
                self.invariants.not_abstracted += 1;
            }
            if !given.is_va_stable(&abducibles) {
                self.invariants.not_stable += 1;
            }
        }
        if self.ordering.is_variable_eligible(&given) {
            self.variable_eligible_seen = true;
        }
        let calculus = self.config.calculus;
        let removed = self.active.retain(|_, d| {
            !(given.len() <= d.len()
                && subsumes_in(&given, d, calculus, &abducibles)
                && !crate::subsumption::is_variant(&given, d))
        });
        self.stats.backward_removed += removed.len();
        self.active.insert(id, given.clone());
        if self.config.demodulation {
            self.rules.extend(RewriteRule::from_clause(&given, self.ordering));
        }
        if given.is_a_clause(&abducibles) {
            on_a_clause(&given);
        }

        let inf = Inferences { ordering: self.ordering, calculus };
        let given_a = given.is_a_clause(&abducibles);
        let mut produced: Vec<(Conclusion, Vec<Clause>)> = Vec::new();
        let offset = given.max_var_id().map_or(0, |m| m + 1);
        let given_max = self.ordering.maximal_literals(&given);
        for (other_id, other) in self.active.iter() {
            let renamed = other.shift_vars(offset);
            let other_max = if other_id == id { given_max.clone() } else { self.ordering.maximal_literals(&renamed) };
            let mut out: Vec<(Conclusion, Vec<Clause>)> = inf
                .rewrite_maximal(&given, &given_max, &renamed, &other_max)
                .into_iter()
                .map(|k| (k, vec![given.clone(), renamed.clone()]))
                .collect();
            if other_id != id {
                out.extend(
                    inf.rewrite_maximal(&renamed, &other_max, &given, &given_max)
                        .into_iter()
                        .map(|k| (k, vec![renamed.clone(), given.clone()])),
                );
            }
            if calculus == Calculus::Abstracted && given_a != other.is_a_clause(&abducibles) {
                self.invariants.mixed_inferences += out.len();
            }
            produced.extend(out);
        }
        produced.extend(inf.reflection(&given).into_iter().map(|k| (k, vec![given.clone()])));
        produced.extend(inf.equality_factoring(&given).into_iter().map(|k| (k, vec![given.clone()])));

        for (k, premises) in produced {
            self.stats.generated += 1;
            let simplified = self.simplify(&k.clause);
            if self.config.record_log {
                self.log.push(InferenceRecord { rule: k.rule, premises, mgu: k.mgu, conclusion: k.clause });
            }
            let Some(c) = simplified else {
                self.stats.discarded += 1;
                continue;
            };
            if c.is_empty() {
                return true;
            }
            if self.config.max_weight.is_some_and(|w| c.weight() > w) {
                self.weight_dropped = true;
                continue;
            }
            if self.is_redundant(&c) {
                self.stats.discarded += 1;
                continue;
            }
            self.enqueue(c);
        }
        false
    }
}
