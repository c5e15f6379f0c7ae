//! Clause sets of the given-clause loop.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::term::Clause;

pub type ClauseId = usize;

/// Unprocessed clauses, selectable by weight (ties by age) or by age.
#[derive(Default)]
pub struct Passive {
    by_weight: BTreeSet<(usize, ClauseId)>,
    by_age: BTreeSet<ClauseId>,
    clauses: HashMap<ClauseId, Clause>,
}

impl Passive {
    pub fn push(&mut self, id: ClauseId, c: Clause) {
        self.by_weight.insert((c.weight(), id));
        self.by_age.insert(id);
        self.clauses.insert(id, c);
    }

    pub fn pop_lightest(&mut self) -> Option<(ClauseId, Clause)> {
        let (_, id) = self.by_weight.pop_first()?;
        self.by_age.remove(&id);
        self.clauses.remove(&id).map(|c| (id, c))
    }

    pub fn pop_oldest(&mut self) -> Option<(ClauseId, Clause)> {
        let id = self.by_age.pop_first()?;
        let c = self.clauses.remove(&id)?;
        self.by_weight.remove(&(c.weight(), id));
        Some((id, c))
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClauseId, &Clause)> {
        self.by_age.iter().map(move |id| (*id, &self.clauses[id]))
    }
}

/// Processed clauses, indexed by id in insertion order, plus the rewrite
/// units among them.
#[derive(Default)]
pub struct Active {
    clauses: Vec<(ClauseId, Clause)>,
}

impl Active {
    pub fn insert(&mut self, id: ClauseId, c: Clause) {
        self.clauses.push((id, c));
    }

    pub fn retain(&mut self, mut keep: impl FnMut(ClauseId, &Clause) -> bool) -> Vec<(ClauseId, Clause)> {
        let mut removed = Vec::new();
        let mut kept = Vec::with_capacity(self.clauses.len());
        for (id, c) in self.clauses.drain(..) {
            if keep(id, &c) {
                kept.push((id, c));
            } else {
                removed.push((id, c));
            }
        }
        self.clauses = kept;
        removed
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClauseId, &Clause)> {
        self.clauses.iter().map(|(id, c)| (*id, c))
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

/// Variable-normalized clauses seen so far, so that no clause is queued twice.
#[derive(Default)]
pub struct Seen(HashSet<Clause>);

impl Seen {
    /// True when `c` is new.
    pub fn insert(&mut self, c: &Clause) -> bool {
        self.0.insert(c.normalize_vars())
    }

    pub fn forget(&mut self, c: &Clause) {
        self.0.remove(&c.normalize_vars());
    }
}
