//! Terms, literals and clauses over two classes of variables.
//!
//! Clauses are multisets of literals: they are compared modulo the order of
//! their literals but duplicates are kept until [`Clause::merge_duplicates`]
//! is called explicitly. Equality literals are unordered; every [`Literal`]
//! stores its two sides in a fixed syntactic orientation so that the derived
//! `Eq`/`Hash` implementations agree with unordered equality.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An interned-by-value function or constant name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::new(name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VarClass {
    /// Variables of the input language.
    Ordinary,
    /// Placeholders for abducible constants, introduced by abstraction.
    Abducible,
}

/// A variable. The class is part of the datum and never inferred from a name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    id: u32,
    class: VarClass,
}

impl Var {
    pub fn new(id: u32, class: VarClass) -> Self {
        Var { id, class }
    }

    pub fn ordinary(id: u32) -> Self {
        Var::new(id, VarClass::Ordinary)
    }

    pub fn abducible(id: u32) -> Self {
        Var::new(id, VarClass::Abducible)
    }

    pub fn id(self) -> u32 {
        self.id
    }

    pub fn class(self) -> VarClass {
        self.class
    }

    pub fn is_abducible(self) -> bool {
        self.class == VarClass::Abducible
    }

    pub fn shifted(self, offset: u32) -> Self {
        Var::new(self.id + offset, self.class)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            VarClass::Ordinary => write!(f, "X{}", self.id),
            VarClass::Abducible => write!(f, "?{}", self.id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("clause is not ground: {0}")]
    NonGround(String),
    #[error("symbol `{symbol}` used with arities {first} and {second}")]
    ArityMismatch {
        symbol: String,
        first: usize,
        second: usize,
    },
}

/// The distinguished abducible constants together with their total order.
///
/// The first element is the minimum `a0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Abducibles {
    order: Vec<Symbol>,
    rank: HashMap<Symbol, usize>,
}

impl Abducibles {
    /// Builds the set from a sequence listed in increasing order. Repeated
    /// names keep their first position.
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Symbol>,
    {
        let mut set = Abducibles::default();
        for name in names {
            let sym = name.into();
            if !set.rank.contains_key(&sym) {
                set.rank.insert(sym.clone(), set.order.len());
                set.order.push(sym);
            }
        }
        set
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.rank.contains_key(sym)
    }

    /// True when `t` is an abducible constant.
    pub fn contains_term(&self, t: &Term) -> bool {
        match t {
            Term::App(f, args) => args.is_empty() && self.contains(f),
            Term::Var(_) => false,
        }
    }

    pub fn rank(&self, sym: &Symbol) -> Option<usize> {
        self.rank.get(sym).copied()
    }

    pub fn min(&self) -> Option<&Symbol> {
        self.order.first()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.order.iter()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Function symbols with their arities, collected from use.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Symbol, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn declare(&mut self, sym: &Symbol, arity: usize) -> Result<(), TermError> {
        match self.arities.get(sym) {
            Some(&known) if known != arity => Err(TermError::ArityMismatch {
                symbol: sym.name().to_string(),
                first: known,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(sym.clone(), arity);
                Ok(())
            }
        }
    }

    pub fn add_term(&mut self, t: &Term) -> Result<(), TermError> {
        if let Term::App(f, args) = t {
            self.declare(f, args.len())?;
            for a in args.iter() {
                self.add_term(a)?;
            }
        }
        Ok(())
    }

    pub fn add_clause(&mut self, c: &Clause) -> Result<(), TermError> {
        for lit in c.literals() {
            self.add_term(lit.lhs())?;
            self.add_term(lit.rhs())?;
        }
        Ok(())
    }

    pub fn arity(&self, sym: &Symbol) -> Option<usize> {
        self.arities.get(sym).copied()
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.arities.contains_key(sym)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Symbol> {
        self.arities
            .iter()
            .filter(|(_, &arity)| arity == 0)
            .map(|(sym, _)| sym)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Symbol, usize)> {
        self.arities.iter().map(|(s, &a)| (s, a))
    }
}

/// A path from the root of a term to one of its subterms.
pub type Position = Vec<usize>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Symbol, Arc<[Term]>),
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    pub fn constant(name: &str) -> Self {
        Term::App(Symbol::new(name), Arc::from(Vec::new()))
    }

    pub fn app(sym: Symbol, args: Vec<Term>) -> Self {
        Term::App(sym, Arc::from(args))
    }

    /// Shorthand used heavily in tests: `Term::func("f", vec![..])`.
    pub fn func(name: &str, args: Vec<Term>) -> Self {
        Term::app(Symbol::new(name), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(..) => None,
        }
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Term::App(f, _) => Some(f),
            Term::Var(_) => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            Term::Var(_) => &[],
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::App(_, args) if args.is_empty())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn contains_subterm(&self, t: &Term) -> bool {
        self == t || self.args().iter().any(|a| a.contains_subterm(t))
    }

    pub fn max_var_id(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.id()),
            Term::App(_, args) => args.iter().filter_map(Term::max_var_id).max(),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn weight(&self) -> usize {
        1 + self.args().iter().map(Term::weight).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn subterm_at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.subterm_at(rest),
        }
    }

    /// Replaces the subterm at `pos`. Panics when `pos` is not in `Pos(self)`.
    pub fn replace_at(&self, pos: &[usize], replacement: Term) -> Term {
        match pos.split_first() {
            None => replacement,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut new_args = args.to_vec();
                    new_args[i] = args[i].replace_at(rest, replacement);
                    Term::app(f.clone(), new_args)
                }
                Term::Var(_) => panic!("position {pos:?} below a variable"),
            },
        }
    }

    /// All positions of `self`, in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(&mut Vec::new(), &mut out, false);
        out
    }

    /// Positions of non-variable subterms, in pre-order.
    pub fn non_var_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(&mut Vec::new(), &mut out, true);
        out
    }

    fn walk_positions(&self, prefix: &mut Position, out: &mut Vec<Position>, skip_vars: bool) {
        if skip_vars && self.is_var() {
            return;
        }
        out.push(prefix.clone());
        for (i, a) in self.args().iter().enumerate() {
            prefix.push(i);
            a.walk_positions(prefix, out, skip_vars);
            prefix.pop();
        }
    }

    /// Contains no abducible constant.
    pub fn is_abstracted(&self, abducibles: &Abducibles) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(f, args) => {
                !(args.is_empty() && abducibles.contains(f))
                    && args.iter().all(|a| a.is_abstracted(abducibles))
            }
        }
    }

    /// An abducible variable or an abducible constant.
    pub fn is_abducible_atom(&self, abducibles: &Abducibles) -> bool {
        match self {
            Term::Var(v) => v.is_abducible(),
            t => abducibles.contains_term(t),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(g, args) => {
                if args.is_empty() {
                    return self.clone();
                }
                Term::app(g.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    /// Replaces every constant matching `pred` by `replacement`.
    pub fn map_constants(&self, pred: &impl Fn(&Symbol) -> bool, replacement: &Term) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(f, args) if args.is_empty() => {
                if pred(f) {
                    replacement.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(f, args) => Term::app(
                f.clone(),
                args.iter().map(|a| a.map_constants(pred, replacement)).collect(),
            ),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(g, args) => {
                write!(f, "{g}")?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// An equation or disequation. Sides are stored with the syntactically larger
/// one first, so `t = s` and `s = t` are the same value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    positive: bool,
    lhs: Term,
    rhs: Term,
}

impl Literal {
    pub fn new(positive: bool, a: Term, b: Term) -> Self {
        if a >= b {
            Literal { positive, lhs: a, rhs: b }
        } else {
            Literal { positive, lhs: b, rhs: a }
        }
    }

    pub fn pos(a: Term, b: Term) -> Self {
        Literal::new(true, a, b)
    }

    pub fn neg(a: Term, b: Term) -> Self {
        Literal::new(false, a, b)
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn is_negative(&self) -> bool {
        !self.positive
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// Both readings `(l, r)` of the unordered pair; a single one when the
    /// sides coincide.
    pub fn orientations(&self) -> Vec<(&Term, &Term)> {
        if self.lhs == self.rhs {
            vec![(&self.lhs, &self.rhs)]
        } else {
            vec![(&self.lhs, &self.rhs), (&self.rhs, &self.lhs)]
        }
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.lhs.is_ground() && self.rhs.is_ground()
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }

    pub fn weight(&self) -> usize {
        self.lhs.weight() + self.rhs.weight()
    }

    /// `t ⋈ s` with `t, s ∈ V_A ∪ A`.
    pub fn is_a_literal(&self, abducibles: &Abducibles) -> bool {
        self.lhs.is_abducible_atom(abducibles) && self.rhs.is_abducible_atom(abducibles)
    }

    /// `x ≄ a` with `x` an abducible variable and `a` an abducible constant.
    pub fn is_constraint(&self, abducibles: &Abducibles) -> bool {
        self.constraint_parts(abducibles).is_some()
    }

    pub fn constraint_parts(&self, abducibles: &Abducibles) -> Option<(Var, &Symbol)> {
        if self.positive {
            return None;
        }
        fn pick<'t>(v: &Term, c: &'t Term, abducibles: &Abducibles) -> Option<(Var, &'t Symbol)> {
            match (v, c) {
            (Term::Var(x), Term::App(a, args))
                if x.is_abducible() && args.is_empty() && abducibles.contains(a) =>
            {
                Some((*x, a))
            }
                _ => None,
            }
        }
        pick(&self.lhs, &self.rhs, abducibles).or_else(|| pick(&self.rhs, &self.lhs, abducibles))
    }

    pub fn is_abstracted(&self, abducibles: &Abducibles) -> bool {
        self.lhs.is_abstracted(abducibles) && self.rhs.is_abstracted(abducibles)
    }

    /// Only constants or variables on both sides.
    pub fn is_flat(&self) -> bool {
        let flat = |t: &Term| t.is_var() || t.is_constant();
        flat(&self.lhs) && flat(&self.rhs)
    }

    /// `t ≃ t`.
    pub fn is_trivially_true(&self) -> bool {
        self.positive && self.lhs == self.rhs
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Literal {
        Literal::new(self.positive, f(&self.lhs), f(&self.rhs))
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.positive { "=" } else { "!=" };
        write!(f, "{} {} {}", self.lhs, op, self.rhs)
    }
}

/// The `Δ / Δ̄ / Γ` views of a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClausePartition {
    /// A-literals.
    pub delta: Clause,
    /// Non-A-literals.
    pub delta_bar: Clause,
    /// Constraint literals `x ≄ a`.
    pub gamma: Clause,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ClauseClass {
    pub a_clause: bool,
    pub abstracted: bool,
    pub va_stable: bool,
    pub flat: bool,
    pub ground: bool,
}

/// A finite multiset of literals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    pub fn new(mut lits: Vec<Literal>) -> Self {
        lits.sort();
        Clause { lits }
    }

    pub fn empty() -> Self {
        Clause::default()
    }

    pub fn unit(lit: Literal) -> Self {
        Clause { lits: vec![lit] }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn into_literals(self) -> Vec<Literal> {
        self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lits.len() == 1
    }

    pub fn is_ground(&self) -> bool {
        self.lits.iter().all(Literal::is_ground)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for l in &self.lits {
            l.collect_vars(&mut out);
        }
        out
    }

    pub fn abducible_vars(&self) -> BTreeSet<Var> {
        self.vars().into_iter().filter(|v| v.is_abducible()).collect()
    }

    pub fn max_var_id(&self) -> Option<u32> {
        self.lits
            .iter()
            .flat_map(|l| [l.lhs().max_var_id(), l.rhs().max_var_id()])
            .flatten()
            .max()
    }

    pub fn weight(&self) -> usize {
        self.lits.iter().map(Literal::weight).sum()
    }

    pub fn partition(&self, abducibles: &Abducibles) -> ClausePartition {
        let (delta, delta_bar): (Vec<_>, Vec<_>) = self
            .lits
            .iter()
            .cloned()
            .partition(|l| l.is_a_literal(abducibles));
        let gamma = self
            .lits
            .iter()
            .filter(|l| l.is_constraint(abducibles))
            .cloned()
            .collect();
        ClausePartition {
            delta: Clause::new(delta),
            delta_bar: Clause::new(delta_bar),
            gamma: Clause::new(gamma),
        }
    }

    pub fn is_a_clause(&self, abducibles: &Abducibles) -> bool {
        self.lits.iter().all(|l| l.is_a_literal(abducibles))
    }

    /// Every non-abstracted literal is an A-literal.
    pub fn is_abstracted(&self, abducibles: &Abducibles) -> bool {
        self.lits
            .iter()
            .all(|l| l.is_abstracted(abducibles) || l.is_a_literal(abducibles))
    }

    /// Every abducible variable occurs in some constraint literal.
    pub fn is_va_stable(&self, abducibles: &Abducibles) -> bool {
        let constrained: BTreeSet<Var> = self
            .lits
            .iter()
            .filter_map(|l| l.constraint_parts(abducibles).map(|(x, _)| x))
            .collect();
        self.abducible_vars().is_subset(&constrained)
    }

    pub fn is_flat(&self) -> bool {
        self.lits.iter().all(Literal::is_flat)
    }

    pub fn classify(&self, abducibles: &Abducibles) -> ClauseClass {
        ClauseClass {
            a_clause: self.is_a_clause(abducibles),
            abstracted: self.is_abstracted(abducibles),
            va_stable: self.is_va_stable(abducibles),
            flat: self.is_flat(),
            ground: self.is_ground(),
        }
    }

    /// `¬C` as a set of unit clauses.
    pub fn negate_ground(&self) -> Result<Vec<Clause>, TermError> {
        if !self.is_ground() {
            return Err(TermError::NonGround(self.to_string()));
        }
        let mut units: Vec<Clause> = self
            .lits
            .iter()
            .map(|l| Clause::unit(l.complement()))
            .collect();
        units.dedup();
        Ok(units)
    }

    /// Contains `t ≃ t` or a complementary pair.
    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(Literal::is_trivially_true)
            || self
                .lits
                .iter()
                .filter(|l| l.is_positive())
                .any(|p| self.lits.iter().any(|n| n.is_negative() && n.complement() == *p))
    }

    /// Explicit contraction: `C ∨ L ∨ L` becomes `C ∨ L`.
    pub fn merge_duplicates(&self) -> Clause {
        let mut lits = self.lits.clone();
        lits.dedup();
        Clause { lits }
    }

    pub fn map_literals(&self, f: impl FnMut(&Literal) -> Literal) -> Clause {
        Clause::new(self.lits.iter().map(f).collect())
    }

    pub fn without(&self, index: usize) -> Vec<Literal> {
        let mut lits = self.lits.clone();
        lits.remove(index);
        lits
    }

    /// Renames every variable `v` to `v + offset`, keeping its class.
    pub fn shift_vars(&self, offset: u32) -> Clause {
        if offset == 0 {
            return self.clone();
        }
        self.map_literals(|l| l.map_terms(|t| t.map_vars(&mut |v| Term::Var(v.shifted(offset)))))
    }

    /// Renames variables to `0, 1, ...` in order of first occurrence, so that
    /// clauses equal up to renaming usually compare equal.
    pub fn normalize_vars(&self) -> Clause {
        let mut c = self.clone();
        // Sorting depends on variable names and vice versa; two passes reach a
        // stable form for all but pathological symmetric clauses.
        for _ in 0..2 {
            let mut map: HashMap<Var, Var> = HashMap::new();
            let mut next = 0u32;
            let renamed = c.lits.iter().map(|l| {
                l.map_terms(|t| {
                    t.map_vars(&mut |v| {
                        let w = *map.entry(v).or_insert_with(|| {
                            next += 1;
                            Var::new(next - 1, v.class())
                        });
                        Term::Var(w)
                    })
                })
            });
            let next_clause = Clause::new(renamed.collect());
            if next_clause == c {
                break;
            }
            c = next_clause;
        }
        c
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("[]");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite map from variables to terms.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Substitution::identity();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }

    /// Adds `v ↦ t`; a binding `v ↦ v` is dropped so that the domain only
    /// holds moved variables.
    pub fn bind(&mut self, v: Var, t: Term) {
        if t == Term::Var(v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn remove(&mut self, v: Var) -> Option<Term> {
        self.map.remove(&v)
    }

    /// `self` followed by `other`: `x(self.compose(other)) = (x self) other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::identity();
        for (v, t) in &self.map {
            out.bind(*v, t.apply(other));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.bind(*v, t.clone());
            }
        }
        out
    }

    /// `σ|_V` for the given variable class.
    pub fn restrict(&self, class: VarClass) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| v.class() == class)
                .map(|(v, t)| (*v, t.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// Homomorphic extension of a substitution to terms, literals and clauses.
pub trait Apply {
    fn apply(&self, s: &Substitution) -> Self;
}

impl Apply for Term {
    fn apply(&self, s: &Substitution) -> Term {
        if s.is_identity() {
            return self.clone();
        }
        self.map_vars(&mut |v| s.get(v).cloned().unwrap_or(Term::Var(v)))
    }
}

impl Apply for Literal {
    fn apply(&self, s: &Substitution) -> Literal {
        self.map_terms(|t| t.apply(s))
    }
}

impl Apply for Clause {
    fn apply(&self, s: &Substitution) -> Clause {
        if s.is_identity() {
            return self.clone();
        }
        self.map_literals(|l| l.apply(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    fn x(id: u32) -> Term {
        Term::Var(Var::ordinary(id))
    }

    fn xa(id: u32) -> Term {
        Term::Var(Var::abducible(id))
    }

    fn f(args: Vec<Term>) -> Term {
        Term::func("f", args)
    }

    #[test]
    fn apply_replaces_domain_variables_only() {
        let s = Substitution::from_pairs([(Var::ordinary(0), c("b"))]);
        assert_eq!(f(vec![x(0), c("a")]).apply(&s), f(vec![c("b"), c("a")]));
        let s = Substitution::from_pairs([(Var::ordinary(1), c("a"))]);
        assert_eq!(x(0).apply(&s), x(0));
    }

    #[test]
    fn apply_to_clause() {
        // (x ≄ a ∨ f(x) ≃ y){x ↦ z, y ↦ g(z)}
        let clause = Clause::new(vec![
            Literal::neg(x(0), c("a")),
            Literal::pos(f(vec![x(0)]), x(1)),
        ]);
        let s = Substitution::from_pairs([
            (Var::ordinary(0), x(2)),
            (Var::ordinary(1), Term::func("g", vec![x(2)])),
        ]);
        let expected = Clause::new(vec![
            Literal::neg(x(2), c("a")),
            Literal::pos(f(vec![x(2)]), Term::func("g", vec![x(2)])),
        ]);
        assert_eq!(clause.apply(&s), expected);
    }

    #[test]
    fn compose_examples() {
        let s1 = Substitution::from_pairs([(Var::ordinary(0), x(1))]);
        let s2 = Substitution::from_pairs([(Var::ordinary(1), c("a"))]);
        let expected = Substitution::from_pairs([(Var::ordinary(0), c("a")), (Var::ordinary(1), c("a"))]);
        assert_eq!(s1.compose(&s2), expected);

        assert_eq!(Substitution::identity().compose(&s2), s2);

        // {x ↦ f(y)} ∘ {y ↦ z}: checked pointwise.
        let s1 = Substitution::from_pairs([(Var::ordinary(0), f(vec![x(1)]))]);
        let s2 = Substitution::from_pairs([(Var::ordinary(1), x(2))]);
        let composed = s1.compose(&s2);
        for v in [0, 1, 2, 3] {
            let t = x(v);
            assert_eq!(t.apply(&composed), t.apply(&s1).apply(&s2));
        }
        assert_eq!(
            composed,
            Substitution::from_pairs([(Var::ordinary(0), f(vec![x(2)])), (Var::ordinary(1), x(2))])
        );
    }

    #[test]
    fn literal_equality_is_side_symmetric() {
        assert_eq!(Literal::pos(c("a"), f(vec![c("b")])), Literal::pos(f(vec![c("b")]), c("a")));
        assert_ne!(Literal::pos(c("a"), c("b")), Literal::neg(c("a"), c("b")));
        assert_eq!(Literal::pos(c("a"), c("b")).complement(), Literal::neg(c("b"), c("a")));
    }

    #[test]
    fn duplicates_are_kept_until_merged() {
        let l = Literal::pos(c("a"), c("b"));
        let clause = Clause::new(vec![l.clone(), l.clone()]);
        assert_eq!(clause.len(), 2);
        assert_ne!(clause, Clause::unit(l.clone()));
        assert_eq!(clause.merge_duplicates(), Clause::unit(l));
    }

    fn clause_3_prime() -> (Clause, Abducibles) {
        let a = Abducibles::new(["i", "j", "b", "c"]);
        let clause = Clause::new(vec![
            Literal::neg(xa(0), c("i")),
            Literal::neg(xa(1), c("b")),
            Literal::pos(c("d1"), Term::func("store", vec![c("a"), xa(0), xa(1)])),
        ]);
        (clause, a)
    }

    #[test]
    fn partition_of_example_clause() {
        let (clause, a) = clause_3_prime();
        let p = clause.partition(&a);
        let gamma = Clause::new(vec![Literal::neg(xa(0), c("i")), Literal::neg(xa(1), c("b"))]);
        assert_eq!(p.delta, gamma);
        assert_eq!(p.gamma, gamma);
        assert_eq!(
            p.delta_bar,
            Clause::unit(Literal::pos(c("d1"), Term::func("store", vec![c("a"), xa(0), xa(1)])))
        );

        let ab = Abducibles::new(["a", "b"]);
        let ground = Clause::unit(Literal::neg(c("a"), c("b")));
        let p = ground.partition(&ab);
        assert_eq!(p.delta, ground);
        assert!(p.delta_bar.is_empty());
        assert!(p.gamma.is_empty());

        let plain = Clause::unit(Literal::pos(f(vec![x(0)]), Term::func("g", vec![x(1)])));
        let p = plain.partition(&ab);
        assert!(p.delta.is_empty());
        assert_eq!(p.delta_bar, plain);
        assert!(p.gamma.is_empty());
    }

    #[test]
    fn classify_examples() {
        let (clause, a) = clause_3_prime();
        let k = clause.classify(&a);
        assert!(k.abstracted && k.va_stable && !k.a_clause);

        let ab = Abducibles::new(["a", "b"]);
        let constrained = Clause::new(vec![Literal::neg(xa(0), c("a")), Literal::pos(xa(0), c("b"))]);
        let k = constrained.classify(&ab);
        assert!(k.a_clause && k.va_stable);

        let free = Clause::unit(Literal::pos(xa(0), c("b")));
        let k = free.classify(&ab);
        assert!(k.a_clause && !k.va_stable);
    }

    #[test]
    fn negation_of_ground_clauses() {
        let clause = Clause::new(vec![Literal::pos(c("a"), c("b")), Literal::neg(c("c"), c("d"))]);
        let neg = clause.negate_ground().unwrap();
        assert_eq!(neg.len(), 2);
        assert!(neg.contains(&Clause::unit(Literal::neg(c("a"), c("b")))));
        assert!(neg.contains(&Clause::unit(Literal::pos(c("c"), c("d")))));
        assert!(Clause::empty().negate_ground().unwrap().is_empty());
        let ij = Clause::unit(Literal::pos(c("i"), c("j")));
        assert_eq!(ij.negate_ground().unwrap(), vec![Clause::unit(Literal::neg(c("i"), c("j")))]);
        let open = Clause::unit(Literal::pos(x(0), c("a")));
        assert!(matches!(open.negate_ground(), Err(TermError::NonGround(_))));
    }

    #[test]
    fn positions_and_replacement() {
        let t = f(vec![Term::func("g", vec![c("a"), x(0)]), c("b")]);
        assert_eq!(t.positions().len(), 5);
        assert_eq!(t.non_var_positions().len(), 4);
        assert_eq!(t.subterm_at(&[0, 1]), Some(&x(0)));
        let r = t.replace_at(&[0, 1], c("c"));
        assert_eq!(r, f(vec![Term::func("g", vec![c("a"), c("c")]), c("b")]));
    }

    #[test]
    fn tautologies() {
        assert!(Clause::new(vec![Literal::pos(c("a"), c("a")), Literal::neg(c("b"), c("c"))]).is_tautology());
        assert!(Clause::new(vec![Literal::pos(c("a"), c("b")), Literal::neg(c("b"), c("a"))]).is_tautology());
        assert!(!Clause::new(vec![Literal::pos(c("a"), c("b")), Literal::neg(c("b"), c("c"))]).is_tautology());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let mut sig = Signature::new();
        sig.add_term(&f(vec![c("a")])).unwrap();
        let err = sig.add_term(&f(vec![c("a"), c("b")])).unwrap_err();
        assert!(matches!(err, TermError::ArityMismatch { first: 1, second: 2, .. }));
    }

    #[test]
    fn normalization_identifies_renamings() {
        let c1 = Clause::new(vec![Literal::pos(f(vec![x(5)]), x(7)), Literal::neg(xa(9), c("a"))]);
        let c2 = Clause::new(vec![Literal::pos(f(vec![x(1)]), x(0)), Literal::neg(xa(3), c("a"))]);
        assert_eq!(c1.normalize_vars(), c2.normalize_vars());
    }
}
