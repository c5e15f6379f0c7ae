//! Syntactic unification, matching, and the A-compliant repair of mgus.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::term::{Abducibles, Substitution, Term, Var, VarClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("terms are not unifiable")]
    NotUnifiable,
    #[error("terms have no A-compliant most general unifier")]
    NotACompliant,
}

struct Unifier {
    bindings: HashMap<Var, Term>,
}

impl Unifier {
    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.bindings.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: Var, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &Term, b: &Term) -> Result<(), UnifyError> {
        let mut stack = vec![(a.clone(), b.clone())];
        while let Some((s, t)) = stack.pop() {
            let s = self.walk(&s).clone();
            let t = self.walk(&t).clone();
            match (&s, &t) {
                (Term::Var(x), Term::Var(y)) if x == y => {}
                (Term::Var(x), _) => {
                    if self.occurs(*x, &t) {
                        return Err(UnifyError::NotUnifiable);
                    }
                    self.bindings.insert(*x, t);
                }
                (_, Term::Var(y)) => {
                    if self.occurs(*y, &s) {
                        return Err(UnifyError::NotUnifiable);
                    }
                    self.bindings.insert(*y, s);
                }
                (Term::App(f, fs), Term::App(g, gs)) => {
                    if f != g || fs.len() != gs.len() {
                        return Err(UnifyError::NotUnifiable);
                    }
                    for (x, y) in fs.iter().zip(gs.iter()) {
                        stack.push((x.clone(), y.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App(f, args) => Term::app(f.clone(), args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    fn into_substitution(self) -> Substitution {
        let mut vars: Vec<Var> = self.bindings.keys().copied().collect();
        vars.sort();
        let mut s = Substitution::identity();
        for v in vars {
            s.bind(v, self.resolve(&Term::Var(v)));
        }
        s
    }
}

/// Most general unifier of `t` and `s`, idempotent. Occurs check is always on.
pub fn mgu(t: &Term, s: &Term) -> Result<Substitution, UnifyError> {
    mgu_pairs(&[(t, s)])
}

/// Simultaneous most general unifier of several pairs.
pub fn mgu_pairs(pairs: &[(&Term, &Term)]) -> Result<Substitution, UnifyError> {
    let mut u = Unifier { bindings: HashMap::new() };
    for (a, b) in pairs {
        u.unify(a, b)?;
    }
    Ok(u.into_substitution())
}

/// Every image is abstracted, and every abducible variable is mapped to an
/// abducible variable.
pub fn is_a_compliant(s: &Substitution, abducibles: &Abducibles) -> bool {
    s.iter().all(|(v, t)| {
        t.is_abstracted(abducibles)
            && (!v.is_abducible() || t.as_var().is_some_and(|w| w.is_abducible()))
    })
}

/// Repairs an mgu that maps abducible variables to ordinary ones by the
/// renaming `μ{y ↦ x}`, in increasing order of the abducible variable.
pub fn repair_a_compliance(mut mu: Substitution) -> Substitution {
    loop {
        let next = mu.iter().find_map(|(x, t)| match t {
            Term::Var(y) if x.is_abducible() && y.class() == VarClass::Ordinary => Some((x, *y)),
            _ => None,
        });
        match next {
            None => return mu,
            Some((x, y)) => {
                let renaming = Substitution::from_pairs([(y, Term::Var(x))]);
                mu = mu.compose(&renaming);
            }
        }
    }
}

/// An A-compliant mgu of two abstracted terms.
pub fn a_compliant_mgu(t: &Term, s: &Term, abducibles: &Abducibles) -> Result<Substitution, UnifyError> {
    let mu = repair_a_compliance(mgu(t, s)?);
    if is_a_compliant(&mu, abducibles) {
        Ok(mu)
    } else {
        Err(UnifyError::NotACompliant)
    }
}

/// Variable bindings produced by one-way matching. Unlike [`Substitution`]
/// this keeps identity bindings, which matching needs to stay consistent.
pub type Bindings = BTreeMap<Var, Term>;

/// One-way matching: extends `b` so that `pattern·b == target`.
pub fn match_term(pattern: &Term, target: &Term, b: &mut Bindings) -> bool {
    match pattern {
        Term::Var(v) => match b.get(v) {
            Some(bound) => bound == target,
            None => {
                b.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, args) => match target {
            Term::App(g, targs) if f == g && args.len() == targs.len() => {
                args.iter().zip(targs.iter()).all(|(a, t)| match_term(a, t, b))
            }
            _ => false,
        },
    }
}

pub fn bindings_to_substitution(b: &Bindings) -> Substitution {
    Substitution::from_pairs(b.iter().map(|(v, t)| (*v, t.clone())))
}

/// A matcher `σ` with `pattern·σ == target`, if any.
pub fn matches(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut b = Bindings::new();
    match_term(pattern, target, &mut b).then(|| bindings_to_substitution(&b))
}
