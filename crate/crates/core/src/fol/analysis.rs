use std::collections::BTreeSet;

use super::ast::{Atom, Formula, Term};

/// Node counts by kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConnectiveCensus {
    pub not: usize,
    pub and: usize,
    pub or: usize,
    pub implies: usize,
    pub iff: usize,
    pub forall: usize,
    pub exists: usize,
}

impl ConnectiveCensus {
    pub fn quantifiers(&self) -> usize {
        self.forall + self.exists
    }

    pub fn connectives(&self) -> usize {
        self.not + self.and + self.or + self.implies + self.iff
    }
}

pub fn connective_census(f: &Formula) -> ConnectiveCensus {
    let mut c = ConnectiveCensus::default();
    let mut stack = vec![f];
    while let Some(node) = stack.pop() {
        match node {
            Formula::Atomic(_) => {}
            Formula::Not(_) => c.not += 1,
            Formula::And(..) => c.and += 1,
            Formula::Or(..) => c.or += 1,
            Formula::Implies(..) => c.implies += 1,
            Formula::Iff(..) => c.iff += 1,
            Formula::ForAll(..) => c.forall += 1,
            Formula::Exists(..) => c.exists += 1,
        }
        stack.extend(node.children());
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateOccurrence {
    pub symbol: String,
    pub arity: usize,
    /// 1-based position among all atoms, left to right.
    pub rank: usize,
}

pub fn predicate_occurrences(f: &Formula) -> Vec<PredicateOccurrence> {
    f.atoms()
        .into_iter()
        .enumerate()
        .map(|(i, a): (usize, &Atom)| PredicateOccurrence {
            symbol: a.predicate.clone(),
            arity: a.arity(),
            rank: i + 1,
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableSets {
    pub free: BTreeSet<String>,
    pub bound: BTreeSet<String>,
}

fn collect_variables(f: &Formula, scope: &mut Vec<String>, out: &mut VariableSets) {
    match f {
        Formula::Atomic(a) => {
            for t in &a.args {
                if let Term::Variable(name) = t {
                    if scope.iter().any(|v| v == name) {
                        out.bound.insert(name.clone());
                    } else {
                        out.free.insert(name.clone());
                    }
                }
            }
        }
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            scope.push(v.clone());
            collect_variables(body, scope, out);
            scope.pop();
        }
        _ => {
            for c in f.children() {
                collect_variables(c, scope, out);
            }
        }
    }
}

/// Variables occurring free and variables with at least one bound occurrence.
/// A name can appear in both sets.
pub fn free_and_bound_variables(f: &Formula) -> VariableSets {
    let mut out = VariableSets::default();
    collect_variables(f, &mut Vec::new(), &mut out);
    out
}

/// Counts occurrences of `var` in `f` that are free in `f` (i.e. would be
/// bound by a quantifier wrapped directly around `f`).
fn free_occurrences(f: &Formula, var: &str) -> usize {
    match f {
        Formula::Atomic(a) => a.args.iter().filter(|t| t.is_variable() && t.name() == var).count(),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            if v == var {
                0
            } else {
                free_occurrences(body, var)
            }
        }
        _ => f.children().into_iter().map(|c| free_occurrences(c, var)).sum(),
    }
}

/// True when some quantifier binds no occurrence of its variable, including
/// a quantifier whose variable is shadowed by an inner one.
pub fn has_vacuous_quantifier(f: &Formula) -> bool {
    match f {
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            free_occurrences(body, v) == 0 || has_vacuous_quantifier(body)
        }
        _ => f.children().into_iter().any(has_vacuous_quantifier),
    }
}

pub fn contains_biconditional(f: &Formula) -> bool {
    connective_census(f).iff > 0
}
