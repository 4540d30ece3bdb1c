//! Justifications with a fixed component: a single subset-minimal
//! justification, hitting-set-tree enumeration of all of them, and their union.

use crate::kb::{Assertion, Axiom, Concept, Gci, Individual, KnowledgeBase};
use crate::reasoner::{AtomId, Entailer};
use std::collections::{BTreeSet, HashSet};
use thiserror::Error;

/// What a justification has to entail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Assertion(Assertion),
    /// `C(a)` for a possibly complex concept.
    Instance(Concept, Individual),
    /// `⊥`: the axioms are jointly inconsistent.
    Inconsistency,
}

impl std::fmt::Display for Goal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Goal::Assertion(a) => write!(f, "{a}"),
            Goal::Instance(c, a) => write!(f, "{}({a})", crate::kb::render_concept(c)),
            Goal::Inconsistency => f.write_str("⊥"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct JustificationQuery {
    pub kb: KnowledgeBase,
    /// `K′`: always present, never part of a justification.
    pub fixed: BTreeSet<Axiom>,
    pub goal: Goal,
}

impl JustificationQuery {
    /// Fixed component = the TBox; justifications are ABox subsets.
    pub fn abox(kb: &KnowledgeBase, goal: Goal) -> Self {
        JustificationQuery {
            kb: kb.clone(),
            fixed: kb.tbox.iter().cloned().map(Axiom::Gci).collect(),
            goal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JustifyError {
    #[error("the goal {0} is not entailed")]
    NotEntailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justifications {
    /// In discovery order, which is deterministic.
    pub sets: Vec<BTreeSet<Axiom>>,
    pub truncated: bool,
}

/// Decides entailment of the goal from `fixed ∪ S` for subsets `S` of the
/// free axioms. When every free axiom is an assertion the TBox is normalized
/// once and only the ABox is re-saturated per test.
pub struct GoalChecker {
    fixed_gcis: Vec<Gci>,
    fixed_assertions: Vec<Assertion>,
    goal: Goal,
    shared: Option<(Entailer, Option<AtomId>)>,
    calls: usize,
}

impl GoalChecker {
    pub fn new(fixed: &BTreeSet<Axiom>, free: &[Axiom], goal: Goal) -> Self {
        let fixed_gcis: Vec<Gci> = fixed
            .iter()
            .filter_map(|a| match a {
                Axiom::Gci(g) => Some(g.clone()),
                Axiom::Assertion(_) => None,
            })
            .collect();
        let fixed_assertions = fixed.iter().filter_map(|a| a.as_assertion().cloned()).collect();
        let shared = free.iter().all(|a| matches!(a, Axiom::Assertion(_))).then(|| {
            let mut entailer = Entailer::new(&fixed_gcis);
            let query = match &goal {
                Goal::Instance(c, _) => Some(entailer.query(c)),
                _ => None,
            };
            (entailer, query)
        });
        GoalChecker { fixed_gcis, fixed_assertions, goal, shared, calls: 0 }
    }

    /// Number of reasoner invocations so far.
    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn entails(&mut self, subset: &[&Axiom]) -> bool {
        self.calls += 1;
        let mut abox: Vec<&Assertion> = self.fixed_assertions.iter().collect();
        abox.extend(subset.iter().filter_map(|a| a.as_assertion()));
        if let Goal::Assertion(role @ Assertion::Role(..)) = &self.goal {
            if abox.contains(&role) {
                return true;
            }
        }
        let owned;
        let (entailer, query) = match &self.shared {
            Some((entailer, query)) => (entailer, *query),
            None => {
                let gcis = self.fixed_gcis.iter().chain(subset.iter().filter_map(|a| match a {
                    Axiom::Gci(g) => Some(g),
                    Axiom::Assertion(_) => None,
                }));
                let mut entailer = Entailer::new(gcis);
                let query = match &self.goal {
                    Goal::Instance(c, _) => Some(entailer.query(c)),
                    _ => None,
                };
                owned = entailer;
                (&owned, query)
            }
        };
        let state = entailer.saturate(abox);
        match &self.goal {
            Goal::Assertion(a) => state.entails(a),
            Goal::Instance(_, individual) => state.has_atom(individual, query.expect("query registered")),
            Goal::Inconsistency => state.is_inconsistent(),
        }
    }
}

/// Deletion-minimizes `items` in the given order: each item is dropped if the
/// rest is still `sufficient`. Assumes `sufficient(items)` holds and is
/// monotone, so the result is subset-minimal.
pub fn minimize_with<T: Clone>(items: &[T], mut sufficient: impl FnMut(&[T]) -> bool) -> Vec<T> {
    let mut kept: Vec<T> = items.to_vec();
    let mut index = 0;
    while index < kept.len() {
        let mut candidate = kept.clone();
        candidate.remove(index);
        if sufficient(&candidate) {
            kept = candidate;
        } else {
            index += 1;
        }
    }
    kept
}

fn free_axioms(q: &JustificationQuery) -> Vec<Axiom> {
    q.kb.axioms().filter(|a| !q.fixed.contains(a)).collect()
}

/// A subset-minimal sufficient sublist of `pool`, preferring early items:
/// the shortest sufficient prefix (doubling, then bisection) is
/// deletion-minimized. `None` when `pool` itself is insufficient.
pub fn minimal_sufficient<T: Clone>(pool: &[T], mut sufficient: impl FnMut(&[T]) -> bool) -> Option<Vec<T>> {
    if !sufficient(pool) {
        return None;
    }
    let mut high = 1.min(pool.len());
    while high < pool.len() && !sufficient(&pool[..high]) {
        high = (high * 2).min(pool.len());
    }
    let mut low = high / 2;
    while low < high {
        let mid = (low + high) / 2;
        if sufficient(&pool[..mid]) {
            high = mid;
        } else {
            low = mid + 1;
        }
    }
    Some(minimize_with(&pool[..high], sufficient))
}

/// One justification within `pool` (sorted), by expansion then contraction.
fn single(checker: &mut GoalChecker, pool: &[&Axiom]) -> Option<BTreeSet<Axiom>> {
    let minimal = minimal_sufficient(pool, |subset| checker.entails(subset))?;
    Some(minimal.into_iter().cloned().collect())
}

/// A subset-minimal `J ⊆ K \ K′` with `K′ ∪ J ⊨ goal`.
pub fn justify_fixed(q: &JustificationQuery) -> Result<BTreeSet<Axiom>, JustifyError> {
    let free = free_axioms(q);
    let mut checker = GoalChecker::new(&q.fixed, &free, q.goal.clone());
    let pool: Vec<&Axiom> = free.iter().collect();
    single(&mut checker, &pool).ok_or_else(|| JustifyError::NotEntailed(q.goal.to_string()))
}

fn children<'a>(label: &BTreeSet<Axiom>, path: &BTreeSet<&'a Axiom>, free: &'a [Axiom]) -> Vec<BTreeSet<&'a Axiom>> {
    label
        .iter()
        .rev()
        .map(|axiom| {
            let member = free.iter().find(|a| *a == axiom).expect("justifications use free axioms");
            let mut child = path.clone();
            child.insert(member);
            child
        })
        .collect()
}

/// All justifications via a hitting-set tree, stopping once more than `limit`
/// have been found; `truncated` is set exactly when more than `limit` exist.
pub fn all_justifications(q: &JustificationQuery, limit: usize) -> Result<Justifications, JustifyError> {
    let free = free_axioms(q);
    let mut checker = GoalChecker::new(&q.fixed, &free, q.goal.clone());
    let all: Vec<&Axiom> = free.iter().collect();
    let first = single(&mut checker, &all).ok_or_else(|| JustifyError::NotEntailed(q.goal.to_string()))?;

    let mut found: Vec<BTreeSet<Axiom>> = vec![first];
    let mut closed: Vec<BTreeSet<&Axiom>> = Vec::new();
    let mut visited: HashSet<BTreeSet<&Axiom>> = HashSet::new();
    // Depth-first over removal paths; each stack entry is a path whose node
    // label is still to be computed.
    let mut stack: Vec<BTreeSet<&Axiom>> = Vec::new();
    stack.extend(children(&found[0], &BTreeSet::new(), &free));
    while let Some(path) = stack.pop() {
        if found.len() > limit {
            break;
        }
        if !visited.insert(path.clone()) || closed.iter().any(|c| c.is_subset(&path)) {
            continue;
        }
        let label = match found.iter().find(|j| j.iter().all(|a| !path.contains(a))) {
            Some(j) => Some(j.clone()),
            None => {
                let pool: Vec<&Axiom> = all.iter().copied().filter(|a| !path.contains(a)).collect();
                let fresh = single(&mut checker, &pool);
                if let Some(j) = &fresh {
                    found.push(j.clone());
                }
                fresh
            }
        };
        match label {
            Some(label) => stack.extend(children(&label, &path, &free)),
            None => closed.push(path),
        }
    }
    let truncated = found.len() > limit;
    found.truncate(limit);
    Ok(Justifications { sets: found, truncated })
}

/// The union of all justifications.
pub fn union_of_justifications(q: &JustificationQuery) -> Result<BTreeSet<Axiom>, JustifyError> {
    let all = all_justifications(q, usize::MAX - 1)?;
    Ok(all.sets.into_iter().flatten().collect())
}
