//! Exhaustive verification of the preference criteria over a bounded space
//! of explanations.
//!
//! Every explanation's fact side is a justification of `C(a)`, so the space
//! is enumerated justification by justification: each argument position of
//! each assertion is paired with a foil-side individual (a named individual
//! of the ABox or one of at most `max_fresh` fresh ones), and each
//! resulting pattern is combined with every minimal conflict set.
//! Variables correspond to (fact, foil) pairs, which identifies explanations
//! that only differ by renaming or by duplicated variables.

use crate::ce::{ce_to_json, CeKind, ContrastiveExplanation, ContrastiveProblem, Evidence, Atom, Validator};
use crate::justify::{all_justifications, Goal, JustificationQuery};
use crate::kb::{Assertion, Axiom, Individual, KnowledgeBase};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const MAX_ASSERTIONS: usize = 12;
pub const MAX_INDIVIDUALS: usize = 6;
pub const MAX_FRESH: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Fresh foil-side individuals available to an explanation.
    pub max_fresh: usize,
    /// Largest pattern considered.
    pub max_atoms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_fresh: 2, max_atoms: 6 }
    }
}

/// Which explanations compete: syntactic ones only, or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Syntactic,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    Difference,
    Conflict,
    Commonality,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Subset,
    Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space too large: {0}")]
    SpaceTooLarge(String),
    #[error("the knowledge base is inconsistent")]
    InconsistentKb,
}

/// The verdict holds within `bounds` over `space` only.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub optimal: bool,
    /// An explanation beating the given one, when not optimal.
    pub witness: Option<ContrastiveExplanation>,
    pub space: Space,
    pub bounds: Bounds,
    /// Number of explanations compared against.
    pub compared: usize,
}

fn check_bounds(p: &ContrastiveProblem, bounds: &Bounds) -> Result<(), OracleError> {
    let abox = p.kb.abox.len();
    let individuals = p.kb.individuals().len();
    if abox > MAX_ASSERTIONS {
        return Err(OracleError::SpaceTooLarge(format!("{abox} assertions (at most {MAX_ASSERTIONS})")));
    }
    if individuals > MAX_INDIVIDUALS {
        return Err(OracleError::SpaceTooLarge(format!("{individuals} individuals (at most {MAX_INDIVIDUALS})")));
    }
    if bounds.max_fresh > MAX_FRESH {
        return Err(OracleError::SpaceTooLarge(format!("{} fresh individuals (at most {MAX_FRESH})", bounds.max_fresh)));
    }
    Ok(())
}

/// Argument positions of an assertion: its individuals in order.
fn positions(assertion: &Assertion) -> Vec<&Individual> {
    assertion.individuals().collect()
}

/// Every assignment of foil-side individuals to `count` positions, fresh
/// individuals introduced in increasing order.
fn assignments(count: usize, named: &[Individual], max_fresh: usize) -> Vec<Vec<Individual>> {
    fn extend(
        prefix: &mut Vec<Individual>,
        count: usize,
        named: &[Individual],
        max_fresh: usize,
        next_fresh: usize,
        out: &mut Vec<Vec<Individual>>,
    ) {
        if prefix.len() == count {
            out.push(prefix.clone());
            return;
        }
        for d in named {
            prefix.push(d.clone());
            extend(prefix, count, named, max_fresh, next_fresh, out);
            prefix.pop();
        }
        for i in 0..(next_fresh + 1).min(max_fresh) {
            prefix.push(Individual::Fresh(i as u32));
            extend(prefix, count, named, max_fresh, next_fresh.max(i + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), count, named, max_fresh, 0, &mut out);
    out
}

/// Every subset-minimal `𝒞 ⊆ abox` with `T, (abox \ 𝒞) ∪ foil` consistent,
/// smallest first.
pub fn minimal_conflicts(
    validator: &Validator,
    abox: &BTreeSet<Assertion>,
    foil: &BTreeSet<Assertion>,
) -> Vec<BTreeSet<Assertion>> {
    let free: BTreeSet<Assertion> = abox.difference(foil).cloned().collect();
    if validator.consistent(free.iter().chain(foil)) {
        return vec![BTreeSet::new()];
    }
    let tbox = &validator.problem().kb.tbox;
    let kb = KnowledgeBase::from_parts(tbox.iter().cloned(), free.iter().chain(foil).cloned());
    let fixed: BTreeSet<Axiom> =
        tbox.iter().cloned().map(Axiom::Gci).chain(foil.iter().cloned().map(Axiom::Assertion)).collect();
    let query = JustificationQuery { kb, fixed, goal: Goal::Inconsistency };
    let Ok(found) = all_justifications(&query, usize::MAX - 1) else { return Vec::new() };
    let family: Vec<BTreeSet<Assertion>> = found
        .sets
        .into_iter()
        .map(|j| j.into_iter().filter_map(|a| a.as_assertion().cloned()).collect())
        .collect();
    let universe: Vec<Assertion> = family.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut subsets: Vec<BTreeSet<Assertion>> = (0u32..1 << universe.len())
        .map(|mask| universe.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, a)| a.clone()).collect())
        .collect();
    subsets.sort_by_key(|s: &BTreeSet<Assertion>| s.len());
    let mut hitting: Vec<BTreeSet<Assertion>> = Vec::new();
    for s in subsets {
        if family.iter().all(|j| !j.is_disjoint(&s)) && hitting.iter().all(|h| !h.is_subset(&s)) {
            hitting.push(s);
        }
    }
    hitting
}

/// Builds the explanation pairing each position of `justification` with the
/// corresponding foil-side individual; `None` unless the foil side entails
/// `C(b)` consistently.
fn candidate(
    validator: &Validator,
    justification: &[Assertion],
    foils: &[Individual],
    space_abox: &BTreeSet<Assertion>,
) -> Option<(BTreeSet<Atom>, BTreeSet<Atom>, Evidence, Evidence)> {
    let p = validator.problem();
    let mut pairs: BTreeSet<(Individual, Individual)> = BTreeSet::new();
    let mut foil_side = Vec::with_capacity(justification.len());
    let mut rest = foils.iter();
    let mut placed: Vec<(&Assertion, Vec<(Individual, Individual)>)> = Vec::new();
    for assertion in justification {
        let args: Vec<(Individual, Individual)> =
            positions(assertion).into_iter().map(|c| (c.clone(), rest.next().expect("one per position").clone())).collect();
        pairs.extend(args.iter().cloned());
        foil_side.push(match assertion {
            Assertion::Class(name, _) => Assertion::Class(name.clone(), args[0].1.clone()),
            Assertion::Role(name, _, _) => Assertion::Role(name.clone(), args[0].1.clone(), args[1].1.clone()),
        });
        placed.push((assertion, args));
    }
    let state = validator.entailer().saturate(&foil_side);
    if state.is_inconsistent() || !state.has_atom(&p.foil, validator.query()) {
        return None;
    }
    let root = (p.fact.clone(), p.foil.clone());
    let mut ordered: Vec<&(Individual, Individual)> = pairs.iter().collect();
    ordered.sort_by_key(|pair| (**pair != root, (*pair).clone()));
    let names: BTreeMap<&(Individual, Individual), String> =
        ordered.iter().enumerate().map(|(i, pair)| (*pair, format!("x{i}"))).collect();
    let (mut q_com, mut q_diff) = (BTreeSet::new(), BTreeSet::new());
    for ((assertion, args), foil) in placed.iter().zip(&foil_side) {
        let atom = match assertion {
            Assertion::Class(name, _) => Atom::Class(name.clone(), names[&args[0]].clone()),
            Assertion::Role(name, _, _) => Atom::Role(name.clone(), names[&args[0]].clone(), names[&args[1]].clone()),
        };
        if space_abox.contains(foil) {
            q_com.insert(atom);
        } else {
            q_diff.insert(atom);
        }
    }
    let fact_evidence = names.iter().map(|(pair, x)| (x.clone(), pair.0.clone())).collect();
    let foil_evidence = names.iter().map(|(pair, x)| (x.clone(), pair.1.clone())).collect();
    Some((q_com, q_diff, fact_evidence, foil_evidence))
}

fn enumerate_over(
    validator: &Validator,
    space_abox: &BTreeSet<Assertion>,
    bounds: &Bounds,
) -> Vec<ContrastiveExplanation> {
    let p = validator.problem();
    let kb = p.kb.with_abox(space_abox.iter().cloned());
    let query = JustificationQuery::abox(&kb, Goal::Instance(p.concept.clone(), p.fact.clone()));
    let Ok(found) = all_justifications(&query, usize::MAX - 1) else { return Vec::new() };
    let mut named: BTreeSet<Individual> = p.kb.individuals();
    named.insert(p.foil.clone());
    let named: Vec<Individual> = named.into_iter().collect();
    let justifications: Vec<Vec<Assertion>> = found
        .sets
        .into_iter()
        .map(|j| j.into_iter().filter_map(|a| a.as_assertion().cloned()).collect::<Vec<_>>())
        .filter(|j| j.len() <= bounds.max_atoms)
        .collect();
    let out: Vec<ContrastiveExplanation> = justifications
        .par_iter()
        .flat_map_iter(|j| {
            let count: usize = j.iter().map(|a| positions(a).len()).sum();
            assignments(count, &named, bounds.max_fresh)
                .into_iter()
                .filter_map(|foils| candidate(validator, j, &foils, space_abox))
                .flat_map(|(q_com, q_diff, fact_evidence, foil_evidence)| {
                    let mut e = ContrastiveExplanation {
                        vars: (0..fact_evidence.len()).map(|i| format!("x{i}")).collect(),
                        q_com,
                        q_diff,
                        fact_evidence,
                        foil_evidence,
                        conflict: BTreeSet::new(),
                    };
                    e.normalize_names();
                    let foil = e.foil_instance();
                    minimal_conflicts(validator, &p.kb.abox, &foil).into_iter().map(move |conflict| {
                        let mut e = e.clone();
                        e.conflict = conflict;
                        e
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out
}

/// Every valid explanation within `bounds`, each once, in a fixed order.
pub fn enumerate_ces(
    p: &ContrastiveProblem,
    space: Space,
    bounds: &Bounds,
) -> Result<Vec<ContrastiveExplanation>, OracleError> {
    check_bounds(p, bounds)?;
    let validator = Validator::new(p);
    if !validator.kb_consistent() {
        return Err(OracleError::InconsistentKb);
    }
    Ok(enumerate_with(&validator, space, bounds))
}

fn enumerate_with(validator: &Validator, space: Space, bounds: &Bounds) -> Vec<ContrastiveExplanation> {
    let p = validator.problem();
    let mut all = enumerate_over(validator, &p.kb.abox, bounds);
    if space == Space::All {
        all.extend(enumerate_over(validator, validator.materialized(), bounds));
    }
    let mut keyed: Vec<(String, ContrastiveExplanation)> = all.into_iter().map(|e| (ce_to_json(&e).to_string(), e)).collect();
    keyed.sort_by(|x, y| x.0.cmp(&y.0));
    keyed.dedup_by(|x, y| x.0 == y.0);
    keyed.into_iter().map(|(_, e)| e).collect()
}

/// `small ⊊ large` after some injective renaming of the fresh individuals of
/// `small` onto fresh individuals of `large`.
pub fn strict_subset_up_to_fresh(small: &BTreeSet<Assertion>, large: &BTreeSet<Assertion>) -> bool {
    if small.len() >= large.len() {
        return false;
    }
    let fresh = |set: &BTreeSet<Assertion>| -> Vec<u32> {
        set.iter()
            .flat_map(|a| a.individuals())
            .filter_map(|i| match i {
                Individual::Fresh(n) => Some(*n),
                Individual::Named(_) => None,
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    };
    let (from, to) = (fresh(small), fresh(large));
    fn injections(from: &[u32], to: &[u32], acc: &mut Vec<(u32, u32)>, f: &mut dyn FnMut(&[(u32, u32)]) -> bool) -> bool {
        let Some((first, rest)) = from.split_first() else { return f(acc) };
        for t in to {
            if acc.iter().any(|(_, u)| u == t) {
                continue;
            }
            acc.push((*first, *t));
            if injections(rest, to, acc, f) {
                return true;
            }
            acc.pop();
        }
        false
    }
    injections(&from, &to, &mut Vec::new(), &mut |map| {
        let rename = |i: &Individual| match i {
            Individual::Fresh(n) => Individual::Fresh(map.iter().find(|(x, _)| x == n).map_or(*n, |(_, y)| *y)),
            named => named.clone(),
        };
        small.iter().all(|a| {
            let renamed = match a {
                Assertion::Class(name, x) => Assertion::Class(name.clone(), rename(x)),
                Assertion::Role(name, x, y) => Assertion::Role(name.clone(), rename(x), rename(y)),
            };
            large.contains(&renamed)
        })
    })
}

fn beats(criterion: Criterion, order: Order, other: &ContrastiveExplanation, e: &ContrastiveExplanation) -> bool {
    let diff = |x: &ContrastiveExplanation| crate::ce::instantiate(&x.q_diff, &x.foil_evidence);
    let com = |x: &ContrastiveExplanation| crate::ce::instantiate(&x.q_com, &x.foil_evidence);
    match (criterion, order) {
        (Criterion::Difference, Order::Subset) => strict_subset_up_to_fresh(&diff(other), &diff(e)),
        (Criterion::Difference, Order::Cardinality) => diff(other).len() < diff(e).len(),
        (Criterion::Conflict, Order::Subset) => other.conflict.len() < e.conflict.len() && other.conflict.is_subset(&e.conflict),
        (Criterion::Conflict, Order::Cardinality) => other.conflict.len() < e.conflict.len(),
        (Criterion::Commonality, Order::Subset) => com(e).len() < com(other).len() && com(e).is_subset(&com(other)),
        (Criterion::Commonality, Order::Cardinality) => com(other).len() > com(e).len(),
    }
}

/// Decides the criterion for `e` against every explanation in the bounded
/// space. Syntactic explanations compete with syntactic ones only, semantic
/// ones with all explanations.
pub fn verify(
    p: &ContrastiveProblem,
    e: &ContrastiveExplanation,
    criterion: Criterion,
    order: Order,
    bounds: &Bounds,
) -> Result<Verdict, OracleError> {
    check_bounds(p, bounds)?;
    let validator = Validator::new(p);
    if !validator.kb_consistent() {
        return Err(OracleError::InconsistentKb);
    }
    let space = match validator.classify(e) {
        CeKind::Syntactic => Space::Syntactic,
        CeKind::Semantic => Space::All,
    };
    let all = enumerate_with(&validator, space, bounds);
    let witness = all.iter().find(|other| beats(criterion, order, other, e)).cloned();
    Ok(Verdict { optimal: witness.is_none(), witness, space, bounds: *bounds, compared: all.len() })
}

pub fn is_difference_minimal(
    p: &ContrastiveProblem,
    e: &ContrastiveExplanation,
    order: Order,
    bounds: &Bounds,
) -> Result<Verdict, OracleError> {
    verify(p, e, Criterion::Difference, order, bounds)
}

pub fn is_conflict_minimal(
    p: &ContrastiveProblem,
    e: &ContrastiveExplanation,
    order: Order,
    bounds: &Bounds,
) -> Result<Verdict, OracleError> {
    verify(p, e, Criterion::Conflict, order, bounds)
}

pub fn is_commonality_maximal(
    p: &ContrastiveProblem,
    e: &ContrastiveExplanation,
    order: Order,
    bounds: &Bounds,
) -> Result<Verdict, OracleError> {
    verify(p, e, Criterion::Commonality, order, bounds)
}

/// The CP encoding a hypergraph: `T = {P_v ⊑ Q_i | v ∈ e_i} ∪ {Q_1 ⊓ … ⊓ Q_k ⊑ C}`
/// and `A = {P_v(a) | v ∈ V} ∪ {Foil(b)}`, asking why `a` and not `b` is a
/// `C`. Differences of explanations correspond to hitting sets.
pub fn hitting_set_problem(vertices: usize, edges: &[BTreeSet<usize>]) -> Option<ContrastiveProblem> {
    use crate::kb::{Concept, Gci};
    let mut tbox = Vec::new();
    for (i, edge) in edges.iter().enumerate() {
        for v in edge {
            tbox.push(Gci::new(Concept::atomic(&format!("P{v}")), Concept::atomic(&format!("Q{i}"))));
        }
    }
    let all_edges = Concept::and((0..edges.len()).map(|i| Concept::atomic(&format!("Q{i}"))));
    tbox.push(Gci::new(all_edges, Concept::atomic("C")));
    let mut abox: Vec<Assertion> = (0..vertices).map(|v| Assertion::class(&format!("P{v}"), "a")).collect();
    abox.push(Assertion::class("Foil", "b"));
    let kb = KnowledgeBase::from_parts(tbox, abox);
    ContrastiveProblem::new(kb, Concept::atomic("C"), "a".into(), "b".into()).ok()
}
