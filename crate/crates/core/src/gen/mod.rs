//! Difference-minimal explanation generation: a super-structure pairing fact
//! and foil individuals is repaired for consistency, then its difference,
//! commonality and conflict set are minimized in turn.

mod structure;

pub use structure::{build_super_structure, choose_safe_vector, Mode, PairAtom, SafeVector, SuperStructure};

use crate::ce::{ContrastiveExplanation, ContrastiveProblem, Validator};
use crate::justify::{minimal_sufficient, minimize_with};
use crate::kb::Assertion;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("the knowledge base is inconsistent")]
    InconsistentKb,
    #[error("the fact is not an instance of the concept")]
    NotEntailed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenOptions {
    pub mode: Mode,
    /// Run on the materialized ABox, producing semantic explanations.
    pub semantic: bool,
    /// Fresh foil-side individuals offered by the refined structure.
    pub fresh_budget: Option<usize>,
}

/// Entailment tests on foil- and fact-side instantiations, sharing one
/// normalized TBox.
struct Checks<'v, 'p> {
    validator: &'v Validator<'p>,
}

impl Checks<'_, '_> {
    fn fact<'a>(&self, abox: impl IntoIterator<Item = &'a Assertion>) -> bool {
        self.validator.entails_concept(abox, &self.validator.problem().fact)
    }

    fn foil<'a>(&self, abox: impl IntoIterator<Item = &'a Assertion>) -> bool {
        self.validator.entails_concept(abox, &self.validator.problem().foil)
    }

    fn consistent<'a>(&self, abox: impl IntoIterator<Item = &'a Assertion>) -> bool {
        self.validator.consistent(abox)
    }
}

fn foil_side<'a>(s: &SuperStructure, atoms: impl IntoIterator<Item = &'a PairAtom>) -> BTreeSet<Assertion> {
    atoms.into_iter().map(|a| s.foil(a)).collect()
}

/// While the foil-side instantiation is inconsistent, take a
/// justification of `⊥` with the safe core fixed and delete every atom
/// producing its first element (difference atoms first, then sorted).
pub fn repair_consistency(s: &mut SuperStructure, safe: &SafeVector, validator: &Validator) {
    let checks = Checks { validator };
    let protected = foil_side(s, s.atoms().map(|(a, _)| a).filter(|a| safe.covers(a)));
    loop {
        let mut free: Vec<(bool, Assertion)> = s
            .atoms()
            .filter(|(a, _)| !safe.covers(a))
            .map(|(a, com)| (com, s.foil(a)))
            .filter(|(_, f)| !protected.contains(f))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        free.dedup_by(|x, y| x.1 == y.1);
        let pool: Vec<&Assertion> = free.iter().map(|(_, f)| f).collect();
        let inconsistent = |subset: &[&Assertion]| !checks.consistent(protected.iter().chain(subset.iter().copied()));
        let Some(justification) = minimal_sufficient(&pool, inconsistent) else { return };
        let victim = justification[0].clone();
        log::debug!("repair: dropping pattern atoms producing {victim}");
        let keep = |a: &PairAtom| safe.covers(a) || s.foil(a) != victim;
        let q_com: BTreeSet<PairAtom> = s.q_com.iter().filter(|a| keep(a)).cloned().collect();
        let q_diff: BTreeSet<PairAtom> = s.q_diff.iter().filter(|a| keep(a)).cloned().collect();
        s.q_com = q_com;
        s.q_diff = q_diff;
    }
}

/// Keeps a subset-minimal set of foil-side difference assertions that, with
/// the commonality, entails `C(b)`. Candidates outside the safe core go
/// first, and among them those whose fact side is not asserted in `asserted`.
pub fn minimize_difference(
    s: &mut SuperStructure,
    safe: &SafeVector,
    validator: &Validator,
    asserted: &BTreeSet<Assertion>,
) {
    let checks = Checks { validator };
    let common = foil_side(s, &s.q_com);
    let mut keyed: Vec<(bool, bool, Assertion)> = Vec::new();
    for f in foil_side(s, &s.q_diff) {
        let producers: Vec<&PairAtom> = s.q_diff.iter().filter(|a| s.foil(a) == f).collect();
        let in_core = producers.iter().any(|a| safe.covers(a));
        let asserted_fact = producers.iter().any(|a| asserted.contains(&s.fact(a)));
        keyed.push((in_core, asserted_fact, f));
    }
    keyed.sort();
    let candidates: Vec<&Assertion> = keyed.iter().map(|(_, _, f)| f).collect();
    let kept: BTreeSet<Assertion> =
        minimize_with(&candidates, |subset| checks.foil(common.iter().chain(subset.iter().copied())))
            .into_iter()
            .cloned()
            .collect();
    let q_diff: BTreeSet<PairAtom> = s.q_diff.iter().filter(|a| kept.contains(&s.foil(a))).cloned().collect();
    s.q_diff = q_diff;
}

/// Deletion over the whole pattern keeping both `C(a)` on the fact side
/// and `C(b)` on the foil side. Atoms outside the safe core go first,
/// difference atoms before commonality atoms.
pub fn minimize_commonality_support(s: &mut SuperStructure, safe: &SafeVector, validator: &Validator) {
    let checks = Checks { validator };
    let mut keyed: Vec<(bool, bool, &PairAtom)> = s.atoms().map(|(a, com)| (safe.covers(a), com, a)).collect();
    keyed.sort();
    let atoms: Vec<(bool, &PairAtom)> = keyed.into_iter().map(|(_, com, a)| (com, a)).collect();
    let both = |subset: &[(bool, &PairAtom)]| {
        let fact: Vec<Assertion> = subset.iter().map(|(_, a)| s.fact(a)).collect();
        let foil: Vec<Assertion> = subset.iter().map(|(_, a)| s.foil(a)).collect();
        checks.fact(&fact) && checks.foil(&foil)
    };
    if !both(&atoms) {
        return;
    }
    let kept = minimize_with(&atoms, both);
    let q_com = kept.iter().filter(|(com, _)| *com).map(|(_, a)| (*a).clone()).collect();
    let q_diff = kept.iter().filter(|(com, _)| !*com).map(|(_, a)| (*a).clone()).collect();
    s.q_com = q_com;
    s.q_diff = q_diff;
}

/// Grows `𝒞 ⊆ abox` by one element of each justification of `⊥` (with
/// the foil side fixed) until consistent, then deletion-minimizes it.
pub fn minimize_conflict(
    validator: &Validator,
    abox: &BTreeSet<Assertion>,
    foil: &BTreeSet<Assertion>,
) -> BTreeSet<Assertion> {
    let checks = Checks { validator };
    let free: Vec<&Assertion> = abox.iter().filter(|a| !foil.contains(a)).collect();
    let repaired = |conflict: &BTreeSet<&Assertion>| {
        checks.consistent(free.iter().copied().filter(|a| !conflict.contains(a)).chain(foil))
    };
    let mut conflict: BTreeSet<&Assertion> = BTreeSet::new();
    if !checks.consistent(foil) {
        return BTreeSet::new();
    }
    while !repaired(&conflict) {
        let pool: Vec<&Assertion> = free.iter().copied().filter(|a| !conflict.contains(a)).collect();
        let inconsistent = |subset: &[&Assertion]| !checks.consistent(subset.iter().copied().chain(foil));
        let justification = minimal_sufficient(&pool, inconsistent).expect("the remaining ABox is inconsistent");
        conflict.insert(justification[0]);
    }
    let ordered: Vec<&Assertion> = conflict.into_iter().collect();
    minimize_with(&ordered, |subset| repaired(&subset.iter().copied().collect()))
        .into_iter()
        .cloned()
        .collect()
}

/// Restricts the structure to the safe core and deletion-minimizes it on the
/// fact side alone. The core pairs individuals injectively, so its foil side
/// is an isomorphic copy of the fact side: entailment of `C(b)` and
/// consistency carry over, and the fact side becomes a justification.
fn safe_core(s: &SuperStructure, safe: &SafeVector, validator: &Validator) -> SuperStructure {
    let checks = Checks { validator };
    let mut core = s.clone();
    core.q_com.retain(|a| safe.covers(a));
    core.q_diff.retain(|a| safe.covers(a));
    let atoms: Vec<(bool, &PairAtom)> = core.q_diff.iter().map(|a| (false, a)).chain(core.q_com.iter().map(|a| (true, a))).collect();
    let kept = minimize_with(&atoms, |subset| {
        let fact: Vec<Assertion> = subset.iter().map(|(_, a)| core.fact(a)).collect();
        checks.fact(&fact)
    });
    let mut out = core.clone();
    out.q_com = kept.iter().filter(|(com, _)| *com).map(|(_, a)| (*a).clone()).collect();
    out.q_diff = kept.iter().filter(|(com, _)| !*com).map(|(_, a)| (*a).clone()).collect();
    out
}

fn finish(s: &SuperStructure, validator: &Validator) -> ContrastiveExplanation {
    let mut e = s.to_explanation();
    e.conflict = minimize_conflict(validator, &validator.problem().kb.abox, &e.foil_instance());
    e.prune_unused();
    e.normalize_names();
    e
}

/// The full pipeline. In semantic mode the super-structure is built over the
/// materialized ABox while conflicts are still drawn from the asserted one.
pub fn generate_ce(p: &ContrastiveProblem, options: &GenOptions) -> Result<ContrastiveExplanation, GenError> {
    let validator = Validator::new(p);
    if !validator.kb_consistent() {
        return Err(GenError::InconsistentKb);
    }
    if !validator.entails_concept(&p.kb.abox, &p.fact) {
        return Err(GenError::NotEntailed);
    }
    let work = if options.semantic { p.with_abox(validator.materialized().clone()) } else { p.clone() };
    let mut s = build_super_structure(&work, options.mode, options.fresh_budget)?;
    let safe = choose_safe_vector(&s);
    let initial = s.clone();
    loop {
        let mut attempt = s.clone();
        repair_consistency(&mut attempt, &safe, &validator);
        minimize_difference(&mut attempt, &safe, &validator, &p.kb.abox);
        minimize_commonality_support(&mut attempt, &safe, &validator);
        let e = finish(&attempt, &validator);
        let report = validator.validate(&e);
        if report.is_valid() {
            return Ok(e);
        }
        log::debug!("pipeline result invalid ({:?}): {}", report.failures(), crate::ce::ce_to_json(&e));
        let mut dropped = colliding_atoms(&attempt, &safe);
        if dropped.is_empty() {
            dropped = fact_redundant_atoms(&attempt, &validator);
        }
        if dropped.is_empty() {
            break;
        }
        s.q_com.retain(|a| !dropped.contains(a));
        s.q_diff.retain(|a| !dropped.contains(a));
    }
    log::debug!("using the safe core");
    Ok(finish(&safe_core(&initial, &safe, &validator), &validator))
}

/// Atoms whose fact-side instance is not needed for `C(a)`, core atoms
/// included.
fn fact_redundant_atoms(s: &SuperStructure, validator: &Validator) -> BTreeSet<PairAtom> {
    let checks = Checks { validator };
    let fact: BTreeSet<Assertion> = s.atoms().map(|(a, _)| s.fact(a)).collect();
    s.atoms()
        .filter(|(a, _)| {
            let instance = s.fact(a);
            checks.fact(fact.iter().filter(|f| **f != instance))
        })
        .map(|(a, _)| a.clone())
        .collect()
}

/// Atoms to drop so that no two atoms share a fact-side instance: for each
/// shared instance, every producer outside the safe core except the one
/// kept, which is a core atom if any, else a commonality atom if any, else
/// the least one.
fn colliding_atoms(s: &SuperStructure, safe: &SafeVector) -> BTreeSet<PairAtom> {
    let mut producers: std::collections::BTreeMap<Assertion, Vec<(bool, bool, &PairAtom)>> = Default::default();
    for (atom, com) in s.atoms() {
        producers.entry(s.fact(atom)).or_default().push((!safe.covers(atom), !com, atom));
    }
    let mut dropped = BTreeSet::new();
    for mut group in producers.into_values().filter(|g| g.len() > 1) {
        group.sort();
        dropped.extend(group.into_iter().skip(1).filter(|(outside, _, _)| *outside).map(|(_, _, a)| a.clone()));
    }
    dropped
}
