//! Random contrastive problems and a benchmark harness over a KB corpus.

use crate::ce::{ContrastiveExplanation, ContrastiveProblem};
use crate::gen::{generate_ce, GenOptions};
use crate::kb::{parse_kb, Assertion, Concept, ConceptName, Gci, Individual, KnowledgeBase, RoleName};
use crate::reasoner::{entails_assertion, is_consistent, materialize, Entailer};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;
use std::sync::mpsc;
use std::time::{Duration, Instant};
use thiserror::Error;

pub type BenchRng = Xoshiro256StarStar;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no suitable foil individual found")]
    NoFoil,
    #[error("the knowledge base is inconsistent")]
    InconsistentKb,
    #[error("{path}: {message}")]
    Corpus { path: String, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn rng(seed: u64) -> BenchRng {
    BenchRng::seed_from_u64(seed)
}

/// The stream of one CP of a sweep; it depends only on `seed` and the
/// coordinates, never on scheduling.
pub fn stream(seed: u64, kb: usize, run: usize, cp: usize) -> BenchRng {
    let mut r = rng(seed);
    for part in [kb, run, cp] {
        r = rng(r.next_u64() ^ part as u64);
    }
    r
}

/// Entailed concept names and role successors per individual.
#[derive(Clone, Debug)]
pub struct KbFacts {
    pub individuals: Vec<Individual>,
    names: BTreeMap<Individual, Vec<ConceptName>>,
    successors: BTreeMap<Individual, Vec<(RoleName, Individual)>>,
}

impl KbFacts {
    pub fn new(kb: &KnowledgeBase) -> Result<Self, BenchError> {
        let materialized = materialize(kb).map_err(|_| BenchError::InconsistentKb)?;
        let mut names: BTreeMap<Individual, Vec<ConceptName>> = BTreeMap::new();
        let mut successors: BTreeMap<Individual, Vec<(RoleName, Individual)>> = BTreeMap::new();
        for assertion in &materialized {
            match assertion {
                Assertion::Class(name, c) => names.entry(c.clone()).or_default().push(name.clone()),
                Assertion::Role(role, c, d) => successors.entry(c.clone()).or_default().push((role.clone(), d.clone())),
            }
        }
        Ok(KbFacts { individuals: kb.individuals().into_iter().collect(), names, successors })
    }

    pub fn names(&self, c: &Individual) -> &[ConceptName] {
        self.names.get(c).map_or(&[], Vec::as_slice)
    }

    pub fn successors(&self, c: &Individual) -> &[(RoleName, Individual)] {
        self.successors.get(c).map_or(&[], Vec::as_slice)
    }
}

/// A random non-conjunctive concept of size at most `n` with `c` among its
/// instances. `⊤` and each entailed name are equally likely.
pub fn ran_atom(facts: &KbFacts, c: &Individual, n: usize, rng: &mut BenchRng) -> Concept {
    let successors = facts.successors(c);
    if n > 1 && !successors.is_empty() && !rng.gen::<bool>() {
        let (role, d) = successors.choose(rng).expect("non-empty");
        return Concept::Existential(role.clone(), Box::new(ran_con(facts, d, n - 1, rng)));
    }
    let names = facts.names(c);
    match rng.gen_range(0..=names.len()) {
        0 => Concept::Top,
        i => Concept::Atomic(names[i - 1].clone()),
    }
}

/// A random conjunction of atoms with total size at most `n`.
pub fn ran_con(facts: &KbFacts, c: &Individual, n: usize, rng: &mut BenchRng) -> Concept {
    assert!(n >= 1);
    let first = ran_atom(facts, c, n, rng);
    let mut m = n - first.size();
    let mut parts = vec![first];
    while m > 0 {
        let next = ran_atom(facts, c, m, rng);
        m -= next.size();
        parts.push(next);
    }
    Concept::and(parts)
}

pub const CONCEPT_SIZE: usize = 5;
pub const FOIL_RETRIES: usize = 100;

/// A random CP: a uniform fact `a`, `C = ran_con(a, 5)`, and a uniform foil
/// among the non-instances of `C` sharing a concept name or an outgoing role
/// name with `a`.
pub fn generate_cp(
    kb: &KnowledgeBase,
    facts: &KbFacts,
    rng: &mut BenchRng,
    retries: usize,
) -> Result<ContrastiveProblem, BenchError> {
    if facts.individuals.is_empty() {
        return Err(BenchError::NoFoil);
    }
    let out_roles = |c: &Individual| -> BTreeSet<&RoleName> { facts.successors(c).iter().map(|(r, _)| r).collect() };
    for _ in 0..retries {
        let a = facts.individuals.choose(rng).expect("non-empty").clone();
        let concept = ran_con(facts, &a, CONCEPT_SIZE, rng);
        let mut entailer = Entailer::new(&kb.tbox);
        let query = entailer.query(&concept);
        let state = entailer.saturate(&kb.abox);
        let a_names: BTreeSet<&ConceptName> = facts.names(&a).iter().collect();
        let a_roles = out_roles(&a);
        let foils: Vec<&Individual> = facts
            .individuals
            .iter()
            .filter(|b| !state.has_atom(b, query))
            .filter(|b| facts.names(b).iter().any(|n| a_names.contains(n)) || !out_roles(b).is_disjoint(&a_roles))
            .collect();
        if let Some(b) = foils.choose(rng) {
            return ContrastiveProblem::new(kb.clone(), concept, a, (*b).clone()).map_err(|_| BenchError::NoFoil);
        }
    }
    Err(BenchError::NoFoil)
}

/// Shape of a synthetic KB.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyntheticParams {
    pub concept_names: usize,
    pub role_names: usize,
    pub individuals: usize,
    pub gcis: usize,
    /// GCIs of the form `A ⊓ B ⊑ ⊥`, on top of `gcis`.
    pub disjointness: usize,
    pub class_assertions: usize,
    pub role_assertions: usize,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            concept_names: 8,
            role_names: 2,
            individuals: 7,
            gcis: 10,
            disjointness: 1,
            class_assertions: 12,
            role_assertions: 8,
        }
    }
}

/// A random consistent EL⊥ KB. Each assertion is kept only if the KB stays
/// consistent with it.
pub fn synthetic_kb(params: &SyntheticParams, rng: &mut BenchRng) -> KnowledgeBase {
    let name = |rng: &mut BenchRng| Concept::atomic(&format!("C{}", rng.gen_range(0..params.concept_names)));
    let role = |rng: &mut BenchRng| format!("r{}", rng.gen_range(0..params.role_names));
    let individual = |rng: &mut BenchRng| format!("i{}", rng.gen_range(0..params.individuals));
    let side = |rng: &mut BenchRng, conjunction: bool| match rng.gen_range(0..if conjunction { 3 } else { 2 }) {
        0 => name(rng),
        1 => {
            let r = role(rng);
            Concept::some(&r, name(rng))
        }
        _ => Concept::and([name(rng), name(rng)]),
    };
    let mut tbox = Vec::new();
    for _ in 0..params.gcis {
        tbox.push(Gci::new(side(rng, true), side(rng, false)));
    }
    for _ in 0..params.disjointness {
        tbox.push(Gci::new(Concept::and([name(rng), name(rng)]), Concept::Bottom));
    }
    let mut candidates = Vec::new();
    for _ in 0..params.class_assertions {
        let Concept::Atomic(c) = name(rng) else { unreachable!() };
        candidates.push(Assertion::Class(c, Individual::named(&individual(rng))));
    }
    for _ in 0..params.role_assertions {
        let r = role(rng);
        candidates.push(Assertion::role(&r, &individual(rng), &individual(rng)));
    }
    let mut kb = KnowledgeBase::from_parts(tbox, Vec::new());
    for assertion in candidates {
        let mut next = kb.clone();
        next.abox.insert(assertion);
        if is_consistent(&next) {
            kb = next;
        }
    }
    kb
}

/// Removes, one at a time in order, every assertion entailed by the rest.
pub fn strip_entailed(kb: &KnowledgeBase) -> KnowledgeBase {
    let mut kb = kb.clone();
    let candidates: Vec<Assertion> = kb.abox.iter().cloned().collect();
    for assertion in candidates {
        let mut rest = kb.clone();
        rest.abox.remove(&assertion);
        if entails_assertion(&rest, &assertion) {
            kb = rest;
        }
    }
    kb
}

/// Every `*.kb` file of `dir`, sorted by file name; the id is the file stem.
pub fn load_corpus(dir: &Path) -> Result<Vec<(String, KnowledgeBase)>, BenchError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "kb"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let kb = parse_kb(&text)
            .map_err(|e| BenchError::Corpus { path: path.display().to_string(), message: e.to_string() })?;
        let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        out.push((id, kb));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub runs: usize,
    pub cps: usize,
    pub timeout: Duration,
    pub seed: u64,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    pub options: GenOptions,
    pub strip_entailed: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            runs: 5,
            cps: 10,
            timeout: Duration::from_secs(600),
            seed: 0,
            jobs: None,
            options: GenOptions::default(),
            strip_entailed: false,
        }
    }
}

/// Sizes of the instantiated components of an answered CP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sizes {
    pub commonality: usize,
    pub difference: usize,
    pub conflict: usize,
    pub fresh: usize,
}

impl Sizes {
    pub fn of(e: &ContrastiveExplanation) -> Self {
        Sizes {
            commonality: e.commonality_size(),
            difference: e.difference_size(),
            conflict: e.conflict.len(),
            fresh: e.fresh_count(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Explained(ContrastiveExplanation),
    Timeout,
    NoFoil,
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub kb: String,
    pub run: usize,
    pub cp: usize,
    pub problem: Option<ContrastiveProblem>,
    pub outcome: Outcome,
    pub duration: Duration,
}

impl BenchRecord {
    pub fn sizes(&self) -> Option<Sizes> {
        match &self.outcome {
            Outcome::Explained(e) => Some(Sizes::of(e)),
            _ => None,
        }
    }

    pub fn timed_out(&self) -> bool {
        matches!(self.outcome, Outcome::Timeout)
    }
}

/// Runs `generate_ce` on a separate thread; on timeout the thread is left
/// to finish in the background and its result is discarded.
fn explain_with_timeout(p: &ContrastiveProblem, options: GenOptions, timeout: Duration) -> (Outcome, Duration) {
    let (tx, rx) = mpsc::channel();
    let problem = p.clone();
    let start = Instant::now();
    std::thread::spawn(move || {
        let _ = tx.send(generate_ce(&problem, &options));
    });
    match rx.recv_timeout(timeout) {
        Ok(Ok(e)) => (Outcome::Explained(e), start.elapsed()),
        Ok(Err(err)) => (Outcome::Failed(err.to_string()), start.elapsed()),
        Err(_) => (Outcome::Timeout, start.elapsed()),
    }
}

fn run_one(index: usize, id: &str, kb: &KnowledgeBase, facts: &Result<KbFacts, String>, run: usize, cp: usize, config: &BenchConfig) -> BenchRecord {
    let record = |problem, outcome, duration| BenchRecord { kb: id.to_string(), run, cp, problem, outcome, duration };
    let facts = match facts {
        Ok(facts) => facts,
        Err(message) => return record(None, Outcome::Failed(message.clone()), Duration::ZERO),
    };
    let mut rng = stream(config.seed, index, run, cp);
    match generate_cp(kb, facts, &mut rng, FOIL_RETRIES) {
        Ok(p) => {
            let (outcome, duration) = explain_with_timeout(&p, config.options, config.timeout);
            if let Outcome::Failed(message) = &outcome {
                log::warn!("{id} run {run} cp {cp}: {message}");
            }
            record(Some(p), outcome, duration)
        }
        Err(BenchError::NoFoil) => record(None, Outcome::NoFoil, Duration::ZERO),
        Err(err) => record(None, Outcome::Failed(err.to_string()), Duration::ZERO),
    }
}

/// `runs × cps` CPs per KB, in (kb, run, cp) order whatever the scheduling.
pub fn run_bench(corpus: &[(String, KnowledgeBase)], config: &BenchConfig) -> Vec<BenchRecord> {
    let prepared: Vec<(KnowledgeBase, Result<KbFacts, String>)> = corpus
        .iter()
        .map(|(_, kb)| {
            let kb = if config.strip_entailed { strip_entailed(kb) } else { kb.clone() };
            let facts = KbFacts::new(&kb).map_err(|e| e.to_string());
            (kb, facts)
        })
        .collect();
    let jobs: Vec<(usize, usize, usize)> = (0..corpus.len())
        .flat_map(|k| (0..config.runs).flat_map(move |r| (0..config.cps).map(move |c| (k, r, c))))
        .collect();
    let work = || -> Vec<BenchRecord> {
        jobs.par_iter()
            .map(|&(k, run, cp)| run_one(k, &corpus[k].0, &prepared[k].0, &prepared[k].1, run, cp, config))
            .collect()
    };
    match config.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    }
}

pub const RECORD_COLUMNS: [&str; 9] =
    ["kb", "run", "cp", "commonality", "difference", "conflict", "fresh", "duration_s", "timeout"];

/// One row per record; size fields are empty for unanswered CPs.
pub fn write_records_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        let size = |f: fn(&Sizes) -> usize| r.sizes().map_or(String::new(), |s| f(&s).to_string());
        w.write_record([
            r.kb.clone(),
            r.run.to_string(),
            r.cp.to_string(),
            size(|s| s.commonality),
            size(|s| s.difference),
            size(|s| s.conflict),
            size(|s| s.fresh),
            format!("{:.3}", r.duration.as_secs_f64()),
            r.timed_out().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Average, minimum and maximum of one column over the answered CPs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stat {
    pub avg: f64,
    pub min: f64,
    pub max: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let sum: f64 = values.iter().sum();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Stat { avg: sum / values.len() as f64, min, max })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub kb: String,
    pub cps: usize,
    pub answered: usize,
    pub timeouts: usize,
    pub no_foil: usize,
    pub commonality: Option<Stat>,
    pub difference: Option<Stat>,
    pub conflict: Option<Stat>,
    pub fresh: Option<Stat>,
    pub duration_s: Option<Stat>,
}

/// One row per KB, in first-occurrence order.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        if !groups.contains_key(r.kb.as_str()) {
            order.push(&r.kb);
        }
        groups.entry(&r.kb).or_default().push(r);
    }
    order
        .into_iter()
        .map(|kb| {
            let group = &groups[kb];
            let answered: Vec<(Sizes, f64)> =
                group.iter().filter_map(|r| r.sizes().map(|s| (s, r.duration.as_secs_f64()))).collect();
            let column = |f: fn(&Sizes) -> usize| Stat::of(&answered.iter().map(|(s, _)| f(s) as f64).collect::<Vec<_>>());
            SummaryRow {
                kb: kb.to_string(),
                cps: group.len(),
                answered: answered.len(),
                timeouts: group.iter().filter(|r| r.timed_out()).count(),
                no_foil: group.iter().filter(|r| matches!(r.outcome, Outcome::NoFoil)).count(),
                commonality: column(|s| s.commonality),
                difference: column(|s| s.difference),
                conflict: column(|s| s.conflict),
                fresh: column(|s| s.fresh),
                duration_s: Stat::of(&answered.iter().map(|(_, d)| *d).collect::<Vec<_>>()),
            }
        })
        .collect()
}

pub fn summary_columns() -> Vec<String> {
    let mut columns: Vec<String> = ["kb", "cps", "answered", "timeouts", "no_foil"].map(String::from).into();
    for name in ["commonality", "difference", "conflict", "fresh", "duration_s"] {
        for stat in ["avg", "min", "max"] {
            columns.push(format!("{name}_{stat}"));
        }
    }
    columns
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(summary_columns())?;
    for row in rows {
        let mut fields = vec![
            row.kb.clone(),
            row.cps.to_string(),
            row.answered.to_string(),
            row.timeouts.to_string(),
            row.no_foil.to_string(),
        ];
        for (stat, digits) in [(row.commonality, 2), (row.difference, 2), (row.conflict, 2), (row.fresh, 2), (row.duration_s, 3)] {
            match stat {
                Some(s) => fields.extend([s.avg, s.min, s.max].map(|v| format!("{v:.digits$}"))),
                None => fields.extend(std::iter::repeat(String::new()).take(3)),
            }
        }
        w.write_record(fields)?;
    }
    w.flush()?;
    Ok(())
}
