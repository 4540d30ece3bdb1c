use super::GenError;
use crate::ce::{Atom, ContrastiveExplanation, ContrastiveProblem, Evidence};
use crate::justify::{union_of_justifications, Goal, JustificationQuery};
use crate::kb::{Assertion, ConceptName, Individual, RoleName};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// One variable per pair in `NI(A) × NI(A)`.
    Full,
    /// Pairs from the union of justifications times the foil neighbourhood.
    #[default]
    Refined,
}

/// A pattern atom over super-structure variables; `x_i` stands for the
/// individual pair `pairs[i]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PairAtom {
    Class(ConceptName, usize),
    Role(RoleName, usize, usize),
}

impl PairAtom {
    pub fn vars(&self) -> impl Iterator<Item = usize> {
        let (x, y) = match self {
            PairAtom::Class(_, x) => (*x, None),
            PairAtom::Role(_, x, y) => (*x, Some(*y)),
        };
        std::iter::once(x).chain(y)
    }
}

#[derive(Clone, Debug)]
pub struct SuperStructure {
    /// `(fact-side, foil-side)` individual of each variable.
    pub pairs: Vec<(Individual, Individual)>,
    pub q_com: BTreeSet<PairAtom>,
    pub q_diff: BTreeSet<PairAtom>,
    pub conflict_pool: BTreeSet<Assertion>,
    /// The variable `x_{a,b}`.
    pub root: usize,
}

impl SuperStructure {
    pub fn var_name(i: usize) -> String {
        format!("x{i}")
    }

    fn instantiate(&self, atom: &PairAtom, side: impl Fn(&(Individual, Individual)) -> &Individual) -> Assertion {
        match atom {
            PairAtom::Class(name, x) => Assertion::Class(name.clone(), side(&self.pairs[*x]).clone()),
            PairAtom::Role(name, x, y) => {
                Assertion::Role(name.clone(), side(&self.pairs[*x]).clone(), side(&self.pairs[*y]).clone())
            }
        }
    }

    pub fn fact(&self, atom: &PairAtom) -> Assertion {
        self.instantiate(atom, |p| &p.0)
    }

    pub fn foil(&self, atom: &PairAtom) -> Assertion {
        self.instantiate(atom, |p| &p.1)
    }

    /// Every atom, tagged with whether it belongs to `q_com`.
    pub fn atoms(&self) -> impl Iterator<Item = (&PairAtom, bool)> {
        self.q_com.iter().map(|a| (a, true)).chain(self.q_diff.iter().map(|a| (a, false)))
    }

    /// The structure read as an explanation; variables no atom uses are kept.
    pub fn to_explanation(&self) -> ContrastiveExplanation {
        let atom = |a: &PairAtom| match a {
            PairAtom::Class(name, x) => Atom::Class(name.clone(), Self::var_name(*x)),
            PairAtom::Role(name, x, y) => Atom::Role(name.clone(), Self::var_name(*x), Self::var_name(*y)),
        };
        let mut order: Vec<usize> = (0..self.pairs.len()).collect();
        order.sort_by_key(|i| (*i != self.root, *i));
        let evidence = |side: fn(&(Individual, Individual)) -> &Individual| -> Evidence {
            order.iter().map(|i| (Self::var_name(*i), side(&self.pairs[*i]).clone())).collect()
        };
        ContrastiveExplanation {
            vars: order.iter().map(|i| Self::var_name(*i)).collect(),
            q_com: self.q_com.iter().map(atom).collect(),
            q_diff: self.q_diff.iter().map(atom).collect(),
            fact_evidence: evidence(|p| &p.0),
            foil_evidence: evidence(|p| &p.1),
            conflict: self.conflict_pool.clone(),
        }
    }
}

/// Undirected role-distance from `start` to every reachable individual.
fn distances(abox: &BTreeSet<Assertion>, start: &Individual) -> BTreeMap<Individual, usize> {
    let mut adjacent: BTreeMap<&Individual, Vec<&Individual>> = BTreeMap::new();
    for assertion in abox {
        if let Assertion::Role(_, x, y) = assertion {
            adjacent.entry(x).or_default().push(y);
            adjacent.entry(y).or_default().push(x);
        }
    }
    let mut dist = BTreeMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let next = dist[x] + 1;
        for &y in adjacent.get(x).into_iter().flatten() {
            if !dist.contains_key(y) {
                dist.insert(y.clone(), next);
                queue.push_back(y);
            }
        }
    }
    dist
}

fn individuals_of(abox: &BTreeSet<Assertion>) -> BTreeSet<Individual> {
    abox.iter().flat_map(|a| a.individuals().cloned()).collect()
}

/// The super-structure over `p`'s ABox. In the refined mode the foil side
/// gets `max(fresh_budget, needed)` fresh individuals, where the budget
/// defaults to `|NI(A′)|` and `needed` makes a foil-injective pairing possible.
pub fn build_super_structure(
    p: &ContrastiveProblem,
    mode: Mode,
    fresh_budget: Option<usize>,
) -> Result<SuperStructure, GenError> {
    let abox = &p.kb.abox;
    let (fact_abox, foils): (BTreeSet<Assertion>, BTreeSet<Individual>) = match mode {
        Mode::Full => {
            let mut foils = individuals_of(abox);
            foils.insert(p.foil.clone());
            (abox.clone(), foils)
        }
        Mode::Refined => {
            let query = JustificationQuery::abox(&p.kb, Goal::Instance(p.concept.clone(), p.fact.clone()));
            let union = union_of_justifications(&query).map_err(|_| GenError::NotEntailed)?;
            let fact_abox: BTreeSet<Assertion> = union.iter().filter_map(|a| a.as_assertion().cloned()).collect();
            let mut fact_individuals = individuals_of(&fact_abox);
            fact_individuals.insert(p.fact.clone());
            let from_fact = distances(abox, &p.fact);
            let radius = fact_individuals.iter().filter_map(|c| from_fact.get(c)).max().copied().unwrap_or(0);
            let mut foils: BTreeSet<Individual> = distances(abox, &p.foil)
                .into_iter()
                .filter(|(_, d)| *d <= radius)
                .map(|(i, _)| i)
                .collect();
            let needed = fact_individuals.len().saturating_sub(foils.len());
            let fresh = fresh_budget.unwrap_or(fact_individuals.len()).max(needed);
            foils.extend((0..fresh as u32).map(Individual::Fresh));
            (fact_abox, foils)
        }
    };
    let mut facts = individuals_of(&fact_abox);
    facts.insert(p.fact.clone());

    let mut pairs = Vec::new();
    let mut index: BTreeMap<(&Individual, &Individual), usize> = BTreeMap::new();
    for c in &facts {
        for d in &foils {
            index.insert((c, d), pairs.len());
            pairs.push((c.clone(), d.clone()));
        }
    }
    let root = index[&(&p.fact, &p.foil)];
    let (mut q_com, mut q_diff) = (BTreeSet::new(), BTreeSet::new());
    for assertion in &fact_abox {
        match assertion {
            Assertion::Class(name, c) => {
                for d in &foils {
                    let atom = PairAtom::Class(name.clone(), index[&(c, d)]);
                    if abox.contains(&Assertion::Class(name.clone(), d.clone())) {
                        q_com.insert(atom);
                    } else {
                        q_diff.insert(atom);
                    }
                }
            }
            Assertion::Role(name, c0, c1) => {
                for d0 in &foils {
                    for d1 in &foils {
                        let atom = PairAtom::Role(name.clone(), index[&(c0, d0)], index[&(c1, d1)]);
                        if abox.contains(&Assertion::Role(name.clone(), d0.clone(), d1.clone())) {
                            q_com.insert(atom);
                        } else {
                            q_diff.insert(atom);
                        }
                    }
                }
            }
        }
    }
    Ok(SuperStructure { pairs, q_com, q_diff, conflict_pool: abox.clone(), root })
}

/// Variables pairing every fact-side individual with a distinct foil-side
/// one, `x_{a,b}` included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafeVector {
    pub vars: BTreeSet<usize>,
}

impl SafeVector {
    /// The atom only uses variables of the vector.
    pub fn covers(&self, atom: &PairAtom) -> bool {
        atom.vars().all(|x| self.vars.contains(&x))
    }
}

/// Greedy choice: starting from `x_{a,b}`, repeatedly add the pair that
/// completes the most `q_com` atoms, ties broken by the smallest
/// `(fact, foil)` pair.
pub fn choose_safe_vector(s: &SuperStructure) -> SafeVector {
    let mut com_by_var: Vec<Vec<&PairAtom>> = vec![Vec::new(); s.pairs.len()];
    for atom in &s.q_com {
        let vars: BTreeSet<usize> = atom.vars().collect();
        for x in vars {
            com_by_var[x].push(atom);
        }
    }
    let mut chosen = BTreeSet::from([s.root]);
    let mut assigned: BTreeSet<&Individual> = BTreeSet::from([&s.pairs[s.root].0]);
    let mut used: BTreeSet<&Individual> = BTreeSet::from([&s.pairs[s.root].1]);
    let facts: BTreeSet<&Individual> = s.pairs.iter().map(|(c, _)| c).collect();
    while assigned.len() < facts.len() {
        let mut best: Option<(usize, usize)> = None;
        for (i, (c, d)) in s.pairs.iter().enumerate() {
            if assigned.contains(c) || used.contains(d) {
                continue;
            }
            let gain = com_by_var[i].iter().filter(|a| a.vars().all(|x| x == i || chosen.contains(&x))).count();
            if best.map_or(true, |(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let (i, _) = best.expect("enough foil-side individuals for an injective pairing");
        chosen.insert(i);
        assigned.insert(&s.pairs[i].0);
        used.insert(&s.pairs[i].1);
    }
    SafeVector { vars: chosen }
}
