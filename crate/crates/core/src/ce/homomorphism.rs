use super::{Atom, ContrastiveExplanation};
use std::collections::BTreeMap;

/// A variable mapping `σ` with `p_com(σ(x⃗)) ⊆ q_com` and `p_diff(σ(x⃗)) ⊆ q_diff`.
pub type Homomorphism = BTreeMap<String, String>;

/// Exhaustive backtracking search for a homomorphism from `p` to `q`.
/// Variables of `p` that no atom uses are mapped to the first variable of `q`
/// (and left out when `q` has none).
pub fn find_homomorphism(p: &ContrastiveExplanation, q: &ContrastiveExplanation) -> Option<Homomorphism> {
    let atoms: Vec<(&Atom, bool)> = p.q_com.iter().map(|a| (a, true)).chain(p.q_diff.iter().map(|a| (a, false))).collect();
    let mut order: Vec<&String> = Vec::new();
    let mut degree: BTreeMap<&String, usize> = BTreeMap::new();
    for (atom, _) in &atoms {
        for x in atom.vars() {
            *degree.entry(x).or_default() += 1;
        }
    }
    order.extend(degree.keys().copied());
    order.sort_by_key(|x| std::cmp::Reverse(degree[x]));
    let targets: Vec<&String> = q.vars.iter().collect();
    let mut sigma: BTreeMap<&String, &String> = BTreeMap::new();
    if !search(&atoms, &order, &targets, q, &mut sigma) {
        return None;
    }
    let mut out: Homomorphism = sigma.into_iter().map(|(x, y)| (x.clone(), y.clone())).collect();
    if let Some(first) = q.vars.first() {
        for x in &p.vars {
            out.entry(x.clone()).or_insert_with(|| first.clone());
        }
    }
    Some(out)
}

fn image(atom: &Atom, sigma: &BTreeMap<&String, &String>) -> Option<Atom> {
    Some(match atom {
        Atom::Class(name, x) => Atom::Class(name.clone(), (*sigma.get(x)?).clone()),
        Atom::Role(name, x, y) => Atom::Role(name.clone(), (*sigma.get(x)?).clone(), (*sigma.get(y)?).clone()),
    })
}

fn consistent(atoms: &[(&Atom, bool)], sigma: &BTreeMap<&String, &String>, q: &ContrastiveExplanation) -> bool {
    atoms.iter().all(|(atom, com)| match image(atom, sigma) {
        None => true,
        Some(mapped) => {
            if *com {
                q.q_com.contains(&mapped)
            } else {
                q.q_diff.contains(&mapped)
            }
        }
    })
}

fn search<'a>(
    atoms: &[(&Atom, bool)],
    order: &[&'a String],
    targets: &[&'a String],
    q: &ContrastiveExplanation,
    sigma: &mut BTreeMap<&'a String, &'a String>,
) -> bool {
    let Some((&x, rest)) = order.split_first() else { return true };
    for &y in targets {
        sigma.insert(x, y);
        if consistent(atoms, sigma, q) && search(atoms, rest, targets, q, sigma) {
            return true;
        }
        sigma.remove(x);
    }
    false
}

/// `p` embeds into `q`: a homomorphism exists and `𝒞_p ⊆ 𝒞_q`.
pub fn embeds(p: &ContrastiveExplanation, q: &ContrastiveExplanation) -> Option<Homomorphism> {
    if !p.conflict.is_subset(&q.conflict) {
        return None;
    }
    find_homomorphism(p, q)
}
