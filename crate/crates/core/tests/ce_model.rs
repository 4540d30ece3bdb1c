use cex_core::ce::{
    ce_from_json, ce_to_json, classify_ce, embeds, find_homomorphism, render_text, validate_ce, Atom, CeKind,
    ContrastiveExplanation, ContrastiveProblem, ProblemError,
};
use cex_core::kb::{parse_kb, Assertion, Concept, Individual};
use std::collections::BTreeMap;

fn problem(text: &str, concept: &str, fact: &str, foil: &str) -> ContrastiveProblem {
    ContrastiveProblem::new(parse_kb(text).unwrap(), Concept::atomic(concept), fact.into(), foil.into()).unwrap()
}

fn running() -> ContrastiveProblem {
    problem(include_str!("../fixtures/running.kb"), "Interviewed", "alice", "bob")
}

fn offer() -> ContrastiveProblem {
    problem(include_str!("../fixtures/offer.kb"), "Offered", "alice", "bob")
}

fn evidence(pairs: &[(&str, Individual)]) -> BTreeMap<String, Individual> {
    pairs.iter().map(|(x, i)| (x.to_string(), i.clone())).collect()
}

fn e1() -> ContrastiveExplanation {
    ContrastiveExplanation {
        vars: vec!["x".into(), "y".into(), "z".into()],
        q_com: [Atom::role("publishedAt", "x", "y")].into(),
        q_diff: [Atom::class("Journal", "y"), Atom::role("hasFunding", "x", "z")].into(),
        fact_evidence: evidence(&[("x", "alice".into()), ("y", "aij".into()), ("z", "nsf".into())]),
        foil_evidence: evidence(&[("x", "bob".into()), ("y", "aaai".into()), ("z", Individual::Fresh(0))]),
        conflict: Default::default(),
    }
}

fn e2() -> ContrastiveExplanation {
    ContrastiveExplanation {
        vars: vec!["x".into(), "y".into(), "z".into()],
        q_com: [Atom::role("publishedAt", "x", "y"), Atom::class("Group", "z")].into(),
        q_diff: [Atom::class("Journal", "y"), Atom::role("leads", "x", "z")].into(),
        fact_evidence: evidence(&[("x", "alice".into()), ("y", "aij".into()), ("z", "kr".into())]),
        foil_evidence: evidence(&[("x", "bob".into()), ("y", "aaai".into()), ("z", "kr".into())]),
        conflict: [Assertion::class("PostDoc", "bob")].into(),
    }
}

fn single(com: &[&str], diff: &[&str]) -> ContrastiveExplanation {
    ContrastiveExplanation {
        vars: vec!["x".into()],
        q_com: com.iter().map(|n| Atom::class(n, "x")).collect(),
        q_diff: diff.iter().map(|n| Atom::class(n, "x")).collect(),
        fact_evidence: evidence(&[("x", "alice".into())]),
        foil_evidence: evidence(&[("x", "bob".into())]),
        conflict: Default::default(),
    }
}

#[test]
fn running_e1_is_valid_and_syntactic() {
    let report = validate_ce(&running(), &e1());
    assert!(report.is_valid(), "{:?}", report.failures());
    assert_eq!(classify_ce(&running(), &e1()), Ok(CeKind::Syntactic));
}

#[test]
fn trivial_explanation_is_valid() {
    let report = validate_ce(&running(), &single(&[], &["Interviewed"]));
    assert!(report.is_valid(), "{:?}", report.failures());
}

#[test]
fn redundant_atom_fails_c4() {
    let mut e = e1();
    e.vars.push("w".into());
    e.q_com.insert(Atom::class("Group", "w"));
    e.fact_evidence.insert("w".into(), "kr".into());
    e.foil_evidence.insert("w".into(), "kr".into());
    let report = validate_ce(&running(), &e);
    assert!(report.is_candidate());
    assert!(!report.c4);
    assert_eq!(report.c4_witness, Some(Atom::class("Group", "w")));
}

#[test]
fn conflict_example_is_valid_under_bprime() {
    let p = problem(include_str!("../fixtures/running_bprime.kb"), "Interviewed", "alice", "bob");
    let report = validate_ce(&p, &e2());
    assert!(report.is_valid(), "{:?}", report.failures());
    let mut without = e2();
    without.conflict.clear();
    let report = validate_ce(&p, &without);
    assert!(!report.c5);
}

#[test]
fn conflict_set_must_be_minimal() {
    let p = problem(include_str!("../fixtures/running_bprime.kb"), "Interviewed", "alice", "bob");
    let mut e = e2();
    e.conflict.insert(Assertion::class("Journal", "aij"));
    let report = validate_ce(&p, &e);
    assert!(!report.c5);
    assert_eq!(report.c5_witness, Some(Assertion::class("Journal", "aij")));
}

#[test]
fn offer_explanations() {
    let p = offer();
    let e3 = single(&[], &["Prof", "Nominee"]);
    let e4 = single(&["Qualified"], &["Nominee"]);
    assert_eq!(classify_ce(&p, &e3), Ok(CeKind::Syntactic));
    assert_eq!(classify_ce(&p, &e4), Ok(CeKind::Semantic));
}

#[test]
fn difference_already_holding_fails_d() {
    let p = offer();
    let e = single(&[], &["Qualified", "Nominee"]);
    let report = validate_ce(&p, &e);
    assert!(!report.d);
}

#[test]
fn problem_invariants_are_checked() {
    let kb = parse_kb(include_str!("../fixtures/running.kb")).unwrap();
    let err = ContrastiveProblem::new(kb.clone(), Concept::atomic("Interviewed"), "bob".into(), "alice".into());
    assert!(matches!(err, Err(ProblemError::FactNotInstance { .. })));
    let err = ContrastiveProblem::new(kb, Concept::atomic("Qualified"), "alice".into(), "alice".into());
    assert!(matches!(err, Err(ProblemError::FoilIsInstance { .. })));
}

#[test]
fn homomorphisms() {
    let e = e1();
    let identity = find_homomorphism(&e, &e).unwrap();
    assert!(identity.iter().all(|(x, y)| x == y));
    assert!(find_homomorphism(&e, &single(&[], &["Interviewed"])).is_none());
    assert!(embeds(&e, &e2()).is_none());
}

#[test]
fn json_round_trip_and_schema() {
    let e = e1();
    let json = ce_to_json(&e);
    assert_eq!(json["foil_evidence"]["z"], serde_json::json!({"fresh": 0}));
    assert_eq!(json["q_com"][0], serde_json::json!({"kind": "role", "name": "publishedAt", "args": ["x", "y"]}));
    assert_eq!(json["q_diff"][0], serde_json::json!({"kind": "class", "name": "Journal", "arg": "y"}));
    assert_eq!(ce_from_json(&json.to_string()).unwrap(), e);

    let conflict = ce_to_json(&e2());
    assert_eq!(conflict["conflict"], serde_json::json!([{"kind": "class", "name": "PostDoc", "arg": "bob"}]));
    assert_eq!(ce_from_json(&conflict.to_string()).unwrap(), e2());
    assert!(ce_from_json("{\"vars\": []}").is_err());
}

#[test]
fn text_rendering_lists_every_atom() {
    let text = render_text(&e1());
    assert!(text.contains("publishedAt(alice, aij)"));
    assert!(text.contains("hasFunding(bob, _fresh:0)"));
    assert!(text.contains("conflict:\n  (none)"));
}
