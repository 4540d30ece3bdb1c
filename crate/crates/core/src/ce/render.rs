use super::{Atom, ContrastiveExplanation};
use std::fmt::Write;

fn instance(atom: &Atom, e: &ContrastiveExplanation, fact: bool) -> String {
    let evidence = if fact { &e.fact_evidence } else { &e.foil_evidence };
    atom.instantiate(evidence).map(|a| a.to_string()).unwrap_or_else(|| "?".into())
}

/// Human-readable rendering: one pattern atom per line with its fact and foil
/// instantiations side by side, then the conflict set.
pub fn render_text(e: &ContrastiveExplanation) -> String {
    let rows: Vec<(&str, Vec<[String; 3]>)> = [("commonality", &e.q_com), ("difference", &e.q_diff)]
        .into_iter()
        .map(|(title, atoms)| {
            let lines = atoms
                .iter()
                .map(|a| [a.to_string(), instance(a, e, true), instance(a, e, false)])
                .collect();
            (title, lines)
        })
        .collect();
    let mut widths = ["pattern".len(), "fact".len()];
    for (_, lines) in &rows {
        for line in lines {
            widths[0] = widths[0].max(line[0].chars().count());
            widths[1] = widths[1].max(line[1].chars().count());
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "  {:w0$}  {:w1$}  foil", "pattern", "fact", w0 = widths[0], w1 = widths[1]);
    for (title, lines) in rows {
        let _ = writeln!(out, "{title}:");
        if lines.is_empty() {
            out.push_str("  (none)\n");
        }
        for [pattern, fact, foil] in lines {
            let _ = writeln!(out, "  {pattern:w0$}  {fact:w1$}  {foil}", w0 = widths[0], w1 = widths[1]);
        }
    }
    out.push_str("conflict:\n");
    if e.conflict.is_empty() {
        out.push_str("  (none)\n");
    }
    for assertion in &e.conflict {
        let _ = writeln!(out, "  {assertion}");
    }
    out
}
