use super::{Assertion, Concept, Individual, KnowledgeBase};
use std::fmt::Write;
use thiserror::Error;

pub const HEADER: &str = "# cex knowledge base v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializationError {
    #[error("assertion `{0}` mentions a fresh individual; fresh names cannot be persisted")]
    FreshIndividual(Assertion),
}

pub fn render_concept(concept: &Concept) -> String {
    let mut out = String::new();
    write_concept(&mut out, concept);
    out
}

fn write_concept(out: &mut String, concept: &Concept) {
    match concept {
        Concept::Top => out.push_str("Top"),
        Concept::Bottom => out.push_str("Bottom"),
        Concept::Atomic(name) => out.push_str(name.as_str()),
        Concept::Conjunction(children) => {
            out.push_str("and(");
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_concept(out, child);
            }
            out.push(')');
        }
        Concept::Existential(role, filler) => {
            let _ = write!(out, "some({role} ");
            write_concept(out, filler);
            out.push(')');
        }
    }
}

fn named(individual: &Individual, assertion: &Assertion) -> Result<String, SerializationError> {
    match individual {
        Individual::Named(name) => Ok(name.to_string()),
        Individual::Fresh(_) => Err(SerializationError::FreshIndividual(assertion.clone())),
    }
}

/// Renders one assertion in file syntax.
pub fn render_assertion(assertion: &Assertion) -> Result<String, SerializationError> {
    Ok(match assertion {
        Assertion::Class(name, a) => format!("ClassAssertion({name} {})", named(a, assertion)?),
        Assertion::Role(role, a, b) => format!(
            "PropertyAssertion({role} {} {})",
            named(a, assertion)?,
            named(b, assertion)?
        ),
    })
}

/// Writes `kb` in the text format: a header line, then GCIs, then assertions,
/// each in canonical order.
pub fn serialize_kb(kb: &KnowledgeBase) -> Result<String, SerializationError> {
    let mut out = String::from(HEADER);
    out.push('\n');
    for gci in &kb.tbox {
        out.push_str("SubClassOf(");
        write_concept(&mut out, &gci.lhs);
        out.push(' ');
        write_concept(&mut out, &gci.rhs);
        out.push_str(")\n");
    }
    for assertion in &kb.abox {
        out.push_str(&render_assertion(assertion)?);
        out.push('\n');
    }
    Ok(out)
}
