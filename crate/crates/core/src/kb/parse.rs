use super::{Assertion, Axiom, Concept, ConceptName, Gci, Individual, KnowledgeBase, RoleName};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: `{construct}` is not an EL⊥ construct")]
    RejectedConstruct {
        line: usize,
        column: usize,
        construct: String,
    },
}

/// Operators from more expressive logics that are recognised only to be rejected.
const REJECTED: &[&str] = &[
    "not", "all", "only", "inverse", "inv", "min", "max", "exactly", "oneOf", "hasSelf", "value",
];

#[derive(Debug, Clone)]
struct Term {
    head: String,
    args: Option<Vec<Term>>,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    line_start: usize,
}

#[derive(Debug, PartialEq)]
enum Tok {
    Ident(String),
    Open,
    Close,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            text,
            line,
            line_start: 0,
        }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.text[self.line_start..offset].chars().count() + 1,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&(offset, ch)) = self.chars.peek() {
            match ch {
                '#' => break,
                '(' => {
                    self.chars.next();
                    out.push((Tok::Open, offset));
                }
                ')' => {
                    self.chars.next();
                    out.push((Tok::Close, offset));
                }
                ',' => {
                    self.chars.next();
                }
                c if c.is_whitespace() => {
                    self.chars.next();
                }
                c if c.is_ascii_alphanumeric() || "_./-".contains(c) => {
                    let mut ident = String::new();
                    while let Some(&(_, c)) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || "_./-".contains(c) {
                            ident.push(c);
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    if !ident.starts_with(|c: char| c.is_ascii_alphabetic()) {
                        return Err(self.err(offset, format!("invalid name `{ident}`")));
                    }
                    out.push((Tok::Ident(ident), offset));
                }
                other => return Err(self.err(offset, format!("unexpected character `{other}`"))),
            }
        }
        Ok(out)
    }
}

struct TermParser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    text: &'a str,
    line: usize,
}

impl TermParser<'_> {
    fn column(&self, offset: usize) -> usize {
        self.text[..offset].chars().count() + 1
    }

    fn err_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(offset),
            message: message.into(),
        }
    }

    fn end_offset(&self) -> usize {
        self.text.len()
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (tok, offset) = match self.tokens.get(self.pos) {
            Some((tok, offset)) => (tok, *offset),
            None => return Err(self.err_at(self.end_offset(), "unexpected end of line")),
        };
        let head = match tok {
            Tok::Ident(name) => name.clone(),
            Tok::Open => return Err(self.err_at(offset, "expected a name, found `(`")),
            Tok::Close => return Err(self.err_at(offset, "expected a name, found `)`")),
        };
        self.pos += 1;
        let mut term = Term {
            head,
            args: None,
            line: self.line,
            column: self.column(offset),
        };
        if matches!(self.tokens.get(self.pos), Some((Tok::Open, _))) {
            self.pos += 1;
            let mut args = Vec::new();
            loop {
                match self.tokens.get(self.pos) {
                    Some((Tok::Close, _)) => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => args.push(self.term()?),
                    None => return Err(self.err_at(self.end_offset(), "missing `)`")),
                }
            }
            term.args = Some(args);
        }
        Ok(term)
    }
}

fn parse_term(text: &str, line: usize) -> Result<Option<Term>, ParseError> {
    let tokens = Lexer::new(text, line).tokens()?;
    if tokens.is_empty() {
        return Ok(None);
    }
    let mut parser = TermParser {
        tokens,
        pos: 0,
        text,
        line,
    };
    let term = parser.term()?;
    if let Some((_, offset)) = parser.tokens.get(parser.pos) {
        return Err(parser.err_at(*offset, "trailing input after axiom"));
    }
    Ok(Some(term))
}

fn syntax(term: &Term, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: term.line,
        column: term.column,
        message: message.into(),
    }
}

fn rejected(term: &Term) -> ParseError {
    ParseError::RejectedConstruct {
        line: term.line,
        column: term.column,
        construct: term.head.clone(),
    }
}

fn expect_name(term: &Term, what: &str) -> Result<String, ParseError> {
    if term.args.is_some() {
        return Err(syntax(term, format!("expected {what}, found `{}(...)`", term.head)));
    }
    Ok(term.head.clone())
}

fn expect_args<'t>(term: &'t Term, arity: usize) -> Result<&'t [Term], ParseError> {
    let args = term.args.as_deref().unwrap_or(&[]);
    if term.args.is_none() || args.len() != arity {
        return Err(syntax(
            term,
            format!("`{}` expects {arity} argument(s), found {}", term.head, args.len()),
        ));
    }
    Ok(args)
}

fn individual(term: &Term) -> Result<Individual, ParseError> {
    Ok(Individual::named(&expect_name(term, "an individual")?))
}

/// Interprets `term` as a concept. With `allow_or`, disjunctions are expanded
/// into a list of disjunct concepts (disjunctive normal form); otherwise a
/// disjunction is rejected.
fn disjuncts(term: &Term, allow_or: bool) -> Result<Vec<Concept>, ParseError> {
    let Some(args) = &term.args else {
        return Ok(vec![match term.head.as_str() {
            "Top" => Concept::Top,
            "Bottom" => Concept::Bottom,
            name => Concept::Atomic(ConceptName::new(name)),
        }]);
    };
    match term.head.as_str() {
        "and" => {
            if args.len() < 2 {
                return Err(syntax(term, "`and` needs at least two operands"));
            }
            let mut acc = vec![Vec::new()];
            for arg in args {
                let options = disjuncts(arg, allow_or)?;
                acc = acc
                    .into_iter()
                    .flat_map(|prefix: Vec<Concept>| {
                        options.iter().map(move |option| {
                            let mut next = prefix.clone();
                            next.push(option.clone());
                            next
                        })
                    })
                    .collect();
            }
            Ok(acc.into_iter().map(Concept::and).collect())
        }
        "some" => {
            let args = expect_args(term, 2)?;
            let role = RoleName::new(&expect_name(&args[0], "a role name")?);
            Ok(disjuncts(&args[1], allow_or)?
                .into_iter()
                .map(|filler| Concept::Existential(role.clone(), Box::new(filler)))
                .collect())
        }
        "or" if allow_or => {
            if args.len() < 2 {
                return Err(syntax(term, "`or` needs at least two operands"));
            }
            let mut out = Vec::new();
            for arg in args {
                out.extend(disjuncts(arg, allow_or)?);
            }
            Ok(out)
        }
        "or" => Err(rejected(term)),
        head if REJECTED.contains(&head) => Err(rejected(term)),
        head => Err(syntax(term, format!("unknown concept constructor `{head}`"))),
    }
}

fn concept(term: &Term) -> Result<Concept, ParseError> {
    Ok(disjuncts(term, false)?.pop().expect("one disjunct"))
}

fn axioms_of(term: &Term) -> Result<Vec<Axiom>, ParseError> {
    match term.head.as_str() {
        "SubClassOf" => {
            let args = expect_args(term, 2)?;
            let rhs = concept(&args[1])?;
            Ok(disjuncts(&args[0], true)?
                .into_iter()
                .map(|lhs| Axiom::Gci(Gci::new(lhs, rhs.clone())))
                .collect())
        }
        "ClassAssertion" => {
            let args = expect_args(term, 2)?;
            let name = expect_name(&args[0], "a concept name")?;
            if matches!(name.as_str(), "Top" | "Bottom") {
                return Err(syntax(&args[0], "assertions must use a concept name"));
            }
            Ok(vec![Axiom::Assertion(Assertion::Class(
                ConceptName::new(&name),
                individual(&args[1])?,
            ))])
        }
        "PropertyAssertion" => {
            let args = expect_args(term, 3)?;
            let role = expect_name(&args[0], "a role name")?;
            Ok(vec![Axiom::Assertion(Assertion::Role(
                RoleName::new(&role),
                individual(&args[1])?,
                individual(&args[2])?,
            ))])
        }
        head if REJECTED.contains(&head) => Err(rejected(term)),
        head => Err(syntax(term, format!("unknown axiom type `{head}`"))),
    }
}

/// Parses a knowledge base in the line-oriented text format.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut kb = KnowledgeBase::new();
    for (index, line) in text.lines().enumerate() {
        if let Some(term) = parse_term(line, index + 1)? {
            for axiom in axioms_of(&term)? {
                kb.add(axiom);
            }
        }
    }
    Ok(kb)
}

/// Parses a single concept, e.g. `and(Qualified some(publishedAt Journal))`.
pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    match parse_term(text, 1)? {
        Some(term) => concept(&term),
        None => Err(ParseError::Syntax {
            line: 1,
            column: 1,
            message: "empty concept".into(),
        }),
    }
}

/// Parses an assertion either in file syntax (`ClassAssertion(A a)`) or in
/// the short form `A(a)` / `r(a, b)`.
pub fn parse_assertion(text: &str) -> Result<Assertion, ParseError> {
    let term = parse_term(text, 1)?.ok_or_else(|| ParseError::Syntax {
        line: 1,
        column: 1,
        message: "empty assertion".into(),
    })?;
    if matches!(term.head.as_str(), "ClassAssertion" | "PropertyAssertion") {
        return match axioms_of(&term)?.pop() {
            Some(Axiom::Assertion(a)) => Ok(a),
            _ => unreachable!("assertion forms yield one assertion"),
        };
    }
    match term.args.as_deref() {
        Some([a]) => Ok(Assertion::Class(ConceptName::new(&term.head), individual(a)?)),
        Some([a, b]) => Ok(Assertion::Role(
            RoleName::new(&term.head),
            individual(a)?,
            individual(b)?,
        )),
        _ => Err(syntax(&term, "expected `A(a)` or `r(a, b)`")),
    }
}
