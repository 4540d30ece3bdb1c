use crate::{BenchArgs, Cli, Command, CriterionArg, ExplainArgs, Format, GenCpArgs, JustifyArgs, KbArgs, OrderArg, ProblemArgs, VerifyArgs};
use cex_core::bench::{
    generate_cp, load_corpus, rng, run_bench, summarize, synthetic_kb, write_records_csv, write_summary_csv,
    BenchConfig, BenchError, KbFacts, SyntheticParams, FOIL_RETRIES,
};
use cex_core::ce::{ce_from_json, ce_to_json, render_text, CeKind, ContrastiveProblem, ProblemError, Validator};
use cex_core::gen::{generate_ce, GenOptions, Mode};
use cex_core::justify::{all_justifications, Goal, JustificationQuery};
use cex_core::kb::{
    parse_assertion, parse_concept, parse_kb, render_concept, serialize_kb, Individual, KnowledgeBase,
};
use cex_core::oracle::{verify, Bounds, Criterion, OracleError, Order, Space};
use cex_core::reasoner::{is_consistent, materialize};
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    NotAProblem(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    SpaceTooLarge(String),
    #[error("the knowledge base is inconsistent")]
    Inconsistent,
    #[error("the explanation is not valid: {0}")]
    InvalidCe(String),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::NotAProblem(_) => 2,
            Failure::Parse(_) => 3,
            Failure::SpaceTooLarge(_) => 4,
            Failure::Inconsistent => 5,
            Failure::InvalidCe(_) => 6,
            Failure::Usage(_) => 64,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::Io(err.to_string())
    }
}

impl From<BenchError> for Failure {
    fn from(err: BenchError) -> Self {
        match err {
            BenchError::Corpus { .. } => Failure::Parse(err.to_string()),
            BenchError::NoFoil => Failure::NotAProblem(err.to_string()),
            BenchError::InconsistentKb => Failure::Inconsistent,
            other => Failure::Io(other.to_string()),
        }
    }
}

fn format(cli: &Cli, allowed: &[Format], default: Format) -> Result<Format, Failure> {
    match cli.output {
        None => Ok(default),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::Usage(format!("--output {f:?} is not supported here").to_lowercase())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    parse_kb(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_problem(args: &ProblemArgs) -> Result<ContrastiveProblem, Failure> {
    let kb = load_kb(&args.kb)?;
    let concept = parse_concept(&args.concept).map_err(|e| Failure::Parse(format!("concept: {e}")))?;
    if !is_consistent(&kb) {
        return Err(Failure::Inconsistent);
    }
    ContrastiveProblem::new(kb, concept, Individual::named(&args.fact), Individual::named(&args.foil)).map_err(|e| {
        Failure::NotAProblem(match e {
            ProblemError::FactNotInstance { .. } | ProblemError::FoilIsInstance { .. } => e.to_string(),
        })
    })
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Explain(args) => explain(cli, args),
        Command::Verify(args) => verify_cmd(cli, args),
        Command::Materialize(args) => materialize_cmd(cli, args),
        Command::Justify(args) => justify(cli, args),
        Command::GenCp(args) => gen_cp(cli, args),
        Command::Bench(args) => bench(cli, args),
    }
}

fn explain(cli: &Cli, args: &ExplainArgs) -> Result<(), Failure> {
    let format = format(cli, &[Format::Json, Format::Text], Format::Json)?;
    let p = load_problem(&args.problem)?;
    let mode = if args.full { Mode::Full } else { Mode::Refined };
    let options = GenOptions { mode, semantic: args.semantic, fresh_budget: args.fresh_budget };
    let e = generate_ce(&p, &options).map_err(|e| Failure::NotAProblem(e.to_string()))?;
    match format {
        Format::Text => emit(&render_text(&e)),
        _ => emit(&pretty(&ce_to_json(&e))),
    }
}

fn verify_cmd(cli: &Cli, args: &VerifyArgs) -> Result<(), Failure> {
    let format = format(cli, &[Format::Json, Format::Text], Format::Json)?;
    let p = load_problem(&args.problem)?;
    let e = ce_from_json(&read(&args.ce)?).map_err(|e| Failure::Parse(format!("{}: {e}", args.ce.display())))?;
    let report = Validator::new(&p).validate(&e);
    let validity = json!({
        "well_formed": report.well_formed,
        "c1": report.c1(),
        "c2": report.c2,
        "c3": report.c3,
        "c4": report.c4,
        "c5": report.c5,
        "d": report.d,
    });
    let kind = match report.kind {
        CeKind::Syntactic => "syntactic",
        CeKind::Semantic => "semantic",
    };
    if !report.is_valid() {
        let payload = json!({ "valid": validity, "kind": kind, "optimal": null, "witness": null });
        emit(&pretty(&payload))?;
        return Err(Failure::InvalidCe(report.failures().join(", ")));
    }
    let criterion = match args.criterion {
        CriterionArg::Diff => Criterion::Difference,
        CriterionArg::Conflict => Criterion::Conflict,
        CriterionArg::Commonality => Criterion::Commonality,
    };
    let order = match args.mode {
        OrderArg::Subset => Order::Subset,
        OrderArg::Card => Order::Cardinality,
    };
    let bounds = Bounds { max_fresh: args.max_fresh, max_atoms: args.max_atoms };
    let verdict = verify(&p, &e, criterion, order, &bounds).map_err(|err| match err {
        OracleError::SpaceTooLarge(m) => Failure::SpaceTooLarge(m),
        OracleError::InconsistentKb => Failure::Inconsistent,
    })?;
    let space = match verdict.space {
        Space::Syntactic => "syntactic",
        Space::All => "all",
    };
    match format {
        Format::Text => {
            let mut out = format!(
                "valid: yes ({kind})\noptimal: {} within {} explanations (max fresh {}, max atoms {}, {space} space)\n",
                if verdict.optimal { "yes" } else { "no" },
                verdict.compared,
                bounds.max_fresh,
                bounds.max_atoms,
            );
            if let Some(w) = &verdict.witness {
                out.push_str("witness:\n");
                out.push_str(&render_text(w));
            }
            emit(&out)
        }
        _ => {
            let payload = json!({
                "valid": validity,
                "kind": kind,
                "criterion": format!("{:?}", args.criterion).to_lowercase(),
                "mode": format!("{:?}", args.mode).to_lowercase(),
                "optimal": verdict.optimal,
                "witness": verdict.witness.as_ref().map(ce_to_json),
                "space": space,
                "bounds": { "max_fresh": bounds.max_fresh, "max_atoms": bounds.max_atoms },
                "compared": verdict.compared,
            });
            emit(&pretty(&payload))
        }
    }
}

fn materialize_cmd(cli: &Cli, args: &KbArgs) -> Result<(), Failure> {
    let format = format(cli, &[Format::Json, Format::Text], Format::Text)?;
    let kb = load_kb(&args.kb)?;
    let abox = materialize(&kb).map_err(|_| Failure::Inconsistent)?;
    match format {
        Format::Json => emit(&pretty(&json!(abox.iter().map(|a| a.to_string()).collect::<Vec<_>>()))),
        _ => {
            let extended = KnowledgeBase::from_parts(Vec::new(), abox);
            emit(&serialize_kb(&extended).map_err(|e| Failure::Io(e.to_string()))?)
        }
    }
}

fn justify(cli: &Cli, args: &JustifyArgs) -> Result<(), Failure> {
    let format = format(cli, &[Format::Json, Format::Text], Format::Text)?;
    let kb = load_kb(&args.kb)?;
    let goal = if let Some(text) = &args.assertion {
        Goal::Assertion(parse_assertion(text).map_err(|e| Failure::Parse(format!("assertion: {e}")))?)
    } else if let Some(text) = &args.concept {
        let concept = parse_concept(text).map_err(|e| Failure::Parse(format!("concept: {e}")))?;
        let individual = args.individual.as_deref().expect("clap requires --individual");
        Goal::Instance(concept, Individual::named(individual))
    } else {
        Goal::Inconsistency
    };
    if !matches!(goal, Goal::Inconsistency) && !is_consistent(&kb) {
        return Err(Failure::Inconsistent);
    }
    let query = JustificationQuery::abox(&kb, goal.clone());
    let limit = if args.all { args.limit } else { 1 };
    let found = all_justifications(&query, limit).map_err(|e| Failure::NotAProblem(e.to_string()))?;
    let sets: Vec<Vec<String>> = found
        .sets
        .iter()
        .map(|j| j.iter().filter_map(|a| a.as_assertion()).map(|a| a.to_string()).collect())
        .collect();
    match format {
        Format::Json => emit(&pretty(&json!({
            "goal": goal.to_string(),
            "justifications": sets,
            "truncated": args.all && found.truncated,
        }))),
        _ => {
            let blocks: Vec<String> = sets.iter().map(|j| j.join("\n")).collect();
            emit(&blocks.join("\n\n"))
        }
    }
}

fn gen_cp(cli: &Cli, args: &GenCpArgs) -> Result<(), Failure> {
    let format = format(cli, &[Format::Json, Format::Text], Format::Json)?;
    let kb = load_kb(&args.kb)?;
    let facts = KbFacts::new(&kb)?;
    let mut r = rng(cli.seed);
    let mut lines = Vec::new();
    for _ in 0..args.count {
        let p = generate_cp(&kb, &facts, &mut r, FOIL_RETRIES)?;
        let concept = render_concept(&p.concept);
        lines.push(match format {
            Format::Text => format!("--concept '{concept}' --fact {} --foil {}", p.fact, p.foil),
            _ => json!({ "concept": concept, "fact": p.fact.to_string(), "foil": p.foil.to_string() }).to_string(),
        });
    }
    emit(&lines.join("\n"))
}

fn bench(cli: &Cli, args: &BenchArgs) -> Result<(), Failure> {
    format(cli, &[Format::Csv], Format::Csv)?;
    let corpus = match (&args.corpus, args.synthetic) {
        (Some(dir), _) => load_corpus(dir)?,
        (None, Some(n)) => {
            let mut r = rng(cli.seed);
            (0..n).map(|i| (format!("synthetic{i}"), synthetic_kb(&SyntheticParams::default(), &mut r))).collect()
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let config = BenchConfig {
        runs: args.runs,
        cps: args.cps,
        timeout: Duration::from_secs(args.timeout),
        seed: cli.seed,
        jobs: args.jobs,
        options: GenOptions {
            mode: if args.full { Mode::Full } else { Mode::Refined },
            semantic: args.semantic,
            fresh_budget: None,
        },
        strip_entailed: args.strip_entailed,
    };
    let records = run_bench(&corpus, &config);
    match &args.out {
        Some(path) => write_records_csv(&records, std::fs::File::create(path)?)?,
        None => write_records_csv(&records, std::io::stdout().lock())?,
    }
    if let Some(path) = &args.summary {
        write_summary_csv(&summarize(&records), std::fs::File::create(path)?)?;
    }
    Ok(())
}
