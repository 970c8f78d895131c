use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mvf_core::checks;
use mvf_core::dot::to_dot;
use mvf_core::morse::{self, EnumerateOptions};
use mvf_core::oracle::{self, OracleBudget};
use mvf_core::{AnalysisDocument, Dynamics, LabelRelation, MorseFamily};

mod report;

use report::{family_json, relation_json, violations_json};

/// Morse decompositions of combinatorial multivector fields.
#[derive(Parser)]
#[command(name = "mvf", version, about)]
struct Cli {
    /// Worker threads for the parallel parts of the analysis.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Cross-check the fast paths against the brute-force oracles.
    #[arg(long, global = true)]
    oracle: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Analysis document (JSON); `-` reads standard input.
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex, the field and any families.
    Validate(Input),
    /// Betti numbers and criticality of every multivector.
    Criticality(Input),
    /// Minimal Morse decomposition and its Conley model.
    Morse(Input),
    /// Check a named family as a predecomposition.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        family: String,
        /// Also require saturation and an antisymmetric flow preorder.
        #[arg(long)]
        decomposition: bool,
    },
    /// Pool-minimal Morse predecompositions.
    Enumerate {
        #[command(flatten)]
        input: Input,
        /// Keep only families with all members saturated.
        #[arg(long)]
        saturated: bool,
        #[arg(long, default_value_t = 1000)]
        max_families: usize,
    },
    /// Condense a predecomposition into a Morse decomposition.
    Consolidate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        family: String,
        /// Use the strongly connected classes of the induced digraph instead
        /// of the document's partition and preorder.
        #[arg(long)]
        by_scc: bool,
    },
    /// Graphviz digraph of the Morse order, or of a family's induced digraph.
    ExportDot {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        no_loops: bool,
    },
}

impl Command {
    fn input(&self) -> &Input {
        match self {
            Command::Validate(i) | Command::Criticality(i) | Command::Morse(i) => i,
            Command::Verify { input, .. }
            | Command::Enumerate { input, .. }
            | Command::Consolidate { input, .. }
            | Command::ExportDot { input, .. } => input,
        }
    }
}

/// Failure that stops a command before it has an answer.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

enum Output {
    Json(Value),
    Text(String),
}

struct Outcome {
    output: Output,
    passed: bool,
}

impl Outcome {
    fn json(value: Value, passed: bool) -> Self {
        Outcome {
            output: Output::Json(value),
            passed,
        }
    }
}

fn read_document(input: &Input) -> Result<AnalysisDocument, InputError> {
    let text = if input.input.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(&input.input).map_err(|e| InputError(format!("{}: {e}", input.input.display())))?
    };
    Ok(AnalysisDocument::parse(&text)?)
}

fn named_family<'a>(doc: &'a AnalysisDocument, name: &str) -> Result<&'a MorseFamily, InputError> {
    doc.family(name).ok_or_else(|| {
        let known: Vec<&str> = doc.families().iter().map(|(n, _)| n.as_str()).collect();
        InputError(format!("/families: no family named `{name}` (have: {})", known.join(", ")))
    })
}

fn run(cli: &Cli) -> Result<Outcome, InputError> {
    let doc = read_document(cli.command.input())?;
    let field = doc.field();
    let complex = field.complex();
    let dynamics = Dynamics::new(field);

    let mut outcome = match &cli.command {
        Command::Validate(_) => {
            let families: serde_json::Map<String, Value> = doc
                .families()
                .iter()
                .map(|(name, fam)| (name.clone(), json!(fam.labels())))
                .collect();
            Outcome::json(
                json!({
                    "valid": true,
                    "cells": complex.len(),
                    "dimension": complex.dimension(),
                    "multivectors": field.len(),
                    "critical": (0..field.len()).filter(|&i| field.is_critical(i)).count(),
                    "families": families,
                }),
                true,
            )
        }
        Command::Criticality(_) => {
            let rows: Vec<Value> = (0..field.len())
                .map(|i| {
                    json!({
                        "multivector": field.label(i),
                        "cells": complex.names(field.multivector(i)),
                        "betti": field.betti(i),
                        "critical": field.is_critical(i),
                    })
                })
                .collect();
            Outcome::json(json!({ "multivectors": rows }), true)
        }
        Command::Morse(_) => {
            let (family, order) = morse::minimal_morse_decomposition(&dynamics)?;
            let conley: Vec<Value> = family
                .iter()
                .map(|(label, set)| {
                    let betti = complex.relative_betti(set).unwrap_or_default();
                    json!({ "label": label, "conley_betti": betti })
                })
                .collect();
            Outcome::json(
                json!({
                    "morse_sets": family_json(complex, &family),
                    "order": relation_json(&order),
                    "conley_model": conley,
                    "dot": to_dot("morse", &order, false),
                }),
                true,
            )
        }
        Command::Verify {
            family: name,
            decomposition,
            ..
        } => {
            let family = named_family(&doc, name)?;
            let report = if *decomposition {
                morse::is_morse_decomposition(&dynamics, family)?
            } else {
                morse::verify_predecomposition(&dynamics, family)?
            };
            let mut out = json!({
                "family": name,
                "check": if *decomposition { "decomposition" } else { "predecomposition" },
                "passed": report.passed(),
                "violations": violations_json(complex, &report.violations),
            });
            let mut passed = report.passed();
            if report.passed() || *decomposition {
                if let Ok(links) = morse::induced_digraph(&dynamics, family) {
                    out["induced_digraph"] = relation_json(&links);
                }
            }
            if cli.oracle && !*decomposition {
                match oracle::brute_verify_predecomposition(field, family, OracleBudget::fixtures()) {
                    Ok(brute) => {
                        out["oracle_verdict"] = json!(brute);
                        passed &= brute == report.passed();
                    }
                    Err(e) => out["oracle_verdict"] = json!(format!("skipped: {e}")),
                }
            }
            Outcome::json(out, passed)
        }
        Command::Enumerate {
            saturated,
            max_families,
            ..
        } => {
            let opts = EnumerateOptions {
                require_saturated: *saturated,
                max_families: *max_families,
                ..EnumerateOptions::default()
            };
            let found = morse::enumerate_predecompositions(&dynamics, &opts)?;
            let families: Vec<Value> = found
                .iter()
                .map(|f| {
                    let links = morse::induced_digraph(&dynamics, f).map(|l| relation_json(&l)).unwrap_or(Value::Null);
                    json!({ "members": family_json(complex, f), "induced_digraph": links })
                })
                .collect();
            Outcome::json(json!({ "count": found.len(), "families": families }), true)
        }
        Command::Consolidate {
            family: name, by_scc, ..
        } => {
            let family = named_family(&doc, name)?;
            let result = if *by_scc {
                morse::consolidate_by_scc(&dynamics, family)
            } else {
                let partition = doc
                    .partition()
                    .ok_or_else(|| InputError("/partition: required without --by-scc".into()))?;
                let preorder = match doc.preorder_for(family) {
                    Some(p) => p?,
                    None => {
                        let links = morse::induced_digraph(&dynamics, family)?;
                        morse::flow_preorder(family, &links)
                    }
                };
                morse::consolidate(&dynamics, family, partition, &preorder)
            };
            match result {
                Ok((out, order)) => Outcome::json(
                    json!({
                        "family": name,
                        "consolidated": true,
                        "morse_sets": family_json(complex, &out),
                        "order": relation_json(&order),
                    }),
                    true,
                ),
                Err(e @ morse::MorseError::CycleBudgetExceeded(_)) => return Err(e.into()),
                Err(e) => Outcome::json(
                    json!({ "family": name, "consolidated": false, "error": e.to_string() }),
                    false,
                ),
            }
        }
        Command::ExportDot {
            family, no_loops, ..
        } => {
            let (name, relation): (&str, LabelRelation) = match family {
                Some(name) => (name, morse::induced_digraph(&dynamics, named_family(&doc, name)?)?),
                None => ("morse", morse::minimal_morse_decomposition(&dynamics)?.1),
            };
            Outcome {
                output: Output::Text(to_dot(name, &relation, !*no_loops)),
                passed: true,
            }
        }
    };

    if cli.oracle {
        let mut report = checks::cross_check(field, 0, OracleBudget::fixtures());
        if let Ok(r) = &mut report {
            r.merge(checks::round_trips(field, 0).map_err(InputError::from)?);
        }
        let summary = match report {
            Ok(r) => {
                outcome.passed &= r.passed();
                json!({ "checks": r.checks, "disagreements": r.findings })
            }
            Err(e) => json!({ "skipped": e.to_string() }),
        };
        match &mut outcome.output {
            Output::Json(v) => v["oracle"] = summary,
            Output::Text(_) => {
                if !outcome.passed {
                    eprintln!("oracle: {summary}");
                }
            }
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            let text = match outcome.output {
                Output::Json(v) => {
                    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
                    s.push('\n');
                    s
                }
                Output::Text(s) => s,
            };
            if io::stdout().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
