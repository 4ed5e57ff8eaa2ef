use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use datr::backbone::{compile, RuleSet};
use datr::crosscheck::run_crosscheck;
use datr::forward::{EvalError, EvalLimits, Evaluator, Query, Value};
use datr::reverse::reverse_query_traced;
use datr::syntax::{parse_source, validate_theory, Theory};

const EXIT_THEORY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CROSSCHECK: u8 = 3;

#[derive(Parser)]
#[command(
    name = "datr",
    version,
    about = "Forward and reverse queries over DATR theories"
)]
struct Cli {
    /// Theory source file.
    #[arg(long, global = true, value_name = "FILE")]
    theory: Option<PathBuf>,

    /// Longest path a sub-query or chart item may carry.
    #[arg(long, global = true, env = "DATR_MAX_PATH_LEN", default_value_t = 10,
          value_parser = clap::value_parser!(u32).range(1..))]
    max_path_len: u32,

    /// Deepest forward recursion allowed.
    #[arg(long, global = true, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    max_depth: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write a line-delimited JSON trace to stderr.
    #[arg(long, global = true, value_enum)]
    trace: Option<Trace>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Trace {
    Chart,
    Forward,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, validate and compile the theory.
    Check {
        /// Print the compiled backbone rules.
        #[arg(long)]
        dump_rules: bool,
    },
    /// Evaluate queries such as `Sheep:<orth plur>`.
    Query {
        #[arg(required = true)]
        queries: Vec<String>,
    },
    /// List the queries whose value is the given atom sequence.
    Rquery {
        /// Allow an empty value.
        #[arg(long)]
        empty: bool,
        atoms: Vec<String>,
    },
    /// Compare reverse answers with forward evaluation of every query up to
    /// a path length.
    Crosscheck {
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

struct Loaded {
    theory: Theory,
    rules: RuleSet,
}

fn load(cli: &Cli) -> Result<Loaded, ExitCode> {
    let Some(path) = &cli.theory else {
        eprintln!("error: --theory FILE is required");
        return Err(ExitCode::from(EXIT_USAGE));
    };
    let source = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_THEORY)
    })?;
    let theory = parse_source(&source).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_THEORY)
    })?;
    let rules = compile(&theory).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_THEORY)
    })?;
    Ok(Loaded { theory, rules })
}

fn emit_json(v: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit_trace<T: Serialize>(records: &[T]) {
    let mut err = io::stderr().lock();
    for r in records {
        let _ = writeln!(err, "{}", serde_json::to_string(r).expect("serializable"));
    }
}

fn cmd_check(cli: &Cli, dump_rules: bool) -> ExitCode {
    let loaded = match load(cli) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let th = &loaded.theory;
    let diagnostics = validate_theory(th);
    let paths: BTreeMap<String, Vec<String>> = th
        .node_index()
        .iter()
        .map(|(n, ps)| (n.to_string(), ps.iter().map(|p| p.to_string()).collect()))
        .collect();
    match cli.format {
        Format::Text => {
            println!(
                "{} nodes, {} sentences, {} rules",
                paths.len(),
                th.sentences().len(),
                loaded.rules.len()
            );
            for (n, ps) in &paths {
                println!("{n}: {}", ps.join(" "));
            }
            if dump_rules {
                for line in loaded.rules.bracket_listing() {
                    println!("{line}");
                }
            }
        }
        Format::Json => {
            let mut out = json!({
                "nodes": paths.len(),
                "sentences": th.sentences().len(),
                "rules": loaded.rules.len(),
                "paths": paths,
                "diagnostics": diagnostics,
            });
            if dump_rules {
                out["productions"] =
                    serde_json::to_value(loaded.rules.rules()).expect("serializable");
            }
            emit_json(&out);
        }
    }
    for d in &diagnostics {
        eprintln!("{d}");
    }
    ExitCode::SUCCESS
}

fn limits(cli: &Cli) -> EvalLimits {
    EvalLimits {
        max_path_len: cli.max_path_len as usize,
        max_depth: cli.max_depth as usize,
    }
}

fn cmd_query(cli: &Cli, texts: &[String]) -> ExitCode {
    let mut queries = Vec::new();
    for t in texts {
        match t.parse::<Query>() {
            Ok(q) => queries.push(q),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let loaded = match load(cli) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let mut ev = Evaluator::new(&loaded.theory, limits(cli));
    let mut records = Vec::new();
    for q in &queries {
        if cli.trace == Some(Trace::Forward) {
            ev = Evaluator::new(&loaded.theory, limits(cli)).with_trace();
        }
        let result = ev.eval(q);
        emit_trace(&ev.take_trace());
        match cli.format {
            Format::Text => match &result {
                Ok(v) => println!("{v}"),
                Err(EvalError::Undefined { .. }) => println!("UNDEFINED"),
                Err(EvalError::LimitExceeded { .. }) => println!("LIMIT"),
            },
            Format::Json => records.push(match result {
                Ok(v) => json!({"query": q.to_string(), "status": "Value", "value": v}),
                Err(e) => {
                    let mut r = serde_json::to_value(&e).expect("serializable");
                    r["query"] = json!(q.to_string());
                    r
                }
            }),
        }
    }
    if cli.format == Format::Json {
        emit_json(&records);
    }
    ExitCode::SUCCESS
}

fn cmd_rquery(cli: &Cli, empty: bool, atoms: &[String]) -> ExitCode {
    let value = Value::parse_words(&atoms.join(" "));
    if value.atoms().is_empty() && !empty {
        eprintln!("error: no value given (use --empty to query the empty value)");
        return ExitCode::from(EXIT_USAGE);
    }
    let loaded = match load(cli) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let tracing = cli.trace == Some(Trace::Chart);
    let run = reverse_query_traced(&loaded.rules, value.atoms(), limits(cli), tracing);
    if tracing {
        emit_trace(&run.trace);
        emit_trace(&run.chart);
    }
    let out = &run.outcome;
    if !out.unknown_atoms.is_empty() {
        let names: Vec<&str> = out.unknown_atoms.iter().map(|a| a.as_str()).collect();
        eprintln!("warning: no sentence produces {}", names.join(", "));
    }
    if out.suppressed > 0 {
        eprintln!(
            "warning: {} chart items exceeded the path bound of {}; answers may be incomplete",
            out.suppressed, cli.max_path_len
        );
    }
    match cli.format {
        Format::Text => {
            for a in &out.answers {
                println!("{a}");
            }
        }
        Format::Json => emit_json(&json!({"value": value, "outcome": out})),
    }
    ExitCode::SUCCESS
}

fn cmd_crosscheck(cli: &Cli, max_len: usize) -> ExitCode {
    let loaded = match load(cli) {
        Ok(l) => l,
        Err(code) => return code,
    };
    let report = run_crosscheck(&loaded.theory, &loaded.rules, max_len, limits(cli));
    match cli.format {
        Format::Text => {
            println!("enumerated: {}", report.enumerated);
            println!("defined: {}", report.defined);
            println!("undefined: {}", report.undefined);
            println!("excluded (limit): {}", report.excluded);
            println!("distinct values: {}", report.distinct_values);
            println!("suppressed items: {}", report.suppressed);
            println!("violations: {}", report.violations.len());
            for v in &report.violations {
                println!(
                    "  {} from {} for {:?}: got {}",
                    v.query,
                    v.answer,
                    v.value.to_string(),
                    v.got
                );
            }
            println!("misses: {}", report.misses.len());
            for m in &report.misses {
                println!("  {} = {:?}", m.query, m.value.to_string());
            }
        }
        Format::Json => emit_json(&report),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CROSSCHECK)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Check { dump_rules } => cmd_check(&cli, *dump_rules),
        Command::Query { queries } => cmd_query(&cli, queries),
        Command::Rquery { empty, atoms } => cmd_rquery(&cli, *empty, atoms),
        Command::Crosscheck { max_len } => cmd_crosscheck(&cli, *max_len),
    }
}
