use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ils_core::io::{
    outline_from_json, outline_to_json, read_square, square_to_grid, square_to_json, to_pretty,
    trace_to_json, verdict_to_json, violation_to_json, ParseError,
};
use ils_core::necessary::{check_necessary, decide_with, DecideOptions, Status};
use ils_core::outline::reduce_modulo;
use ils_core::solver::{brute_force_ils, SearchOutcome, DEFAULT_BUDGET};
use ils_core::{Composition, Error};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "ils", version, about = "Latin squares with prescribed disjoint subsquares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Build ILS(order; parts) or explain why it does not exist.
    Construct {
        #[arg(long)]
        parts: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Print the construction trace to stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long, env = "ILS_NODE_BUDGET")]
        budget: Option<u64>,
    },
    /// Check a square file (JSON or grid) for the given subsquares.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the subsquares listed in the file.
        #[arg(long)]
        parts: Option<String>,
    },
    /// Print the existence verdict as JSON.
    Decide {
        #[arg(long)]
        parts: String,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 7)]
        oracle_bound: usize,
        #[arg(long, env = "ILS_NODE_BUDGET")]
        budget: Option<u64>,
    },
    /// Reduce a square modulo row, column and symbol partitions.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        r: Option<String>,
    },
    /// Lift an outline file to a latin square.
    Lift {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exhaustive search for ILS(order; parts).
    Search {
        #[arg(long)]
        parts: String,
        #[arg(long)]
        order: usize,
        #[arg(long, env = "ILS_NODE_BUDGET")]
        budget: Option<u64>,
    },
    /// Scan the four-set necessary condition.
    Check {
        #[arg(long)]
        parts: String,
        #[arg(long)]
        order: usize,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Partition(_) | Error::Shape(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn parse_list(text: &str, flag: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("{flag}: `{t}` is not a nonnegative integer")))
        })
        .collect()
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--in {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Internal(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn construct(
    parts: &str,
    order: usize,
    out: Option<&PathBuf>,
    format: Format,
    trace: bool,
    budget: u64,
) -> Outcome {
    let parts = parse_list(parts, "--parts")?;
    let opts = DecideOptions {
        budget,
        ..DecideOptions::default()
    };
    let verdict = decide_with(&parts, order, &opts)?;
    match verdict.status {
        Status::Exists => {
            let square = verdict.witness.expect("exists carries a witness");
            let text = match format {
                Format::Json => to_pretty(&square_to_json(&square, &square.subsquare_specs(&parts))),
                Format::Grid => square_to_grid(&square),
            };
            if trace {
                if let Some(t) = &verdict.trace {
                    eprint!("{}", to_pretty(&trace_to_json(t)));
                }
            }
            emit(&text, out)?;
            Ok(EXIT_OK)
        }
        Status::NotExists => {
            // Prefer the inequality certificate when the scan finds one.
            let certificate = match check_necessary(&parts, order) {
                Ok(Some(v)) => violation_to_json(&v),
                _ => serde_json::to_value(verdict.certificate).expect("plain data"),
            };
            eprintln!("ILS({order}; {parts:?}) does not exist ({})", verdict.basis);
            print!(
                "{}",
                to_pretty(&json!({"status": "not_exists", "certificate": certificate}))
            );
            Ok(EXIT_INFEASIBLE)
        }
        Status::Unknown => {
            eprintln!("undecided: {}", verdict.basis);
            Ok(EXIT_UNDECIDED)
        }
    }
}

fn verify(input: &PathBuf, parts: Option<&str>) -> Outcome {
    let (square, specs) = read_square(&read(input)?)?;
    let report = match parts {
        Some(p) => {
            let parts = parse_list(p, "--parts")?;
            square.verify_ils(&parts).map_err(|e| e.to_string())
        }
        None => square.validate().map_err(|e| e.to_string()).and_then(|()| {
            match specs.iter().position(|s| !s.holds_in(&square)) {
                Some(t) => Err(format!("listed subsquare {} is not a latin subsquare", t + 1)),
                None => Ok(()),
            }
        }),
    };
    match report {
        Ok(()) => {
            println!("ok");
            Ok(EXIT_OK)
        }
        Err(e) => {
            println!("fail: {e}");
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

fn composition(text: &str, flag: &str) -> Result<Composition, Failure> {
    Composition::new(parse_list(text, flag)?).map_err(|e| Failure::Usage(format!("{flag}: {e}")))
}

fn reduce(input: &PathBuf, p: &str, q: Option<&str>, r: Option<&str>) -> Outcome {
    let (square, _) = read_square(&read(input)?)?;
    square
        .validate()
        .map_err(|e| Failure::Usage(format!("--in: not a latin square: {e}")))?;
    let p = composition(p, "--p")?;
    let q = q.map_or(Ok(p.clone()), |t| composition(t, "--q"))?;
    let r = r.map_or(Ok(p.clone()), |t| composition(t, "--r"))?;
    let o = reduce_modulo(&square, &p, &q, &r)?;
    print!("{}", to_pretty(&outline_to_json(&o)));
    Ok(EXIT_OK)
}

fn lift(input: &PathBuf) -> Outcome {
    let o = outline_from_json(&read(input)?)?;
    if let Err(v) = o.validate(None) {
        return Err(Failure::Usage(format!("--in: invalid outline: {v}")));
    }
    let square = o.lift()?;
    let mut specs = Vec::new();
    if o.is_square() {
        for i in 0..o.rows() {
            let h = o.p().parts()[i];
            if o.get(i, i, i) == (h * h) as u64 {
                specs.push(ils_core::SubsquareSpec::diagonal(o.p().offset(i), h));
            }
        }
    }
    print!("{}", to_pretty(&square_to_json(&square, &specs)));
    Ok(EXIT_OK)
}

fn search(parts: &str, order: usize, budget: u64) -> Outcome {
    let parts = parse_list(parts, "--parts")?;
    let searched = brute_force_ils(&parts, order, budget);
    let (status, code, witness) = match searched.outcome {
        SearchOutcome::Found(sq) => ("exists", EXIT_OK, Some(square_to_json(&sq, &sq.subsquare_specs(&parts)))),
        SearchOutcome::Infeasible => ("not_exists", EXIT_INFEASIBLE, None),
        SearchOutcome::Timeout => ("unknown", EXIT_UNDECIDED, None),
    };
    let mut v = json!({"status": status, "nodes": searched.nodes});
    if let Some(w) = witness {
        v["witness"] = w;
    }
    print!("{}", to_pretty(&v));
    Ok(code)
}

fn check(parts: &str, order: usize) -> Outcome {
    let parts = parse_list(parts, "--parts")?;
    let (v, code) = match check_necessary(&parts, order)? {
        None => (json!({"status": "pass"}), EXIT_OK),
        Some(cert) => (
            json!({"status": "violation", "certificate": violation_to_json(&cert)}),
            EXIT_INFEASIBLE,
        ),
    };
    print!("{}", to_pretty(&v));
    Ok(code)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct {
            parts,
            order,
            out,
            format,
            trace,
            budget,
        } => construct(&parts, order, out.as_ref(), format, trace, budget.unwrap_or(DEFAULT_BUDGET)),
        Command::Verify { input, parts } => verify(&input, parts.as_deref()),
        Command::Decide {
            parts,
            order,
            oracle_bound,
            budget,
        } => {
            let list = parse_list(&parts, "--parts")?;
            let opts = DecideOptions {
                oracle_bound,
                budget: budget.unwrap_or(DEFAULT_BUDGET),
            };
            let verdict = decide_with(&list, order, &opts)?;
            let mut v: Value = verdict_to_json(&verdict, &list);
            if let (Some(t), Some(obj)) = (&verdict.trace, v.as_object_mut()) {
                obj.insert("trace".into(), trace_to_json(t));
            }
            print!("{}", to_pretty(&v));
            Ok(EXIT_OK)
        }
        Command::Reduce { input, p, q, r } => reduce(&input, &p, q.as_deref(), r.as_deref()),
        Command::Lift { input } => lift(&input),
        Command::Search {
            parts,
            order,
            budget,
        } => search(&parts, order, budget.unwrap_or(DEFAULT_BUDGET)),
        Command::Check { parts, order } => check(&parts, order),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
