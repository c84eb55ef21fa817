//! `twbetti`: twisted first Betti numbers of real line arrangements from JSON files.
//!
//! Exit codes: 0 success, 1 parse or I/O error, 2 local system rejected, 3 internal
//! consistency failure.

mod fuzz;
mod input;
mod render;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use twisted_betti::analysis::{analyze, AnalysisError, AnalysisOptions};
use twisted_betti::bounds::{beta_certificate, best_bound, line_bounds, sharp_pair_report, BoundsError};
use twisted_betti::homology::{h1, HomologyError};
use twisted_betti::local_system::{resonant_points, validate};
use twisted_betti::oracle::{oracle_h1_along, OracleError};
use twisted_betti::{Cyclo, Field};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Io(String),
    Usage(String),
    Admissibility(String),
    Consistency(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) | CliError::Usage(_) => 1,
            CliError::Admissibility(_) => 2,
            CliError::Consistency(_) | CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Io(m) => format!("I/O error: {m}"),
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Admissibility(m) => format!("local system rejected: {m}"),
            CliError::Consistency(m) => format!("consistency failure: {m}"),
            CliError::Internal(m) => format!("internal error: {m}"),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Admissibility(e) | AnalysisError::Homology(HomologyError::LocalSystem(e)) => {
                CliError::Admissibility(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        AnalysisError::from(e).into()
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::LocalSystem(e) => CliError::Admissibility(e.to_string()),
            BoundsError::Homology(e) => e.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::LocalSystem(e) => CliError::Admissibility(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "twbetti", version, about = "Twisted first Betti numbers of complexified real line arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Arrangement file (JSON).
    input: PathBuf,
    /// Seed for the random choices of coordinates; ARR_SEED overrides it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: census, relation matrix, h1, bounds, sharp pairs, oracle.
    H1 {
        #[command(flatten)]
        common: Common,
        /// Compute in double-precision complex numbers.
        #[arg(long)]
        float: bool,
        /// Skip the Fox-calculus cross-check.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Per-line bounds and neighbor certificates.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Only this line (0-based).
        #[arg(long)]
        line: Option<usize>,
    },
    /// Sharp pairs and the statements that depend on them.
    SharpPairs {
        #[command(flatten)]
        common: Common,
    },
    /// h1 from the fundamental group presentation, for each line sent to infinity.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Only decone along this line (0-based).
        #[arg(long)]
        line: Option<usize>,
    },
    /// Random instances checked against the oracle and every bound.
    Fuzz {
        #[arg(long, default_value_t = 6)]
        lines: usize,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only arrangements with a sharp pair.
        #[arg(long)]
        sharp_only: bool,
        /// Directory for counterexample files.
        #[arg(long, default_value = "fuzz-counterexamples")]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_lines: usize,
    },
    /// SVG of the normalized real picture.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Parse the file and check that the local system is admissible.
    Validate {
        input: PathBuf,
    },
}

fn seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var("ARR_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("ARR_SEED={v:?} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn emit(v: &Value) {
    print!("{}", report::to_string(v));
}

fn cmd_h1(common: &Common, float: bool, no_oracle: bool) -> Result<(), CliError> {
    let inp = input::read(&common.input)?;
    let opts = AnalysisOptions {
        seed: seed(common.seed)?,
        float,
        oracle: !no_oracle,
        float_check: true,
    };
    let a = analyze(&inp.arrangement, &inp.system, &opts)?;
    emit(&report::analysis(&a));
    if a.consistent() {
        Ok(())
    } else {
        Err(CliError::Consistency(a.failures().join("; ")))
    }
}

fn certificates<F: Field>(common: &Common, inp: &input::Input, lines: &[usize]) -> Result<(Vec<Value>, bool), CliError> {
    let s = seed(common.seed)?;
    let mut out = Vec::new();
    let mut ok = true;
    for &l in lines {
        match beta_certificate::<F>(&inp.arrangement, &inp.system, l, s) {
            Ok(c) => {
                ok &= c.holds();
                out.push(report::certificate(&c));
            }
            Err(BoundsError::PencilNotCovered) => out.push(json!("not applicable")),
            Err(e) => return Err(e.into()),
        }
    }
    Ok((out, ok))
}

fn cmd_bounds(common: &Common, line: Option<usize>) -> Result<(), CliError> {
    let inp = input::read(&common.input)?;
    validate(&inp.system, &inp.arrangement).map_err(|e| CliError::Admissibility(e.to_string()))?;
    let n = inp.arrangement.len();
    let lines: Vec<usize> = match line {
        Some(l) if l >= n => return Err(CliError::Usage(format!("line {l} out of range (0..{n})"))),
        Some(l) => vec![l],
        None => (0..n).collect(),
    };
    let all = line_bounds(&inp.arrangement, &inp.system)?;
    let (certs, ok) = if inp.system.is_exact() {
        certificates::<Cyclo>(common, &inp, &lines)?
    } else {
        certificates::<Complex64>(common, &inp, &lines)?
    };
    let per_line: Vec<Value> = lines
        .iter()
        .zip(certs)
        .map(|(&l, cert)| {
            let mut v = report::line_bounds(&all[l..=l])[0].clone();
            v["certificate"] = cert;
            v
        })
        .collect();
    let pencil = inp.arrangement.points().len() <= 1;
    emit(&json!({
        "lines": per_line,
        "best": best_bound(&all),
        "best_r0": if pencil { json!("not applicable") } else { json!(all.iter().filter_map(|b| b.r0).min()) },
        "best_cdo": all.iter().map(|b| b.cdo).min(),
    }));
    if ok {
        Ok(())
    } else {
        Err(CliError::Consistency("a neighbor certificate failed".into()))
    }
}

fn main_h1(inp: &input::Input, s: u64) -> Result<usize, CliError> {
    Ok(if inp.system.is_exact() {
        h1::<Cyclo>(&inp.arrangement, &inp.system, s)?.h1
    } else {
        h1::<Complex64>(&inp.arrangement, &inp.system, s)?.h1
    })
}

fn cmd_sharp_pairs(common: &Common) -> Result<(), CliError> {
    let inp = input::read(&common.input)?;
    let h = main_h1(&inp, seed(common.seed)?)?;
    let rep = sharp_pair_report(&inp.arrangement, &inp.system, h);
    emit(&report::sharp(&rep));
    if rep.holds() {
        Ok(())
    } else {
        Err(CliError::Consistency("sharp-pair statement violated".into()))
    }
}

fn cmd_oracle(common: &Common, line: Option<usize>) -> Result<(), CliError> {
    let inp = input::read(&common.input)?;
    let s = seed(common.seed)?;
    let n = inp.arrangement.len();
    let lines: Vec<usize> = match line {
        Some(l) if l >= n => return Err(CliError::Usage(format!("line {l} out of range (0..{n})"))),
        Some(l) => vec![l],
        None => (0..n).collect(),
    };
    let main = main_h1(&inp, s)?;
    let mut values = Vec::new();
    for &l in &lines {
        let v = if inp.system.is_exact() {
            oracle_h1_along::<Cyclo>(&inp.arrangement, &inp.system, l, s)?
        } else {
            oracle_h1_along::<Complex64>(&inp.arrangement, &inp.system, l, s)?
        };
        values.push(v);
    }
    let agrees = values.iter().all(|&v| v == main);
    emit(&json!({
        "h1": main,
        "oracle": lines.iter().zip(&values).map(|(&l, &v)| json!({"line": l, "h1": v})).collect::<Vec<_>>(),
        "agrees": agrees,
    }));
    if agrees {
        Ok(())
    } else {
        Err(CliError::Consistency("oracle disagrees with the chamber computation".into()))
    }
}

fn cmd_render(common: &Common, output: &PathBuf) -> Result<(), CliError> {
    let inp = input::read(&common.input)?;
    let svg = render::svg(&inp.arrangement, &inp.system, seed(common.seed)?).map_err(|e| CliError::Internal(e.to_string()))?;
    std::fs::write(output, svg).map_err(|e| CliError::Io(format!("{}: {e}", output.display())))
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let inp = input::read(path)?;
    match validate(&inp.system, &inp.arrangement) {
        Ok(()) => {
            let resonant = resonant_points(&inp.arrangement, &inp.system);
            emit(&json!({
                "valid": true,
                "mode": if inp.system.is_exact() { "exact" } else { "float" },
                "lines": inp.arrangement.len(),
                "points": inp.arrangement.points().len(),
                "resonant": resonant.points,
            }));
            Ok(())
        }
        Err(e) => {
            emit(&json!({"valid": false, "reason": e.to_string()}));
            Err(CliError::Admissibility(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::H1 { common, float, no_oracle } => cmd_h1(&common, float, no_oracle),
        Command::Bounds { common, line } => cmd_bounds(&common, line),
        Command::SharpPairs { common } => cmd_sharp_pairs(&common),
        Command::Oracle { common, line } => cmd_oracle(&common, line),
        Command::Fuzz {
            lines,
            order,
            trials,
            seed: s,
            sharp_only,
            out,
            max_lines,
        } => {
            if lines > max_lines {
                return Err(CliError::Usage(format!("--lines {lines} exceeds --max-lines {max_lines}")));
            }
            if lines < 3 || order < 2 {
                return Err(CliError::Usage("need --lines >= 3 and --order >= 2".into()));
            }
            let cfg = fuzz::FuzzConfig {
                lines,
                order,
                trials,
                seed: seed(s)?,
                sharp_only,
                out,
            };
            let (summary, violations) = fuzz::run(&cfg)?;
            emit(&summary);
            if violations == 0 {
                Ok(())
            } else {
                Err(CliError::Consistency(format!("{violations} violating trials")))
            }
        }
        Command::Render { common, output } => cmd_render(&common, &output),
        Command::Validate { input } => cmd_validate(&input),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on bad arguments, which is reserved here for rejected local systems
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twbetti: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
