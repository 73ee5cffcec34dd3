//! Command-line front end: parse function specs, run the bound pipelines,
//! reproduce the builtin experiments, and emit JSON/CSV reports.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use h2lb::bounds::{assemble_report, BoundReport, PiChoice, ReportOptions};
use h2lb::funcspec::{self, ResolvedFunction};
use h2lb::linearized::LinearizedOptions;
use h2lb::polynomial::Polynomial;
use h2lb::upper::{solve_rab, RabConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "h2lb",
    version,
    about = "Bounds for best rational approximation on the circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Accuracy target for coefficient extraction, in bits.
    #[arg(long, default_value_t = 40)]
    bits: u32,
    /// Circle samples for sup-norm estimation.
    #[arg(long, default_value_t = 8000)]
    samples: usize,
    /// Restarts for the upper-bound search.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Seed for every randomized component; required by the random builtins.
    #[arg(long)]
    seed: Option<u64>,
    /// Weight for the linearized bound: one | upper | file:<path>.
    #[arg(long, default_value = "one")]
    pi: String,
    /// Interpolation-node grid size for the linearized bound.
    #[arg(long, default_value_t = 64)]
    xi_grid: usize,
    /// Initial sampled-constraint count per node.
    #[arg(long, default_value_t = 50)]
    constraint_grid: usize,
    /// Tolerated certified constraint violation.
    #[arg(long, default_value_t = 1e-7)]
    viol_tol: f64,
    /// Relative duality-gap tolerance per cone solve.
    #[arg(long, default_value_t = 1e-9)]
    gap_tol: f64,
    /// Skip the upper-bound search.
    #[arg(long)]
    no_upper: bool,
    /// Skip the linearized bound.
    #[arg(long)]
    no_linearized: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// All bounds for one function at one degree.
    Bounds {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Only the linearized bound.
    Linearized {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Best-approximant search: poles, numerator, denominator, error.
    Approx {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reproduce a builtin experiment (1..7; 2..6 need --seed).
    Example {
        id: u8,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Bounds across a degree range, emitted as CSV.
    Sweep {
        #[arg(long)]
        function: PathBuf,
        /// Inclusive range, e.g. 1..8.
        #[arg(long)]
        degrees: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("H2LB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // config errors exit 2, computational failures exit 1; both leave
            // a machine-readable report on stderr
            let config = e.downcast_ref::<ConfigError>().is_some();
            let report = serde_json::json!({
                "error": format!("{e:#}"),
                "kind": if config { "config" } else { "computation" },
            });
            eprintln!("{report}");
            if config {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(ConfigError(msg.into()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Bounds {
            function,
            degree,
            common,
        } => {
            let f = load_function(&function, common.bits)?;
            let opts = report_options(&common, false)?;
            let report = assemble_report(&f, degree, &opts)?;
            emit_report(&report, &common.output)
        }
        Command::Linearized {
            function,
            degree,
            common,
        } => {
            let f = load_function(&function, common.bits)?;
            let mut opts = report_options(&common, true)?;
            if opts.linearized_pi.is_none() {
                bail!(config_err("the linearized command needs a weight (--pi)"));
            }
            opts.with_upper = matches!(opts.linearized_pi, Some(PiChoice::UpperDenominator));
            let report = assemble_report(&f, degree, &opts)?;
            emit_report(&report, &common.output)
        }
        Command::Approx {
            function,
            degree,
            common,
        } => {
            let f = load_function(&function, common.bits)?;
            if degree == 0 {
                bail!(config_err("approx needs degree >= 1"));
            }
            let cfg = RabConfig {
                restarts: common.restarts,
                seed: common.seed.unwrap_or(0),
                warm_start: None,
            };
            let sol = solve_rab(&f.symbol, degree, &cfg)?;
            let json = serde_json::json!({
                "error": sol.error,
                "p": sol.numerator.coeffs().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                "q": sol.denominator.coeffs().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                "poles": sol.poles.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>(),
                "restarts": sol.restarts_used,
                "gradient_norm": sol.residual_gradient_norm,
                "seed": sol.seed,
            });
            emit_text(&serde_json::to_string_pretty(&json)?, &common.output)
        }
        Command::Example { id, degree, common } => {
            if (2..=6).contains(&id) && common.seed.is_none() {
                bail!(config_err(format!(
                    "builtin {id} is a random generator and needs --seed"
                )));
            }
            let f = funcspec::builtin(id, common.seed, common.bits)?;
            let opts = report_options(&common, false)?;
            let report = assemble_report(&f, degree, &opts)?;
            emit_report(&report, &common.output)
        }
        Command::Sweep {
            function,
            degrees,
            common,
        } => {
            let (lo, hi) = parse_range(&degrees)?;
            let f = load_function(&function, common.bits)?;
            let opts = report_options(&common, false)?;
            let mut csv = String::from(BoundReport::csv_header());
            csv.push('\n');
            for n in lo..=hi {
                let report =
                    assemble_report(&f, n, &opts).with_context(|| format!("degree {n}"))?;
                csv.push_str(&report.csv_row());
                csv.push('\n');
            }
            emit_text(&csv, &common.output)
        }
    }
}

fn load_function(path: &PathBuf, bits: u32) -> anyhow::Result<ResolvedFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let spec =
        funcspec::parse_spec(&text).map_err(|e| config_err(format!("bad function spec: {e}")))?;
    Ok(funcspec::resolve(&spec, bits)?)
}

fn report_options(common: &CommonOpts, linearized_only: bool) -> anyhow::Result<ReportOptions> {
    let pi = if common.no_linearized && !linearized_only {
        None
    } else {
        Some(match common.pi.as_str() {
            "one" => PiChoice::One,
            "upper" => PiChoice::UpperDenominator,
            other => match other.strip_prefix("file:") {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| config_err(format!("cannot read weight {path}: {e}")))?;
                    let coeffs: Vec<[f64; 2]> = serde_json::from_str(&text)
                        .map_err(|e| config_err(format!("bad weight file: {e}")))?;
                    PiChoice::Custom(Polynomial::new(
                        coeffs
                            .iter()
                            .map(|c| h2lb::Complex64::new(c[0], c[1]))
                            .collect(),
                    ))
                }
                None => bail!(config_err(format!("unknown weight choice {other}"))),
            },
        })
    };
    let lin = LinearizedOptions {
        constraint_grid: common.constraint_grid,
        viol_tol: common.viol_tol,
        gap_tol: common.gap_tol,
        xi_grid: common.xi_grid,
        ..Default::default()
    };
    Ok(ReportOptions {
        bits: common.bits,
        samples: common.samples,
        linearized_pi: pi,
        with_upper: !common.no_upper,
        restarts: common.restarts,
        seed: common.seed.unwrap_or(0),
        linearized: lin,
    })
}

fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        bail!(config_err(format!(
            "degree range must look like 1..8, got {s}"
        )));
    }
    let lo: usize = parts[0]
        .parse()
        .map_err(|_| config_err(format!("bad range start {}", parts[0])))?;
    let hi: usize = parts[1]
        .parse()
        .map_err(|_| config_err(format!("bad range end {}", parts[1])))?;
    if lo > hi {
        bail!(config_err("empty degree range"));
    }
    Ok((lo, hi))
}

fn emit_report(report: &BoundReport, output: &Option<PathBuf>) -> anyhow::Result<()> {
    emit_text(&report.to_json()?, output)
}

fn emit_text(text: &str, output: &Option<PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| format!("creating {}", path.display()))?;
            file.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                file.write_all(b"\n")?;
            }
        }
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}
