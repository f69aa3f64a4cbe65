mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{CliError, OutputFormat, RunConfig};
use report::{emit_report, fmt_sig, RunReport};

/// Metric-geometry toolkit: compactified ray spaces, discontinuity
/// stratification of continuous bijections, and seeded verification suites.
#[derive(Parser)]
#[command(name = "strata", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Catalog identifier or path to a JSON descriptor.
    target: String,
    /// RNG seed for every sampler in the run.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Seeded sample count per suite (minimum 10).
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Net scales checked by the coverage suite.
    #[arg(long = "eps", value_delimiter = ',', default_values_t = [0.5, 0.1, 0.02])]
    epsilon_list: Vec<f64>,
    /// Stratification depth cap.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Output format for --out.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the machine-readable report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the metric verification suites on a space.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Axiom slack tolerance.
        #[arg(long = "tol", default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Validate an exhaustion and probe the compactified metric.
    Compactify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "tol", default_value_t = 1e-9)]
        tolerance: f64,
        /// Probe point, comma-separated coordinates with optional @branch.
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Estimate the discontinuity stratification of a map.
    Stratify {
        #[command(flatten)]
        common: CommonArgs,
        /// Matching tolerance for the discontinuity class.
        #[arg(long = "tol", default_value_t = 1e-2)]
        tolerance: f64,
    },
    /// Full battery: verification, stratification and certificates.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Matching tolerance (axiom slack for space targets).
        #[arg(long = "tol")]
        tolerance: Option<f64>,
    },
}

fn build_config(command: &str, common: &CommonArgs, tolerance: f64) -> RunConfig {
    RunConfig {
        command: command.into(),
        target: common.target.clone(),
        seed: common.seed,
        samples: common.samples,
        tolerance,
        epsilon_list: common.epsilon_list.clone(),
        depth: common.depth,
        output_format: match common.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        },
        output_path: common.out.clone(),
    }
}

fn execute() -> Result<RunReport, CliError> {
    let cli = Cli::parse();
    let (config, points) = match &cli.command {
        Command::Verify { common, tolerance } => (build_config("verify", common, *tolerance), None),
        Command::Compactify {
            common,
            tolerance,
            points,
        } => (
            build_config("compactify", common, *tolerance),
            Some(points.clone()),
        ),
        Command::Stratify { common, tolerance } => {
            (build_config("stratify", common, *tolerance), None)
        }
        Command::Report { common, tolerance } => {
            // axiom slack for spaces, matching tolerance for maps
            let default = match config::resolve(&common.target) {
                Ok(config::Target::Map(_)) => 1e-2,
                _ => 1e-9,
            };
            (
                build_config("report", common, tolerance.unwrap_or(default)),
                None,
            )
        }
    };
    config.validate()?;

    let report = match config.command.as_str() {
        "verify" => suites::run_verify(&config)?,
        "compactify" => suites::run_compactify(&config, points.as_deref().unwrap_or(&[]))?,
        "stratify" => suites::run_stratify(&config)?,
        "report" => suites::run_report(&config)?,
        _ => unreachable!("clap enumerates the commands"),
    };

    for suite in &report.suites {
        println!(
            "suite {}: checked={} violations={} max_slack={} wall_ms={} -> {}",
            suite.suite,
            suite.checked,
            suite.violations,
            fmt_sig(suite.max_slack),
            suite.wall_ms,
            suite.verdict
        );
    }
    if let Some(t) = report.terminated {
        println!("terminated: {t}");
    }
    if let Some(a) = report.consistency_agreement {
        println!("properness agreement: {}", fmt_sig(a));
    }
    if let Some(a) = report.certificate_agreement {
        println!("certificate agreement: {}", fmt_sig(a));
    }
    println!("verdict: {}", report.verdict);

    if let Some(path) = &config.output_path {
        emit_report(&report, config.output_format, path)?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    match execute() {
        Ok(report) if report.passed() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
