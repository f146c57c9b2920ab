//! Command-line front end. Every output embeds the parsed configuration:
//! CSV files start with a `# {json}` comment line, JSON outputs wrap the
//! result as `{"config": ..., "result": ...}`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bergman::{inflate_ball_family, ramadanov_run, scaled_ball, translate_ball_family, KernelOracle, ReferenceDomain};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::indicatrix::mc_volume;
use crate::metrics::{metric_oracle, Tau};
use crate::point::CPoint;
use crate::scaling::{build_sequence, convergence_report};
use crate::suita::{evaluate, orbit_value_note, segment_csv, segment_scan, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CAPABILITY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "suita-lab", version, about = "Suita invariant experiments on the ball, Siegel and egg domains")]
pub struct Cli {
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// F at one point (JSON).
    Eval(EvalArgs),
    /// Ellipsoid bounds over a (mu, p) grid (CSV).
    EggBounds(EggBoundsArgs),
    /// Scaling pipeline report on the ball (CSV).
    ScalingRun(ScalingArgs),
    /// Kernel stability for a family of balls (CSV).
    Ramadanov(RamadanovArgs),
    /// Indicatrix volume by Monte Carlo (JSON).
    Indicatrix(IndicatrixArgs),
    /// Bracket scan of the representative segment and what it proves (JSON).
    SegmentScan(SegmentScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Ball,
    Siegel,
    Egg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Exact,
    Mc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    InflateBall,
    TranslateBall,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DomainArgs {
    #[arg(long, value_enum, default_value = "ball")]
    pub domain: DomainKind,
    /// Complex dimension of the ball or Siegel domain.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Egg exponent.
    #[arg(long)]
    pub mu: Option<f64>,
}

impl DomainArgs {
    pub fn spec(&self) -> Result<DomainSpec> {
        match self.domain {
            DomainKind::Ball => DomainSpec::ball(self.n),
            DomainKind::Siegel => DomainSpec::siegel(self.n),
            DomainKind::Egg => {
                let mu = self.mu.ok_or_else(|| Error::InvalidParameter("--mu is required for the egg".into()))?;
                DomainSpec::egg(mu)
            }
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SamplingArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodKind,
    /// Monte Carlo sample count.
    #[arg(long = "N", alias = "samples", default_value_t = 1_000_000)]
    pub samples: u64,
    /// Required for the mc method.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl SamplingArgs {
    pub fn method(&self) -> Result<Method> {
        match self.method {
            MethodKind::Exact => Ok(Method::Exact),
            MethodKind::Mc => {
                let seed = self.seed.ok_or_else(|| Error::InvalidParameter("--seed is required for mc".into()))?;
                Ok(Method::MonteCarlo { samples: self.samples, seed })
            }
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Comma-separated complex coordinates, e.g. `0,-1` or `0.1+0.2i,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: CPoint,
    #[arg(long, value_enum, default_value = "k")]
    pub tau: Tau,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EggBoundsArgs {
    /// Comma-separated egg exponents.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.25, 0.3, 0.4, 0.49])]
    pub mu: Vec<f64>,
    /// Comma-separated axis points; defaults to 0, 0.05, ..., 0.95, 0.999.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScalingArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long, default_value_t = 0.5)]
    pub rate: f64,
    #[arg(long = "j-max", default_value_t = 15)]
    pub j_max: usize,
    #[arg(long, value_enum, default_value = "k")]
    pub tau: Tau,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RamadanovArgs {
    #[arg(long, value_enum, default_value = "inflate-ball")]
    pub family: Family,
    #[arg(long = "j-max", default_value_t = 50)]
    pub j_max: usize,
    /// Translation direction for the translate-ball family.
    #[arg(long, default_value = "0,0.5", allow_hyphen_values = true)]
    pub v: CPoint,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IndicatrixArgs {
    #[arg(long, value_enum, default_value = "ball")]
    pub oracle: DomainKind,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: CPoint,
    #[arg(long, value_enum, default_value = "k")]
    pub tau: Tau,
    #[arg(long = "N", alias = "samples", default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SegmentScanArgs {
    #[arg(long, default_value_t = 0.25)]
    pub mu: f64,
    /// Number of interior grid points in (0, 1), plus p = 0 and p = 0.999.
    #[arg(long, default_value_t = 19)]
    pub count: usize,
}

fn default_p_grid() -> Vec<f64> {
    let mut ps: Vec<f64> = (0..20).map(|i| i as f64 * 0.05).collect();
    ps.push(0.999);
    ps
}

fn csv_with_config(config: &Command, body: &str) -> String {
    let header = json!({ "version": env!("CARGO_PKG_VERSION"), "config": config });
    format!("# {header}\n{body}")
}

fn json_with_config(config: &Command, result: impl Serialize) -> Result<String> {
    let doc = json!({ "version": env!("CARGO_PKG_VERSION"), "config": config, "result": result });
    serde_json::to_string_pretty(&doc)
        .map(|s| s + "\n")
        .map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
}

/// The artifact a command produces.
pub fn render(command: &Command) -> Result<String> {
    match command {
        Command::Eval(a) => {
            let spec = a.domain.spec()?;
            json_with_config(command, evaluate(&spec, &a.z, a.tau, a.sampling.method()?)?)
        }
        Command::EggBounds(a) => {
            let ps = if a.p.is_empty() { default_p_grid() } else { a.p.clone() };
            Ok(csv_with_config(command, &segment_csv(&segment_scan(&a.mu, &ps)?)))
        }
        Command::ScalingRun(a) => {
            let spec = a.domain.spec()?;
            let seq = build_sequence(&spec, &CPoint::real2(0.0, 1.0), a.j_max, a.rate)?;
            let report = convergence_report(&seq, a.tau, a.sampling.method()?)?;
            Ok(csv_with_config(command, &report.to_csv()))
        }
        Command::Ramadanov(a) => {
            let w = CPoint::zeros(2);
            let limit = KernelOracle::closed_form(DomainSpec::ball(2)?);
            let table = match a.family {
                Family::InflateBall => {
                    // Every Ω^j contains the unit ball, whose kernel bounds them all.
                    let reference = ReferenceDomain { oracle: scaled_ball(1.0)?, from: 1 };
                    ramadanov_run(&inflate_ball_family(a.j_max)?, &limit, &w, Some(&reference), a.tolerance)?
                }
                Family::TranslateBall => {
                    ramadanov_run(&translate_ball_family(&a.v, a.j_max)?, &limit, &w, None, a.tolerance)?
                }
            };
            let body = format!(
                "{}# final_abs_err={:e} tolerance={:e} converged={}\n",
                table.to_csv(),
                table.final_abs_err,
                table.tolerance,
                table.converged()
            );
            Ok(csv_with_config(command, &body))
        }
        Command::Indicatrix(a) => {
            let spec = DomainArgs { domain: a.oracle, n: a.n, mu: a.mu }.spec()?;
            let oracle = metric_oracle(&spec, &a.z, a.tau)?;
            let estimate = mc_volume(&oracle, a.samples, a.seed)?;
            let exact = oracle.exact_volume();
            json_with_config(
                command,
                json!({
                    "estimate": estimate,
                    "exact": exact,
                    "relative_error": exact.map(|e| (estimate.value - e) / e),
                    "four_pi_squared": 4.0 * PI * PI,
                }),
            )
        }
        Command::SegmentScan(a) => {
            let count = a.count.max(1);
            let mut ps: Vec<f64> = (0..=count).map(|i| i as f64 / (count + 1) as f64).collect();
            ps.push(0.999);
            json_with_config(command, orbit_value_note(a.mu, &ps)?)
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_capability() {
        EXIT_CAPABILITY
    } else {
        EXIT_INTERNAL
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let artifact = match render(&cli.command) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, artifact.as_bytes()),
        None => std::io::stdout().lock().write_all(artifact.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_INTERNAL
        }
    }
}
