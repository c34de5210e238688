//! The `dqre` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{lookup_application, ETA_SWEEP_MAX, ETA_SWEEP_MIN, NODE_SIZE_SWEEP};
use crate::config::{HardwareSection, RunConfig};
use crate::error::{Error, Result};
use crate::estimator::{Accounting, ApplicationProfile, Estimator, EstimatorOptions, EtaMode};
use crate::report::{self, EstimateDocument, FactoryDocument, SweepAxis, SweepDocument};
use crate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

pub const DEFAULT_PRESET: &str = "fast-optimistic";
pub const ETA_POINTS_PER_DECADE: u32 = 12;

#[derive(Debug, Parser)]
#[command(
    name = "dqre",
    version,
    about = "Resource estimates for distributed fault-tolerant quantum computers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pareto frontier and representative configuration for one application.
    Estimate(EstimateArgs),
    /// Representative configuration per node size.
    SweepNodeSize(SweepNodeArgs),
    /// Representative configuration per entanglement rate.
    SweepEta(SweepEtaArgs),
    /// Pareto-optimal factories reaching a target error.
    ListFactories(FactoryArgs),
    /// Compare against the benchmark estimates; exit 3 on any failure.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EtaModeArg {
    Strict,
    Refined,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AccountingArg {
    WholeNodes,
    Packed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FactoryKind {
    Edf,
    Msdf,
    All,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HardwareArgs {
    /// TOML or JSON run configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// {fast,slow}-{optimistic,pessimistic}, optionally suffixed -bell5 or -bell01
    #[arg(long)]
    pub preset: Option<String>,
    /// Raw Bell pairs per second per link.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Physical qubits per node
    #[arg(long)]
    pub node_size: Option<u64>,
    /// Total raw Bell error, split evenly over X, Y and Z.
    #[arg(long)]
    pub bell_error: Option<f64>,
    /// Physical error rate.
    #[arg(long)]
    pub p: Option<f64>,
    /// Physical operation time in seconds.
    #[arg(long)]
    pub t_op: Option<f64>,
    /// Operation steps per syndrome cycle
    #[arg(long)]
    pub cycle_factor: Option<f64>,
    /// How link time is charged to a distillation factory
    #[arg(long, value_enum)]
    pub eta_mode: Option<EtaModeArg>,
    /// Count whole nodes or only the qubits in use
    #[arg(long, value_enum)]
    pub accounting: Option<AccountingArg>,
    /// Logical, magic and entanglement error shares, e.g. 1,1,1.
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub budget_weights: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct AppArgs {
    /// Built-in application name or alias.
    #[arg(long)]
    pub app: Option<String>,
    /// Total error budget of the run.
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub app: AppArgs,
    #[command(flatten)]
    pub hw: HardwareArgs,
    /// Single machine, no networking
    #[arg(long)]
    pub monolithic: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepNodeArgs {
    #[command(flatten)]
    pub app: AppArgs,
    #[command(flatten)]
    pub hw: HardwareArgs,
    /// Node sizes to try; defaults to the standard grid.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<u64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepEtaArgs {
    #[command(flatten)]
    pub app: AppArgs,
    #[command(flatten)]
    pub hw: HardwareArgs,
    #[arg(long, default_value_t = ETA_SWEEP_MIN)]
    pub eta_min: f64,
    #[arg(long, default_value_t = ETA_SWEEP_MAX)]
    pub eta_max: f64,
    #[arg(long, default_value_t = ETA_POINTS_PER_DECADE)]
    pub per_decade: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FactoryArgs {
    #[command(flatten)]
    pub hw: HardwareArgs,
    /// Per-state output error to reach.
    #[arg(long)]
    pub target: f64,
    #[arg(long, value_enum, default_value_t = FactoryKind::All)]
    pub kind: FactoryKind,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Only the `[estimator]` table is used.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Operation steps per syndrome cycle
    #[arg(long)]
    pub cycle_factor: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn load(path: &Option<PathBuf>) -> Result<RunConfig> {
    path.as_deref()
        .map_or_else(|| Ok(RunConfig::default()), RunConfig::load)
}

impl HardwareArgs {
    /// Flags override the config file, which overrides the preset.
    fn estimator(&self, cfg: &RunConfig) -> Result<Estimator> {
        let flags = HardwareSection {
            preset: self.preset.clone(),
            t_op: self.t_op,
            p: self.p,
            bell_error: self.bell_error,
            bell_weights: None,
            eta: self.eta,
            node_size: self.node_size,
            cycle_factor: self.cycle_factor,
        };
        let section = cfg.hardware.merged(&flags);
        let hw = section.resolve(DEFAULT_PRESET)?;
        let mut options: EstimatorOptions = cfg.estimator.clone();
        if let Some(m) = self.eta_mode {
            options.eta_mode = match m {
                EtaModeArg::Strict => EtaMode::Strict,
                EtaModeArg::Refined => EtaMode::Refined,
            };
        }
        if let Some(a) = self.accounting {
            options.accounting = match a {
                AccountingArg::WholeNodes => Accounting::WholeNodes,
                AccountingArg::Packed => Accounting::Packed,
            };
        }
        if let Some(w) = &self.budget_weights {
            options.budget_weights = [w[0], w[1], w[2]];
        }
        Estimator::new(hw, options)
    }
}

impl AppArgs {
    fn resolve(&self, cfg: &RunConfig) -> Result<ApplicationProfile> {
        let mut app = match (&self.app, &cfg.application) {
            (Some(name), _) => lookup_application(name)?,
            (None, Some(section)) => section.resolve()?,
            (None, None) => return Err(Error::InvalidInput("no application: pass --app or a config".into())),
        };
        if let Some(eps) = self.eps {
            app.eps_total = eps;
        }
        app.validate()?;
        Ok(app)
    }
}

fn emit(
    output: &OutputArgs,
    json: impl FnOnce() -> Result<String>,
    csv: impl FnOnce() -> Result<Vec<u8>>,
) -> Result<()> {
    let bytes = match output.format {
        Format::Json => json()?.into_bytes(),
        Format::Csv => csv()?,
    };
    match &output.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn rows_csv<T: serde::Serialize>(rows: &[T], header: &[&str]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    if rows.is_empty() {
        report::write_csv_header(header, &mut buf)?;
    } else {
        report::write_csv(rows, &mut buf)?;
    }
    Ok(buf)
}

const FACTORY_HEADER: [&str; 8] = [
    "kind",
    "label",
    "physical_qubits",
    "period_steps",
    "latency_steps",
    "raw_inputs",
    "outputs",
    "output_error",
];

/// Runs one command and returns its exit code.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Estimate(a) => {
            let cfg = load(&a.hw.config)?;
            let app = a.app.resolve(&cfg)?;
            let est = a.hw.estimator(&cfg)?;
            let doc = EstimateDocument::new(&est, &app, a.monolithic)?;
            emit(
                &a.output,
                || report::to_json(&doc),
                || rows_csv(&doc.rows, &report::CSV_HEADER),
            )?;
        }
        Command::SweepNodeSize(a) => {
            let cfg = load(&a.hw.config)?;
            let app = a.app.resolve(&cfg)?;
            let est = a.hw.estimator(&cfg)?;
            let sizes = a.sizes.unwrap_or_else(|| NODE_SIZE_SWEEP.to_vec());
            let points: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
            let doc = SweepDocument::run(&est, &app, SweepAxis::NodeSize, &points)?;
            emit(
                &a.output,
                || report::to_json(&doc),
                || rows_csv(&doc.rows, &report::CSV_HEADER),
            )?;
        }
        Command::SweepEta(a) => {
            let cfg = load(&a.hw.config)?;
            let app = a.app.resolve(&cfg)?;
            let est = a.hw.estimator(&cfg)?;
            let points = report::log_grid(a.eta_min, a.eta_max, a.per_decade)?;
            let doc = SweepDocument::run(&est, &app, SweepAxis::Eta, &points)?;
            emit(
                &a.output,
                || report::to_json(&doc),
                || rows_csv(&doc.rows, &report::CSV_HEADER),
            )?;
        }
        Command::ListFactories(a) => {
            let cfg = load(&a.hw.config)?;
            let est = a.hw.estimator(&cfg)?;
            let (edf, msdf) = match a.kind {
                FactoryKind::Edf => (true, false),
                FactoryKind::Msdf => (false, true),
                FactoryKind::All => (true, true),
            };
            let doc = FactoryDocument::new(&est, a.target, edf, msdf)?;
            emit(
                &a.output,
                || report::to_json(&doc),
                || rows_csv(&doc.rows, &FACTORY_HEADER),
            )?;
        }
        Command::Validate(a) => {
            let cfg = load(&a.config)?;
            let rep = validate::run(&cfg.estimator, a.cycle_factor)?;
            let mut err = std::io::stderr().lock();
            for c in &rep.rows {
                let status = match (c.counted, c.pass) {
                    (false, _) => "info",
                    (true, true) => "PASS",
                    (true, false) => "FAIL",
                };
                let actual = c.actual.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4e}"));
                let ratio = c.ratio.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"));
                writeln!(
                    err,
                    "{status} {} | {} | {}: expected {:.4e}, got {actual}, ratio {ratio} in [{:.3}, {:.3}]{}",
                    c.application,
                    c.scenario,
                    c.metric,
                    c.expected,
                    c.ratio_min,
                    c.ratio_max,
                    if c.within { "" } else { " (out of band)" },
                )?;
            }
            writeln!(
                err,
                "{}",
                if rep.passed {
                    "validation passed"
                } else {
                    "validation FAILED"
                }
            )?;
            emit(&a.output, || report::to_json(&rep), || rows_csv(&rep.rows, &[]))?;
            if !rep.passed {
                return Ok(EXIT_VALIDATION);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args`, runs, reports errors on stderr and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_infeasible() {
                EXIT_INFEASIBLE
            } else {
                EXIT_BAD_INPUT
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_flags_exit_one() {
        assert_eq!(main_with_args(["dqre", "estimate", "--eta", "fast"]), EXIT_BAD_INPUT);
        assert_eq!(main_with_args(["dqre", "estimate", "--app", "nope"]), EXIT_BAD_INPUT);
        assert_eq!(main_with_args(["dqre", "estimate"]), EXIT_BAD_INPUT);
        assert_eq!(main_with_args(["dqre", "frobnicate"]), EXIT_BAD_INPUT);
    }
}
