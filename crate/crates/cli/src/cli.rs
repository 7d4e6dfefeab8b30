//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::report::{dual_report, membrane_report, single_report, teleport_report, MetricGroup, Provenance, TeleportInput};
use crate::sweep::{sweep_table, Axis, Metric, SweepPlan, System};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    Json,
    /// Comma-separated values.
    Csv,
}

/// Gaussian entanglement, teleportation and optomechanics from the command line.
#[derive(Debug, Parser)]
#[command(name = "optoent", version, about)]
pub struct Cli {
    /// TOML configuration file with flat keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a configuration key; takes precedence over the file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Output encoding; reports default to JSON and sweeps to CSV.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for random inputs.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Command to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Metric selection of report commands.
#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Metric groups to compute.
    #[arg(long, value_delimiter = ',', default_value = "intracavity")]
    pub metrics: Vec<MetricGroup>,
    /// Report derived parameters and stability only.
    #[arg(long, conflicts_with = "metrics")]
    pub no_metrics: bool,
}

impl ReportArgs {
    fn groups(&self) -> Vec<MetricGroup> {
        if self.no_metrics {
            Vec::new()
        } else {
            self.metrics.clone()
        }
    }
}

/// Grid definition of sweep commands.
#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Slow axis as NAME:LO:HI:COUNT.
    #[arg(long)]
    pub axis1: String,
    /// Fast axis as NAME:LO:HI:COUNT.
    #[arg(long)]
    pub axis2: String,
    /// Quantity evaluated at each point.
    #[arg(long, value_enum)]
    pub metric: Metric,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Accept axes with a single point.
    #[arg(long)]
    pub allow_degenerate: bool,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-laser report: derived rates, stability and entanglement.
    Report(ReportArgs),
    /// Single-laser parameter sweep.
    Sweep(SweepArgs),
    /// Optimal teleportation fidelity of a two-mode covariance matrix.
    Teleport {
        /// Covariance-matrix file; omit with --random.
        file: Option<PathBuf>,
        /// Use a seeded random entangled state instead of a file.
        #[arg(long, conflicts_with = "file")]
        random: bool,
    },
    /// Two-laser report.
    DualReport(ReportArgs),
    /// Two-laser parameter sweep.
    DualSweep(SweepArgs),
    /// Mode splitting by a membrane inside the cavity.
    Membrane,
}

/// Flattens a JSON value into `path,value` CSV lines.
pub fn json_to_csv(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, x)| walk(&key(k), x, out)),
            Value::Array(items) => items.iter().enumerate().for_each(|(i, x)| walk(&key(&i.to_string()), x, out)),
            Value::Null => out.push_str(&format!("{prefix},NaN\n")),
            Value::String(s) => out.push_str(&format!("{prefix},{s}\n")),
            other => out.push_str(&format!("{prefix},{other}\n")),
        }
    }
    let mut out = String::from("key,value\n");
    walk("", value, &mut out);
    out
}

fn render<T: Serialize>(value: &T, format: Format) -> Result<String> {
    let json = serde_json::to_value(value).map_err(std::io::Error::from)?;
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json).map_err(std::io::Error::from)?;
            s.push('\n');
            s
        }
        Format::Csv => json_to_csv(&json),
    })
}

#[derive(Serialize)]
struct SweepJson<'a> {
    provenance: Provenance,
    plan: &'a SweepPlan,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

/// Runs a parsed command and returns the text to emit together with the
/// error to report after emitting it.
pub fn execute(cli: &Cli) -> Result<(String, Option<CliError>)> {
    let settings = || Settings::resolve(cli.config.as_deref(), &cli.overrides);
    let report_format = cli.format.unwrap_or(Format::Json);
    let unstable = |max_re: Option<f64>| max_re.map(|max_re| CliError::Unstable { max_re });
    match &cli.command {
        Command::Report(args) => {
            let (rec, bad) = single_report(&settings()?, &args.groups())?;
            Ok((render(&rec, report_format)?, unstable(bad)))
        }
        Command::DualReport(args) => {
            let (rec, bad) = dual_report(&settings()?, &args.groups())?;
            Ok((render(&rec, report_format)?, unstable(bad)))
        }
        Command::Sweep(args) | Command::DualSweep(args) => {
            let system = if matches!(cli.command, Command::Sweep(_)) { System::Single } else { System::Dual };
            let s = settings()?;
            let plan = SweepPlan::new(
                Axis::parse(&args.axis1)?,
                Axis::parse(&args.axis2)?,
                args.metric,
                system,
                args.allow_degenerate,
            )?;
            let table = sweep_table(&plan, &s, args.threads)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => render(
                    &SweepJson {
                        provenance: Provenance::new(&s, cli.seed),
                        plan: &plan,
                        columns: table.columns.clone(),
                        rows: table.rows.clone(),
                    },
                    Format::Json,
                )?,
            };
            Ok((text, None))
        }
        Command::Teleport { file, random } => {
            let input = match (file, random) {
                (Some(p), false) => TeleportInput::Text(std::fs::read_to_string(p)?),
                (None, true) => TeleportInput::Random(cli.seed.unwrap_or(0)),
                _ => return Err(CliError::ConfigParse("teleport needs a file or --random".into())),
            };
            Ok((render(&teleport_report(&input)?, report_format)?, None))
        }
        Command::Membrane => Ok((render(&membrane_report(&settings()?)?, report_format)?, None)),
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let (text, err) = match execute(&cli) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, &text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {}", CliError::Io(e));
        return 1;
    }
    match err {
        Some(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}
