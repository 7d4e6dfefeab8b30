//! Two-axis parameter sweeps written as CSV.
//!
//! Grid points are evaluated on a worker pool and written back in
//! row-major order (the second axis varies fastest), so the output does not
//! depend on the number of workers.

use std::fmt::Write as _;

use optoent::numerics::QuadratureSpec;
use optoent::optomech::{
    assess_stability, assess_stability_dual, derive_params, drift_matrix, drift_matrix_dual, intracavity_report,
    log_negativity_half, output_cm, output_cm_dual, steady_cm, steady_state_dual, tripartite_test_half,
};
use optoent::teleport::optimal_tgcp;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Settings, NUMERIC_KEYS};
use crate::error::{CliError, Result};
use crate::report::{dual_filters, half_state, steady_method};

/// One sweep axis: a configuration key and an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    /// Configuration key.
    pub name: String,
    /// First value.
    pub lo: f64,
    /// Last value.
    pub hi: f64,
    /// Number of points.
    pub count: usize,
}

impl Axis {
    /// Parses `NAME:LO:HI:COUNT`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || CliError::ConfigParse(format!("axis `{text}` is not NAME:LO:HI:COUNT"));
        if parts.len() != 4 {
            return Err(bad());
        }
        Ok(Self {
            name: parts[0].to_string(),
            lo: parts[1].trim().parse().map_err(|_| bad())?,
            hi: parts[2].trim().parse().map_err(|_| bad())?,
            count: parts[3].trim().parse().map_err(|_| bad())?,
        })
    }

    /// Grid values `lo + (hi − lo) i/(count − 1)`.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        (0..self.count)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

/// Quantity evaluated at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
pub enum Metric {
    /// Intracavity logarithmic negativity.
    #[value(name = "E_N_intracavity")]
    #[serde(rename = "E_N_intracavity")]
    ENIntracavity,
    /// Output-mode logarithmic negativity.
    #[value(name = "E_N_output")]
    #[serde(rename = "E_N_output")]
    ENOutput,
    /// Effective phonon number.
    #[value(name = "n_eff")]
    #[serde(rename = "n_eff")]
    NEff,
    /// Tripartite test on the mirror and both filtered modes.
    #[value(name = "min_pt_eigs")]
    #[serde(rename = "min_pt_eigs")]
    MinPtEigs,
    /// Optimal teleportation fidelity of the entangled pair.
    #[value(name = "F_opt")]
    #[serde(rename = "F_opt")]
    FOpt,
    /// Largest real part of the drift eigenvalues in units of `ω_m`.
    #[value(name = "stability")]
    #[serde(rename = "stability")]
    Stability,
}

/// Which system a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum System {
    /// Single laser, one cavity mode.
    Single,
    /// Cooling and heating lasers on two cavity modes.
    Dual,
}

impl Metric {
    /// CSV column names after the two axis columns, ending with `stable`.
    pub fn columns(&self, system: System) -> Vec<&'static str> {
        let mut c = match (self, system) {
            (Metric::ENIntracavity, System::Single) => vec!["E_N_intracavity", "n_eff"],
            (Metric::ENIntracavity, System::Dual) => vec!["E_N_intracavity", "E_N_mirror_b", "E_N_optical"],
            (Metric::ENOutput, System::Single) => vec!["E_N_output"],
            (Metric::ENOutput, System::Dual) => vec!["E_N_output", "E_N_mirror_a", "E_N_mirror_b"],
            (Metric::NEff, System::Single) => vec!["n_eff", "n_eff_perturbative"],
            (Metric::NEff, System::Dual) => vec!["n_eff"],
            (Metric::MinPtEigs, _) => vec!["min_pt_eigs", "pt_0", "pt_1", "pt_2"],
            (Metric::FOpt, _) => vec!["F_opt", "nu"],
            (Metric::Stability, _) => vec!["stability"],
        };
        c.push("stable");
        c
    }
}

/// A validated sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPlan {
    /// Slow axis.
    pub axis1: Axis,
    /// Fast axis.
    pub axis2: Axis,
    /// Evaluated quantity.
    pub metric: Metric,
    /// Evaluated system.
    pub system: System,
}

impl SweepPlan {
    /// Checks axis names, ranges and point counts. With `allow_degenerate`
    /// a single-point axis is accepted.
    pub fn new(axis1: Axis, axis2: Axis, metric: Metric, system: System, allow_degenerate: bool) -> Result<Self> {
        for ax in [&axis1, &axis2] {
            if !NUMERIC_KEYS.contains(&ax.name.as_str()) {
                return Err(CliError::ConfigParse(format!("unknown axis parameter `{}`", ax.name)));
            }
            if !(ax.lo.is_finite() && ax.hi.is_finite()) {
                return Err(CliError::ConfigParse(format!("axis `{}` has a non-finite range", ax.name)));
            }
            let min = if allow_degenerate { 1 } else { 2 };
            if ax.count < min {
                return Err(CliError::ConfigParse(format!(
                    "axis `{}` needs at least {min} points, got {}",
                    ax.name, ax.count
                )));
            }
        }
        if axis1.name == axis2.name {
            return Err(CliError::ConfigParse("both axes sweep the same parameter".into()));
        }
        Ok(Self { axis1, axis2, metric, system })
    }

    /// CSV header line (without the trailing newline).
    pub fn header(&self) -> String {
        let mut cols = vec![self.axis1.name.as_str(), self.axis2.name.as_str()];
        cols.extend(self.metric.columns(self.system));
        cols.join(",")
    }

    /// Grid points in output order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let v2 = self.axis2.values();
        self.axis1.values().into_iter().flat_map(|x| v2.iter().map(move |&y| (x, y))).collect()
    }
}

/// Metric values and the stability flag of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    /// Metric followed by auxiliary columns; `NaN` when unavailable.
    pub values: Vec<f64>,
    /// Stability verdict; false also when the point could not be evaluated.
    pub stable: bool,
}

fn nan_point(n: usize, stable: bool) -> PointResult {
    PointResult { values: vec![f64::NAN; n], stable }
}

/// Evaluates one grid point. Unstable or failed points yield `NaN` values.
pub fn evaluate(plan: &SweepPlan, settings: &Settings) -> PointResult {
    let n = plan.metric.columns(plan.system).len() - 1;
    let out = match plan.system {
        System::Single => evaluate_single(plan.metric, settings),
        System::Dual => evaluate_dual(plan.metric, settings),
    };
    match out {
        Ok((values, stable)) => {
            if stable || plan.metric == Metric::Stability {
                PointResult { values, stable }
            } else {
                nan_point(n, false)
            }
        }
        Err(_) => nan_point(n, false),
    }
}

fn evaluate_single(metric: Metric, s: &Settings) -> Result<(Vec<f64>, bool)> {
    let dp = derive_params(&s.optomech())?;
    let st = assess_stability(&dp)?;
    if metric == Metric::Stability {
        return Ok((vec![st.max_re / dp.omega_m], st.stable));
    }
    if !st.stable {
        return Ok((vec![], false));
    }
    let model = drift_matrix(&dp)?;
    let opts = s.output_options();
    let steady = || steady_cm(&model, steady_method(opts.kernel), &QuadratureSpec::default());
    let values = match metric {
        Metric::ENIntracavity => {
            let v = steady()?;
            let r = intracavity_report(&v, &dp)?;
            vec![r.log_negativity, r.n_eff]
        }
        Metric::NEff => {
            let r = intracavity_report(&steady()?, &dp)?;
            vec![r.n_eff, r.n_eff_perturbative]
        }
        Metric::ENOutput => {
            let v = output_cm(&model, &[s.filter_a()?], &opts)?;
            vec![log_negativity_half(&v, 0, 1)?]
        }
        Metric::MinPtEigs => {
            let v = output_cm(&model, &[s.filter_a()?, s.filter_b()?], &opts)?;
            pt_values(tripartite_test_half(&v)?)
        }
        Metric::FOpt => fopt_values(&steady()?, [0, 1])?,
        Metric::Stability => unreachable!("handled above"),
    };
    Ok((values, true))
}

fn evaluate_dual(metric: Metric, s: &Settings) -> Result<(Vec<f64>, bool)> {
    let ss = steady_state_dual(&s.dual())?;
    let st = assess_stability_dual(&ss)?;
    if metric == Metric::Stability {
        return Ok((vec![st.max_re / ss.omega_m], st.stable));
    }
    if !st.stable {
        return Ok((vec![], false));
    }
    let (model, _) = drift_matrix_dual(&ss)?;
    let opts = s.output_options();
    let steady = || steady_cm(&model, steady_method(opts.kernel), &QuadratureSpec::default());
    let output = || output_cm_dual(&ss, &dual_filters(s)?, &opts).map_err(CliError::from);
    let values = match metric {
        Metric::ENIntracavity => {
            let v = steady()?;
            vec![log_negativity_half(&v, 0, 1)?, log_negativity_half(&v, 0, 2)?, log_negativity_half(&v, 1, 2)?]
        }
        Metric::NEff => {
            let v = steady()?;
            vec![(v[(0, 0)] + v[(1, 1)] - 1.0) / 2.0]
        }
        Metric::ENOutput => {
            let v = output()?;
            vec![log_negativity_half(&v, 1, 2)?, log_negativity_half(&v, 0, 1)?, log_negativity_half(&v, 0, 2)?]
        }
        Metric::MinPtEigs => pt_values(tripartite_test_half(&output()?)?),
        Metric::FOpt => fopt_values(&output()?, [1, 2])?,
        Metric::Stability => unreachable!("handled above"),
    };
    Ok((values, true))
}

fn pt_values(t: [f64; 3]) -> Vec<f64> {
    vec![t.iter().copied().fold(f64::NEG_INFINITY, f64::max), t[0], t[1], t[2]]
}

/// Optimal fidelity and `ν` of the two listed modes of a `VacuumHalf` matrix.
fn fopt_values(v: &optoent::numerics::Mat, modes: [usize; 2]) -> Result<Vec<f64>> {
    let idx = [2 * modes[0], 2 * modes[0] + 1, 2 * modes[1], 2 * modes[1] + 1];
    let sub = optoent::numerics::Mat::from_fn(4, 4, |i, j| v[(idx[i], idx[j])]);
    let res = optimal_tgcp(&half_state(&sub)?)?;
    Ok(vec![res.fidelity, res.nu])
}

/// Formats one CSV cell: shortest round-trip decimal or `NaN`.
fn cell(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:?}")
    }
}

/// Evaluated grid: one row per point in output order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    /// Column names, starting with the two axis names and ending with `stable`.
    pub columns: Vec<String>,
    /// Axis values, metric values and the stability flag (1 or 0) of each point.
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    /// CSV text with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let (flag, values) = row.split_last().expect("rows end with the stability flag");
            let cells: Vec<String> = values.iter().map(|&x| cell(x)).collect();
            let _ = writeln!(out, "{},{}", cells.join(","), *flag as u8);
        }
        out
    }
}

/// Evaluates a sweep on `threads` workers; 0 selects the default pool.
pub fn sweep_table(plan: &SweepPlan, settings: &Settings, threads: usize) -> Result<SweepTable> {
    let points = plan.points();
    let mut configs = Vec::with_capacity(points.len());
    for &(x, y) in &points {
        configs.push(settings.with(&plan.axis1.name, x)?.with(&plan.axis2.name, y)?);
    }
    let compute = || configs.par_iter().map(|c| evaluate(plan, c)).collect::<Vec<_>>();
    let results = if threads == 0 {
        compute()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::ConfigParse(format!("worker pool: {e}")))?
            .install(compute)
    };
    let rows = points
        .iter()
        .zip(results)
        .map(|(&(x, y), r)| {
            let mut row = vec![x, y];
            row.extend(r.values);
            row.push(if r.stable { 1.0 } else { 0.0 });
            row
        })
        .collect();
    Ok(SweepTable { columns: plan.header().split(',').map(String::from).collect(), rows })
}

/// [`sweep_table`] rendered as CSV.
pub fn run_sweep(plan: &SweepPlan, settings: &Settings, threads: usize) -> Result<String> {
    Ok(sweep_table(plan, settings, threads)?.to_csv())
}
