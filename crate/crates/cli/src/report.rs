//! Single-point reports.

use optoent::gaussian::random::random_entangled_two_mode;
use optoent::gaussian::{log_negativity, parse_cm, Convention, GaussianState};
use optoent::numerics::{Mat, QuadratureSpec};
use optoent::optomech::{
    assess_stability, assess_stability_dual, derive_params, drift_matrix, drift_matrix_dual, intracavity_report,
    log_negativity_half, membrane_split, output_cm, output_cm_dual, steady_cm, steady_state_dual,
    tripartite_test_half, CharPolyCoeffs, DerivedParams, DualStability, DualSteadyState, FilterSpec,
    IntracavityReport, MembraneSpec, MembraneSplit, StabilityReport, SteadyMethod, ThermalKernel,
};
use optoent::teleport::{optimal_tgcp, AttenuationSide, FidelityBounds};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Settings;
use crate::error::{CliError, Result};

/// Tool identity and the hash of the resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    /// Tool name.
    pub tool: String,
    /// Tool version.
    pub version: String,
    /// SHA-256 of the canonical JSON of the resolved settings.
    pub config_hash: String,
    /// Seed used for random inputs, if any.
    pub seed: Option<u64>,
}

impl Provenance {
    /// Provenance of a run with the given settings.
    pub fn new(settings: &Settings, seed: Option<u64>) -> Self {
        Self {
            tool: "optoent".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: settings.hash(),
            seed,
        }
    }
}

/// Metric groups a report may compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MetricGroup {
    /// Steady-state covariance matrix and intracavity entanglement.
    Intracavity,
    /// Entanglement of the mirror with the first filtered output mode.
    Output,
    /// Both filters: pairwise entanglement and the tripartite test.
    Pair,
}

/// Derived rates of the single-laser system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedSummary {
    /// All derived parameters in SI units.
    #[serde(flatten)]
    pub params: DerivedParams,
    /// `G/ω_m`.
    pub g_over_omega_m: f64,
    /// `κ/ω_m`.
    pub kappa_over_omega_m: f64,
    /// `Δ/ω_m`.
    pub delta_over_omega_m: f64,
}

/// Output-mode metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSummary {
    /// Filters in output order.
    pub filters: Vec<FilterSpec>,
    /// Covariance matrix (`VacuumHalf`) of the mirror and filtered modes.
    pub cm: Vec<Vec<f64>>,
    /// Logarithmic negativity between the mirror and the first filtered mode.
    #[serde(rename = "E_N_mirror_first")]
    pub en_mirror_first: f64,
    /// Logarithmic negativity between the mirror and the second filtered mode.
    #[serde(rename = "E_N_mirror_second", skip_serializing_if = "Option::is_none")]
    pub en_mirror_second: Option<f64>,
    /// Logarithmic negativity between the two filtered modes.
    #[serde(rename = "E_N_filters", skip_serializing_if = "Option::is_none")]
    pub en_filters: Option<f64>,
    /// Minimum partially transposed eigenvalues, one per mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_pt_eigs: Option<[f64; 3]>,
}

/// Report of the single-laser system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    /// Tool version and configuration hash.
    pub provenance: Provenance,
    /// Resolved configuration.
    pub inputs: Settings,
    /// Derived rates.
    pub derived: DerivedSummary,
    /// Stability verdict.
    pub stability: StabilityReport,
    /// Intracavity steady state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intracavity: Option<IntracavityReport>,
    /// Intracavity covariance matrix (`VacuumHalf`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_cm: Option<Vec<Vec<f64>>>,
    /// Output-mode metrics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSummary>,
}

/// Row-major nested vectors of a matrix.
pub fn rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub(crate) fn steady_method(kernel: ThermalKernel) -> SteadyMethod {
    match kernel {
        ThermalKernel::Markov => SteadyMethod::Lyapunov,
        ThermalKernel::Exact => SteadyMethod::SpectralExact,
    }
}

fn output_summary(v: Mat, filters: Vec<FilterSpec>) -> Result<OutputSummary> {
    let pair = filters.len() == 2;
    Ok(OutputSummary {
        en_mirror_first: log_negativity_half(&v, 0, 1)?,
        en_mirror_second: if pair { Some(log_negativity_half(&v, 0, 2)?) } else { None },
        en_filters: if pair { Some(log_negativity_half(&v, 1, 2)?) } else { None },
        min_pt_eigs: if pair { Some(tripartite_test_half(&v)?) } else { None },
        cm: rows(&v),
        filters,
    })
}

/// Computes the single-laser report.
///
/// An unstable operating point with metrics requested yields the partial
/// report together with `Some(max_re)`.
pub fn single_report(settings: &Settings, metrics: &[MetricGroup]) -> Result<(ReportRecord, Option<f64>)> {
    let dp = derive_params(&settings.optomech())?;
    let stability = assess_stability(&dp)?;
    let wm = dp.omega_m;
    let mut rec = ReportRecord {
        provenance: Provenance::new(settings, None),
        inputs: settings.clone(),
        derived: DerivedSummary {
            g_over_omega_m: dp.g / wm,
            kappa_over_omega_m: dp.kappa / wm,
            delta_over_omega_m: dp.delta / wm,
            params: dp.clone(),
        },
        stability,
        intracavity: None,
        steady_cm: None,
        output: None,
    };
    if metrics.is_empty() {
        return Ok((rec, None));
    }
    if !stability.stable {
        return Ok((rec, Some(stability.max_re)));
    }
    let model = drift_matrix(&dp)?;
    let opts = settings.output_options();
    if metrics.contains(&MetricGroup::Intracavity) {
        let v = steady_cm(&model, steady_method(opts.kernel), &QuadratureSpec::default())?;
        rec.intracavity = Some(intracavity_report(&v, &dp)?);
        rec.steady_cm = Some(rows(&v));
    }
    let filters = if metrics.contains(&MetricGroup::Pair) {
        Some(vec![settings.filter_a()?, settings.filter_b()?])
    } else if metrics.contains(&MetricGroup::Output) {
        Some(vec![settings.filter_a()?])
    } else {
        None
    };
    if let Some(fs) = filters {
        let v = output_cm(&model, &fs, &opts)?;
        rec.output = Some(output_summary(v, fs)?);
    }
    Ok((rec, None))
}

/// Intracavity entanglement of the two-laser system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualIntracavity {
    /// Covariance matrix (`VacuumHalf`) of mirror, mode A and mode B.
    pub cm: Vec<Vec<f64>>,
    /// Mirror–A logarithmic negativity.
    #[serde(rename = "E_N_mirror_a")]
    pub en_mirror_a: f64,
    /// Mirror–B logarithmic negativity.
    #[serde(rename = "E_N_mirror_b")]
    pub en_mirror_b: f64,
    /// A–B logarithmic negativity.
    #[serde(rename = "E_N_optical")]
    pub en_optical: f64,
    /// Effective phonon number.
    pub n_eff: f64,
}

/// Report of the two-laser system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualReportRecord {
    /// Tool version and configuration hash.
    pub provenance: Provenance,
    /// Resolved configuration.
    pub inputs: Settings,
    /// Stationary amplitudes and couplings.
    pub steady_state: DualSteadyState,
    /// Characteristic-polynomial coefficients `c₁ … c₆`.
    pub char_poly: [f64; 6],
    /// Stability verdict.
    pub stability: DualStability,
    /// Intracavity entanglement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intracavity: Option<DualIntracavity>,
    /// Output modes filtered from cavity modes A and B.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSummary>,
}

/// The two configured filters, reading modes A and B.
pub fn dual_filters(settings: &Settings) -> Result<[FilterSpec; 2]> {
    Ok([settings.filter_a()?.on_cavity_mode(0), settings.filter_b()?.on_cavity_mode(1)])
}

/// Computes the two-laser report; see [`single_report`] for the unstable case.
pub fn dual_report(settings: &Settings, metrics: &[MetricGroup]) -> Result<(DualReportRecord, Option<f64>)> {
    let ss = steady_state_dual(&settings.dual())?;
    let stability = assess_stability_dual(&ss)?;
    let mut rec = DualReportRecord {
        provenance: Provenance::new(settings, None),
        inputs: settings.clone(),
        char_poly: CharPolyCoeffs::of(&ss).c,
        steady_state: ss.clone(),
        stability,
        intracavity: None,
        output: None,
    };
    if metrics.is_empty() {
        return Ok((rec, None));
    }
    if !stability.stable {
        return Ok((rec, Some(stability.max_re)));
    }
    let (model, _) = drift_matrix_dual(&ss)?;
    let opts = settings.output_options();
    if metrics.contains(&MetricGroup::Intracavity) {
        let v = steady_cm(&model, steady_method(opts.kernel), &QuadratureSpec::default())?;
        rec.intracavity = Some(DualIntracavity {
            en_mirror_a: log_negativity_half(&v, 0, 1)?,
            en_mirror_b: log_negativity_half(&v, 0, 2)?,
            en_optical: log_negativity_half(&v, 1, 2)?,
            n_eff: (v[(0, 0)] + v[(1, 1)] - 1.0) / 2.0,
            cm: rows(&v),
        });
    }
    if metrics.contains(&MetricGroup::Output) || metrics.contains(&MetricGroup::Pair) {
        let fs = dual_filters(settings)?;
        let v = output_cm_dual(&ss, &fs, &opts)?;
        rec.output = Some(output_summary(v, fs.to_vec())?);
    }
    Ok((rec, None))
}

/// Optimal local map of a teleportation resource.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapSummary {
    /// Symplectic map on the first mode.
    #[serde(rename = "Sa")]
    pub sa: Vec<Vec<f64>>,
    /// Symplectic map on the second mode.
    #[serde(rename = "Sb")]
    pub sb: Vec<Vec<f64>>,
    /// Mode carrying the attenuation.
    pub side: AttenuationSide,
    /// Amplitude transmissivity.
    pub tau: f64,
}

/// Entries of the optimal form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormSummary {
    /// Lower diagonal entry of `A`.
    pub n: f64,
    /// Lower diagonal entry of `B`.
    pub m: f64,
    /// Lower diagonal entry of `C`.
    pub d: f64,
    /// Offset `λ`.
    pub lambda: f64,
}

/// Teleportation report of a two-mode resource.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportRecord {
    /// Tool version; the configuration hash is that of the input matrix.
    pub provenance: Provenance,
    /// Smallest partially transposed symplectic eigenvalue.
    pub nu: f64,
    /// Logarithmic negativity.
    #[serde(rename = "E_N")]
    pub e_n: f64,
    /// Fidelity bounds; absent for separable states.
    pub bounds: Option<FidelityBounds>,
    /// Optimal fidelity.
    #[serde(rename = "F_opt")]
    pub f_opt: f64,
    /// Optimal local map.
    pub map: MapSummary,
    /// Form reached by the map; absent for separable states.
    pub standard_form: Option<FormSummary>,
}

/// Source of the teleportation resource.
#[derive(Debug, Clone, PartialEq)]
pub enum TeleportInput {
    /// Contents of a covariance-matrix file.
    Text(String),
    /// Seeded random entangled state.
    Random(u64),
}

/// Computes the teleportation report.
pub fn teleport_report(input: &TeleportInput) -> Result<TeleportRecord> {
    let (state, seed, text) = match input {
        TeleportInput::Text(t) => (parse_cm(t)?, None, t.clone()),
        TeleportInput::Random(seed) => {
            let st = random_entangled_two_mode(&mut ChaCha8Rng::seed_from_u64(*seed), 0.95);
            (st, Some(*seed), String::new())
        }
    };
    if state.modes() != 2 {
        return Err(CliError::Compute(optoent::Error::DimensionMismatch(format!(
            "teleportation needs a two-mode state, got {}",
            state.modes()
        ))));
    }
    let res = optimal_tgcp(&state)?;
    let neg = log_negativity(&state)?;
    let hash = {
        use sha2::{Digest, Sha256};
        let bytes = if text.is_empty() { optoent::gaussian::format_cm(&state) } else { text };
        Sha256::digest(bytes.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    };
    Ok(TeleportRecord {
        provenance: Provenance {
            tool: "optoent".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: hash,
            seed,
        },
        nu: res.nu,
        e_n: neg.log_negativity,
        bounds: res.bounds,
        f_opt: res.fidelity,
        map: MapSummary { sa: rows(&res.sa), sb: rows(&res.sb), side: res.side, tau: res.tau },
        standard_form: res.form.map(|f| FormSummary { n: f.n, m: f.m, d: f.d, lambda: f.lambda }),
    })
}

/// Membrane split report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembraneRecord {
    /// Tool version and configuration hash.
    pub provenance: Provenance,
    /// Geometry.
    pub geometry: MembraneSpec,
    /// Unperturbed mode frequency `ω_n` in rad/s.
    pub omega_n: f64,
    /// Split frequencies and coupling.
    pub split: MembraneSplit,
}

/// Computes the membrane split report.
pub fn membrane_report(settings: &Settings) -> Result<MembraneRecord> {
    let geometry = settings.membrane();
    Ok(MembraneRecord {
        provenance: Provenance::new(settings, None),
        omega_n: geometry.omega_n(),
        split: membrane_split(&geometry)?,
        geometry,
    })
}

/// Teleportation state of a `VacuumHalf` two-mode block.
pub(crate) fn half_state(v: &Mat) -> Result<GaussianState> {
    Ok(GaussianState::new(v.clone(), None, Convention::VacuumHalf)?)
}
