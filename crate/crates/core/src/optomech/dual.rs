//! Cavity driven by two lasers on two modes, coupled to one mirror.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigenvalues, max_real_part, Mat};

use super::dynamics::{DriftModel, MechanicalBath};
use super::filters::FilterSpec;
use super::output::{output_cm, OutputOptions};
use super::params::{
    bare_coupling, cavity_decay, drive_amplitude, thermal_occupation, Detuning, FIXED_POINT_DAMPING,
    FIXED_POINT_MAX_ITER, FIXED_POINT_TOL, SPEED_OF_LIGHT,
};
use crate::numerics::damped_fixed_point;

/// One driving laser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserSpec {
    /// Power in W.
    pub power: f64,
    /// Wavelength in m.
    pub wavelength: f64,
    /// Detuning from its cavity mode.
    pub detuning: Detuning,
}

/// Mirror and cavity shared by both lasers, with the two lasers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualConfig {
    /// Mechanical angular frequency in rad/s.
    pub omega_m: f64,
    /// Mechanical quality factor.
    pub q_factor: f64,
    /// Mirror mass in kg.
    pub mass: f64,
    /// Cavity length in m.
    pub length: f64,
    /// Cavity finesse, common to both modes.
    pub finesse: f64,
    /// Bath temperature in K.
    pub temperature: f64,
    /// Laser driving mode A.
    pub laser_a: LaserSpec,
    /// Laser driving mode B.
    pub laser_b: LaserSpec,
}

impl DualConfig {
    /// Checks positivity of every parameter.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_m", self.omega_m),
            ("q_factor", self.q_factor),
            ("mass", self.mass),
            ("length", self.length),
            ("finesse", self.finesse),
            ("laser_a.wavelength", self.laser_a.wavelength),
            ("laser_b.wavelength", self.laser_b.wavelength),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveInput(format!("{name} = {v}")));
            }
        }
        for (name, v) in [
            ("temperature", self.temperature),
            ("laser_a.power", self.laser_a.power),
            ("laser_b.power", self.laser_b.power),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveInput(format!("{name} = {v}")));
            }
        }
        if matches!(self.laser_a.detuning, Detuning::Effective(_)) != matches!(self.laser_b.detuning, Detuning::Effective(_)) {
            return Err(Error::DomainError("both detunings must be effective or both bare".into()));
        }
        Ok(())
    }
}

/// Stationary amplitudes and effective couplings of the two-laser system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualSteadyState {
    /// Mode-A amplitude, real and non-negative.
    pub a_s: f64,
    /// Mode-B amplitude, real and non-negative.
    pub b_s: f64,
    /// Stationary mirror displacement.
    pub q_s: f64,
    /// Effective detuning of mode A in rad/s.
    pub delta_a: f64,
    /// Effective detuning of mode B in rad/s.
    pub delta_b: f64,
    /// Effective coupling `G_A = √2 G₀A a_s`.
    pub g_a: f64,
    /// Effective coupling `G_B = √2 G₀B b_s`.
    pub g_b: f64,
    /// Single-photon coupling of mode A.
    pub g0_a: f64,
    /// Single-photon coupling of mode B.
    pub g0_b: f64,
    /// Driving rate of mode A.
    pub e_a: f64,
    /// Driving rate of mode B.
    pub e_b: f64,
    /// Cavity decay rate.
    pub kappa: f64,
    /// Mechanical frequency.
    pub omega_m: f64,
    /// Mechanical damping.
    pub gamma_m: f64,
    /// Mean thermal phonon number.
    pub nbar: f64,
    /// Bath temperature.
    pub temperature: f64,
}

impl DualSteadyState {
    /// Relative residuals of the amplitude and displacement equations.
    pub fn residuals(&self) -> [f64; 3] {
        let rel = |x: f64, y: f64| if y == 0.0 { x.abs() } else { (x - y).abs() / y.abs() };
        [
            rel(self.a_s, self.e_a / self.kappa.hypot(self.delta_a)),
            rel(self.b_s, self.e_b / self.kappa.hypot(self.delta_b)),
            rel(
                self.q_s,
                (self.g0_a * self.a_s * self.a_s + self.g0_b * self.b_s * self.b_s) / self.omega_m,
            ),
        ]
    }

    /// Mechanical bath of the mirror.
    pub fn bath(&self) -> MechanicalBath {
        MechanicalBath {
            omega_m: self.omega_m,
            gamma_m: self.gamma_m,
            nbar: self.nbar,
            temperature: self.temperature,
        }
    }
}

/// Solves the stationary amplitudes.
///
/// With bare detunings each mode is shifted by its own radiation-pressure
/// displacement, `Δ_x = Δ₀x − G₀x q_s`, and `q_s` is found by damped iteration.
pub fn steady_state_dual(cfg: &DualConfig) -> Result<DualSteadyState> {
    cfg.validate()?;
    let kappa = cavity_decay(cfg.length, cfg.finesse);
    let g0_a = bare_coupling(cfg.laser_a.wavelength, cfg.length, cfg.mass, cfg.omega_m);
    let g0_b = bare_coupling(cfg.laser_b.wavelength, cfg.length, cfg.mass, cfg.omega_m);
    let omega_c = |l: &LaserSpec| 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / l.wavelength;
    let (d_a, d_b, bare) = match (cfg.laser_a.detuning, cfg.laser_b.detuning) {
        (Detuning::Effective(a), Detuning::Effective(b)) => (a, b, false),
        (Detuning::Bare(a), Detuning::Bare(b)) => (a, b, true),
        _ => unreachable!("validated above"),
    };
    let e_a = drive_amplitude(cfg.laser_a.power, kappa, omega_c(&cfg.laser_a) - d_a);
    let e_b = drive_amplitude(cfg.laser_b.power, kappa, omega_c(&cfg.laser_b) - d_b);
    let amps = |da: f64, db: f64| (e_a / kappa.hypot(da), e_b / kappa.hypot(db));
    let (delta_a, delta_b) = if bare {
        let q_s = damped_fixed_point(
            |q| {
                let (a, b) = amps(d_a - g0_a * q, d_b - g0_b * q);
                (g0_a * a * a + g0_b * b * b) / cfg.omega_m
            },
            0.0,
            FIXED_POINT_DAMPING,
            FIXED_POINT_TOL,
            FIXED_POINT_MAX_ITER,
        )?;
        (d_a - g0_a * q_s, d_b - g0_b * q_s)
    } else {
        (d_a, d_b)
    };
    let (a_s, b_s) = amps(delta_a, delta_b);
    let s2 = std::f64::consts::SQRT_2;
    Ok(DualSteadyState {
        a_s,
        b_s,
        q_s: (g0_a * a_s * a_s + g0_b * b_s * b_s) / cfg.omega_m,
        delta_a,
        delta_b,
        g_a: s2 * g0_a * a_s,
        g_b: s2 * g0_b * b_s,
        g0_a,
        g0_b,
        e_a,
        e_b,
        kappa,
        omega_m: cfg.omega_m,
        gamma_m: cfg.omega_m / cfg.q_factor,
        nbar: thermal_occupation(cfg.omega_m, cfg.temperature),
        temperature: cfg.temperature,
    })
}

/// Coefficients of `det(λI − A) = λ⁶ + c₁λ⁵ + … + c₆`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPolyCoeffs {
    /// `[c₁, …, c₆]`.
    pub c: [f64; 6],
}

impl CharPolyCoeffs {
    /// Closed-form coefficients in terms of the rates and couplings.
    pub fn from_rates(omega_m: f64, gamma_m: f64, kappa: f64, da: f64, db: f64, ga: f64, gb: f64) -> Self {
        let (wm, gm, k) = (omega_m, gamma_m, kappa);
        let (k2, wm2, da2, db2) = (k * k, wm * wm, da * da, db * db);
        let drive = ga * ga * da + gb * gb * db;
        let c1 = gm + 4.0 * k;
        let c2 = da2 + db2 + 4.0 * gm * k + 6.0 * k2 + wm2;
        let c3 = gm * (da2 + db2 + 6.0 * k2) + 2.0 * k * (da2 + db2 + 2.0 * (k2 + wm2));
        let c4 = k2 * k2 + 2.0 * gm * k * (db2 + 2.0 * k2) + 6.0 * k2 * wm2 + db2 * (k2 + wm2)
            + da2 * (db2 + 2.0 * gm * k + k2 + wm2)
            - wm * drive;
        let c5 = gm * (da2 + k2) * (db2 + k2) + 2.0 * k * wm2 * (da2 + db2 + 2.0 * k2) - 2.0 * k * wm * drive;
        let c6 = wm2 * (da2 + k2) * (db2 + k2) - wm * (gb * gb * db * (da2 + k2) + ga * ga * da * (db2 + k2));
        Self { c: [c1, c2, c3, c4, c5, c6] }
    }

    /// Coefficients for a steady state.
    pub fn of(ss: &DualSteadyState) -> Self {
        Self::from_rates(ss.omega_m, ss.gamma_m, ss.kappa, ss.delta_a, ss.delta_b, ss.g_a, ss.g_b)
    }
}

/// 6×6 drift model of the mirror and both cavity modes, with its
/// characteristic-polynomial coefficients.
pub fn drift_matrix_dual(ss: &DualSteadyState) -> Result<(DriftModel, CharPolyCoeffs)> {
    let (wm, gm, k) = (ss.omega_m, ss.gamma_m, ss.kappa);
    let (ga, gb, da, db) = (ss.g_a, ss.g_b, ss.delta_a, ss.delta_b);
    let a = Mat::from_row_slice(
        6,
        6,
        &[
            0.0, wm, 0.0, 0.0, 0.0, 0.0, //
            -wm, -gm, ga, 0.0, gb, 0.0, //
            0.0, 0.0, -k, da, 0.0, 0.0, //
            ga, 0.0, -da, -k, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, -k, db, //
            gb, 0.0, 0.0, 0.0, -db, -k,
        ],
    );
    Ok((DriftModel::new(a, ss.bath(), k)?, CharPolyCoeffs::of(ss)))
}

/// Stability of the two-laser system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualStability {
    /// All eigenvalues have negative real parts.
    pub stable: bool,
    /// `|G_A| = |G_B|` and `Δ_A = −Δ_B` to `1e-9` relative.
    pub balance: bool,
    /// Largest real part among the eigenvalues.
    pub max_re: f64,
}

/// Relative tolerance of the balance test.
pub const BALANCE_TOL: f64 = 1e-9;

/// Eigenvalue stability and the balance condition.
pub fn assess_stability_dual(ss: &DualSteadyState) -> Result<DualStability> {
    let (model, _) = drift_matrix_dual(ss)?;
    let max_re = max_real_part(&model.a)?;
    let close = |x: f64, y: f64| (x - y).abs() <= BALANCE_TOL * x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
    let balance = close(ss.g_a.abs(), ss.g_b.abs()) && close(ss.delta_a, -ss.delta_b);
    Ok(DualStability { stable: max_re < 0.0, balance, max_re })
}

/// Eigenvalues of the uncoupled system: `±iω_m` damped by `γ_m` and `−κ ± iΔ_x`.
pub fn uncoupled_eigenvalues(ss: &DualSteadyState) -> Result<Vec<crate::numerics::C64>> {
    let free = DualSteadyState { g_a: 0.0, g_b: 0.0, ..*ss };
    eigenvalues(&drift_matrix_dual(&free)?.0.a)
}

/// Covariance matrix (`VacuumHalf`) of the mirror and two filtered output modes.
pub fn output_cm_dual(ss: &DualSteadyState, filters: &[FilterSpec; 2], opts: &OutputOptions) -> Result<Mat> {
    let (model, _) = drift_matrix_dual(ss)?;
    output_cm(&model, filters, opts)
}
