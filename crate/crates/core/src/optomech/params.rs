//! Physical constants, optomechanical configuration and derived couplings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::damped_fixed_point;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Damping of the fixed-point iteration for the bare-detuning steady state.
pub const FIXED_POINT_DAMPING: f64 = 0.5;
/// Relative tolerance of the fixed-point iteration.
pub const FIXED_POINT_TOL: f64 = 1e-10;
/// Iteration cap of the fixed-point iteration.
pub const FIXED_POINT_MAX_ITER: usize = 10_000;

/// How the cavity detuning is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum Detuning {
    /// Effective detuning `Δ` in rad/s, including the radiation-pressure shift.
    Effective(f64),
    /// Bare detuning `Δ₀ = ω_c − ω₀` in rad/s.
    Bare(f64),
}

/// Cavity, mirror and laser parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptomechConfig {
    /// Mechanical angular frequency `ω_m` in rad/s.
    pub omega_m: f64,
    /// Mechanical quality factor; `γ_m = ω_m / Q`.
    pub q_factor: f64,
    /// Effective mirror mass in kg.
    pub mass: f64,
    /// Cavity length in m.
    pub length: f64,
    /// Cavity finesse.
    pub finesse: f64,
    /// Laser wavelength in m.
    pub wavelength: f64,
    /// Input laser power in W.
    pub power: f64,
    /// Cavity detuning.
    pub detuning: Detuning,
    /// Mirror bath temperature in K.
    pub temperature: f64,
}

impl OptomechConfig {
    /// Checks that every parameter is finite and positive where required.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_m", self.omega_m),
            ("q_factor", self.q_factor),
            ("mass", self.mass),
            ("length", self.length),
            ("finesse", self.finesse),
            ("wavelength", self.wavelength),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveInput(format!("{name} = {value}")));
            }
        }
        for (name, value) in [("power", self.power), ("temperature", self.temperature)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::NonPositiveInput(format!("{name} = {value}")));
            }
        }
        let d = match self.detuning {
            Detuning::Effective(d) | Detuning::Bare(d) => d,
        };
        if !d.is_finite() {
            return Err(Error::DomainError("detuning must be finite".into()));
        }
        Ok(())
    }

    /// Mechanical damping rate `γ_m = ω_m / Q`.
    pub fn gamma_m(&self) -> f64 {
        self.omega_m / self.q_factor
    }
}

/// Cavity decay rate `κ = π c / (L F)`.
pub fn cavity_decay(length: f64, finesse: f64) -> f64 {
    std::f64::consts::PI * SPEED_OF_LIGHT / (length * finesse)
}

/// Single-photon coupling `G₀ = (ω_c / L) √(ħ / (m ω_m))`.
pub fn bare_coupling(wavelength: f64, length: f64, mass: f64, omega_m: f64) -> f64 {
    let omega_c = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength;
    omega_c / length * (HBAR / (mass * omega_m)).sqrt()
}

/// Mean thermal occupation `1 / (e^{ħω/k_B T} − 1)`; zero at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (BOLTZMANN * temperature)).exp_m1()
}

/// Driving rate `|E| = √(2 P κ / (ħ ω₀))`.
pub fn drive_amplitude(power: f64, kappa: f64, omega_laser: f64) -> f64 {
    (2.0 * power * kappa / (HBAR * omega_laser)).sqrt()
}

/// Quantities derived from an [`OptomechConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Cavity decay rate `κ` in rad/s.
    pub kappa: f64,
    /// Single-photon coupling `G₀` in rad/s.
    pub g0: f64,
    /// Driving rate `|E|` in rad/s.
    pub e_abs: f64,
    /// Stationary intracavity amplitude `α_s`, chosen real and positive.
    pub alpha_s: f64,
    /// Effective detuning `Δ` in rad/s.
    pub delta: f64,
    /// Effective coupling `G = √2 G₀ α_s` in rad/s.
    pub g: f64,
    /// Mean thermal phonon number `n̄`.
    pub nbar: f64,
    /// Stationary mirror displacement `q_s = G₀ α_s² / ω_m`.
    pub q_s: f64,
    /// Mechanical frequency `ω_m` in rad/s.
    pub omega_m: f64,
    /// Mechanical damping `γ_m` in rad/s.
    pub gamma_m: f64,
    /// Bath temperature in K.
    pub temperature: f64,
}

/// Derives the linearized couplings from the physical parameters.
///
/// With a bare detuning the stationary displacement solves
/// `q_s = G₀ |E|² / (ω_m (κ² + (Δ₀ − G₀ q_s)²))` by damped iteration; a
/// bistable operating point is reported as [`Error::FixedPointDiverged`].
pub fn derive_params(cfg: &OptomechConfig) -> Result<DerivedParams> {
    cfg.validate()?;
    let kappa = cavity_decay(cfg.length, cfg.finesse);
    let g0 = bare_coupling(cfg.wavelength, cfg.length, cfg.mass, cfg.omega_m);
    let omega_c = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / cfg.wavelength;
    let nbar = thermal_occupation(cfg.omega_m, cfg.temperature);
    let (delta, e_abs) = match cfg.detuning {
        Detuning::Effective(delta) => (delta, drive_amplitude(cfg.power, kappa, omega_c - delta)),
        Detuning::Bare(delta0) => {
            let e_abs = drive_amplitude(cfg.power, kappa, omega_c - delta0);
            let e2 = e_abs * e_abs;
            let q_s = damped_fixed_point(
                |q| {
                    let d = delta0 - g0 * q;
                    g0 * e2 / (cfg.omega_m * (kappa * kappa + d * d))
                },
                0.0,
                FIXED_POINT_DAMPING,
                FIXED_POINT_TOL,
                FIXED_POINT_MAX_ITER,
            )?;
            (delta0 - g0 * q_s, e_abs)
        }
    };
    let alpha_s = e_abs / kappa.hypot(delta);
    Ok(DerivedParams {
        kappa,
        g0,
        e_abs,
        alpha_s,
        delta,
        g: g0 * alpha_s * std::f64::consts::SQRT_2,
        nbar,
        q_s: g0 * alpha_s * alpha_s / cfg.omega_m,
        omega_m: cfg.omega_m,
        gamma_m: cfg.gamma_m(),
        temperature: cfg.temperature,
    })
}

/// Derived parameters specified directly by their rates, bypassing the
/// physical configuration. `G₀`, `|E|` and `α_s` are set to zero.
pub fn params_from_rates(
    omega_m: f64,
    gamma_m: f64,
    kappa: f64,
    delta: f64,
    g: f64,
    nbar: f64,
) -> DerivedParams {
    DerivedParams {
        kappa,
        g0: 0.0,
        e_abs: 0.0,
        alpha_s: 0.0,
        delta,
        g,
        nbar,
        q_s: 0.0,
        omega_m,
        gamma_m,
        temperature: if nbar > 0.0 {
            HBAR * omega_m / (BOLTZMANN * (1.0 + 1.0 / nbar).ln())
        } else {
            0.0
        },
    }
}
