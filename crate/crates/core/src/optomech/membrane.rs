//! Mode splitting of a cavity with a partially transmitting membrane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::params::SPEED_OF_LIGHT;

/// Cavity of length `2L` with a membrane at `x = q₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembraneSpec {
    /// Half-length `L` in m.
    pub half_length: f64,
    /// Rest position `q₀` of the membrane in m.
    pub q0: f64,
    /// Intensity reflectivity `R`.
    pub reflectivity: f64,
    /// Mode index `n`.
    pub mode: u32,
}

impl MembraneSpec {
    /// Unperturbed mode frequency `ω_n = nπc/L`.
    pub fn omega_n(&self) -> f64 {
        self.mode as f64 * std::f64::consts::PI * SPEED_OF_LIGHT / self.half_length
    }

    /// Wave number `k_n = nπ/L`.
    pub fn k_n(&self) -> f64 {
        self.mode as f64 * std::f64::consts::PI / self.half_length
    }

    /// Transmissivity `T = 1 − R`.
    pub fn transmissivity(&self) -> f64 {
        1.0 - self.reflectivity
    }
}

/// Split frequencies and their sensitivity to the membrane displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembraneSplit {
    /// Lower mode `ω_n − δ₋` in rad/s.
    pub omega_minus: f64,
    /// Upper mode `ω_n + δ₊` in rad/s.
    pub omega_plus: f64,
    /// Downward shift `δ₋` in rad/s.
    pub delta_minus: f64,
    /// Upward shift `δ₊` in rad/s.
    pub delta_plus: f64,
    /// Dimensionless coupling `f`; the modes shift by `∓ f ω_n q / L`.
    pub f: f64,
}

/// Splits the degenerate pair of modes of index `n`.
pub fn membrane_split(spec: &MembraneSpec) -> Result<MembraneSplit> {
    let r = spec.reflectivity;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DomainError(format!("reflectivity {r} outside (0, 1)")));
    }
    if !(spec.half_length > 0.0) || spec.mode == 0 {
        return Err(Error::NonPositiveInput("membrane cavity length and mode index".into()));
    }
    let cos2 = (2.0 * spec.k_n() * spec.q0).cos();
    let sin2 = (2.0 * spec.k_n() * spec.q0).sin();
    let disc = 1.0 / r - cos2 * cos2;
    if disc <= 0.0 {
        return Err(Error::DomainError(format!("R⁻¹ − cos²(2k q₀) = {disc} ≤ 0")));
    }
    let scale = SPEED_OF_LIGHT / (2.0 * spec.half_length);
    let asr = r.sqrt().asin();
    let asc = (r.sqrt() * cos2).asin();
    let delta_minus = scale * (asr - asc);
    let delta_plus = scale * (std::f64::consts::PI - asc - asr);
    let wn = spec.omega_n();
    Ok(MembraneSplit {
        omega_minus: wn - delta_minus,
        omega_plus: wn + delta_plus,
        delta_minus,
        delta_plus,
        f: sin2 / disc.sqrt(),
    })
}

/// Residual `cot k(L + q₀) + cot k(L − q₀) − 2√(R/T)` of the eigenmode
/// condition at frequency `omega`, with `cos 2kq₀` taken at `k_n`.
pub fn membrane_residual(spec: &MembraneSpec, omega: f64) -> f64 {
    let k = omega / SPEED_OF_LIGHT;
    let l = spec.half_length;
    let c0 = (2.0 * spec.k_n() * spec.q0).cos();
    let phi = 2.0 * k * l;
    2.0 * phi.sin() / (c0 - phi.cos()) - 2.0 * (spec.reflectivity / spec.transmissivity()).sqrt()
}

/// Residual of the eigenmode condition at frequency `omega` with the exact `k`.
pub fn membrane_residual_exact(spec: &MembraneSpec, omega: f64) -> f64 {
    let k = omega / SPEED_OF_LIGHT;
    let (l, q) = (spec.half_length, spec.q0);
    1.0 / (k * (l + q)).tan() + 1.0 / (k * (l - q)).tan()
        - 2.0 * (spec.reflectivity / spec.transmissivity()).sqrt()
}
