//! Causal filter functions selecting traveling output modes.
//!
//! A filter `g(t)` defines the output mode `a_g = ∫ g(t) a_out(t) dt`. Its
//! transform is `g̃(ω) = (2π)^{-1/2} ∫ g(t) e^{iωt} dt`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_interval, CMat, Mat, QuadratureSpec, C64};

/// Shape of a filter function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum FilterShape {
    /// `g(t) = e^{−iΩt} / √τ` on `[0, τ]`.
    Step {
        /// Integration time in s.
        tau: f64,
    },
    /// `g(t) = √(2γ) e^{−(γ + iΩ)t}` for `t ≥ 0`.
    Exponential {
        /// Bandwidth in rad/s.
        gamma: f64,
    },
}

/// A filter with its center frequency and the cavity mode it reads out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Filter shape and width.
    pub shape: FilterShape,
    /// Center frequency `Ω` in rad/s, relative to the driving laser.
    pub center: f64,
    /// Index of the cavity mode whose output field is filtered.
    pub cavity_mode: usize,
}

/// `(1 − e^{−z}) / z` without cancellation near zero.
fn phi(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        C64::new(1.0, 0.0) - z / 2.0 + z * z / 6.0 - z * z * z / 24.0
    } else {
        (C64::new(1.0, 0.0) - (-z).exp()) / z
    }
}

impl FilterSpec {
    /// Step filter of duration `tau` centered at `center`.
    pub fn step(center: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite() && center.is_finite()) {
            return Err(Error::NonPositiveInput(format!("step filter τ = {tau}")));
        }
        Ok(Self { shape: FilterShape::Step { tau }, center, cavity_mode: 0 })
    }

    /// Step filter with `ε = ω_m τ`.
    pub fn step_eps(center: f64, epsilon: f64, omega_m: f64) -> Result<Self> {
        Self::step(center, epsilon / omega_m)
    }

    /// Exponential filter of bandwidth `gamma` centered at `center`.
    pub fn exponential(center: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite() && center.is_finite()) {
            return Err(Error::NonPositiveInput(format!("exponential filter γ = {gamma}")));
        }
        Ok(Self { shape: FilterShape::Exponential { gamma }, center, cavity_mode: 0 })
    }

    /// Exponential filter with `ε = ω_m / γ`.
    pub fn exponential_eps(center: f64, epsilon: f64, omega_m: f64) -> Result<Self> {
        Self::exponential(center, omega_m / epsilon)
    }

    /// Same filter reading out another cavity mode.
    pub fn on_cavity_mode(mut self, mode: usize) -> Self {
        self.cavity_mode = mode;
        self
    }

    /// Dimensionless inverse bandwidth `ε`: `ω_m τ` or `ω_m / γ`.
    pub fn epsilon(&self, omega_m: f64) -> f64 {
        match self.shape {
            FilterShape::Step { tau } => omega_m * tau,
            FilterShape::Exponential { gamma } => omega_m / gamma,
        }
    }

    /// Spectral width: `1/τ` or `γ`.
    pub fn bandwidth(&self) -> f64 {
        match self.shape {
            FilterShape::Step { tau } => 1.0 / tau,
            FilterShape::Exponential { gamma } => gamma,
        }
    }

    /// Time-domain amplitude `g(t)`.
    pub fn time_domain(&self, t: f64) -> C64 {
        let phase = C64::new(0.0, -self.center * t).exp();
        match self.shape {
            FilterShape::Step { tau } => {
                if (0.0..=tau).contains(&t) {
                    phase / tau.sqrt()
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            FilterShape::Exponential { gamma } => {
                if t >= 0.0 {
                    phase * (2.0 * gamma).sqrt() * (-gamma * t).exp()
                } else {
                    C64::new(0.0, 0.0)
                }
            }
        }
    }

    /// `∫ |g(t)|² dt`, evaluated in closed form.
    pub fn norm_sq(&self) -> f64 {
        match self.shape {
            FilterShape::Step { tau } => (1.0 / tau.sqrt()).powi(2) * tau,
            FilterShape::Exponential { gamma } => 2.0 * gamma / (2.0 * gamma),
        }
    }

    /// Unnormalized transform `Ĝ(ω) = ∫ g(t) e^{iωt} dt = √(2π) g̃(ω)`.
    pub fn transform_full(&self, omega: f64) -> C64 {
        let x = omega - self.center;
        match self.shape {
            FilterShape::Step { tau } => {
                let h = 0.5 * x * tau;
                let sinc = if h.abs() < 1e-8 { 1.0 - h * h / 6.0 } else { h.sin() / h };
                C64::new(0.0, h).exp() * (tau.sqrt() * sinc)
            }
            FilterShape::Exponential { gamma } => {
                (2.0 * gamma).sqrt() / C64::new(gamma, self.center - omega)
            }
        }
    }

    /// Transform `g̃(ω)`; for the exponential filter `√(γ/π) / (γ + i(Ω − ω))`.
    pub fn transform(&self, omega: f64) -> C64 {
        self.transform_full(omega) / (2.0 * std::f64::consts::PI).sqrt()
    }
}

/// Overlap `∫ g_j(t) g_k(t)* dt` in closed form.
pub fn overlap(gj: &FilterSpec, gk: &FilterSpec) -> C64 {
    let delta = gj.center - gk.center;
    match (gj.shape, gk.shape) {
        (FilterShape::Step { tau: tj }, FilterShape::Step { tau: tk }) => {
            let m = tj.min(tk);
            phi(C64::new(0.0, delta * m)) * (m / (tj * tk).sqrt())
        }
        (FilterShape::Exponential { gamma: a }, FilterShape::Exponential { gamma: b }) => {
            C64::new(2.0 * (a * b).sqrt(), 0.0) / C64::new(a + b, delta)
        }
        (FilterShape::Step { tau }, FilterShape::Exponential { gamma }) => {
            phi(C64::new(gamma, delta) * tau) * ((2.0 * gamma / tau).sqrt() * tau)
        }
        (FilterShape::Exponential { .. }, FilterShape::Step { .. }) => overlap(gk, gj).conj(),
    }
}

/// Threshold above which two filters on the same cavity mode are reported
/// as non-orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

/// A validated set of filters with their overlap matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    /// The filters, in output order.
    pub filters: Vec<FilterSpec>,
    /// `overlaps[(j, k)] = ∫ g_j g_k* dt` for filters on the same cavity mode, zero otherwise.
    pub overlaps: CMat,
}

/// Validates a list of filters and computes their overlaps.
///
/// With `require_orthogonal`, two filters on the same cavity mode whose
/// overlap exceeds [`ORTHOGONALITY_TOL`] yield [`Error::NotOrthogonal`].
pub fn make_filters(specs: &[FilterSpec], require_orthogonal: bool) -> Result<FilterSet> {
    let n = specs.len();
    let mut overlaps = CMat::zeros(n, n);
    for (j, gj) in specs.iter().enumerate() {
        let norm = gj.norm_sq();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::DomainError(format!("filter {j} has norm {norm}")));
        }
        for (k, gk) in specs.iter().enumerate() {
            if gj.cavity_mode != gk.cavity_mode {
                continue;
            }
            let o = if j == k { C64::new(1.0, 0.0) } else { overlap(gj, gk) };
            if require_orthogonal && j < k && o.norm() > ORTHOGONALITY_TOL {
                return Err(Error::NotOrthogonal { i: j, j: k, overlap: o.norm() });
            }
            overlaps[(j, k)] = o;
        }
    }
    Ok(FilterSet { filters: specs.to_vec(), overlaps })
}

/// Two exponential filters of common bandwidth `γ`, reading out cavity modes 0 and 1.
pub fn make_exp_filters(omega_a: f64, omega_b: f64, gamma: f64) -> Result<[FilterSpec; 2]> {
    Ok([
        FilterSpec::exponential(omega_a, gamma)?.on_cavity_mode(0),
        FilterSpec::exponential(omega_b, gamma)?.on_cavity_mode(1),
    ])
}

/// Frequencies where a filter transform has structure: the center, the
/// mirrored center and, for step filters, nearby zeros of the sinc.
pub(crate) fn filter_breakpoints(f: &FilterSpec) -> Vec<f64> {
    let mut pts = Vec::new();
    for c in [f.center, -f.center] {
        pts.push(c);
        match f.shape {
            FilterShape::Step { tau } => {
                let step = 2.0 * std::f64::consts::PI / tau;
                for k in 1..=64 {
                    pts.push(c + k as f64 * step);
                    pts.push(c - k as f64 * step);
                }
            }
            FilterShape::Exponential { gamma } => {
                for k in [0.25, 1.0, 4.0, 16.0, 64.0] {
                    pts.push(c + k * gamma);
                    pts.push(c - k * gamma);
                }
            }
        }
    }
    pts
}

/// `∫ |g̃(ω)|² dω` by adaptive quadrature over `[−W, W]`.
pub fn transform_norm_quadrature(f: &FilterSpec, omega_max: f64, spec: &QuadratureSpec) -> Result<f64> {
    let m = integrate_interval(
        |w| Mat::from_element(1, 1, f.transform(w).norm_sqr()),
        -omega_max,
        omega_max,
        &filter_breakpoints(f),
        spec,
    )?;
    Ok(m[(0, 0)])
}
