//! Linearized Langevin dynamics: drift and diffusion matrices, stability and
//! the steady-state covariance matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    eigenvalues, integrate_interval, integrate_matrix_with_hints, max_real_part, solve_lyapunov, CMat,
    Mat, QuadratureSpec, C64,
};

use super::params::{DerivedParams, BOLTZMANN, HBAR};

/// Brownian bath of the mechanical mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalBath {
    /// Mechanical frequency in rad/s.
    pub omega_m: f64,
    /// Damping rate in rad/s.
    pub gamma_m: f64,
    /// Mean thermal occupation.
    pub nbar: f64,
    /// Temperature in K.
    pub temperature: f64,
}

impl MechanicalBath {
    /// Markovian momentum diffusion `γ_m (2n̄ + 1)`.
    pub fn markov(&self) -> f64 {
        self.gamma_m * (2.0 * self.nbar + 1.0)
    }

    /// Frequency-resolved momentum diffusion `γ_m (ω/ω_m) coth(ħω / 2k_B T)`.
    pub fn exact(&self, omega: f64) -> f64 {
        if self.temperature <= 0.0 {
            return self.gamma_m * omega.abs() / self.omega_m;
        }
        let x = HBAR * omega / (2.0 * BOLTZMANN * self.temperature);
        if x.abs() < 1e-8 {
            self.gamma_m * 2.0 * BOLTZMANN * self.temperature / (HBAR * self.omega_m)
        } else {
            self.gamma_m * omega / (self.omega_m * x.tanh())
        }
    }

    /// Frequency above which the exact kernel is indistinguishable from its
    /// zero-temperature asymptote: `10 k_B T / ħ`.
    pub fn thermal_cutoff(&self) -> f64 {
        10.0 * BOLTZMANN * self.temperature / HBAR
    }
}

/// Treatment of the mechanical Brownian noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThermalKernel {
    /// White noise with diffusion `γ_m (2n̄ + 1)`.
    Markov,
    /// Colored noise with the `coth` kernel.
    Exact,
}

/// Linearized dynamics `u̇ = A u + n` of a mechanical mode coupled to cavity modes.
///
/// The quadrature order is `(δq, δp, δX₁, δY₁, …)`; covariance matrices are
/// in `VacuumHalf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftModel {
    /// Drift matrix.
    pub a: Mat,
    /// Markovian diffusion matrix `diag(0, γ_m(2n̄+1), κ, κ, …)`.
    pub d_markov: Mat,
    /// Mechanical bath.
    pub bath: MechanicalBath,
    /// Cavity decay rate shared by every cavity mode.
    pub kappa: f64,
}

impl DriftModel {
    /// Builds a model from a drift matrix, filling in the diffusion matrix.
    pub fn new(a: Mat, bath: MechanicalBath, kappa: f64) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || n < 2 || n % 2 != 0 {
            return Err(Error::DimensionMismatch("drift matrix must be square of even size".into()));
        }
        let mut d = Mat::zeros(n, n);
        d[(1, 1)] = bath.markov();
        for i in 2..n {
            d[(i, i)] = kappa;
        }
        Ok(Self { a, d_markov: d, bath, kappa })
    }

    /// Number of cavity modes.
    pub fn cavity_modes(&self) -> usize {
        self.a.nrows() / 2 - 1
    }

    /// Diffusion matrix at frequency `ω`.
    pub fn diffusion(&self, omega: f64, kernel: ThermalKernel) -> Mat {
        let mut d = self.d_markov.clone();
        if kernel == ThermalKernel::Exact {
            d[(1, 1)] = self.bath.exact(omega);
        }
        d
    }

    /// Resolvent `M̃(ω) = (iω + A)⁻¹`.
    pub fn resolvent(&self, omega: f64) -> Result<CMat> {
        resolvent(&self.a, omega)
    }

    /// Largest frequency scale of the drift matrix.
    pub fn rate_scale(&self) -> f64 {
        self.a.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    /// Frequencies near which the resolvent peaks, with nested refinements.
    pub fn breakpoints(&self) -> Result<Vec<f64>> {
        pole_breakpoints(&self.a)
    }

    /// Fails with [`Error::UnstableDrift`] unless every eigenvalue has negative real part.
    pub fn require_stable(&self) -> Result<()> {
        let max_re = max_real_part(&self.a)?;
        if max_re >= 0.0 {
            return Err(Error::UnstableDrift { max_re });
        }
        Ok(())
    }
}

/// `(iω I + A)⁻¹` as a complex matrix.
pub fn resolvent(a: &Mat, omega: f64) -> Result<CMat> {
    let n = a.nrows();
    let m = CMat::from_fn(n, n, |i, j| {
        C64::new(a[(i, j)], if i == j { omega } else { 0.0 })
    });
    m.try_inverse().ok_or(Error::SingularResolvent)
}

pub(crate) fn pole_breakpoints(a: &Mat) -> Result<Vec<f64>> {
    let scale = a.iter().fold(0.0, |acc: f64, x| acc.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut pts = vec![0.0];
    for ev in eigenvalues(a)? {
        let w = ev.re.abs().max(1e-12 * scale);
        for c in [ev.im, -ev.im] {
            for k in -4..=4 {
                pts.push(c + k as f64 * w);
            }
            let mut step = 8.0 * w;
            while step < 4.0 * scale {
                pts.push(c + step);
                pts.push(c - step);
                step *= 4.0;
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * scale);
    Ok(pts)
}

/// Builds the 4×4 drift model of a single cavity mode coupled to the mirror.
pub fn drift_matrix(dp: &DerivedParams) -> Result<DriftModel> {
    let (wm, gm, g, k, d) = (dp.omega_m, dp.gamma_m, dp.g, dp.kappa, dp.delta);
    let a = Mat::from_row_slice(
        4,
        4,
        &[
            0.0, wm, 0.0, 0.0, //
            -wm, -gm, g, 0.0, //
            0.0, 0.0, -k, d, //
            g, 0.0, -d, -k,
        ],
    );
    DriftModel::new(a, bath_of(dp), k)
}

pub(crate) fn bath_of(dp: &DerivedParams) -> MechanicalBath {
    MechanicalBath {
        omega_m: dp.omega_m,
        gamma_m: dp.gamma_m,
        nbar: dp.nbar,
        temperature: dp.temperature,
    }
}

/// Routh-Hurwitz conditions and the eigenvalue test for the single-mode system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// First Routh-Hurwitz quantity.
    pub s1: f64,
    /// Second Routh-Hurwitz quantity, `ω_m(κ² + Δ²) − G²Δ`.
    pub s2: f64,
    /// `s1 > 0 ∧ s2 > 0`.
    pub stable: bool,
    /// Largest real part among the eigenvalues of `A`.
    pub max_re: f64,
}

/// Routh-Hurwitz stability of the single-mode drift matrix.
pub fn assess_stability(dp: &DerivedParams) -> Result<StabilityReport> {
    let (wm, gm, g, k, d) = (dp.omega_m, dp.gamma_m, dp.g, dp.kappa, dp.delta);
    let k2 = k * k;
    let s1 = 2.0
        * gm
        * k
        * ((k2 + (wm - d).powi(2)) * (k2 + (wm + d).powi(2))
            + gm * ((gm + 2.0 * k) * (k2 + d * d) + 2.0 * k * wm * wm))
        + d * wm * g * g * (gm + 2.0 * k).powi(2);
    let s2 = wm * (k2 + d * d) - g * g * d;
    let max_re = max_real_part(&drift_matrix(dp)?.a)?;
    Ok(StabilityReport { s1, s2, stable: s1 > 0.0 && s2 > 0.0, max_re })
}

/// Method used for the steady-state covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteadyMethod {
    /// Solve `A V + V Aᵀ = −D`.
    Lyapunov,
    /// Frequency integral with white mechanical noise.
    SpectralMarkov,
    /// Frequency integral with the `coth` kernel.
    SpectralExact,
}

/// Steady-state covariance matrix (`VacuumHalf`).
pub fn steady_cm(model: &DriftModel, method: SteadyMethod, spec: &QuadratureSpec) -> Result<Mat> {
    model.require_stable()?;
    match method {
        SteadyMethod::Lyapunov => solve_lyapunov(&model.a, &model.d_markov),
        SteadyMethod::SpectralMarkov => spectral_markov(model, spec),
        SteadyMethod::SpectralExact => spectral_exact(model, spec),
    }
}

fn sandwich(m: &CMat, d: &Mat) -> Mat {
    let n = m.nrows();
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                let dk = d[(k, k)];
                if dk != 0.0 {
                    s += m[(i, k)] * m[(j, k)].conj() * dk;
                }
            }
            out[(i, j)] = s.re;
        }
    }
    out
}

fn spectral_markov(model: &DriftModel, spec: &QuadratureSpec) -> Result<Mat> {
    let inv_2pi = 0.5 / std::f64::consts::PI;
    let f = |w: f64| match model.resolvent(w) {
        Ok(m) => sandwich(&m, &model.d_markov) * inv_2pi,
        Err(_) => Mat::from_element(model.a.nrows(), model.a.nrows(), f64::NAN),
    };
    let v = integrate_matrix_with_hints(f, spec, model.rate_scale(), &model.breakpoints()?)?;
    Ok((&v + v.transpose()) * 0.5)
}

/// Cutoff used for the colored-noise correction: the larger of the
/// configured truncation, `10 k_B T / ħ` and 50 times the fastest rate.
pub fn exact_kernel_cutoff(model: &DriftModel, spec: &QuadratureSpec) -> f64 {
    let base = 50.0 * model.rate_scale();
    let configured = if spec.omega_max.is_finite() { spec.omega_max } else { 0.0 };
    base.max(configured).max(model.bath.thermal_cutoff())
}

fn spectral_exact(model: &DriftModel, spec: &QuadratureSpec) -> Result<Mat> {
    let v_markov = solve_lyapunov(&model.a, &model.d_markov)?;
    let cutoff = exact_kernel_cutoff(model, spec);
    let n = model.a.nrows();
    let inv_2pi = 0.5 / std::f64::consts::PI;
    let markov = model.bath.markov();
    let f = |w: f64| {
        let delta = model.bath.exact(w) - markov;
        match model.resolvent(w) {
            Ok(m) => Mat::from_fn(n, n, |i, j| (m[(i, 1)] * m[(j, 1)].conj()).re * delta * inv_2pi),
            Err(_) => Mat::from_element(n, n, f64::NAN),
        }
    };
    let mut bps = model.breakpoints()?;
    let mut x = model.rate_scale();
    while x < cutoff {
        bps.push(x);
        bps.push(-x);
        x *= 2.0;
    }
    let local = QuadratureSpec { omega_max: cutoff, ..*spec };
    let correction = integrate_interval(f, -cutoff, cutoff, &bps, &local)?;
    let v = v_markov + correction;
    Ok((&v + v.transpose()) * 0.5)
}
