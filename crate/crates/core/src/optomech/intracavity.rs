//! Intracavity entanglement, cooling figures of merit and the rotating-wave
//! closed forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{log_negativity, Convention, GaussianState};
use crate::numerics::Mat;

use super::params::DerivedParams;

/// Sideband on which the driving laser is tuned in the rotating-wave limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RwaRegime {
    /// `Δ = −ω_m`: down-conversion dominates.
    Blue,
    /// `Δ = +ω_m`: beam-splitter exchange dominates.
    Red,
}

/// Rotating-wave covariance matrix (`VacuumHalf`) of the mirror and cavity mode.
///
/// Valid for `ω_m ≫ G, κ` and below the instability threshold `G² < 2κγ_m`
/// in the blue regime.
pub fn rwa_cm(g: f64, kappa: f64, gamma_m: f64, nbar: f64, regime: RwaRegime) -> Result<Mat> {
    let s = match regime {
        RwaRegime::Blue => 1.0,
        RwaRegime::Red => -1.0,
    };
    let den = (gamma_m + 2.0 * kappa) * (2.0 * gamma_m * kappa - s * g * g);
    if den <= 0.0 {
        return Err(Error::UnstableDrift { max_re: f64::NAN });
    }
    let v11 = nbar + 0.5 + 2.0 * g * g * kappa * (0.5 + s * (nbar + 0.5)) / den;
    let v33 = 0.5 + g * g * gamma_m * (nbar + 0.5 + s * 0.5) / den;
    let v14 = 2.0 * g * gamma_m * kappa * (nbar + 0.5 + s * 0.5) / den;
    Ok(Mat::from_row_slice(
        4,
        4,
        &[
            v11, 0.0, 0.0, v14, //
            0.0, v11, s * v14, 0.0, //
            0.0, s * v14, v33, 0.0, //
            v14, 0.0, 0.0, v33,
        ],
    ))
}

/// Upper bound `ln[(1 + G/√(2κγ_m)) / (1 + n̄)]` on the blue-detuned
/// rotating-wave logarithmic negativity.
pub fn rwa_log_negativity_bound(g: f64, kappa: f64, gamma_m: f64, nbar: f64) -> f64 {
    ((1.0 + g / (2.0 * kappa * gamma_m).sqrt()) / (1.0 + nbar)).ln()
}

/// Entanglement and cooling figures of the intracavity steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntracavityReport {
    /// Logarithmic negativity between mirror and cavity mode.
    pub log_negativity: f64,
    /// Effective phonon number `(V₁₁ + V₂₂ − 1)/2`.
    pub n_eff: f64,
    /// Stokes scattering rate `A₊`.
    pub a_plus: f64,
    /// Anti-Stokes scattering rate `A₋`.
    pub a_minus: f64,
    /// Net cooling rate `Γ = A₋ − A₊`.
    pub gamma_net: f64,
    /// Perturbative occupancy `(γ_m n̄ + A₊)/(γ_m + Γ)`.
    pub n_eff_perturbative: f64,
}

/// Sideband scattering rates `A± = (G²κ/2) / (κ² + (Δ ± ω_m)²)`.
pub fn scattering_rates(dp: &DerivedParams) -> (f64, f64) {
    let base = dp.g * dp.g * dp.kappa / 2.0;
    let k2 = dp.kappa * dp.kappa;
    (
        base / (k2 + (dp.delta + dp.omega_m).powi(2)),
        base / (k2 + (dp.delta - dp.omega_m).powi(2)),
    )
}

/// Logarithmic negativity of the first two modes of a `VacuumHalf` covariance matrix.
pub fn log_negativity_half(v: &Mat, first: usize, second: usize) -> Result<f64> {
    let st = GaussianState::new(v.clone(), None, Convention::VacuumHalf)?;
    Ok(log_negativity(&st.reduced(&[first, second])?)?.log_negativity)
}

/// Summarizes a steady-state covariance matrix (`VacuumHalf`).
pub fn intracavity_report(v: &Mat, dp: &DerivedParams) -> Result<IntracavityReport> {
    if v.shape() != (4, 4) {
        return Err(Error::DimensionMismatch("intracavity report needs a 4x4 matrix".into()));
    }
    let (a_plus, a_minus) = scattering_rates(dp);
    let gamma_net = a_minus - a_plus;
    Ok(IntracavityReport {
        log_negativity: log_negativity_half(v, 0, 1)?,
        n_eff: (v[(0, 0)] + v[(1, 1)] - 1.0) / 2.0,
        a_plus,
        a_minus,
        gamma_net,
        n_eff_perturbative: (dp.gamma_m * dp.nbar + a_plus) / (dp.gamma_m + gamma_net),
    })
}
