//! Entanglement criteria and measures for two-mode Gaussian states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::min_hermitian_eigenvalue;

use super::state::{plus_i_omega, psd_tolerance, pt_mask, GaussianState, TwoModeBlocks};

/// Both symplectic eigenvalues of the partially transposed covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtSpectrum {
    /// Smaller partially transposed symplectic eigenvalue `ν`.
    pub nu_minus: f64,
    /// Larger partially transposed symplectic eigenvalue.
    pub nu_plus: f64,
}

/// Partially transposed symplectic eigenvalues from the block invariants.
///
/// `ν∓² = (Σ ∓ √(Σ² − 4 det V)) / 2` with `Σ = det A + det B − 2 det C`,
/// all in `VacuumOne` units.
pub fn pt_spectrum_blocks(blocks: &TwoModeBlocks) -> Result<PtSpectrum> {
    let sigma = blocks.seralian_pt();
    let det_v = blocks.det();
    let mut disc = sigma * sigma - 4.0 * det_v;
    let scale = sigma * sigma;
    if disc < 0.0 {
        if disc < -1e-10 * scale.max(1.0) {
            return Err(Error::NegativeDiscriminant(disc));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    let hi = 0.5 * (sigma + root);
    if det_v < 0.0 || hi <= 0.0 {
        return Err(Error::NegativeDiscriminant(det_v));
    }
    // ν₋² ν₊² = det V avoids the cancellation in (Σ − √(Σ² − 4 det V))/2.
    Ok(PtSpectrum {
        nu_minus: (det_v / hi).sqrt(),
        nu_plus: hi.sqrt(),
    })
}

/// Smallest partially transposed symplectic eigenvalue `ν` of a two-mode state.
pub fn nu_min_pt(state: &GaussianState) -> Result<f64> {
    Ok(pt_spectrum_blocks(&state.blocks()?)?.nu_minus)
}

/// Logarithmic negativity together with the negativity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Negativity {
    /// Smallest partially transposed symplectic eigenvalue.
    pub nu: f64,
    /// `E_N = max(0, −ln ν)`.
    pub log_negativity: f64,
    /// `N = max(0, (1/ν − 1)/2)`.
    pub negativity: f64,
}

/// Logarithmic negativity and negativity of a two-mode state.
///
/// Fails if both partially transposed symplectic eigenvalues lie below one,
/// which cannot happen for a physical state.
pub fn log_negativity(state: &GaussianState) -> Result<Negativity> {
    let spec = pt_spectrum_blocks(&state.blocks()?)?;
    if spec.nu_plus < 1.0 - 1e-10 {
        return Err(Error::MultipleSubunitEigenvalues { count: 2 });
    }
    let nu = spec.nu_minus;
    Ok(Negativity {
        nu,
        log_negativity: (-nu.ln()).max(0.0),
        negativity: ((1.0 / nu - 1.0) / 2.0).max(0.0),
    })
}

/// Default Duan grid: 61 logarithmically spaced values in `[0.1, 10]`,
/// their negatives, and optionally `±λ`.
pub fn duan_grid(lambda: Option<f64>) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..61)
        .map(|k| 10f64.powf(-1.0 + 2.0 * k as f64 / 60.0))
        .collect();
    if let Some(l) = lambda {
        if l != 0.0 && l.is_finite() {
            grid.push(l.abs());
        }
    }
    let negatives: Vec<f64> = grid.iter().map(|a| -a).collect();
    grid.extend(negatives);
    grid
}

/// Outcome of the separability tests on a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    /// True when the partial-transpose test detects entanglement.
    pub simon_entangled: bool,
    /// Smallest eigenvalue of `Λ V Λ + iΩ`.
    pub simon_min_eigenvalue: f64,
    /// Largest value of `(a² + 1/a²) − (ΔL_a² + ΔM_a²)` over the grid.
    pub duan_violation: f64,
    /// Grid value attaining the Duan maximum.
    pub duan_best_a: f64,
    /// Largest value of `¼(a² + 1/a²)² − ΔL_a² ΔM_a²` over the grid.
    pub mancini_violation: f64,
    /// Grid value attaining the Mancini maximum.
    pub mancini_best_a: f64,
}

/// Variances of `L_a = |a| x_A + x_B / a` and `M_a = |a| p_A − p_B / a`.
///
/// Variances are half the `VacuumOne` covariance entries.
pub fn duan_variances(state: &GaussianState, a: f64) -> Result<(f64, f64)> {
    let v = state.cm_one();
    if v.shape() != (4, 4) {
        return Err(Error::DimensionMismatch("Duan operators need two modes".into()));
    }
    let s = a.signum();
    let a2 = a * a;
    let var_l = 0.5 * (a2 * v[(0, 0)] + v[(2, 2)] / a2 + 2.0 * s * v[(0, 2)]);
    let var_m = 0.5 * (a2 * v[(1, 1)] + v[(3, 3)] / a2 - 2.0 * s * v[(1, 3)]);
    Ok((var_l, var_m))
}

/// Partial-transpose, Duan and Mancini tests over a grid of `a` values.
pub fn separability_report(state: &GaussianState, a_grid: &[f64]) -> Result<SeparabilityReport> {
    let v = state.cm_one();
    if v.shape() != (4, 4) {
        return Err(Error::DimensionMismatch("separability tests need two modes".into()));
    }
    let lam = pt_mask(2, &[1]);
    let vt = &lam * &v * &lam;
    let simon_min = min_hermitian_eigenvalue(&plus_i_omega(&vt))?;
    let mut duan = (f64::NEG_INFINITY, f64::NAN);
    let mut mancini = (f64::NEG_INFINITY, f64::NAN);
    for &a in a_grid {
        if a == 0.0 || !a.is_finite() {
            return Err(Error::DomainError("Duan parameter must be finite and non-zero".into()));
        }
        let (l, m) = duan_variances(state, a)?;
        let bound = a * a + 1.0 / (a * a);
        let dv = bound - (l + m);
        let mv = 0.25 * bound * bound - l * m;
        if dv > duan.0 {
            duan = (dv, a);
        }
        if mv > mancini.0 {
            mancini = (mv, a);
        }
    }
    Ok(SeparabilityReport {
        simon_entangled: simon_min < -psd_tolerance(&v),
        simon_min_eigenvalue: simon_min,
        duan_violation: duan.0,
        duan_best_a: duan.1,
        mancini_violation: mancini.0,
        mancini_best_a: mancini.1,
    })
}

/// Entanglement of formation of a symmetric two-mode state.
///
/// The state is matched to the two-mode squeezed vacuum with squeezing
/// `r = E_N / 2`, whose Schmidt coefficients are `c_n = tanhⁿ r / cosh r`.
pub fn eof_symmetric(state: &GaussianState) -> Result<f64> {
    let blocks = state.blocks()?;
    let (da, db) = (blocks.a.determinant(), blocks.b.determinant());
    if (da - db).abs() > 1e-8 * da.abs().max(db.abs()).max(1.0) {
        return Err(Error::NotSymmetric { det_a: da, det_b: db });
    }
    let e_n = log_negativity(state)?.log_negativity;
    Ok(schmidt_entropy(e_n / 2.0))
}

/// Entropy `−Σ c_n² ln c_n²` of the Schmidt coefficients of a two-mode squeezed vacuum.
pub fn schmidt_entropy(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let t2 = r.tanh().powi(2);
    let mut p = 1.0 / r.cosh().powi(2);
    let mut sum = 0.0;
    let mut tail = 1.0;
    let mut n = 0u64;
    while tail > 1e-12 && n < 1_000_000 {
        if p > 0.0 {
            sum -= p * p.ln();
        }
        tail -= p;
        p *= t2;
        n += 1;
    }
    sum
}
