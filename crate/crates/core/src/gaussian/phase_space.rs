//! Characteristic and Wigner functions of Gaussian states.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::numerics::C64;

use super::state::{omega, GaussianState};

/// Which phase-space function to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSpaceFunction {
    /// Symmetrically ordered characteristic function.
    Characteristic,
    /// Wigner function.
    Wigner,
}

/// Characteristic function `χ(η) = exp(−¼ (Ωη)ᵀ V Ωη + i dᵀ Ωη)` in `VacuumOne`.
pub fn characteristic(state: &GaussianState, eta: &DVector<f64>) -> Result<C64> {
    let v = state.cm_one();
    if eta.len() != v.nrows() {
        return Err(Error::DimensionMismatch("phase-space point has the wrong length".into()));
    }
    let oe = omega(state.modes()) * eta;
    let quad = (oe.transpose() * &v * &oe)[(0, 0)];
    let lin = state.displacement().dot(&oe);
    Ok(C64::new(-0.25 * quad, lin).exp())
}

/// Wigner function `W(ξ) = π^{−N} |V|^{−1/2} exp(−(ξ−d)ᵀ Ωᵀ V⁻¹ Ω (ξ−d))` in `VacuumOne`.
pub fn wigner(state: &GaussianState, xi: &DVector<f64>) -> Result<f64> {
    let v = state.cm_one();
    if xi.len() != v.nrows() {
        return Err(Error::DimensionMismatch("phase-space point has the wrong length".into()));
    }
    let det = v.determinant();
    if det.abs() <= f64::MIN_POSITIVE {
        return Err(Error::SingularCm);
    }
    let inv = v.clone().try_inverse().ok_or(Error::SingularCm)?;
    let om = omega(state.modes());
    let y = &om * (xi - state.displacement());
    let quad = (y.transpose() * inv * &y)[(0, 0)];
    let n = state.modes() as i32;
    Ok(std::f64::consts::PI.powi(-n) * det.abs().powf(-0.5) * (-quad).exp())
}

/// Evaluates the selected phase-space function; the Wigner value is returned
/// as a complex number with zero imaginary part.
pub fn eval_phase_space(
    state: &GaussianState,
    point: &DVector<f64>,
    which: PhaseSpaceFunction,
) -> Result<C64> {
    match which {
        PhaseSpaceFunction::Characteristic => characteristic(state, point),
        PhaseSpaceFunction::Wigner => Ok(C64::new(wigner(state, point)?, 0.0)),
    }
}
