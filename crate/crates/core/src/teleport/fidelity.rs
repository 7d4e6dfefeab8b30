//! Teleportation noise, fidelities and their bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{nu_min_pt, require_physical, z2, GaussianState, TwoModeBlocks};
use crate::numerics::Mat;

/// Noise `N = Z A Z + Z C + Cᵀ Z + B` added by the teleportation protocol.
pub fn noise_from_blocks(b: &TwoModeBlocks) -> Mat {
    let z = z2();
    let n = &z * &b.a * &z + &z * &b.c + b.c.transpose() * &z + &b.b;
    (&n + n.transpose()) * 0.5
}

/// Noise matrix of a shared two-mode state (`VacuumOne`).
pub fn noise_matrix(state: &GaussianState) -> Result<Mat> {
    require_physical(state)?;
    Ok(noise_from_blocks(&state.blocks()?))
}

/// Fidelity `2 / √(4 + 2 tr N + det N)` for a coherent input.
pub fn fidelity_coherent(n: &Mat) -> f64 {
    2.0 / (4.0 + 2.0 * n.trace() + n.determinant()).sqrt()
}

/// Result of teleporting a pure Gaussian input.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    /// Output covariance matrix `V_in + N`.
    pub v_out: Mat,
    /// Fidelity `2 / √det(2 V_in + N)`.
    pub fidelity: f64,
    /// Entanglement-swapping fidelity `2 / √det N`; `+∞` when `det N = 0`.
    pub fidelity_swap: f64,
}

/// Teleports a pure single-mode input through a shared two-mode state.
pub fn teleport(input: &GaussianState, shared: &GaussianState) -> Result<TeleportOutcome> {
    let vin = input.cm_one();
    if vin.shape() != (2, 2) {
        return Err(Error::DimensionMismatch("teleportation input must be a single mode".into()));
    }
    let det_in = vin.determinant();
    if (det_in - 1.0).abs() > 1e-8 {
        return Err(Error::DomainError(format!("input is not pure (det V_in = {det_in})")));
    }
    let n = noise_matrix(shared)?;
    let v_out = &vin + &n;
    let fidelity = 2.0 / (&vin * 2.0 + &n).determinant().sqrt();
    let det_n = n.determinant();
    let fidelity_swap = if det_n <= 0.0 { f64::INFINITY } else { 2.0 / det_n.sqrt() };
    Ok(TeleportOutcome { v_out, fidelity, fidelity_swap })
}

/// Lower and upper bounds on the optimal fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityBounds {
    /// `(1 + ν) / (1 + 3ν)`.
    pub lower: f64,
    /// `1 / (1 + ν)`.
    pub upper: f64,
}

/// Bounds on the fidelity reachable with local trace-preserving maps.
pub fn fidelity_bounds(nu: f64) -> Result<FidelityBounds> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::DomainError(format!("ν = {nu} outside (0, 1]")));
    }
    Ok(FidelityBounds {
        lower: (1.0 + nu) / (1.0 + 3.0 * nu),
        upper: 1.0 / (1.0 + nu),
    })
}

/// Covariance matrix of the swapping resource and its `ν`.
///
/// `W = [[I cosh r, −Z sinh r], [−Z sinh r, I (2n + cosh r)]]`.
pub fn swap_cm(n: f64, r: f64) -> Result<(GaussianState, f64)> {
    if !(n >= 0.0 && r >= 0.0) {
        return Err(Error::DomainError("swap parameters must be non-negative".into()));
    }
    let (ch, sh) = (r.cosh(), r.sinh());
    let blocks = TwoModeBlocks {
        a: Mat::identity(2, 2) * ch,
        b: Mat::identity(2, 2) * (2.0 * n + ch),
        c: -z2() * sh,
    };
    let state = GaussianState::from_cm(blocks.to_cm())?;
    let nu = nu_min_pt(&state)?;
    Ok((state, nu))
}
