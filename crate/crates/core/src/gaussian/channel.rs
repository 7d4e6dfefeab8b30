//! Gaussian channels: trace-preserving maps `V → S V Sᵀ + G` and general
//! maps including Gaussian measurements.

use crate::error::{Error, Result};
use crate::numerics::{min_hermitian_eigenvalue, CMat, Mat, C64};

use super::state::{omega, psd_tolerance, Convention, GaussianState};

/// Trace-preserving Gaussian completely positive map `V → S V Sᵀ + G`.
#[derive(Debug, Clone, PartialEq)]
pub struct TgcpChannel {
    s: Mat,
    g: Mat,
}

impl TgcpChannel {
    /// Builds a channel after checking `G + iΩ − i S Ω Sᵀ ⪰ 0`.
    pub fn new(s: Mat, g: Mat) -> Result<Self> {
        let n = s.nrows();
        if s.ncols() != n || g.shape() != (n, n) || n % 2 != 0 {
            return Err(Error::DimensionMismatch("channel matrices must be square and matching".into()));
        }
        let min_eig = cp_margin(&s, &g)?;
        if min_eig < -psd_tolerance(&g).max(psd_tolerance(&s)) {
            return Err(Error::InvalidChannel { min_eig });
        }
        Ok(Self { s, g: (&g + g.transpose()) * 0.5 })
    }

    /// Identity channel on `n` modes.
    pub fn identity(n: usize) -> Self {
        Self { s: Mat::identity(2 * n, 2 * n), g: Mat::zeros(2 * n, 2 * n) }
    }

    /// Beam splitter of transmissivity `τ²` mixing one mode with vacuum.
    pub fn attenuation(tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::DomainError(format!("transmissivity amplitude {tau} outside [0, 1]")));
        }
        Self::new(Mat::identity(2, 2) * tau, Mat::identity(2, 2) * (1.0 - tau * tau))
    }

    /// Local channel `ch_a ⊗ ch_b` on two subsystems.
    pub fn tensor(&self, other: &Self) -> Self {
        let s = crate::numerics::block_diag(&[&self.s, &other.s]);
        let g = crate::numerics::block_diag(&[&self.g, &other.g]);
        Self { s, g }
    }

    /// Linear part `S`.
    pub fn s(&self) -> &Mat {
        &self.s
    }

    /// Added noise `G`.
    pub fn g(&self) -> &Mat {
        &self.g
    }
}

/// Smallest eigenvalue of `G + iΩ − i S Ω Sᵀ`.
pub fn cp_margin(s: &Mat, g: &Mat) -> Result<f64> {
    let n = s.nrows() / 2;
    let om = omega(n);
    let k = &om - s * &om * s.transpose();
    let m = CMat::from_fn(2 * n, 2 * n, |i, j| C64::new(g[(i, j)], k[(i, j)]));
    min_hermitian_eigenvalue(&m)
}

/// Applies a trace-preserving channel; the output is in `VacuumOne`.
pub fn apply_tgcp(state: &GaussianState, ch: &TgcpChannel) -> Result<GaussianState> {
    if ch.s.nrows() != state.cm().nrows() {
        return Err(Error::DimensionMismatch(format!(
            "channel acts on {} quadratures, state has {}",
            ch.s.nrows(),
            state.cm().nrows()
        )));
    }
    let v = state.cm_one();
    let out = &ch.s * v * ch.s.transpose() + &ch.g;
    let d = &ch.s * state.displacement();
    GaussianState::new((&out + out.transpose()) * 0.5, Some(d), Convention::VacuumOne)
}

/// General Gaussian map `V → Γ₁ − Γ₁₂ Λ (Λ Γ₂ Λ + V)⁻¹ Λ Γ₁₂ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GcpChannel {
    /// Output block `Γ₁`.
    pub gamma1: Mat,
    /// Cross block `Γ₁₂`.
    pub gamma12: Mat,
    /// Input block `Γ₂`.
    pub gamma2: Mat,
}

impl GcpChannel {
    /// Projection of the second mode of a two-mode state onto the vacuum,
    /// realized with finite squeezing `r`; the exact projection is the
    /// limit `r → ∞`.
    pub fn vacuum_projection(r: f64) -> Self {
        let (ch, sh) = (r.cosh(), r.sinh());
        let mut gamma12 = Mat::zeros(2, 4);
        gamma12[(0, 0)] = sh;
        gamma12[(1, 1)] = -sh;
        Self {
            gamma1: Mat::identity(2, 2) * ch,
            gamma12,
            gamma2: Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![ch, ch, 1.0, 1.0])),
        }
    }
}

/// Applies a general Gaussian map; the output is in `VacuumOne` with zero displacement.
pub fn apply_gcp(state: &GaussianState, ch: &GcpChannel) -> Result<GaussianState> {
    let v = state.cm_one();
    let m = v.nrows();
    if ch.gamma2.shape() != (m, m) || ch.gamma12.ncols() != m || ch.gamma12.nrows() != ch.gamma1.nrows() {
        return Err(Error::DimensionMismatch("GCP blocks do not match the state".into()));
    }
    let lam = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
        m,
        (0..m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }),
    ));
    let resolvent = (&lam * &ch.gamma2 * &lam + &v)
        .try_inverse()
        .ok_or(Error::SingularResolvent)?;
    if resolvent.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularResolvent);
    }
    let out = &ch.gamma1 - &ch.gamma12 * &lam * resolvent * &lam * ch.gamma12.transpose();
    GaussianState::new((&out + out.transpose()) * 0.5, None, Convention::VacuumOne)
}

/// Conditional covariance matrix `A − C (B + I)⁻¹ Cᵀ` after projecting the
/// second mode onto the vacuum.
pub fn vacuum_projection_limit(state: &GaussianState) -> Result<Mat> {
    let b = state.blocks()?;
    let inv = (&b.b + Mat::identity(2, 2)).try_inverse().ok_or(Error::SingularResolvent)?;
    Ok(&b.a - &b.c * inv * b.c.transpose())
}
