//! Gaussian states, symplectic forms and partial-transpose masks.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{min_hermitian_eigenvalue, CMat, Mat, C64};

/// Normalization of the covariance matrix.
///
/// With `VacuumOne` the vacuum has covariance matrix `I`; with `VacuumHalf`
/// it has `I/2`. The two are related by `V_one = 2·V_half`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// Vacuum covariance matrix equals the identity.
    VacuumOne,
    /// Vacuum covariance matrix equals half the identity.
    VacuumHalf,
}

impl Convention {
    /// Factor converting a covariance matrix in this convention to `VacuumOne`.
    pub fn to_one_factor(self) -> f64 {
        match self {
            Convention::VacuumOne => 1.0,
            Convention::VacuumHalf => 2.0,
        }
    }
}

/// Symplectic form `Ω` on `n` modes: block diagonal with blocks `[[0, 1], [-1, 0]]`.
pub fn omega(n: usize) -> Mat {
    let mut m = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// Single-mode momentum reflection `Z = diag(1, -1)`.
pub fn z2() -> Mat {
    Mat::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]))
}

/// Partial-transpose mask `Λ` on `n` modes flipping the momenta of `flipped` modes.
pub fn pt_mask(n: usize, flipped: &[usize]) -> Mat {
    let mut m = Mat::identity(2 * n, 2 * n);
    for &k in flipped {
        m[(2 * k + 1, 2 * k + 1)] = -1.0;
    }
    m
}

/// Two-mode covariance matrix split into its `2×2` blocks `[[A, C], [Cᵀ, B]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeBlocks {
    /// Local block of the first mode.
    pub a: Mat,
    /// Local block of the second mode.
    pub b: Mat,
    /// Correlation block.
    pub c: Mat,
}

impl TwoModeBlocks {
    /// Splits a `4×4` matrix into blocks.
    pub fn from_cm(v: &Mat) -> Result<Self> {
        if v.shape() != (4, 4) {
            return Err(Error::DimensionMismatch(format!(
                "two-mode covariance matrix must be 4x4, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        Ok(Self {
            a: v.view((0, 0), (2, 2)).into_owned(),
            b: v.view((2, 2), (2, 2)).into_owned(),
            c: v.view((0, 2), (2, 2)).into_owned(),
        })
    }

    /// Reassembles the `4×4` matrix.
    pub fn to_cm(&self) -> Mat {
        let mut v = Mat::zeros(4, 4);
        v.view_mut((0, 0), (2, 2)).copy_from(&self.a);
        v.view_mut((2, 2), (2, 2)).copy_from(&self.b);
        v.view_mut((0, 2), (2, 2)).copy_from(&self.c);
        v.view_mut((2, 0), (2, 2)).copy_from(&self.c.transpose());
        v
    }

    /// `det V` through the Schur complement `det A · det(B − Cᵀ A⁻¹ C)`,
    /// which stays accurate when the blocks are large and nearly cancel.
    pub fn det(&self) -> f64 {
        match self.a.clone().try_inverse() {
            Some(inv) => {
                let schur = &self.b - self.c.transpose() * inv * &self.c;
                self.a.determinant() * schur.determinant()
            }
            None => self.to_cm().determinant(),
        }
    }

    /// `Σ = det A + det B − 2 det C`, the partial-transpose seralian.
    pub fn seralian_pt(&self) -> f64 {
        self.a.determinant() + self.b.determinant() - 2.0 * self.c.determinant()
    }
}

/// A Gaussian state: displacement vector, covariance matrix and its convention.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    d: DVector<f64>,
    v: Mat,
    convention: Convention,
}

impl GaussianState {
    /// Builds a state, checking dimensions and symmetry of the covariance matrix.
    pub fn new(v: Mat, d: Option<DVector<f64>>, convention: Convention) -> Result<Self> {
        let n = v.nrows();
        if v.ncols() != n || n == 0 || n % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "covariance matrix must be square of even size, got {}x{}",
                v.nrows(),
                v.ncols()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::DomainError("covariance matrix has non-finite entries".into()));
        }
        let scale = v.iter().fold(0.0, |acc: f64, x| acc.max(x.abs())).max(1.0);
        let asym = (&v - v.transpose()).iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
        if asym > 1e-12 * scale {
            return Err(Error::DomainError(format!(
                "covariance matrix is not symmetric (deviation {asym:e})"
            )));
        }
        let v = (&v + v.transpose()) * 0.5;
        let d = d.unwrap_or_else(|| DVector::zeros(n));
        if d.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "displacement has length {}, expected {n}",
                d.len()
            )));
        }
        Ok(Self { d, v, convention })
    }

    /// Builds a `VacuumOne` state with zero displacement.
    pub fn from_cm(v: Mat) -> Result<Self> {
        Self::new(v, None, Convention::VacuumOne)
    }

    /// Vacuum on `n` modes.
    pub fn vacuum(n: usize) -> Self {
        Self {
            d: DVector::zeros(2 * n),
            v: Mat::identity(2 * n, 2 * n),
            convention: Convention::VacuumOne,
        }
    }

    /// Product of thermal states with the given mean occupations.
    pub fn thermal(nbar: &[f64]) -> Self {
        let diag: Vec<f64> = nbar.iter().flat_map(|&n| [2.0 * n + 1.0; 2]).collect();
        Self {
            d: DVector::zeros(diag.len()),
            v: Mat::from_diagonal(&DVector::from_vec(diag)),
            convention: Convention::VacuumOne,
        }
    }

    /// Two-mode squeezed vacuum `[[I cosh r, -Z sinh r], [-Z sinh r, I cosh r]]`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let (ch, sh) = (r.cosh(), r.sinh());
        let blocks = TwoModeBlocks {
            a: Mat::identity(2, 2) * ch,
            b: Mat::identity(2, 2) * ch,
            c: -z2() * sh,
        };
        Self {
            d: DVector::zeros(4),
            v: blocks.to_cm(),
            convention: Convention::VacuumOne,
        }
    }

    /// Number of modes.
    pub fn modes(&self) -> usize {
        self.v.nrows() / 2
    }

    /// Covariance matrix in the stored convention.
    pub fn cm(&self) -> &Mat {
        &self.v
    }

    /// Displacement vector.
    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    /// Stored convention.
    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Covariance matrix converted to `VacuumOne`.
    pub fn cm_one(&self) -> Mat {
        &self.v * self.convention.to_one_factor()
    }

    /// Same state expressed in another convention.
    pub fn to_convention(&self, target: Convention) -> Self {
        let factor = self.convention.to_one_factor() / target.to_one_factor();
        Self {
            d: self.d.clone(),
            v: &self.v * factor,
            convention: target,
        }
    }

    /// Blocks of a two-mode state in `VacuumOne`.
    pub fn blocks(&self) -> Result<TwoModeBlocks> {
        TwoModeBlocks::from_cm(&self.cm_one())
    }

    /// Reduced state of a subset of modes, in the stored convention.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        let n = self.modes();
        if modes.iter().any(|&k| k >= n) {
            return Err(Error::DimensionMismatch(format!("mode index out of range for {n} modes")));
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let m = idx.len();
        let v = Mat::from_fn(m, m, |i, j| self.v[(idx[i], idx[j])]);
        let d = DVector::from_iterator(m, idx.iter().map(|&i| self.d[i]));
        Self::new(v, Some(d), self.convention)
    }
}

/// Outcome of the uncertainty-principle test `V + iΩ ⪰ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    /// Whether the covariance matrix describes a physical state.
    pub physical: bool,
    /// Smallest eigenvalue of `V_one + iΩ`.
    pub min_eigenvalue: f64,
}

/// Tolerance used for every positive-semidefiniteness test, scaled by the matrix size.
pub fn psd_tolerance(v: &Mat) -> f64 {
    1e-10 * v.iter().fold(1.0, |acc: f64, x| acc.max(x.abs()))
}

/// `M + iΩ` as a complex matrix.
pub fn plus_i_omega(m: &Mat) -> CMat {
    let n = m.nrows() / 2;
    let om = omega(n);
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)], om[(i, j)]))
}

/// Checks `V_one + iΩ ⪰ 0`.
pub fn is_physical(state: &GaussianState) -> Result<PhysicalityReport> {
    let v = state.cm_one();
    let min_eigenvalue = min_hermitian_eigenvalue(&plus_i_omega(&v))?;
    Ok(PhysicalityReport {
        physical: min_eigenvalue >= -psd_tolerance(&v),
        min_eigenvalue,
    })
}

/// Fails with [`Error::Unphysical`] unless the state passes [`is_physical`].
pub fn require_physical(state: &GaussianState) -> Result<()> {
    let rep = is_physical(state)?;
    if rep.physical {
        Ok(())
    } else {
        Err(Error::Unphysical { min_eig: rep.min_eigenvalue })
    }
}
