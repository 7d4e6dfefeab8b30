//! Dense linear algebra on small real and complex matrices.

use nalgebra::{Complex, DMatrix, Schur, SymmetricEigen};

use crate::error::{Error, Result};

/// Real dense matrix used for every covariance, drift and channel matrix.
pub type Mat = DMatrix<f64>;
/// Complex dense matrix.
pub type CMat = DMatrix<Complex<f64>>;
/// Complex scalar.
pub type C64 = Complex<f64>;

/// Largest dimension accepted by the eigenvalue routines.
pub const MAX_DIM: usize = 16;

fn require_square(m: &Mat, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Eigenvalues of a real square matrix.
///
/// The matrix is reduced to Hessenberg form and iterated with shifted QR
/// steps until the real Schur form is reached; eigenvalues are read off the
/// diagonal blocks.
pub fn eigenvalues(m: &Mat) -> Result<Vec<C64>> {
    let n = require_square(m, "eigenvalue input")?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_DIM {
        return Err(Error::DimensionMismatch(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::DomainError("matrix has non-finite entries".into()));
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 200 * n)
        .ok_or_else(|| Error::NoConvergence(format!("shifted QR on {n}x{n} matrix")))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Largest real part among the eigenvalues of `m`.
pub fn max_real_part(m: &Mat) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Eigen-decomposition of a real symmetric matrix with ascending eigenvalues.
///
/// Returns the eigenvalues and a matrix whose columns are the matching
/// orthonormal eigenvectors.
pub fn symmetric_eigen(m: &Mat) -> Result<(Vec<f64>, Mat)> {
    let n = require_square(m, "symmetric eigen input")?;
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| Error::NoConvergence("symmetric eigen-decomposition".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// Ascending real spectrum of a complex Hermitian matrix.
///
/// The matrix `H = X + iY` is embedded as the real symmetric matrix
/// `[[X, -Y], [Y, X]]`, whose spectrum is that of `H` with every eigenvalue
/// doubled.
pub fn hermitian_spectrum(m: &CMat) -> Result<Vec<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch("Hermitian input must be square".into()));
    }
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let deviation = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if deviation > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian { deviation });
    }
    let mut emb = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            emb[(i, j)] = z.re;
            emb[(i + n, j + n)] = z.re;
            emb[(i, j + n)] = -z.im;
            emb[(i + n, j)] = z.im;
        }
    }
    let (vals, _) = symmetric_eigen(&emb)?;
    Ok(vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMat) -> Result<f64> {
    Ok(hermitian_spectrum(m)?[0])
}

/// Function of a symmetric positive definite matrix via its eigen-decomposition.
fn spd_function(m: &Mat, f: impl Fn(f64) -> f64) -> Result<Mat> {
    let (vals, vecs) = symmetric_eigen(m)?;
    if vals[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig: vals[0] });
    }
    let d = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| f(v)),
    ));
    Ok(&vecs * d * vecs.transpose())
}

/// Principal square root of a symmetric positive definite matrix.
pub fn sqrtm_spd(m: &Mat) -> Result<Mat> {
    spd_function(m, f64::sqrt)
}

/// Inverse principal square root of a symmetric positive definite matrix.
pub fn inv_sqrtm_spd(m: &Mat) -> Result<Mat> {
    spd_function(m, |v| 1.0 / v.sqrt())
}

/// Solves `A V + V Aᵀ = -D` for `V`.
///
/// The equation is vectorized into `(I ⊗ A + A ⊗ I) vec V = -vec D` and
/// solved by LU elimination with partial pivoting.
pub fn solve_lyapunov(a: &Mat, d: &Mat) -> Result<Mat> {
    let n = require_square(a, "drift matrix")?;
    if d.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "diffusion matrix must be {n}x{n}, got {}x{}",
            d.nrows(),
            d.ncols()
        )));
    }
    let max_re = max_real_part(a)?;
    if max_re >= 0.0 {
        return Err(Error::UnstableDrift { max_re });
    }
    let id = Mat::identity(n, n);
    let big = id.kronecker(a) + a.kronecker(&id);
    let rhs = nalgebra::DVector::from_iterator(n * n, d.iter().map(|x| -x));
    let lu = big.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("vectorized Lyapunov system".into()))?;
    let v = Mat::from_column_slice(n, n, sol.as_slice());
    let v = (&v + v.transpose()) * 0.5;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem("vectorized Lyapunov system".into()));
    }
    Ok(v)
}

/// Frobenius-norm residual of the Lyapunov equation.
pub fn lyapunov_residual(a: &Mat, v: &Mat, d: &Mat) -> f64 {
    (a * v + v * a.transpose() + d).norm()
}

/// Lifts a real matrix to a complex one.
pub fn to_complex(m: &Mat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Block-diagonal assembly of square blocks.
pub fn block_diag(blocks: &[&Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Mat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((off, off), (k, k)).copy_from(*b);
        off += k;
    }
    out
}

/// Largest absolute entry of a matrix.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}
