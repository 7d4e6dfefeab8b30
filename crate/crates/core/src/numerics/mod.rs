//! Numeric kernels for small dense matrices: spectra, Lyapunov solves,
//! adaptive quadrature and scalar root finding.

pub mod linalg;
pub mod quad;
pub mod roots;

pub use linalg::{
    block_diag, eigenvalues, hermitian_spectrum, inv_sqrtm_spd, lyapunov_residual, max_abs,
    max_real_part, min_hermitian_eigenvalue, solve_lyapunov, sqrtm_spd, symmetric_eigen,
    to_complex, CMat, Mat, C64,
};
pub use quad::{integrate_interval, integrate_matrix, integrate_matrix_with_hints, integrate_scalar, QuadratureSpec};
pub use roots::{brent, damped_fixed_point, find_root, grow_and_solve};
