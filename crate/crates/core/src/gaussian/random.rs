//! Random symplectic matrices and random physical covariance matrices.

use rand::Rng;

use crate::numerics::Mat;

use super::state::{GaussianState, TwoModeBlocks};

/// Rotation of one mode by angle `phi`.
pub fn rotation(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    Mat::from_row_slice(2, 2, &[c, s, -s, c])
}

/// Single-mode squeezer `diag(√r, 1/√r)`.
pub fn squeezer(r: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[r.sqrt(), 0.0, 0.0, 1.0 / r.sqrt()])
}

/// Random single-mode symplectic matrix `R(φ₁) · diag(√r, 1/√r) · R(φ₂)`.
pub fn random_local_symplectic<R: Rng + ?Sized>(rng: &mut R, max_log_squeeze: f64) -> Mat {
    let phi1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let phi2 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = rng.gen_range(-max_log_squeeze..=max_log_squeeze).exp();
    rotation(phi1) * squeezer(r) * rotation(phi2)
}

/// Beam splitter with mixing angle `theta` between modes `i` and `j` of an `n`-mode system.
pub fn beam_splitter(n: usize, i: usize, j: usize, theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    let mut m = Mat::identity(2 * n, 2 * n);
    for q in 0..2 {
        m[(2 * i + q, 2 * i + q)] = c;
        m[(2 * j + q, 2 * j + q)] = c;
        m[(2 * i + q, 2 * j + q)] = s;
        m[(2 * j + q, 2 * i + q)] = -s;
    }
    m
}

/// Random `n`-mode symplectic matrix built from local symplectics and beam splitters.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize, max_log_squeeze: f64) -> Mat {
    let local = |rng: &mut R| {
        let blocks: Vec<Mat> = (0..n).map(|_| random_local_symplectic(rng, max_log_squeeze)).collect();
        let refs: Vec<&Mat> = blocks.iter().collect();
        crate::numerics::block_diag(&refs)
    };
    let mut s = local(rng);
    for _ in 0..2 {
        for i in 0..n {
            for j in (i + 1)..n {
                let theta = rng.gen_range(0.0..std::f64::consts::PI);
                s = beam_splitter(n, i, j, theta) * s;
            }
        }
        s = local(rng) * s;
    }
    s
}

/// Random physical `n`-mode covariance matrix `S (⊕ ν_k I) Sᵀ` with `ν_k ∈ [1, 1 + max_thermal]`.
pub fn random_physical<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_log_squeeze: f64,
    max_thermal: f64,
) -> GaussianState {
    let s = random_symplectic(rng, n, max_log_squeeze);
    let diag: Vec<f64> = (0..n)
        .flat_map(|_| {
            let nu = 1.0 + rng.gen_range(0.0..=max_thermal);
            [nu, nu]
        })
        .collect();
    let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(diag));
    let v = &s * d * s.transpose();
    GaussianState::from_cm((&v + v.transpose()) * 0.5).expect("symmetric by construction")
}

/// Random entangled two-mode state with `ν ≤ max_nu`, obtained by rejection sampling.
pub fn random_entangled_two_mode<R: Rng + ?Sized>(rng: &mut R, max_nu: f64) -> GaussianState {
    loop {
        let st = random_physical(rng, 2, 1.2, 1.5);
        if let Ok(nu) = super::measures::nu_min_pt(&st) {
            if nu < max_nu && nu > 1e-3 {
                return st;
            }
        }
    }
}

/// Random state in the standard form with local blocks `a I`, `b I` and
/// correlations `diag(−c₁, c₂)`.
pub fn random_standard_form<R: Rng + ?Sized>(rng: &mut R) -> GaussianState {
    let st = random_entangled_two_mode(rng, 0.95);
    let (a, b, c1, c2) = crate::teleport::standard_form_entries(&st).expect("physical state");
    let blocks = TwoModeBlocks {
        a: Mat::identity(2, 2) * a,
        b: Mat::identity(2, 2) * b,
        c: Mat::from_row_slice(2, 2, &[-c1, 0.0, 0.0, c2]),
    };
    GaussianState::from_cm(blocks.to_cm()).expect("symmetric by construction")
}
