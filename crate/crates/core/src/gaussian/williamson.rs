//! Symplectic spectra and the Williamson normal form.

use crate::error::{Error, Result};
use crate::numerics::{inv_sqrtm_spd, sqrtm_spd, symmetric_eigen, Mat};

use super::state::{omega, GaussianState};

/// Symplectic matrix bringing a covariance matrix to diagonal form.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonForm {
    /// Symplectic `S` with `S V Sᵀ = diag(s₁, s₁, …, s_N, s_N)`.
    pub s: Mat,
    /// Symplectic eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// True when two symplectic eigenvalues coincide to within `1e-9` relative.
    pub degenerate: bool,
}

fn require_even_square(v: &Mat) -> Result<usize> {
    if v.nrows() != v.ncols() || v.nrows() % 2 != 0 || v.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix of even size, got {}x{}",
            v.nrows(),
            v.ncols()
        )));
    }
    Ok(v.nrows() / 2)
}

/// Symplectic eigenvalues of a positive definite matrix, ascending.
///
/// They are the square roots of the eigenvalues of `-K²` with
/// `K = V^{1/2} Ω V^{1/2}`, each of which appears twice.
pub fn symplectic_eigenvalues(v: &Mat) -> Result<Vec<f64>> {
    let n = require_even_square(v)?;
    let root = sqrtm_spd(v)?;
    let k = &root * omega(n) * &root;
    let (vals, _) = symmetric_eigen(&(-(&k * &k)))?;
    Ok(vals
        .chunks(2)
        .map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt())
        .collect())
}

/// Symplectic eigenvalues of a state in `VacuumOne` units.
pub fn symplectic_spectrum(state: &GaussianState) -> Result<Vec<f64>> {
    symplectic_eigenvalues(&state.cm_one())
}

/// Williamson normal form of a positive definite matrix.
///
/// With `K = V^{1/2} Ω V^{1/2}` and an orthogonal `O` such that
/// `Oᵀ K O = ⊕ s_k [[0, 1], [-1, 0]]`, the matrix
/// `S = D^{1/2} Oᵀ V^{-1/2}` is symplectic and `S V Sᵀ = D`.
pub fn williamson_transform(v: &Mat) -> Result<WilliamsonForm> {
    let n = require_even_square(v)?;
    let root = sqrtm_spd(v)?;
    let inv_root = inv_sqrtm_spd(v)?;
    let k = &root * omega(n) * &root;
    let (vals, vecs) = symmetric_eigen(&(-(&k * &k)))?;
    let dim = 2 * n;

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..dim {
        match groups.last_mut() {
            Some(g) if (vals[i] - vals[g[0]]).abs() <= 1e-9 * vals[i].abs().max(1e-300) => g.push(i),
            _ => groups.push(vec![i]),
        }
    }

    let mut o = Mat::zeros(dim, dim);
    let mut values = Vec::with_capacity(n);
    let mut col = 0;
    let mut degenerate = false;
    for g in &groups {
        if g.len() % 2 != 0 {
            return Err(Error::NoConvergence(
                "unpaired eigenvalue in symplectic spectrum".into(),
            ));
        }
        if g.len() > 2 {
            degenerate = true;
        }
        let s2 = g.iter().map(|&i| vals[i]).sum::<f64>() / g.len() as f64;
        let s = s2.max(0.0).sqrt();
        let mut chosen: Vec<nalgebra::DVector<f64>> = Vec::new();
        for _ in 0..g.len() / 2 {
            let mut best: Option<(f64, nalgebra::DVector<f64>)> = None;
            for &i in g {
                let mut w = vecs.column(i).into_owned();
                for c in &chosen {
                    w -= c * c.dot(&w);
                }
                let nw = w.norm();
                if best.as_ref().map_or(true, |(b, _)| nw > *b) {
                    best = Some((nw, w / nw));
                }
            }
            let (_, e2) = best.expect("group is non-empty");
            let mut e1 = &k * &e2 / s;
            for c in &chosen {
                e1 -= c * c.dot(&e1);
            }
            e1 -= &e2 * e2.dot(&e1);
            let e1 = e1.normalize();
            o.set_column(col, &e1);
            o.set_column(col + 1, &e2);
            chosen.push(e1);
            chosen.push(e2);
            values.push(s);
            col += 2;
        }
    }
    for w in values.windows(2) {
        if (w[1] - w[0]).abs() <= 1e-9 * w[1].abs() {
            degenerate = true;
        }
    }
    let mut dhalf = Mat::zeros(dim, dim);
    for (k, s) in values.iter().enumerate() {
        dhalf[(2 * k, 2 * k)] = s.sqrt();
        dhalf[(2 * k + 1, 2 * k + 1)] = s.sqrt();
    }
    let s = dhalf * o.transpose() * inv_root;
    Ok(WilliamsonForm { s, values, degenerate })
}
