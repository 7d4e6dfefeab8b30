//! Standard forms of two-mode covariance matrices under local symplectic maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{require_physical, GaussianState, TwoModeBlocks};
use crate::numerics::{block_diag, brent, inv_sqrtm_spd, Mat};

/// Rotation `[[cos φ, −sin φ], [sin φ, cos φ]]`.
pub(crate) fn rot(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Single-mode squeezer `diag(√r, 1/√r)`.
pub(crate) fn squeeze_diag(r: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[r.sqrt(), 0.0, 0.0, 1.0 / r.sqrt()])
}

/// Standard form I: `A = a I`, `B = b I`, `C = diag(−c₁, c₂)` with `c₁ ≥ |c₂|`.
///
/// `c₂` is negative only when `det C > 0`, in which case the state is separable.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormI {
    /// Local invariant `√det A`.
    pub a: f64,
    /// Local invariant `√det B`.
    pub b: f64,
    /// Larger correlation entry.
    pub c1: f64,
    /// Smaller correlation entry.
    pub c2: f64,
    /// Local symplectic map on the first mode.
    pub sa: Mat,
    /// Local symplectic map on the second mode.
    pub sb: Mat,
}

impl StandardFormI {
    /// Covariance matrix in standard form.
    pub fn cm(&self) -> Mat {
        TwoModeBlocks {
            a: Mat::identity(2, 2) * self.a,
            b: Mat::identity(2, 2) * self.b,
            c: Mat::from_row_slice(2, 2, &[-self.c1, 0.0, 0.0, self.c2]),
        }
        .to_cm()
    }

    /// Same form with `c₁` and `c₂` exchanged by an extra pair of local rotations.
    pub fn swapped(&self) -> Self {
        let r = rot(-std::f64::consts::FRAC_PI_2);
        Self {
            a: self.a,
            b: self.b,
            c1: self.c2,
            c2: self.c1,
            sa: &r * &self.sa,
            sb: -&r * &self.sb,
        }
    }

    /// Combined local map `S_A ⊕ S_B`.
    pub fn local_map(&self) -> Mat {
        block_diag(&[&self.sa, &self.sb])
    }
}

/// Brings a physical two-mode state to standard form I.
pub fn standard_form_i(state: &GaussianState) -> Result<StandardFormI> {
    require_physical(state)?;
    let blocks = state.blocks()?;
    let a = blocks.a.determinant().sqrt();
    let b = blocks.b.determinant().sqrt();
    let sa0 = inv_sqrtm_spd(&blocks.a)? * a.sqrt();
    let sb0 = inv_sqrtm_spd(&blocks.b)? * b.sqrt();
    let m = &sa0 * &blocks.c * sb0.transpose();

    let e = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let f = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let g = 0.5 * (m[(1, 0)] + m[(0, 1)]);
    let h = 0.5 * (m[(1, 0)] - m[(0, 1)]);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    let theta = 0.5 * (a2 - a1);
    let phi = 0.5 * (a2 + a1);

    let sa = -rot(phi).transpose() * sa0;
    let sb = rot(theta) * sb0;
    Ok(StandardFormI { a, b, c1: q + r, c2: -(q - r), sa, sb })
}

/// Entries `(a, b, c₁, c₂)` of standard form I.
pub fn standard_form_entries(state: &GaussianState) -> Result<(f64, f64, f64, f64)> {
    let sf = standard_form_i(state)?;
    Ok((sf.a, sf.b, sf.c1, sf.c2))
}

/// Member of the family `V_η` of standard forms.
///
/// `A = diag(n + λ, n)`, `B = diag(m + λ/η², m)`, `C = diag(−d − λ/η, d)`;
/// at `η = 1` this is standard form III.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaForm {
    /// Lower diagonal entry of `A`.
    pub n: f64,
    /// Lower diagonal entry of `B`.
    pub m: f64,
    /// Lower diagonal entry of `C`.
    pub d: f64,
    /// Offset `λ`.
    pub lambda: f64,
    /// Family parameter `η`.
    pub eta: f64,
}

impl EtaForm {
    /// Covariance matrix of this member of the family.
    pub fn cm(&self) -> Mat {
        let (n, m, d, l, e) = (self.n, self.m, self.d, self.lambda, self.eta);
        TwoModeBlocks {
            a: Mat::from_row_slice(2, 2, &[n + l, 0.0, 0.0, n]),
            b: Mat::from_row_slice(2, 2, &[m + l / (e * e), 0.0, 0.0, m]),
            c: Mat::from_row_slice(2, 2, &[-d - l / e, 0.0, 0.0, d]),
        }
        .to_cm()
    }
}

/// A member of the `V_η` family with the local maps producing it.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaNormalForm {
    /// Entries of the form.
    pub form: EtaForm,
    /// Local symplectic map on the first mode.
    pub sa: Mat,
    /// Local symplectic map on the second mode.
    pub sb: Mat,
}

/// `−x + √(k² + x²)` without cancellation.
pub(crate) fn shifted_root(x: f64, k: f64) -> f64 {
    let root = k.hypot(x);
    if x > 0.0 {
        k * k / (x + root)
    } else {
        root - x
    }
}

fn squeeze_ratio(lambda: f64, k: f64) -> f64 {
    let x = lambda / (2.0 * k);
    let root = 1f64.hypot(x);
    if x < 0.0 {
        1.0 / (root - x)
    } else {
        x + root
    }
}

fn eta_residual(sf: &StandardFormI, eta: f64, lambda: f64) -> f64 {
    let ra = squeeze_ratio(lambda, sf.a);
    let rb = squeeze_ratio(lambda / (eta * eta), sf.b);
    let s = (ra * rb).sqrt();
    sf.c1 * s - sf.c2 / s - lambda / eta
}

/// Roots of the squeezing constraint for a given form I, sorted ascending.
fn eta_roots(sf: &StandardFormI, eta: f64) -> Result<Vec<f64>> {
    let scale = sf.a.max(sf.b).max(1.0);
    let f = |l: f64| eta_residual(sf, eta, l);
    if f(0.0).abs() <= 1e-14 * scale {
        return Ok(vec![0.0]);
    }
    let mut grid = vec![0.0];
    for k in -96..=64 {
        let x = scale * 10f64.powf(k as f64 / 8.0);
        grid.push(x);
        grid.push(-x);
    }
    grid.sort_by(f64::total_cmp);
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa == 0.0 {
            roots.push(w[0]);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            roots.push(brent(f, w[0], w[1], 1e-15 * scale, 0.0)?);
        }
    }
    if roots.is_empty() {
        return Err(Error::NoRoot(format!("no squeezing reaches the η = {eta} form")));
    }
    Ok(roots)
}

fn build_eta_form(sf: &StandardFormI, eta: f64, lambda: f64) -> EtaNormalForm {
    let ra = squeeze_ratio(lambda, sf.a);
    let rb = squeeze_ratio(lambda / (eta * eta), sf.b);
    let s = (ra * rb).sqrt();
    EtaNormalForm {
        form: EtaForm {
            n: sf.a / ra,
            m: sf.b / rb,
            d: sf.c2 / s,
            lambda,
            eta,
        },
        sa: squeeze_diag(ra) * &sf.sa,
        sb: squeeze_diag(rb) * &sf.sb,
    }
}

/// Local maps bringing a state to the `V_η` form whose `λ` is closest to `target`.
///
/// Both orderings of the standard-form-I correlations are tried.
pub(crate) fn eta_form_near(state: &GaussianState, eta: f64, target: Option<f64>) -> Result<EtaNormalForm> {
    let sf = standard_form_i(state)?;
    let mut best: Option<(f64, StandardFormI, f64)> = None;
    for form in [sf.clone(), sf.swapped()] {
        let roots = match eta_roots(&form, eta) {
            Ok(r) => r,
            Err(_) => continue,
        };
        for l in roots {
            let dist = match target {
                Some(t) => (l - t).abs(),
                None => l.abs(),
            };
            if best.as_ref().map_or(true, |(d, _, _)| dist < *d) {
                best = Some((dist, form.clone(), l));
            }
        }
    }
    let (_, form, lambda) =
        best.ok_or_else(|| Error::NoRoot(format!("no squeezing reaches the η = {eta} form")))?;
    Ok(build_eta_form(&form, eta, lambda))
}

/// Brings a state to the `V_η` form.
///
/// Starting from standard form I with `c₁ ≥ c₂`, the root with the smallest
/// `|λ|` among those with `sign λ = sign(c₁ − c₂)` is taken.
pub fn normal_form_eta(state: &GaussianState, eta: f64) -> Result<EtaNormalForm> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::DomainError(format!("η = {eta} outside (0, 1]")));
    }
    let sf = standard_form_i(state)?;
    let sign = (sf.c1 - sf.c2).signum();
    let lambda = eta_roots(&sf, eta)
        .ok()
        .and_then(|roots| {
            roots
                .into_iter()
                .filter(|l| *l == 0.0 || l.signum() == sign)
                .min_by(|x, y| x.abs().total_cmp(&y.abs()))
        });
    match lambda {
        Some(l) => Ok(build_eta_form(&sf, eta, l)),
        None => eta_form_near(state, eta, None),
    }
}

/// Standard form III, the `η = 1` member of the family.
pub fn standard_form_iii(state: &GaussianState) -> Result<EtaNormalForm> {
    normal_form_eta(state, 1.0)
}
