//! Covariance matrices of filtered output modes, the cavity output spectrum
//! and the tripartite partial-transpose test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{plus_i_omega, pt_mask, require_physical, Convention, GaussianState};
use crate::numerics::{integrate_interval, min_hermitian_eigenvalue, CMat, Mat, QuadratureSpec, C64};

use super::dynamics::{steady_cm, DriftModel, SteadyMethod, ThermalKernel};
use super::filters::{filter_breakpoints, make_filters, FilterSet, FilterSpec};

/// Options of the output covariance-matrix computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputOptions {
    /// Mechanical noise kernel.
    pub kernel: ThermalKernel,
    /// Quadrature tolerances; the range is set by `width_factor`.
    pub quad: QuadratureSpec,
    /// Truncation as a multiple of the largest rate of the problem.
    pub width_factor: f64,
    /// Reject filter sets that are not orthogonal on a common cavity mode.
    pub require_orthogonal: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self {
            kernel: ThermalKernel::Markov,
            quad: QuadratureSpec {
                abs_tol: 1e-9,
                rel_tol: 1e-9,
                omega_max: f64::INFINITY,
                max_subdivisions: 200_000,
            },
            width_factor: 100.0,
            require_orthogonal: true,
        }
    }
}

/// Real representation `[[ĝ_r, −ĝ_i], [ĝ_i, ĝ_r]]` of a filter acting on quadratures.
fn quadrature_filter(f: &FilterSpec, omega: f64) -> [[C64; 2]; 2] {
    let plus = f.transform_full(omega);
    let minus = f.transform_full(-omega).conj();
    let gr = (plus + minus) * 0.5;
    let gi = (plus - minus) / C64::new(0.0, 2.0);
    [[gr, -gi], [gi, gr]]
}

/// `½ [[Re o, −Im o], [Im o, Re o]]`: the vacuum covariance of two filtered modes.
fn overlap_block(o: C64) -> [[f64; 2]; 2] {
    [[0.5 * o.re, -0.5 * o.im], [0.5 * o.im, 0.5 * o.re]]
}

/// Largest frequency scale entering the output integrand.
fn output_rate_scale(model: &DriftModel, filters: &[FilterSpec]) -> f64 {
    filters
        .iter()
        .fold(model.rate_scale(), |acc, f| acc.max(f.center.abs()).max(f.bandwidth()))
}

/// Covariance matrix (`VacuumHalf`) of the mirror and the filtered output modes.
///
/// The matrix has size `2 + 2N` for `N` filters, ordered as
/// `(δq, δp, X₁, Y₁, …, X_N, Y_N)`. The mirror block is the intracavity
/// steady state; the direct-reflection part of each output block is the
/// closed-form filter overlap; the remaining frequency integral is
/// truncated at `width_factor` times the largest rate.
pub fn output_cm(model: &DriftModel, filters: &[FilterSpec], opts: &OutputOptions) -> Result<Mat> {
    model.require_stable()?;
    let set = make_filters(filters, opts.require_orthogonal)?;
    let modes = model.cavity_modes();
    if let Some(f) = filters.iter().find(|f| f.cavity_mode >= modes) {
        return Err(Error::DimensionMismatch(format!(
            "filter reads cavity mode {} but the model has {modes}",
            f.cavity_mode
        )));
    }
    let method = match opts.kernel {
        ThermalKernel::Markov => SteadyMethod::Lyapunov,
        ThermalKernel::Exact => SteadyMethod::SpectralExact,
    };
    let v_mech = steady_cm(model, method, &opts.quad)?;
    let remainder = output_remainder(model, &set, opts)?;

    let dim = 2 + 2 * filters.len();
    let mut v = remainder;
    for i in 0..2 {
        for j in 0..2 {
            v[(i, j)] = v_mech[(i, j)];
        }
    }
    for j in 0..filters.len() {
        for k in 0..filters.len() {
            let b = overlap_block(set.overlaps[(j, k)]);
            for (r, row) in b.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    v[(2 + 2 * j + r, 2 + 2 * k + c)] += x;
                }
            }
        }
    }
    debug_assert_eq!(v.nrows(), dim);
    Ok((&v + v.transpose()) * 0.5)
}

/// Frequency integral of every term of the output integrand that involves
/// the cavity response.
fn output_remainder(model: &DriftModel, set: &FilterSet, opts: &OutputOptions) -> Result<Mat> {
    let n = model.a.nrows();
    let nf = set.filters.len();
    let dim = 2 + 2 * nf;
    let kappa = model.kappa;
    let sk = (2.0 * kappa).sqrt();
    let inv_2pi = 0.5 / std::f64::consts::PI;
    let kernel = opts.kernel;

    let integrand = |w: f64| -> Mat {
        let m = match model.resolvent(w) {
            Ok(m) => m,
            Err(_) => return Mat::from_element(dim, dim, f64::NAN),
        };
        let d = model.diffusion(w, kernel);
        let mut km = CMat::zeros(dim, n);
        let mut kp = CMat::zeros(dim, n);
        for c in 0..n {
            km[(0, c)] = -m[(0, c)];
            km[(1, c)] = -m[(1, c)];
        }
        for (k, f) in set.filters.iter().enumerate() {
            let r = quadrature_filter(f, w);
            let base = 2 + 2 * f.cavity_mode;
            for row in 0..2 {
                for c in 0..n {
                    km[(2 + 2 * k + row, c)] =
                        -(r[row][0] * m[(base, c)] + r[row][1] * m[(base + 1, c)]) * sk;
                }
                kp[(2 + 2 * k + row, base)] = -r[row][0] / sk;
                kp[(2 + 2 * k + row, base + 1)] = -r[row][1] / sk;
            }
        }
        let mut out = Mat::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let mut s = C64::new(0.0, 0.0);
                for c in 0..n {
                    let dc = d[(c, c)];
                    if dc == 0.0 {
                        continue;
                    }
                    s += (km[(i, c)] * km[(j, c)].conj()
                        + km[(i, c)] * kp[(j, c)].conj()
                        + kp[(i, c)] * km[(j, c)].conj())
                        * dc;
                }
                out[(i, j)] = s.re * inv_2pi;
                out[(j, i)] = out[(i, j)];
            }
        }
        out
    };

    let width = opts.width_factor * output_rate_scale(model, &set.filters);
    let mut bps = model.breakpoints()?;
    for f in &set.filters {
        bps.extend(filter_breakpoints(f));
    }
    let spec = QuadratureSpec { omega_max: width, ..opts.quad };
    integrate_interval(integrand, -width, width, &bps, &spec)
}

/// Direct-reflection part `(1/2π) ∫ ½ R_j R_k† dω` of the output integrand,
/// evaluated by quadrature over `[−W, W]`.
///
/// For an orthonormal filter set the exact value is `I/2`.
pub fn projector_term_quadrature(filters: &[FilterSpec], width: f64, quad: &QuadratureSpec) -> Result<Mat> {
    let nf = filters.len();
    let dim = 2 * nf;
    let inv_2pi = 0.5 / std::f64::consts::PI;
    let integrand = |w: f64| -> Mat {
        let rs: Vec<_> = filters.iter().map(|f| quadrature_filter(f, w)).collect();
        let mut out = Mat::zeros(dim, dim);
        for j in 0..nf {
            for k in 0..nf {
                if filters[j].cavity_mode != filters[k].cavity_mode {
                    continue;
                }
                for a in 0..2 {
                    for b in 0..2 {
                        let s = rs[j][a][0] * rs[k][b][0].conj() + rs[j][a][1] * rs[k][b][1].conj();
                        out[(2 * j + a, 2 * k + b)] = 0.5 * s.re * inv_2pi;
                    }
                }
            }
        }
        out
    };
    let mut bps = Vec::new();
    for f in filters {
        bps.extend(filter_breakpoints(f));
    }
    let spec = QuadratureSpec { omega_max: width, ..*quad };
    integrate_interval(integrand, -width, width, &bps, &spec)
}

/// Spectrum of the mechanical force noise seen by the cavity field.
fn force_noise(model: &DriftModel, omega: f64, kernel: ThermalKernel) -> f64 {
    let b = &model.bath;
    match kernel {
        ThermalKernel::Markov => b.markov() - b.gamma_m * omega / b.omega_m,
        ThermalKernel::Exact => b.exact(omega) - b.gamma_m * omega / b.omega_m,
    }
}

/// Photon-number fluctuation spectrum `S(ω)` of the first cavity mode.
///
/// `δa(ω) = r(ω)·ñ(ω)` with `r = −(e_X + i e_Y) M̃ / √2`; thermal force noise
/// enters through `r₂` and vacuum input noise through `√κ (r₃ + i r₄)`.
pub fn output_spectrum(model: &DriftModel, omegas: &[f64], kernel: ThermalKernel) -> Result<Vec<f64>> {
    model.require_stable()?;
    let s2 = std::f64::consts::SQRT_2;
    omegas
        .iter()
        .map(|&w| {
            let m = model.resolvent(w)?;
            let r = |c: usize| -(m[(2, c)] + C64::new(0.0, 1.0) * m[(3, c)]) / s2;
            let h_xi = r(1);
            let h_in = (r(2) + C64::new(0.0, 1.0) * r(3)) * model.kappa.sqrt();
            Ok(h_xi.norm_sqr() * force_noise(model, w, kernel) + h_in.norm_sqr())
        })
        .collect()
}

/// Smallest eigenvalue of `Λ_j V Λ_j + iΩ` for each mode `j` of a
/// three-mode state (`VacuumOne` units).
///
/// All three negative means every bipartition `j | rest` is entangled.
pub fn tripartite_test(state: &GaussianState) -> Result<[f64; 3]> {
    if state.modes() != 3 {
        return Err(Error::DimensionMismatch("tripartite test needs three modes".into()));
    }
    require_physical(state)?;
    let v = state.cm_one();
    let mut out = [0.0; 3];
    for (j, slot) in out.iter_mut().enumerate() {
        let lam = pt_mask(3, &[j]);
        *slot = min_hermitian_eigenvalue(&plus_i_omega(&(&lam * &v * &lam)))?;
    }
    Ok(out)
}

/// [`tripartite_test`] on a `VacuumHalf` covariance matrix.
pub fn tripartite_test_half(v: &Mat) -> Result<[f64; 3]> {
    tripartite_test(&GaussianState::new(v.clone(), None, Convention::VacuumHalf)?)
}
