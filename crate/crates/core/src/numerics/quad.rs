//! Globally adaptive quadrature of matrix-valued integrands.
//!
//! Each panel is integrated with the 7-point Gauss and 15-point Kronrod rules;
//! the panel with the largest error estimate is bisected until the summed
//! estimate meets the requested tolerance. Integrals over the whole real line
//! are mapped onto a finite interval with `ω = s·tan θ`.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::linalg::Mat;
use crate::error::{Error, Result};

/// Tolerances and range of a frequency integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the largest entry.
    pub abs_tol: f64,
    /// Tolerance relative to the largest entry of the result.
    pub rel_tol: f64,
    /// Symmetric truncation frequency in rad/s; `f64::INFINITY` integrates the whole line.
    pub omega_max: f64,
    /// Maximum number of panels.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-10,
            omega_max: f64::INFINITY,
            max_subdivisions: 20_000,
        }
    }
}

impl QuadratureSpec {
    /// Spec with a finite truncation frequency and default tolerances.
    pub fn truncated(omega_max: f64) -> Self {
        Self { omega_max, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.omega_max > 0.0) {
            return Err(Error::DomainError(
                "quadrature tolerances and truncation frequency must be positive".into(),
            ));
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    a: f64,
    b: f64,
    value: Mat,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> Mat>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = &fc * WGK[7];
    let mut gauss = &fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += &s * WGK[j];
        if j % 2 == 1 {
            gauss += &s * WG[j / 2];
        }
    }
    kron *= h;
    gauss *= h;
    let error = (&kron - &gauss).iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
    Panel { a, b, value: kron, error }
}

/// Adaptive integral of `f` over `[a, b]` with extra breakpoints.
pub fn integrate_interval<F: Fn(f64) -> Mat>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Mat> {
    spec.validate()?;
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (b - a).abs());

    let mut heap = BinaryHeap::new();
    for w in cuts.windows(2) {
        heap.push(gauss_kronrod(&f, w[0], w[1]));
    }
    let resum = |heap: &BinaryHeap<Panel>| {
        let first = heap.peek().expect("at least one panel");
        let mut total = Mat::zeros(first.value.nrows(), first.value.ncols());
        let mut err = 0.0;
        for p in heap.iter() {
            total += &p.value;
            err += p.error;
        }
        (total, err)
    };
    let (mut total, mut err) = resum(&heap);
    let mut steps = 0usize;
    loop {
        let scale = total.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));
        let target = spec.abs_tol.max(spec.rel_tol * scale);
        if err <= target {
            let (exact_total, exact_err) = resum(&heap);
            if exact_err <= target {
                return Ok(exact_total);
            }
            total = exact_total;
            err = exact_err;
            continue;
        }
        if heap.len() >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet { estimate: err, target });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::ToleranceNotMet { estimate: err, target });
        }
        let left = gauss_kronrod(&f, worst.a, mid);
        let right = gauss_kronrod(&f, mid, worst.b);
        total += &left.value + &right.value - &worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        steps += 1;
        if steps % 256 == 0 {
            (total, err) = resum(&heap);
        }
    }
}

/// Integral of a matrix-valued function of frequency over `[-ω_max, ω_max]`.
///
/// `scale` sets the frequency unit of the `tan` map used when `ω_max` is
/// infinite, and `breakpoints` lists frequencies where the integrand has
/// sharp features.
pub fn integrate_matrix_with_hints<F: Fn(f64) -> Mat>(
    f: F,
    spec: &QuadratureSpec,
    scale: f64,
    breakpoints: &[f64],
) -> Result<Mat> {
    spec.validate()?;
    if spec.omega_max.is_finite() {
        let w = spec.omega_max;
        integrate_interval(f, -w, w, breakpoints, spec)
    } else {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::DomainError("quadrature scale must be positive".into()));
        }
        let half = std::f64::consts::FRAC_PI_2;
        let mapped: Vec<f64> = breakpoints.iter().map(|w| (w / scale).atan()).collect();
        let g = |t: f64| {
            let c = t.cos();
            f(scale * t.tan()) * (scale / (c * c))
        };
        integrate_interval(g, -half, half, &mapped, spec)
    }
}

/// Integral of a matrix-valued function of frequency over `[-ω_max, ω_max]`.
pub fn integrate_matrix<F: Fn(f64) -> Mat>(f: F, spec: &QuadratureSpec) -> Result<Mat> {
    integrate_matrix_with_hints(f, spec, 1.0, &[])
}

/// Scalar convenience wrapper over [`integrate_interval`].
pub fn integrate_scalar<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let m = integrate_interval(|x| Mat::from_element(1, 1, f(x)), a, b, breakpoints, spec)?;
    Ok(m[(0, 0)])
}
