//! Scalar root finding.

use crate::error::{Error, Result};

/// Brent's method on a bracket `[lo, hi]` where `f` changes sign.
///
/// Iterates until the bracket is narrower than `xtol` (relative to the
/// magnitude of the iterate) or `|f| ≤ ftol`.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64, ftol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() <= ftol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NoConvergence(format!("non-finite function value at {b}")));
        }
    }
    Err(Error::NoConvergence("Brent iteration budget exhausted".into()))
}

/// Finds a root of `f` starting from `seed` by growing a bracket geometrically.
///
/// The bracket `[seed, seed + step·2^k]` is extended in the direction of
/// `step` until `f` changes sign, then refined with [`brent`].
pub fn grow_and_solve<F: FnMut(f64) -> f64>(
    mut f: F,
    seed: f64,
    step: f64,
    max_doublings: usize,
    xtol: f64,
) -> Result<f64> {
    let f0 = f(seed);
    if f0 == 0.0 {
        return Ok(seed);
    }
    let mut prev = seed;
    let mut width = step;
    for _ in 0..max_doublings {
        let x = seed + width;
        let fx = f(x);
        if fx.is_finite() && fx.signum() != f0.signum() {
            return brent(&mut f, prev, x, xtol, 0.0);
        }
        prev = x;
        width *= 2.0;
    }
    Err(Error::NoBracket { lo: seed, hi: seed + width })
}

/// Root of `f` on `[lo, hi]` with residual tolerance `tol`.
///
/// Fails with [`Error::NoConvergence`] if the located point does not satisfy
/// `|f(root)| ≤ tol`.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let x = brent(&mut f, lo, hi, 0.0, tol)?;
    let fx = f(x);
    if fx.abs() <= tol {
        Ok(x)
    } else {
        Err(Error::NoConvergence(format!("residual {fx:e} at {x} exceeds {tol:e}")))
    }
}

/// Damped fixed-point iteration `x ← (1-w)·x + w·g(x)` to a relative tolerance.
pub fn damped_fixed_point<G: FnMut(f64) -> f64>(
    mut g: G,
    x0: f64,
    damping: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut x = x0;
    for _ in 0..max_iter {
        let gx = g(x);
        if !gx.is_finite() {
            return Err(Error::FixedPointDiverged { iterations: max_iter });
        }
        let next = (1.0 - damping) * x + damping * gx;
        if (next - x).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::FixedPointDiverged { iterations: max_iter })
}
