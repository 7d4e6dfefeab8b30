//! Helpers shared by several integration-test targets.

#![allow(dead_code)]

use optoent::gaussian::GaussianState;
use optoent::teleport::standard_form_entries;

/// Local squeezing factors of the exhaustive grid: 60 log-spaced values in `[0.2, 5]`.
pub fn squeeze_grid() -> Vec<f64> {
    (0..60).map(|k| 0.2 * 25f64.powf(k as f64 / 59.0)).collect()
}

/// Attenuation amplitudes of the exhaustive grid: 40 values in `[0.05, 1]`.
pub fn attenuation_grid() -> Vec<f64> {
    (0..40).map(|k| 0.05 + 0.95 * k as f64 / 39.0).collect()
}

/// Best coherent-state fidelity over local squeezings `diag(r, 1/r)` of the
/// standard-form covariance matrix followed by attenuations `τ` on each side.
///
/// In standard form every such map keeps the blocks diagonal, so the noise
/// matrix is diagonal and the fidelity is `2/√((2 + N_x)(2 + N_p))`.
pub fn brute_force_fidelity(state: &GaussianState) -> f64 {
    let (a, b, c1, c2) = standard_form_entries(state).expect("physical state");
    let rs = squeeze_grid();
    let ts = attenuation_grid();
    let mut best = 0.0f64;
    for &ra in &rs {
        for &rb in &rs {
            let s = (ra * rb).sqrt();
            let (ax, ap) = (a * ra, a / ra);
            let (bx, bp) = (b * rb, b / rb);
            let (cx, cp) = (-c1 * s, c2 / s);
            for &ta in &ts {
                let ta2 = ta * ta;
                let (ax2, ap2) = (ta2 * ax + 1.0 - ta2, ta2 * ap + 1.0 - ta2);
                for &tb in &ts {
                    let tb2 = tb * tb;
                    let t = ta * tb;
                    let nx = ax2 + tb2 * bx + 1.0 - tb2 + 2.0 * t * cx;
                    let np = ap2 + tb2 * bp + 1.0 - tb2 - 2.0 * t * cp;
                    let f = 2.0 / ((2.0 + nx) * (2.0 + np)).sqrt();
                    if f > best {
                        best = f;
                    }
                }
            }
        }
    }
    best
}
