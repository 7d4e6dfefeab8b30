//! Optimal local trace-preserving maps for coherent-state teleportation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    apply_tgcp, log_negativity, pt_mask, require_physical, williamson_transform, z2, GaussianState,
    TgcpChannel, TwoModeBlocks,
};
use crate::numerics::{block_diag, brent, Mat};

use super::fidelity::{fidelity_bounds, fidelity_coherent, noise_from_blocks, FidelityBounds};
use super::forms::{eta_form_near, shifted_root, EtaForm};

/// Mode on which the attenuating beam splitter acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttenuationSide {
    /// No attenuation; the optimum is the `η = 1` form.
    None,
    /// Attenuation on the first mode.
    Alice,
    /// Attenuation on the second mode.
    Bob,
}

/// A stationary point of the fidelity over the `V_η` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    /// Mode carrying the attenuation.
    pub side: AttenuationSide,
    /// Family parameter.
    pub eta: f64,
    /// Offset of the form.
    pub lambda: f64,
    /// Fidelity reached by this candidate.
    pub fidelity: f64,
}

/// Optimal local map and the fidelity it achieves.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalMapResult {
    /// False when the state is separable; the map is then the identity and
    /// the fidelity the classical value `1/2`.
    pub entangled: bool,
    /// Smallest partially transposed symplectic eigenvalue.
    pub nu: f64,
    /// Logarithmic negativity.
    pub log_negativity: f64,
    /// Bounds on the optimal fidelity; `None` for separable states.
    pub bounds: Option<FidelityBounds>,
    /// Optimal fidelity.
    pub fidelity: f64,
    /// Local symplectic map on the first mode.
    pub sa: Mat,
    /// Local symplectic map on the second mode.
    pub sb: Mat,
    /// Mode carrying the attenuation.
    pub side: AttenuationSide,
    /// Amplitude transmissivity `τ = d/(m − 1)`; one when `side` is `None`.
    pub tau: f64,
    /// Form of the state after the local symplectic maps.
    pub form: Option<EtaForm>,
    /// Every stationary point examined.
    pub candidates: Vec<Candidate>,
}

impl OptimalMapResult {
    /// The full optimal channel `(S_A ⊕ S_B)` followed by the attenuation.
    pub fn channel(&self) -> Result<TgcpChannel> {
        let (ta, tb) = match self.side {
            AttenuationSide::None => (1.0, 1.0),
            AttenuationSide::Alice => (self.tau, 1.0),
            AttenuationSide::Bob => (1.0, self.tau),
        };
        let att = TgcpChannel::attenuation(ta)?.tensor(&TgcpChannel::attenuation(tb)?);
        let s = att.s() * block_diag(&[&self.sa, &self.sb]);
        TgcpChannel::new(s, att.g().clone())
    }
}

#[derive(Clone, Copy)]
struct Invariants {
    a: f64,
    b: f64,
    c: f64,
    v: f64,
}

impl Invariants {
    fn nmd(&self, lambda: f64, eta: f64) -> (f64, f64, f64) {
        (
            shifted_root(lambda / 2.0, self.a),
            shifted_root(lambda / (2.0 * eta * eta), self.b),
            shifted_root(lambda / (2.0 * eta), self.c),
        )
    }

    fn det_gap(&self, lambda: f64, eta: f64) -> f64 {
        let (n, m, d) = self.nmd(lambda, eta);
        let p = n * m - d * d;
        let q = m + n / (eta * eta) - 2.0 * d / eta;
        (p + lambda * q) * p - self.v
    }

    fn fidelity(&self, lambda: f64, eta: f64) -> f64 {
        let (n, m, d) = self.nmd(lambda, eta);
        let e2 = eta * eta;
        2.0 / (2.0 + n - 2.0 * eta * d + e2 * m + 1.0 - e2)
    }

    /// Non-negative roots of `det V_η = det V`, ascending.
    ///
    /// `V_η(−λ)` is carried onto `V_η(λ)` by exchanging position and momentum
    /// on both modes, so the negative branch adds nothing and suffers from
    /// cancellation in `nm − d²`.
    fn roots(&self, eta: f64) -> Vec<f64> {
        let scale = self.a.max(self.b).max(1.0);
        let f = |l: f64| self.det_gap(l, eta);
        let mut grid = vec![0.0];
        grid.extend((-96..=64).map(|k| scale * 10f64.powf(k as f64 / 8.0)));
        let mut roots = Vec::new();
        let zero_tol = 1e-12 * self.v.max(1.0);
        if f(0.0).abs() <= zero_tol {
            roots.push(0.0);
        }
        for w in grid.windows(2) {
            let (fa, fb) = (f(w[0]), f(w[1]));
            if fa.abs() <= zero_tol || fb.abs() <= zero_tol {
                continue;
            }
            if fa.signum() != fb.signum() {
                if let Ok(r) = brent(f, w[0], w[1], 1e-15 * scale, 0.0) {
                    roots.push(r);
                }
            }
        }
        roots
    }

    fn stationarity(&self, lambda: f64, eta: f64) -> f64 {
        let (_, m, d) = self.nmd(lambda, eta);
        eta * (m - 1.0) - d
    }
}

const ETA_POINTS: usize = 400;

fn side_candidates(inv: &Invariants, side: AttenuationSide) -> Vec<Candidate> {
    let mut out = Vec::new();
    let etas: Vec<f64> = (1..=ETA_POINTS).map(|i| i as f64 / (ETA_POINTS + 1) as f64).collect();
    let mut prev: Option<(f64, Vec<f64>)> = None;
    for &eta in &etas {
        let keys = inv.roots(eta);
        for &l in &keys {
            if inv.stationarity(l, eta).abs() <= 1e-12 {
                out.push(Candidate { side, eta, lambda: l, fidelity: inv.fidelity(l, eta) });
            }
        }
        if let Some((eta0, keys0)) = &prev {
            for (rank, &l0) in keys0.iter().enumerate() {
                let Some(&l1) = keys.get(rank) else {
                    continue;
                };
                let (h0, h1) = (inv.stationarity(l0, *eta0), inv.stationarity(l1, eta));
                if h0.signum() == h1.signum() || h0 == 0.0 || h1 == 0.0 {
                    continue;
                }
                let (mut lo, mut hi, mut hlo) = (*eta0, eta, h0);
                let mut lam = l1;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let Some(lm) = inv.roots(mid).get(rank).copied() else { break };
                    let hm = inv.stationarity(lm, mid);
                    lam = lm;
                    if hm.signum() == hlo.signum() {
                        lo = mid;
                        hlo = hm;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-13 {
                        break;
                    }
                }
                let eta_star = 0.5 * (lo + hi);
                let lam = inv.roots(eta_star).get(rank).copied().unwrap_or(lam);
                out.push(Candidate { side, eta: eta_star, lambda: lam, fidelity: inv.fidelity(lam, eta_star) });
            }
        }
        prev = Some((eta, keys));
    }
    out
}

fn swap_modes(v: &Mat) -> Mat {
    let mut p = Mat::zeros(4, 4);
    p[(0, 2)] = 1.0;
    p[(1, 3)] = 1.0;
    p[(2, 0)] = 1.0;
    p[(3, 1)] = 1.0;
    &p * v * &p
}

/// Searches the local trace-preserving maps maximizing the coherent-state
/// teleportation fidelity of a two-mode state.
///
/// The stationary points lie on the family `V_η`, optionally followed by an
/// attenuating beam splitter of amplitude `τ = η` on one mode.
pub fn optimal_tgcp(state: &GaussianState) -> Result<OptimalMapResult> {
    require_physical(state)?;
    let neg = log_negativity(state)?;
    if neg.nu >= 1.0 {
        return Ok(OptimalMapResult {
            entangled: false,
            nu: neg.nu,
            log_negativity: 0.0,
            bounds: None,
            fidelity: 0.5,
            sa: Mat::identity(2, 2),
            sb: Mat::identity(2, 2),
            side: AttenuationSide::None,
            tau: 1.0,
            form: None,
            candidates: Vec::new(),
        });
    }
    let blocks = state.blocks()?;
    let inv = Invariants {
        a: blocks.a.determinant().sqrt(),
        b: blocks.b.determinant().sqrt(),
        c: blocks.c.determinant().abs().sqrt(),
        v: blocks.det(),
    };
    let inv_swapped = Invariants { a: inv.b, b: inv.a, ..inv };

    let mut candidates: Vec<Candidate> = inv
        .roots(1.0)
        .into_iter()
        .map(|l| Candidate { side: AttenuationSide::None, eta: 1.0, lambda: l, fidelity: inv.fidelity(l, 1.0) })
        .collect();
    candidates.extend(side_candidates(&inv, AttenuationSide::Bob));
    candidates.extend(side_candidates(&inv_swapped, AttenuationSide::Alice));
    candidates.retain(|c| c.fidelity.is_finite() && c.fidelity > 0.0 && c.fidelity <= 1.0);

    let mut best = *candidates
        .iter()
        .filter(|c| c.side == AttenuationSide::None)
        .max_by(|x, y| x.fidelity.total_cmp(&y.fidelity))
        .ok_or_else(|| Error::NoRoot("no standard form III reachable".into()))?;
    for c in &candidates {
        if c.fidelity > best.fidelity + 1e-12 {
            best = *c;
        }
    }

    let (work, swap) = match best.side {
        AttenuationSide::Alice => (GaussianState::from_cm(swap_modes(&blocks.to_cm()))?, true),
        _ => (state.to_convention(crate::gaussian::Convention::VacuumOne), false),
    };
    let nf = eta_form_near(&work, best.eta, Some(best.lambda))?;
    let (mut sa, mut sb) = (nf.sa, nf.sb);
    if swap {
        std::mem::swap(&mut sa, &mut sb);
    }
    let tau = match best.side {
        AttenuationSide::None => 1.0,
        _ => nf.form.d / (nf.form.m - 1.0),
    };
    let mut result = OptimalMapResult {
        entangled: true,
        nu: neg.nu,
        log_negativity: neg.log_negativity,
        bounds: Some(fidelity_bounds(neg.nu)?),
        fidelity: best.fidelity,
        sa,
        sb,
        side: best.side,
        tau,
        form: Some(nf.form),
        candidates,
    };
    let out = apply_tgcp(state, &result.channel()?)?;
    result.fidelity = fidelity_coherent(&noise_from_blocks(&out.blocks()?));
    Ok(result)
}

/// The local map `ω_θ` built from the Williamson form of the partial transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaTheta {
    /// Angle `θ = arctan √((1 − ε)/(1 + ε))`.
    pub theta: f64,
    /// `ε = det W_b − det W_a`.
    pub epsilon: f64,
    /// Local channel on both modes.
    pub channel: TgcpChannel,
    /// Teleportation noise after the map.
    pub noise: Mat,
    /// Fidelity after the map.
    pub fidelity: f64,
    /// Fidelity predicted from `ν` and `ε`: `(1 + |ε|)/(1 + ν + 2|ε|)`.
    pub predicted_fidelity: f64,
}

/// Builds `ω_θ`, which brings the noise to `2(ν + |ε|)/(1 + |ε|)·I`.
pub fn build_omega_theta(state: &GaussianState) -> Result<OmegaTheta> {
    require_physical(state)?;
    let lam = pt_mask(2, &[0]);
    let v = state.cm_one();
    if v.shape() != (4, 4) {
        return Err(Error::DimensionMismatch("ω_θ needs a two-mode state".into()));
    }
    let wf = williamson_transform(&(&lam * &v * &lam))?;
    let nu = wf.values[0];
    let wa = wf.s.view((0, 0), (2, 2)).into_owned();
    let wb = wf.s.view((0, 2), (2, 2)).into_owned();
    let epsilon = wb.determinant() - wa.determinant();
    if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&epsilon) {
        return Err(Error::DomainError(format!("ε = {epsilon} outside [−1, 1]")));
    }
    let eps = epsilon.clamp(-1.0, 1.0);
    let theta = ((1.0 - eps) / (1.0 + eps)).sqrt().atan();
    let z = z2();
    let (scale, ga, gb) = if theta <= std::f64::consts::FRAC_PI_4 {
        (theta.cos(), 1.0 - theta.tan().powi(2), 0.0)
    } else {
        (theta.sin(), 0.0, 1.0 - (1.0 / theta.tan()).powi(2))
    };
    let sa = &z * &wa * &z / scale;
    let sb = &wb / scale;
    let s = block_diag(&[&sa, &sb]);
    let g = block_diag(&[&(Mat::identity(2, 2) * ga.max(0.0)), &(Mat::identity(2, 2) * gb.max(0.0))]);
    let channel = TgcpChannel::new(s, g)?;
    let out = apply_tgcp(state, &channel)?;
    let noise = noise_from_blocks(&TwoModeBlocks::from_cm(out.cm())?);
    let fidelity = fidelity_coherent(&noise);
    let e = eps.abs();
    Ok(OmegaTheta {
        theta,
        epsilon,
        channel,
        noise,
        fidelity,
        predicted_fidelity: (1.0 + e) / (1.0 + nu + 2.0 * e),
    })
}
