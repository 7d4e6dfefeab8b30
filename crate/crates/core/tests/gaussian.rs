//! States, symplectic spectra, channels, separability tests and measures.

use nalgebra::DVector;
use optoent::gaussian::random::{random_entangled_two_mode, random_local_symplectic, random_physical, random_symplectic};
use optoent::gaussian::*;
use optoent::numerics::{block_diag, integrate_interval, max_abs, Mat, QuadratureSpec};
use optoent::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diag(v: &[f64]) -> Mat {
    Mat::from_diagonal(&DVector::from_vec(v.to_vec()))
}

/// Symplectic eigenvalues from the moduli of the eigenvalues of `iΩV`.
fn symplectic_oracle(v: &Mat) -> Vec<f64> {
    let n = v.nrows() / 2;
    let m = omega(n) * v;
    let mut mods: Vec<f64> = optoent::numerics::eigenvalues(&m).unwrap().iter().map(|z| z.norm()).collect();
    mods.sort_by(f64::total_cmp);
    mods.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

#[test]
fn physicality_examples() {
    let vac = GaussianState::vacuum(1);
    let rep = is_physical(&vac).unwrap();
    assert!(rep.physical && rep.min_eigenvalue.abs() < 1e-14);
    let bad = GaussianState::from_cm(Mat::identity(2, 2) * 0.5).unwrap();
    assert!(!is_physical(&bad).unwrap().physical);
    assert!(matches!(require_physical(&bad), Err(Error::Unphysical { .. })));
    let tms = GaussianState::two_mode_squeezed(1.0);
    assert!(is_physical(&tms).unwrap().physical);
    for s in symplectic_oracle(tms.cm()) {
        assert!((s - 1.0).abs() < 1e-10);
    }
}

#[test]
fn half_convention_physicality_uses_doubled_matrix() {
    let st = GaussianState::new(Mat::identity(2, 2) * 0.5, None, Convention::VacuumHalf).unwrap();
    assert!(is_physical(&st).unwrap().physical);
}

#[test]
fn rejects_malformed_matrices() {
    assert!(matches!(GaussianState::from_cm(Mat::identity(3, 3)), Err(Error::DimensionMismatch(_))));
    let asym = Mat::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
    assert!(matches!(GaussianState::from_cm(asym), Err(Error::DomainError(_))));
}

#[test]
fn symplectic_spectrum_examples() {
    let vac = symplectic_spectrum(&GaussianState::vacuum(3)).unwrap();
    assert!(vac.iter().all(|s| (s - 1.0).abs() < 1e-12));
    let th = symplectic_spectrum(&GaussianState::thermal(&[0.5, 2.0])).unwrap();
    assert!((th[0] - 2.0).abs() < 1e-12 && (th[1] - 5.0).abs() < 1e-12);
    for r in [0.1, 1.0, 2.5] {
        let st = GaussianState::two_mode_squeezed(r);
        assert!((st.cm().determinant() - 1.0).abs() < 1e-9);
        let s = symplectic_spectrum(&st).unwrap();
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-9));
    }
}

#[test]
fn williamson_of_partial_transpose_of_tms() {
    let st = GaussianState::two_mode_squeezed(1.0);
    let lam = pt_mask(2, &[1]);
    let w = williamson_transform(&(&lam * st.cm() * &lam)).unwrap();
    assert!((w.values[0] - (-1f64).exp()).abs() < 1e-10);
    assert!((w.values[1] - 1f64.exp()).abs() < 1e-10);
}

#[test]
fn williamson_of_diagonal_input_is_trivial() {
    let v = diag(&[2.0, 2.0, 3.0, 3.0]);
    let w = williamson_transform(&v).unwrap();
    let d = &w.s * &v * w.s.transpose();
    assert!(max_abs(&(d - &v)) < 1e-12);
    assert!((w.values[0] - 2.0).abs() < 1e-12 && (w.values[1] - 3.0).abs() < 1e-12);
}

#[test]
fn williamson_flags_degenerate_spectrum() {
    let w = williamson_transform(&Mat::identity(4, 4)).unwrap();
    assert!(w.degenerate);
}

#[test]
fn channel_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let st = random_physical(&mut rng, 1, 1.0, 1.0);
    let out = apply_tgcp(&st, &TgcpChannel::identity(1)).unwrap();
    assert!(max_abs(&(out.cm() - st.cm_one())) < 1e-14);
    let att = apply_tgcp(&GaussianState::vacuum(1), &TgcpChannel::attenuation(0.6).unwrap()).unwrap();
    assert!(max_abs(&(att.cm() - Mat::identity(2, 2))) < 1e-14);
    let r = 1.7;
    let sq = TgcpChannel::new(diag(&[r, 1.0 / r]), Mat::zeros(2, 2)).unwrap();
    let out = apply_tgcp(&GaussianState::vacuum(1), &sq).unwrap();
    assert!(max_abs(&(out.cm() - diag(&[r * r, 1.0 / (r * r)]))) < 1e-14);
}

#[test]
fn channel_rejects_non_cp_pair() {
    let r = TgcpChannel::new(Mat::identity(2, 2) * 0.5, Mat::zeros(2, 2));
    assert!(matches!(r, Err(Error::InvalidChannel { .. })));
    assert!(matches!(TgcpChannel::attenuation(1.5), Err(Error::DomainError(_))));
}

#[test]
fn gcp_vacuum_projection_examples() {
    let product = GaussianState::from_cm(block_diag(&[&diag(&[3.0, 2.0]), &diag(&[1.5, 1.5])])).unwrap();
    let out = apply_gcp(&product, &GcpChannel::vacuum_projection(20.0)).unwrap();
    assert!(max_abs(&(out.cm() - diag(&[3.0, 2.0]))) < 1e-6);

    let tms = GaussianState::two_mode_squeezed(1.0);
    let limit = vacuum_projection_limit(&tms).unwrap();
    let b = tms.blocks().unwrap();
    let direct = &b.a - &b.c * (&b.b + Mat::identity(2, 2)).try_inverse().unwrap() * b.c.transpose();
    assert!(max_abs(&(&limit - direct)) < 1e-14);
    // A TMS projected onto the vacuum leaves the vacuum.
    assert!(max_abs(&(&limit - Mat::identity(2, 2))) < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mixed = random_entangled_two_mode(&mut rng, 0.9);
    let limit = vacuum_projection_limit(&mixed).unwrap();
    let mut prev = f64::INFINITY;
    for r in [1.0, 2.0, 5.0, 10.0, 20.0] {
        let out = apply_gcp(&mixed, &GcpChannel::vacuum_projection(r)).unwrap();
        let err = max_abs(&(out.cm() - &limit));
        assert!(err < prev, "deviation {err:e} at r = {r} not below {prev:e}");
        prev = err.max(1e-14);
    }
    assert!(prev < 1e-6);
}

#[test]
fn pt_eigenvalue_and_log_negativity_of_tms() {
    for r in [0.0, 0.5, 1.0, 2.0] {
        let st = GaussianState::two_mode_squeezed(r);
        let nu = nu_min_pt(&st).unwrap();
        assert!((nu - (-r).exp()).abs() < 1e-12);
        let neg = log_negativity(&st).unwrap();
        assert!((neg.log_negativity - r).abs() < 1e-12);
    }
    let vac = log_negativity(&GaussianState::vacuum(2)).unwrap();
    assert_eq!(vac.log_negativity, 0.0);
    assert_eq!(vac.negativity, 0.0);
}

#[test]
fn log_negativity_is_convention_independent() {
    let st = GaussianState::two_mode_squeezed(0.8);
    let half = st.to_convention(Convention::VacuumHalf);
    let a = log_negativity(&st).unwrap().log_negativity;
    let b = log_negativity(&half).unwrap().log_negativity;
    assert!((a - b).abs() < 1e-14);
}

#[test]
fn separability_examples() {
    let tms = GaussianState::two_mode_squeezed(1.0);
    let rep = separability_report(&tms, &duan_grid(None)).unwrap();
    assert!(rep.simon_entangled);
    let (l, m) = duan_variances(&tms, 1.0).unwrap();
    // Each EPR variance equals e^{−r} (half the VacuumOne entry sums).
    assert!((l - (-1f64).exp()).abs() < 1e-12 && (m - (-1f64).exp()).abs() < 1e-12);
    assert!(rep.duan_violation > 0.0 && rep.mancini_violation > 0.0);

    let th = GaussianState::thermal(&[0.3, 1.2]);
    let rep = separability_report(&th, &duan_grid(None)).unwrap();
    assert!(!rep.simon_entangled && rep.duan_violation <= 0.0 && rep.mancini_violation <= 0.0);
}

#[test]
fn duan_grid_shape() {
    let g = duan_grid(Some(2.5));
    assert_eq!(g.len(), 124);
    assert!(g.contains(&2.5) && g.contains(&-2.5) && g.contains(&0.1) && g.contains(&-10.0));
}

#[test]
fn eof_examples() {
    let sep = GaussianState::thermal(&[0.5, 0.5]);
    assert_eq!(eof_symmetric(&sep).unwrap(), 0.0);
    let tms = GaussianState::two_mode_squeezed(1.0);
    let ef = eof_symmetric(&tms).unwrap();
    // A covariance matrix with `cosh 1` blocks is the state vector with
    // Schmidt parameter 1/2; its entropy has a closed form.
    let (c2, s2) = (0.5f64.cosh().powi(2), 0.5f64.sinh().powi(2));
    let oracle = c2 * c2.ln() - s2 * s2.ln();
    assert!((ef - oracle).abs() < 1e-10, "{ef} vs {oracle}");
    let asym = GaussianState::thermal(&[0.1, 2.0]);
    assert!(matches!(eof_symmetric(&asym), Err(Error::NotSymmetric { .. })));
}

#[test]
fn phase_space_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let st = random_physical(&mut rng, 2, 1.0, 1.0);
    let chi0 = characteristic(&st, &DVector::zeros(4)).unwrap();
    assert!((chi0.re - 1.0).abs() < 1e-15 && chi0.im.abs() < 1e-15);
    let w0 = wigner(&GaussianState::vacuum(2), &DVector::zeros(4)).unwrap();
    assert!((w0 - std::f64::consts::PI.powi(-2)).abs() < 1e-15);
    let sing = GaussianState::from_cm(Mat::zeros(2, 2)).unwrap();
    assert!(matches!(wigner(&sing, &DVector::zeros(2)), Err(Error::SingularCm)));
}

#[test]
fn wigner_integrates_to_one() {
    let v = Mat::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 0.9]);
    let st = GaussianState::new(v, Some(DVector::from_vec(vec![0.3, -0.2])), Convention::VacuumOne).unwrap();
    let spec = QuadratureSpec { abs_tol: 1e-11, rel_tol: 1e-11, omega_max: 12.0, max_subdivisions: 5000 };
    let total = integrate_interval(
        |x| {
            let inner = integrate_interval(
                |p| Mat::from_element(1, 1, wigner(&st, &DVector::from_vec(vec![x, p])).unwrap()),
                -12.0,
                12.0,
                &[],
                &spec,
            )
            .unwrap();
            inner
        },
        -12.0,
        12.0,
        &[],
        &spec,
    )
    .unwrap();
    assert!((total[(0, 0)] - 1.0).abs() < 1e-8);
}

#[test]
fn cm_file_round_trip_is_bit_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let st = random_physical(&mut rng, 2, 1.5, 2.0);
    let st = GaussianState::new(st.cm().clone(), Some(DVector::from_vec(vec![0.1, 1.0 / 3.0, -2.5, 1e-17])), Convention::VacuumHalf).unwrap();
    let text = format_cm(&st);
    assert!(text.starts_with("modes=2 convention=half"));
    let back = parse_cm(&text).unwrap();
    assert_eq!(back, st);
}

#[test]
fn cm_file_parse_errors_carry_line_numbers() {
    let bad = "modes=1 convention=one\n1 0\n0 x\n";
    assert!(matches!(parse_cm(bad), Err(Error::Parse { line: 3, .. })));
    assert!(matches!(parse_cm("modes=1 convention=sideways\n1 0\n0 1\n"), Err(Error::Parse { line: 1, .. })));
}

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symplectic_spectrum_is_symplectic_invariant(seed in seeds()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_physical(&mut rng, 2, 1.0, 2.0);
        let s = random_symplectic(&mut rng, 2, 1.0);
        let moved = GaussianState::from_cm(&s * st.cm() * s.transpose()).unwrap();
        let a = symplectic_spectrum(&st).unwrap();
        let b = symplectic_spectrum(&moved).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-8 * x.max(1.0));
        }
    }

    #[test]
    fn williamson_transform_is_symplectic_and_diagonalizes(seed in seeds()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_physical(&mut rng, 3, 1.0, 2.0);
        let w = williamson_transform(st.cm()).unwrap();
        let d = &w.s * st.cm() * w.s.transpose();
        let want: Vec<f64> = w.values.iter().flat_map(|s| [*s, *s]).collect();
        prop_assert!(max_abs(&(d - diag(&want))) < 1e-8 * want.iter().cloned().fold(1.0, f64::max));
        let om = omega(3);
        prop_assert!(max_abs(&(&w.s * &om * w.s.transpose() - om)) < 1e-8);
        let oracle = symplectic_oracle(st.cm());
        for (x, y) in w.values.iter().zip(&oracle) {
            prop_assert!((x - y).abs() < 1e-8 * y.max(1.0));
        }
    }

    #[test]
    fn nu_formula_matches_williamson_route(seed in seeds()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_physical(&mut rng, 2, 1.2, 1.5);
        let lam = pt_mask(2, &[1]);
        let w = symplectic_eigenvalues(&(&lam * st.cm() * &lam)).unwrap();
        let nu = nu_min_pt(&st).unwrap();
        prop_assert!((nu - w[0]).abs() < 1e-10 * w[1].max(1.0));
    }

    #[test]
    fn log_negativity_is_local_symplectic_invariant(seed in seeds()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_physical(&mut rng, 2, 1.2, 1.5);
        let s = block_diag(&[&random_local_symplectic(&mut rng, 1.0), &random_local_symplectic(&mut rng, 1.0)]);
        let moved = GaussianState::from_cm(&s * st.cm() * s.transpose()).unwrap();
        let a = log_negativity(&st).unwrap().log_negativity;
        let b = log_negativity(&moved).unwrap().log_negativity;
        prop_assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn simon_verdict_matches_log_negativity(seed in seeds()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_physical(&mut rng, 2, 1.2, 1.5);
        let rep = separability_report(&st, &duan_grid(None)).unwrap();
        let en = log_negativity(&st).unwrap().log_negativity;
        if en > 1e-8 {
            prop_assert!(rep.simon_entangled);
        }
        if en == 0.0 {
            prop_assert!(!rep.simon_entangled);
            // Duan's inequality holds for every separable state.
            prop_assert!(rep.duan_violation <= 1e-9);
        }
    }

    #[test]
    fn tgcp_output_is_physical(seed in seeds(), tau in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_entangled_two_mode(&mut rng, 0.95);
        let ch = TgcpChannel::attenuation(tau).unwrap().tensor(&TgcpChannel::identity(1));
        let out = apply_tgcp(&st, &ch).unwrap();
        prop_assert!(is_physical(&out).unwrap().physical);
    }

    #[test]
    fn symplectic_images_of_vacuum_are_pure(seed in seeds()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_symplectic(&mut rng, 2, 1.0);
        let st = GaussianState::from_cm(&s * s.transpose()).unwrap();
        prop_assert!((st.cm().determinant() - 1.0).abs() < 1e-8);
        prop_assert!(symplectic_spectrum(&st).unwrap().iter().all(|x| (x - 1.0).abs() < 1e-8));
    }
}
