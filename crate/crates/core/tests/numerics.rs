//! Eigenvalues, Hermitian spectra, Lyapunov solves, quadrature and root finding.

use optoent::numerics::*;
use optoent::Error;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn sorted_re(mut v: Vec<C64>) -> Vec<C64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

#[test]
fn eigenvalues_of_diagonal_matrix() {
    let m = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
    let e = sorted_re(eigenvalues(&m).unwrap());
    for (z, want) in e.iter().zip([1.0, 2.0, 3.0]) {
        assert!((z - c(want, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn eigenvalues_of_rotation_generator() {
    let m = Mat::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
    let mut e = eigenvalues(&m).unwrap();
    e.sort_by(|a, b| a.im.total_cmp(&b.im));
    assert!((e[0] - c(0.0, -1.0)).norm() < 1e-12);
    assert!((e[1] - c(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn eigenvalues_of_companion_matrix_match_factored_roots() {
    // x³ − 6x² + 11x − 6 = (x − 1)(x − 2)(x − 3)
    let m = Mat::from_row_slice(3, 3, &[6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    let e = sorted_re(eigenvalues(&m).unwrap());
    for (z, want) in e.iter().zip([1.0, 2.0, 3.0]) {
        assert!((z - c(want, 0.0)).norm() < 1e-10, "{z} vs {want}");
    }
}

#[test]
fn eigenvalues_reject_oversized_input() {
    assert!(matches!(eigenvalues(&Mat::identity(17, 17)), Err(Error::DimensionMismatch(_))));
}

#[test]
fn hermitian_spectrum_examples() {
    let id = to_complex(&Mat::identity(4, 4));
    assert_eq!(hermitian_spectrum(&id).unwrap(), vec![1.0; 4]);
    let sx = to_complex(&Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    let s = hermitian_spectrum(&sx).unwrap();
    assert!((s[0] + 1.0).abs() < 1e-14 && (s[1] - 1.0).abs() < 1e-14);
    // V + iΩ for the vacuum V = I₂: [[1, i], [−i, 1]] has eigenvalues 0 and 2.
    let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
    let s = hermitian_spectrum(&m).unwrap();
    assert!(s[0].abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
}

#[test]
fn hermitian_spectrum_rejects_non_hermitian() {
    let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    assert!(matches!(hermitian_spectrum(&m), Err(Error::NotHermitian { .. })));
}

#[test]
fn lyapunov_scalar_and_identity() {
    let v = solve_lyapunov(&Mat::from_element(1, 1, -1.0), &Mat::from_element(1, 1, 2.0)).unwrap();
    assert!((v[(0, 0)] - 1.0).abs() < 1e-14);
    let v = solve_lyapunov(&-Mat::identity(2, 2), &Mat::identity(2, 2)).unwrap();
    assert!(max_abs(&(v - Mat::identity(2, 2) * 0.5)) < 1e-14);
}

#[test]
fn lyapunov_rejects_unstable_drift() {
    let a = Mat::from_row_slice(2, 2, &[0.1, 1.0, -1.0, 0.1]);
    assert!(matches!(solve_lyapunov(&a, &Mat::identity(2, 2)), Err(Error::UnstableDrift { .. })));
}

#[test]
fn quadrature_of_lorentzian_and_gaussian() {
    let k = 3.0;
    let spec = QuadratureSpec::default();
    let lor = integrate_matrix_with_hints(
        |w| Mat::identity(2, 2) * (k / (std::f64::consts::PI * (k * k + w * w))),
        &spec,
        k,
        &[],
    )
    .unwrap();
    assert!(max_abs(&(lor - Mat::identity(2, 2))) < 1e-8);
    let gauss = integrate_matrix(|w| Mat::identity(2, 2) * (-w * w).exp(), &QuadratureSpec::truncated(40.0)).unwrap();
    assert!(max_abs(&(gauss - Mat::identity(2, 2) * std::f64::consts::PI.sqrt())) < 1e-8);
}

#[test]
fn quadrature_reports_exhausted_budget() {
    let spec = QuadratureSpec { abs_tol: 1e-14, rel_tol: 1e-14, omega_max: 1.0, max_subdivisions: 4 };
    let r = integrate_matrix(|w| Mat::from_element(1, 1, (w.abs() + 1e-9).ln()), &spec);
    assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
}

#[test]
fn quadrature_rejects_bad_spec() {
    let spec = QuadratureSpec { abs_tol: -1.0, ..QuadratureSpec::default() };
    assert!(matches!(integrate_matrix(|_| Mat::zeros(1, 1), &spec), Err(Error::DomainError(_))));
}

#[test]
fn root_finding_examples() {
    let x = find_root(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap();
    assert!((x - 1.0).abs() < 1e-14);
    assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12), Err(Error::NoBracket { .. })));
    let y = grow_and_solve(|x| x * x - 50.0, 1e-6, 1e-6, 200, 1e-14).unwrap();
    assert!((y - 50f64.sqrt()).abs() < 1e-12);
}

#[test]
fn fixed_point_converges_and_reports_divergence() {
    let x = damped_fixed_point(|x| x.cos(), 0.0, 0.5, 1e-12, 10_000).unwrap();
    assert!((x - x.cos()).abs() < 1e-10);
    assert!(matches!(
        damped_fixed_point(|x| 3.0 * x + 1.0, 1.0, 0.5, 1e-12, 100),
        Err(Error::FixedPointDiverged { .. })
    ));
}

fn random_matrix(n: usize, entries: &[f64]) -> Mat {
    Mat::from_fn(n, n, |i, j| entries[i * n + j])
}

/// Shifts a matrix left of the imaginary axis by more than its spectral abscissa.
fn make_stable(m: Mat) -> Mat {
    let n = m.nrows();
    let shift = max_real_part(&m).unwrap() + 0.1;
    m - Mat::identity(n, n) * shift.max(0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lyapunov_residual_bound(n in 1usize..7, entries in prop::collection::vec(-3.0f64..3.0, 36), dd in prop::collection::vec(0.0f64..2.0, 6)) {
        let a = make_stable(random_matrix(n, &entries));
        let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(dd[..n].to_vec()));
        let v = solve_lyapunov(&a, &d).unwrap();
        let res = lyapunov_residual(&a, &v, &d);
        prop_assert!(res <= 1e-10 * (a.norm() * v.norm() + d.norm()), "residual {res}");
        prop_assert!(max_abs(&(&v - v.transpose())) <= 1e-12 * v.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigenvalues_of_transpose_agree(n in 1usize..9, entries in prop::collection::vec(-3.0f64..3.0, 64)) {
        let m = random_matrix(n, &entries);
        let e1 = eigenvalues(&m).unwrap();
        let e2 = eigenvalues(&m.transpose()).unwrap();
        for z in &e1 {
            let best = e2.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-8 * m.norm().max(1.0), "{z} unmatched ({best:e})");
        }
    }

    #[test]
    fn characteristic_polynomial_vanishes_at_eigenvalues(n in 1usize..7, entries in prop::collection::vec(-2.0f64..2.0, 36)) {
        let m = random_matrix(n, &entries);
        let cm = to_complex(&m);
        let norm = m.norm().max(1.0);
        for z in eigenvalues(&m).unwrap() {
            let shifted = CMat::identity(n, n) * z - &cm;
            prop_assert!(shifted.determinant().norm() <= 1e-8 * norm.powi(n as i32));
        }
    }

    #[test]
    fn hermitian_spectrum_preserves_trace(n in 1usize..9, re in prop::collection::vec(-2.0f64..2.0, 64), im in prop::collection::vec(-2.0f64..2.0, 64)) {
        let raw = CMat::from_fn(n, n, |i, j| c(re[i * 8 + j], im[i * 8 + j]));
        let h = (&raw + raw.adjoint()) * c(0.5, 0.0);
        let s = hermitian_spectrum(&h).unwrap();
        let tr: f64 = (0..n).map(|i| h[(i, i)].re).sum();
        let sum: f64 = s.iter().sum();
        prop_assert!((tr - sum).abs() <= 1e-10 * s.iter().map(|x| x.abs()).sum::<f64>().max(1.0));
        prop_assert!(s.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn quadrature_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, k in 0.5f64..4.0) {
        let spec = QuadratureSpec::truncated(50.0);
        let f = |w: f64| Mat::from_element(1, 1, k / (k * k + w * w));
        let g = |w: f64| Mat::from_element(1, 1, (-w * w / k).exp());
        let lhs = integrate_matrix(|w| f(w) * alpha + g(w) * beta, &spec).unwrap();
        let rhs = integrate_matrix(f, &spec).unwrap() * alpha + integrate_matrix(g, &spec).unwrap() * beta;
        let scale = (alpha.abs() + beta.abs()) * 10.0;
        prop_assert!((lhs[(0, 0)] - rhs[(0, 0)]).abs() <= 2.0 * spec.abs_tol.max(spec.rel_tol * scale) * 10.0);
    }
}
