use proptest::prelude::*;

use symdom::ball::{bergman_matrix, quasi_determinant, Automorphism};
use symdom::intertwine::{intertwiner_coeffs, KappaVariant};
use symdom::kernels::{fk_expand, little_kernel, LittleKernelParams};
use symdom::linalg::{cpow, norm_sq, CVec};
use symdom::poly::fock_inner;
use symdom::positivity::{gram_psd_check, weight_transfer, GramSpec, JetPoint, TOL_PSD};
use symdom::sampling::{ball_point, gaussian_vector, polynomial, rng, unitary};

fn close(a: symdom::Complex64, b: symdom::Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn little_kernel_hermitian(seed in any::<u64>(), d in 1usize..=3, lam in 0usize..=3, nu in -3.0f64..6.0) {
        let p = LittleKernelParams::new(d, nu, lam).unwrap();
        let mut r = rng(seed);
        let (z, w) = (ball_point(&mut r, d, 0.85), ball_point(&mut r, d, 0.85));
        let (zeta, omega) = (gaussian_vector(&mut r, d), gaussian_vector(&mut r, d));
        let a = little_kernel(&p, &z, &w, &zeta, &omega).unwrap();
        let b = little_kernel(&p, &w, &z, &omega, &zeta).unwrap().conj();
        prop_assert!(close(a, b, 1e-11));
    }

    #[test]
    fn bergman_determinant_is_power_of_quasi_determinant(seed in any::<u64>(), d in 1usize..=4) {
        let mut r = rng(seed);
        let (z, w) = (ball_point(&mut r, d, 0.95), ball_point(&mut r, d, 0.95));
        let det = bergman_matrix(&z, &w).determinant();
        let want = cpow(quasi_determinant(&z, &w), (d + 1) as f64);
        prop_assert!(close(det, want, 1e-12));
    }

    #[test]
    fn automorphisms_preserve_the_ball_and_invert(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let g = Automorphism::new(ball_point(&mut r, d, 0.9), unitary(&mut r, d)).unwrap();
        let z = ball_point(&mut r, d, 0.9);
        let gz = g.apply(&z).unwrap();
        prop_assert!(norm_sq(&gz) < 1.0);
        let back = g.inverse().apply(&gz).unwrap();
        prop_assert!((back - &z).norm() < 1e-10);
    }

    #[test]
    fn polynomial_algebra_is_pointwise(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let p = polynomial(&mut r, d, 0..=3);
        let q = polynomial(&mut r, d, 0..=3);
        let z = gaussian_vector(&mut r, d);
        prop_assert!(close((&p * &q).eval(&z), p.eval(&z) * q.eval(&z), 1e-11));
        prop_assert!(close((&p + &q).eval(&z), p.eval(&z) + q.eval(&z), 1e-12));
        prop_assert!(close((&p - &q).eval(&z), p.eval(&z) - q.eval(&z), 1e-12));
    }

    #[test]
    fn fock_inner_product_is_hermitian_and_positive(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let p = polynomial(&mut r, d, 0..=4);
        let q = polynomial(&mut r, d, 0..=4);
        let pq = fock_inner(&p, &q).unwrap();
        let qp = fock_inner(&q, &p).unwrap();
        prop_assert!(close(pq, qp.conj(), 1e-12));
        let pp = fock_inner(&p, &p).unwrap();
        prop_assert!(pp.re > 0.0 && pp.im.abs() < 1e-12 * pp.re);
        prop_assert!(pq.norm() <= (pp.re * fock_inner(&q, &q).unwrap().re).sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn fk_coefficients_satisfy_pochhammer_recursion(nu in -5.0f64..8.0, n in 1usize..40) {
        let c = fk_expand(nu, n);
        prop_assert_eq!(c[0], 1.0);
        for k in 0..n {
            prop_assert!((c[k + 1] - c[k] * (nu + k as f64)).abs() <= 1e-12 * c[k + 1].abs().max(1.0));
        }
    }

    #[test]
    fn intertwiner_coefficients_terminate(nu in 0.5f64..8.0, n in 0usize..=5, lam_off in 0usize..=5) {
        let lam = lam_off.min(n);
        let c = intertwiner_coeffs(nu, n, lam).unwrap();
        prop_assert_eq!(c.mu[0], 1.0);
        prop_assert_eq!(c.mu.len(), n - lam + 1);
        prop_assert!(c.mu.iter().all(|m| m.is_finite()));
    }

    #[test]
    fn weight_transfer_at_equal_parameters_is_identity(nu in 0.5f64..8.0, n in 0usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let c: Vec<f64> = (0..=n).map(|_| gaussian_vector(&mut r, 1)[0].norm() + 0.1).collect();
        for v in KappaVariant::ALL {
            let t = weight_transfer(nu, nu, n, &c, v).unwrap();
            for (a, b) in t.c_prime.iter().zip(&c) {
                prop_assert!((a - b).abs() < 1e-12 * b.max(1.0));
            }
        }
    }
}

fn rotated(spec: &GramSpec, u: &symdom::linalg::CMat) -> GramSpec {
    let points = spec.points.iter().map(|p| JetPoint { z: u * &p.z, zeta: u * &p.zeta }).collect();
    GramSpec { points, ..spec.clone() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn psd_verdict_is_unitarily_invariant(seed in any::<u64>(), lam in 0usize..=2, nu in -2.5f64..3.0) {
        let p = LittleKernelParams::new(2, nu, lam).unwrap();
        let spec = GramSpec::random(2, 12, 0.8, seed, TOL_PSD);
        let u = unitary(&mut rng(seed ^ 1), 2);
        let a = gram_psd_check(&p, &spec).unwrap();
        let b = gram_psd_check(&p, &rotated(&spec, &u)).unwrap();
        let scale = a.max_eig.abs().max(1.0);
        prop_assert!((a.min_eig - b.min_eig).abs() < 1e-9 * scale);
        prop_assert!((a.max_eig - b.max_eig).abs() < 1e-9 * scale);
    }

    #[test]
    fn psd_verdict_ignores_point_order(seed in any::<u64>(), lam in 0usize..=2, nu in -2.5f64..3.0) {
        let p = LittleKernelParams::new(2, nu, lam).unwrap();
        let spec = GramSpec::random(2, 12, 0.8, seed, TOL_PSD);
        let mut reversed = spec.clone();
        reversed.points.reverse();
        let a = gram_psd_check(&p, &spec).unwrap();
        let b = gram_psd_check(&p, &reversed).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.min_eig - b.min_eig).abs() < 1e-9 * a.max_eig.abs().max(1.0));
    }

    #[test]
    fn little_kernel_is_k_invariant(seed in any::<u64>(), lam in 0usize..=3, nu in 0.5f64..5.0) {
        let p = LittleKernelParams::new(2, nu, lam).unwrap();
        let mut r = rng(seed);
        let u = unitary(&mut r, 2);
        let (z, w) = (ball_point(&mut r, 2, 0.8), ball_point(&mut r, 2, 0.8));
        let (zeta, omega): (CVec, CVec) = (gaussian_vector(&mut r, 2), gaussian_vector(&mut r, 2));
        let a = little_kernel(&p, &z, &w, &zeta, &omega).unwrap();
        let b = little_kernel(&p, &(&u * &z), &(&u * &w), &(&u * &zeta), &(&u * &omega)).unwrap();
        prop_assert!(close(a, b, 1e-11));
    }
}
