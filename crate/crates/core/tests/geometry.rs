use symdom::ball::*;
use symdom::cauchy::{directional_derivative, CauchyConfig, Domain, HoloFn};
use symdom::fibre::*;
use symdom::linalg::*;
use symdom::sampling::{ball_point, gaussian_vector, rng, unitary};

fn random_element(r: &mut symdom::sampling::SeededRng, d: usize, with_unitary: bool) -> Automorphism {
    let x = ball_point(r, d, 0.8);
    if with_unitary {
        Automorphism::new(x, unitary(r, d)).unwrap()
    } else {
        Automorphism::transvection(x).unwrap()
    }
}

#[test]
fn transvection_inverse_property() {
    let mut r = rng(1);
    for _ in 0..100 {
        let x = ball_point(&mut r, 3, 0.8);
        let z = ball_point(&mut r, 3, 0.8);
        let back = transvection_apply(&(-&x), &transvection_apply(&x, &z).unwrap()).unwrap();
        assert!((back - &z).norm() < 1e-12);
        assert!(norm_sq(&transvection_apply(&x, &z).unwrap()) < 1.0);
    }
}

#[test]
fn det_bergman_is_power_of_quasi_determinant() {
    let mut r = rng(2);
    for d in 1..=3 {
        let z = ball_point(&mut r, d, 0.8);
        let w = ball_point(&mut r, d, 0.8);
        let det = bergman_matrix(&z, &w).determinant();
        let want = quasi_determinant(&z, &w).powu(d as u32 + 1);
        assert!((det - want).norm() < 1e-12);
    }
}

#[test]
fn addition_formula_for_quasi_inverse() {
    let mut r = rng(3);
    for _ in 0..20 {
        let u = ball_point(&mut r, 2, 0.5);
        let v = ball_point(&mut r, 2, 0.4);
        let x = ball_point(&mut r, 2, 0.5);
        let lhs = quasi_inverse(&(&u + &v), &x).unwrap();
        let xu = quasi_inverse(&x, &u).unwrap();
        let rhs = quasi_inverse(&u, &x).unwrap()
            + bergman_inverse(&u, &x).unwrap() * quasi_inverse(&v, &xu).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        let bq = bergman_apply(&u, &x, &quasi_inverse(&u, &x).unwrap());
        assert!((bq - (&u - quadratic(&u, &x))).norm() < 1e-12);
    }
}

#[test]
fn derivative_matches_cauchy_jacobian() {
    let mut r = rng(4);
    let x = ball_point(&mut r, 2, 0.7);
    let z = ball_point(&mut r, 2, 0.5);
    let dg = transvection_derivative(&x, &z).unwrap();
    for j in 0..2 {
        let mut e = CVec::zeros(2);
        e[j] = ONE;
        for i in 0..2 {
            let xx = x.clone();
            let f = HoloFn::new(2, Domain::Ball(1.0), move |p: &CVec| transvection_apply(&xx, p).unwrap()[i]);
            let v = directional_derivative(&f, &z, &e, 1, &CauchyConfig::default()).unwrap();
            assert!((v - dg[(i, j)]).norm() < 1e-8);
        }
    }
}

#[test]
fn bergman_covariance_and_quasi_determinant_covariance() {
    let mut r = rng(5);
    for _ in 0..20 {
        let g = random_element(&mut r, 2, true);
        let z = ball_point(&mut r, 2, 0.8);
        let w = ball_point(&mut r, 2, 0.8);
        let (gz, gw) = (g.apply(&z).unwrap(), g.apply(&w).unwrap());
        let lhs = bergman_matrix(&gz, &gw);
        let rhs = g.derivative(&z).unwrap() * bergman_matrix(&z, &w) * g.derivative(&w).unwrap().adjoint();
        assert!(rel_matrix_error(&lhs, &rhs) < 1e-10);
        let p = 3.0;
        let dl = quasi_determinant(&gz, &gw);
        let dr = cpow(g.derivative(&z).unwrap().determinant(), 1.0 / p)
            * quasi_determinant(&z, &w)
            * cpow(g.derivative(&w).unwrap().determinant(), 1.0 / p).conj();
        assert!((dl.norm() - dr.norm()).abs() < 1e-12);
        let cont = g.jacobian_det_pow(&z, 1.0 / p).unwrap()
            * quasi_determinant(&z, &w)
            * g.jacobian_det_pow(&w, 1.0 / p).unwrap().conj();
        let ratio = dl / cont;
        assert!((ratio.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn quadratic_representation_equivariance() {
    let mut r = rng(6);
    let x = ball_point(&mut r, 3, 0.8);
    let z = gaussian_vector(&mut r, 3);
    let v = gaussian_vector(&mut r, 3);
    for h in [unitary(&mut r, 3), bergman_sqrt_diag(&x).unwrap()] {
        let lhs = &h * quadratic(&z, &(h.adjoint() * &v));
        let rhs = quadratic(&(&h * &z), &v);
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn jacobian_power_matches_determinant() {
    let mut r = rng(7);
    let g = random_element(&mut r, 3, true);
    let z = ball_point(&mut r, 3, 0.8);
    let det = g.derivative(&z).unwrap().determinant();
    assert!((g.jacobian_det_pow(&z, 1.0).unwrap() - det).norm() < 1e-12);
}

#[test]
fn composition_and_inverse() {
    let mut r = rng(8);
    let g1 = random_element(&mut r, 2, true);
    let g2 = random_element(&mut r, 2, true);
    let g = g1.compose(&g2).unwrap();
    let z = ball_point(&mut r, 2, 0.8);
    let direct = g1.apply(&g2.apply(&z).unwrap()).unwrap();
    assert!((g.apply(&z).unwrap() - direct).norm() < 1e-12);
    let back = g.inverse().apply(&g.apply(&z).unwrap()).unwrap();
    assert!((back - &z).norm() < 1e-12);
    assert!(g.apply(&g.preimage_of_zero()).unwrap().norm() < 1e-12);
}

#[test]
fn cocycle_is_the_difference_map() {
    let mut r = rng(9);
    for _ in 0..20 {
        let g = random_element(&mut r, 2, true);
        let z = ball_point(&mut r, 2, 0.6);
        let zeta = ball_point(&mut r, 2, 0.3);
        let lhs = g.cocycle_apply(&z, &zeta).unwrap();
        let rhs = g.apply(&(&z + &zeta)).unwrap() - g.apply(&z).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }
}

#[test]
fn cocycle_identity_on_fibre() {
    let mut r = rng(10);
    for _ in 0..30 {
        let g1 = random_element(&mut r, 2, false);
        let g2 = random_element(&mut r, 2, false);
        let z = ball_point(&mut r, 2, 0.8);
        let n = 2;
        let lhs = cocycle_pi_n(&g1.compose(&g2).unwrap(), &z, n).unwrap();
        let rhs = cocycle_pi_n(&g1, &g2.apply(&z).unwrap(), n)
            .unwrap()
            .compose(&cocycle_pi_n(&g2, &z, n).unwrap());
        assert!(projective_matrix_error(&lhs.matrix, &rhs.matrix) < 1e-9);
    }
}

#[test]
fn cocycle_matrix_matches_pointwise_definition() {
    let mut r = rng(11);
    for (d, n) in [(1, 2), (2, 2), (2, 3), (3, 1)] {
        let g = random_element(&mut r, d, true);
        let z = ball_point(&mut r, d, 0.7);
        let forward = cocycle_pi_n(&g, &z, n).unwrap();
        let inv = cocycle_pi_n_inverse_pointwise(&g, &z, n).unwrap();
        let prod = forward.compose(&inv);
        let m = prod.basis.len();
        assert!(projective_matrix_error(&prod.matrix, &CMat::identity(m, m)) < 1e-10);
    }
}

#[test]
fn special_cocycles() {
    let mut r = rng(12);
    let k = unitary(&mut r, 2);
    let z = ball_point(&mut r, 2, 0.8);
    let g = Automorphism::unitary(k.clone()).unwrap();
    let lhs = cocycle_pi_n(&g, &z, 2).unwrap();
    assert!(rel_matrix_error(&lhs.matrix, &pi_n_linear(&k, 2).unwrap().matrix) < 1e-12);
    let x = ball_point(&mut r, 2, 0.8);
    let gx = Automorphism::transvection(x.clone()).unwrap();
    let at0 = cocycle_pi_n(&gx, &CVec::zeros(2), 2).unwrap();
    let want = pi_n_linear(&bergman_sqrt_diag(&x).unwrap(), 2)
        .unwrap()
        .compose(&tau_bar_pi_n(&x, 2).unwrap());
    assert!(rel_matrix_error(&at0.matrix, &want.matrix) < 1e-12);
}

#[test]
fn tau_bar_is_exponential_of_minus_shift() {
    let mut r = rng(13);
    for (d, n) in [(1, 3), (2, 2), (3, 3)] {
        let w = gaussian_vector(&mut r, d);
        let s = shift_generator(&w, n).unwrap();
        let jg = jordan_generator(&w, n).unwrap();
        assert!(rel_matrix_error(&jg.matrix, &(-&s.matrix)) < 1e-12);
        let minus_s = FibreOperator { basis: s.basis.clone(), matrix: -&s.matrix };
        let t = tau_bar_pi_n(&w, n).unwrap();
        assert!(rel_matrix_error(&t.matrix, &exp_nilpotent(&minus_s).matrix) < 1e-10);
        let mut power = s.matrix.clone();
        for _ in 0..n {
            power = &power * &s.matrix;
        }
        assert!(power.iter().all(|v| *v == ZERO));
        assert_eq!(s.non_shift_defect(), 0.0);
        let h = 1e-6;
        let t_eps = tau_bar_pi_n(&(&w * c(h, 0.0)), n).unwrap();
        let m = t.basis.len();
        let fd = (t_eps.matrix - CMat::identity(m, m)) / c(h, 0.0);
        assert!(rel_matrix_error(&fd, &jg.matrix) < 1e-5);
    }
}

#[test]
fn factorization_of_cocycle() {
    let mut r = rng(14);
    for d in 1..=3 {
        for n in 0..=3 {
            for with_unitary in [false, true] {
                let g = random_element(&mut r, d, with_unitary);
                let z = ball_point(&mut r, d, 0.8);
                let report = factorization_check(&g, &z, n, 1e-9).unwrap();
                assert!(report.pass, "d={d} n={n} err={}", report.max_error);
            }
        }
    }
    let id = Automorphism::identity(2);
    assert!(factorization_check(&id, &CVec::zeros(2), 2, 1e-12).unwrap().pass);
}

#[test]
fn spin_representation_properties() {
    let mut r = rng(15);
    let k = unitary(&mut r, 2);
    let m = pi_n_linear(&k, 3).unwrap().matrix;
    let id = CMat::identity(m.nrows(), m.nrows());
    assert!(rel_matrix_error(&(m.adjoint() * &m), &id) < 1e-12);
    let h1 = CMat::from_fn(2, 2, |_, _| symdom::sampling::gaussian_complex(&mut r));
    let h2 = CMat::from_fn(2, 2, |_, _| symdom::sampling::gaussian_complex(&mut r));
    let lhs = pi_n_linear(&(&h1 * &h2), 2).unwrap().matrix;
    let rhs = pi_n_linear(&h1, 2).unwrap().matrix * pi_n_linear(&h2, 2).unwrap().matrix;
    assert!(projective_matrix_error(&lhs, &rhs) < 1e-10);
    let x = ball_point(&mut r, 2, 0.8);
    let b = pi_n_linear(&bergman_sqrt_diag(&x).unwrap(), 2).unwrap().matrix;
    let herm = rel_matrix_error(&b, &b.adjoint());
    assert!(herm < 1e-12);
    let eig = nalgebra::SymmetricEigen::new(b).eigenvalues;
    assert!(eig.iter().all(|&e| e > 0.0));
}
