use symdom::ball::Automorphism;
use symdom::cauchy::{CauchyConfig, Domain, HoloFn};
use symdom::intertwine::*;
use symdom::kernels::{DoubledKernel, LittleKernelParams, PolySection, SampleSpec, Section};
use symdom::linalg::*;
use symdom::poly::{CPolynomial, MultiIndex};
use symdom::sampling::{ball_point, gaussian_vector, polynomial, rng};
use symdom::special::pochhammer;
use symdom::Complex64;

#[test]
fn apply_intertwiner_examples() {
    let mut r = rng(31);
    let d = 2;
    let coeffs = intertwiner_coeffs(3.0, 3, 1).unwrap();
    let q = polynomial(&mut r, d, 1..=1);
    let z = ball_point(&mut r, d, 0.5);
    let zeta = gaussian_vector(&mut r, d);
    let one = CPolynomial::constant(d, ONE);
    let cfg = CauchyConfig::default();
    let v = apply_intertwiner(&coeffs, &one, &q, &z, &zeta, &cfg).unwrap();
    assert!((v - q.eval(&zeta)).norm() < 1e-14);

    let b = gaussian_vector(&mut r, d);
    let bb = b.clone();
    let f = HoloFn::new(d, Domain::Entire, move |p: &CVec| pairing(p, &bb).exp());
    let got = apply_intertwiner(&coeffs, &f, &q, &z, &zeta, &cfg).unwrap();
    let t = pairing(&zeta, &b);
    let series: Complex64 = coeffs
        .mu
        .iter()
        .enumerate()
        .map(|(k, m)| t.powu(k as u32) * (*m / symdom::special::factorial(k)))
        .sum();
    let want = series * pairing(&z, &b).exp() * q.eval(&zeta);
    assert!((got - want).norm() < 1e-10 * want.norm().max(1.0));

    let top = intertwiner_coeffs(3.0, 3, 3).unwrap();
    let f = polynomial(&mut r, d, 0..=4);
    let q3 = polynomial(&mut r, d, 3..=3);
    let v = apply_intertwiner(&top, &f, &q3, &z, &zeta, &cfg).unwrap();
    assert!((v - f.eval(&z) * q3.eval(&zeta)).norm() < 1e-12);
    assert!(apply_intertwiner(&top, &f, &q, &z, &zeta, &cfg).is_err());
}

#[test]
fn intertwined_sections_have_fibre_degrees_between_lambda_and_n() {
    let mut r = rng(32);
    let (d, n, lam) = (2, 3, 1);
    let coeffs = intertwiner_coeffs(2.2, n, lam).unwrap();
    let f = polynomial(&mut r, d, 0..=4);
    let q = polynomial(&mut r, d, lam..=lam);
    let z = ball_point(&mut r, d, 0.5);
    let out = CPolynomial::interpolate(d, n + 2, |zeta| {
        apply_intertwiner(&coeffs, &f, &q, &z, zeta, &CauchyConfig::default()).unwrap()
    });
    for (idx, c) in out.terms() {
        let deg = idx.degree();
        assert!((lam..=n).contains(&deg) || c.norm() < 1e-10, "degree {deg}");
    }
}

#[test]
fn closed_form_on_kernels() {
    let cauchy = CauchyConfig { radius: 0.05, nodes: 64 };
    for d in 1..=2 {
        for n in 0..=3 {
            for lam in 0..=n {
                let p = LittleKernelParams::new(d, 4.0, lam).unwrap();
                let spec = SampleSpec { samples: 20, seed: 11, radius: 0.4 };
                let rep = check_intertwiner_kernel(&p, n, &spec, &cauchy, 1e-9).unwrap();
                assert!(rep.pass, "{rep:?}");
            }
        }
    }
    let p = LittleKernelParams::new(2, 4.0, 1).unwrap();
    let q = CPolynomial::variable(2, 1);
    let zero = CVec::zeros(2);
    let zeta = rvec(&[0.3, -0.2]);
    assert!((intertwiner_on_kernel(&p, 2, &zero, &q, &zero, &zeta).unwrap() - q.eval(&zeta)).norm() < 1e-15);
    let z = rvec(&[0.1, 0.4]);
    assert!((intertwiner_on_kernel(&p, 2, &zero, &q, &z, &zeta).unwrap() - q.eval(&zeta)).norm() < 1e-15);
}

#[test]
fn kappa_variant_resolution() {
    for (d, n, nu) in [(1, 1, 2.5), (2, 2, 4.0), (1, 3, 3.0), (2, 3, 1.7)] {
        let c: Vec<f64> = (0..=n).map(|i| 1.0 + 0.5 * i as f64).collect();
        let params = BigKernelParams::new(d, nu, n, c.clone()).unwrap();
        let res = resolve_kappa_variant(&params, 1e-10).unwrap();
        assert!(res.k_invariance_defect < 1e-12);
        assert_eq!(res.selected(), Some(KappaVariant::Proof), "{res:?}");
    }
    let params = BigKernelParams::new(1, 2.5, 1, vec![1.0, 1.0]).unwrap();
    let a = big_kernel_origin(&params, KappaVariant::Proof).unwrap().a;
    assert!((a[1] - (1.0 / 2.5 + 1.0)).abs() < 1e-14);
    let scalar = BigKernelParams::new(2, 3.0, 0, vec![2.0]).unwrap();
    assert_eq!(big_kernel_origin_oracle(&scalar).unwrap().kernel.a, vec![2.0]);
}

#[test]
fn weight_matrix_relation() {
    let (nu, n) = (3.3, 3);
    let k = kappa_matrix(nu, n, KappaVariant::Proof).unwrap();
    let a = weight_matrix(nu, n, KappaVariant::Proof).unwrap();
    for l in 0..=n {
        assert_eq!(a[(l, l)], 1.0);
        for lam in 0..l {
            let ratio = symdom::special::factorial(l) / symdom::special::factorial(lam);
            assert!((a[(l, lam)] - k[(l, lam)] * ratio).abs() < 1e-13);
        }
    }
    // unit diagonal: μ_0 = 1 and the empty sum
    assert_eq!(pochhammer(-2.0, 0), 1.0);
}

#[test]
fn big_kernel_at_origin_and_symmetry() {
    let mut r = rng(33);
    let params = BigKernelParams::new(2, 4.0, 2, vec![1.0, 0.5, 2.0]).unwrap();
    let kernel = BigKernel::new(params.clone(), 40, 1e-9).unwrap();
    let origin = big_kernel_origin(&params, KappaVariant::Proof).unwrap();
    let zero = CVec::zeros(2);
    for _ in 0..5 {
        let zeta = gaussian_vector(&mut r, 2);
        let omega = gaussian_vector(&mut r, 2);
        let v = kernel.eval(&zero, &zero, &zeta, &omega).unwrap();
        let want = origin.eval(&zeta, &omega);
        assert!((v - want).norm() < 1e-12 * want.norm().max(1.0));
    }
    for _ in 0..5 {
        let (z, w) = (ball_point(&mut r, 2, 0.5), ball_point(&mut r, 2, 0.5));
        let (zeta, omega) = (gaussian_vector(&mut r, 2), gaussian_vector(&mut r, 2));
        let a = kernel.eval(&z, &w, &zeta, &omega).unwrap();
        let b = kernel.eval(&w, &z, &omega, &zeta).unwrap().conj();
        assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn big_kernel_reports_unreachable_tail() {
    let params = BigKernelParams::new(1, 4.0, 1, vec![1.0, 1.0]).unwrap();
    let kernel = BigKernel::new(params, 5, 1e-12).unwrap();
    let z = rvec(&[0.9]);
    let err = kernel.eval(&z, &z, &rvec(&[0.05]), &rvec(&[0.05]));
    assert!(matches!(err, Err(symdom::SymdomError::TailBound { .. })));
}

#[test]
fn big_covariance() {
    let mut r = rng(34);
    for (d, n, nu, c) in [(1, 1, 4.0, vec![1.0, 1.0]), (1, 2, 2.5, vec![1.0, 2.0, 0.5]), (2, 2, 4.0, vec![1.0, 1.0, 1.0])] {
        let params = BigKernelParams::new(d, nu, n, c).unwrap();
        let kernel = BigKernel::new(params, 40, 1e-11).unwrap();
        let x = ball_point(&mut r, d, 0.3);
        let spec = SampleSpec { samples: 20, seed: 5, radius: 0.3 };
        let rep = check_big_covariance(&kernel, &x, &spec, 1e-8).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.extra["modulus_error"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn pointwise_intertwining() {
    let cauchy = CauchyConfig::default();
    for (d, n) in [(1, 1), (1, 3), (2, 2), (2, 3)] {
        for lam in 0..=n {
            let p = LittleKernelParams::new(d, 3.5, lam).unwrap();
            let spec = SampleSpec { samples: 10, seed: 9, radius: 0.4 };
            let rep = check_pointwise_intertwining(&p, n, &spec, &cauchy, 1e-8).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }
}

#[test]
fn identity_acts_trivially_on_big_sections() {
    let mut r = rng(35);
    let f = polynomial(&mut r, 2, 0..=2);
    let q = polynomial(&mut r, 2, 2..=2);
    let phi = PolySection::product(&f, &q).unwrap();
    let z = ball_point(&mut r, 2, 0.5);
    let zeta = ball_point(&mut r, 2, 0.3);
    let v = big_action(2, 3.0, 2, &Automorphism::identity(2), &phi, &z, &zeta).unwrap();
    assert!((v - phi.eval(&z, &zeta).unwrap()).norm() < 1e-13);
}

#[test]
fn disk_integral_ratio_constancy() {
    let spec = SampleSpec { samples: 10, seed: 4, radius: 0.4 };
    let rep = check_disk_integral(6.0, 2, 1, &spec, &DiskQuadrature::default(), 1e-6).unwrap();
    assert!(rep.pass, "{rep:?}");
    let rep0 = check_disk_integral(3.0, 0, 0, &spec, &DiskQuadrature { radial: 60, angular: 64 }, 1e-8).unwrap();
    assert!(rep0.pass, "{rep0:?}");
    // constants reproduce exactly under the normalized measure
    let one = CPolynomial::constant(1, ONE);
    let q = CPolynomial::monomial(MultiIndex(vec![0]), ONE);
    let v = intertwine_integral_disk(3.0, 0, &one, &q, &rvec(&[0.2]), &rvec(&[0.1]), &DiskQuadrature { radial: 40, angular: 32 })
        .unwrap();
    assert!((v - ONE).norm() < 1e-10);
}
