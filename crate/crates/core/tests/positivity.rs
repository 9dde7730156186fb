use symdom::fibre::{u_invariant_weights, FibreMetric};
use symdom::intertwine::{weight_matrix, BigKernel, BigKernelParams, KappaVariant};
use symdom::kernels::LittleKernelParams;
use symdom::positivity::*;

#[test]
fn scalar_kernel_sign_of_fk_coefficients() {
    let spec = GramSpec::random(2, 40, 0.8, 3, TOL_PSD);
    let neg = gram_psd_check(&ScalarKernel { d: 2, nu: -0.5 }, &spec).unwrap();
    assert_eq!(neg.verdict, Verdict::NotPsd);
    assert!(neg.witness.is_some());
    let pos = gram_psd_check(&ScalarKernel { d: 2, nu: 0.5 }, &spec).unwrap();
    assert_eq!(pos.verdict, Verdict::Psd);
}

#[test]
fn little_kernels_above_zero_are_psd() {
    let spec = GramSpec::random(2, 40, 0.8, 4, TOL_PSD);
    for nu in [0.25, 1.0, 3.0] {
        let v = gram_psd_check(&LittleKernelParams::new(2, nu, 1).unwrap(), &spec).unwrap();
        assert_eq!(v.verdict, Verdict::Psd, "ν = {nu}: {v:?}");
    }
}

#[test]
fn one_variable_boundary_is_minus_two_lambda() {
    let spec = GramSpec::random(1, 40, 0.8, 5, TOL_PSD);
    for lam in 0..=2usize {
        let g = grid(-2.0 * lam as f64 - 1.0, 1.0, 0.25).unwrap();
        let scan = wallach_scan(1, lam, &g, &spec).unwrap();
        let t = scan.psd_threshold("nu").unwrap();
        assert!((t - (-2.0 * lam as f64 + 0.25)).abs() < 1e-12 || (t + 2.0 * lam as f64).abs() < 1e-12, "λ={lam} t={t}");
    }
}

/// Smallest eigenvalue over the exact Gram blocks of `K^{ν,λ}` up to `cap`.
fn exact_min_eig(d: usize, nu: f64, lambda: usize, cap: usize) -> f64 {
    let space = symdom::kernels::LittleSpace::new(LittleKernelParams::new(d, nu, lambda).unwrap(), cap);
    space
        .blocks
        .iter()
        .map(|b| nalgebra::SymmetricEigen::new(b.gram.clone()).eigenvalues.min())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn two_variable_boundaries() {
    // in d = 2 the threshold is min(0, 1 - λ), not -2λ
    let spec = GramSpec::random(2, 40, 0.8, 6, TOL_PSD);
    let g = grid(-3.0, 3.0, 0.25).unwrap();
    for lam in 0..=3usize {
        let boundary = (1.0 - lam as f64).min(0.0);
        let s = wallach_scan(2, lam, &g, &spec).unwrap();
        assert_eq!(s.psd_threshold("nu"), Some(boundary), "λ={lam}");
        assert!(exact_min_eig(2, boundary + 0.25, lam, 6) > 0.0);
        assert!(exact_min_eig(2, boundary - 0.25, lam, 6) < 0.0);
    }
    // the mixed-component eigenvalue of the degree-1 block for λ = 1 is ν
    let space = symdom::kernels::LittleSpace::new(LittleKernelParams::new(2, 0.3, 1).unwrap(), 1);
    let eig = nalgebra::SymmetricEigen::new(space.blocks[1].gram.clone()).eigenvalues;
    assert!(eig.iter().any(|e| (e - 0.3).abs() < 1e-12));
}

#[test]
fn boundedness_examples() {
    let spec = GramSpec::random(2, 40, 0.8, 7, TOL_PSD);
    for (nu, b) in [(1.0, 1.0), (2.0, 1.0), (5.0, 1.0), (0.4, 2.5), (0.5, 2.0)] {
        let k = ScalarKernel { d: 2, nu };
        let v = boundedness_kernel_check(&k, b, &spec).unwrap();
        assert_eq!(v.verdict, Verdict::Psd, "ν={nu} b={b}: {v:?}");
        assert!(scalar_bound_coeffs(nu, b, 200).unwrap().all_nonnegative());
    }
    let k = ScalarKernel { d: 2, nu: 2.0 };
    let v = boundedness_kernel_check(&k, 0.5, &spec).unwrap();
    assert_eq!(v.verdict, Verdict::NotPsd);
    assert!(v.witness.is_some());
}

#[test]
fn bound_coefficients_match_series_product() {
    // independent oracle: multiply the FK series by (b² - t) term by term
    let (nu, b) = (1.7, 0.9);
    let n = 30;
    let fk = symdom::kernels::fk_expand(nu, n + 1);
    let coeffs = scalar_bound_coeffs(nu, b, n).unwrap();
    for k in 0..n {
        let want = b * b * fk[k + 1] / symdom::special::factorial(k + 1) - fk[k] / symdom::special::factorial(k);
        assert!((coeffs.coefficients[k] - want).abs() < 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn big_kernel_multipliers_bounded_in_one_variable() {
    let spec = GramSpec::random(1, 30, 0.6, 8, TOL_PSD);
    for nu in [1.5, 3.0] {
        let params = BigKernelParams::new(1, nu, 2, vec![1.0, 1.0, 1.0]).unwrap();
        let kernel = BigKernel::new(params, 60, 1e-9).unwrap();
        let found = [1.0, 1.0 / nu, 2.0, 4.0]
            .into_iter()
            .any(|b| boundedness_kernel_check(&kernel, b, &spec).unwrap().verdict == Verdict::Psd);
        assert!(found, "ν = {nu}");
    }
}

#[test]
fn schur_product_of_psd_kernels_is_psd() {
    let spec = GramSpec::random(2, 30, 0.7, 9, TOL_PSD);
    let a = LittleKernelParams::new(2, 1.5, 1).unwrap();
    let b = ScalarKernel { d: 2, nu: 0.7 };
    let prod = ProductKernel { left: &a, right: &b };
    assert_eq!(gram_psd_check(&prod, &spec).unwrap().verdict, Verdict::Psd);
}

#[test]
fn weight_transfer_examples() {
    let c = [1.0, 1.0];
    let same = weight_transfer(5.0, 5.0, 1, &c, KappaVariant::Proof).unwrap();
    assert!((same.c_prime[0] - 1.0).abs() < 1e-14 && (same.c_prime[1] - 1.0).abs() < 1e-14);
    let t = weight_transfer(5.0, 3.0, 1, &c, KappaVariant::Proof).unwrap();
    // direct 2x2: A = [[1,0],[1/ν,1]] (proof variant, n = 1)
    let want1 = 1.0 / 5.0 + 1.0 - 1.0 / 3.0;
    assert!((t.c_prime[0] - 1.0).abs() < 1e-14);
    assert!((t.c_prime[1] - want1).abs() < 1e-14);
    assert!(t.member);
    let a = weight_matrix(5.0, 1, KappaVariant::Proof).unwrap();
    assert!((a[(1, 0)] - 0.2).abs() < 1e-14);
    let scalar = weight_transfer(2.0, 7.0, 0, &[3.0], KappaVariant::Theorem).unwrap();
    assert_eq!(scalar.c_prime, vec![3.0]);
}

#[test]
fn diagonal_operator() {
    for nu in [1.0, 2.7] {
        let rep = diagonal_operator_check(1, nu, 8, 1e-10).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.extra["stated_form_matches"], true);
    }
    let rep = diagonal_operator_check(2, 3.0, 6, 1e-10).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.extra["stated_form_matches"], false);
}

#[test]
fn commutant_dimension() {
    let params = BigKernelParams::new(2, 4.0, 2, vec![1.0, 1.0, 1.0]).unwrap();
    let beta = FibreMetric::fock(2);
    let spec = CommutantSpec::default();
    let full = commutant_probe(&params, &beta, &spec).unwrap();
    assert_eq!(full.dimension, 1, "{full:?}");
    let neg = commutant_probe(&params, &beta, &CommutantSpec { family: Family::IdentityOnly, ..spec.clone() }).unwrap();
    assert_eq!(neg.dimension, 3);
    let other_seed = commutant_probe(&params, &beta, &CommutantSpec { seed: 99, samples: 14, ..spec.clone() }).unwrap();
    assert_eq!(other_seed.dimension, 1);
    let scalar = BigKernelParams::new(2, 4.0, 0, vec![1.0]).unwrap();
    assert_eq!(commutant_probe(&scalar, &FibreMetric::fock(0), &spec).unwrap().dimension, 1);
    let u = commutant_probe(&params, &u_invariant_weights(2, 2), &spec).unwrap();
    assert_eq!(u.dimension, 1);
    let unconstrained = commutant_probe(&params, &beta, &CommutantSpec { ansatz: Ansatz::Unconstrained, ..spec }).unwrap();
    assert_eq!(unconstrained.dimension, 1);
}
