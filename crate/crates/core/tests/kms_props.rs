use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdq_core::kms::{
    gibbs_state, modular_flow, product_kms_residual, random_hermitian, random_matrix, GibbsState, TensorPair,
};
use sdq_core::linalg::{kron, kron_sum, ComplexMatrix};

#[test]
fn gibbs_states_satisfy_kms() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    for k in 0..50 {
        let n = rng.gen_range(1..=16);
        let beta = [0.5, 1.0, 2.0][k % 3];
        let h = random_hermitian(&mut rng, n);
        let state = gibbs_state(&h, beta).unwrap();
        let (a, b) = (random_matrix(&mut rng, n), random_matrix(&mut rng, n));
        let t = rng.gen_range(-3.0..3.0);
        worst = worst.max(state.kms_residual(&a, &b, t).unwrap());
    }
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn product_gibbs_is_gibbs_of_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let beta = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
        let (ha, hb) = (random_hermitian(&mut rng, na), random_hermitian(&mut rng, nb));
        let (sa, sb) = (gibbs_state(&ha, beta).unwrap(), gibbs_state(&hb, beta).unwrap());
        let joint = gibbs_state(&kron_sum(&[ha, hb]).unwrap(), beta).unwrap();
        let product = GibbsState::product(&sa, &sb).unwrap();
        assert!((joint.rho() - product.rho()).max_abs() <= 1e-13);
        assert!((joint.rho() - &kron(sa.rho(), sb.rho()).unwrap()).max_abs() <= 1e-13);
    }
}

#[test]
fn product_kms_on_seeded_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0_f64;
    let mut worst_factor = 0.0_f64;
    for k in 0..50 {
        let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let beta = [0.5, 1.0, 2.0][k % 3];
        let sa = gibbs_state(&random_hermitian(&mut rng, na), beta).unwrap();
        let sb = gibbs_state(&random_hermitian(&mut rng, nb), beta).unwrap();
        let mut pair = || TensorPair { a: random_matrix(&mut rng, na), b: random_matrix(&mut rng, nb) };
        let sample = (pair(), pair());
        let r = product_kms_residual(&sa, &sb, &[sample], &[0.0, 0.5, 1.0]).unwrap();
        worst = worst.max(r.max_residual);
        worst_factor = worst_factor.max(r.max_factorization_error);
    }
    assert!(worst <= 1e-9, "{worst}");
    assert!(worst_factor <= 1e-12, "{worst_factor}");
}

#[test]
fn flow_group_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let n = rng.gen_range(1..=6);
        let h = random_hermitian(&mut rng, n);
        let a = random_matrix(&mut rng, n);
        let w1 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
        let w2 = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
        let nested = modular_flow(&h, w1, &modular_flow(&h, w2, &a).unwrap()).unwrap();
        let direct = modular_flow(&h, w1 + w2, &a).unwrap();
        assert!((&nested - &direct).max_abs() <= 1e-10 * direct.max_abs().max(1.0));
    }
}

#[test]
fn gibbs_states_are_stationary() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let n = rng.gen_range(1..=8);
        let h = random_hermitian(&mut rng, n);
        let s = gibbs_state(&h, 1.0).unwrap();
        let a = random_matrix(&mut rng, n);
        let t = rng.gen_range(-5.0..5.0);
        let moved = modular_flow(&h, Complex64::new(t, 0.0), &a).unwrap();
        assert!((s.expectation(&moved) - s.expectation(&a)).norm() <= 1e-12);
    }
}

#[test]
fn non_gibbs_state_violates_kms() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let h = random_hermitian(&mut rng, 3);
    let mixed = GibbsState::from_density(&h, 1.0, ComplexMatrix::identity(3).scale_real(1.0 / 3.0)).unwrap();
    let (a, b) = (random_matrix(&mut rng, 3), random_matrix(&mut rng, 3));
    assert!(mixed.kms_residual(&a, &b, 0.4).unwrap() > 1e-3);
}
