mod common;

use clonebound::ensemble::{ginibre, haar_unitary, seeded_rng};
use clonebound::matkernel::{
    c64, frobenius, kron, partial_trace, svd, unitary_deviation, unitary_power, ComplexMatrix, DimSpec,
};
use clonebound::measure::{naimark_dilate, probabilities, projector_gap, random_povm_with, random_projector_with};
use clonebound::states::{
    angle, angle_from_fidelity, angle_pure, fidelity, max_overlap_unitary, overlap_under, random_pure_with,
    DensityMatrix,
};
use common::{any_rank_state, fidelity_oracle, full_rank_state};
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn fidelity_matches_product_formula(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = seeded_rng(seed);
        let a = any_rank_state(&mut rng, d);
        let b = any_rank_state(&mut rng, d);
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((f - fidelity_oracle(&a, &b)).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn fidelity_is_symmetric_and_unitarily_invariant(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let a = any_rank_state(&mut rng, d);
        let b = any_rank_state(&mut rng, d);
        let u = haar_unitary(&mut rng, d);
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-12);
        let fu = fidelity(&a.conjugated(&u).unwrap(), &b.conjugated(&u).unwrap()).unwrap();
        prop_assert!((f - fu).abs() < 1e-9);
    }

    #[test]
    fn fidelity_is_multiplicative(seed in any::<u64>(), d in 2usize..=3, e in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let a = any_rank_state(&mut rng, d);
        let b = any_rank_state(&mut rng, d);
        let s = any_rank_state(&mut rng, e);
        let t = any_rank_state(&mut rng, e);
        let joint = fidelity(&a.tensor(&s).unwrap(), &b.tensor(&t).unwrap()).unwrap();
        let product = fidelity(&a, &b).unwrap() * fidelity(&s, &t).unwrap();
        prop_assert!((joint - product).abs() < 1e-9);
    }

    #[test]
    fn fidelity_does_not_decrease_under_partial_trace(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = any_rank_state(&mut rng, 6);
        let b = any_rank_state(&mut rng, 6);
        let dims = DimSpec::new(vec![2, 3]).unwrap();
        for keep in [[0usize], [1]] {
            let fa = fidelity(&a.partial_trace(&dims, &keep).unwrap(), &b.partial_trace(&dims, &keep).unwrap()).unwrap();
            prop_assert!(fa >= fidelity(&a, &b).unwrap() - 1e-9);
        }
    }

    #[test]
    fn angle_of_pure_states_matches_pure_formula(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = seeded_rng(seed);
        let x = random_pure_with(&mut rng, d).unwrap();
        let y = random_pure_with(&mut rng, d).unwrap();
        let mixed = angle(&x.density(), &y.density()).unwrap();
        prop_assert!((mixed - angle_pure(&x, &y).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn angle_triangle_and_fidelity_difference(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let (chi, omega, rho) = (any_rank_state(&mut rng, d), any_rank_state(&mut rng, d), any_rank_state(&mut rng, d));
        let a = angle(&chi, &omega).unwrap();
        prop_assert!(a <= angle(&chi, &rho).unwrap() + angle(&omega, &rho).unwrap() + 1e-9);
        let diff = (fidelity(&chi, &rho).unwrap() - fidelity(&omega, &rho).unwrap()).abs();
        prop_assert!(diff <= a.sin() + 1e-9);
    }

    #[test]
    fn purification_overlap_never_exceeds_root_fidelity(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let r1 = any_rank_state(&mut rng, d);
        let r2 = any_rank_state(&mut rng, d);
        let root = fidelity(&r1, &r2).unwrap().sqrt();
        for _ in 0..8 {
            let v = haar_unitary(&mut rng, d);
            prop_assert!(overlap_under(&v, &r1, &r2).unwrap() <= root + 1e-9);
        }
        let best = max_overlap_unitary(&r1, &r2).unwrap();
        prop_assert!((best.achieved_overlap - root).abs() < 1e-9);
        prop_assert!((fidelity_oracle(&r1, &r2).sqrt() - best.achieved_overlap).abs() < 1e-9);
    }

    #[test]
    fn measurement_and_projector_bounds(seed in any::<u64>(), d in 2usize..=4, k in 2usize..=5) {
        let mut rng = seeded_rng(seed);
        let chi = any_rank_state(&mut rng, d);
        let omega = any_rank_state(&mut rng, d);
        let povm = random_povm_with(&mut rng, d, k).unwrap();
        let p = probabilities(&povm, &chi).unwrap();
        let q = probabilities(&povm, &omega).unwrap();
        let s = angle(&chi, &omega).unwrap().sin();
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() <= s + 1e-9);
        }
        let x = random_pure_with(&mut rng, d).unwrap();
        let y = random_pure_with(&mut rng, d).unwrap();
        let pi = random_projector_with(&mut rng, d, 1 + (seed as usize % d)).unwrap();
        prop_assert!(projector_gap(&x, &y, &pi).unwrap() <= angle_pure(&x, &y).unwrap().sin() + 1e-9);
    }

    #[test]
    fn dilation_reproduces_povm(seed in any::<u64>(), d in 2usize..=3, k in 2usize..=4) {
        let mut rng = seeded_rng(seed);
        let povm = random_povm_with(&mut rng, d, k).unwrap();
        let rho = any_rank_state(&mut rng, d);
        let dil = naimark_dilate(&povm).unwrap();
        let direct = probabilities(&povm, &rho).unwrap();
        let lifted = dil.probabilities(&rho).unwrap();
        for (a, b) in direct.iter().zip(&lifted) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn partial_trace_order_independent(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let m = any_rank_state(&mut rng, 12).into_op();
        let abe = DimSpec::new(vec![2, 3, 2]).unwrap();
        let at_once = partial_trace(&m, &abe, &[0]).unwrap();
        let e_first = partial_trace(&m, &abe, &[0, 1]).unwrap();
        let e_then_b = partial_trace(&e_first, &DimSpec::new(vec![2, 3]).unwrap(), &[0]).unwrap();
        let b_first = partial_trace(&m, &abe, &[0, 2]).unwrap();
        let b_then_e = partial_trace(&b_first, &DimSpec::new(vec![2, 2]).unwrap(), &[0]).unwrap();
        prop_assert!(frobenius(&(&at_once - &e_then_b)) < 1e-12);
        prop_assert!(frobenius(&(&at_once - &b_then_e)) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = full_rank_state(&mut rng, 3);
        let b = any_rank_state(&mut rng, 2);
        let ab = kron(a.op(), b.op()).unwrap();
        let dims = DimSpec::new(vec![3, 2]).unwrap();
        prop_assert!(frobenius(&(partial_trace(&ab, &dims, &[0]).unwrap() - a.op())) < 1e-12);
        prop_assert!(frobenius(&(partial_trace(&ab, &dims, &[1]).unwrap() - b.op())) < 1e-12);
    }

    #[test]
    fn svd_factors_reconstruct(seed in any::<u64>(), r in 1usize..=6, c in 1usize..=6, rank in 1usize..=6) {
        let mut rng = seeded_rng(seed);
        let k = rank.min(r).min(c);
        let m = ginibre(&mut rng, r, k) * ginibre(&mut rng, k, c);
        let s = svd(&m).unwrap();
        let mut sigma = ComplexMatrix::zeros(r, c);
        for (i, &x) in s.singular.iter().enumerate() {
            sigma[(i, i)] = c64(x, 0.0);
        }
        prop_assert!(frobenius(&(&s.left * sigma * s.right.adjoint() - &m)) < 1e-12 * (1.0 + frobenius(&m)));
        prop_assert!(unitary_deviation(&s.left) < 1e-12 && unitary_deviation(&s.right) < 1e-12);
        prop_assert!(s.singular.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn unitary_power_is_additive(seed in any::<u64>(), d in 2usize..=5, s in 0.0f64..=0.5, t in 0.0f64..=0.5) {
        let mut rng = seeded_rng(seed);
        let u = haar_unitary(&mut rng, d);
        let lhs = unitary_power(&u, s).unwrap() * unitary_power(&u, t).unwrap();
        let rhs = unitary_power(&u, s + t).unwrap();
        prop_assert!(frobenius(&(lhs - rhs)) < 1e-10);
    }

    #[test]
    fn angle_is_a_bounded_function_of_fidelity(f in 0.0f64..=1.0) {
        let a = angle_from_fidelity(f);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&a));
        prop_assert!((a.cos().powi(2) - f).abs() < 1e-12);
    }
}

#[test]
fn fidelity_with_itself_is_one() {
    let mut rng = seeded_rng(3);
    for d in 1..=5 {
        let a = any_rank_state(&mut rng, d);
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }
    let z = DensityMatrix::basis(3, 0).unwrap();
    let o = DensityMatrix::basis(3, 2).unwrap();
    assert!(fidelity(&z, &o).unwrap().abs() < 1e-15);
}


#[test]
fn fidelity_with_a_pure_state_is_an_expectation() {
    let mut rng = seeded_rng(11);
    for d in 2..=5 {
        let chi = any_rank_state(&mut rng, d);
        let psi = random_pure_with(&mut rng, d).unwrap();
        let v = psi.amplitudes();
        let expect = (v.adjoint() * chi.op() * v)[(0, 0)].re;
        assert!((fidelity(&chi, &psi.density()).unwrap() - expect).abs() < 1e-12);
    }
}
