mod common;

use clonebound::clone::{
    apply_cloning, lower_bound, lower_bound_one_to_two, proof_chain_check, BoundInput, CloningDims, CloningEvaluator,
    CloningSetup,
};
use clonebound::ensemble::{haar_unitary, seeded_rng};
use clonebound::matkernel::{hermitian_eig, trace};
use clonebound::measure::{probabilities, random_povm_with};
use clonebound::search::{minimize_relative_error, OptimizerConfig};
use clonebound::states::{angle, fidelity, random_density_with, random_pure_with, DensityMatrix};
use common::any_rank_state;
use rand::Rng;

fn random_setup(rng: &mut clonebound::ensemble::SeededRng, d: usize, n_in: usize, n_out: usize, env: usize) -> CloningSetup {
    let dims = CloningDims::new(d, n_in, n_out, env).unwrap();
    let anc = dims.ancilla_dim().unwrap();
    let rho1 = any_rank_state(rng, d);
    let rho2 = any_rank_state(rng, d);
    let r = rng.random_range(1..=anc);
    let u1 = random_density_with(rng, anc, r).unwrap();
    let r = rng.random_range(1..=anc);
    let u2 = random_density_with(rng, anc, r).unwrap();
    let v = haar_unitary(rng, dims.total().unwrap());
    CloningSetup::new(rho1, rho2, u1, u2, v, n_in, n_out, env).unwrap()
}

#[test]
fn proof_chain_holds_on_random_qubit_setups() {
    let mut rng = seeded_rng(2024);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let setup = random_setup(&mut rng, 2, 1, 2, 2);
        let report = proof_chain_check(&setup).unwrap();
        for c in &report.checks {
            worst = worst.min(c.margin());
        }
        assert!(report.all_hold(), "{report:#?}");
        assert!(report.relative_error >= report.bound - 1e-8);
    }
    assert!(worst > -1e-9);
}

#[test]
fn outputs_are_states() {
    let mut rng = seeded_rng(5);
    for (d, n, l, e) in [(2, 1, 2, 2), (2, 1, 3, 1), (3, 1, 2, 1), (2, 2, 3, 2)] {
        for _ in 0..20 {
            let out = apply_cloning(&random_setup(&mut rng, d, n, l, e)).unwrap();
            for rho in [&out.out1, &out.out2] {
                assert_eq!(rho.dim(), d.pow(l as u32));
                assert!((trace(rho.op()).re - 1.0).abs() < 1e-10);
                assert!(hermitian_eig(rho.op()).unwrap().values[0] > -1e-10);
            }
            assert!((out.absolute_error - (out.delta1.sin() + out.delta2.sin())).abs() < 1e-12);
            for delta in [out.delta1, out.delta2] {
                assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&delta));
            }
        }
    }
}

#[test]
fn cloner_outputs_obey_measurement_bound() {
    let mut rng = seeded_rng(77);
    for _ in 0..200 {
        let setup = random_setup(&mut rng, 2, 1, 2, 2);
        let out = apply_cloning(&setup).unwrap();
        let k = rng.random_range(2..=5);
        let povm = random_povm_with(&mut rng, 4, k).unwrap();
        for (tilde, rho) in [(&out.out1, setup.rho1()), (&out.out2, setup.rho2())] {
            let ideal = rho.tensor(rho).unwrap();
            let s = angle(tilde, &ideal).unwrap().sin();
            let p = probabilities(&povm, tilde).unwrap();
            let q = probabilities(&povm, &ideal).unwrap();
            for (a, b) in p.iter().zip(&q) {
                assert!((a - b).abs() <= s + 1e-9);
            }
        }
    }
}

#[test]
fn soundness_on_random_multi_copy_setups() {
    let mut rng = seeded_rng(99);
    for (d, n, l, e) in [(2, 1, 2, 2), (2, 1, 3, 1), (2, 2, 3, 2), (3, 1, 2, 1)] {
        for _ in 0..50 {
            let setup = random_setup(&mut rng, d, n, l, e);
            let out = apply_cloning(&setup).unwrap();
            let b = lower_bound(&setup.bound_input().unwrap()).unwrap();
            assert!(out.relative_error >= b - 1e-8, "R {} < bound {b}", out.relative_error);
        }
    }
}

#[test]
fn purifying_identity_is_perfect_for_small_ancilla_overlap() {
    let mut rng = seeded_rng(8);
    for (n, l) in [(1, 2), (1, 3), (2, 3)] {
        for _ in 0..10 {
            let rho1 = any_rank_state(&mut rng, 2);
            let rho2 = any_rank_state(&mut rng, 2);
            let f = fidelity(&rho1, &rho2).unwrap().sqrt();
            let phi = rng.random_range(0.0..=1.0) * f.powi((l - n) as i32);
            let setup = CloningSetup::purifying_identity(rho1, rho2, n, l, Some(phi)).unwrap();
            assert!((setup.ancilla_root_fidelity().unwrap() - phi).abs() < 1e-9);
            assert!(apply_cloning(&setup).unwrap().relative_error <= 1e-9);
        }
    }
}

#[test]
fn bound_monotone_in_phi_and_zero_at_threshold() {
    for (n, l) in [(1, 2), (1, 3), (2, 3), (2, 5)] {
        for f in [0.05f64, 0.3, 0.6, 0.9, 0.99] {
            let m = (l - n) as i32;
            let start = f.powi(m);
            let z = lower_bound(&BoundInput::new(f, start, n, l).unwrap()).unwrap();
            assert!(z.abs() < 1e-12);
            let mut prev = z;
            let mut phi = start;
            while phi <= 1.0 {
                let b = lower_bound(&BoundInput::new(f, phi, n, l).unwrap()).unwrap();
                assert!(b >= prev - 1e-15, "f {f} phi {phi}: {b} < {prev}");
                assert!(b >= 0.0);
                prev = b;
                phi += 1e-3;
            }
        }
    }
}

#[test]
fn general_and_single_copy_bounds_agree() {
    for k in 0..=1000 {
        let f = k as f64 / 1000.0 * 0.999;
        for j in 0..=20 {
            let phi = j as f64 / 20.0;
            let a = lower_bound(&BoundInput::new(f, phi, 1, 2).unwrap()).unwrap();
            let b = lower_bound_one_to_two(f, phi).unwrap();
            assert!((a - b).abs() <= 1e-15, "f {f} phi {phi}");
        }
    }
}

#[test]
fn optimizer_respects_bound_for_pure_qubits() {
    let mut rng = seeded_rng(4);
    let s1 = random_pure_with(&mut rng, 2).unwrap().density();
    let s2 = random_pure_with(&mut rng, 2).unwrap().density();
    let dims = CloningDims::new(2, 1, 2, 2).unwrap();
    let blank = DensityMatrix::basis(4, 0).unwrap();
    let cfg = OptimizerConfig {
        restarts: 2,
        iterations: 10,
        ..OptimizerConfig::default()
    };
    let res = minimize_relative_error(&s1, &s2, &blank, &blank, dims, &cfg).unwrap();
    assert!(res.best_r >= res.bound - 1e-8);
    assert_eq!(res.phi, 1.0);
    let eval = CloningEvaluator::new(&s1, &s2, &blank, &blank, dims).unwrap();
    assert_eq!(eval.evaluate(&res.best_v).unwrap().relative_error, res.best_r);
    for trace in &res.traces {
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
