#![allow(dead_code)]

use clonebound::ensemble::SeededRng;
use clonebound::matkernel::{hermitian_eig, sqrt_psd, trace};
use clonebound::states::{random_density_with, DensityMatrix};
use rand::Rng;

/// Fidelity by the product formula `(Tr √(√χ ω √χ))²`, evaluated through an
/// eigen-decomposition rather than singular values.
pub fn fidelity_oracle(chi: &DensityMatrix, omega: &DensityMatrix) -> f64 {
    let s = sqrt_psd(chi.op()).unwrap();
    let inner = &s * omega.op() * &s;
    let inner = (&inner + inner.adjoint()) * clonebound::matkernel::c64(0.5, 0.0);
    let values = hermitian_eig(&inner).unwrap().values;
    let floor = 64.0 * f64::EPSILON * values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let root: f64 = values.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum();
    root * root
}

/// Random state with a random rank in `1..=d`.
pub fn any_rank_state(rng: &mut SeededRng, d: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=d);
    random_density_with(rng, d, rank).unwrap()
}

pub fn full_rank_state(rng: &mut SeededRng, d: usize) -> DensityMatrix {
    random_density_with(rng, d, d).unwrap()
}

pub fn trace_re(m: &clonebound::matkernel::ComplexMatrix) -> f64 {
    trace(m).re
}
