//! Seeded random ensembles: Ginibre matrices, Haar unitaries, random pure states.
//!
//! Every generator takes an explicit `ChaCha8Rng`; there is no hidden global
//! source. Independent streams for parallel work are split off a master seed
//! with [`stream_rng`].

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matkernel::{c64, ComplexMatrix, ComplexVector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Counter-based split: stream `index` of the generator keyed by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normal_complex<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    // Filled row-major so the draw order does not depend on nalgebra's storage.
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = normal_complex(rng);
        }
    }
    m
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of `R` removed).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    let (mut q, r) = g.qr().unpack();
    for k in 0..d {
        let rk = r[(k, k)];
        let phase = if rk.norm() > 0.0 { rk / rk.norm() } else { c64(1.0, 0.0) };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Uniformly distributed unit vector in `C^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexVector {
    let v = DVector::from_iterator(d, (0..d).map(|_| normal_complex(rng)));
    let n = v.norm();
    v / c64(n, 0.0)
}

/// Random Hermitian matrix with Gaussian entries, scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize, scale: f64) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    (&g + g.adjoint()) * c64(0.5 * scale, 0.0)
}
