//! Dense complex linear algebra shared by every other module.
//!
//! Matrices are plain `nalgebra::DMatrix<Complex64>` values. The functions here
//! add the validation the rest of the crate relies on (finiteness, Hermiticity,
//! unitarity, the dense dimension cap) on top of nalgebra's decompositions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Largest matrix dimension accepted by the dense routines.
pub const MAX_DIM: usize = 4096;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical tolerances used by the validating kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative Frobenius deviation `‖m − m†‖ / max(1, ‖m‖)` accepted as Hermitian.
    pub herm: f64,
    /// Most negative eigenvalue accepted as positive semidefinite.
    pub psd: f64,
    /// Relative Frobenius error accepted for reconstructions and unitarity.
    pub recon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-10,
            recon: 1e-9,
        }
    }
}

/// Ordered subsystem dimensions of a tensor-product space, e.g. `[d_A, d_B, d_E]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimSpec(Vec<usize>);

impl DimSpec {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimensions must be positive, got {dims:?}"
            )));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= MAX_DIM);
        match total {
            Some(_) => Ok(Self(dims)),
            None => Err(Error::DimTooLarge(usize::MAX)),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn frobenius(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() > MAX_DIM {
        return Err(Error::DimTooLarge(m.nrows()));
    }
    Ok(m.nrows())
}

pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    (m - m.adjoint()).norm() / frobenius(m).max(1.0)
}

pub fn unitary_deviation(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - identity(n)).norm() / (n as f64).sqrt()
}

pub fn ensure_unitary(u: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    let n = ensure_square(u)?;
    ensure_finite(u)?;
    let dev = unitary_deviation(u);
    if dev > tol.recon {
        return Err(Error::NotUnitary(dev));
    }
    Ok(n)
}

fn ensure_hermitian(m: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    let n = ensure_square(m)?;
    ensure_finite(m)?;
    let dev = hermitian_deviation(m);
    if dev > tol.herm {
        return Err(Error::NotHermitian(dev));
    }
    Ok(n)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `U diag(g(λ)) U†`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let s = g(lam);
            for i in 0..n {
                scaled[(i, k)] *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eig_with(m, &Tolerances::default())
}

pub fn hermitian_eig_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let n = ensure_hermitian(m, tol)?;
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let out = HermitianEigen { values, vectors };
    debug_assert!(
        (out.reconstruct() - m).norm() <= tol.recon * frobenius(m).max(1.0),
        "eigendecomposition failed to reconstruct its input"
    );
    Ok(out)
}

/// Eigenvalues this close to zero (relative to the spectral radius) are
/// indistinguishable from rounding noise and treated as exact zeros.
fn noise_floor(values: &[f64]) -> f64 {
    let radius = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    64.0 * f64::EPSILON * radius.max(1.0)
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_with(m, &Tolerances::default())
}

pub fn sqrt_psd_with(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(m, tol)?;
    if let Some(&min) = eig.values.first() {
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
    }
    let floor = noise_floor(&eig.values);
    Ok(hermitize(&eig.map(|x| if x <= floor { 0.0 } else { x.sqrt() })))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_DIM && c <= MAX_DIM => Ok(a.kronecker(b)),
        (Some(r), Some(c)) => Err(Error::DimTooLarge(r.max(c))),
        _ => Err(Error::DimTooLarge(usize::MAX)),
    }
}

/// `m ⊗ m ⊗ … ⊗ m` with `copies ≥ 1` factors.
pub fn kron_power(m: &ComplexMatrix, copies: usize) -> Result<ComplexMatrix> {
    if copies == 0 {
        return Err(Error::InvalidArgument("tensor power needs at least one copy".into()));
    }
    let mut out = m.clone();
    for _ in 1..copies {
        out = kron(&out, m)?;
    }
    Ok(out)
}

/// Traces out every subsystem not listed in `keep`.
///
/// Kept subsystems appear in the result in ascending index order; duplicates in
/// `keep` are ignored. An empty `keep` returns the full trace as a 1x1 matrix.
pub fn partial_trace(m: &ComplexMatrix, dims: &DimSpec, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    if n != dims.total() {
        return Err(Error::DimMismatch {
            expected: dims.total(),
            got: n,
        });
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    let sub = dims.dims();
    let kept: Vec<bool> = (0..sub.len()).map(|i| keep.contains(&i)).collect();
    let kept_dim: usize = sub.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let traced_dim = n / kept_dim;

    // Split each full index into its (kept, traced) multi-index coordinates.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(kept_dim); traced_dim];
    for full in 0..n {
        let (mut rem, mut k_idx, mut t_idx, mut k_stride, mut t_stride) = (full, 0, 0, 1, 1);
        for (s, &d) in sub.iter().enumerate().rev() {
            let digit = rem % d;
            rem /= d;
            if kept[s] {
                k_idx += digit * k_stride;
                k_stride *= d;
            } else {
                t_idx += digit * t_stride;
                t_stride *= d;
            }
        }
        groups[t_idx].push((full, k_idx));
    }

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for group in &groups {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// `exp(i·h)` for Hermitian `h`.
pub fn unitary_exp(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    unitary_exp_with(h, &Tolerances::default())
}

pub fn unitary_exp_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = hermitian_eig_with(h, tol)?;
    let n = eig.values.len();
    let mut scaled = eig.vectors.clone();
    for (k, &lam) in eig.values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, lam);
        for i in 0..n {
            scaled[(i, k)] *= phase;
        }
    }
    Ok(scaled * eig.vectors.adjoint())
}

/// Eigenphase in the branch `(−π, π]`.
fn principal_phase(z: Complex64) -> f64 {
    let theta = z.arg();
    if theta <= -PI {
        PI
    } else {
        theta
    }
}

/// Spectral form `u = W diag(e^{i θ_k}) W†` of a unitary, θ_k ∈ (−π, π].
///
/// [`UnitaryPath::at`] replaces θ_k by t·θ_k, giving a continuous path from the
/// identity (`t = 0`) to `u` (`t = 1`).
#[derive(Debug, Clone)]
pub struct UnitaryPath {
    basis: ComplexMatrix,
    phases: Vec<f64>,
}

impl UnitaryPath {
    pub fn new(u: &ComplexMatrix) -> Result<Self> {
        Self::new_with(u, &Tolerances::default())
    }

    pub fn new_with(u: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        ensure_unitary(u, tol)?;
        // A normal matrix has a diagonal Schur form, so the Schur vectors are eigenvectors.
        let (basis, tri) = nalgebra::Schur::try_new(u.clone(), f64::EPSILON, 0)
            .ok_or(Error::Decomposition("Schur decomposition did not converge"))?
            .unpack();
        let phases = (0..u.nrows()).map(|k| principal_phase(tri[(k, k)])).collect();
        Ok(Self { basis, phases })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn at(&self, t: f64) -> ComplexMatrix {
        let n = self.phases.len();
        let mut scaled = self.basis.clone();
        for (k, &theta) in self.phases.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, t * theta);
            for i in 0..n {
                scaled[(i, k)] *= phase;
            }
        }
        scaled * self.basis.adjoint()
    }
}

/// `u^t` along the principal-branch path of [`UnitaryPath`].
pub fn unitary_power(u: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    unitary_power_with(u, t, &Tolerances::default())
}

pub fn unitary_power_with(u: &ComplexMatrix, t: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            what: "unitary path parameter",
            value: t,
        });
    }
    let out = UnitaryPath::new_with(u, tol)?.at(t);
    if unitary_deviation(&out) > tol.recon {
        return Err(Error::Decomposition("unitary path lost unitarity"));
    }
    Ok(out)
}

/// Factors of `m = P Σ Q†`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: ComplexMatrix,
    pub singular: Vec<f64>,
    pub right: ComplexMatrix,
}

/// Singular value decomposition `m = P Σ Q†`, singular values in descending order.
///
/// Built from the Hermitian eigenproblem of `[[0, m], [m†, 0]]`, whose positive
/// eigenvalues are the singular values with eigenvectors `(p_k, q_k)/√2`. Both
/// factors are re-orthonormalized and completed to full unitaries.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    ensure_finite(m)?;
    let (r, c) = m.shape();
    let n = r + c;
    let mut j = ComplexMatrix::zeros(n, n);
    j.view_mut((0, r), (r, c)).copy_from(m);
    j.view_mut((r, 0), (c, r)).copy_from(&m.adjoint());
    let eig = hermitian_eig(&j)?;
    let scale = eig.values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let floor = 64.0 * f64::EPSILON * scale * n as f64;

    let mut left: Vec<ComplexVector> = Vec::new();
    let mut right: Vec<ComplexVector> = Vec::new();
    let mut singular = Vec::new();
    for k in (0..n).rev() {
        let sigma = eig.values[k];
        if sigma <= floor || singular.len() == r.min(c) {
            break;
        }
        let col = eig.vectors.column(k);
        let (Some(p), Some(q)) = (
            orthonormalize_against(&left, col.rows(0, r).into_owned()),
            orthonormalize_against(&right, col.rows(r, c).into_owned()),
        ) else {
            break;
        };
        left.push(p);
        right.push(q);
        singular.push(sigma);
    }
    singular.resize(r.min(c), 0.0);
    let assemble = |mut basis: Vec<ComplexVector>, dim: usize| -> Result<ComplexMatrix> {
        let fill = complete_basis(&basis, dim)?;
        basis.extend(fill);
        Ok(ComplexMatrix::from_columns(&basis))
    };
    Ok(Svd {
        left: assemble(left, r)?,
        singular,
        right: assemble(right, c)?,
    })
}

/// Removes the components along `basis` (twice) and normalizes; `None` if
/// little of the vector survives.
fn orthonormalize_against(basis: &[ComplexVector], mut v: ComplexVector) -> Option<ComplexVector> {
    let start = v.norm();
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(&v);
            v -= q * c;
        }
    }
    let norm = v.norm();
    (norm > 0.5 * start && norm > 0.0).then(|| v / c64(norm, 0.0))
}

/// Orthonormal vectors spanning the complement of `span(basis)` in `C^n`.
pub fn complete_basis(basis: &[ComplexVector], n: usize) -> Result<Vec<ComplexVector>> {
    let mut ortho: Vec<ComplexVector> = basis.to_vec();
    let mut residuals: Vec<ComplexVector> = (0..n)
        .map(|k| {
            let mut e = ComplexVector::zeros(n);
            e[k] = c64(1.0, 0.0);
            for q in &ortho {
                let c = q.dotc(&e);
                e -= q * c;
            }
            e
        })
        .collect();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n - basis.len());
    while ortho.len() < n {
        let (pick, norm) = residuals
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, r)| (k, r.norm()))
            .fold((usize::MAX, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pick == usize::MAX || norm < 1e-8 {
            return Err(Error::Decomposition("basis completion ran out of directions"));
        }
        used[pick] = true;
        let mut q = residuals[pick].clone();
        // second pass against everything accepted so far
        for v in &ortho {
            let c = v.dotc(&q);
            q -= v * c;
        }
        let q = &q / c64(q.norm(), 0.0);
        for (k, r) in residuals.iter_mut().enumerate() {
            if !used[k] {
                let c = q.dotc(r);
                *r -= &q * c;
            }
        }
        ortho.push(q.clone());
        out.push(q);
    }
    Ok(out)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    ensure_finite(m)?;
    Ok(m.singular_values().iter().sum())
}

/// `|v⟩⟨v|`.
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(vals: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
            vals.len(),
            vals.iter().map(|&v| c64(v, 0.0)),
        ))
    }

    #[test]
    fn eig_of_diagonal_sorts_ascending() {
        let e = hermitian_eig(&diag(&[2.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
        assert_abs_diff_eq!(e.vectors[(1, 0)].norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.vectors[(0, 1)].norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_of_identity_and_pauli_x() {
        let e = hermitian_eig(&identity(3)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!(unitary_deviation(&e.vectors) < 1e-12);

        let x = ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)]);
        let e = hermitian_eig(&x).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian_and_nan() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
        let mut m = identity(2);
        m[(0, 0)] = c64(f64::NAN, 0.0);
        assert_eq!(hermitian_eig(&m).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_psd(&diag(&[4.0, 9.0])).unwrap();
        assert!((r - diag(&[2.0, 3.0])).norm() < 1e-13);
        assert!((sqrt_psd(&identity(3)).unwrap() - identity(3)).norm() < 1e-13);
        let v = ComplexVector::from_vec(vec![c64(0.6, 0.0), c64(0.0, 0.8)]);
        let p = outer(&v);
        assert!((sqrt_psd(&p).unwrap() - &p).norm() < 1e-12);
        assert!(matches!(sqrt_psd(&diag(&[1.0, -0.1])), Err(Error::NotPsd(_))));
        // tiny negative eigenvalue within tolerance is clamped
        let r = sqrt_psd(&diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(r[(1, 1)], c64(0.0, 0.0));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&identity(2), &identity(2)).unwrap(), identity(4));
        let k = kron(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0])).unwrap();
        assert_eq!(k, diag(&[0.0, 1.0, 0.0, 0.0]));
        assert!(matches!(kron(&identity(64), &identity(65)), Err(Error::DimTooLarge(_))));
    }

    #[test]
    fn partial_trace_maximally_entangled() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexVector::from_vec(vec![c64(h, 0.), c64(0., 0.), c64(0., 0.), c64(h, 0.)]);
        let dims = DimSpec::new(vec![2, 2]).unwrap();
        let r = partial_trace(&outer(&phi), &dims, &[0]).unwrap();
        assert!((r - identity(2) * c64(0.5, 0.0)).norm() < 1e-15);
        let r = partial_trace(&outer(&phi), &dims, &[1]).unwrap();
        assert!((r - identity(2) * c64(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let dims = DimSpec::new(vec![2, 3]).unwrap();
        assert!(matches!(partial_trace(&identity(5), &dims, &[0]), Err(Error::DimMismatch { .. })));
        assert!(partial_trace(&identity(6), &dims, &[2]).is_err());
        let full = partial_trace(&identity(6), &dims, &[]).unwrap();
        assert_eq!(full[(0, 0)], c64(6.0, 0.0));
        assert!(DimSpec::new(vec![2, 0]).is_err());
    }

    #[test]
    fn exp_examples() {
        assert!((unitary_exp(&ComplexMatrix::zeros(3, 3)).unwrap() - identity(3)).norm() < 1e-15);
        let u = unitary_exp(&diag(&[PI, 0.0])).unwrap();
        assert!((u - diag(&[-1.0, 1.0])).norm() < 1e-14);
    }

    #[test]
    fn power_examples() {
        let u = ComplexMatrix::from_row_slice(2, 2, &[c64(0., 1.), c64(0., 0.), c64(0., 0.), c64(1., 0.)]);
        let half = unitary_power(&u, 0.5).unwrap();
        let expect = ComplexMatrix::from_row_slice(
            2,
            2,
            &[Complex64::from_polar(1.0, PI / 4.0), c64(0., 0.), c64(0., 0.), c64(1., 0.)],
        );
        assert!((half - expect).norm() < 1e-13);
        assert!((unitary_power(&u, 0.0).unwrap() - identity(2)).norm() < 1e-13);
        assert!((unitary_power(&u, 1.0).unwrap() - &u).norm() < 1e-13);
        assert!(matches!(unitary_power(&diag(&[2.0, 1.0]), 0.5), Err(Error::NotUnitary(_))));
        assert!(unitary_power(&u, 1.5).is_err());
    }

    #[test]
    fn svd_reconstructs() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c64(1., 2.), c64(0., 1.), c64(-1., 0.5), c64(3., 0.)]);
        let s = svd(&m).unwrap();
        let sigma = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
            2,
            s.singular.iter().map(|&x| c64(x, 0.0)),
        ));
        assert!((&s.left * sigma * s.right.adjoint() - &m).norm() < 1e-12);
        assert_abs_diff_eq!(trace_norm(&m).unwrap(), s.singular.iter().sum::<f64>(), epsilon = 1e-12);
    }

    #[test]
    fn svd_of_rank_deficient_product() {
        // rank-2 times rank-1: two exact zero singular values
        let mut rng = crate::ensemble::seeded_rng(7107059583561523235);
        let mut state = |rank: usize| {
            let g = crate::ensemble::ginibre(&mut rng, 3, rank);
            let rho = &g * g.adjoint();
            let t = trace(&rho);
            sqrt_psd(&(rho / t)).unwrap()
        };
        let m = state(2) * state(1);
        let s = svd(&m).unwrap();
        let mut sigma = ComplexMatrix::zeros(3, 3);
        for (i, &x) in s.singular.iter().enumerate() {
            sigma[(i, i)] = c64(x, 0.0);
        }
        assert!(frobenius(&(&s.left * sigma * s.right.adjoint() - &m)) < 1e-13);
        assert!(unitary_deviation(&s.left) < 1e-13 && unitary_deviation(&s.right) < 1e-13);
        assert!((s.singular.iter().sum::<f64>() - trace_norm(&m).unwrap()).abs() < 1e-13);
        assert!(s.singular[1] == 0.0 && s.singular[2] == 0.0);
    }
}
