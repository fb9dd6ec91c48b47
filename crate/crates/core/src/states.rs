//! Density operators, pure states, fidelity and angle, and the purification
//! constructions that realise a prescribed purification overlap.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{self, SeededRng};
use crate::error::{Error, Result};
use crate::formats::{SquareDoc, VectorDoc};
use crate::matkernel::{
    self, c64, ensure_finite, ensure_square, ensure_unitary, frobenius, hermitian_deviation, hermitian_eig,
    hermitize, identity, kron, kron_power, outer, sqrt_psd, svd, trace, trace_norm, ComplexMatrix,
    ComplexVector, DimSpec, Tolerances, UnitaryPath,
};

/// Trace and norm tolerance for states.
pub const TOL_STATE: f64 = 1e-10;
/// Eigenvalue cutoff used when counting the rank of a state.
pub const RANK_CUTOFF: f64 = 1e-12;
/// Accuracy of the overlap returned by [`target_overlap_unitary`].
pub const TOL_ROOT: f64 = 1e-10;
/// Slack allowed above `√F` for a requested purification overlap.
pub const TOL_TARGET: f64 = 1e-9;
/// Uniform samples of the unitary path taken before bisecting.
pub const BRACKET_SAMPLES: usize = 64;

/// A trace-one positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SquareDoc", into = "SquareDoc")]
pub struct DensityMatrix {
    op: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and stores `(op + op†)/2`.
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        ensure_square(&op)?;
        ensure_finite(&op)?;
        let tol = Tolerances::default();
        let dev = hermitian_deviation(&op);
        if dev > tol.herm {
            return Err(Error::NotHermitian(dev));
        }
        let op = hermitize(&op);
        let tr = trace(&op).re;
        if (tr - 1.0).abs() > TOL_STATE {
            return Err(Error::BadTrace(tr));
        }
        let eig = hermitian_eig(&op)?;
        if let Some(&min) = eig.values.first() {
            if min < -tol.psd {
                return Err(Error::NotPsd(min));
            }
        }
        Ok(Self { op })
    }

    /// Rescales a nonzero PSD matrix to unit trace before validating.
    pub fn normalized(op: ComplexMatrix) -> Result<Self> {
        let tr = trace(&op).re;
        if !(tr > 0.0) {
            return Err(Error::BadTrace(tr));
        }
        Self::new(op / c64(tr, 0.0))
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            op: outer(state.amplitudes()),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            op: identity(d) / c64(d as f64, 0.0),
        }
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        Ok(Self::from_pure(&PureState::basis(d, k)?))
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn into_op(self) -> ComplexMatrix {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.nrows()
    }

    pub fn purity(&self) -> f64 {
        (&self.op * &self.op).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.op)
            .map(|e| e.values)
            .expect("density matrices are Hermitian by construction")
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > RANK_CUTOFF).count()
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        sqrt_psd(&self.op).expect("density matrices are PSD by construction")
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            op: kron(&self.op, &other.op)?,
        })
    }

    pub fn tensor_power(&self, copies: usize) -> Result<Self> {
        Ok(Self {
            op: kron_power(&self.op, copies)?,
        })
    }

    /// `u ρ u†`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        ensure_unitary(u, &Tolerances::default())?;
        if u.nrows() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        Self::new(hermitize(&(u * &self.op * u.adjoint())))
    }

    pub fn partial_trace(&self, dims: &DimSpec, keep: &[usize]) -> Result<Self> {
        Self::new(matkernel::partial_trace(&self.op, dims, keep)?)
    }
}

impl TryFrom<SquareDoc> for DensityMatrix {
    type Error = Error;

    fn try_from(doc: SquareDoc) -> Result<Self> {
        Self::new(doc.to_matrix()?)
    }
}

impl From<DensityMatrix> for SquareDoc {
    fn from(rho: DensityMatrix) -> Self {
        SquareDoc::from_matrix(&rho.op)
    }
}

/// A unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorDoc", into = "VectorDoc")]
pub struct PureState {
    amp: ComplexVector,
}

impl PureState {
    pub fn new(amp: ComplexVector) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = amp.norm();
        if (n - 1.0).abs() > TOL_STATE {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amp })
    }

    pub fn normalized(amp: ComplexVector) -> Result<Self> {
        let n = amp.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n));
        }
        Self::new(amp / c64(n, 0.0))
    }

    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidArgument(format!("basis index {k} >= dimension {d}")));
        }
        let mut amp = ComplexVector::zeros(d);
        amp[k] = c64(1.0, 0.0);
        Ok(Self { amp })
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amp
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.amp.dotc(&other.amp))
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

impl TryFrom<VectorDoc> for PureState {
    type Error = Error;

    fn try_from(doc: VectorDoc) -> Result<Self> {
        Self::new(doc.to_vector()?)
    }
}

impl From<PureState> for VectorDoc {
    fn from(s: PureState) -> Self {
        VectorDoc::from_vector(&s.amp)
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimMismatch { expected: a, got: b })
    }
}

fn clamp_unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// `(Tr |√χ √ω|)²` from precomputed square roots.
pub fn fidelity_from_roots(sqrt_chi: &ComplexMatrix, sqrt_omega: &ComplexMatrix) -> Result<f64> {
    same_dim(sqrt_chi.nrows(), sqrt_omega.nrows())?;
    let root = trace_norm(&(sqrt_chi * sqrt_omega))?;
    Ok(clamp_unit(root * root))
}

/// Uhlmann fidelity `F(χ, ω) = (Tr √(√χ ω √χ))²`, the squared maximal overlap of purifications.
pub fn fidelity(chi: &DensityMatrix, omega: &DensityMatrix) -> Result<f64> {
    same_dim(chi.dim(), omega.dim())?;
    fidelity_from_roots(&chi.sqrt(), &omega.sqrt())
}

/// Angle between mixed states, `Δ = arccos √F ∈ [0, π/2]`.
pub fn angle(chi: &DensityMatrix, omega: &DensityMatrix) -> Result<f64> {
    same_dim(chi.dim(), omega.dim())?;
    angle_from_roots(&chi.sqrt(), &omega.sqrt())
}

/// `arccos √F` evaluated as `2 asin(B/2)`, with the Bures distance
/// `B = min_V ‖√χ − √ω V‖_F` formed directly at the optimal `V`. Unlike
/// `arccos √F` this keeps full precision for nearly equal states.
pub fn angle_from_roots(sqrt_chi: &ComplexMatrix, sqrt_omega: &ComplexMatrix) -> Result<f64> {
    same_dim(sqrt_chi.nrows(), sqrt_omega.nrows())?;
    let s = svd(&(sqrt_omega.adjoint() * sqrt_chi))?;
    let v = &s.left * s.right.adjoint();
    let bures = frobenius(&(sqrt_chi - sqrt_omega * v));
    Ok(2.0 * (0.5 * bures).min(FRAC_1_SQRT_2).asin())
}

pub fn angle_from_fidelity(f: f64) -> f64 {
    clamp_unit(f).sqrt().acos()
}

/// Angle between unit vectors, `δ = arccos |⟨x|y⟩| ∈ [0, π/2]`.
pub fn angle_pure(x: &PureState, y: &PureState) -> Result<f64> {
    let ip = x.inner(y)?.norm();
    Ok(clamp_unit(ip).acos().min(FRAC_PI_2))
}

/// Canonical purification `Σ_k √λ_k |v_k⟩ ⊗ |k⟩` on `C^d ⊗ C^env_dim`, eigenvalues descending.
pub fn purify(rho: &DensityMatrix, env_dim: usize) -> Result<PureState> {
    if env_dim == 0 {
        return Err(Error::EnvTooSmall { env_dim, rank: rho.rank() });
    }
    let d = rho.dim();
    let eig = hermitian_eig(rho.op())?;
    let rank = eig.values.iter().filter(|&&v| v > RANK_CUTOFF).count();
    if rank > env_dim {
        return Err(Error::EnvTooSmall { env_dim, rank });
    }
    matkernel::DimSpec::new(vec![d, env_dim])?;
    let mut amp = ComplexVector::zeros(d * env_dim);
    // values are ascending; walk them in reverse for descending order.
    for (k, col) in (0..d).rev().take(env_dim).enumerate() {
        let weight = eig.values[col].max(0.0).sqrt();
        for i in 0..d {
            amp[i * env_dim + k] = eig.vectors[(i, col)] * weight;
        }
    }
    PureState::new(amp)
}

/// `|Tr(√ρ₁ √ρ₂ v)|`, the purification overlap selected by the unitary `v`.
pub fn overlap_under(v: &ComplexMatrix, rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    same_dim(rho1.dim(), rho2.dim())?;
    ensure_unitary(v, &Tolerances::default())?;
    same_dim(rho1.dim(), v.nrows())?;
    Ok(overlap_from_product(&(rho1.sqrt() * rho2.sqrt()), v))
}

fn overlap_from_product(m: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    // Tr(M V) without forming the product.
    let n = m.nrows();
    let mut acc = c64(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += m[(i, k)] * v[(k, i)];
        }
    }
    acc.norm()
}

/// A unitary on `C^d` fixing a purification overlap, with its position on the connecting path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapUnitaryResult {
    #[serde(with = "crate::formats::matrix_serde")]
    pub v: ComplexMatrix,
    pub achieved_overlap: f64,
    pub path_parameter: f64,
}

/// Shared SVD of `M = √ρ₁ √ρ₂ = P Σ Q†`.
struct OverlapGeometry {
    product: ComplexMatrix,
    left: ComplexMatrix,
    right: ComplexMatrix,
    singular: Vec<f64>,
}

impl OverlapGeometry {
    fn new(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Self> {
        same_dim(rho1.dim(), rho2.dim())?;
        let product = rho1.sqrt() * rho2.sqrt();
        let s = svd(&product)?;
        Ok(Self {
            product,
            left: s.left,
            right: s.right,
            singular: s.singular,
        })
    }

    fn overlap(&self, v: &ComplexMatrix) -> f64 {
        overlap_from_product(&self.product, v)
    }

    fn root_fidelity(&self) -> f64 {
        clamp_unit(self.singular.iter().sum())
    }

    /// `V_max = Q P†`.
    fn max_unitary(&self) -> ComplexMatrix {
        &self.right * self.left.adjoint()
    }

    /// `V₀ = Q C P†`, with `C` the cyclic shift.
    fn zero_unitary(&self) -> Result<ComplexMatrix> {
        let d = self.product.nrows();
        if d < 2 {
            return Err(Error::DimTooSmall(d));
        }
        let mut shift = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            shift[((k + 1) % d, k)] = c64(1.0, 0.0);
        }
        Ok(&self.right * shift * self.left.adjoint())
    }
}

/// Unitary attaining the maximal purification overlap `√F(ρ₁, ρ₂)`.
pub fn max_overlap_unitary(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<OverlapUnitaryResult> {
    let geo = OverlapGeometry::new(rho1, rho2)?;
    let v = geo.max_unitary();
    Ok(OverlapUnitaryResult {
        achieved_overlap: geo.overlap(&v),
        v,
        path_parameter: 1.0,
    })
}

/// Unitary giving orthogonal purifications.
pub fn zero_overlap_unitary(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<OverlapUnitaryResult> {
    let geo = OverlapGeometry::new(rho1, rho2)?;
    let v = geo.zero_unitary()?;
    Ok(OverlapUnitaryResult {
        achieved_overlap: geo.overlap(&v),
        v,
        path_parameter: 0.0,
    })
}

/// Unitary on the path `V(t) = V₀ (V₀† V_max)^t` whose overlap equals `phi`.
///
/// `g(t) = |Tr(√ρ₁ √ρ₂ V(t))|` runs continuously from 0 to `√F` but need not be
/// monotone, so a sign change of `g − phi` is located on a uniform grid first
/// and then refined by bisection.
pub fn target_overlap_unitary(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    phi: f64,
) -> Result<OverlapUnitaryResult> {
    let geo = OverlapGeometry::new(rho1, rho2)?;
    let max = geo.root_fidelity();
    if !phi.is_finite() || phi < 0.0 || phi > max + TOL_TARGET {
        return Err(Error::TargetOutOfRange { target: phi, max });
    }
    if geo.product.nrows() == 1 {
        // The only unitaries are phases; the overlap is fixed at √F.
        let v = identity(1);
        return Ok(OverlapUnitaryResult {
            achieved_overlap: geo.overlap(&v),
            v,
            path_parameter: 1.0,
        });
    }
    let v0 = geo.zero_unitary()?;
    let vmax = geo.max_unitary();
    let g0 = geo.overlap(&v0);
    if (g0 - phi).abs() <= TOL_ROOT {
        return Ok(OverlapUnitaryResult {
            v: v0,
            achieved_overlap: g0,
            path_parameter: 0.0,
        });
    }
    let g1 = geo.overlap(&vmax);
    if phi >= g1 || (g1 - phi).abs() <= TOL_ROOT {
        return Ok(OverlapUnitaryResult {
            v: vmax,
            achieved_overlap: g1,
            path_parameter: 1.0,
        });
    }

    let path = UnitaryPath::new(&(v0.adjoint() * &vmax))?;
    let at = |t: f64| -> (ComplexMatrix, f64) {
        let v = &v0 * path.at(t);
        let g = geo.overlap(&v);
        (v, g)
    };

    // h(0) < 0 < h(1) for h = g − phi; find the first grid point where h ≥ 0.
    let mut lo = 0.0;
    let mut hi = 1.0;
    for i in 1..=BRACKET_SAMPLES {
        let t = i as f64 / BRACKET_SAMPLES as f64;
        let (v, g) = at(t);
        if (g - phi).abs() <= TOL_ROOT {
            return Ok(OverlapUnitaryResult {
                v,
                achieved_overlap: g,
                path_parameter: t,
            });
        }
        if g > phi {
            hi = t;
            break;
        }
        lo = t;
    }

    let mut best = at(hi);
    let mut best_t = hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (v, g) = at(mid);
        if (g - phi).abs() < (best.1 - phi).abs() {
            best = (v, g);
            best_t = mid;
        }
        if (g - phi).abs() <= 0.5 * TOL_ROOT || hi - lo <= f64::EPSILON {
            break;
        }
        if g > phi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (v, g) = best;
    if (g - phi).abs() > TOL_ROOT {
        return Err(Error::Consistency(format!(
            "bisection reached overlap {g} for target {phi}"
        )));
    }
    Ok(OverlapUnitaryResult {
        v,
        achieved_overlap: g,
        path_parameter: best_t,
    })
}

/// Purifications `|Y₁⟩, |Y₂⟩ ∈ C^d ⊗ C^d` of `ρ₁, ρ₂` with `|⟨Y₁|Y₂⟩| = phi`.
///
/// `|Y₁⟩` is the vectorisation of `√ρ₁` and `|Y₂⟩` that of `√ρ₂ V`, so tracing out
/// the second factor recovers `ρ_j` and `⟨Y₁|Y₂⟩ = Tr(√ρ₁ √ρ₂ V)`.
pub fn purifications_with_overlap(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    phi: f64,
) -> Result<(PureState, PureState)> {
    let target = target_overlap_unitary(rho1, rho2, phi)?;
    let y1 = vectorize(&rho1.sqrt());
    let y2 = vectorize(&(rho2.sqrt() * &target.v));
    Ok((PureState::new(y1)?, PureState::new(y2)?))
}

/// Row-major vectorisation `Σ_{k,i} A_{ki} |k⟩|i⟩`.
fn vectorize(a: &ComplexMatrix) -> ComplexVector {
    DVector::from_iterator(a.len(), a.transpose().iter().copied())
}

/// Random state `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(&mut ensemble::seeded_rng(seed), d, rank)
}

pub fn random_density_with(rng: &mut SeededRng, d: usize, rank: usize) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::BadRank { rank, dim: d });
    }
    let g = ensemble::ginibre(rng, d, rank);
    DensityMatrix::normalized(hermitize(&(&g * g.adjoint())))
}

pub fn random_pure_with(rng: &mut SeededRng, d: usize) -> Result<PureState> {
    PureState::normalized(ensemble::random_unit_vector(rng, d))
}
