//! Generalized measurements, Born-rule probabilities and the Naimark dilation
//! of a POVM into a projective measurement on a system extended by an ancilla.

use serde::{Deserialize, Serialize};

use crate::ensemble::{self, SeededRng};
use crate::error::{Error, Result};
use crate::formats::SquareDoc;
use crate::matkernel::{
    c64, complete_basis, ensure_finite, ensure_square, hermitian_deviation, hermitian_eig, hermitize, identity,
    kron, sqrt_psd, ComplexMatrix, ComplexVector, Tolerances, MAX_DIM,
};
use crate::states::{DensityMatrix, PureState};

/// Completeness and projector-algebra tolerance.
pub const TOL_MEASURE: f64 = 1e-9;
/// Negative probabilities down to this value are rounding noise and clamp to zero.
pub const TOL_PROB_CLAMP: f64 = 1e-12;

/// `{E_a}`: PSD Hermitian operators summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SquareDoc>", into = "Vec<SquareDoc>")]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let d = common_dim(&elements).map_err(|e| Error::InvalidPovm(e.to_string()))?;
        let tol = Tolerances::default();
        let mut sum = ComplexMatrix::zeros(d, d);
        let mut clean = Vec::with_capacity(elements.len());
        for (a, e) in elements.iter().enumerate() {
            let dev = hermitian_deviation(e);
            if dev > tol.herm {
                return Err(Error::InvalidPovm(format!("element {a} is not Hermitian ({dev:e})")));
            }
            let e = hermitize(e);
            let min = hermitian_eig(&e)?.values[0];
            if min < -tol.psd {
                return Err(Error::InvalidPovm(format!(
                    "element {a} has negative eigenvalue {min:e}"
                )));
            }
            sum += &e;
            clean.push(e);
        }
        let residual = (sum - identity(d)).norm();
        if residual > TOL_MEASURE {
            return Err(Error::InvalidPovm(format!(
                "elements sum to the identity only within {residual:e}"
            )));
        }
        Ok(Self { elements: clean })
    }

    /// Computational-basis measurement in dimension `d`.
    pub fn computational(d: usize) -> Self {
        let elements = (0..d)
            .map(|k| {
                let mut e = ComplexMatrix::zeros(d, d);
                e[(k, k)] = c64(1.0, 0.0);
                e
            })
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }
}

impl TryFrom<Vec<SquareDoc>> for Povm {
    type Error = Error;

    fn try_from(docs: Vec<SquareDoc>) -> Result<Self> {
        Self::new(docs.iter().map(SquareDoc::to_matrix).collect::<Result<_>>()?)
    }
}

impl From<Povm> for Vec<SquareDoc> {
    fn from(p: Povm) -> Self {
        p.elements.iter().map(SquareDoc::from_matrix).collect()
    }
}

fn common_dim(ops: &[ComplexMatrix]) -> Result<usize> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidArgument("measurement has no elements".into()))?;
    let d = ensure_square(first)?;
    for op in ops {
        if ensure_square(op)? != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: op.nrows(),
            });
        }
        ensure_finite(op)?;
    }
    Ok(d)
}

/// `{Π_a}`: mutually orthogonal Hermitian projectors summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SquareDoc>", into = "Vec<SquareDoc>")]
pub struct ProjectiveMeasurement {
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let d = common_dim(&projectors).map_err(|e| Error::InvalidMeasurement(e.to_string()))?;
        let mut sum = ComplexMatrix::zeros(d, d);
        for (a, p) in projectors.iter().enumerate() {
            projector_deviation(p)
                .map_err(|e| Error::InvalidMeasurement(format!("element {a}: {e}")))?;
            for (b, q) in projectors.iter().enumerate().skip(a + 1) {
                let overlap = (p * q).norm();
                if overlap > TOL_MEASURE {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {a} and {b} are not orthogonal ({overlap:e})"
                    )));
                }
            }
            sum += p;
        }
        let residual = (sum - identity(d)).norm();
        if residual > TOL_MEASURE {
            return Err(Error::InvalidMeasurement(format!(
                "projectors sum to the identity only within {residual:e}"
            )));
        }
        Ok(Self {
            projectors: projectors.iter().map(hermitize).collect(),
        })
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].nrows()
    }

    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        born(&self.projectors, rho)
    }

    /// Every projective measurement is also a POVM.
    pub fn to_povm(&self) -> Result<Povm> {
        Povm::new(self.projectors.clone())
    }
}

impl TryFrom<Vec<SquareDoc>> for ProjectiveMeasurement {
    type Error = Error;

    fn try_from(docs: Vec<SquareDoc>) -> Result<Self> {
        Self::new(docs.iter().map(SquareDoc::to_matrix).collect::<Result<_>>()?)
    }
}

impl From<ProjectiveMeasurement> for Vec<SquareDoc> {
    fn from(p: ProjectiveMeasurement) -> Self {
        p.projectors.iter().map(SquareDoc::from_matrix).collect()
    }
}

/// Largest of `‖Π − Π†‖` and `‖Π² − Π‖`, erroring above [`TOL_MEASURE`].
fn projector_deviation(p: &ComplexMatrix) -> Result<f64> {
    ensure_square(p)?;
    ensure_finite(p)?;
    let dev = (p - p.adjoint()).norm().max((p * p - p).norm());
    if dev > TOL_MEASURE {
        return Err(Error::NotProjector(dev));
    }
    Ok(dev)
}

fn born(elements: &[ComplexMatrix], rho: &DensityMatrix) -> Result<Vec<f64>> {
    let d = elements[0].nrows();
    if rho.dim() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let op = rho.op();
    let mut probs = Vec::with_capacity(elements.len());
    for (a, e) in elements.iter().enumerate() {
        // Tr(E ρ) = Σ_ij E_ij ρ_ji
        let mut p = c64(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                p += e[(i, j)] * op[(j, i)];
            }
        }
        if p.im.abs() > TOL_PROB_CLAMP {
            return Err(Error::Consistency(format!(
                "probability of outcome {a} has imaginary part {:e}",
                p.im
            )));
        }
        if p.re < -TOL_PROB_CLAMP {
            return Err(Error::InvalidPovm(format!(
                "outcome {a} has negative probability {:e}",
                p.re
            )));
        }
        probs.push(p.re.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TOL_MEASURE {
        return Err(Error::InvalidPovm(format!("probabilities sum to {total}")));
    }
    Ok(probs)
}

/// Born rule `p(a|ρ) = Tr(E_a ρ)`.
pub fn probabilities(povm: &Povm, rho: &DensityMatrix) -> Result<Vec<f64>> {
    born(&povm.elements, rho)
}

/// Projective realization of a POVM on `C^d ⊗ C^m` with a pure ancilla.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationResult {
    pub measurement: ProjectiveMeasurement,
    pub ancilla: DensityMatrix,
    /// The unitary `U` with `U(|ψ⟩⊗|0⟩) = Σ_a √E_a|ψ⟩ ⊗ |a⟩`.
    #[serde(with = "crate::formats::matrix_serde")]
    pub unitary: ComplexMatrix,
}

impl DilationResult {
    /// `Tr{Π_a (ρ ⊗ σ)}`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.measurement.probabilities(&rho.tensor(&self.ancilla)?)
    }
}

/// Naimark dilation: `Π_a = U†(𝟙_d ⊗ |a⟩⟨a|)U`, ancilla `σ = |0⟩⟨0|`.
///
/// The isometry `W = Σ_a √E_a ⊗ |a⟩` fills the columns `|i⟩⊗|0⟩` of `U`; the
/// remaining columns complete it to an orthonormal basis by pivoted Gram–Schmidt
/// over the standard basis, in index order.
pub fn naimark_dilate(povm: &Povm) -> Result<DilationResult> {
    let d = povm.dim();
    let m = povm.outcomes();
    let big = d
        .checked_mul(m)
        .filter(|&n| n <= MAX_DIM)
        .ok_or(Error::DimTooLarge(d.saturating_mul(m)))?;

    let roots = povm
        .elements
        .iter()
        .map(sqrt_psd)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidPovm(e.to_string()))?;

    let mut u = ComplexMatrix::zeros(big, big);
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(big);
    for i in 0..d {
        let mut col = ComplexVector::zeros(big);
        for (a, root) in roots.iter().enumerate() {
            for k in 0..d {
                col[k * m + a] = root[(k, i)];
            }
        }
        u.set_column(i * m, &col);
        basis.push(col);
    }

    let fill = complete_basis(&basis, big)?;
    let free_slots = (0..big).filter(|c| c % m != 0);
    for (slot, v) in free_slots.zip(fill) {
        u.set_column(slot, &v);
    }

    let projectors = (0..m)
        .map(|a| {
            let mut sel = ComplexMatrix::zeros(m, m);
            sel[(a, a)] = c64(1.0, 0.0);
            let p = kron(&identity(d), &sel)?;
            Ok(hermitize(&(u.adjoint() * p * &u)))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(DilationResult {
        measurement: ProjectiveMeasurement::new(projectors)?,
        ancilla: DensityMatrix::basis(m, 0)?,
        unitary: u,
    })
}

/// `|⟨x|Π|x⟩ − ⟨y|Π|y⟩|` for an orthogonal projector `Π`.
pub fn projector_gap(x: &PureState, y: &PureState, pi: &ComplexMatrix) -> Result<f64> {
    projector_deviation(pi)?;
    if x.dim() != y.dim() || pi.nrows() != x.dim() {
        return Err(Error::DimMismatch {
            expected: x.dim(),
            got: if y.dim() != x.dim() { y.dim() } else { pi.nrows() },
        });
    }
    let expect = |s: &PureState| s.amplitudes().dotc(&(pi * s.amplitudes())).re;
    Ok((expect(x) - expect(y)).abs())
}

/// `E_a = S^{-1/2} G_a G_a† S^{-1/2}` with `S = Σ_a G_a G_a†` and Ginibre `G_a`.
pub fn random_povm(d: usize, outcomes: usize, seed: u64) -> Result<Povm> {
    random_povm_with(&mut ensemble::seeded_rng(seed), d, outcomes)
}

pub fn random_povm_with(rng: &mut SeededRng, d: usize, outcomes: usize) -> Result<Povm> {
    if d == 0 || outcomes == 0 {
        return Err(Error::InvalidArgument(format!(
            "random POVM needs d ≥ 1 and at least one outcome (d = {d}, outcomes = {outcomes})"
        )));
    }
    let raw: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = ensemble::ginibre(rng, d, d);
            hermitize(&(&g * g.adjoint()))
        })
        .collect();
    let total = raw.iter().fold(ComplexMatrix::zeros(d, d), |acc, p| acc + p);
    let inv_root = hermitize(&hermitian_eig(&total)?.map(|x| 1.0 / x.sqrt()));
    Povm::new(
        raw.iter()
            .map(|p| hermitize(&(&inv_root * p * &inv_root)))
            .collect(),
    )
}

/// Orthogonal projector onto a Haar-random subspace of dimension `rank`.
pub fn random_projector_with(rng: &mut SeededRng, d: usize, rank: usize) -> Result<ComplexMatrix> {
    if rank > d {
        return Err(Error::BadRank { rank, dim: d });
    }
    let u = ensemble::haar_unitary(rng, d);
    let cols = u.columns(0, rank);
    Ok(hermitize(&(cols * cols.adjoint())))
}
