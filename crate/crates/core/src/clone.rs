//! Ancilla-assisted N → L cloning of a pair of mixed states, its absolute and
//! relative error, and the lower bound on the relative error.
//!
//! Registers are ordered `A ⊗ B ⊗ E`: `A` holds the `N` input copies (`d^N`),
//! `B` the `M = L − N` blank registers (`d^M`) and `E` the environment (`e`).
//! The ancilla states `Υ_j` live on `B ⊗ E` and the output is
//! `ρ̃_j = Tr_E(V (ρ_j^{⊗N} ⊗ Υ_j) V†)` on `A ⊗ B`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::SquareDoc;
use crate::matkernel::{
    ensure_unitary, hermitize, identity, kron, kron_power, partial_trace, sqrt_psd, ComplexMatrix,
    DimSpec, Tolerances, MAX_DIM,
};
use crate::states::{
    self, angle_from_roots, fidelity, purifications_with_overlap, purify,
    DensityMatrix,
};

/// `f` at or above `1 − INDISTINGUISHABLE` makes the relative error 0/0.
pub const INDISTINGUISHABLE: f64 = 1e-12;
/// Agreement required between the state-derived denominator and `√(1 − f^{2L})`.
pub const TOL_DENOMINATOR: f64 = 1e-9;
/// Slack for the inequalities checked by [`proof_chain_check`].
pub const TOL_CHAIN: f64 = 1e-9;

/// Unitary `V` on `A ⊗ B ⊗ E` together with the input and ancilla pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetupDoc", into = "SetupDoc")]
pub struct CloningSetup {
    rho1: DensityMatrix,
    rho2: DensityMatrix,
    upsilon1: DensityMatrix,
    upsilon2: DensityMatrix,
    v: ComplexMatrix,
    n_in: usize,
    n_out: usize,
    env_dim: usize,
}

/// Register dimensions of an N → L cloner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloningDims {
    pub d: usize,
    pub n_in: usize,
    pub n_out: usize,
    pub env_dim: usize,
}

fn checked_pow(d: usize, k: usize) -> Result<usize> {
    u32::try_from(k)
        .ok()
        .and_then(|k| d.checked_pow(k))
        .filter(|&n| n <= MAX_DIM)
        .ok_or(Error::DimTooLarge(usize::MAX))
}

impl CloningDims {
    pub fn new(d: usize, n_in: usize, n_out: usize, env_dim: usize) -> Result<Self> {
        if d < 1 || n_in < 1 || n_out <= n_in || env_dim < 1 {
            return Err(Error::InvalidArgument(format!(
                "need d ≥ 1, L > N ≥ 1 and e ≥ 1 (d = {d}, N = {n_in}, L = {n_out}, e = {env_dim})"
            )));
        }
        let dims = Self { d, n_in, n_out, env_dim };
        dims.total()?;
        Ok(dims)
    }

    /// `M = L − N`.
    pub fn extra(&self) -> usize {
        self.n_out - self.n_in
    }

    pub fn input_dim(&self) -> Result<usize> {
        checked_pow(self.d, self.n_in)
    }

    pub fn output_dim(&self) -> Result<usize> {
        checked_pow(self.d, self.n_out)
    }

    /// Dimension of `B ⊗ E`.
    pub fn ancilla_dim(&self) -> Result<usize> {
        checked_pow(self.d, self.extra())?
            .checked_mul(self.env_dim)
            .filter(|&n| n <= MAX_DIM)
            .ok_or(Error::DimTooLarge(usize::MAX))
    }

    /// Dimension of `A ⊗ B ⊗ E`, capped at [`MAX_DIM`].
    pub fn total(&self) -> Result<usize> {
        let n = self
            .output_dim()?
            .checked_mul(self.env_dim)
            .ok_or(Error::DimTooLarge(usize::MAX))?;
        if n > MAX_DIM {
            return Err(Error::DimTooLarge(n));
        }
        Ok(n)
    }
}

fn expect_dim(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidArgument(format!(
            "{what} has dimension {got}, expected {expected}"
        )));
    }
    Ok(())
}

impl CloningSetup {
    pub fn new(
        rho1: DensityMatrix,
        rho2: DensityMatrix,
        upsilon1: DensityMatrix,
        upsilon2: DensityMatrix,
        v: ComplexMatrix,
        n_in: usize,
        n_out: usize,
        env_dim: usize,
    ) -> Result<Self> {
        if rho1.dim() != rho2.dim() {
            return Err(Error::DimMismatch {
                expected: rho1.dim(),
                got: rho2.dim(),
            });
        }
        let dims = CloningDims::new(rho1.dim(), n_in, n_out, env_dim)?;
        let anc = dims.ancilla_dim()?;
        expect_dim("upsilon1", anc, upsilon1.dim())?;
        expect_dim("upsilon2", anc, upsilon2.dim())?;
        let total = dims.total()?;
        if v.nrows() != total || v.ncols() != total {
            return Err(Error::DimMismatch {
                expected: total,
                got: v.nrows(),
            });
        }
        ensure_unitary(&v, &Tolerances::default())?;
        Ok(Self {
            rho1,
            rho2,
            upsilon1,
            upsilon2,
            v,
            n_in,
            n_out,
            env_dim,
        })
    }

    /// Same inputs and ancillas with a different unitary.
    pub fn with_unitary(&self, v: ComplexMatrix) -> Result<Self> {
        Self::new(
            self.rho1.clone(),
            self.rho2.clone(),
            self.upsilon1.clone(),
            self.upsilon2.clone(),
            v,
            self.n_in,
            self.n_out,
            self.env_dim,
        )
    }

    /// Ancilla `|0⟩⟨0|` on `B ⊗ E` for both inputs (no prior information, `φ = 1`).
    pub fn fixed_ancilla(
        rho1: DensityMatrix,
        rho2: DensityMatrix,
        n_in: usize,
        n_out: usize,
        env_dim: usize,
        v: Option<ComplexMatrix>,
    ) -> Result<Self> {
        let dims = CloningDims::new(rho1.dim(), n_in, n_out, env_dim)?;
        let blank = DensityMatrix::basis(dims.ancilla_dim()?, 0)?;
        let v = v.unwrap_or_else(|| identity(dims.total().unwrap_or(1)));
        Self::new(rho1, rho2, blank.clone(), blank, v, n_in, n_out, env_dim)
    }

    /// Identity cloner whose ancillas are purifications of `ρ_j^{⊗M}` on `B ⊗ E`
    /// with `e = d^M`, so the output is exactly `ρ_j^{⊗L}`.
    ///
    /// With `phi = Some(φ)` the purifications are chosen with overlap `φ`
    /// (`0 ≤ φ ≤ f^M`); otherwise the canonical purification of each is used.
    pub fn purifying_identity(
        rho1: DensityMatrix,
        rho2: DensityMatrix,
        n_in: usize,
        n_out: usize,
        phi: Option<f64>,
    ) -> Result<Self> {
        if n_out <= n_in {
            return Err(Error::InvalidArgument(format!("need L > N, got N = {n_in}, L = {n_out}")));
        }
        let extra = n_out - n_in;
        let env_dim = checked_pow(rho1.dim(), extra)?;
        let target1 = rho1.tensor_power(extra)?;
        let target2 = rho2.tensor_power(extra)?;
        let (y1, y2) = match phi {
            Some(phi) => purifications_with_overlap(&target1, &target2, phi)?,
            None => (purify(&target1, env_dim)?, purify(&target2, env_dim)?),
        };
        let dims = CloningDims::new(rho1.dim(), n_in, n_out, env_dim)?;
        let v = identity(dims.total()?);
        Self::new(rho1, rho2, y1.density(), y2.density(), v, n_in, n_out, env_dim)
    }

    pub fn dims(&self) -> CloningDims {
        CloningDims {
            d: self.rho1.dim(),
            n_in: self.n_in,
            n_out: self.n_out,
            env_dim: self.env_dim,
        }
    }

    pub fn rho1(&self) -> &DensityMatrix {
        &self.rho1
    }

    pub fn rho2(&self) -> &DensityMatrix {
        &self.rho2
    }

    pub fn upsilon1(&self) -> &DensityMatrix {
        &self.upsilon1
    }

    pub fn upsilon2(&self) -> &DensityMatrix {
        &self.upsilon2
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.v
    }

    /// `f = √F(ρ₁, ρ₂)` from the stored states.
    pub fn input_root_fidelity(&self) -> Result<f64> {
        Ok(fidelity(&self.rho1, &self.rho2)?.sqrt())
    }

    /// `φ = √F(Υ₁, Υ₂)` from the stored states.
    pub fn ancilla_root_fidelity(&self) -> Result<f64> {
        Ok(fidelity(&self.upsilon1, &self.upsilon2)?.sqrt())
    }

    /// Bound parameters derived from the stored states.
    pub fn bound_input(&self) -> Result<BoundInput> {
        BoundInput::new(
            self.input_root_fidelity()?,
            self.ancilla_root_fidelity()?,
            self.n_in,
            self.n_out,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SetupDoc {
    d: usize,
    n_in: usize,
    n_out: usize,
    env_dim: usize,
    rho1: SquareDoc,
    rho2: SquareDoc,
    upsilon1: SquareDoc,
    upsilon2: SquareDoc,
    v: SquareDoc,
}

impl TryFrom<SetupDoc> for CloningSetup {
    type Error = Error;

    fn try_from(doc: SetupDoc) -> Result<Self> {
        let setup = CloningSetup::new(
            DensityMatrix::try_from(doc.rho1)?,
            DensityMatrix::try_from(doc.rho2)?,
            DensityMatrix::try_from(doc.upsilon1)?,
            DensityMatrix::try_from(doc.upsilon2)?,
            doc.v.to_matrix()?,
            doc.n_in,
            doc.n_out,
            doc.env_dim,
        )?;
        expect_dim("rho1", doc.d, setup.rho1.dim())?;
        Ok(setup)
    }
}

impl From<CloningSetup> for SetupDoc {
    fn from(s: CloningSetup) -> Self {
        SetupDoc {
            d: s.rho1.dim(),
            n_in: s.n_in,
            n_out: s.n_out,
            env_dim: s.env_dim,
            rho1: s.rho1.into(),
            rho2: s.rho2.into(),
            upsilon1: s.upsilon1.into(),
            upsilon2: s.upsilon2.into(),
            v: SquareDoc::from_matrix(&s.v),
        }
    }
}

/// Outputs of a cloner and their errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneOutcome {
    pub out1: DensityMatrix,
    pub out2: DensityMatrix,
    /// `Δ_j = Δ(ρ̃_j, ρ_j^{⊗L})`.
    pub delta1: f64,
    pub delta2: f64,
    pub absolute_error: f64,
    pub relative_error: f64,
}

/// Everything about a cloning problem that does not depend on `V`, precomputed
/// so that many unitaries can be scored cheaply.
#[derive(Debug, Clone)]
pub struct CloningEvaluator {
    dims: CloningDims,
    split: DimSpec,
    inputs: [ComplexMatrix; 2],
    ideal_roots: [ComplexMatrix; 2],
    denominator: f64,
}

/// Scores of one unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneScore {
    pub delta1: f64,
    pub delta2: f64,
    pub absolute_error: f64,
    pub relative_error: f64,
}

impl CloningEvaluator {
    /// Fails with [`Error::IndistinguishablePair`] when `f = 1`.
    pub fn new(
        rho1: &DensityMatrix,
        rho2: &DensityMatrix,
        upsilon1: &DensityMatrix,
        upsilon2: &DensityMatrix,
        dims: CloningDims,
    ) -> Result<Self> {
        let input = |rho: &DensityMatrix, ups: &DensityMatrix| -> Result<ComplexMatrix> {
            kron(&kron_power(rho.op(), dims.n_in)?, ups.op())
        };
        let ideal_root = |rho: &DensityMatrix| kron_power(&rho.sqrt(), dims.n_out);
        let denominator = ideal_denominator(rho1, rho2, dims.n_out)?;
        Ok(Self {
            dims,
            split: DimSpec::new(vec![dims.output_dim()?, dims.env_dim])?,
            inputs: [input(rho1, upsilon1)?, input(rho2, upsilon2)?],
            ideal_roots: [ideal_root(rho1)?, ideal_root(rho2)?],
            denominator,
        })
    }

    pub fn for_setup(setup: &CloningSetup) -> Result<Self> {
        Self::new(
            &setup.rho1,
            &setup.rho2,
            &setup.upsilon1,
            &setup.upsilon2,
            setup.dims(),
        )
    }

    pub fn dims(&self) -> CloningDims {
        self.dims
    }

    /// `sin Δ(ρ₁^{⊗L}, ρ₂^{⊗L})`.
    pub fn denominator(&self) -> f64 {
        self.denominator
    }

    /// `Tr_E(V (ρ_j^{⊗N} ⊗ Υ_j) V†)` for both inputs, unvalidated.
    pub fn output_ops(&self, v: &ComplexMatrix) -> Result<[ComplexMatrix; 2]> {
        let out = |input: &ComplexMatrix| -> Result<ComplexMatrix> {
            let evolved = v * input * v.adjoint();
            Ok(hermitize(&partial_trace(&evolved, &self.split, &[0])?))
        };
        Ok([out(&self.inputs[0])?, out(&self.inputs[1])?])
    }

    /// Scores `v` without validating unitarity; callers own that invariant.
    pub fn score(&self, v: &ComplexMatrix) -> Result<CloneScore> {
        let [o1, o2] = self.output_ops(v)?;
        self.score_outputs(&o1, &o2)
    }

    fn score_outputs(&self, o1: &ComplexMatrix, o2: &ComplexMatrix) -> Result<CloneScore> {
        let delta = |o: &ComplexMatrix, root: &ComplexMatrix| -> Result<f64> {
            angle_from_roots(&sqrt_psd(o)?, root)
        };
        let delta1 = delta(o1, &self.ideal_roots[0])?;
        let delta2 = delta(o2, &self.ideal_roots[1])?;
        let absolute_error = absolute_error(delta1, delta2)?;
        Ok(CloneScore {
            delta1,
            delta2,
            absolute_error,
            relative_error: absolute_error / self.denominator,
        })
    }

    pub fn evaluate(&self, v: &ComplexMatrix) -> Result<CloneOutcome> {
        ensure_unitary(v, &Tolerances::default())?;
        let total = self.dims.total()?;
        if v.nrows() != total {
            return Err(Error::DimMismatch {
                expected: total,
                got: v.nrows(),
            });
        }
        let [o1, o2] = self.output_ops(v)?;
        let score = self.score_outputs(&o1, &o2)?;
        Ok(CloneOutcome {
            out1: DensityMatrix::new(o1)?,
            out2: DensityMatrix::new(o2)?,
            delta1: score.delta1,
            delta2: score.delta2,
            absolute_error: score.absolute_error,
            relative_error: score.relative_error,
        })
    }
}

/// `sin Δ(ρ₁^{⊗L}, ρ₂^{⊗L})` computed from the states and cross-checked against
/// `√(1 − f^{2L})`.
fn ideal_denominator(rho1: &DensityMatrix, rho2: &DensityMatrix, n_out: usize) -> Result<f64> {
    let f = fidelity(rho1, rho2)?.sqrt();
    if f >= 1.0 - INDISTINGUISHABLE {
        return Err(Error::IndistinguishablePair(f));
    }
    let roots = [
        kron_power(&rho1.sqrt(), n_out)?,
        kron_power(&rho2.sqrt(), n_out)?,
    ];
    let from_states = angle_from_roots(&roots[0], &roots[1])?.sin();
    let closed_form = (1.0 - f.powi(2 * n_out as i32)).max(0.0).sqrt();
    if (from_states - closed_form).abs() > TOL_DENOMINATOR {
        return Err(Error::Consistency(format!(
            "sin Δ of the ideal outputs is {from_states}, but √(1 − f^(2L)) = {closed_form}"
        )));
    }
    Ok(from_states)
}

/// Runs the cloner of `setup` on both inputs.
pub fn apply_cloning(setup: &CloningSetup) -> Result<CloneOutcome> {
    CloningEvaluator::for_setup(setup)?.evaluate(&setup.v)
}

/// `R = (sin Δ₁ + sin Δ₂) / sin Δ(ρ₁^{⊗L}, ρ₂^{⊗L})`.
pub fn relative_error(
    delta1: f64,
    delta2: f64,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    n_out: usize,
) -> Result<f64> {
    if n_out == 0 {
        return Err(Error::InvalidArgument("L must be positive".into()));
    }
    let abs = absolute_error(delta1, delta2)?;
    Ok(abs / ideal_denominator(rho1, rho2, n_out)?)
}

/// `sin Δ₁ + sin Δ₂` for angles in `[0, π/2]`.
pub fn absolute_error(delta1: f64, delta2: f64) -> Result<f64> {
    for d in [delta1, delta2] {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&d) {
            return Err(Error::OutOfRange {
                what: "angle Δ_j",
                value: d,
            });
        }
    }
    Ok(delta1.sin() + delta2.sin())
}

/// Scalar parameters of the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    /// `√F(ρ₁, ρ₂)`.
    pub f: f64,
    /// `√F(Υ₁, Υ₂)`.
    pub phi: f64,
    pub n_in: usize,
    pub n_out: usize,
}

impl BoundInput {
    pub fn new(f: f64, phi: f64, n_in: usize, n_out: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::OutOfRange { what: "f", value: f });
        }
        if !(0.0..=1.0).contains(&phi) {
            return Err(Error::OutOfRange {
                what: "phi",
                value: phi,
            });
        }
        if n_in < 1 || n_out <= n_in {
            return Err(Error::InvalidArgument(format!(
                "need L > N ≥ 1, got N = {n_in}, L = {n_out}"
            )));
        }
        Ok(Self { f, phi, n_in, n_out })
    }

    pub fn extra(&self) -> usize {
        self.n_out - self.n_in
    }
}

/// Lower bound on the relative error of an N → L cloner.
///
/// Zero for `φ ≤ f^M`, otherwise
/// `f^N φ − f^L √(1 − f^{2N} φ²) / √(1 − f^{2L})`.
pub fn lower_bound(b: &BoundInput) -> Result<f64> {
    let b = BoundInput::new(b.f, b.phi, b.n_in, b.n_out)?;
    if b.f >= 1.0 - INDISTINGUISHABLE {
        return Err(Error::DegeneratePair);
    }
    let f = b.f;
    if b.phi <= f.powi(b.extra() as i32) {
        return Ok(0.0);
    }
    let f_n = f.powi(b.n_in as i32);
    let f_l = f.powi(b.n_out as i32);
    let value = f_n * b.phi - f_l * (1.0 - f_n * f_n * b.phi * b.phi).sqrt() / (1.0 - f_l * f_l).sqrt();
    Ok(value)
}

/// The 1 → 2 bound written out directly: zero for `φ ≤ f`, otherwise
/// `f φ − f² √(1 − f² φ²) / √(1 − f⁴)`.
pub fn lower_bound_one_to_two(f: f64, phi: f64) -> Result<f64> {
    BoundInput::new(f, phi, 1, 2)?;
    if f >= 1.0 - INDISTINGUISHABLE {
        return Err(Error::DegeneratePair);
    }
    if phi <= f {
        return Ok(0.0);
    }
    let f2 = f * f;
    Ok(f * phi - f2 * (1.0 - f2 * phi * phi).sqrt() / (1.0 - f2 * f2).sqrt())
}

/// Bound for standard 1 → 2 cloning (`φ = 1`): `f − f² / √(1 + f²)`.
pub fn standard_cloning_bound(f: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange { what: "f", value: f });
    }
    if f >= 1.0 - INDISTINGUISHABLE {
        return Err(Error::DegeneratePair);
    }
    Ok(f - f * f / (1.0 + f * f).sqrt())
}

/// One inequality `lhs ≥ rhs` evaluated on a concrete cloner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            holds: lhs >= rhs - TOL_CHAIN,
        }
    }

    /// `lhs − rhs`; negative values are violations once below `−TOL_CHAIN`.
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// The chain of inequalities leading from the triangle inequality to the lower
/// bound, evaluated on one cloner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofChainReport {
    pub f: f64,
    pub phi: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// `Δ(ρ₁^{⊗L}, ρ₂^{⊗L})`.
    pub delta_ideal: f64,
    /// `Δ(ρ̃₁, ρ̃₂)`.
    pub delta_outputs: f64,
    pub relative_error: f64,
    pub bound: f64,
    pub checks: Vec<InequalityCheck>,
}

impl ProofChainReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Evaluates every step of the lower-bound argument on `setup`:
///
/// * `Δ₁ + Δ₂ ≥ Δ(ρ₁^{⊗L}, ρ₂^{⊗L}) − Δ(ρ̃₁, ρ̃₂)` (triangle inequality, twice);
/// * `cos Δ(ρ̃₁, ρ̃₂) ≥ f^N φ` (multiplicativity, unitary invariance, monotonicity);
/// * `sin Δ(ρ̃₁, ρ̃₂) ≤ √(1 − f^{2N} φ²)`;
/// * `sin Δ₁ + sin Δ₂ ≥ sin(Δ₁ + Δ₂)`;
/// * `R ≥ cos Δ(ρ̃₁, ρ̃₂) − sin Δ(ρ̃₁, ρ̃₂) cot Δ(ρ₁^{⊗L}, ρ₂^{⊗L})`;
/// * `R ≥ lower_bound(f, φ, N, L)`.
pub fn proof_chain_check(setup: &CloningSetup) -> Result<ProofChainReport> {
    let outcome = apply_cloning(setup)?;
    let b = setup.bound_input()?;
    let bound = lower_bound(&b)?;
    let (f, phi) = (b.f, b.phi);
    let f_n = f.powi(b.n_in as i32);

    let delta_ideal = states::angle(
        &setup.rho1.tensor_power(b.n_out)?,
        &setup.rho2.tensor_power(b.n_out)?,
    )?;
    let delta_outputs = states::angle(&outcome.out1, &outcome.out2)?;
    let (d1, d2) = (outcome.delta1, outcome.delta2);
    let r = outcome.relative_error;
    // cot Δ_ideal = f^L / √(1 − f^{2L}); Δ_ideal > 0 because f < 1.
    let cot_ideal = delta_ideal.cos() / delta_ideal.sin();

    let checks = vec![
        InequalityCheck::new("triangle", d1 + d2, delta_ideal - delta_outputs),
        InequalityCheck::new("output_overlap", delta_outputs.cos(), f_n * phi),
        InequalityCheck::new(
            "output_sine",
            -delta_outputs.sin(),
            -(1.0 - f_n * f_n * phi * phi).max(0.0).sqrt(),
        ),
        InequalityCheck::new("sine_sum", d1.sin() + d2.sin(), (d1 + d2).sin()),
        InequalityCheck::new(
            "cotangent_form",
            r,
            delta_outputs.cos() - delta_outputs.sin() * cot_ideal,
        ),
        InequalityCheck::new("lower_bound", r, bound),
    ];

    Ok(ProofChainReport {
        f,
        phi,
        delta1: d1,
        delta2: d2,
        delta_ideal,
        delta_outputs,
        relative_error: r,
        bound,
        checks,
    })
}
