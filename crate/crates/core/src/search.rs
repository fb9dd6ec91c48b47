//! Numerical probes of the bound: gradient-free search for low-relative-error
//! cloners, randomized verification of the fidelity/angle inequalities, and
//! bound tables.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clone::{lower_bound, BoundInput, CloningDims, CloningEvaluator, CloningSetup};
use crate::ensemble::{self, stream_rng};
use crate::error::{Error, Result};
use crate::matkernel::{c64, unitary_exp, ComplexMatrix};
use crate::measure::{probabilities, projector_gap, random_povm_with, random_projector_with};
use crate::states::{angle, angle_pure, fidelity, random_density_with, random_pure_with, DensityMatrix};

/// Slack for the soundness check `best_r ≥ bound − TOL_SOUNDNESS`.
pub const TOL_SOUNDNESS: f64 = 1e-8;
/// Slack for the randomized inequality checks.
pub const TOL_VERIFY: f64 = 1e-9;

/// Budget and schedule of the restart/coordinate-perturbation search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Sweeps over all generator coordinates per restart.
    pub iterations: usize,
    pub initial_step: f64,
    /// Step multiplier applied after a sweep without improvement.
    pub step_decay: f64,
    pub seed: u64,
    /// A restart stops once its step falls below this value.
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 4,
            iterations: 40,
            initial_step: 0.4,
            step_decay: 0.5,
            seed: 0,
            tol: 1e-6,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 {
            return Err(Error::BudgetZero);
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::OutOfRange {
                what: "initial_step",
                value: self.initial_step,
            });
        }
        if !(self.step_decay > 0.0 && self.step_decay < 1.0) {
            return Err(Error::OutOfRange {
                what: "step_decay",
                value: self.step_decay,
            });
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::OutOfRange {
                what: "tol",
                value: self.tol,
            });
        }
        Ok(())
    }
}

/// Best cloner found, its distance to the bound, and per-restart traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    #[serde(with = "crate::formats::matrix_serde")]
    pub best_v: ComplexMatrix,
    pub best_r: f64,
    pub bound: f64,
    /// `best_r − bound`.
    pub gap: f64,
    pub f: f64,
    pub phi: f64,
    pub best_restart: usize,
    /// Best-so-far relative error after each sweep, one list per restart.
    pub traces: Vec<Vec<f64>>,
    pub evaluations: u64,
    pub config: OptimizerConfig,
}

impl SearchResult {
    pub fn is_sound(&self) -> bool {
        self.gap >= -TOL_SOUNDNESS
    }
}

/// Real coordinates → Hermitian generator: `d` diagonal entries, then
/// `(re, im)` for each `j < k` above the diagonal.
fn hermitian_from_params(params: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    for (k, &p) in params.iter().take(n).enumerate() {
        h[(k, k)] = c64(p, 0.0);
    }
    let mut idx = n;
    for j in 0..n {
        for k in (j + 1)..n {
            let z = c64(params[idx], params[idx + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            idx += 2;
        }
    }
    h
}

struct RestartOutcome {
    params: Vec<f64>,
    best_r: f64,
    trace: Vec<f64>,
    evaluations: u64,
}

fn run_restart(
    eval: &CloningEvaluator,
    n: usize,
    cfg: &OptimizerConfig,
    index: usize,
) -> Result<RestartOutcome> {
    let mut rng = stream_rng(cfg.seed, index as u64);
    let dim = n * n;
    // Restart 0 starts from the identity cloner.
    let mut params: Vec<f64> = if index == 0 {
        vec![0.0; dim]
    } else {
        (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
    };
    let objective = |p: &[f64]| -> Result<f64> {
        let v = unitary_exp(&hermitian_from_params(p, n))?;
        Ok(eval.score(&v)?.relative_error)
    };
    let mut best = objective(&params)?;
    let mut evaluations = 1u64;
    let mut step = cfg.initial_step;
    let mut trace = Vec::with_capacity(cfg.iterations);
    let mut order: Vec<usize> = (0..dim).collect();

    for _ in 0..cfg.iterations {
        if step < cfg.tol {
            break;
        }
        order.shuffle(&mut rng);
        let mut improved = false;
        for &k in &order {
            let base = params[k];
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            for delta in [sign * step, -sign * step] {
                params[k] = base + delta;
                let r = objective(&params)?;
                evaluations += 1;
                if r < best {
                    best = r;
                    improved = true;
                    break;
                }
                params[k] = base;
            }
        }
        trace.push(best);
        if !improved {
            step *= cfg.step_decay;
        }
    }
    Ok(RestartOutcome {
        params,
        best_r: best,
        trace,
        evaluations,
    })
}

/// Minimises the relative error over unitaries `V = exp(i·H)` on `A ⊗ B ⊗ E`.
///
/// Restarts run in parallel on independent counter-based streams of `cfg.seed`;
/// the winner is the lowest `best_r`, ties going to the lower restart index.
pub fn minimize_relative_error(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    upsilon1: &DensityMatrix,
    upsilon2: &DensityMatrix,
    dims: CloningDims,
    cfg: &OptimizerConfig,
) -> Result<SearchResult> {
    cfg.validate()?;
    let eval = CloningEvaluator::new(rho1, rho2, upsilon1, upsilon2, dims)?;
    let f = fidelity(rho1, rho2)?.sqrt();
    let phi = fidelity(upsilon1, upsilon2)?.sqrt();
    let bound = lower_bound(&BoundInput::new(f, phi, dims.n_in, dims.n_out)?)?;
    let n = dims.total()?;

    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(&eval, n, cfg, i))
        .collect::<Result<Vec<_>>>()?;

    let (best_restart, winner) = outcomes
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartOutcome)>, |acc, (i, o)| match acc {
            Some((_, b)) if b.best_r <= o.best_r => acc,
            _ => Some((i, o)),
        })
        .expect("at least one restart");

    let best_v = unitary_exp(&hermitian_from_params(&winner.params, n))?;
    let setup = CloningSetup::new(
        rho1.clone(),
        rho2.clone(),
        upsilon1.clone(),
        upsilon2.clone(),
        best_v,
        dims.n_in,
        dims.n_out,
        dims.env_dim,
    )?;
    let best_r = eval.evaluate(setup.unitary())?.relative_error;

    Ok(SearchResult {
        best_v: setup.unitary().clone(),
        best_r,
        bound,
        gap: best_r - bound,
        f,
        phi,
        best_restart,
        traces: outcomes.iter().map(|o| o.trace.clone()).collect(),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        config: cfg.clone(),
    })
}

/// Search restricted to 1 → 2 cloners acting on `H ⊗ H` only, with a pure blank
/// register `|0⟩` and no environment.
pub fn restricted_cloner_search(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<SearchResult> {
    let d = rho1.dim();
    if d > 4 {
        return Err(Error::InvalidArgument(format!(
            "restricted search supports d ≤ 4, got {d}"
        )));
    }
    let dims = CloningDims::new(d, 1, 2, 1)?;
    let blank = DensityMatrix::basis(d, 0)?;
    minimize_relative_error(rho1, rho2, &blank, &blank, dims, cfg)
}

/// Per-inequality tallies of a randomized run. `max_slack` is the largest
/// `lhs − rhs` seen for an inequality written as `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityStats {
    pub name: String,
    pub trials: u64,
    pub violations: u64,
    pub max_slack: f64,
    pub worst_case: Option<serde_json::Value>,
}

impl InequalityStats {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            trials: 0,
            violations: 0,
            max_slack: f64::NEG_INFINITY,
            worst_case: None,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, case: impl FnOnce() -> serde_json::Value) {
        let slack = lhs - rhs;
        self.trials += 1;
        if !(slack <= TOL_VERIFY) {
            self.violations += 1;
        }
        if slack > self.max_slack || slack.is_nan() {
            self.max_slack = slack;
            self.worst_case = Some(case());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub d: usize,
    pub trials: u64,
    pub seed: u64,
    pub violations: u64,
    /// Largest `lhs − rhs` over every inequality and trial.
    pub max_slack_violation: f64,
    pub tolerance: f64,
    pub checks: Vec<InequalityStats>,
}

impl VerificationReport {
    /// One CSV row per inequality.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(["inequality", "d", "trials", "violations", "max_slack"]).map_err(io)?;
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                self.d.to_string(),
                c.trials.to_string(),
                c.violations.to_string(),
                fmt_sig17(c.max_slack),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Draws random states, POVMs, projectors and pure pairs in dimension `d` and
/// checks, with slack [`TOL_VERIFY`]:
///
/// * `triangle`: `Δ(χ,ω) ≤ Δ(χ,ρ) + Δ(ω,ρ)`;
/// * `fidelity_difference`: `|F(χ,ρ) − F(ω,ρ)| ≤ sin Δ(χ,ω)`;
/// * `measurement_deviation`: `max_a |p(a|χ) − p(a|ω)| ≤ sin Δ(χ,ω)` for a POVM with 2–5 outcomes;
/// * `projector_gap`: `|⟨x|Π|x⟩ − ⟨y|Π|y⟩| ≤ sin δ(x,y)`.
pub fn verify_inequalities(d: usize, trials: u64, seed: u64) -> Result<VerificationReport> {
    if !(2..=6).contains(&d) {
        return Err(Error::InvalidArgument(format!("dimension must lie in 2..=6, got {d}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ensemble::seeded_rng(seed);
    let mut triangle = InequalityStats::new("triangle");
    let mut fid_diff = InequalityStats::new("fidelity_difference");
    let mut meas = InequalityStats::new("measurement_deviation");
    let mut proj = InequalityStats::new("projector_gap");

    for _ in 0..trials {
        let state = |rng: &mut ensemble::SeededRng| -> Result<DensityMatrix> {
            let rank = rng.random_range(1..=d);
            random_density_with(rng, d, rank)
        };
        let chi = state(&mut rng)?;
        let omega = state(&mut rng)?;
        let rho = state(&mut rng)?;
        let outcomes = rng.random_range(2..=5);
        let povm = random_povm_with(&mut rng, d, outcomes)?;
        let x = random_pure_with(&mut rng, d)?;
        let y = random_pure_with(&mut rng, d)?;
        let pi_rank = rng.random_range(1..=d);
        let pi = random_projector_with(&mut rng, d, pi_rank)?;

        let f_cr = fidelity(&chi, &rho)?;
        let f_or = fidelity(&omega, &rho)?;
        let a_co = angle(&chi, &omega)?;
        let a_cr = angle(&chi, &rho)?;
        let a_or = angle(&omega, &rho)?;
        let triple = || serde_json::json!({ "chi": &chi, "omega": &omega, "rho": &rho });

        triangle.record(a_co, a_cr + a_or, triple);
        fid_diff.record((f_cr - f_or).abs(), a_co.sin(), triple);

        let p = probabilities(&povm, &chi)?;
        let q = probabilities(&povm, &omega)?;
        let dev = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        meas.record(dev, a_co.sin(), || {
            serde_json::json!({ "chi": &chi, "omega": &omega, "povm": &povm })
        });

        let gap = projector_gap(&x, &y, &pi)?;
        proj.record(gap, angle_pure(&x, &y)?.sin(), || {
            serde_json::json!({
                "x": &x,
                "y": &y,
                "projector": crate::formats::SquareDoc::from_matrix(&pi),
            })
        });
    }

    let checks = vec![triangle, fid_diff, meas, proj];
    Ok(VerificationReport {
        d,
        trials,
        seed,
        violations: checks.iter().map(|c| c.violations).sum(),
        max_slack_violation: checks.iter().map(|c| c.max_slack).fold(f64::NEG_INFINITY, f64::max),
        tolerance: TOL_VERIFY,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub f: f64,
    pub phi: f64,
    pub n_in: usize,
    pub n_out: usize,
    pub bound: f64,
}

/// Lower bound tabulated over a grid of `f` at fixed `φ`, `N`, `L`.
pub fn sweep_bound(f_grid: &[f64], phi: f64, n_in: usize, n_out: usize) -> Result<Vec<SweepRow>> {
    f_grid
        .iter()
        .map(|&f| {
            if f.is_finite() && f >= 1.0 {
                return Err(Error::DegeneratePair);
            }
            let bound = lower_bound(&BoundInput::new(f, phi, n_in, n_out)?)?;
            Ok(SweepRow {
                f,
                phi,
                n_in,
                n_out,
                bound,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["f", "phi", "n_in", "n_out", "bound"]).map_err(io)?;
    for r in rows {
        w.write_record([
            fmt_sig17(r.f),
            fmt_sig17(r.phi),
            r.n_in.to_string(),
            r.n_out.to_string(),
            fmt_sig17(r.bound),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}

/// Best-so-far trace of every restart as `restart,sweep,best_r` rows.
pub fn write_trace_csv<W: std::io::Write>(result: &SearchResult, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["restart", "sweep", "best_r", "bound"]).map_err(io)?;
    for (i, trace) in result.traces.iter().enumerate() {
        for (k, r) in trace.iter().enumerate() {
            w.write_record([i.to_string(), k.to_string(), fmt_sig17(*r), fmt_sig17(result.bound)])
                .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::unitary_deviation;
    use crate::states::{random_density, PureState};

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 2,
            iterations: 6,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn generator_is_hermitian_and_covers_all_coordinates() {
        let n = 3;
        let params: Vec<f64> = (0..n * n).map(|k| k as f64 + 1.0).collect();
        let h = hermitian_from_params(&params, n);
        assert_eq!(h, h.adjoint());
        let nonzero_reals = h.iter().map(|z| (z.re != 0.0) as usize + (z.im != 0.0) as usize).sum::<usize>();
        // diagonal counted once, each off-diagonal (re, im) counted twice
        assert_eq!(nonzero_reals, n + 2 * (n * n - n));
        assert!(unitary_deviation(&unitary_exp(&h).unwrap()) < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig { restarts: 0, ..OptimizerConfig::default() };
        assert_eq!(bad.validate(), Err(Error::BudgetZero));
        let bad = OptimizerConfig { step_decay: 1.0, ..OptimizerConfig::default() };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig { initial_step: 0.0, ..OptimizerConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn purifying_ancilla_optimum_is_found_from_identity() {
        let rho1 = random_density(2, 2, 21).unwrap();
        let rho2 = random_density(2, 2, 22).unwrap();
        let setup = CloningSetup::purifying_identity(rho1.clone(), rho2.clone(), 1, 2, None).unwrap();
        let res = minimize_relative_error(&rho1, &rho2, setup.upsilon1(), setup.upsilon2(), setup.dims(), &quick()).unwrap();
        assert!(res.best_r <= 1e-6, "{}", res.best_r);
        assert!(res.is_sound());
    }

    #[test]
    fn pure_pair_respects_bound_and_is_deterministic() {
        let s1 = PureState::basis(2, 0).unwrap().density();
        let s2 = PureState::normalized(crate::matkernel::ComplexVector::from_vec(vec![c64(0.8, 0.0), c64(0.6, 0.0)]))
            .unwrap()
            .density();
        let a = restricted_cloner_search(&s1, &s2, &quick()).unwrap();
        assert!(a.best_r >= a.bound - TOL_SOUNDNESS);
        let b = restricted_cloner_search(&s1, &s2, &quick()).unwrap();
        assert_eq!(a, b);
        for trace in &a.traces {
            assert!(trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn verify_rejects_bad_arguments() {
        assert!(verify_inequalities(1, 10, 0).is_err());
        assert!(verify_inequalities(7, 10, 0).is_err());
        assert!(verify_inequalities(2, 0, 0).is_err());
    }

    #[test]
    fn verify_small_run_is_clean_and_serializes() {
        let rep = verify_inequalities(3, 200, 5).unwrap();
        assert_eq!(rep.violations, 0, "{rep:#?}");
        assert_eq!(rep.checks.len(), 4);
        let text = serde_json::to_string(&rep).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
        let mut csv = Vec::new();
        rep.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep_bound(&[0.0, 0.5, 0.8], 0.8, 1, 2).unwrap();
        assert_eq!(rows[0].bound, 0.0);
        assert_eq!(rows[2].bound, 0.0); // φ = f^M
        assert!(rows[1].bound > 0.0);
        assert_eq!(sweep_bound(&[1.0], 1.0, 1, 2), Err(Error::DegeneratePair));
        let mut out = Vec::new();
        write_sweep_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("f,phi,n_in,n_out,bound\n"));
        let bound: f64 = text.lines().nth(2).unwrap().split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(bound, rows[1].bound);
    }
}
