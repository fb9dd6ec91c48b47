//! Command-line front end. [`run`] parses arguments, merges an optional JSON
//! config file (keys mirror the long flag names, flags win), validates the
//! result and only then computes.
//!
//! Exit codes: `0` success, `1` a numerical or mathematical failure (inequality
//! violation, soundness violation, degenerate pair, unreachable overlap target),
//! `2` unusable input (bad flags, bad config, malformed JSON, invalid matrices).
//! Machine output goes to stdout or `--out`; diagnostics go to stderr.
//! Randomness comes only from `--seed`, which defaults to 0.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::clone::{lower_bound, BoundInput, CloningDims, CloningSetup};
use crate::error::Error;
use crate::formats::VectorDoc;
use crate::matkernel::{frobenius, DimSpec};
use crate::search::{
    self, fmt_sig17, minimize_relative_error, restricted_cloner_search, sweep_bound, verify_inequalities,
    OptimizerConfig,
};
use crate::states::{purifications_with_overlap, DensityMatrix, PureState};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "clonebound", version, about = "Fidelity geometry and cloning error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Randomized check of the angle, fidelity and measurement inequalities.
    Verify(VerifyArgs),
    /// Evaluate the relative-error lower bound.
    Bound(BoundArgs),
    /// Build purifications of a state pair with a prescribed overlap.
    Purify(PurifyArgs),
    /// Search for a low relative-error cloner.
    Optimize(OptimizeArgs),
    /// Tabulate the lower bound over a grid of f.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Unitary on `A ⊗ B ⊗ E` with the chosen ancillas.
    General,
    /// 1 → 2 unitary on `H ⊗ H` with a pure blank register.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AncillaKind {
    /// `|0⟩⟨0|` on `B ⊗ E` for both inputs.
    Blank,
    /// Purifications of `ρ_j^{⊗(L−N)}`, overlap set by `--phi` when given.
    Purifying,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct VerifyArgs {
    /// JSON file with defaults for any of the flags below.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Hilbert-space dimension, 2 to 6.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    /// Number of random trials [default: 10000].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    /// [default: 0]
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    /// [default: json]
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct BoundArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Root fidelity of the input pair.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<f64>,
    /// Root fidelity of the ancilla pair.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    /// Input copies N.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// Output copies L.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct PurifyArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// JSON file `{"rho1": …, "rho2": …}`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<PathBuf>,
    /// Target overlap of the purifications, in `[0, √F]`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct OptimizeArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// JSON file `{"rho1", "rho2"}` with optional `"upsilon1", "upsilon2"`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<PathBuf>,
    /// [default: general]
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<SearchMode>,
    /// Ancillas when the states file has none [default: blank].
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ancilla: Option<AncillaKind>,
    /// Overlap of purifying ancillas.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// [default: 2]
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
    /// Environment dimension [default: d², or d^(L−N) for purifying ancillas].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    env: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    restarts: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_step: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    step_decay: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    /// CSV file for the per-restart best-so-far traces.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct SweepArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Comma-separated values of f [default: 0, 0.1, …, 0.9].
    #[arg(long, value_delimiter = ',')]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f_grid: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    /// [default: 1]
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// [default: 2]
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    /// [default: csv]
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<OutputFormat>,
}

/// A fully resolved and validated command.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Verify {
        dim: usize,
        trials: u64,
        seed: u64,
        format: OutputFormat,
        out: Option<PathBuf>,
    },
    Bound(BoundInput),
    Purify {
        rho1: DensityMatrix,
        rho2: DensityMatrix,
        phi: f64,
        out: Option<PathBuf>,
    },
    Optimize {
        problem: Box<OptimizeProblem>,
        optimizer: OptimizerConfig,
        out: Option<PathBuf>,
        trace: Option<PathBuf>,
    },
    Sweep {
        f_grid: Vec<f64>,
        phi: f64,
        n_in: usize,
        n_out: usize,
        format: OutputFormat,
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum OptimizeProblem {
    Restricted {
        rho1: DensityMatrix,
        rho2: DensityMatrix,
    },
    General {
        rho1: DensityMatrix,
        rho2: DensityMatrix,
        upsilon1: DensityMatrix,
        upsilon2: DensityMatrix,
        dims: CloningDims,
    },
}

/// Outcome of a command: exit code plus a diagnostic for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn failure(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegeneratePair
            | Error::TargetOutOfRange { .. }
            | Error::IndistinguishablePair(_)
            | Error::Consistency(_)
            | Error::Decomposition(_) => Self::failure(e.to_string()),
            _ => Self::usage(e.to_string()),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = resolve(cli.command).and_then(|cfg| execute(&cfg, stdout, stderr));
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> CmdResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("malformed {what} {}: {e}", path.display())))
}

/// Overlays the flags that were given onto the config file's values.
fn merge<A: Serialize + DeserializeOwned>(flags: &A, config: Option<&Path>) -> CmdResult<A> {
    let mut base = match config {
        Some(path) => match read_json::<serde_json::Value>(path, "config")? {
            serde_json::Value::Object(map) => map,
            _ => return Err(Failure::usage("config must be a JSON object")),
        },
        None => serde_json::Map::new(),
    };
    let over = serde_json::to_value(flags).map_err(|e| Failure::usage(e.to_string()))?;
    if let serde_json::Value::Object(map) = over {
        base.extend(map);
    }
    serde_json::from_value(serde_json::Value::Object(base)).map_err(|e| Failure::usage(format!("invalid config: {e}")))
}

fn required<T>(v: Option<T>, flag: &str) -> CmdResult<T> {
    v.ok_or_else(|| Failure::usage(format!("missing --{flag}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StatesFile {
    rho1: DensityMatrix,
    rho2: DensityMatrix,
    #[serde(default)]
    upsilon1: Option<DensityMatrix>,
    #[serde(default)]
    upsilon2: Option<DensityMatrix>,
}

fn read_states(path: &Path) -> CmdResult<StatesFile> {
    let s: StatesFile = read_json(path, "states file")?;
    if s.rho1.dim() != s.rho2.dim() {
        return Err(Error::DimMismatch {
            expected: s.rho1.dim(),
            got: s.rho2.dim(),
        }
        .into());
    }
    Ok(s)
}

/// Resolves flags and config into a validated [`RunConfig`].
fn resolve(command: Command) -> CmdResult<RunConfig> {
    match command {
        Command::Verify(a) => {
            let a: VerifyArgs = merge(&a, a.config.as_deref())?;
            let dim = required(a.dim, "dim")?;
            if !(2..=6).contains(&dim) {
                return Err(Failure::usage(format!("--dim must lie in 2..=6, got {dim}")));
            }
            let trials = a.trials.unwrap_or(10_000);
            if trials == 0 {
                return Err(Failure::usage("--trials must be at least 1"));
            }
            Ok(RunConfig::Verify {
                dim,
                trials,
                seed: a.seed.unwrap_or(0),
                format: a.format.unwrap_or(OutputFormat::Json),
                out: a.out,
            })
        }
        Command::Bound(a) => {
            let a: BoundArgs = merge(&a, a.config.as_deref())?;
            let input = BoundInput::new(
                required(a.f, "f")?,
                required(a.phi, "phi")?,
                required(a.n, "n")?,
                required(a.l, "l")?,
            )
            .map_err(|e| Failure::usage(e.to_string()))?;
            Ok(RunConfig::Bound(input))
        }
        Command::Purify(a) => {
            let a: PurifyArgs = merge(&a, a.config.as_deref())?;
            let phi = required(a.phi, "phi")?;
            if !(0.0..=1.0).contains(&phi) {
                return Err(Failure::usage(format!("--phi must lie in [0, 1], got {phi}")));
            }
            let s = read_states(&required(a.states, "states")?)?;
            Ok(RunConfig::Purify {
                rho1: s.rho1,
                rho2: s.rho2,
                phi,
                out: a.out,
            })
        }
        Command::Optimize(a) => resolve_optimize(merge(&a, a.config.as_deref())?),
        Command::Sweep(a) => {
            let a: SweepArgs = merge(&a, a.config.as_deref())?;
            let phi = required(a.phi, "phi")?;
            let (n_in, n_out) = (a.n.unwrap_or(1), a.l.unwrap_or(2));
            let f_grid = a.f_grid.unwrap_or_else(|| (0..10).map(|k| k as f64 / 10.0).collect());
            if f_grid.is_empty() {
                return Err(Failure::usage("--f-grid is empty"));
            }
            for &f in &f_grid {
                // f = 1 passes here and fails later as a degenerate pair
                BoundInput::new(f, phi, n_in, n_out).map_err(|e| Failure::usage(e.to_string()))?;
            }
            Ok(RunConfig::Sweep {
                f_grid,
                phi,
                n_in,
                n_out,
                format: a.format.unwrap_or(OutputFormat::Csv),
                out: a.out,
            })
        }
    }
}

fn resolve_optimize(a: OptimizeArgs) -> CmdResult<RunConfig> {
    let defaults = OptimizerConfig::default();
    let optimizer = OptimizerConfig {
        restarts: a.restarts.unwrap_or(defaults.restarts),
        iterations: a.iterations.unwrap_or(defaults.iterations),
        initial_step: a.initial_step.unwrap_or(defaults.initial_step),
        step_decay: a.step_decay.unwrap_or(defaults.step_decay),
        seed: a.seed.unwrap_or(0),
        tol: a.tol.unwrap_or(defaults.tol),
    };
    optimizer.validate()?;
    let s = read_states(&required(a.states, "states")?)?;
    let d = s.rho1.dim();
    let problem = match a.mode.unwrap_or(SearchMode::General) {
        SearchMode::Restricted => {
            if a.n.is_some_and(|n| n != 1) || a.l.is_some_and(|l| l != 2) || a.env.is_some() {
                return Err(Failure::usage("restricted mode is 1 → 2 without environment"));
            }
            if d > 4 {
                return Err(Failure::usage(format!("restricted mode needs d ≤ 4, got {d}")));
            }
            OptimizeProblem::Restricted {
                rho1: s.rho1,
                rho2: s.rho2,
            }
        }
        SearchMode::General => {
            let (n_in, n_out) = (a.n.unwrap_or(1), a.l.unwrap_or(2));
            if n_in < 1 || n_out <= n_in {
                return Err(Failure::usage(format!("need L > N ≥ 1, got N = {n_in}, L = {n_out}")));
            }
            let extra = CloningDims::new(d, n_in, n_out, 1)?.ancilla_dim()?;
            let (upsilon1, upsilon2, env) = match (s.upsilon1, s.upsilon2) {
                (Some(u1), Some(u2)) => {
                    if a.ancilla.is_some() || a.phi.is_some() {
                        return Err(Failure::usage("--ancilla/--phi conflict with ancillas given in the states file"));
                    }
                    let env = a.env.unwrap_or(u1.dim() / extra);
                    if u1.dim() != extra * env || u2.dim() != u1.dim() {
                        return Err(Failure::usage(format!(
                            "ancilla dimensions {} and {} do not match d^(L−N)·env = {}",
                            u1.dim(),
                            u2.dim(),
                            extra * env
                        )));
                    }
                    (u1, u2, env)
                }
                (None, None) => match a.ancilla.unwrap_or(AncillaKind::Blank) {
                    AncillaKind::Blank => {
                        if a.phi.is_some() {
                            return Err(Failure::usage("--phi only applies to purifying ancillas"));
                        }
                        let env = a.env.unwrap_or(d * d);
                        let dims = CloningDims::new(d, n_in, n_out, env)?;
                        let blank = DensityMatrix::basis(dims.ancilla_dim()?, 0)?;
                        (blank.clone(), blank, env)
                    }
                    AncillaKind::Purifying => {
                        if let Some(phi) = a.phi {
                            if !(0.0..=1.0).contains(&phi) {
                                return Err(Failure::usage(format!("--phi must lie in [0, 1], got {phi}")));
                            }
                        }
                        let setup = CloningSetup::purifying_identity(s.rho1.clone(), s.rho2.clone(), n_in, n_out, a.phi)?;
                        let env = setup.dims().env_dim;
                        if a.env.is_some_and(|e| e != env) {
                            return Err(Failure::usage(format!("purifying ancillas need --env {env}")));
                        }
                        (setup.upsilon1().clone(), setup.upsilon2().clone(), env)
                    }
                },
                _ => return Err(Failure::usage("states file must give both upsilon1 and upsilon2 or neither")),
            };
            let dims = CloningDims::new(d, n_in, n_out, env)?;
            dims.total()?;
            OptimizeProblem::General {
                rho1: s.rho1,
                rho2: s.rho2,
                upsilon1,
                upsilon2,
                dims,
            }
        }
    };
    Ok(RunConfig::Optimize {
        problem: Box::new(problem),
        optimizer,
        out: a.out,
        trace: a.trace,
    })
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> CmdResult<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> CmdResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::failure(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Serialize)]
struct PurifyReport {
    env_dim: usize,
    y1: VectorDoc,
    y2: VectorDoc,
    verification: PurifyVerification,
}

#[derive(Serialize)]
struct PurifyVerification {
    target_overlap: f64,
    achieved_overlap: f64,
    overlap_error: f64,
    /// Frobenius norm of `Tr_E |Y_j⟩⟨Y_j| − ρ_j`.
    marginal_residual1: f64,
    marginal_residual2: f64,
}

fn marginal_residual(y: &PureState, rho: &DensityMatrix, env: usize) -> CmdResult<f64> {
    let dims = DimSpec::new(vec![rho.dim(), env])?;
    let marginal = y.density().partial_trace(&dims, &[0])?;
    Ok(frobenius(&(marginal.op() - rho.op())))
}

/// Runs a resolved command.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult<()> {
    match cfg {
        RunConfig::Verify {
            dim,
            trials,
            seed,
            format,
            out,
        } => {
            let report = verify_inequalities(*dim, *trials, *seed)?;
            let bytes = match format {
                OutputFormat::Json => to_json(&report)?,
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    report.write_csv(&mut buf)?;
                    buf
                }
            };
            emit(&bytes, out.as_deref(), stdout)?;
            if report.violations > 0 {
                return Err(Failure::failure(format!(
                    "{} inequality violations, max slack {}",
                    report.violations,
                    fmt_sig17(report.max_slack_violation)
                )));
            }
            Ok(())
        }
        RunConfig::Bound(input) => {
            let value = lower_bound(input)?;
            emit(format!("{}\n", fmt_sig17(value)).as_bytes(), None, stdout)
        }
        RunConfig::Purify { rho1, rho2, phi, out } => {
            let (y1, y2) = purifications_with_overlap(rho1, rho2, *phi)?;
            let env = rho1.dim();
            let achieved = y1.inner(&y2)?.norm();
            let report = PurifyReport {
                env_dim: env,
                y1: VectorDoc::from_vector(y1.amplitudes()),
                y2: VectorDoc::from_vector(y2.amplitudes()),
                verification: PurifyVerification {
                    target_overlap: *phi,
                    achieved_overlap: achieved,
                    overlap_error: (achieved - phi).abs(),
                    marginal_residual1: marginal_residual(&y1, rho1, env)?,
                    marginal_residual2: marginal_residual(&y2, rho2, env)?,
                },
            };
            emit(&to_json(&report)?, out.as_deref(), stdout)
        }
        RunConfig::Optimize {
            problem,
            optimizer,
            out,
            trace,
        } => {
            let result = match problem.as_ref() {
                OptimizeProblem::Restricted { rho1, rho2 } => restricted_cloner_search(rho1, rho2, optimizer)?,
                OptimizeProblem::General {
                    rho1,
                    rho2,
                    upsilon1,
                    upsilon2,
                    dims,
                } => minimize_relative_error(rho1, rho2, upsilon1, upsilon2, *dims, optimizer)?,
            };
            let _ = writeln!(
                stderr,
                "best_r {} bound {} gap {} ({} evaluations)",
                fmt_sig17(result.best_r),
                fmt_sig17(result.bound),
                fmt_sig17(result.gap),
                result.evaluations
            );
            emit(&to_json(&result)?, out.as_deref(), stdout)?;
            if let Some(path) = trace {
                let mut buf = Vec::new();
                search::write_trace_csv(&result, &mut buf)?;
                emit(&buf, Some(path), stdout)?;
            }
            if !result.is_sound() {
                return Err(Failure::failure(format!(
                    "soundness violated: best_r {} below bound {}",
                    fmt_sig17(result.best_r),
                    fmt_sig17(result.bound)
                )));
            }
            Ok(())
        }
        RunConfig::Sweep {
            f_grid,
            phi,
            n_in,
            n_out,
            format,
            out,
        } => {
            let rows = sweep_bound(f_grid, *phi, *n_in, *n_out)?;
            let bytes = match format {
                OutputFormat::Json => to_json(&rows)?,
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    search::write_sweep_csv(&rows, &mut buf)?;
                    buf
                }
            };
            emit(&bytes, out.as_deref(), stdout)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("clonebound").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bound_examples() {
        let (code, out, _) = call(&["bound", "--f", "0.6", "--phi", "1", "--n", "1", "--l", "2"]);
        assert_eq!(code, 0);
        let v: f64 = out.trim().parse().unwrap();
        assert!((v - 0.2913025467434841).abs() < 1e-12);
        let (code, out, _) = call(&["bound", "--f", "0.6", "--phi", "0.6", "--n", "1", "--l", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim().parse::<f64>().unwrap(), 0.0);
        let (code, out, err) = call(&["bound", "--f", "1", "--phi", "1", "--n", "1", "--l", "2"]);
        assert_eq!((code, out.as_str()), (1, ""));
        assert!(!err.is_empty());
        assert_eq!(call(&["bound", "--f", "1.5", "--phi", "1", "--n", "1", "--l", "2"]).0, 2);
        assert_eq!(call(&["bound", "--f", "0.5", "--phi", "1", "--n", "2", "--l", "2"]).0, 2);
        assert_eq!(call(&["bound", "--f", "0.5"]).0, 2);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "--dim", "1"]).0, 2);
        assert_eq!(call(&["verify", "--dim", "2", "--trials", "0"]).0, 2);
        assert_eq!(call(&["verify", "--dim", "two"]).0, 2);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(&cfg, r#"{"f": 0.6, "phi": 0.6, "n": 1, "l": 2}"#).unwrap();
        let cfg = cfg.to_str().unwrap();
        let (code, out, _) = call(&["bound", "--config", cfg]);
        assert_eq!((code, out.trim()), (0, fmt_sig17(0.0).as_str()));
        let (code, out, _) = call(&["bound", "--config", cfg, "--phi", "1"]);
        assert_eq!(code, 0);
        assert!((out.trim().parse::<f64>().unwrap() - 0.2913025467434841).abs() < 1e-12);

        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, r#"{"f": 0.6, "phii": 1}"#).unwrap();
        assert_eq!(call(&["bound", "--config", bad.to_str().unwrap()]).0, 2);
        std::fs::write(&bad, "{not json").unwrap();
        assert_eq!(call(&["bound", "--config", bad.to_str().unwrap()]).0, 2);
    }

    #[test]
    fn sweep_defaults_to_csv() {
        let (code, out, _) = call(&["sweep", "--phi", "1", "--f-grid", "0.1,0.5"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        assert_eq!(call(&["sweep", "--phi", "1", "--f-grid", "0.5,1"]).0, 1);
    }
}
