//! C interface to `clonebound`.
//!
//! Every fallible function returns a [`CbStatus`]; on anything but
//! `CB_STATUS_OK` a message is available from [`cb_last_error`] on the same
//! thread. Density matrices are opaque handles created by `cb_density_*` and
//! released with [`cb_density_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use clonebound::clone::{lower_bound, BoundInput};
use clonebound::matkernel::{c64, ComplexMatrix, MAX_DIM};
use clonebound::search::verify_inequalities;
use clonebound::states::{angle, fidelity, random_density, DensityMatrix};
use clonebound::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad dimension, size or scalar argument.
    InvalidArgument = 2,
    /// Matrix is not a valid density operator.
    InvalidState = 3,
    /// The two states have root fidelity 1.
    DegeneratePair = 4,
    TargetOutOfRange = 5,
    NumericalFailure = 6,
    /// A panic was caught; the library state is unaffected.
    Internal = 7,
}

/// Opaque density-matrix handle.
pub struct CbDensity(DensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &Error) -> CbStatus {
    match err {
        Error::NotHermitian(_)
        | Error::NotPsd(_)
        | Error::BadTrace(_)
        | Error::NonFinite
        | Error::NotNormalized(_) => CbStatus::InvalidState,
        Error::DegeneratePair | Error::IndistinguishablePair(_) => CbStatus::DegeneratePair,
        Error::TargetOutOfRange { .. } => CbStatus::TargetOutOfRange,
        Error::Decomposition(_) | Error::Consistency(_) => CbStatus::NumericalFailure,
        _ => CbStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (CbStatus, String)>) -> CbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CbStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (CbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CbStatus, String) {
    (CbStatus::NullPointer, format!("{what} is null"))
}

/// Message describing the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a density matrix from `dim * dim` row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must point to `dim * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_density_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut CbDensity,
) -> CbStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("entries"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if dim == 0 || dim > MAX_DIM {
            return Err(lib_err(Error::OutOfRange {
                what: "dim",
                value: dim as f64,
            }));
        }
        let len = dim * dim;
        let re = std::slice::from_raw_parts(re, len);
        let im = std::slice::from_raw_parts(im, len);
        let op = ComplexMatrix::from_row_iterator(dim, dim, re.iter().zip(im).map(|(&a, &b)| c64(a, b)));
        let rho = DensityMatrix::new(op).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CbDensity(rho)));
        Ok(())
    })
}

/// Random density matrix of the given rank, deterministic in `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_density_random(
    dim: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut CbDensity,
) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if dim > MAX_DIM {
            return Err(lib_err(Error::DimTooLarge(dim)));
        }
        let rho = random_density(dim, rank, seed).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(CbDensity(rho)));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `rho` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cb_density_free(rho: *mut CbDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Dimension of the state, 0 for a null handle.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cb_density_dim(rho: *const CbDensity) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// Copies the row-major entries into `re` and `im`, each of length `len = dim * dim`.
///
/// # Safety
/// `rho` must be a live handle; `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn cb_density_entries(
    rho: *const CbDensity,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> CbStatus {
    guard(|| {
        let rho = rho.as_ref().ok_or_else(|| null("rho"))?;
        if re.is_null() || im.is_null() {
            return Err(null("buffer"));
        }
        let d = rho.0.dim();
        if len != d * d {
            return Err((CbStatus::InvalidArgument, format!("buffer length {len}, need {}", d * d)));
        }
        let re = std::slice::from_raw_parts_mut(re, len);
        let im = std::slice::from_raw_parts_mut(im, len);
        let op = rho.0.op();
        for i in 0..d {
            for j in 0..d {
                re[i * d + j] = op[(i, j)].re;
                im[i * d + j] = op[(i, j)].im;
            }
        }
        Ok(())
    })
}

unsafe fn pair<'a>(
    a: *const CbDensity,
    b: *const CbDensity,
    out: *mut f64,
) -> Result<(&'a DensityMatrix, &'a DensityMatrix), (CbStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let a = a.as_ref().ok_or_else(|| null("first state"))?;
    let b = b.as_ref().ok_or_else(|| null("second state"))?;
    Ok((&a.0, &b.0))
}

/// Fidelity `F = (Tr|√a √b|)²`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_fidelity(a: *const CbDensity, b: *const CbDensity, out: *mut f64) -> CbStatus {
    guard(|| {
        let (a, b) = pair(a, b, out)?;
        *out = fidelity(a, b).map_err(lib_err)?;
        Ok(())
    })
}

/// Angle `arccos √F`, in `[0, π/2]`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_angle(a: *const CbDensity, b: *const CbDensity, out: *mut f64) -> CbStatus {
    guard(|| {
        let (a, b) = pair(a, b, out)?;
        *out = angle(a, b).map_err(lib_err)?;
        Ok(())
    })
}

/// Lower bound on the relative error of an `n → l` cloner for input root
/// fidelity `f` and ancilla root fidelity `phi`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_lower_bound(f: f64, phi: f64, n: usize, l: usize, out: *mut f64) -> CbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let input = BoundInput::new(f, phi, n, l).map_err(lib_err)?;
        *out = lower_bound(&input).map_err(lib_err)?;
        Ok(())
    })
}

/// Randomized inequality check in dimension `d` (2 to 6). Writes the number of
/// violations and the largest `lhs − rhs` seen.
///
/// # Safety
/// `violations` and `max_slack` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cb_verify_inequalities(
    d: usize,
    trials: u64,
    seed: u64,
    violations: *mut u64,
    max_slack: *mut f64,
) -> CbStatus {
    guard(|| {
        if violations.is_null() || max_slack.is_null() {
            return Err(null("out"));
        }
        let report = verify_inequalities(d, trials, seed).map_err(lib_err)?;
        *violations = report.violations;
        *max_slack = report.max_slack_violation;
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

