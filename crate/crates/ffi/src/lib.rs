//! C ABI over the `hyproots` library.
//!
//! Curves live behind an opaque handle. Every fallible call returns a
//! [`HyprootsStatus`]; on failure the message is available from
//! [`hyproots_last_error_message`] on the same thread. Strings handed out
//! by the library must be released with [`hyproots_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyproots::cli::{Curve, CurveSpec};
use hyproots::config::Config;
use hyproots::desing::desing_at;
use hyproots::reduction::d;
use hyproots::regularity::{gamma_at, smoothness_report};
use hyproots::{Error, Rational};

/// Result of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyprootsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed curve description or rational.
    Parse = 3,
    /// Well-formed input the operation cannot accept.
    Invalid = 4,
    /// The operation needs the other curve mode.
    ModeMismatch = 5,
    /// A numeric step did not converge or could not decide.
    Numeric = 6,
    /// The analysis finished but its hypotheses are not met; outputs are
    /// still written.
    HypothesesUnmet = 7,
    Internal = 8,
    /// A panic was caught at the boundary.
    Panic = 9,
}

/// Opaque curve handle.
pub struct HyprootsCurve {
    curve: Curve,
    cfg: Config,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HyprootsStatus {
    match e {
        Error::Parse(_) | Error::Discontinuous(_) => HyprootsStatus::Parse,
        Error::ModeMismatch(_) => HyprootsStatus::ModeMismatch,
        Error::Invalid(_) | Error::OutsideDomain(_) | Error::Unsupported(_) => HyprootsStatus::Invalid,
        Error::InsufficientSmoothness { .. } | Error::NotHyperbolic(_) => HyprootsStatus::HypothesesUnmet,
        Error::NoConvergence(_)
        | Error::UnresolvedOrder(_)
        | Error::AmbiguousClustering { .. }
        | Error::LiftDidNotConverge(_)
        | Error::DepthExceeded(_)
        | Error::Indeterminate(_) => HyprootsStatus::Numeric,
        Error::Internal(_) | Error::Io(_) => HyprootsStatus::Internal,
    }
}

/// Runs `f`, recording errors and containing panics.
fn guard(f: impl FnOnce() -> Result<HyprootsStatus, (HyprootsStatus, String)>) -> HyprootsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside hyproots".into());
            HyprootsStatus::Panic
        }
    }
}

fn fail(e: Error) -> (HyprootsStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HyprootsStatus, String)> {
    if p.is_null() {
        return Err((HyprootsStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (HyprootsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn curve_ref<'a>(c: *const HyprootsCurve) -> Result<&'a HyprootsCurve, (HyprootsStatus, String)> {
    c.as_ref().ok_or((HyprootsStatus::NullArgument, "curve is null".into()))
}

fn hand_out(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Parses a JSON curve description into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hyproots_curve_from_json(json: *const c_char, out: *mut *mut HyprootsCurve) -> HyprootsStatus {
    guard(|| {
        if out.is_null() {
            return Err((HyprootsStatus::NullArgument, "out is null".into()));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let spec = CurveSpec::from_json(text).map_err(fail)?;
        let curve = spec.curve().map_err(fail)?;
        let cfg = spec.config().map_err(fail)?;
        *out = Box::into_raw(Box::new(HyprootsCurve { curve, cfg }));
        Ok(HyprootsStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `curve` must come from [`hyproots_curve_from_json`] and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn hyproots_curve_free(curve: *mut HyprootsCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Degree of the curve, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hyproots_curve_degree(curve: *const HyprootsCurve) -> u32 {
    curve.as_ref().map_or(0, |c| c.curve.degree() as u32)
}

/// Regularity report over the curve's domain as JSON in `*out_json`.
/// Returns `HypothesesUnmet` with the report still written when the
/// analysis found failed hypotheses.
///
/// # Safety
/// `curve` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hyproots_analyze_json(curve: *const HyprootsCurve, out_json: *mut *mut c_char) -> HyprootsStatus {
    guard(|| {
        if out_json.is_null() {
            return Err((HyprootsStatus::NullArgument, "out_json is null".into()));
        }
        *out_json = ptr::null_mut();
        let h = curve_ref(curve)?;
        let p = h.curve.real().map_err(fail)?;
        let (lo, hi) = p.domain().clone();
        let report = smoothness_report(p, &lo, &hi, &[], &h.cfg).map_err(fail)?;
        let json = serde_json::to_string(&report).map_err(|e| (HyprootsStatus::Internal, e.to_string()))?;
        *out_json = hand_out(json);
        if report.hypotheses_met {
            Ok(HyprootsStatus::Ok)
        } else {
            set_error(report.issues.join("; "));
            Ok(HyprootsStatus::HypothesesUnmet)
        }
    })
}

fn point(num: i64, den: i64) -> Result<Rational, (HyprootsStatus, String)> {
    if den == 0 {
        return Err((HyprootsStatus::Invalid, "zero denominator".into()));
    }
    Ok(Rational::new(num.into(), den.into()))
}

/// `Γ` and `γ` at `t0 = num/den`.
///
/// # Safety
/// `curve` must be a live handle; `big` and `small` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hyproots_gamma_at(
    curve: *const HyprootsCurve,
    num: i64,
    den: i64,
    big: *mut u32,
    small: *mut u32,
) -> HyprootsStatus {
    guard(|| {
        if big.is_null() || small.is_null() {
            return Err((HyprootsStatus::NullArgument, "output pointer is null".into()));
        }
        let h = curve_ref(curve)?;
        let p = h.curve.real().map_err(fail)?;
        let g = gamma_at(p, &point(num, den)?, &h.cfg).map_err(fail)?;
        *big = g.big;
        *small = g.small;
        Ok(HyprootsStatus::Ok)
    })
}

/// Desingularization exponents at `t0 = num/den` (complex mode).
///
/// # Safety
/// `curve` must be a live handle; `n_left` and `n_right` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hyproots_desing_at(
    curve: *const HyprootsCurve,
    num: i64,
    den: i64,
    n_left: *mut u64,
    n_right: *mut u64,
) -> HyprootsStatus {
    guard(|| {
        if n_left.is_null() || n_right.is_null() {
            return Err((HyprootsStatus::NullArgument, "output pointer is null".into()));
        }
        let h = curve_ref(curve)?;
        if h.curve.mode() != hyproots::curves::Mode::Complex {
            return Err((HyprootsStatus::ModeMismatch, "desingularization needs a complex-mode curve".into()));
        }
        let r = desing_at(&h.curve.complexified(), &point(num, den)?, &h.cfg).map_err(fail)?;
        *n_left = r.n_left;
        *n_right = r.n_right;
        Ok(HyprootsStatus::Ok)
    })
}

/// `d(n) = n(n+1)/2 - 1`, the largest total of labels ≥ 2 over reduction
/// trees of degree `n`.
#[no_mangle]
pub extern "C" fn hyproots_d(n: u32) -> u64 {
    d(n as u64)
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hyproots_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hyproots_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
