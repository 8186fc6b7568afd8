//! C ABI over `discrete-bm`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with the
//! matching `*_free` function. Every fallible call returns a [`DbmStatus`];
//! on failure [`dbm_last_error`] describes what went wrong on this thread.
//! Strings returned through `out` parameters are owned by the caller and are
//! released with [`dbm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use discrete_bm::exactnum::{parse_rational, ExtendedExponent};
use discrete_bm::sets::SetExpr;
use discrete_bm::verifiers::{verify, Certificate, TheoremId, Verdict, VerifyError, VerifyRequest};

/// Result of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DbmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Precondition = 4,
    HypothesisFailed = 5,
    Panic = 6,
}

/// Outcome recorded in a certificate.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DbmVerdict {
    HoldsStrict = 0,
    HoldsEqual = 1,
    Violated = 2,
}

/// A finite union of boxes or a finite point set.
pub struct DbmSet(SetExpr);

/// The outcome of one verification.
pub struct DbmCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(DbmStatus, String);

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure(DbmStatus::InvalidInput, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        let status = match e {
            VerifyError::Precondition(_) => DbmStatus::Precondition,
            VerifyError::Hypothesis { .. } => DbmStatus::HypothesisFailed,
            _ => DbmStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DbmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            DbmStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("internal error: {msg}"));
            DbmStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(DbmStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DbmStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(DbmStatus::NullArgument, format!("{name} is null")))
}

fn out_ptr<T>(out: *mut T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(DbmStatus::NullArgument, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dbm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dbm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a set from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_set_from_json(json: *const c_char, out: *mut *mut DbmSet) -> DbmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let s: SetExpr = serde_json::from_str(text(json, "json")?).map_err(Failure::input)?;
        *out = Box::into_raw(Box::new(DbmSet(s)));
        Ok(())
    })
}

/// Ambient dimension of `set`, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle from [`dbm_set_from_json`].
#[no_mangle]
pub unsafe extern "C" fn dbm_set_dim(set: *const DbmSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.dim())
}

/// Number of integer points in `set`, as a decimal string.
///
/// # Safety
/// `set` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_set_lattice_count(set: *const DbmSet, out: *mut *mut c_char) -> DbmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let s = handle(set, "set")?;
        *out = into_c_string(s.0.count_lattice().to_string());
        Ok(())
    })
}

/// Releases a set. Null is ignored.
///
/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dbm_set_free(set: *mut DbmSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

unsafe fn run_verify(
    theorem: *const c_char,
    k: *const DbmSet,
    l: *const DbmSet,
    lambda: *const c_char,
    p: *const c_char,
    dilation: Option<(u32, u32, u32)>,
    out: *mut *mut DbmCertificate,
) -> DbmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let theorem: TheoremId = text(theorem, "theorem")?.parse().map_err(Failure::input)?;
        let k = handle(k, "K")?;
        let l = handle(l, "L")?;
        let lambda = parse_rational(text(lambda, "lambda")?).map_err(Failure::input)?;
        let p: ExtendedExponent = if p.is_null() {
            ExtendedExponent::PosInf
        } else {
            text(p, "p")?.parse().map_err(Failure::input)?
        };
        let mut req = VerifyRequest::new(theorem, k.0.clone(), l.0.clone(), lambda).with_p(p);
        if let Some((m, p, q)) = dilation {
            req = req.with_dilation(m, p, q);
        }
        let cert = verify(&req)?;
        *out = Box::into_raw(Box::new(DbmCertificate(cert)));
        Ok(())
    })
}

/// Checks the set inequality named by `theorem` for `K`, `L` at weight `lambda`.
///
/// `lambda` is a rational such as `"1/3"`. `p` is the mean exponent for
/// `bm_pmean` (`"0"`, `"-1/2"`, `"inf"`, ...); pass null for `inf`.
///
/// # Safety
/// String arguments must be NUL-terminated, set handles live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dbm_verify(
    theorem: *const c_char,
    k: *const DbmSet,
    l: *const DbmSet,
    lambda: *const c_char,
    p: *const c_char,
    out: *mut *mut DbmCertificate,
) -> DbmStatus {
    run_verify(theorem, k, l, lambda, p, None, out)
}

/// The rational-dilation inequality with weights `m/q`, `p/q`.
///
/// # Safety
/// As for [`dbm_verify`].
#[no_mangle]
pub unsafe extern "C" fn dbm_verify_dilation(
    k: *const DbmSet,
    l: *const DbmSet,
    m: u32,
    p: u32,
    q: u32,
    out: *mut *mut DbmCertificate,
) -> DbmStatus {
    let theorem = c"rational_dilation".as_ptr();
    let half = c"1/2".as_ptr();
    run_verify(theorem, k, l, half, ptr::null(), Some((m, p, q)), out)
}

/// Verdict of `cert`. A null handle reads as `Violated`.
///
/// # Safety
/// `cert` must be null or a live certificate handle.
#[no_mangle]
pub unsafe extern "C" fn dbm_certificate_verdict(cert: *const DbmCertificate) -> DbmVerdict {
    match cert.as_ref().map(|c| c.0.verdict) {
        Some(Verdict::HoldsStrict) => DbmVerdict::HoldsStrict,
        Some(Verdict::HoldsEqual) => DbmVerdict::HoldsEqual,
        _ => DbmVerdict::Violated,
    }
}

/// The full certificate as JSON.
///
/// # Safety
/// `cert` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_certificate_to_json(
    cert: *const DbmCertificate,
    out: *mut *mut c_char,
) -> DbmStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let c = handle(cert, "cert")?;
        let json = serde_json::to_string(&c.0).map_err(Failure::input)?;
        *out = into_c_string(json);
        Ok(())
    })
}

/// Releases a certificate. Null is ignored.
///
/// # Safety
/// `cert` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dbm_certificate_free(cert: *mut DbmCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dbm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
