//! C ABI for `qboole`.
//!
//! Every fallible function returns a [`QbStatus`]. On failure a message is
//! available from [`qb_last_error_message`] on the same thread. Strings
//! handed out by the library are owned by the caller and released with
//! [`qb_string_free`]; handles are released with their matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use qboole::audit::{self, AuditConfig, AuditReport, Profile};
use qboole::combinatorics::{stirling1, stirling1_unsigned, stirling2};
use qboole::padic::{witt_check, WittParams};
use qboole::{Construction, Error, Family, FamilyId, MultiPoly, Rational, Var};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    UnknownFamily = 4,
    UnsupportedOrder = 5,
    UnknownConstruction = 6,
    InvalidPrime = 7,
    QNotCongruent = 8,
    PrecisionOutOfRange = 9,
    SumTooLarge = 10,
    NotPadicUnit = 11,
    Internal = 99,
}

/// Family codes accepted by `family` parameters.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbFamily {
    Euler = 0,
    BooleClassical = 1,
    QbooleFirst = 2,
    QbooleSecond = 3,
}

/// Construction codes accepted by `construction` parameters.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbConstruction {
    Series = 0,
    StirlingSum = 1,
    Integral = 2,
}

/// Audit profile codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbProfile {
    Quick = 0,
    Full = 1,
}

/// Stirling number kinds.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbStirling {
    FirstSigned = 0,
    FirstUnsigned = 1,
    Second = 2,
}

/// Opaque polynomial in `x`, `lambda`, `q` with rational coefficients.
pub struct QbPoly(MultiPoly);

/// Opaque audit report.
pub struct QbReport(AuditReport);

/// Result of a p-adic integral check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QbWittResult {
    pub pass: bool,
    /// Residue of the fermionic sum as a caller-owned decimal string.
    pub integral: *mut c_char,
    /// Residue of the closed form as a caller-owned decimal string.
    pub polynomial: *mut c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(QbStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownFamily(_) => QbStatus::UnknownFamily,
            Error::UnsupportedOrder { .. } | Error::InvalidOrder(_) => QbStatus::UnsupportedOrder,
            Error::UnknownConstruction(_) => QbStatus::UnknownConstruction,
            Error::InvalidPrime(_) => QbStatus::InvalidPrime,
            Error::QNotCongruent { .. } => QbStatus::QNotCongruent,
            Error::PrecisionTooHigh { .. } | Error::ZeroPrecision => QbStatus::PrecisionOutOfRange,
            Error::SumTooLarge { .. } => QbStatus::SumTooLarge,
            Error::NotPadicUnit(_) => QbStatus::NotPadicUnit,
            _ => QbStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(QbStatus::InvalidArgument, msg.into())
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QbStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QbStatus::Internal
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(QbStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QbStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn family(code: u32) -> Result<Family, Failure> {
    Ok(match code {
        0 => Family::Euler,
        1 => Family::BooleClassical,
        2 => Family::QBooleFirst,
        3 => Family::QBooleSecond,
        _ => return Err(Failure(QbStatus::UnknownFamily, format!("unknown family code {code}"))),
    })
}

fn construction(code: u32) -> Result<Construction, Failure> {
    Ok(match code {
        0 => Construction::BySeries,
        1 => Construction::ByStirlingSum,
        2 => Construction::ByIntegral,
        _ => {
            return Err(Failure(
                QbStatus::UnknownConstruction,
                format!("unknown construction code {code}"),
            ))
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Computes the degree-`n` member of a family of order `order`.
///
/// `family_code` is a [`QbFamily`] value and `construction_code` a [`QbConstruction`]
/// value. On success `*out` receives a new handle.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_family_value(
    family_code: u32,
    order: u32,
    n: u32,
    construction_code: u32,
    out: *mut *mut QbPoly,
) -> QbStatus {
    guard(|| {
        non_null(out, "out")?;
        let id = FamilyId::new(family(family_code)?, order)?;
        let value = qboole::euler_boole::family_value(id, n as usize, construction(construction_code)?)?;
        *out = Box::into_raw(Box::new(QbPoly(value)));
        Ok(())
    })
}

/// Canonical plain-text rendering, e.g. `x^2 - x*lambda + 1/2*lambda*q`.
///
/// # Safety
/// `poly` must be a live handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_poly_render(poly: *const QbPoly, out: *mut *mut c_char) -> QbStatus {
    guard(|| {
        non_null(poly, "poly")?;
        non_null(out, "out")?;
        *out = into_c_string((*poly).0.render());
        Ok(())
    })
}

/// LaTeX rendering.
///
/// # Safety
/// `poly` must be a live handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_poly_render_latex(poly: *const QbPoly, out: *mut *mut c_char) -> QbStatus {
    guard(|| {
        non_null(poly, "poly")?;
        non_null(out, "out")?;
        *out = into_c_string((*poly).0.render_latex());
        Ok(())
    })
}

/// Evaluates at rationals given as strings such as `"3"` or `"-1/2"`.
/// The exact result is written to `*out` in the same form.
///
/// # Safety
/// `poly` must be a live handle, the inputs NUL-terminated strings and
/// `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_poly_eval(
    poly: *const QbPoly,
    x: *const c_char,
    lambda: *const c_char,
    q: *const c_char,
    out: *mut *mut c_char,
) -> QbStatus {
    guard(|| {
        non_null(poly, "poly")?;
        non_null(out, "out")?;
        let mut at = std::collections::BTreeMap::new();
        for (var, p, name) in [(Var::X, x, "x"), (Var::Lambda, lambda, "lambda"), (Var::Q, q, "q")] {
            let s = read_str(p, name)?;
            let r = Rational::from_str(s.trim()).map_err(|_| invalid(format!("`{name}` = {s:?} is not a rational")))?;
            at.insert(var, r);
        }
        let value = (*poly).0.eval(&at)?;
        *out = into_c_string(qboole::rational::render(&value));
        Ok(())
    })
}

/// Writes whether two polynomials are identical.
///
/// # Safety
/// Both handles must be live and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_poly_equal(a: *const QbPoly, b: *const QbPoly, out: *mut bool) -> QbStatus {
    guard(|| {
        non_null(a, "a")?;
        non_null(b, "b")?;
        non_null(out, "out")?;
        *out = (*a).0 == (*b).0;
        Ok(())
    })
}

/// # Safety
/// `poly` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_poly_free(poly: *mut QbPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Stirling number as a decimal string.
///
/// # Safety
/// `out` must be valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_stirling(kind: u32, n: i64, k: i64, out: *mut *mut c_char) -> QbStatus {
    guard(|| {
        non_null(out, "out")?;
        let v = match kind {
            0 => stirling1(n, k)?,
            1 => stirling1_unsigned(n, k)?,
            2 => stirling2(n, k)?,
            _ => return Err(invalid(format!("unknown stirling kind {kind}"))),
        };
        *out = into_c_string(v.to_string());
        Ok(())
    })
}

/// Runs the identity audit.
///
/// # Safety
/// `out` must be valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_audit_run(
    profile: u32,
    include_printed_variants: bool,
    seed: u64,
    out: *mut *mut QbReport,
) -> QbStatus {
    guard(|| {
        non_null(out, "out")?;
        let profile = match profile {
            0 => Profile::Quick,
            1 => Profile::Full,
            _ => return Err(invalid(format!("unknown profile code {profile}"))),
        };
        let mut config = AuditConfig::new(profile);
        config.include_printed_variants = include_printed_variants;
        config.seed = seed;
        *out = Box::into_raw(Box::new(QbReport(audit::run_suite(&config)?)));
        Ok(())
    })
}

/// Report as JSON. With `timing` false the output is byte-for-byte
/// reproducible for a fixed seed.
///
/// # Safety
/// `report` must be a live handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_report_json(report: *const QbReport, timing: bool, out: *mut *mut c_char) -> QbStatus {
    guard(|| {
        non_null(report, "report")?;
        non_null(out, "out")?;
        *out = into_c_string((*report).0.to_json(timing));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_report_all_asserted_pass(report: *const QbReport, out: *mut bool) -> QbStatus {
    guard(|| {
        non_null(report, "report")?;
        non_null(out, "out")?;
        *out = (*report).0.all_asserted_pass;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_report_free(report: *mut QbReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Compares the fermionic p-adic integral of a family's integrand with
/// its closed form mod `p^precision`, summing to depth `p^depth`.
///
/// The strings in `*out` are owned by the caller.
///
/// # Safety
/// `out` must be valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn qb_padic_witt_check(
    family_code: u32,
    order: u32,
    n: u32,
    x: i64,
    lambda: i64,
    q: i64,
    p: u64,
    depth: u32,
    precision: u32,
    literal: bool,
    out: *mut QbWittResult,
) -> QbStatus {
    guard(|| {
        non_null(out, "out")?;
        let params = WittParams {
            family: FamilyId::new(family(family_code)?, order)?,
            n: n as usize,
            x,
            lambda,
            q,
            p,
            depth,
            precision,
            literal,
        };
        let outcome = witt_check(&params)?;
        *out = QbWittResult {
            pass: outcome.pass,
            integral: into_c_string(outcome.integral.residue().to_string()),
            polynomial: into_c_string(outcome.polynomial.residue().to_string()),
        };
        Ok(())
    })
}

/// Releases the strings inside a [`QbWittResult`] and nulls them.
///
/// # Safety
/// `result` must be null or point to a result filled by this library.
#[no_mangle]
pub unsafe extern "C" fn qb_witt_result_clear(result: *mut QbWittResult) {
    if let Some(r) = result.as_mut() {
        qb_string_free(r.integral);
        qb_string_free(r.polynomial);
        r.integral = ptr::null_mut();
        r.polynomial = ptr::null_mut();
    }
}
