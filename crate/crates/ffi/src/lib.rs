//! C interface to `ominus-core`.
//!
//! Fields and double-coset specs are opaque handles created by `*_new` and
//! released by `*_free`. Every fallible call returns an [`OminusStatus`];
//! results come back through out-pointers. Strings handed out by the library
//! are NUL-terminated JSON or decimal text and must be released with
//! [`ominus_string_free`]. After a failure, [`ominus_last_error_message`]
//! describes it.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ominus_core::groups::sums::trace_distribution_closed;
use ominus_core::groups::{DoubleCosetSpec, Family, Sign};
use ominus_core::kloosterman::kloosterman_sum;
use ominus_core::moments::recursive_moments;
use ominus_core::report::{self, envelope, spec_params};
use ominus_core::verify::verify_all;
use ominus_core::{Error, FieldCtx};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OminusStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Parameters outside the range where a formula holds.
    Domain = 3,
    /// The computation would exceed a size budget.
    Budget = 4,
    /// Two computations that must agree did not.
    Inconsistent = 5,
    Parse = 6,
    /// A bug: the library panicked.
    Internal = 7,
}

/// A finite field GF(2^r) with its modulus and quadratic-form parameter.
pub struct OminusField {
    ctx: FieldCtx,
}

/// A double-coset family member `DC_i^{+-}(n, q)`.
pub struct OminusSpec {
    spec: DoubleCosetSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OminusStatus {
    match e {
        Error::Domain(_) | Error::InvalidSpec(_) => OminusStatus::Domain,
        Error::BudgetExceeded { .. } => OminusStatus::Budget,
        Error::Inconsistent(_) => OminusStatus::Inconsistent,
        Error::Parse(_) => OminusStatus::Parse,
        _ => OminusStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OminusStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            OminusStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            OminusStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal error");
            OminusStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON and decimal text have no NUL").into_raw()
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ominus_version() -> *const c_char {
    static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();
    VERSION.as_ptr().cast()
}

/// Description of the last failure on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ominus_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ominus_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates GF(2^r). `modulus = 0` selects the default irreducible modulus.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn ominus_field_new(r: u32, modulus: u32, out: *mut *mut OminusField) -> OminusStatus {
    guard(|| {
        let ctx = FieldCtx::new(r, (modulus != 0).then_some(modulus))?;
        write(out, Box::into_raw(Box::new(OminusField { ctx })), "out")
    })
}

/// Replaces the quadratic-form parameter (must have trace one).
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ominus_field_set_a_param(field: *mut OminusField, a: u32) -> OminusStatus {
    guard(|| {
        let f = field.as_mut().ok_or(Failure::Null("field"))?;
        let a = f.ctx.element(a)?;
        f.ctx = f.ctx.clone().with_a_param(a)?;
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from [`ominus_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ominus_field_free(field: *mut OminusField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Writes `q`, the modulus bitmask and `a_param`; any out-pointer may be null.
///
/// # Safety
/// `field` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_field_info(
    field: *const OminusField,
    q: *mut u32,
    modulus: *mut u32,
    a_param: *mut u32,
) -> OminusStatus {
    guard(|| {
        let ctx = &deref(field, "field")?.ctx;
        if !q.is_null() {
            q.write(ctx.q());
        }
        if !modulus.is_null() {
            modulus.write(ctx.modulus());
        }
        if !a_param.is_null() {
            a_param.write(ctx.a_param().value());
        }
        Ok(())
    })
}

/// `K_m(lambda; a)` by direct summation, `a != 0`.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_kloosterman(field: *const OminusField, m: u32, a: u32, out: *mut i64) -> OminusStatus {
    guard(|| {
        let ctx = &deref(field, "field")?.ctx;
        let value = kloosterman_sum(ctx, m, ctx.element(a)?)?;
        write(out, value, "out")
    })
}

/// `DC_family^sign(n, q)` over `field`; `sign` is `+1` or `-1`. The spec
/// keeps its own copy of the field.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_spec_new(
    field: *const OminusField,
    family: u8,
    sign: i32,
    n: u32,
    out: *mut *mut OminusSpec,
) -> OminusStatus {
    guard(|| {
        let ctx = deref(field, "field")?.ctx.clone();
        let sign = match sign {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            _ => return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {sign}")).into()),
        };
        let spec = DoubleCosetSpec::new(Family::new(family)?, sign, n, ctx)?;
        write(out, Box::into_raw(Box::new(OminusSpec { spec })), "out")
    })
}

/// # Safety
/// `spec` must be null or a handle from [`ominus_spec_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ominus_spec_free(spec: *mut OminusSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

unsafe fn emit(out: *mut *mut c_char, make: impl FnOnce() -> Result<String, Error>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(ptr::null_mut());
    let text = make()?;
    out.write(to_c_string(text));
    Ok(())
}

/// `|DC|` as a decimal string.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_spec_size(spec: *const OminusSpec, out: *mut *mut c_char) -> OminusStatus {
    guard(|| {
        let spec = &deref(spec, "spec")?.spec;
        emit(out, || Ok(spec.constants().n.to_string()))
    })
}

/// Closed-form trace counts as a JSON object keyed by hex element.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_trace_distribution_json(
    spec: *const OminusSpec,
    out: *mut *mut c_char,
) -> OminusStatus {
    guard(|| {
        let spec = &deref(spec, "spec")?.spec;
        emit(out, || {
            let mut body = spec_params(spec);
            body.insert(
                "trace_distribution".into(),
                report::trace_distribution(&trace_distribution_closed(spec)?),
            );
            Ok(report::render(&envelope("enumerate", body)))
        })
    })
}

/// `C_0..C_{j_max}` of the spec's code as a JSON document.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_weight_prefix_json(
    spec: *const OminusSpec,
    j_max: u32,
    out: *mut *mut c_char,
) -> OminusStatus {
    guard(|| {
        let spec = &deref(spec, "spec")?.spec;
        emit(out, || {
            let prefix = ominus_core::codes::weight_distribution_prefix(spec, j_max)?;
            let mut body = spec_params(spec);
            body.insert("j_max".into(), report::num(j_max));
            body.insert("prefix".into(), report::weight_prefix(&prefix));
            Ok(report::render(&envelope("weights", body)))
        })
    })
}

/// The recursion report for `h = 1..=h_max` as a JSON document.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_recursive_moments_json(
    spec: *const OminusSpec,
    h_max: u32,
    out: *mut *mut c_char,
) -> OminusStatus {
    guard(|| {
        let spec = &deref(spec, "spec")?.spec;
        emit(out, || {
            let rep = recursive_moments(spec, h_max)?;
            Ok(report::render(&envelope("moments", report::recursion_report(&rep))))
        })
    })
}

/// Runs every verification suite for `r <= max_r`; `passed` receives 1 or 0.
///
/// # Safety
/// `out` and `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_verify_all_json(max_r: u32, passed: *mut i32, out: *mut *mut c_char) -> OminusStatus {
    guard(|| {
        if passed.is_null() {
            return Err(Failure::Null("passed"));
        }
        emit(out, || {
            let summary = verify_all(max_r, &BTreeMap::new())?;
            passed.write(summary.passed() as i32);
            Ok(report::render(&envelope("verify-all", summary.to_json())))
        })
    })
}

/// Parses a hex element or modulus such as `"0x13"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ominus_parse_hex(text: *const c_char, out: *mut u32) -> OminusStatus {
    guard(|| {
        if text.is_null() {
            return Err(Failure::Null("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| Error::Parse(e.to_string()))?;
        write(out, ominus_core::field::parse_hex(s)?, "out")
    })
}
