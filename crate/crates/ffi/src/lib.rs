//! C ABI over `unitary_forms`. Rings and reports are opaque heap handles;
//! every call returns a status code and `uf_last_error` describes the last
//! failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use serde_json::json;
use unitary_forms::arithmetic::{hilbert_symbol, Place};
use unitary_forms::cli::parse_ring;
use unitary_forms::genus_pipeline::{genus_size_with_budget, OrderSpec};
use unitary_forms::isometry_engine::verify_gen_by_reflections;
use unitary_forms::quadratic_space::{brute_force_classify, AlgMatrix, Flavor, QuadClass};
use unitary_forms::unitary_algebra::UnitaryRing;
use unitary_forms::Error;

pub const UF_OK: i32 = 0;
pub const UF_VERDICT_FAIL: i32 = 1;
pub const UF_USAGE: i32 = 2;
pub const UF_BUDGET: i32 = 3;
pub const UF_NULL_POINTER: i32 = 4;
pub const UF_INVALID_UTF8: i32 = 5;

pub const UF_VERDICT_INFO: i32 = 0;
pub const UF_VERDICT_PASS: i32 = 1;
pub const UF_VERDICT_FAILED: i32 = 2;

/// A unitary ring (A, σ, u, Λ).
pub struct UfRing {
    inner: Arc<UnitaryRing>,
}

/// A JSON report with its verdict.
pub struct UfReport {
    json: CString,
    verdict: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn lib_error(e: &Error) -> i32 {
    set_error(&e.to_string());
    match e {
        Error::BudgetExceeded(_) | Error::PrecisionLoss(_) => UF_BUDGET,
        _ => UF_USAGE,
    }
}

/// Runs `f`, turning panics into `UF_USAGE`.
fn guard(f: impl FnOnce() -> i32) -> i32 {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            UF_USAGE
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, i32> {
    if s.is_null() {
        set_error("null pointer");
        return Err(UF_NULL_POINTER);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("invalid UTF-8");
        UF_INVALID_UTF8
    })
}

unsafe fn put_report(out: *mut *mut UfReport, value: serde_json::Value, verdict: i32) -> i32 {
    let text = serde_json::to_string(&value).expect("report serializes");
    let json = CString::new(text).expect("json has no nul bytes");
    *out = Box::into_raw(Box::new(UfReport { json, verdict }));
    if verdict == UF_VERDICT_FAILED {
        UF_VERDICT_FAIL
    } else {
        UF_OK
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn uf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn uf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a ring by name (F3, F9, M2F3, M2F3-symplectic, F5xF5, Z9, Z(3,5), ...).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uf_ring_parse(name: *const c_char, out: *mut *mut UfRing) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("null pointer");
            return UF_NULL_POINTER;
        }
        let name = match read_str(name) {
            Ok(s) => s,
            Err(c) => return c,
        };
        match parse_ring(name) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(UfRing { inner: r }));
                UF_OK
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// # Safety
/// `ring` must come from `uf_ring_parse` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn uf_ring_free(ring: *mut UfRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Unimodular quadratic classes of rank `rank`.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uf_classify(ring: *const UfRing, rank: usize, budget: u64, out: *mut *mut UfReport) -> i32 {
    guard(|| {
        if ring.is_null() || out.is_null() {
            set_error("null pointer");
            return UF_NULL_POINTER;
        }
        let r = &(*ring).inner;
        match brute_force_classify(r, rank, Flavor::Quadratic, true, budget) {
            Ok(list) => {
                let classes: Vec<_> = list
                    .classes
                    .iter()
                    .map(|c| json!({"gram": c.representative[0].format(&r.algebra), "orbit_size": c.orbit_size}))
                    .collect();
                let v = json!({"ring": r.base().name(), "rank": rank, "class_count": classes.len(), "classes": classes});
                put_report(out, v, UF_VERDICT_INFO)
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// Compares O′ with Δ⁻¹({0, ξ}) for ⟨1, …, 1⟩ of rank `rank`.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uf_verify_reflections(
    ring: *const UfRing,
    rank: usize,
    budget: u64,
    out: *mut *mut UfReport,
) -> i32 {
    guard(|| {
        if ring.is_null() || out.is_null() {
            set_error("null pointer");
            return UF_NULL_POINTER;
        }
        let r = &(*ring).inner;
        let q = match QuadClass::from_gram(r.clone(), AlgMatrix::identity(&r.algebra, rank)) {
            Ok(q) => q,
            Err(e) => return lib_error(&e),
        };
        match verify_gen_by_reflections(&q, budget) {
            Ok(rep) => {
                let verdict = if rep.passed() { UF_VERDICT_PASS } else { UF_VERDICT_FAILED };
                put_report(out, serde_json::to_value(&rep).expect("serializes"), verdict)
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// Genus size for an order spec given as TOML text.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uf_genus_from_toml(toml: *const c_char, budget: u64, out: *mut *mut UfReport) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("null pointer");
            return UF_NULL_POINTER;
        }
        let text = match read_str(toml) {
            Ok(s) => s,
            Err(c) => return c,
        };
        let run = || -> unitary_forms::Result<_> {
            let spec = OrderSpec::from_toml(text)?;
            let ring = spec.build()?;
            let q = spec.form(&ring, None)?;
            genus_size_with_budget(&spec, &q, budget)
        };
        match run() {
            Ok(rep) => {
                let verdict = if rep.size.is_some() { UF_VERDICT_PASS } else { UF_VERDICT_INFO };
                put_report(out, serde_json::to_value(&rep).expect("serializes"), verdict)
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// (a, b)_p for nonzero integers; `p = 0` selects the real place.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uf_hilbert_symbol(a: i64, b: i64, p: u64, out: *mut i32) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("null pointer");
            return UF_NULL_POINTER;
        }
        let place = if p == 0 { Place::Infinity } else { Place::Prime(p) };
        let to_q = |x: i64| num_rational::BigRational::from_integer(x.into());
        match hilbert_symbol(&to_q(a), &to_q(b), place) {
            Ok(s) => {
                *out = i32::from(s);
                UF_OK
            }
            Err(e) => lib_error(&e),
        }
    })
}

/// JSON text owned by the report.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn uf_report_json(report: *const UfReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    (*report).json.as_ptr()
}

/// One of `UF_VERDICT_INFO`, `UF_VERDICT_PASS`, `UF_VERDICT_FAILED`; −1 for NULL.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn uf_report_verdict(report: *const UfReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    (*report).verdict
}

/// # Safety
/// `report` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn uf_report_free(report: *mut UfReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
