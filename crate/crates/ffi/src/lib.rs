//! C ABI over the borderfj reduction engine.
//!
//! Handles are opaque and owned by the caller; release them with the matching
//! `*_free` function. Strings returned by the library are released with
//! [`bfj_string_free`]. The last error message is kept per thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use borderfj::fj::{reduce, MatrixStatus, ReduceError, ReduceOptions, ReductionReport, SystemDefinition};
use borderfj::io::{emit_report_string, load, load_str, summarize};
use borderfj::params::degeneracy_locus;
use borderfj::theorem::verify_theorem1;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfjStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Reduce = 4,
    OutOfRange = 5,
    Unavailable = 6,
}

/// Regularity of the final extended matrix.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfjMatrixStatus {
    Regular = 0,
    Singular = 1,
}

/// A parsed system definition.
pub struct BfjSystem {
    def: SystemDefinition,
}

/// The outcome of a reduction.
pub struct BfjReport {
    report: ReductionReport,
    seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let s = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BfjStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(BfjStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|e| {
        set_error(e);
        BfjStatus::InvalidUtf8
    })
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses a system from its text form.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bfj_system_from_str(text: *const c_char, out: *mut *mut BfjSystem) -> BfjStatus {
    clear_error();
    if out.is_null() {
        set_error("null output pointer");
        return BfjStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match load_str(text) {
        Ok(def) => {
            *out = Box::into_raw(Box::new(BfjSystem { def }));
            BfjStatus::Ok
        }
        Err(e) => {
            set_error(e);
            BfjStatus::Parse
        }
    }
}

/// Parses a system from a file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bfj_system_from_file(path: *const c_char, out: *mut *mut BfjSystem) -> BfjStatus {
    clear_error();
    if out.is_null() {
        set_error("null output pointer");
        return BfjStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let path = match read_str(path) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match load(Path::new(path)) {
        Ok(def) => {
            *out = Box::into_raw(Box::new(BfjSystem { def }));
            BfjStatus::Ok
        }
        Err(e) => {
            set_error(e);
            BfjStatus::Parse
        }
    }
}

/// # Safety
/// `system` must come from `bfj_system_from_*` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bfj_system_free(system: *mut BfjSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Runs the reduction. `max_iterations` of 0 selects the default cap.
///
/// # Safety
/// `system` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bfj_reduce(
    system: *const BfjSystem,
    seed: u64,
    max_iterations: u32,
    out: *mut *mut BfjReport,
) -> BfjStatus {
    clear_error();
    if system.is_null() || out.is_null() {
        set_error("null pointer argument");
        return BfjStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let mut opts = ReduceOptions::with_seed(seed);
    if max_iterations > 0 {
        opts.max_iterations = max_iterations as usize;
    }
    match reduce(&(*system).def, &opts) {
        Ok(report) => {
            *out = Box::into_raw(Box::new(BfjReport { report, seed }));
            BfjStatus::Ok
        }
        Err(e @ (ReduceError::Definition(_) | ReduceError::NotQuadratic(_))) => {
            set_error(e);
            BfjStatus::Parse
        }
        Err(e) => {
            set_error(e);
            BfjStatus::Reduce
        }
    }
}

/// # Safety
/// `report` must come from `bfj_reduce` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_free(report: *mut BfjReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_status(report: *const BfjReport) -> BfjMatrixStatus {
    match (*report).report.status {
        MatrixStatus::Regular => BfjMatrixStatus::Regular,
        MatrixStatus::Singular => BfjMatrixStatus::Singular,
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_iteration_count(report: *const BfjReport) -> u32 {
    (*report).report.iteration_count as u32
}

/// Side length of the extended matrix.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_dimension(report: *const BfjReport) -> usize {
    (*report).report.dimension()
}

/// The full JSON report, including the co-vanishing verdict and the degeneracy
/// locus. Returns NULL on failure.
///
/// # Safety
/// `report` must be a live handle. Free the result with `bfj_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_json(report: *const BfjReport) -> *mut c_char {
    clear_error();
    if report.is_null() {
        set_error("null report");
        return ptr::null_mut();
    }
    let r = &*report;
    let zt = ReduceOptions::with_seed(r.seed).zero;
    let verdict = verify_theorem1(&r.report, 20, &zt).ok();
    let degeneracy = degeneracy_locus(&r.report);
    into_c(emit_report_string(&r.report, verdict.as_ref(), Some(&degeneracy)))
}

/// The human-readable summary. Returns NULL on failure.
///
/// # Safety
/// `report` must be a live handle. Free the result with `bfj_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_summary(report: *const BfjReport) -> *mut c_char {
    clear_error();
    if report.is_null() {
        set_error("null report");
        return ptr::null_mut();
    }
    into_c(summarize(&(*report).report))
}

/// Entry `(row, col)` of the inverse extended matrix as a string.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer. Free `*out`
/// with `bfj_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bfj_report_inverse_entry(
    report: *const BfjReport,
    row: usize,
    col: usize,
    out: *mut *mut c_char,
) -> BfjStatus {
    clear_error();
    if report.is_null() || out.is_null() {
        set_error("null pointer argument");
        return BfjStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let Some(inv) = &(*report).report.inverse_extended_matrix else {
        set_error("extended matrix is singular");
        return BfjStatus::Unavailable;
    };
    if row >= inv.rows() || col >= inv.cols() {
        set_error(format!("index ({row}, {col}) outside {}x{}", inv.rows(), inv.cols()));
        return BfjStatus::OutOfRange;
    }
    *out = into_c(inv.get(row, col).to_string());
    BfjStatus::Ok
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn bfj_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or NULL. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn bfj_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
