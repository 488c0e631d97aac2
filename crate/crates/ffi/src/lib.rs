//! C interface. Formulas and verdicts are opaque handles owned by the
//! caller and released with the matching `_free` function; strings returned
//! by the library are released with `bqltl_string_free`. Every fallible call
//! returns a `BqltlCode` and leaves a message for `bqltl_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use bqltl_core::formula::{parse, QuantifiedFormula};
use bqltl_core::solver::{solve, validate_witness, Semantics, Status, Verdict, Witness};
use bqltl_core::{Budget, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqltlCode {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Resource = 4,
    InvalidInput = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqltlSemantics {
    Classic = 0,
    Behavioral = 1,
    WeakBehavioral = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BqltlStatus {
    Sat = 0,
    Unsat = 1,
    Unknown = 2,
}

pub struct BqltlFormula(QuantifiedFormula);

pub struct BqltlVerdict(Verdict);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> BqltlCode {
    match e {
        Error::Syntax { .. }
        | Error::NonPrenex { .. }
        | Error::Rebound(_)
        | Error::UnknownVariable(_) => BqltlCode::Parse,
        Error::ResourceExceeded { .. } | Error::Timeout { .. } | Error::AlphabetTooLarge { .. } => {
            BqltlCode::Resource
        }
        _ => BqltlCode::InvalidInput,
    }
}

fn fail(code: BqltlCode, message: &str) -> BqltlCode {
    set_error(message);
    code
}

/// Runs `body`, turning panics into `BqltlCode::Panic`.
fn guard(body: impl FnOnce() -> Result<(), (BqltlCode, String)>) -> BqltlCode {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            BqltlCode::Ok
        }
        Ok(Err((code, message))) => fail(code, &message),
        Err(_) => fail(BqltlCode::Panic, "internal panic"),
    }
}

fn engine(e: Error) -> (BqltlCode, String) {
    (code_of(&e), e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (BqltlCode, String)> {
    if s.is_null() {
        return Err((BqltlCode::NullArgument, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (BqltlCode::InvalidUtf8, e.to_string()))
}

fn semantics(s: BqltlSemantics) -> Semantics {
    match s {
        BqltlSemantics::Classic => Semantics::Classic,
        BqltlSemantics::Behavioral => Semantics::Behavioral,
        BqltlSemantics::WeakBehavioral => Semantics::WeakBehavioral,
    }
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bqltl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqltl_formula_parse(
    text: *const c_char,
    out: *mut *mut BqltlFormula,
) -> BqltlCode {
    guard(|| {
        if out.is_null() {
            return Err((BqltlCode::NullArgument, "null output".into()));
        }
        let f = parse(read_str(text)?).map_err(engine)?;
        *out = Box::into_raw(Box::new(BqltlFormula(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from `bqltl_formula_parse` or `bqltl_formula_negate` and
/// not be freed already. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bqltl_formula_free(f: *mut BqltlFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The formula in the surface syntax, or null for a null handle.
///
/// # Safety
/// `f` must be a live formula handle or null.
#[no_mangle]
pub unsafe extern "C" fn bqltl_formula_to_string(f: *const BqltlFormula) -> *mut c_char {
    match f.as_ref() {
        Some(f) => into_c(f.0.to_string()),
        None => ptr::null_mut(),
    }
}

/// A new handle for the negation, or null for a null handle.
///
/// # Safety
/// `f` must be a live formula handle or null.
#[no_mangle]
pub unsafe extern "C" fn bqltl_formula_negate(f: *const BqltlFormula) -> *mut BqltlFormula {
    match f.as_ref() {
        Some(f) => Box::into_raw(Box::new(BqltlFormula(f.0.negate()))),
        None => ptr::null_mut(),
    }
}

/// Decides `f`. A zero `state_cap` or `timeout_ms` keeps the default.
///
/// # Safety
/// `f` must be a live formula handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bqltl_solve(
    f: *const BqltlFormula,
    sem: BqltlSemantics,
    state_cap: u64,
    timeout_ms: u64,
    out: *mut *mut BqltlVerdict,
) -> BqltlCode {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), out.is_null()) else {
            return Err((BqltlCode::NullArgument, "null argument".into()));
        };
        let mut budget = Budget::default();
        if state_cap > 0 {
            budget = budget.with_state_cap(state_cap as usize);
        }
        if timeout_ms > 0 {
            budget = budget.with_time_cap(Duration::from_millis(timeout_ms));
        }
        let v = solve(&f.0, semantics(sem), &budget).map_err(engine)?;
        *out = Box::into_raw(Box::new(BqltlVerdict(v)));
        Ok(())
    })
}

/// # Safety
/// `v` must come from `bqltl_solve` and not be freed already. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn bqltl_verdict_free(v: *mut BqltlVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Unknown for a null handle.
///
/// # Safety
/// `v` must be a live verdict handle or null.
#[no_mangle]
pub unsafe extern "C" fn bqltl_verdict_status(v: *const BqltlVerdict) -> BqltlStatus {
    match v.as_ref().map(|v| v.0.status) {
        Some(Status::Sat) => BqltlStatus::Sat,
        Some(Status::Unsat) => BqltlStatus::Unsat,
        _ => BqltlStatus::Unknown,
    }
}

/// The full report as JSON, without timings.
///
/// # Safety
/// `v` must be a live verdict handle or null.
#[no_mangle]
pub unsafe extern "C" fn bqltl_verdict_json(v: *const BqltlVerdict) -> *mut c_char {
    match v.as_ref() {
        Some(v) => into_c(v.0.to_json(false).to_string()),
        None => ptr::null_mut(),
    }
}

/// The witness as JSON, or null when there is none.
///
/// # Safety
/// `v` must be a live verdict handle or null.
#[no_mangle]
pub unsafe extern "C" fn bqltl_verdict_witness_json(v: *const BqltlVerdict) -> *mut c_char {
    match v.as_ref().and_then(|v| v.0.witness.as_ref()) {
        Some(w) => into_c(w.to_json().to_string()),
        None => ptr::null_mut(),
    }
}

/// Checks a witness in the JSON form produced above against `f`.
///
/// # Safety
/// `f` must be a live formula handle, `witness` a nul-terminated string and
/// `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn bqltl_validate(
    f: *const BqltlFormula,
    sem: BqltlSemantics,
    witness: *const c_char,
    valid: *mut bool,
) -> BqltlCode {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), valid.is_null()) else {
            return Err((BqltlCode::NullArgument, "null argument".into()));
        };
        let json: serde_json::Value = serde_json::from_str(read_str(witness)?)
            .map_err(|e| (BqltlCode::InvalidInput, format!("witness is not JSON: {e}")))?;
        let w = Witness::from_json(&json).map_err(engine)?;
        *valid = validate_witness(&f.0, semantics(sem), &w, &Budget::default()).map_err(engine)?;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed already. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn bqltl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
