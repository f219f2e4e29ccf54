//! C ABI over the engine: opaque model handles, integer status codes, and
//! JSON results.
//!
//! Ownership rules: models returned through `sv_model_parse` are released
//! with `sv_model_free`; strings returned through `char **` outputs are
//! released with `sv_string_free`. On any non-OK status, `sv_last_error`
//! returns a message that stays valid until the next failing call on the
//! same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use sullivan::dsl;
use sullivan::invariants::{compute_invariants, PipelineError};
use sullivan::model::SullivanModel;
use sullivan::oracle;

/// An opaque validated model handle.
pub struct SvModel(SullivanModel);

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// The input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The model text failed to parse or validate.
    Parse = 3,
    /// The model is not elliptic, so the pipeline refuses it.
    NotElliptic = 4,
    /// A pipeline stage failed.
    Pipeline = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: SvStatus, message: &str) -> SvStatus {
    let stored = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
    status
}

/// The message of the most recent failure on this thread, or null if no
/// call has failed yet. The pointer stays valid until the next failing
/// call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn sv_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow().as_ref().map_or(std::ptr::null(), |msg| msg.as_ptr())
    })
}

/// Parses and validates a model written in the `.sm` language.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out_model` to a
/// writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn sv_model_parse(
    text: *const c_char,
    out_model: *mut *mut SvModel,
) -> SvStatus {
    if text.is_null() || out_model.is_null() {
        return fail(SvStatus::NullArgument, "sv_model_parse: null argument");
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return fail(SvStatus::InvalidUtf8, "sv_model_parse: input is not UTF-8");
    };
    match dsl::parse_model(text) {
        Ok(model) => {
            *out_model = Box::into_raw(Box::new(SvModel(model)));
            SvStatus::Ok
        }
        Err(e) => fail(SvStatus::Parse, &e.to_string()),
    }
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must be a pointer from `sv_model_parse` not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn sv_model_free(model: *mut SvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Writes the formal dimension of the model to `out`.
///
/// # Safety
/// `model` must be a live handle and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn sv_formal_dimension(
    model: *const SvModel,
    out: *mut i64,
) -> SvStatus {
    if model.is_null() || out.is_null() {
        return fail(SvStatus::NullArgument, "sv_formal_dimension: null argument");
    }
    *out = (*model).0.formal_dimension();
    SvStatus::Ok
}

/// Writes the exact ellipticity verdict to `out`.
///
/// # Safety
/// `model` must be a live handle and `out` a writable slot.
#[no_mangle]
pub unsafe extern "C" fn sv_is_elliptic(model: *const SvModel, out: *mut bool) -> SvStatus {
    if model.is_null() || out.is_null() {
        return fail(SvStatus::NullArgument, "sv_is_elliptic: null argument");
    }
    *out = oracle::is_elliptic(&(*model).0);
    SvStatus::Ok
}

/// Runs the full pipeline and writes the invariant report as a JSON string
/// to `out_json`. With `include_trace`, each stage carries its per-step
/// records. The string is owned by the caller; release it with
/// `sv_string_free`.
///
/// # Safety
/// `model` must be a live handle and `out_json` a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn sv_invariants_json(
    model: *const SvModel,
    include_trace: bool,
    out_json: *mut *mut c_char,
) -> SvStatus {
    if model.is_null() || out_json.is_null() {
        return fail(SvStatus::NullArgument, "sv_invariants_json: null argument");
    }
    let model = &(*model).0;
    match compute_invariants(model) {
        Ok(report) => {
            let json = report.to_json(model.gens(), include_trace);
            let c = CString::new(json).expect("JSON output never contains NUL");
            *out_json = c.into_raw();
            SvStatus::Ok
        }
        Err(e @ PipelineError::NotElliptic) => fail(SvStatus::NotElliptic, &e.to_string()),
        Err(e) => fail(SvStatus::Pipeline, &e.to_string()),
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be a string pointer returned by this library not yet freed,
/// or null.
#[no_mangle]
pub unsafe extern "C" fn sv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
