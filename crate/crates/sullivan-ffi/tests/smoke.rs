use std::ffi::{CStr, CString};
use std::ptr;

use sullivan_ffi::{
    sv_formal_dimension, sv_invariants_json, sv_is_elliptic, sv_last_error, sv_model_free,
    sv_model_parse, sv_string_free, SvModel, SvStatus,
};

fn parse(text: &str) -> *mut SvModel {
    let c = CString::new(text).unwrap();
    let mut model = ptr::null_mut();
    let status = unsafe { sv_model_parse(c.as_ptr(), &mut model) };
    assert_eq!(status, SvStatus::Ok);
    assert!(!model.is_null());
    model
}

fn last_error() -> String {
    let ptr = sv_last_error();
    assert!(!ptr.is_null());
    unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string()
}

#[test]
fn a_model_round_trips_through_the_c_interface() {
    let model = parse(
        "gen x2:2\ngen x4:4\ngen y5:5\ngen y7:7\n\
         d y5 = x2^3 - 2 x2 x4\nd y7 = x4^2 - x2^2 x4\n",
    );

    let mut dimension = 0i64;
    assert_eq!(unsafe { sv_formal_dimension(model, &mut dimension) }, SvStatus::Ok);
    assert_eq!(dimension, 8);

    let mut elliptic = false;
    assert_eq!(unsafe { sv_is_elliptic(model, &mut elliptic) }, SvStatus::Ok);
    assert!(elliptic);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sv_invariants_json(model, false, &mut json) }, SvStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    assert!(
        text.starts_with("{\"N\":8,\"e0\":4,\"cat0\":4,\"R0\":4,\"t\":3,\"L0\":2,\"l0\":2,"),
        "{text}"
    );
    unsafe { sv_string_free(json) };
    unsafe { sv_model_free(model) };
}

#[test]
fn parse_failures_report_a_message() {
    let c = CString::new("gen y5:5\nd y5 = z^2\n").unwrap();
    let mut model = ptr::null_mut();
    let status = unsafe { sv_model_parse(c.as_ptr(), &mut model) };
    assert_eq!(status, SvStatus::Parse);
    assert!(model.is_null());
    assert!(last_error().contains("unknown generator"));
}

#[test]
fn null_arguments_are_rejected() {
    let mut model = ptr::null_mut();
    assert_eq!(
        unsafe { sv_model_parse(ptr::null(), &mut model) },
        SvStatus::NullArgument
    );
    assert_eq!(
        unsafe { sv_formal_dimension(ptr::null(), ptr::null_mut()) },
        SvStatus::NullArgument
    );
    unsafe { sv_string_free(ptr::null_mut()) };
    unsafe { sv_model_free(ptr::null_mut()) };
}

#[test]
fn non_elliptic_models_map_to_their_own_status() {
    let model = parse("gen x2:2\n");
    let mut json = ptr::null_mut();
    let status = unsafe { sv_invariants_json(model, false, &mut json) };
    assert_eq!(status, SvStatus::NotElliptic);
    assert!(json.is_null());
    assert!(last_error().contains("not elliptic"));
    unsafe { sv_model_free(model) };
}

#[test]
fn the_generated_header_declares_the_interface() {
    let header = format!("{}/include/sullivan.h", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(header).expect("the build script writes the header");
    for symbol in [
        "sv_model_parse",
        "sv_model_free",
        "sv_invariants_json",
        "sv_string_free",
        "sv_last_error",
        "SvStatus",
        "SvModel",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
