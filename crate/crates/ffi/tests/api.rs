use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use noct_ffi::*;
use serde_json::Value;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(out: *mut c_char) -> Value {
    let v = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    unsafe { noct_string_free(out) };
    v
}

fn builtin(name: &str) -> *mut NoctModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { noct_model_builtin(c(name).as_ptr(), &mut m) }, NoctStatus::Ok);
    m
}

fn last_error() -> String {
    let p = noct_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn model_handles() {
    let m = builtin("example5");
    assert_eq!(unsafe { noct_model_rank(m) }, 3);
    let mut out = ptr::null_mut();
    let s = unsafe { noct_intersection(m, c("E1").as_ptr(), c("E1").as_ptr(), &mut out) };
    assert_eq!(s, NoctStatus::Ok);
    assert_eq!(take(out)["intersection"], "-2");
    unsafe { noct_model_free(m) };
    assert_eq!(unsafe { noct_model_rank(ptr::null()) }, 0);
}

#[test]
fn polygons_and_profiles() {
    let m = builtin("example5");
    let mut out = ptr::null_mut();
    let s = unsafe { noct_polygon(m, c("1,2,1").as_ptr(), c("E2").as_ptr(), c("E1=1").as_ptr(), &mut out) };
    assert_eq!(s, NoctStatus::Ok);
    let v = take(out);
    assert_eq!(v["vertices"], serde_json::json!([["0", "0"], ["2", "1"], ["1", "1"]]));
    assert_eq!(v["area"], "1/2");
    unsafe { noct_model_free(m) };

    let m = builtin("blp-p2");
    let s = unsafe { noct_seshadri_profile(m, c("on-E").as_ptr(), c("E").as_ptr(), c("H-E").as_ptr(), &mut out) };
    assert_eq!(s, NoctStatus::Ok);
    assert_eq!(take(out)["breakpoints"], serde_json::json!(["1/2", "2/3"]));
    let s = unsafe { noct_seshadri(m, c("on-E").as_ptr(), c("1/4H+1/2E").as_ptr(), &mut out) };
    assert_eq!(s, NoctStatus::Ok);
    assert_eq!(take(out)["extended_seshadri"], "-1/2");
    unsafe { noct_model_free(m) };
}

#[test]
fn error_codes_and_messages() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { noct_model_builtin(c("nowhere").as_ptr(), &mut m) },
        NoctStatus::Input
    );
    assert!(last_error().contains("unknown model"));
    assert_eq!(
        unsafe { noct_model_builtin(ptr::null(), &mut m) },
        NoctStatus::NullArgument
    );

    let m = builtin("blp-p2");
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { noct_xi(m, c("on-E").as_ptr(), c("H-E").as_ptr(), &mut out) },
        NoctStatus::Domain
    );
    assert!(last_error().contains("not big"));
    assert_eq!(
        unsafe { noct_zariski(m, c("0.5,0").as_ptr(), &mut out) },
        NoctStatus::Input
    );
    assert_eq!(
        unsafe { noct_zariski(ptr::null(), c("1,0").as_ptr(), &mut out) },
        NoctStatus::NullArgument
    );
    assert_eq!(unsafe { noct_zariski(m, c("1,0").as_ptr(), &mut out) }, NoctStatus::Ok);
    assert!(noct_last_error_message().is_null());
    take(out);
    unsafe { noct_model_free(m) };
}

#[test]
fn models_from_json() {
    let text = noct::io::canonical_json(&noct::io::load_named("p2").unwrap().to_file()).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { noct_model_from_json(c(&text).as_ptr(), &mut m) },
        NoctStatus::Ok
    );
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { noct_xi(m, ptr::null(), c("3").as_ptr(), &mut out) },
        NoctStatus::Ok
    );
    assert_eq!(take(out)["xi"], "3");
    unsafe { noct_model_free(m) };
    let mut bad = ptr::null_mut();
    assert_eq!(
        unsafe { noct_model_from_json(c("{").as_ptr(), &mut bad) },
        NoctStatus::Input
    );
    assert!(bad.is_null());
}

#[test]
fn valuations() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { noct_valuate(2, c("u1*u2 + u2^3").as_ptr(), &mut out) },
        NoctStatus::Ok
    );
    let nu = take(out)["nu"].clone();
    assert_eq!(nu, serde_json::json!([2, 1]));
}
