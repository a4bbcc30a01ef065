//! C interface to `noct`.
//!
//! Models are opaque handles. Classes, flags and incidences are passed as the
//! same strings the command line accepts; results come back as JSON strings
//! that the caller releases with `noct_string_free`. Every call returns a
//! `NoctStatus`; on failure `noct_last_error_message` describes the error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use noct::io::{self, LoadedModel};
use noct::polygon::{self, FlagSpec};
use noct::positivity::{self, ProfileMode};
use noct::{germ, infinitesimal, lattice, registry, zariski, Error};
use serde_json::json;

/// Status codes; the nonzero library codes match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoctStatus {
    Ok = 0,
    Internal = 1,
    Input = 2,
    Io = 3,
    Domain = 4,
    NullArgument = 5,
    Panic = 6,
}

/// A loaded surface model with its declared points.
pub struct NoctModel {
    inner: LoadedModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn status_of(e: &Error) -> NoctStatus {
    match e {
        Error::Input(_) => NoctStatus::Input,
        Error::Io { .. } => NoctStatus::Io,
        Error::Domain(_) | Error::Resource(_) => NoctStatus::Domain,
        Error::Internal(_) => NoctStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NoctStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NoctStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer passed for {what}"));
            NoctStatus::NullArgument
        }
        Err(_) => {
            set_error("panic inside noct");
            NoctStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::input(format!("{what} is not valid UTF-8"))))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &'static str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn model<'a>(p: *const NoctModel) -> Result<&'a LoadedModel, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or(Failure::Null("model"))
}

unsafe fn emit(out: *mut *mut c_char, value: serde_json::Value) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    let s = io::canonical_json(&value)?;
    *out = CString::new(s).map_err(|e| Error::internal(e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn store(out: *mut *mut NoctModel, m: LoadedModel) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = Box::into_raw(Box::new(NoctModel { inner: m }));
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<serde_json::Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Lib(Error::internal(e.to_string())))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn noct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn noct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a built-in model (`p2`, `hirzebruch:N`, `blp-p2`, `example5`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noct_model_builtin(name: *const c_char, out: *mut *mut NoctModel) -> NoctStatus {
    guard(|| {
        let name = text(name, "name")?;
        registry::builtin(name)?;
        store(out, io::load_named(name)?)
    })
}

/// Parses and validates a model file given as JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noct_model_from_json(json: *const c_char, out: *mut *mut NoctModel) -> NoctStatus {
    guard(|| store(out, io::parse_model(text(json, "json")?)?))
}

/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn noct_model_free(m: *mut NoctModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Picard rank of the model, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn noct_model_rank(m: *const NoctModel) -> usize {
    m.as_ref().map_or(0, |m| m.inner.model.rank)
}

/// `{"intersection": "p/q"}`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_intersection(
    m: *const NoctModel,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> NoctStatus {
    guard(|| {
        let m = &model(m)?.model;
        let a = io::parse_class(m, text(a, "a")?)?;
        let b = io::parse_class(m, text(b, "b")?)?;
        emit(
            out,
            json!({ "intersection": lattice::intersection(m, &a, &b)?.to_string() }),
        )
    })
}

/// Zariski decomposition of a class.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_zariski(m: *const NoctModel, class: *const c_char, out: *mut *mut c_char) -> NoctStatus {
    guard(|| {
        let m = &model(m)?.model;
        let d = io::parse_class(m, text(class, "class")?)?;
        emit(out, to_value(&zariski::zariski_decompose(m, &d)?)?)
    })
}

/// Newton-Okounkov polygon for the flag curve `flag`; `incidence` may be null.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_polygon(
    m: *const NoctModel,
    class: *const c_char,
    flag: *const c_char,
    incidence: *const c_char,
    out: *mut *mut c_char,
) -> NoctStatus {
    guard(|| {
        let m = &model(m)?.model;
        let d = io::parse_class(m, text(class, "class")?)?;
        let inc = io::parse_incidence(m, opt_text(incidence, "incidence")?.unwrap_or(""))?;
        let f = FlagSpec::negative_curve(m, io::parse_curve(m, text(flag, "flag")?)?, inc);
        let data = polygon::okounkov_data(m, &d, &f)?;
        emit(
            out,
            json!({
                "vertices": to_value(&data.polygon)?,
                "mu": data.mu.to_string(),
                "area": data.polygon.area().to_string(),
            }),
        )
    })
}

/// Largest inverted simplex constant at a declared point; `point` may be null
/// for the model's only point.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_xi(
    m: *const NoctModel,
    point: *const c_char,
    class: *const c_char,
    out: *mut *mut c_char,
) -> NoctStatus {
    guard(|| {
        let lm = model(m)?;
        let x = lm.pick_point(opt_text(point, "point")?)?;
        let d = io::parse_class(&lm.model, text(class, "class")?)?;
        let r = infinitesimal::xi_constant(&lm.model, x, &d)?;
        emit(out, json!({ "xi": r.xi.to_string(), "body": to_value(&r.body)? }))
    })
}

/// Extended Seshadri value with the asymptotic multiplicity.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_seshadri(
    m: *const NoctModel,
    point: *const c_char,
    class: *const c_char,
    out: *mut *mut c_char,
) -> NoctStatus {
    guard(|| {
        let lm = model(m)?;
        let x = lm.pick_point(opt_text(point, "point")?)?;
        let d = io::parse_class(&lm.model, text(class, "class")?)?;
        let v = positivity::extended_seshadri(&lm.model, x, &d)?;
        let mult = positivity::asymptotic_multiplicity(&lm.model, x, &d)?;
        emit(
            out,
            json!({ "extended_seshadri": v.to_string(), "asymptotic_mult": mult.to_string() }),
        )
    })
}

/// Exact Seshadri function on the segment from `from` to `to`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_seshadri_profile(
    m: *const NoctModel,
    point: *const c_char,
    from: *const c_char,
    to: *const c_char,
    out: *mut *mut c_char,
) -> NoctStatus {
    guard(|| {
        let lm = model(m)?;
        let x = lm.pick_point(opt_text(point, "point")?)?;
        let d0 = io::parse_class(&lm.model, text(from, "from")?)?;
        let d1 = io::parse_class(&lm.model, text(to, "to")?)?;
        let p = positivity::seshadri_profile(&lm.model, x, &d0, &d1, &ProfileMode::Exact)?;
        emit(out, to_value(&p)?)
    })
}

/// Valuation vector of a germ in `n` variables, e.g. `"u1*u2 + u2^3"`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn noct_valuate(n: usize, germ_text: *const c_char, out: *mut *mut c_char) -> NoctStatus {
    guard(|| {
        let g = germ::GermPolynomial::parse(n, text(germ_text, "germ")?)?;
        emit(out, json!({ "nu": germ::valuation_vector(&g)?.nu }))
    })
}
