//! C ABI over `nfold`.
//!
//! Every fallible function returns an [`NfoldStatus`]; on failure the
//! message is available from [`nfold_last_error`] on the same thread.
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Strings returned through `char **` are freed
//! with [`nfold_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nfold::cli;
use nfold::homotopy::{self, HomotopyVerdict};
use nfold::{json, Error, FactorMorphism, NFactorization, RingRef};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfoldStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    IncompatibleRing = 5,
    Unsupported = 6,
    Internal = 7,
    Panic = 8,
}

/// Outcome of a homotopy query.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfoldVerdict {
    /// Not null-homotopic.
    No = 0,
    /// Null-homotopic; a witness was found and re-verified.
    Yes = 1,
    /// No witness within the searched degree bound.
    Unknown = 2,
}

pub struct NfoldRing(RingRef);
pub struct NfoldObject(NFactorization);
pub struct NfoldMorphism(FactorMorphism);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NfoldStatus {
    match e {
        Error::Parse(_) => NfoldStatus::Parse,
        Error::IncompatibleRing => NfoldStatus::IncompatibleRing,
        Error::Unsupported(_) => NfoldStatus::Unsupported,
        Error::Internal(_) => NfoldStatus::Internal,
        _ => NfoldStatus::InvalidInput,
    }
}

struct Fail(NfoldStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> NfoldStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NfoldStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_last_error(msg);
            s
        }
        Err(_) => {
            set_last_error("panic inside nfold".into());
            NfoldStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: the caller passes either NULL or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| Fail(NfoldStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(NfoldStatus::NullPointer, format!("{what} is NULL")));
    }
    // SAFETY: non-NULL, and the caller guarantees NUL termination.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|e| Fail(NfoldStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(NfoldStatus::NullPointer, "output pointer is NULL".into()));
    }
    // SAFETY: non-NULL and the caller guarantees it is writable.
    unsafe { out.write(v) };
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(NfoldStatus::Internal, e.to_string()))?;
    unsafe { put(out, c.into_raw()) }
}

/// The ring a document lives over: `ring` if given, else its `"ring"` entry.
unsafe fn resolve_ring(ring: *const NfoldRing, doc: &serde_json::Value) -> Result<RingRef, Fail> {
    let fallback = unsafe { ring.as_ref() }.map(|r| &r.0);
    Ok(json::document_ring(doc, fallback)?)
}

fn verdict(v: &HomotopyVerdict) -> NfoldVerdict {
    match v {
        HomotopyVerdict::Witness(_) => NfoldVerdict::Yes,
        HomotopyVerdict::NoWitness => NfoldVerdict::No,
        HomotopyVerdict::NoWitnessUpToDegree(_) => NfoldVerdict::Unknown,
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nfold_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nfold_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a ring description such as
/// `{"field": {"kind": "rational"}, "sigma_power": 0, "omega": [0, 0, 1]}`.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_ring_from_json(text: *const c_char, out: *mut *mut NfoldRing) -> NfoldStatus {
    guard(|| {
        let v = json::parse(unsafe { self::text(text, "text") }?)?;
        let ring = json::ring_from_json(&v)?;
        unsafe { put(out, Box::into_raw(Box::new(NfoldRing(ring)))) }
    })
}

/// # Safety
/// `ring` is NULL or a handle from [`nfold_ring_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nfold_ring_free(ring: *mut NfoldRing) {
    if !ring.is_null() {
        drop(unsafe { Box::from_raw(ring) });
    }
}

/// Parses and validates an object. `ring` may be NULL when the document
/// carries its own `"ring"` entry.
///
/// # Safety
/// Pointers are NULL or valid; `text` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_from_json(
    ring: *const NfoldRing,
    text: *const c_char,
    out: *mut *mut NfoldObject,
) -> NfoldStatus {
    guard(|| {
        let v = json::parse(unsafe { self::text(text, "text") }?)?;
        let ring = unsafe { resolve_ring(ring, &v) }?;
        let x = json::object_from_json(&ring, &v)?;
        unsafe { put(out, Box::into_raw(Box::new(NfoldObject(x)))) }
    })
}

/// # Safety
/// `x` is NULL or a live object handle.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_free(x: *mut NfoldObject) {
    if !x.is_null() {
        drop(unsafe { Box::from_raw(x) });
    }
}

/// Number of components of an object.
///
/// # Safety
/// `x` is a live object handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_n(x: *const NfoldObject, out: *mut usize) -> NfoldStatus {
    guard(|| {
        let x = unsafe { borrow(x, "object") }?;
        unsafe { put(out, x.0.n()) }
    })
}

/// Checks the factorization identities; `out` is set to true when they hold.
///
/// # Safety
/// `x` is a live object handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_validate(x: *const NfoldObject, out: *mut bool) -> NfoldStatus {
    guard(|| {
        let x = unsafe { borrow(x, "object") }?;
        unsafe { put(out, x.0.is_valid()) }
    })
}

/// Applies a named functor (`shift`, `twist`, `face`, `degeneracy`).
/// `power` is used by `shift` and `twist`, `index` by the others.
///
/// # Safety
/// `x` is a live object handle, `name` is NUL-terminated, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_apply_functor(
    x: *const NfoldObject,
    name: *const c_char,
    power: i64,
    index: usize,
    out: *mut *mut NfoldObject,
) -> NfoldStatus {
    guard(|| {
        let x = unsafe { borrow(x, "object") }?;
        let name = unsafe { text(name, "name") }?;
        if !matches!(name, "shift" | "twist" | "face" | "degeneracy") {
            return Err(Fail(NfoldStatus::InvalidInput, format!("unknown functor {name:?}")));
        }
        let f = cli::functor_by_name(name, power, index, 0, 0)?;
        let y = f.apply(&x.0)?;
        unsafe { put(out, Box::into_raw(Box::new(NfoldObject(y)))) }
    })
}

/// Whether the object is zero in the stable category.
///
/// # Safety
/// `x` is a live object handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_is_stably_zero(x: *const NfoldObject, out: *mut NfoldVerdict) -> NfoldStatus {
    guard(|| {
        let x = unsafe { borrow(x, "object") }?;
        let v = homotopy::is_stably_zero(&x.0)?;
        unsafe { put(out, verdict(&v)) }
    })
}

/// Serializes an object, ring included.
///
/// # Safety
/// `x` is a live object handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_object_to_json(x: *const NfoldObject, out: *mut *mut c_char) -> NfoldStatus {
    guard(|| {
        let x = unsafe { borrow(x, "object") }?;
        let v = json::with_ring(x.0.ring(), json::object_to_json(&x.0));
        unsafe { put_string(out, v.to_string()) }
    })
}

/// Parses a morphism document (`source`, `target`, `components`).
///
/// # Safety
/// Pointers are NULL or valid; `text` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_morphism_from_json(
    ring: *const NfoldRing,
    text: *const c_char,
    out: *mut *mut NfoldMorphism,
) -> NfoldStatus {
    guard(|| {
        let v = json::parse(unsafe { self::text(text, "text") }?)?;
        let ring = unsafe { resolve_ring(ring, &v) }?;
        let f = json::morphism_from_json(&ring, &v, None, None)?;
        unsafe { put(out, Box::into_raw(Box::new(NfoldMorphism(f)))) }
    })
}

/// The identity morphism of an object.
///
/// # Safety
/// `x` is a live object handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_morphism_identity(x: *const NfoldObject, out: *mut *mut NfoldMorphism) -> NfoldStatus {
    guard(|| {
        let x = unsafe { borrow(x, "object") }?;
        unsafe { put(out, Box::into_raw(Box::new(NfoldMorphism(FactorMorphism::identity(&x.0))))) }
    })
}

/// # Safety
/// `f` is NULL or a live morphism handle.
#[no_mangle]
pub unsafe extern "C" fn nfold_morphism_free(f: *mut NfoldMorphism) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Whether the morphism is null-homotopic.
///
/// # Safety
/// `f` is a live morphism handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_morphism_is_null_homotopic(
    f: *const NfoldMorphism,
    out: *mut NfoldVerdict,
) -> NfoldStatus {
    guard(|| {
        let f = unsafe { borrow(f, "morphism") }?;
        let v = homotopy::is_p_null_homotopic(&f.0)?;
        unsafe { put(out, verdict(&v)) }
    })
}

/// Serializes a morphism, ring included.
///
/// # Safety
/// `f` is a live morphism handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn nfold_morphism_to_json(f: *const NfoldMorphism, out: *mut *mut c_char) -> NfoldStatus {
    guard(|| {
        let f = unsafe { borrow(f, "morphism") }?;
        let v = json::with_ring(f.0.source().ring(), json::morphism_to_json(&f.0));
        unsafe { put_string(out, v.to_string()) }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const XX: &str = r#"{"ring": {"field": {"kind": "rational"}, "omega": [0, 0, 1]}, "n": 2, "ranks": [1, 1],
        "maps": [{"rows": 1, "cols": 1, "twist": 0, "entries": [[[0, 1]]]},
                 {"rows": 1, "cols": 1, "twist": 1, "entries": [[[0, 1]]]}]}"#;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(nfold_last_error()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn object_life_cycle() {
        unsafe {
            let mut x = ptr::null_mut();
            assert_eq!(nfold_object_from_json(ptr::null(), c(XX).as_ptr(), &mut x), NfoldStatus::Ok);
            let mut n = 0;
            assert_eq!(nfold_object_n(x, &mut n), NfoldStatus::Ok);
            assert_eq!(n, 2);
            let mut y = ptr::null_mut();
            assert_eq!(nfold_object_apply_functor(x, c("face").as_ptr(), 0, 0, &mut y), NfoldStatus::Ok);
            let mut valid = false;
            assert_eq!(nfold_object_validate(y, &mut valid), NfoldStatus::Ok);
            assert!(valid);
            let mut v = NfoldVerdict::Unknown;
            assert_eq!(nfold_object_is_stably_zero(x, &mut v), NfoldStatus::Ok);
            assert_eq!(v, NfoldVerdict::No);
            let mut s = ptr::null_mut();
            assert_eq!(nfold_object_to_json(x, &mut s), NfoldStatus::Ok);
            let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
            nfold_string_free(s);
            let mut x2 = ptr::null_mut();
            assert_eq!(nfold_object_from_json(ptr::null(), c(&text).as_ptr(), &mut x2), NfoldStatus::Ok);
            assert_eq!((*x2).0, (*x).0);
            let mut id = ptr::null_mut();
            assert_eq!(nfold_morphism_identity(x, &mut id), NfoldStatus::Ok);
            assert_eq!(nfold_morphism_is_null_homotopic(id, &mut v), NfoldStatus::Ok);
            assert_eq!(v, NfoldVerdict::No);
            nfold_morphism_free(id);
            nfold_object_free(x2);
            nfold_object_free(y);
            nfold_object_free(x);
        }
    }

    #[test]
    fn errors_are_reported() {
        unsafe {
            let mut x = ptr::null_mut();
            assert_eq!(nfold_object_from_json(ptr::null(), c("{").as_ptr(), &mut x), NfoldStatus::Parse);
            assert!(!last_error().is_empty());
            assert_eq!(nfold_object_from_json(ptr::null(), ptr::null(), &mut x), NfoldStatus::NullPointer);
            let mut ring = ptr::null_mut();
            let r3 = c(r#"{"field": {"kind": "rational"}, "omega": [0, 0, 0, 1]}"#);
            assert_eq!(nfold_ring_from_json(r3.as_ptr(), &mut ring), NfoldStatus::Ok);
            assert_eq!(nfold_object_from_json(ring, c(XX).as_ptr(), &mut x), NfoldStatus::IncompatibleRing);
            assert!(last_error().contains("incompatible"));
            nfold_ring_free(ring);
            let mut n = 0;
            assert_eq!(nfold_object_n(ptr::null(), &mut n), NfoldStatus::NullPointer);
        }
    }
}
