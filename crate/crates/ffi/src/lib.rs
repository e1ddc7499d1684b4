//! C ABI for constructing and verifying congruence representations.
//!
//! Handles are opaque and owned by the caller; every `*_new`-style output
//! must be released with the matching `*_free`. Functions return a
//! [`ConrepStatus`]; on failure `conrep_last_error` describes the cause
//! until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conrep::certificate::{Certificate, CertificateDocument};
use conrep::io::{parse_document, LatticeDocument};
use conrep::lattice::CandidateSubset;
use conrep::pipeline::{construct_general, AutMode, Options};
use conrep::verify::verify_certificate;
use conrep::{Error, FiniteLattice};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConrepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    ConditionViolated = 5,
    VerificationFailed = 6,
    Internal = 7,
}

/// Request a trivial automorphism group.
pub const CONREP_RIGID: u32 = 1;

/// A finite lattice together with the candidate subset of its document.
pub struct ConrepLattice {
    lattice: FiniteLattice,
    q: Option<Vec<String>>,
}

/// A verified construction.
pub struct ConrepCertificate {
    cert: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ConrepStatus {
    match e {
        Error::Parse { .. } => ConrepStatus::ParseError,
        Error::ConditionViolated(_) => ConrepStatus::ConditionViolated,
        Error::VerificationFailed(_) | Error::AutMismatch(_) => ConrepStatus::VerificationFailed,
        _ => ConrepStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (ConrepStatus, String)>) -> ConrepStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ConrepStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ConrepStatus::Internal
        }
    }
}

fn lib(e: Error) -> (ConrepStatus, String) {
    (status_of(&e), e.to_string())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (ConrepStatus, String)> {
    if p.is_null() {
        return Err((ConrepStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (ConrepStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (ConrepStatus, String)> {
    p.as_ref().ok_or((ConrepStatus::NullPointer, "null handle".into()))
}

fn out<T>(slot: *mut *mut T, value: T) -> Result<(), (ConrepStatus, String)> {
    if slot.is_null() {
        return Err((ConrepStatus::NullPointer, "null output slot".into()));
    }
    unsafe { *slot = Box::into_raw(Box::new(value)) };
    Ok(())
}

fn out_string(slot: *mut *mut c_char, s: String) -> Result<(), (ConrepStatus, String)> {
    if slot.is_null() {
        return Err((ConrepStatus::NullPointer, "null output slot".into()));
    }
    let c = CString::new(s).map_err(|e| (ConrepStatus::Internal, e.to_string()))?;
    unsafe { *slot = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library.
#[no_mangle]
pub extern "C" fn conrep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn conrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a lattice document.
///
/// # Safety
/// `json` must be a nul-terminated string; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conrep_lattice_from_json(json: *const c_char, result: *mut *mut ConrepLattice) -> ConrepStatus {
    guard(|| {
        let doc = parse_document(text(json)?).map_err(lib)?;
        let lattice = doc.to_lattice().map_err(lib)?;
        out(result, ConrepLattice { lattice, q: doc.q })
    })
}

/// Number of elements, or 0 for null.
///
/// # Safety
/// `l` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conrep_lattice_len(l: *const ConrepLattice) -> usize {
    l.as_ref().map_or(0, |l| l.lattice.len())
}

/// # Safety
/// `l` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conrep_lattice_free(l: *mut ConrepLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Whether `d` is distributive, planar and has at most one join-reducible coatom.
///
/// # Safety
/// `d` must be a live handle; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn conrep_check(d: *const ConrepLattice, holds: *mut bool) -> ConrepStatus {
    guard(|| {
        let d = &deref(d)?.lattice;
        if holds.is_null() {
            return Err((ConrepStatus::NullPointer, "null output slot".into()));
        }
        let ok = d.is_distributive() && d.condition_iii().map_err(lib)?.holds;
        *holds = ok;
        Ok(())
    })
}

fn candidate(d: &ConrepLattice, q_json: *const c_char) -> Result<CandidateSubset, (ConrepStatus, String)> {
    let names: Option<Vec<String>> = if q_json.is_null() {
        d.q.clone()
    } else {
        let t = unsafe { text(q_json)? };
        Some(serde_json::from_str(t).map_err(|e| (ConrepStatus::ParseError, e.to_string()))?)
    };
    let mut doc = LatticeDocument::from_lattice("D", &d.lattice);
    doc.q = names;
    doc.candidate(&d.lattice).map_err(lib)
}

fn construct(
    d: *const ConrepLattice,
    q_json: *const c_char,
    aut: AutMode,
    result: *mut *mut ConrepCertificate,
) -> Result<(), (ConrepStatus, String)> {
    let dh = unsafe { deref(d)? };
    if !dh.lattice.is_distributive() {
        return Err(lib(Error::NotDistributive));
    }
    let q = candidate(dh, q_json)?;
    let cert = construct_general(&dh.lattice, &q, &Options { cap: None, aut }).map_err(lib)?;
    out(result, ConrepCertificate { cert })
}

/// Builds a verified lattice `L` with `Con L ≅ D` and `φ(Princ L) = Q`.
/// `q_json` is a JSON array of element names, or null for the document's
/// `q` (or `J⁺(D)` when absent). `flags` may contain [`CONREP_RIGID`].
///
/// # Safety
/// `d` must be a live handle, `q_json` null or nul-terminated, `result` writable.
#[no_mangle]
pub unsafe extern "C" fn conrep_construct(
    d: *const ConrepLattice,
    q_json: *const c_char,
    flags: u32,
    result: *mut *mut ConrepCertificate,
) -> ConrepStatus {
    guard(|| {
        let aut = if flags & CONREP_RIGID != 0 { AutMode::Rigid } else { AutMode::Any };
        construct(d, q_json, aut, result)
    })
}

/// As [`conrep_construct`], with `Aut(L) ≅ Aut(m0)` for the simple lattice `m0`.
///
/// # Safety
/// As [`conrep_construct`]; `m0` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn conrep_construct_with_group(
    d: *const ConrepLattice,
    q_json: *const c_char,
    m0: *const ConrepLattice,
    result: *mut *mut ConrepCertificate,
) -> ConrepStatus {
    guard(|| {
        let m = deref(m0)?.lattice.clone();
        construct(d, q_json, AutMode::Group(m), result)
    })
}

/// Number of elements of the constructed lattice, or 0 for null.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn conrep_certificate_lattice_len(c: *const ConrepCertificate) -> usize {
    c.as_ref().map_or(0, |c| c.cert.lattice.len())
}

/// Recomputes every claim of the certificate; `passed` receives the verdict
/// and, when non-null, `report_json` a JSON report to free with
/// [`conrep_string_free`].
///
/// # Safety
/// `c` must be a live handle; `passed` writable; `report_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn conrep_verify(
    c: *const ConrepCertificate,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> ConrepStatus {
    guard(|| {
        let c = deref(c)?;
        if passed.is_null() {
            return Err((ConrepStatus::NullPointer, "null output slot".into()));
        }
        let report = verify_certificate(&c.cert);
        *passed = report.passed();
        if !report_json.is_null() {
            out_string(report_json, report.to_json())?;
        }
        Ok(())
    })
}

/// Serializes a certificate; free the string with [`conrep_string_free`].
///
/// # Safety
/// `c` must be a live handle; `json` writable.
#[no_mangle]
pub unsafe extern "C" fn conrep_certificate_to_json(c: *const ConrepCertificate, json: *mut *mut c_char) -> ConrepStatus {
    guard(|| {
        let c = deref(c)?;
        let s = serde_json::to_string_pretty(&c.cert.to_document()).map_err(|e| (ConrepStatus::Internal, e.to_string()))?;
        out_string(json, s)
    })
}

/// Parses a certificate without verifying it.
///
/// # Safety
/// `json` must be nul-terminated; `result` writable.
#[no_mangle]
pub unsafe extern "C" fn conrep_certificate_from_json(json: *const c_char, result: *mut *mut ConrepCertificate) -> ConrepStatus {
    guard(|| {
        let doc: CertificateDocument =
            serde_json::from_str(text(json)?).map_err(|e| (ConrepStatus::ParseError, e.to_string()))?;
        let cert = Certificate::from_document(&doc).map_err(lib)?;
        out(result, ConrepCertificate { cert })
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conrep_certificate_free(c: *mut ConrepCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
