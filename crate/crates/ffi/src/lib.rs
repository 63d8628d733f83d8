//! C ABI for `fsword`.
//!
//! Objects cross the boundary as opaque handles created and destroyed by this
//! library. Every function returns an [`FswStatus`]; on failure a message is
//! available from [`fsw_last_error_message`] on the same thread. Strings
//! returned as `char *` are owned by the caller and released with
//! [`fsw_string_free`]; `const char *` results are borrowed from the handle
//! they came from.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fsword::constructor::{construct_with, replay, CertificateKind, ConstructError, ConstructOptions};
use fsword::search::{decide_with, SearchConfig, SearchError};
use fsword::words::{is_circular_fs, is_fs_word, CircularWord, Word};
use fsword::{knockout, load_catalog, Catalog, LengthCertificate, SearchOutcome};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FswStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidWord = 3,
    AboveBound = 4,
    CertificateRejected = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FswCertificateKind {
    Recipe = 0,
    Explicit = 1,
    Impossible = 2,
}

/// A length certificate produced by `fsw_construct` or parsed from JSON.
pub struct FswCertificate {
    inner: LengthCertificate,
    witness: Option<CString>,
}

/// Result of an exhaustive search.
pub struct FswSearch {
    inner: SearchOutcome,
    witness: Option<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<Vec<u8>>) {
    let mut bytes = message.into();
    bytes.retain(|&b| b != 0);
    let text = CString::new(bytes).expect("NUL bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn fail(status: FswStatus, message: impl ToString) -> FswStatus {
    set_error(message.to_string());
    status
}

fn guard(body: impl FnOnce() -> FswStatus) -> FswStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(FswStatus::Panic, "panic inside fsword"),
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, FswStatus> {
    if text.is_null() {
        return Err(fail(FswStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|e| fail(FswStatus::InvalidUtf8, e))
}

fn construct_status(e: ConstructError) -> FswStatus {
    let status = match &e {
        ConstructError::CertificateRejected(_) => FswStatus::CertificateRejected,
        ConstructError::Word(_) => FswStatus::InvalidWord,
        ConstructError::Search(SearchError::AboveBound { .. }) => FswStatus::AboveBound,
        _ => FswStatus::Internal,
    };
    fail(status, e)
}

fn witness_cstring(text: Option<String>) -> Option<CString> {
    text.map(|w| CString::new(w).expect("binary words contain no NUL"))
}

fn into_certificate(inner: LengthCertificate) -> *mut FswCertificate {
    let witness = witness_cstring(inner.witness.clone());
    Box::into_raw(Box::new(FswCertificate { inner, witness }))
}

/// Message describing the last failure on this thread. Never null; empty if
/// nothing has failed yet.
#[no_mangle]
pub extern "C" fn fsw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `text` must be null or a pointer returned as `char *` by this library
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn fsw_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Tests a binary word (ASCII `0`/`1`) for the FS property, linear or
/// circular.
///
/// # Safety
/// `word` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsw_is_fs(word: *const c_char, circular: bool, out: *mut bool) -> FswStatus {
    guard(|| {
        if out.is_null() {
            return fail(FswStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(word) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let word = match Word::binary(text) {
            Ok(w) => w,
            Err(e) => return fail(FswStatus::InvalidWord, e),
        };
        let verdict = if circular {
            is_circular_fs(&CircularWord::new(word))
        } else {
            is_fs_word(&word)
        };
        *out = verdict.expect("word is binary");
        FswStatus::Ok
    })
}

/// Builds a certificate for length `m`: a verified circular FS word, or a
/// proof stamp that none exists (kind `IMPOSSIBLE`, still status `OK`).
///
/// # Safety
/// `out` must be writable. The handle is released with
/// `fsw_certificate_free`.
#[no_mangle]
pub unsafe extern "C" fn fsw_construct(m: usize, seed: u64, out: *mut *mut FswCertificate) -> FswStatus {
    guard(|| {
        if out.is_null() {
            return fail(FswStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let options = ConstructOptions {
            seed,
            ..ConstructOptions::default()
        };
        match construct_with(m, &options) {
            Ok(cert) => {
                *out = into_certificate(cert);
                FswStatus::Ok
            }
            Err(e) => construct_status(e),
        }
    })
}

/// Parses a certificate from its JSON form. Does not replay it.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_from_json(
    json: *const c_char,
    out: *mut *mut FswCertificate,
) -> FswStatus {
    guard(|| {
        if out.is_null() {
            return fail(FswStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match LengthCertificate::from_json(text) {
            Ok(cert) => {
                *out = into_certificate(cert);
                FswStatus::Ok
            }
            Err(e) => construct_status(e),
        }
    })
}

/// Serializes a certificate as JSON. Free the result with `fsw_string_free`.
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_to_json(cert: *const FswCertificate, out: *mut *mut c_char) -> FswStatus {
    guard(|| {
        if cert.is_null() || out.is_null() {
            return fail(FswStatus::NullPointer, "null argument");
        }
        let json = (*cert).inner.to_json();
        *out = CString::new(json).expect("JSON has no NUL").into_raw();
        FswStatus::Ok
    })
}

/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_kind(cert: *const FswCertificate) -> FswCertificateKind {
    match (*cert).inner.kind {
        CertificateKind::Recipe => FswCertificateKind::Recipe,
        CertificateKind::Explicit => FswCertificateKind::Explicit,
        CertificateKind::Impossible => FswCertificateKind::Impossible,
    }
}

/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_length(cert: *const FswCertificate) -> usize {
    (*cert).inner.m
}

/// The recorded witness word, or null for impossible lengths. Borrowed from
/// the handle.
///
/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_witness(cert: *const FswCertificate) -> *const c_char {
    match &(*cert).witness {
        Some(w) => w.as_ptr(),
        None => ptr::null(),
    }
}

/// Rebuilds and re-verifies the certified word. On success `*witness_out`
/// receives the word (free with `fsw_string_free`).
///
/// # Safety
/// `cert` must be a live handle; `witness_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_replay(cert: *const FswCertificate, witness_out: *mut *mut c_char) -> FswStatus {
    guard(|| {
        if cert.is_null() || witness_out.is_null() {
            return fail(FswStatus::NullPointer, "null argument");
        }
        *witness_out = ptr::null_mut();
        match replay(&(*cert).inner) {
            Ok(word) => {
                *witness_out = CString::new(word.to_string()).expect("binary word").into_raw();
                FswStatus::Ok
            }
            Err(e) => construct_status(e),
        }
    })
}

/// # Safety
/// `cert` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fsw_certificate_free(cert: *mut FswCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Decides existence of a circular FS word of length `m` by exhaustive
/// search. `max_length` bounds `m` (pass 0 for the default of 128).
///
/// # Safety
/// `out` must be writable. Release the handle with `fsw_search_free`.
#[no_mangle]
pub unsafe extern "C" fn fsw_search(
    m: usize,
    want_count: bool,
    max_length: usize,
    out: *mut *mut FswSearch,
) -> FswStatus {
    guard(|| {
        if out.is_null() {
            return fail(FswStatus::NullPointer, "null output pointer");
        }
        *out = ptr::null_mut();
        let mut config = SearchConfig::default();
        if max_length > 0 {
            config.max_length = max_length;
        }
        match decide_with(m, want_count, &config) {
            Ok(inner) => {
                let witness = witness_cstring(inner.witness.as_ref().map(|w| w.to_string()));
                *out = Box::into_raw(Box::new(FswSearch { inner, witness }));
                FswStatus::Ok
            }
            Err(e @ SearchError::AboveBound { .. }) => fail(FswStatus::AboveBound, e),
            Err(e) => fail(FswStatus::Internal, e),
        }
    })
}

/// # Safety
/// `search` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsw_search_exists(search: *const FswSearch) -> bool {
    (*search).inner.exists
}

/// # Safety
/// `search` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsw_search_nodes(search: *const FswSearch) -> u64 {
    (*search).inner.nodes_explored
}

/// Writes the number of circular FS words to `*count` and returns true when
/// counting was requested; returns false otherwise.
///
/// # Safety
/// `search` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsw_search_count(search: *const FswSearch, count: *mut u64) -> bool {
    match (*search).inner.count {
        Some(c) if !count.is_null() => {
            *count = c;
            true
        }
        _ => false,
    }
}

/// Least circular FS word of the searched length, or null. Borrowed from the
/// handle.
///
/// # Safety
/// `search` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fsw_search_witness(search: *const FswSearch) -> *const c_char {
    match &(*search).witness {
        Some(w) => w.as_ptr(),
        None => ptr::null(),
    }
}

/// # Safety
/// `search` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fsw_search_free(search: *mut FswSearch) {
    if !search.is_null() {
        drop(Box::from_raw(search));
    }
}

/// Re-verifies the embedded catalog from scratch.
#[no_mangle]
pub extern "C" fn fsw_catalog_verify() -> FswStatus {
    guard(|| match Catalog::parse_embedded().and_then(|mut c| c.verify()) {
        Ok(()) => FswStatus::Ok,
        Err(e) => fail(FswStatus::Internal, e),
    })
}

/// Lengths in `1..max` not reachable from the catalog morphisms. Writes up
/// to `capacity` values into `buffer` and the total count into `*len`; if
/// the total exceeds `capacity` the status is `BUFFER_TOO_SMALL`.
///
/// # Safety
/// `buffer` must hold `capacity` values (may be null when `capacity` is 0);
/// `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fsw_knockout(max: usize, buffer: *mut usize, capacity: usize, len: *mut usize) -> FswStatus {
    guard(|| {
        if len.is_null() || (buffer.is_null() && capacity > 0) {
            return fail(FswStatus::NullPointer, "null argument");
        }
        let catalog = match load_catalog() {
            Ok(c) => c,
            Err(e) => return fail(FswStatus::Internal, e),
        };
        let leftover = knockout(catalog, max);
        *len = leftover.len();
        if leftover.len() > capacity {
            return fail(
                FswStatus::BufferTooSmall,
                format!("need room for {} values", leftover.len()),
            );
        }
        if !leftover.is_empty() {
            ptr::copy_nonoverlapping(leftover.as_ptr(), buffer, leftover.len());
        }
        FswStatus::Ok
    })
}
