//! C ABI for afsterm.
//!
//! Systems are opaque handles created by [`afsterm_system_parse`] and released
//! with [`afsterm_system_free`]. Every fallible call returns an
//! [`AfstermStatus`]; on failure a message is available from
//! [`afsterm_last_error`] on the same thread until the next call. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with [`afsterm_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use afsterm::certificate::verify_certificate_text;
use afsterm::syntax::{parse_term, print_term};
use afsterm::{find_interpretation, infer, normalize, parse_afs, Afs, SearchConfig, SearchFailure, VarEnv};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfstermStatus {
    /// Success: YES, ACCEPT, or a normal form was reached.
    Ok = 0,
    /// The search gave up without a certificate.
    Maybe = 1,
    /// The certificate was rejected.
    Rejected = 2,
    /// Normalization ran out of fuel.
    FuelExhausted = 3,
    /// Malformed system, term, option or unsupported input.
    InvalidInput = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    /// An internal error; the message says more.
    Internal = 7,
}

/// A parsed and well-formed rewrite system.
pub struct AfstermSystem {
    afs: Afs,
}

/// Options for [`afsterm_check`]; obtain defaults from
/// [`afsterm_check_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct AfstermCheckOptions {
    pub degree: u8,
    pub max_coeff: u32,
    /// Wall-clock limit in milliseconds.
    pub timeout_ms: u64,
    /// Worker threads; 0 means one per available core.
    pub jobs: usize,
    /// Allow function arguments in the polynomial templates.
    pub fun_args: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(AfstermStatus, String);

/// Runs `f`, recording its error message and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<AfstermStatus, Fail>) -> AfstermStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal error");
            AfstermStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(AfstermStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(AfstermStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn system_arg<'a>(p: *const AfstermSystem) -> Result<&'a AfstermSystem, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(AfstermStatus::NullPointer, "system is null".into()))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses a system in the `.afs` text format. On success `*out` receives a
/// handle to be released with [`afsterm_system_free`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn afsterm_system_parse(text: *const c_char, out: *mut *mut AfstermSystem) -> AfstermStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(AfstermStatus::NullPointer, "out is null".into()));
        }
        *out = ptr::null_mut();
        let text = str_arg(text, "text")?;
        let afs = parse_afs(text).map_err(|e| Fail(AfstermStatus::InvalidInput, e.to_string()))?;
        *out = Box::into_raw(Box::new(AfstermSystem { afs }));
        Ok(AfstermStatus::Ok)
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `system` must come from [`afsterm_system_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn afsterm_system_free(system: *mut AfstermSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Number of rules, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn afsterm_system_rule_count(system: *const AfstermSystem) -> usize {
    system.as_ref().map_or(0, |s| s.afs.rules.len())
}

/// Number of function symbols, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn afsterm_system_symbol_count(system: *const AfstermSystem) -> usize {
    system.as_ref().map_or(0, |s| s.afs.sig.len())
}

#[no_mangle]
pub extern "C" fn afsterm_check_options_default() -> AfstermCheckOptions {
    let d = SearchConfig::default();
    AfstermCheckOptions {
        degree: d.degree,
        max_coeff: d.max_coeff,
        timeout_ms: d.timeout.as_millis() as u64,
        jobs: 0,
        fun_args: d.allow_fun_args,
    }
}

/// Searches for a termination certificate. Returns `Ok` and stores the
/// certificate text in `*cert_out` (if non-null), or `Maybe` when none was
/// found; the reason is then available from [`afsterm_last_error`].
/// `options` may be null for the defaults.
///
/// # Safety
/// `system` must be a live handle; `options` and `cert_out` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn afsterm_check(
    system: *const AfstermSystem,
    options: *const AfstermCheckOptions,
    cert_out: *mut *mut c_char,
) -> AfstermStatus {
    guard(|| {
        if !cert_out.is_null() {
            *cert_out = ptr::null_mut();
        }
        let sys = system_arg(system)?;
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| afsterm_check_options_default());
        let mut cfg = SearchConfig {
            max_coeff: o.max_coeff,
            degree: o.degree,
            allow_fun_args: o.fun_args,
            timeout: Duration::from_millis(o.timeout_ms),
            ..SearchConfig::default()
        };
        if o.jobs > 0 {
            cfg.parallelism = o.jobs;
        }
        match find_interpretation(&sys.afs, &cfg) {
            Ok(cert) => {
                if !cert_out.is_null() {
                    *cert_out = to_c(cert.to_string());
                }
                Ok(AfstermStatus::Ok)
            }
            Err(f @ (SearchFailure::Exhausted(_) | SearchFailure::Timeout(_))) => {
                Err(Fail(AfstermStatus::Maybe, f.to_string()))
            }
            Err(e) => Err(Fail(AfstermStatus::InvalidInput, e.to_string())),
        }
    })
}

/// Checks a certificate against the system: `Ok` to accept, `Rejected` with
/// the reason in [`afsterm_last_error`] otherwise.
///
/// # Safety
/// `system` must be a live handle and `cert` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn afsterm_verify(system: *const AfstermSystem, cert: *const c_char) -> AfstermStatus {
    guard(|| {
        let sys = system_arg(system)?;
        let text = str_arg(cert, "cert")?;
        verify_certificate_text(&sys.afs, text)
            .map(|()| AfstermStatus::Ok)
            .map_err(|r| Fail(AfstermStatus::Rejected, r.to_string()))
    })
}

/// Rewrites a closed term (concrete syntax) leftmost-outermost. Stores the
/// last term reached in `*term_out` and the number of steps in `*steps_out`
/// (each if non-null). Returns `FuelExhausted` if `fuel` steps were not
/// enough.
///
/// # Safety
/// `system` must be a live handle, `term` a NUL-terminated string, and the
/// out-pointers null or valid.
#[no_mangle]
pub unsafe extern "C" fn afsterm_normalize(
    system: *const AfstermSystem,
    term: *const c_char,
    fuel: usize,
    term_out: *mut *mut c_char,
    steps_out: *mut usize,
) -> AfstermStatus {
    guard(|| {
        if !term_out.is_null() {
            *term_out = ptr::null_mut();
        }
        let sys = system_arg(system)?;
        let text = str_arg(term, "term")?;
        let sig = &sys.afs.sig;
        let bad = |e: String| Fail(AfstermStatus::InvalidInput, e);
        let t = parse_term(sig, text).map_err(|e| bad(e.to_string()))?;
        infer(sig, &VarEnv::empty(), &t).map_err(|e| bad(e.to_string()))?;
        let (last, steps, status) = match normalize(&sys.afs, &VarEnv::empty(), &t, fuel) {
            Ok(n) => (n.normal_form, n.trace.len(), AfstermStatus::Ok),
            Err(e) => {
                let last = e.last_term().cloned().unwrap_or(t);
                set_error(e.to_string());
                (last, e.trace.len(), AfstermStatus::FuelExhausted)
            }
        };
        if !term_out.is_null() {
            *term_out = to_c(print_term(sig, &last));
        }
        if !steps_out.is_null() {
            *steps_out = steps;
        }
        Ok(status)
    })
}

/// The message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn afsterm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn afsterm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The library version as a static string.
#[no_mangle]
pub extern "C" fn afsterm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
