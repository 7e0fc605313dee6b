use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use afsterm_ffi::*;

const MAP: &str = include_str!("../../core/corpus/map.afs");
const LOOP: &str = include_str!("../../core/corpus/loop.afs");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = afsterm_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    afsterm_string_free(p);
    s
}

unsafe fn parse(text: &str) -> *mut AfstermSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(afsterm_system_parse(c(text).as_ptr(), &mut sys), AfstermStatus::Ok);
    assert!(!sys.is_null());
    sys
}

#[test]
fn check_then_verify_map() {
    unsafe {
        let sys = parse(MAP);
        assert_eq!(afsterm_system_rule_count(sys), 2);
        assert_eq!(afsterm_system_symbol_count(sys), 5);
        let mut cert = ptr::null_mut();
        assert_eq!(afsterm_check(sys, ptr::null(), &mut cert), AfstermStatus::Ok);
        let text = take(cert);
        assert!(text.starts_with("CERT v1\n"), "{text}");
        assert_eq!(afsterm_verify(sys, c(&text).as_ptr()), AfstermStatus::Ok);
        assert_eq!(last_error(), None);
        afsterm_system_free(sys);
    }
}

#[test]
fn loop_is_maybe_with_a_reason() {
    unsafe {
        let sys = parse(LOOP);
        let mut opts = afsterm_check_options_default();
        opts.jobs = 1;
        let mut cert = ptr::null_mut();
        assert_eq!(afsterm_check(sys, &opts, &mut cert), AfstermStatus::Maybe);
        assert!(cert.is_null());
        assert!(last_error().is_some());
        afsterm_system_free(sys);
    }
}

#[test]
fn bad_certificate_is_rejected() {
    unsafe {
        let sys = parse(MAP);
        assert_eq!(
            afsterm_verify(sys, c("CERT v1\nsymbol nil = 0\n").as_ptr()),
            AfstermStatus::Rejected
        );
        assert!(last_error().unwrap().starts_with("SignatureMismatch"));
        afsterm_system_free(sys);
    }
}

#[test]
fn normalize_and_fuel() {
    unsafe {
        let sys = parse(MAP);
        let (mut out, mut steps) = (ptr::null_mut(), 0usize);
        let term = c("map (\\x:nat. s x) (cons 0 nil)");
        assert_eq!(
            afsterm_normalize(sys, term.as_ptr(), 100, &mut out, &mut steps),
            AfstermStatus::Ok
        );
        assert_eq!((take(out), steps), ("cons (s 0) nil".to_string(), 3));
        assert_eq!(
            afsterm_normalize(sys, term.as_ptr(), 1, &mut out, &mut steps),
            AfstermStatus::FuelExhausted
        );
        assert_eq!(steps, 1);
        afsterm_string_free(out);
        assert_eq!(
            afsterm_normalize(sys, c("nil nil").as_ptr(), 10, &mut out, ptr::null_mut()),
            AfstermStatus::InvalidInput
        );
        assert!(out.is_null());
        afsterm_system_free(sys);
    }
}

#[test]
fn invalid_inputs() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(
            afsterm_system_parse(c("SIG\nf : nat -> nat\nRULES\nf y => y\n").as_ptr(), &mut sys),
            AfstermStatus::InvalidInput
        );
        assert!(sys.is_null());
        assert!(last_error().unwrap().contains("line 4, column 3"));
        assert_eq!(afsterm_system_parse(ptr::null(), &mut sys), AfstermStatus::NullPointer);
        assert_eq!(
            afsterm_system_parse(c("SIG\n").as_ptr(), ptr::null_mut()),
            AfstermStatus::NullPointer
        );
        let bytes = [0xffu8, 0xfe, 0];
        assert_eq!(
            afsterm_system_parse(bytes.as_ptr().cast(), &mut sys),
            AfstermStatus::InvalidUtf8
        );
        assert_eq!(
            afsterm_check(ptr::null(), ptr::null(), ptr::null_mut()),
            AfstermStatus::NullPointer
        );
        assert_eq!(afsterm_system_rule_count(ptr::null()), 0);
        afsterm_system_free(ptr::null_mut());
        afsterm_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(afsterm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
