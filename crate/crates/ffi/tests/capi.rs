use std::ffi::{c_char, CStr, CString};
use std::ptr;

use scdr_ffi::*;

struct Session(*mut ScdrSession);

impl Session {
    fn new(dim: u32, cutoff: u32) -> Self {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { scdr_session_new(dim, cutoff, &mut s) }, ScdrStatus::Ok);
        assert!(!s.is_null());
        Session(s)
    }

    fn last_error(&self) -> String {
        let p = unsafe { scdr_last_error(self.0) };
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

impl Drop for Session {
    fn drop(&mut self) {
        unsafe { scdr_session_free(self.0) };
    }
}

fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { scdr_string_free(p) };
    s
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn bracket_and_normalize() {
    let s = Session::new(1, 8);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { scdr_bracket(s.0, c("B1").as_ptr(), c("Psi1").as_ptr(), &mut out) }, ScdrStatus::Ok);
    assert_eq!(take(out), "1");
    assert_eq!(unsafe { scdr_bracket(s.0, c("S(B1)").as_ptr(), c("Psi1").as_ptr(), &mut out) }, ScdrStatus::Ok);
    assert_eq!(take(out), "chi");
    assert_eq!(unsafe { scdr_normalize(s.0, c("S(S(B1))").as_ptr(), &mut out) }, ScdrStatus::Ok);
    assert_eq!(take(out), "T B1");
    assert!(unsafe { scdr_last_error(s.0) }.is_null());
}

#[test]
fn error_codes() {
    let s = Session::new(1, 8);
    let mut out = ptr::null_mut();
    let st = unsafe { scdr_normalize(s.0, c(":B1").as_ptr(), &mut out) };
    assert_eq!(st, ScdrStatus::ParseError);
    assert!(out.is_null());
    assert!(s.last_error().contains("parse error"));
    let st = unsafe { scdr_normalize(s.0, c("B1 + Psi1").as_ptr(), &mut out) };
    assert_eq!(st, ScdrStatus::NonHomogeneous);
    let st = unsafe { scdr_normalize(s.0, c("B2").as_ptr(), &mut out) };
    assert_eq!(st, ScdrStatus::ParseError);
    assert!(s.last_error().contains("needs dimension 2"), "{}", s.last_error());
    let st = unsafe { scdr_normalize(s.0, ptr::null(), &mut out) };
    assert_eq!(st, ScdrStatus::NullPointer);
    let st = unsafe { scdr_normalize(ptr::null_mut(), c("B1").as_ptr(), &mut out) };
    assert_eq!(st, ScdrStatus::NullPointer);
    let bad = [0xffu8, 0];
    let st = unsafe { scdr_normalize(s.0, bad.as_ptr() as *const c_char, &mut out) };
    assert_eq!(st, ScdrStatus::InvalidUtf8);
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { scdr_session_new(0, 8, &mut none) }, ScdrStatus::InvalidArgument);
    assert!(none.is_null());
    assert_eq!(unsafe { scdr_session_new(1, 8, ptr::null_mut()) }, ScdrStatus::NullPointer);
}

#[test]
fn verify_suites() {
    let s = Session::new(2, 4);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { scdr_verify(s.0, c("ns").as_ptr(), &mut out) }, ScdrStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v[0]["central_charge"], "6");
    assert_eq!(unsafe { scdr_verify(s.0, c("n2").as_ptr(), &mut out) }, ScdrStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v[0]["central_charge"], "6");
    assert_eq!(unsafe { scdr_verify(s.0, c("bogus").as_ptr(), &mut out) }, ScdrStatus::InvalidArgument);
    assert!(out.is_null());
    assert_eq!(unsafe { scdr_verify(s.0, c("coordchange").as_ptr(), &mut out) }, ScdrStatus::InvalidArgument);
}

#[test]
fn failed_verification_still_reports() {
    let dir = std::env::temp_dir().join(format!("scdr-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let metric = dir.join("m.json");
    std::fs::write(&metric, r#"{"dim": 1, "g": [[{"0": "1", "2": "1"}]], "changes": {"q": {"forward": [{"1": "1", "2": "1"}]}}}"#).unwrap();
    let m = metric.display().to_string();
    let s = Session::new(1, 8);
    let mut out = ptr::null_mut();
    let args = format!("ns --metric {m} --change {m}#q --drop-g-term");
    assert_eq!(unsafe { scdr_verify(s.0, c(&args).as_ptr(), &mut out) }, ScdrStatus::VerificationFailed);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v[1]["verdict"], "fail");
    let args = format!("ns --metric {m} --change {m}#q");
    assert_eq!(unsafe { scdr_verify(s.0, c(&args).as_ptr(), &mut out) }, ScdrStatus::Ok);
    take(out);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/scdr.h");
    for name in [
        "scdr_session_new",
        "scdr_session_free",
        "scdr_string_free",
        "scdr_last_error",
        "scdr_bracket",
        "scdr_normalize",
        "scdr_verify",
        "SCDR_STATUS_VERIFICATION_FAILED",
        "typedef struct ScdrSession ScdrSession;",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn free_accepts_null() {
    unsafe {
        scdr_session_free(ptr::null_mut());
        scdr_string_free(ptr::null_mut());
        assert!(scdr_last_error(ptr::null()).is_null());
    }
}
