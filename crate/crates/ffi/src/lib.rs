//! C ABI over the scdr engine.
//!
//! Sessions are opaque handles. Every call returns an [`ScdrStatus`]; strings
//! handed out by the library must be released with [`scdr_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use scdr_core::cli::{self, Cli, ScalarRing, SessionConfig};
use scdr_core::terms::Algebra;
use scdr_core::ScdrError;

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScdrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NonHomogeneous = 4,
    VerificationFailed = 5,
    InvalidArgument = 6,
    Panic = 7,
}

impl From<&ScdrError> for ScdrStatus {
    fn from(e: &ScdrError) -> Self {
        match e {
            ScdrError::Parse { .. } => ScdrStatus::ParseError,
            ScdrError::NonHomogeneous => ScdrStatus::NonHomogeneous,
            _ => ScdrStatus::InvalidArgument,
        }
    }
}

/// Opaque session: dimension, cutoff, memo tables and the last error.
pub struct ScdrSession {
    config: SessionConfig,
    algebra: Algebra,
    last_error: Option<CString>,
}

impl ScdrSession {
    fn fail(&mut self, status: ScdrStatus, msg: impl Into<String>) -> ScdrStatus {
        let msg = msg.into().replace('\0', " ");
        self.last_error = Some(CString::new(msg).expect("nul bytes removed"));
        status
    }
}

fn guard(f: impl FnOnce() -> ScdrStatus) -> ScdrStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(ScdrStatus::Panic)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ScdrStatus> {
    if p.is_null() {
        return Err(ScdrStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| ScdrStatus::InvalidUtf8)
}

unsafe fn write_out(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw();
}

/// Creates a session with `dim` coordinates and jet cutoff `cutoff`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn scdr_session_new(dim: u32, cutoff: u32, out: *mut *mut ScdrSession) -> ScdrStatus {
    guard(|| {
        if out.is_null() {
            return ScdrStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Ok(config) = SessionConfig::new(dim as usize, cutoff, ScalarRing::GaussianRational) else {
            return ScdrStatus::InvalidArgument;
        };
        let algebra = config.algebra();
        *out = Box::into_raw(Box::new(ScdrSession { config, algebra, last_error: None }));
        ScdrStatus::Ok
    })
}

/// Releases a session. Null is ignored.
///
/// # Safety
/// `session` must come from [`scdr_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scdr_session_free(session: *mut ScdrSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scdr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on `session`, or null. Owned by the session.
///
/// # Safety
/// `session` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn scdr_last_error(session: *const ScdrSession) -> *const c_char {
    match session.as_ref().and_then(|s| s.last_error.as_ref()) {
        Some(e) => e.as_ptr(),
        None => ptr::null(),
    }
}

/// Renders the Λ-bracket of two expressions into `*out`.
///
/// # Safety
/// `session` must be a live handle; `a`, `b` nul-terminated strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn scdr_bracket(
    session: *mut ScdrSession,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> ScdrStatus {
    guard(|| {
        let Some(s) = session.as_mut() else { return ScdrStatus::NullPointer };
        if out.is_null() {
            return ScdrStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let (ta, tb) = match (read_str(a), read_str(b)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => return s.fail(e, "bad string argument"),
        };
        let (dim, cutoff) = (s.config.dim, s.config.cutoff);
        let result = cli::dsl::parse_expr(ta, dim, cutoff)
            .and_then(|x| Ok((x, cli::dsl::parse_expr(tb, dim, cutoff)?)))
            .and_then(|(x, y)| s.algebra.lambda_bracket(&x, &y));
        match result {
            Ok(p) => {
                write_out(out, p.to_string());
                s.last_error = None;
                ScdrStatus::Ok
            }
            Err(e) => s.fail((&e).into(), e.to_string()),
        }
    })
}

/// Renders the normal form of an expression into `*out`.
///
/// # Safety
/// `session` must be a live handle; `expr` a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn scdr_normalize(session: *mut ScdrSession, expr: *const c_char, out: *mut *mut c_char) -> ScdrStatus {
    guard(|| {
        let Some(s) = session.as_mut() else { return ScdrStatus::NullPointer };
        if out.is_null() {
            return ScdrStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(expr) {
            Ok(t) => t,
            Err(e) => return s.fail(e, "bad string argument"),
        };
        let result = cli::dsl::parse_expr(text, s.config.dim, s.config.cutoff).and_then(|x| s.algebra.normalize(&x));
        match result {
            Ok(nf) => {
                write_out(out, nf.to_string());
                s.last_error = None;
                ScdrStatus::Ok
            }
            Err(e) => s.fail((&e).into(), e.to_string()),
        }
    })
}

/// Runs a verification suite, e.g. `"ns"` or `"n4 --flat-quaternionic"`,
/// with the session's dimension and cutoff. Writes the JSON reports to `*out`
/// and returns `VerificationFailed` when a check fails.
///
/// # Safety
/// `session` must be a live handle; `args` a nul-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn scdr_verify(session: *mut ScdrSession, args: *const c_char, out: *mut *mut c_char) -> ScdrStatus {
    guard(|| {
        let Some(s) = session.as_mut() else { return ScdrStatus::NullPointer };
        if out.is_null() {
            return ScdrStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(args) {
            Ok(t) => t,
            Err(e) => return s.fail(e, "bad string argument"),
        };
        let mut argv = vec![
            "scdr".to_string(),
            "--dim".into(),
            s.config.dim.to_string(),
            "--cutoff".into(),
            s.config.cutoff.to_string(),
            "verify".into(),
        ];
        argv.extend(text.split_whitespace().map(str::to_string));
        let parsed = match Cli::try_parse_from(argv) {
            Ok(c) => c,
            Err(e) => return s.fail(ScdrStatus::InvalidArgument, e.to_string()),
        };
        match cli::run(&parsed) {
            Ok(outcome) => {
                write_out(out, outcome.json.to_string());
                if outcome.success {
                    s.last_error = None;
                    ScdrStatus::Ok
                } else {
                    s.fail(ScdrStatus::VerificationFailed, "verification failed")
                }
            }
            Err(e) => s.fail((&e).into(), e.to_string()),
        }
    })
}
