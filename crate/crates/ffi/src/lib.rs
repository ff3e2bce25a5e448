//! C ABI over `langweil`.
//!
//! Objects are opaque heap handles created by `lw_*_new` / `lw_*_parse` and
//! released by the matching `lw_*_free`. Every fallible call returns an
//! [`LwStatus`]; on failure `lw_last_error()` describes the error for the
//! calling thread. Strings returned through out-pointers are owned by the
//! caller and must be released with `lw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use langweil::components::component_count;
use langweil::counting::{
    count_affine_with, count_projective_with, CountOptions, DEFAULT_WORK_CAP,
};
use langweil::ledger::verify_proof_constants;
use langweil::refine::{iterate, HalfInt};
use langweil::{make_field, Error, Field, Hypersurface, MultiPoly, Setting};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    NonPrimeCharacteristic = 5,
    CapExceeded = 6,
    NotHomogeneous = 7,
    DimensionMismatch = 8,
    Arithmetic = 9,
    Series = 10,
    Panic = 99,
}

impl From<&Error> for LwStatus {
    fn from(e: &Error) -> Self {
        if e.is_cap_violation() {
            return LwStatus::CapExceeded;
        }
        match e {
            Error::NonPrimeCharacteristic(_) => LwStatus::NonPrimeCharacteristic,
            Error::Parse { .. } => LwStatus::Parse,
            Error::NotHomogeneous => LwStatus::NotHomogeneous,
            Error::ArityMismatch { .. } | Error::DimensionMismatch(_) => {
                LwStatus::DimensionMismatch
            }
            Error::DivisionByZero | Error::MixedFields | Error::NoEmbedding { .. } => {
                LwStatus::Arithmetic
            }
            Error::NonUnitLeading | Error::InsufficientOrder { .. } => LwStatus::Series,
            _ => LwStatus::InvalidArgument,
        }
    }
}

/// A finite field `F_{p^m}`.
pub struct LwField(Field);

/// A hypersurface in affine or projective space over an [`LwField`].
pub struct LwHypersurface(Hypersurface);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, recording the error message and mapping panics.
fn guard(f: impl FnOnce() -> Result<(), (LwStatus, String)>) -> LwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LwStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LwStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (LwStatus, String) {
    (LwStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (LwStatus, String) {
    (LwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (LwStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (LwStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (LwStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates `F_{p^m}`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lw_field_new(p: u64, m: u32, out: *mut *mut LwField) -> LwStatus {
    guard(|| {
        let f = make_field(p, m).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(LwField(f))), "out")
    })
}

/// Field order `q`, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lw_field_order(field: *const LwField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.q())
}

/// # Safety
/// `field` must be null or a handle from `lw_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_field_free(field: *mut LwField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Parses `{text = 0}` in `A^n` (`projective == false`, `n` variables) or
/// `P^n` (`n + 1` variables). Variables are `x, y, z, w` for up to four,
/// `x1, x2, ...` beyond.
///
/// # Safety
/// `field` must be a live handle, `text` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lw_hypersurface_parse(
    field: *const LwField,
    text: *const c_char,
    n: u32,
    projective: bool,
    out: *mut *mut LwHypersurface,
) -> LwStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        let text = str_arg(text, "text")?;
        let (setting, nvars) = if projective {
            (Setting::Projective, n as usize + 1)
        } else {
            (Setting::Affine, n as usize)
        };
        let f = MultiPoly::parse(text, nvars, &field.0).map_err(lib_err)?;
        let x = Hypersurface::new(setting, f).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(LwHypersurface(x))), "out")
    })
}

/// Degree, or 0 for a null handle.
///
/// # Safety
/// `x` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lw_hypersurface_degree(x: *const LwHypersurface) -> u32 {
    x.as_ref().map_or(0, |x| x.0.degree())
}

/// # Safety
/// `x` must be null or a handle from `lw_hypersurface_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_hypersurface_free(x: *mut LwHypersurface) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Number of `F_q`-points. `work_cap == 0` selects the default cap.
///
/// # Safety
/// `x` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lw_count(
    x: *const LwHypersurface,
    work_cap: u64,
    out: *mut u64,
) -> LwStatus {
    guard(|| {
        let x = &x.as_ref().ok_or_else(|| null("hypersurface"))?.0;
        let opts = CountOptions {
            work_cap: if work_cap == 0 {
                DEFAULT_WORK_CAP
            } else {
                work_cap as u128
            },
            ..CountOptions::default()
        };
        let res = match x.setting() {
            Setting::Affine => count_affine_with(x, x.field(), &opts),
            Setting::Projective => count_projective_with(x, x.field(), &opts),
        }
        .map_err(lib_err)?;
        write_out(out, res.count, "out")
    })
}

/// Number of absolutely irreducible `F_q`-components of the plane curve
/// `{text = 0}` in variables `x, y`.
///
/// # Safety
/// `field` must be a live handle, `text` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lw_component_count(
    field: *const LwField,
    text: *const c_char,
    out: *mut u32,
) -> LwStatus {
    guard(|| {
        let field = field.as_ref().ok_or_else(|| null("field"))?;
        let g = MultiPoly::parse(str_arg(text, "text")?, 2, &field.0).map_err(lib_err)?;
        let rep = component_count(&g).map_err(lib_err)?;
        write_out(out, rep.k, "out")
    })
}

/// Refinement table as JSON, up to `r_max = rmax_twice / 2`.
///
/// # Safety
/// `out` must be valid; the string is freed with `lw_string_free`.
#[no_mangle]
pub unsafe extern "C" fn lw_refine_json(
    d: u32,
    rmax_twice: i32,
    relax_pi: bool,
    out: *mut *mut c_char,
) -> LwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = HalfInt::from_twice(rmax_twice);
        let table = iterate(r, d, relax_pi).map_err(lib_err)?;
        let json = serde_json::to_string(&table.report(r))
            .map_err(|e| (LwStatus::InvalidArgument, e.to_string()))?;
        write_out(out, to_c_string(json), "out")
    })
}

/// Runs the constant checks for `2 <= d <= d_max`; `*all_passed` receives
/// the verdict.
///
/// # Safety
/// `all_passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lw_verify_constants(d_max: u32, all_passed: *mut bool) -> LwStatus {
    guard(|| {
        let rep = verify_proof_constants(d_max).map_err(lib_err)?;
        write_out(all_passed, rep.all_passed, "all_passed")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(lw_last_error()) }
            .to_string_lossy()
            .into_owned()
    }

    fn field(p: u64, m: u32) -> *mut LwField {
        let mut f = ptr::null_mut();
        assert_eq!(unsafe { lw_field_new(p, m, &mut f) }, LwStatus::Ok);
        f
    }

    fn count(f: *const LwField, text: &str, n: u32, projective: bool) -> (LwStatus, u64) {
        let c = CString::new(text).unwrap();
        let mut x = ptr::null_mut();
        let st = unsafe { lw_hypersurface_parse(f, c.as_ptr(), n, projective, &mut x) };
        if st != LwStatus::Ok {
            return (st, 0);
        }
        let mut out = 0;
        let st = unsafe { lw_count(x, 0, &mut out) };
        unsafe { lw_hypersurface_free(x) };
        (st, out)
    }

    #[test]
    fn counts_through_handles() {
        let f4 = field(2, 2);
        assert_eq!(unsafe { lw_field_order(f4) }, 4);
        assert_eq!(count(f4, "y^2+y-x^3", 2, false), (LwStatus::Ok, 8));
        assert_eq!(count(f4, "y^2+y-x^3", 3, false), (LwStatus::Ok, 32));
        assert_eq!(count(f4, "y^2*z+y*z^2-x^3", 3, true), (LwStatus::Ok, 37));
        unsafe { lw_field_free(f4) };
    }

    #[test]
    fn error_codes() {
        let mut f = ptr::null_mut();
        assert_eq!(
            unsafe { lw_field_new(4, 1, &mut f) },
            LwStatus::NonPrimeCharacteristic
        );
        assert!(f.is_null());
        assert!(last_error().contains("not prime"));
        assert_eq!(
            unsafe { lw_field_new(2, 30, &mut f) },
            LwStatus::CapExceeded
        );

        let f3 = field(3, 1);
        assert_eq!(count(f3, "x+", 2, false).0, LwStatus::Parse);
        assert_eq!(count(f3, "x^2+y", 2, true).0, LwStatus::NotHomogeneous);
        assert_eq!(
            unsafe { lw_count(ptr::null(), 0, ptr::null_mut()) },
            LwStatus::NullPointer
        );
        assert_eq!(count(f3, "x", 1, false), (LwStatus::Ok, 1));
        assert_eq!(last_error(), "");

        let mut x = ptr::null_mut();
        let text = CString::new("x+y+z+w").unwrap();
        unsafe { lw_hypersurface_parse(f3, text.as_ptr(), 4, false, &mut x) };
        let mut out = 0;
        assert_eq!(unsafe { lw_count(x, 10, &mut out) }, LwStatus::CapExceeded);
        unsafe {
            lw_hypersurface_free(x);
            lw_field_free(f3);
        }
    }

    #[test]
    fn components_and_constants() {
        let f5 = field(5, 1);
        let text = CString::new("x^2+y^2").unwrap();
        let mut k = 99;
        assert_eq!(
            unsafe { lw_component_count(f5, text.as_ptr(), &mut k) },
            LwStatus::Ok
        );
        assert_eq!(k, 2);
        let mut ok = false;
        assert_eq!(unsafe { lw_verify_constants(40, &mut ok) }, LwStatus::Ok);
        assert!(ok);
        unsafe { lw_field_free(f5) };
    }

    #[test]
    fn refine_json_roundtrip() {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { lw_refine_json(3, 4, true, &mut s) }, LwStatus::Ok);
        let json = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        unsafe { lw_string_free(s) };
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["table"][3]["D"], "35/2 + 1/6*pi^2");
        assert_eq!(
            unsafe { lw_refine_json(0, 2, true, &mut s) },
            LwStatus::InvalidArgument
        );
    }

    #[test]
    fn header_is_generated_and_valid_c() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/langweil.h");
        let header = std::fs::read_to_string(path).unwrap();
        for sym in [
            "lw_field_new",
            "lw_count",
            "lw_refine_json",
            "typedef struct LwField LwField",
            "LW_STATUS_CAP_EXCEEDED",
        ] {
            assert!(header.contains(sym), "{sym} missing from header");
        }
        // Syntax check when a C compiler is around.
        if let Ok(status) = std::process::Command::new("cc")
            .args(["-fsyntax-only", "-x", "c", path])
            .status()
        {
            assert!(status.success());
        }
    }
}
