//! C ABI over `simplexion`.
//!
//! Complexes cross the boundary as opaque `SxComplex` handles. Every fallible
//! function returns an [`SxStatus`]; on failure a message is available from
//! [`sx_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`sx_string_free`], handles with [`sx_complex_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use simplexion::{conn, hodge, io, refine, Complex, Error};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SxStatus {
    Ok = 0,
    InvalidInput = 1,
    NotFound = 2,
    /// A size cap or caller buffer is too small.
    Resource = 3,
    Numeric = 4,
    Internal = 5,
    NullPointer = 6,
    Panic = 7,
}

/// Opaque complex handle.
pub struct SxComplex(Complex);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SxStatus {
    match e {
        Error::InvalidInput(_) | Error::Json(_) | Error::Io(_) => SxStatus::InvalidInput,
        Error::NotFound(_) => SxStatus::NotFound,
        Error::Resource(_) => SxStatus::Resource,
        Error::Numeric(_) => SxStatus::Numeric,
        Error::Invariant(_) => SxStatus::Internal,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (SxStatus, String)>) -> SxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SxStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_owned());
            set_error(&msg);
            SxStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SxStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SxStatus, String) {
    (SxStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a live handle from this library.
unsafe fn complex<'a>(p: *const SxComplex) -> Result<&'a Complex, (SxStatus, String)> {
    p.as_ref().map(|c| &c.0).ok_or_else(|| null("complex"))
}

/// Copy `values` into a caller buffer of `cap` entries, always reporting the
/// needed length through `len`.
///
/// # Safety
/// `buf` must be valid for `cap` writes when non-null; `len` must be valid.
unsafe fn write_slice(values: &[u64], buf: *mut u64, cap: usize, len: *mut usize) -> Result<(), (SxStatus, String)> {
    if len.is_null() {
        return Err(null("len"));
    }
    *len = values.len();
    if values.len() > cap || (buf.is_null() && !values.is_empty()) {
        return Err((SxStatus::Resource, format!("buffer holds {cap} entries, {} needed", values.len())));
    }
    if !values.is_empty() {
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn sx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse complex JSON `{"facets": [[...], ...]}` into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_complex_from_json(json: *const c_char, out: *mut *mut SxComplex) -> SxStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (SxStatus::InvalidInput, "json is not UTF-8".to_owned()))?;
        let c = io::complex_from_str(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(SxComplex(c)));
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sx_complex_free(c: *mut SxComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Canonical JSON of a complex; free the result with [`sx_string_free`].
///
/// # Safety
/// `c` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_complex_to_json(c: *const SxComplex, out: *mut *mut c_char) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(io::complex_to_string(c)).map_err(|e| (SxStatus::Internal, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `c` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_num_simplices(c: *const SxComplex, out: *mut usize) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        *out.as_mut().ok_or_else(|| null("out"))? = c.len();
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_euler_characteristic(c: *const SxComplex, out: *mut i64) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        *out.as_mut().ok_or_else(|| null("out"))? = c.euler_characteristic();
        Ok(())
    })
}

/// Wu characteristic `ω(G)`.
///
/// # Safety
/// `c` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_wu_characteristic(c: *const SxComplex, out: *mut i64) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        *out.as_mut().ok_or_else(|| null("out"))? = c.wu();
        Ok(())
    })
}

/// f-vector into `buf`; `len` receives the needed length even when `cap` is
/// too small, in which case `SX_STATUS_RESOURCE` is returned.
///
/// # Safety
/// `c` must be a live handle, `buf` valid for `cap` writes, `len` valid.
#[no_mangle]
pub unsafe extern "C" fn sx_f_vector(c: *const SxComplex, buf: *mut u64, cap: usize, len: *mut usize) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        write_slice(c.f_vector().counts(), buf, cap, len)
    })
}

/// Betti numbers `b_0, ..., b_d`, with the same buffer protocol as
/// [`sx_f_vector`].
///
/// # Safety
/// `c` must be a live handle, `buf` valid for `cap` writes, `len` valid.
#[no_mangle]
pub unsafe extern "C" fn sx_betti(c: *const SxComplex, buf: *mut u64, cap: usize, len: *mut usize) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        let b: Vec<u64> = hodge::betti(c).map_err(lib)?.betti.into_iter().map(|x| x as u64).collect();
        write_slice(&b, buf, cap, len)
    })
}

/// Barycentric refinement as a new handle. `cap` bounds the number of
/// simplices; 0 selects the library default.
///
/// # Safety
/// `c` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_barycentric(c: *const SxComplex, cap: u64, out: *mut *mut SxComplex) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cap = if cap == 0 { refine::default_cap() } else { cap };
        let r = refine::barycentric_capped(c, cap).map_err(lib)?;
        *out = Box::into_raw(Box::new(SxComplex(r)));
        Ok(())
    })
}

/// Exact determinant of the connection matrix.
///
/// # Safety
/// `c` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sx_connection_determinant(c: *const SxComplex, out: *mut i64) -> SxStatus {
    guard(|| {
        let c = complex(c)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        conn::check_exact_cap(c).map_err(lib)?;
        let d = conn::det_exact(&conn::connection_matrix(c)).map_err(lib)?;
        *out = hodge::to_i64(&d).map_err(lib)?;
        Ok(())
    })
}
