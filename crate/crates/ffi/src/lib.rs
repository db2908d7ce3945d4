//! C ABI over the `cpv` library.
//!
//! Barcodes and modules cross the boundary as opaque handles; everything
//! else is text. Exact scalars are strings such as `"3/2"`, `"inf"` or
//! `"-inf"`, and documents use the same JSON the CLI reads and writes.
//!
//! Every function returns a [`CpvStatus`]. On failure a message is kept per
//! thread and can be read with [`cpv_last_error`]. Results are written through
//! out-pointers; strings handed out must be released with
//! [`cpv_string_free`], handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cpv::distance::{bottleneck_distance, interleaving_search};
use cpv::ellipsoid::{ellipsoid_barcode, EllipsoidParams};
use cpv::invariants::{
    boundary_depth, covering_number, long_bar_endpoints, spectral_invariant,
    translated_point_lower_bound,
};
use cpv::persistence::{decompose, module_from_barcode};
use cpv::scalar::{format_rational, parse_rational, Rational};
use cpv::{io, Barcode, Error, SampledModule};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpvStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON or scalar text.
    Parse = 3,
    Io = 4,
    /// Well-formed input the library rejects, such as an invalid module.
    Domain = 5,
    /// The input exceeds an enumeration bound.
    TooLarge = 6,
    /// The library panicked; this is a bug.
    Panic = 7,
}

/// Opaque barcode handle.
pub struct CpvBarcode(Barcode);

/// Opaque sampled-module handle.
pub struct CpvModule(SampledModule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Failure {
    Null,
    Utf8,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CpvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpvStatus::Ok,
        Ok(Err(Failure::Null)) => {
            set_error("null pointer argument".into());
            CpvStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            CpvStatus::InvalidUtf8
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            match e {
                Error::Parse(_) => CpvStatus::Parse,
                Error::Io(_) => CpvStatus::Io,
                Error::TooLarge(_) => CpvStatus::TooLarge,
                _ => CpvStatus::Domain,
            }
        }
        Err(_) => {
            set_error("internal panic".into());
            CpvStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null);
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn rational(p: *const c_char) -> Result<Rational, Failure> {
    Ok(parse_rational(text(p)?)?)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null)
}

fn writable<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure::Null)
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null);
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let s = CString::new(s)
        .map_err(|_| Failure::Lib(Error::InvalidArgument("interior NUL in output".into())))?;
    if out.is_null() {
        return Err(Failure::Null);
    }
    out.write(s.into_raw());
    Ok(())
}

unsafe fn put_barcode(out: *mut *mut CpvBarcode, b: Barcode) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(CpvBarcode(b))))
}

unsafe fn put_module(out: *mut *mut CpvModule, m: SampledModule) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(CpvModule(m))))
}

/// Message describing the last failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cpv_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cpv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a barcode document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_barcode_from_json(
    json: *const c_char,
    out: *mut *mut CpvBarcode,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_barcode(out, io::barcode_from_json(text(json)?)?)
    })
}

/// Serializes a barcode to JSON.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_barcode_to_json(
    b: *const CpvBarcode,
    out: *mut *mut c_char,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_string(out, io::barcode_to_json(&handle(b)?.0))
    })
}

/// Number of bars in `b`.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_barcode_len(b: *const CpvBarcode, out: *mut usize) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put(out, handle(b)?.0.len())
    })
}

/// Releases a barcode handle. Null is ignored.
///
/// # Safety
/// `b` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cpv_barcode_free(b: *mut CpvBarcode) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Parses and validates a module document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_module_from_json(
    json: *const c_char,
    out: *mut *mut CpvModule,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_module(out, io::module_from_json(text(json)?)?)
    })
}

/// Serializes a module to JSON.
///
/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_module_to_json(
    m: *const CpvModule,
    out: *mut *mut c_char,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_string(out, io::module_to_json(&handle(m)?.0))
    })
}

/// Releases a module handle. Null is ignored.
///
/// # Safety
/// `m` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cpv_module_free(m: *mut CpvModule) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Barcode of the ellipsoid with `n` factors, truncated at `horizon`.
///
/// # Safety
/// `factors` must point to `n` NUL-terminated strings, `horizon` must be a
/// NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_ellipsoid_barcode(
    factors: *const *const c_char,
    n: usize,
    horizon: *const c_char,
    out: *mut *mut CpvBarcode,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        if factors.is_null() && n > 0 {
            return Err(Failure::Null);
        }
        let factors = (0..n)
            .map(|i| rational(*factors.add(i)))
            .collect::<Result<Vec<_>, _>>()?;
        let params = EllipsoidParams::new(factors, rational(horizon)?)?;
        put_barcode(out, ellipsoid_barcode(&params))
    })
}

/// Interval decomposition of a module.
///
/// # Safety
/// `m` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_decompose(
    m: *const CpvModule,
    out: *mut *mut CpvBarcode,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_barcode(out, decompose(&handle(m)?.0)?)
    })
}

/// Canonical module realizing `b`, sampled `density` times per gap.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_module_from_barcode(
    b: *const CpvBarcode,
    density: usize,
    out: *mut *mut CpvModule,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_module(out, module_from_barcode(&handle(b)?.0, density)?)
    })
}

/// Bottleneck distance, written as a scalar string.
///
/// # Safety
/// `b1` and `b2` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_bottleneck(
    b1: *const CpvBarcode,
    b2: *const CpvBarcode,
    graded: bool,
    out: *mut *mut c_char,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        let (d, _) = bottleneck_distance(&handle(b1)?.0, &handle(b2)?.0, graded);
        put_string(out, d.to_string())
    })
}

/// Interleaving distance by exhaustive search, written as a scalar string.
///
/// # Safety
/// `m1` and `m2` must be live handles and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_interleaving(
    m1: *const CpvModule,
    m2: *const CpvModule,
    graded: bool,
    out: *mut *mut c_char,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        let result = interleaving_search(&handle(m1)?.0, &handle(m2)?.0, graded)?;
        put_string(out, result.delta.to_string())
    })
}

/// Spectral invariant of SH class `index`, written as a scalar string.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_spectral_invariant(
    b: *const CpvBarcode,
    index: usize,
    out: *mut *mut c_char,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_string(out, spectral_invariant(&handle(b)?.0, index)?.to_string())
    })
}

/// Boundary depth, written as a rational string.
///
/// # Safety
/// `b` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_boundary_depth(
    b: *const CpvBarcode,
    out: *mut *mut c_char,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put_string(out, format_rational(&boundary_depth(&handle(b)?.0)))
    })
}

/// Covering number of the endpoints of bars of length at least `delta`.
///
/// # Safety
/// `b` must be a live handle, `delta` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_covering_number(
    b: *const CpvBarcode,
    delta: *const c_char,
    out: *mut usize,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        let delta = rational(delta)?;
        let c = covering_number(&long_bar_endpoints(&handle(b)?.0, &delta), &delta)?;
        put(out, c.count)
    })
}

/// Lower bound on the number of translated-point lengths at scale `delta`.
///
/// # Safety
/// `b` must be a live handle, `delta` a NUL-terminated string and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cpv_translated_point_bound(
    b: *const CpvBarcode,
    delta: *const c_char,
    out: *mut usize,
) -> CpvStatus {
    guard(|| {
        writable(out)?;
        put(
            out,
            translated_point_lower_bound(&handle(b)?.0, &rational(delta)?)?,
        )
    })
}
