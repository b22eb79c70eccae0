//! C ABI over `harmonic-core`.
//!
//! Every fallible function returns a [`HarmonicStatus`] and writes results
//! through out-pointers. On failure a message is available from
//! [`harmonic_last_error_message`] on the same thread. Objects returned
//! through `*mut *mut T` are owned by the caller and released with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harmonic_core::embedding::circle_check;
use harmonic_core::jacobi::{integrate_jacobi, volume_density_profile, CurvatureField};
use harmonic_core::radial_ode::phi_polynomial;
use harmonic_core::trig_poly::interlacing_check;
use harmonic_core::{Error, ExactCosPolynomial, ExponentPair, ModelSpace, RadialProfile};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Unsupported = 4,
    Numerical = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A rank-one symmetric space or flat space.
pub struct HarmonicSpace(ModelSpace);

/// Samples of a radial function on a grid.
pub struct HarmonicProfile(RadialProfile);

/// Exact polynomial in `cos r` with rational coefficients.
pub struct HarmonicPoly(ExactCosPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HarmonicStatus {
    match e {
        Error::InvalidSpaceId(_)
        | Error::InvalidSpace(_)
        | Error::InvalidArgument(_)
        | Error::InvalidExponents(_)
        | Error::InconsistentExponents { .. }
        | Error::DegreeTooLow { .. }
        | Error::InsufficientResolution(_) => HarmonicStatus::InvalidArgument,
        Error::Domain { .. } => HarmonicStatus::Domain,
        Error::UnsupportedSpace(_) => HarmonicStatus::Unsupported,
        _ => HarmonicStatus::Numerical,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (HarmonicStatus, String)>>(f: F) -> HarmonicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HarmonicStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            HarmonicStatus::Panic
        }
    }
}

trait IntoFfi<T> {
    fn ffi(self) -> Result<T, (HarmonicStatus, String)>;
}

impl<T> IntoFfi<T> for harmonic_core::Result<T> {
    fn ffi(self) -> Result<T, (HarmonicStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn null(what: &str) -> (HarmonicStatus, String) {
    (HarmonicStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (HarmonicStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (HarmonicStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn exponents(alpha: f64, beta: f64) -> Result<ExponentPair, (HarmonicStatus, String)> {
    ExponentPair::from_f64(alpha, beta).ffi()
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn harmonic_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn harmonic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an identifier such as `sphere:3`, `cpn:2` or `op2`.
///
/// # Safety
/// `id` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_space_parse(id: *const c_char, out: *mut *mut HarmonicSpace) -> HarmonicStatus {
    guard(|| {
        if id.is_null() {
            return Err(null("id"));
        }
        let s = CStr::from_ptr(id)
            .to_str()
            .map_err(|_| (HarmonicStatus::InvalidArgument, "id is not UTF-8".to_string()))?;
        let space: ModelSpace = s.parse().ffi()?;
        write(out, Box::into_raw(Box::new(HarmonicSpace(space))), "out")
    })
}

/// # Safety
/// `space` must come from [`harmonic_space_parse`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn harmonic_space_free(space: *mut HarmonicSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Real dimension `n`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_space_dimension(space: *const HarmonicSpace, out_n: *mut u32) -> HarmonicStatus {
    guard(|| write(out_n, deref(space, "space")?.0.n(), "out_n"))
}

/// Density exponents of a compact space.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_space_exponents(
    space: *const HarmonicSpace,
    out_alpha: *mut f64,
    out_beta: *mut f64,
) -> HarmonicStatus {
    guard(|| {
        let e = deref(space, "space")?.0.exponents().ffi()?;
        write(out_alpha, e.alpha_f64(), "out_alpha")?;
        write(out_beta, e.beta_f64(), "out_beta")
    })
}

/// Closed-form `r^(n-1) omega(r)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_space_density(space: *const HarmonicSpace, r: f64, out: *mut f64) -> HarmonicStatus {
    guard(|| write(out, deref(space, "space")?.0.closed_form_density(r).ffi()?, "out"))
}

/// Einstein constant of a compact space.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_space_ricci(space: *const HarmonicSpace, out: *mut f64) -> HarmonicStatus {
    guard(|| {
        let ric = deref(space, "space")?.0.ricci().ffi()?;
        write(out, *ric.numer() as f64 / *ric.denom() as f64, "out")
    })
}

/// `det J` from Jacobi-tensor integration on `grid_size` uniform points over `[0, r_max]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_density_profile(
    space: *const HarmonicSpace,
    r_max: f64,
    grid_size: usize,
    out: *mut *mut HarmonicProfile,
) -> HarmonicStatus {
    guard(|| {
        let s = &deref(space, "space")?.0;
        let traj = integrate_jacobi(&CurvatureField::for_space(s), r_max, grid_size).ffi()?;
        let profile = volume_density_profile(&traj).ffi()?;
        write(out, Box::into_raw(Box::new(HarmonicProfile(profile))), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_profile_len(profile: *const HarmonicProfile, out_len: *mut usize) -> HarmonicStatus {
    guard(|| write(out_len, deref(profile, "profile")?.0.len(), "out_len"))
}

/// Copies grid and values into caller buffers of length `len`, which must be
/// at least the profile length. Either buffer may be NULL to skip it.
///
/// # Safety
/// Non-null buffers must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn harmonic_profile_copy(
    profile: *const HarmonicProfile,
    grid: *mut f64,
    values: *mut f64,
    len: usize,
) -> HarmonicStatus {
    guard(|| {
        let p = &deref(profile, "profile")?.0;
        if len < p.len() {
            return Err((HarmonicStatus::BufferTooSmall, format!("need {} entries, got {len}", p.len())));
        }
        if !grid.is_null() {
            ptr::copy_nonoverlapping(p.grid.as_ptr(), grid, p.len());
        }
        if !values.is_null() {
            ptr::copy_nonoverlapping(p.values.as_ptr(), values, p.len());
        }
        Ok(())
    })
}

/// # Safety
/// `profile` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn harmonic_profile_free(profile: *mut HarmonicProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// `lambda_k = k (k + alpha + beta)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_spectrum(alpha: f64, beta: f64, k: u32, out: *mut f64) -> HarmonicStatus {
    guard(|| {
        let l = exponents(alpha, beta)?.spectrum(k);
        write(out, *l.numer() as f64 / *l.denom() as f64, "out")
    })
}

/// Exact radial eigenfunction `Phi_{lambda_k}` as a polynomial in `cos r`.
/// Exponents must be nonnegative integers or half-integers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn harmonic_phi_polynomial(
    alpha: f64,
    beta: f64,
    k: u32,
    out: *mut *mut HarmonicPoly,
) -> HarmonicStatus {
    guard(|| {
        let p = phi_polynomial(&exponents(alpha, beta)?, k).ffi()?;
        write(out, Box::into_raw(Box::new(HarmonicPoly(p))), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_poly_degree(poly: *const HarmonicPoly, out: *mut usize) -> HarmonicStatus {
    guard(|| write(out, deref(poly, "poly")?.0.degree(), "out"))
}

/// Coefficients in ascending powers of `cos r`, rounded to double.
///
/// # Safety
/// `out` must hold `len >= degree + 1` doubles.
#[no_mangle]
pub unsafe extern "C" fn harmonic_poly_coefficients(poly: *const HarmonicPoly, out: *mut f64, len: usize) -> HarmonicStatus {
    guard(|| {
        let c = deref(poly, "poly")?.0.to_f64().into_coeffs();
        if out.is_null() {
            return Err(null("out"));
        }
        if len < c.len() {
            return Err((HarmonicStatus::BufferTooSmall, format!("need {} entries, got {len}", c.len())));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), out, c.len());
        Ok(())
    })
}

/// Exact coefficient `index` as a string like `3/4`; free with [`harmonic_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_poly_coefficient_string(
    poly: *const HarmonicPoly,
    index: usize,
    out: *mut *mut c_char,
) -> HarmonicStatus {
    guard(|| {
        let p = &deref(poly, "poly")?.0;
        let c = p
            .coeffs()
            .get(index)
            .ok_or_else(|| (HarmonicStatus::InvalidArgument, format!("index {index} above degree {}", p.degree())))?;
        let s = CString::new(c.to_string()).expect("rationals print without NUL");
        write(out, s.into_raw(), "out")
    })
}

/// `Phi(r)` evaluated at a radius.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_poly_eval_radius(poly: *const HarmonicPoly, r: f64, out: *mut f64) -> HarmonicStatus {
    guard(|| write(out, deref(poly, "poly")?.0.to_f64().value_at_radius(r), "out"))
}

/// Whether the roots of the polynomial and its derivative strictly alternate in `(-1, 1)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_interlacing_check(
    poly: *const HarmonicPoly,
    tol: f64,
    out_ok: *mut bool,
) -> HarmonicStatus {
    guard(|| {
        let p = deref(poly, "poly")?.0.to_f64();
        write(out_ok, interlacing_check(&p, tol).ffi()?, "out_ok")
    })
}

/// # Safety
/// `poly` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn harmonic_poly_free(poly: *mut HarmonicPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Radius of the geodesic circles of the first eigenfunction embedding and the
/// deviation of its screw function from a circle.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn harmonic_circle_check(
    alpha: f64,
    beta: f64,
    out_radius: *mut f64,
    out_deviation: *mut f64,
) -> HarmonicStatus {
    guard(|| {
        let c = circle_check(&exponents(alpha, beta)?).ffi()?;
        write(out_radius, c.radius, "out_radius")?;
        write(out_deviation, c.max_deviation, "out_deviation")
    })
}

/// # Safety
/// `s` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn harmonic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
