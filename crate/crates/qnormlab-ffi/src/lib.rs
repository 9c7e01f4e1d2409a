//! C interface to the basis builder and the norm evaluators.
//!
//! Conventions: every function returns a [`QnlStatus`]; results leave
//! through out-pointers. Vectors cross the boundary as parallel arrays of
//! 1-based indices and values. Strings returned by this library must be
//! released with [`qnl_string_free`], basis handles with [`qnl_basis_free`].
//! All evaluations run at the default tolerance.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qnormlab::basis::{build_lsh_basis, verify_lsh_certificates, BasisParams, LshBasis};
use qnormlab::space::{
    dual_norm_over, lp_fnorm, BoundedBall, DualFunctional, LpSpaceModel, SparseVector,
    SubspaceChain,
};
use qnormlab::topology::{norm_e, np_norm, separation_witness, ExponentFunction};
use qnormlab::{Error, Tolerance};

/// Status of every call crossing the boundary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QnlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConstructionFailed = 3,
    VerificationFailed = 4,
    OutOfSpan = 5,
    NoWitness = 6,
    InvalidUtf8 = 7,
    JsonError = 8,
    InternalError = 9,
}

/// Opaque handle to a certified basis.
pub struct QnlBasis {
    inner: LshBasis,
}

fn status_of(err: &Error) -> QnlStatus {
    match err {
        Error::SpanError { .. } => QnlStatus::OutOfSpan,
        Error::NoWitnessFound { .. } | Error::ZeroSeparationWitness => QnlStatus::NoWitness,
        Error::Json(_) => QnlStatus::JsonError,
        Error::SingularChain { .. }
        | Error::ScalingFailure { .. }
        | Error::CertificateFailure { .. } => QnlStatus::ConstructionFailed,
        _ => QnlStatus::InvalidArgument,
    }
}

fn guarded<F: FnOnce() -> QnlStatus>(f: F) -> QnlStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(QnlStatus::InternalError)
}

/// # Safety
/// `indices` and `values` must point to `len` readable elements each.
unsafe fn vector_from_raw(
    indices: *const u32,
    values: *const f64,
    len: usize,
) -> Result<SparseVector, QnlStatus> {
    if len > 0 && (indices.is_null() || values.is_null()) {
        return Err(QnlStatus::NullPointer);
    }
    let idx = unsafe { std::slice::from_raw_parts(indices, len) };
    let val = unsafe { std::slice::from_raw_parts(values, len) };
    SparseVector::from_entries(idx.iter().copied().zip(val.iter().copied()).collect())
        .map_err(|_| QnlStatus::InvalidArgument)
}

/// Build a certified basis of `length` elements over the ball of the given
/// radius, with default construction parameters; `margin` of 0 selects the
/// model default. The handle is written to `out` on success.
///
/// # Safety
/// `out` must be a valid pointer; the result must be released with
/// [`qnl_basis_free`].
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_build(
    p: f64,
    radius: f64,
    length: usize,
    margin: f64,
    out: *mut *mut QnlBasis,
) -> QnlStatus {
    guarded(|| {
        if out.is_null() {
            return QnlStatus::NullPointer;
        }
        let model = match LpSpaceModel::new(p) {
            Ok(m) => m,
            Err(_) => return QnlStatus::InvalidArgument,
        };
        let ball = match BoundedBall::new(radius) {
            Ok(b) => b,
            Err(_) => return QnlStatus::InvalidArgument,
        };
        let mut params = BasisParams::defaults(&model);
        if margin != 0.0 {
            params.margin = margin;
        }
        match build_lsh_basis(
            &model,
            &ball,
            &SubspaceChain::Standard,
            &params,
            length,
            Tolerance::default(),
        ) {
            Ok(basis) => {
                unsafe { *out = Box::into_raw(Box::new(QnlBasis { inner: basis })) };
                QnlStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Release a basis handle. A null pointer is a no-op.
///
/// # Safety
/// `basis` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_free(basis: *mut QnlBasis) {
    if !basis.is_null() {
        drop(unsafe { Box::from_raw(basis) });
    }
}

/// Number of built elements.
///
/// # Safety
/// `basis` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_len(basis: *const QnlBasis) -> usize {
    if basis.is_null() {
        return 0;
    }
    unsafe { &*basis }.inner.len()
}

/// Re-verify every certificate of the basis.
///
/// # Safety
/// `basis` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_verify(basis: *const QnlBasis) -> QnlStatus {
    guarded(|| {
        if basis.is_null() {
            return QnlStatus::NullPointer;
        }
        let b = unsafe { &*basis };
        if verify_lsh_certificates(&b.inner, Tolerance::default()).passed() {
            QnlStatus::Ok
        } else {
            QnlStatus::VerificationFailed
        }
    })
}

/// Serialize the basis; the string is written to `out`.
///
/// # Safety
/// `basis` must be a live handle, `out` a valid pointer; release the string
/// with [`qnl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_to_json(
    basis: *const QnlBasis,
    out: *mut *mut c_char,
) -> QnlStatus {
    guarded(|| {
        if basis.is_null() || out.is_null() {
            return QnlStatus::NullPointer;
        }
        let json = unsafe { &*basis }.inner.to_json();
        match CString::new(json) {
            Ok(s) => {
                unsafe { *out = s.into_raw() };
                QnlStatus::Ok
            }
            Err(_) => QnlStatus::InternalError,
        }
    })
}

/// Parse a basis from JSON and return a fresh handle through `out`.
///
/// # Safety
/// `json` must be a NUL-terminated string, `out` a valid pointer; the
/// result must be released with [`qnl_basis_free`].
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_from_json(
    json: *const c_char,
    out: *mut *mut QnlBasis,
) -> QnlStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return QnlStatus::NullPointer;
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => return QnlStatus::InvalidUtf8,
        };
        match LshBasis::from_json(text) {
            Ok(basis) => {
                unsafe { *out = Box::into_raw(Box::new(QnlBasis { inner: basis })) };
                QnlStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Release a string returned by this library. A null pointer is a no-op.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qnl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// `Σ|x_i|^p` of the vector given as parallel arrays.
///
/// # Safety
/// `indices`/`values` must hold `len` elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnl_fnorm(
    p: f64,
    indices: *const u32,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> QnlStatus {
    guarded(|| {
        if out.is_null() {
            return QnlStatus::NullPointer;
        }
        let model = match LpSpaceModel::new(p) {
            Ok(m) => m,
            Err(_) => return QnlStatus::InvalidArgument,
        };
        let x = match unsafe { vector_from_raw(indices, values, len) } {
            Ok(x) => x,
            Err(status) => return status,
        };
        unsafe { *out = lp_fnorm(&x, &model) };
        QnlStatus::Ok
    })
}

/// `sup_{‖z‖_p ≤ radius} |f(z)|` for the functional with the given
/// coefficients.
///
/// # Safety
/// `indices`/`values` must hold `len` elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnl_dual_norm(
    p: f64,
    radius: f64,
    indices: *const u32,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> QnlStatus {
    guarded(|| {
        if out.is_null() {
            return QnlStatus::NullPointer;
        }
        let model = match LpSpaceModel::new(p) {
            Ok(m) => m,
            Err(_) => return QnlStatus::InvalidArgument,
        };
        let ball = match BoundedBall::new(radius) {
            Ok(b) => b,
            Err(_) => return QnlStatus::InvalidArgument,
        };
        let coeffs = match unsafe { vector_from_raw(indices, values, len) } {
            Ok(x) => x,
            Err(status) => return status,
        };
        let f = DualFunctional::from_coeffs(coeffs);
        unsafe { *out = dual_norm_over(&f, &ball, &model).value };
        QnlStatus::Ok
    })
}

/// Induced norm `Σ|e*_i(x)|·d_i` of a span vector.
///
/// # Safety
/// `basis` must be a live handle; `indices`/`values` must hold `len`
/// elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_norm_e(
    basis: *const QnlBasis,
    indices: *const u32,
    values: *const f64,
    len: usize,
    out: *mut f64,
) -> QnlStatus {
    guarded(|| {
        if basis.is_null() || out.is_null() {
            return QnlStatus::NullPointer;
        }
        let b = unsafe { &*basis };
        let x = match unsafe { vector_from_raw(indices, values, len) } {
            Ok(x) => x,
            Err(status) => return status,
        };
        match norm_e(&b.inner, &x, None, Tolerance::default()) {
            Ok(v) => {
                unsafe { *out = v };
                QnlStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// `‖z‖_{(n,𝔞)}` with the constant exponent function 𝔞 ≡ `exponent`.
///
/// # Safety
/// `basis` must be a live handle; `indices`/`values` must hold `len`
/// elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_np_norm(
    basis: *const QnlBasis,
    indices: *const u32,
    values: *const f64,
    len: usize,
    n: u32,
    exponent: f64,
    out: *mut f64,
) -> QnlStatus {
    guarded(|| {
        if basis.is_null() || out.is_null() {
            return QnlStatus::NullPointer;
        }
        let b = unsafe { &*basis };
        let x = match unsafe { vector_from_raw(indices, values, len) } {
            Ok(x) => x,
            Err(status) => return status,
        };
        let exps = match ExponentFunction::constant(exponent, n as usize) {
            Ok(e) => e,
            Err(_) => return QnlStatus::InvalidArgument,
        };
        match np_norm(&b.inner, &x, n, &exps, Tolerance::default()) {
            Ok(v) => {
                unsafe { *out = v };
                QnlStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}

/// Least m ≤ `m_max` with `‖x‖_{(m,𝔠)} > 2^{−m}`, written to `out`.
///
/// # Safety
/// `basis` must be a live handle; `indices`/`values` must hold `len`
/// elements; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qnl_basis_separation_witness(
    basis: *const QnlBasis,
    indices: *const u32,
    values: *const f64,
    len: usize,
    exponent: f64,
    m_max: u32,
    out: *mut u32,
) -> QnlStatus {
    guarded(|| {
        if basis.is_null() || out.is_null() {
            return QnlStatus::NullPointer;
        }
        let b = unsafe { &*basis };
        let x = match unsafe { vector_from_raw(indices, values, len) } {
            Ok(x) => x,
            Err(status) => return status,
        };
        match separation_witness(&b.inner, &x, exponent, m_max, Tolerance::default()) {
            Ok(m) => {
                unsafe { *out = m };
                QnlStatus::Ok
            }
            Err(err) => status_of(&err),
        }
    })
}
