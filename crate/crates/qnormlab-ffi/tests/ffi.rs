use std::ffi::{CStr, CString};
use std::ptr;

use qnormlab_ffi::*;

fn build(p: f64, radius: f64, length: usize) -> *mut QnlBasis {
    let mut handle: *mut QnlBasis = ptr::null_mut();
    let status = unsafe { qnl_basis_build(p, radius, length, 0.0, &mut handle) };
    assert_eq!(status, QnlStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn build_verify_roundtrip() {
    let basis = build(0.5, 1.0, 6);
    assert_eq!(unsafe { qnl_basis_len(basis) }, 6);
    assert_eq!(unsafe { qnl_basis_verify(basis) }, QnlStatus::Ok);

    let mut json: *mut std::ffi::c_char = ptr::null_mut();
    assert_eq!(
        unsafe { qnl_basis_to_json(basis, &mut json) },
        QnlStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"dualnorm_C\""));

    let mut back: *mut QnlBasis = ptr::null_mut();
    let c = CString::new(text).unwrap();
    assert_eq!(
        unsafe { qnl_basis_from_json(c.as_ptr(), &mut back) },
        QnlStatus::Ok
    );
    assert_eq!(unsafe { qnl_basis_len(back) }, 6);
    assert_eq!(unsafe { qnl_basis_verify(back) }, QnlStatus::Ok);

    unsafe {
        qnl_string_free(json);
        qnl_basis_free(back);
        qnl_basis_free(basis);
    }
}

#[test]
fn norm_values_match_closed_forms() {
    let basis = build(0.5, 1.0, 6);
    let idx = [1u32];
    let val = [1.0f64];

    let mut fnorm = 0.0;
    assert_eq!(
        unsafe { qnl_fnorm(0.5, idx.as_ptr(), val.as_ptr(), 1, &mut fnorm) },
        QnlStatus::Ok
    );
    assert_eq!(fnorm, 1.0);

    let mut ne = 0.0;
    assert_eq!(
        unsafe { qnl_basis_norm_e(basis, idx.as_ptr(), val.as_ptr(), 1, &mut ne) },
        QnlStatus::Ok
    );
    assert_eq!(ne, 0.5);

    // out of span: index beyond the built prefix
    let far = [9u32];
    let mut dummy = 0.0;
    assert_eq!(
        unsafe { qnl_basis_norm_e(basis, far.as_ptr(), val.as_ptr(), 1, &mut dummy) },
        QnlStatus::OutOfSpan
    );

    let mut np = 0.0;
    assert_eq!(
        unsafe { qnl_basis_np_norm(basis, idx.as_ptr(), val.as_ptr(), 1, 1, 0.5, &mut np) },
        QnlStatus::Ok
    );
    assert!((np - (0.5 / 0.5f64.exp()).sqrt()).abs() < 1e-12);

    let two = [2u32];
    let mut m = 0u32;
    assert_eq!(
        unsafe {
            qnl_basis_separation_witness(basis, two.as_ptr(), val.as_ptr(), 1, 0.5, 64, &mut m)
        },
        QnlStatus::Ok
    );
    assert_eq!(m, 2);

    unsafe { qnl_basis_free(basis) };
}

#[test]
fn dual_norm_concentrates() {
    let idx = [1u32, 2];
    let val = [2.0f64, -3.0];
    let mut v = 0.0;
    assert_eq!(
        unsafe { qnl_dual_norm(0.5, 1.0, idx.as_ptr(), val.as_ptr(), 2, &mut v) },
        QnlStatus::Ok
    );
    assert_eq!(v, 3.0);
}

#[test]
fn error_paths() {
    let mut handle: *mut QnlBasis = ptr::null_mut();
    assert_eq!(
        unsafe { qnl_basis_build(1.5, 1.0, 4, 0.0, &mut handle) },
        QnlStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { qnl_basis_build(0.5, 1.0, 4, 0.0, ptr::null_mut()) },
        QnlStatus::NullPointer
    );
    assert_eq!(
        unsafe { qnl_basis_verify(ptr::null()) },
        QnlStatus::NullPointer
    );
    assert_eq!(unsafe { qnl_basis_len(ptr::null()) }, 0);

    // duplicate index is rejected at the boundary
    let idx = [1u32, 1];
    let val = [1.0f64, 2.0];
    let mut out = 0.0;
    assert_eq!(
        unsafe { qnl_fnorm(0.5, idx.as_ptr(), val.as_ptr(), 2, &mut out) },
        QnlStatus::InvalidArgument
    );

    let bad_json = CString::new("not json").unwrap();
    let mut back: *mut QnlBasis = ptr::null_mut();
    assert_eq!(
        unsafe { qnl_basis_from_json(bad_json.as_ptr(), &mut back) },
        QnlStatus::JsonError
    );

    // freeing null is a safe no-op
    unsafe {
        qnl_basis_free(ptr::null_mut());
        qnl_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated_with_the_api() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qnormlab.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for symbol in [
        "qnl_basis_build",
        "qnl_basis_free",
        "qnl_basis_verify",
        "qnl_basis_to_json",
        "qnl_basis_from_json",
        "qnl_string_free",
        "qnl_fnorm",
        "qnl_dual_norm",
        "qnl_basis_norm_e",
        "qnl_basis_np_norm",
        "qnl_basis_separation_witness",
        "QnlStatus",
        "QnlBasis",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}
