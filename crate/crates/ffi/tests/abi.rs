use std::ffi::CStr;
use std::f64::consts::{FRAC_2_PI, PI};
use std::ptr;

use hybrid_wigner_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hw_last_error_message()) }.to_string_lossy().into_owned()
}

fn coherent(alpha: f64) -> *mut HwModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { hw_model_new(1.0, 1.0, 1.0, alpha, 0.0, 0, &mut m) }, HwStatus::Ok);
    assert!(!m.is_null());
    m
}

#[test]
fn coherent_model_round_trip() {
    let m = coherent(1.0);
    unsafe {
        let mut n = 0usize;
        assert_eq!(hw_model_cutoff(m, &mut n), HwStatus::Ok);
        assert_eq!(n, 21);

        let (mut pe, mut pg, mut z) = (0.0, 0.0, 0.0);
        assert_eq!(hw_inversion(m, 0.0, &mut pe, &mut pg, &mut z), HwStatus::Ok);
        assert!((pe - 1.0).abs() < 1e-14 && pg.abs() < 1e-14 && (z - 1.0).abs() < 1e-14);

        let mut w = 0.0;
        assert_eq!(hw_wigner_field(m, 0.0, 1.0, 0.0, &mut w), HwStatus::Ok);
        assert!((w - FRAC_2_PI).abs() < 1e-12);

        assert_eq!(hw_wigner_qubit(m, 0.0, 0.0, 0.0, &mut w), HwStatus::Ok);
        assert!((w - 0.5 * (1.0 + 3f64.sqrt())).abs() < 1e-12);

        let mut full = 0.0;
        assert_eq!(hw_wigner_full(m, 0.0, 0.0, 0.0, 1.0, 0.0, &mut full), HwStatus::Ok);
        assert!((full - 0.5 * (1.0 + 3f64.sqrt()) * FRAC_2_PI).abs() < 1e-12);

        let mut xi = 0.0;
        assert_eq!(hw_purity(m, 0.0, &mut xi), HwStatus::Ok);
        assert!((xi - 1.0).abs() < 1e-6);

        let mut tr = 0.0;
        assert_eq!(hw_revival_time(m, 1, &mut tr), HwStatus::Ok);
        assert!((tr - 2.0 * PI).abs() < 1e-14);
        assert_eq!(last_error(), "");
        hw_model_free(m);
    }
}

#[test]
fn fock_model_inversion() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(hw_model_new_fock(1.0, 1.0, 1.0, 2, 0, &mut m), HwStatus::Ok);
        for t in [0.0, 0.4, 3.1] {
            let (mut pe, mut pg, mut z) = (0.0, 0.0, 0.0);
            assert_eq!(hw_inversion(m, t, &mut pe, &mut pg, &mut z), HwStatus::Ok);
            assert!((z - (2.0 * t * 3f64.sqrt()).cos()).abs() < 1e-14);
        }
        let mut xi = 0.0;
        assert_eq!(hw_purity(m, 1.0, &mut xi), HwStatus::Unsupported);
        assert!(!last_error().is_empty());
        hw_model_free(m);
    }
}

#[test]
fn errors_are_reported() {
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(hw_model_new(1.0, 1.5, 1.0, 1.0, 0.0, 0, &mut m), HwStatus::NonResonant);
        assert!(m.is_null());
        assert!(last_error().contains("resonance"));
        assert_eq!(hw_model_new(1.0, 1.0, 1.0, 3.0, 0.0, 5, &mut m), HwStatus::CutoffTooSmall);
        assert_eq!(hw_model_new(1.0, 1.0, -1.0, 1.0, 0.0, 0, &mut m), HwStatus::InvalidArgument);
        assert_eq!(hw_model_new(1.0, 1.0, 1.0, 1.0, 0.0, 0, ptr::null_mut()), HwStatus::NullPointer);

        let mut w = 0.0;
        assert_eq!(hw_wigner_field(ptr::null(), 0.0, 0.0, 0.0, &mut w), HwStatus::NullPointer);
        let m = coherent(0.0);
        assert_eq!(hw_revival_time(m, 1, &mut w), HwStatus::InvalidArgument);
        assert_eq!(hw_wigner_qubit(m, 0.0, 4.0, 0.0, &mut w), HwStatus::InvalidArgument);
        assert_eq!(hw_wigner_qubit(m, 0.0, 4.0, 0.0, ptr::null_mut()), HwStatus::InvalidArgument);
        hw_model_free(m);
        hw_model_free(ptr::null_mut());
    }
}

#[test]
fn asymptote() {
    let mut v = 0.0;
    assert_eq!(unsafe { hw_purity_asymptote(1.0, 0.0, &mut v) }, HwStatus::Ok);
    assert!((v - 0.654254).abs() < 1e-6);
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hybrid_wigner.h")).unwrap();
    for name in [
        "hw_model_new", "hw_model_new_fock", "hw_model_free", "hw_model_cutoff", "hw_inversion",
        "hw_wigner_full", "hw_wigner_field", "hw_wigner_qubit", "hw_purity", "hw_purity_asymptote",
        "hw_revival_time", "hw_last_error_message", "HW_STATUS_OK",
    ] {
        assert!(h.contains(name), "{name}");
    }
}
