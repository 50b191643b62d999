use messep_lab_ffi::*;
use std::ffi::CStr;
use std::f64::consts::PI;
use std::ptr;

fn last_error() -> String {
    let p = messep_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn gap_matches_closed_form() {
    let mut g = 0.0;
    assert_eq!(unsafe { messep_spectral_gap(8, 1, &mut g) }, MessepStatus::Ok);
    assert!((g - (1.0 - (2.0 * PI / 8.0).cos())).abs() < 1e-14);
}

#[test]
fn invalid_lattice_reports_message() {
    let mut g = 0.0;
    assert_eq!(unsafe { messep_spectral_gap(4, 4, &mut g) }, MessepStatus::InvalidArgument);
    assert!(last_error().contains("N"));
    assert_eq!(unsafe { messep_spectral_gap(4, 1, ptr::null_mut()) }, MessepStatus::NullPointer);
}

#[test]
fn kernel_lifecycle() {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { messep_kernel_new(6, 2, &mut k) }, MessepStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { messep_kernel_state_count(k, &mut n) }, MessepStatus::Ok);
    assert_eq!(n, 15);
    let mut small = [0.0; 3];
    assert_eq!(unsafe { messep_kernel_eigenvalues(k, small.as_mut_ptr(), 3) }, MessepStatus::BufferTooSmall);
    let mut ev = vec![0.0; n];
    assert_eq!(unsafe { messep_kernel_eigenvalues(k, ev.as_mut_ptr(), n) }, MessepStatus::Ok);
    assert!(ev.iter().any(|&v| (v - 1.0).abs() < 1e-12));
    unsafe { messep_kernel_free(k) };
    unsafe { messep_kernel_free(ptr::null_mut()) };
}

#[test]
fn kernel_cap_is_reported() {
    let mut k = ptr::null_mut();
    assert_eq!(unsafe { messep_kernel_new(40, 20, &mut k) }, MessepStatus::ResourceCap);
    assert!(k.is_null());
}

#[test]
fn hook_char_sum_values() {
    let mut v = 0i64;
    let parts = [2usize, 1];
    assert_eq!(unsafe { messep_hook_char_sum(parts.as_ptr(), 2, 1, &mut v) }, MessepStatus::Ok);
    assert_eq!(v, 4);
    let bad = [1usize, 2];
    assert_eq!(unsafe { messep_hook_char_sum(bad.as_ptr(), 2, 0, &mut v) }, MessepStatus::InvalidArgument);
}

#[test]
fn flow_roundtrip() {
    let (re, im) = ([0.15, 0.0], [0.0, 0.02]);
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { messep_flow_new_moments(0.5, re.as_ptr(), im.as_ptr(), 2, &mut f) }, MessepStatus::Ok);
    let (mut wr, mut wi) = (0.0, 0.0);
    assert_eq!(unsafe { messep_flow_invert(f, 0.05, 0.3, 0.2, &mut wr, &mut wi) }, MessepStatus::Ok);
    assert!(wr.hypot(wi) < 0.3f64.hypot(0.2));
    let mut mr = [0.0; 4];
    let mut mi = [0.0; 4];
    assert_eq!(unsafe { messep_limit_moments(f, 0.05, 4, mr.as_mut_ptr(), mi.as_mut_ptr()) }, MessepStatus::Ok);
    assert!((mr[0] - 0.15 * (-2.0 * PI * PI * 0.05).exp()).abs() < 1e-15);
    let mut d = vec![0.0; 256];
    assert_eq!(unsafe { messep_density(f, 0.05, 256, d.as_mut_ptr()) }, MessepStatus::Ok);
    let mass: f64 = d.iter().sum::<f64>() * 2.0 * PI / 256.0;
    assert!((mass - 1.0).abs() < 1e-10);
    unsafe { messep_flow_free(f) };
}

#[test]
fn step_flow_rejects_bad_alpha() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { messep_flow_new_step(1.5, &mut f) }, MessepStatus::InvalidArgument);
    assert_eq!(unsafe { messep_flow_new_step(0.5, &mut f) }, MessepStatus::Ok);
    let mut d = vec![0.0; 64];
    assert_eq!(unsafe { messep_density(f, 0.01, 64, d.as_mut_ptr()) }, MessepStatus::Ok);
    assert!(d.iter().all(|&v| v > -1e-8 && v < 1.0 / PI + 1e-8));
    unsafe { messep_flow_free(f) };
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/messep_lab.h");
    for name in [
        "messep_last_error",
        "messep_spectral_gap",
        "messep_kernel_new",
        "messep_kernel_free",
        "messep_kernel_state_count",
        "messep_kernel_eigenvalues",
        "messep_hook_char_sum",
        "messep_flow_new_step",
        "messep_flow_new_moments",
        "messep_flow_free",
        "messep_flow_invert",
        "messep_density",
        "messep_limit_moments",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct MessepKernel MessepKernel;"));
}
