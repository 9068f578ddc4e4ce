use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use schcalc_ffi::*;

fn operator(n: usize, potential: &str) -> *mut SchOperator {
    let spec = CString::new(potential).unwrap();
    let mut op = ptr::null_mut();
    assert_eq!(
        unsafe { sch_operator_new(n, 8.0, spec.as_ptr(), &mut op) },
        SchStatus::Ok
    );
    op
}

fn last_error() -> String {
    let p = sch_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn constant_potential_round_trip() {
    let n = 64;
    let op = operator(n, "constant:1");
    let mut len = 0;
    let mut rho = 0.0;
    unsafe {
        assert_eq!(sch_operator_len(op, &mut len), SchStatus::Ok);
        assert_eq!(sch_critical_radius(op, 3, &mut rho), SchStatus::Ok);
    }
    assert_eq!(len, n);
    assert!((rho - 0.5f64.sqrt()).abs() < 1e-8);

    let mut spec = ptr::null_mut();
    let mut ev = vec![0.0; n];
    unsafe {
        assert_eq!(sch_spectrum_new(op, &mut spec), SchStatus::Ok);
        assert_eq!(sch_spectrum_eigenvalues(spec, ev.as_mut_ptr(), n), SchStatus::Ok);
    }
    assert!((ev[0] - 1.0).abs() < 1e-12);

    // The constant function is the ground mode.
    let f = vec![1.0; n];
    let mut heat = vec![0.0; n];
    let mut pois = vec![0.0; n];
    let (mut re, mut im) = (vec![0.0; n], vec![0.0; n]);
    unsafe {
        assert_eq!(
            sch_heat_apply(spec, 0.5, f.as_ptr(), heat.as_mut_ptr(), n),
            SchStatus::Ok
        );
        assert_eq!(
            sch_poisson_apply(spec, 0.5, f.as_ptr(), pois.as_mut_ptr(), n),
            SchStatus::Ok
        );
        assert_eq!(
            sch_frac_deriv_apply(spec, 1.0, 0.5, f.as_ptr(), re.as_mut_ptr(), im.as_mut_ptr(), n),
            SchStatus::Ok
        );
    }
    for i in 0..n {
        assert!((heat[i] - (-0.5f64).exp()).abs() < 1e-12);
        assert!((pois[i] - (-0.5f64).exp()).abs() < 1e-12);
        assert!((re[i] + (-0.5f64).exp()).abs() < 1e-12 && im[i].abs() < 1e-12);
    }
    unsafe {
        sch_spectrum_free(spec);
        sch_operator_free(op);
    }
}

#[test]
fn errors_come_back_as_status_codes() {
    let mut op = ptr::null_mut();
    let bad = CString::new("cubic").unwrap();
    assert_eq!(
        unsafe { sch_operator_new(64, 8.0, bad.as_ptr(), &mut op) },
        SchStatus::InvalidArgument
    );
    assert!(op.is_null());
    assert!(last_error().contains("cubic"));
    assert_eq!(
        unsafe { sch_operator_new(64, 8.0, ptr::null(), &mut op) },
        SchStatus::NullPointer
    );

    let op = operator(32, "quadratic");
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { sch_spectrum_new(op, &mut spec) }, SchStatus::Ok);
    let mut short = vec![0.0; 8];
    assert_eq!(
        unsafe { sch_spectrum_eigenvalues(spec, short.as_mut_ptr(), 8) },
        SchStatus::BufferTooSmall
    );
    let f = [0.0; 16];
    let mut o = vec![0.0; 32];
    assert_eq!(
        unsafe { sch_heat_apply(spec, 1.0, f.as_ptr(), o.as_mut_ptr(), 16) },
        SchStatus::InvalidArgument
    );
    let f = vec![0.0; 32];
    assert_eq!(
        unsafe { sch_heat_apply(spec, -1.0, f.as_ptr(), o.as_mut_ptr(), 32) },
        SchStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { sch_heat_apply(spec, 1.0, f.as_ptr(), o.as_mut_ptr(), 32) },
        SchStatus::Ok
    );
    assert!(sch_last_error_message().is_null());
    unsafe {
        sch_spectrum_free(spec);
        sch_operator_free(op);
        sch_spectrum_free(ptr::null_mut());
        sch_operator_free(ptr::null_mut());
    }
}

#[test]
fn holder_seminorm_of_a_line_segment() {
    // A tent with slope 1 has Lipschitz seminorm 1 on a periodic grid.
    let n = 64;
    let h = 8.0 / n as f64;
    let f: Vec<f64> = (0..n).map(|j| 4.0 - ((j as f64 * h) - 4.0).abs()).collect();
    let mut v = 0.0;
    assert_eq!(
        unsafe { sch_holder_seminorm(f.as_ptr(), n, 8.0, 1.0, &mut v) },
        SchStatus::Ok
    );
    assert!((v - 1.0).abs() < 1e-12);
    assert_eq!(
        unsafe { sch_holder_seminorm(f.as_ptr(), n, 8.0, 0.0, &mut v) },
        SchStatus::InvalidArgument
    );
}

#[test]
fn runs_suites_and_returns_json() {
    let cfg = CString::new("grid_n = 64\nsuites = spectrum, radius\n").unwrap();
    let mut json = ptr::null_mut();
    let mut exit = -1;
    assert_eq!(
        unsafe { sch_run_suites(cfg.as_ptr(), &mut json, &mut exit) },
        SchStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { sch_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["suite"], "spectrum");
    assert_eq!(v[0]["schema_version"], 1);
    assert_eq!(exit, 0);

    let empty = CString::new("grid_n = 64\n").unwrap();
    assert_eq!(
        unsafe { sch_run_suites(empty.as_ptr(), &mut json, &mut exit) },
        SchStatus::Config
    );
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/schcalc.h");
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).output() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "sch_operator_new",
        "sch_run_suites",
        "sch_string_free",
        "SCH_STATUS_BUFFER_TOO_SMALL",
        "typedef struct SchSpectrum SchSpectrum",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}
