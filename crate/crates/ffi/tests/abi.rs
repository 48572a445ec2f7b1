use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use rockpca_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rp_last_error_message()) }.to_string_lossy().into_owned()
}

fn matrix(n: usize, d: usize, f: impl Fn(usize, usize) -> f64) -> *mut RpMatrix {
    let data: Vec<f64> = (0..n * d).map(|k| f(k / d, k % d)).collect();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { rp_matrix_new_real(data.as_ptr(), n, d, &mut m) }, RpStatus::Ok);
    m
}

fn wave(i: usize, j: usize) -> f64 {
    ((i * (j + 2)) as f64 * 0.37).sin() + 0.1 * (i as f64 * 1.3 + j as f64).cos()
}

#[test]
fn matrices_round_trip() {
    let m = matrix(5, 3, wave);
    let (mut n, mut d, mut cx) = (0, 0, true);
    unsafe {
        assert_eq!(rp_matrix_shape(m, &mut n, &mut d, &mut cx), RpStatus::Ok);
        assert_eq!((n, d, cx), (5, 3, false));
        let mut buf = vec![0.0; 15];
        assert_eq!(rp_matrix_copy(m, buf.as_mut_ptr(), 15), RpStatus::Ok);
        assert_eq!(buf[4], wave(1, 1));
        assert_eq!(rp_matrix_copy(m, buf.as_mut_ptr(), 14), RpStatus::InvalidConfig);
        assert!(last_error().contains("need 15"));
        rp_matrix_free(m);
    }
}

#[test]
fn errors_are_reported() {
    let bad = [1.0, f64::NAN, 3.0, 4.0];
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(rp_matrix_new_real(bad.as_ptr(), 2, 2, &mut m), RpStatus::Format);
        assert!(m.is_null());
        assert!(last_error().contains("non-finite"));
        assert_eq!(rp_matrix_new_real(ptr::null(), 2, 2, &mut m), RpStatus::NullPointer);
        let path = CString::new("/nonexistent/cube").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(rp_cube_load(path.as_ptr(), &mut c), RpStatus::Io);
        rp_matrix_free(ptr::null_mut());
    }
}

#[test]
fn solvers_agree_through_the_abi() {
    let a = matrix(30, 3, wave);
    let b = matrix(30, 2, |i, j| wave(i, j + 3) + 0.5 * wave(i, j));
    unsafe {
        let (mut primal, mut dual, mut kc) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(rp_cca(a, b, 2, 1e-6, &mut primal), RpStatus::Ok);
        assert_eq!(rp_cca_dual(a, b, 2, 1e-6, &mut dual), RpStatus::Ok);
        let (mut ka, mut kb) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(rp_kernel_build(a, RpKernelKind::Linear, 0.0, true, &mut ka), RpStatus::Ok);
        assert_eq!(rp_kernel_build(b, RpKernelKind::Linear, 0.0, true, &mut kb), RpStatus::Ok);
        assert_eq!(rp_kcca(ka, kb, 2, 1e-6, &mut kc), RpStatus::Ok);
        let vals = |m: *const RpModeSet| {
            let mut v = [0.0; 2];
            assert_eq!(rp_modes_values(m, v.as_mut_ptr(), 2), RpStatus::Ok);
            v
        };
        let (x, y, z) = (vals(primal), vals(dual), vals(kc));
        for k in 0..2 {
            assert!((x[k] - y[k]).abs() < 1e-6 && (x[k] - z[k]).abs() < 1e-6, "{x:?} {y:?} {z:?}");
        }
        let (mut r, mut c) = (0, 0);
        assert_eq!(rp_modes_part_shape(primal, RpModePart::LoadingsB, &mut r, &mut c), RpStatus::Ok);
        assert_eq!((r, c), (2, 2));

        let mut h = 0.0;
        assert_eq!(rp_hsic(ka, kb, &mut h), RpStatus::Ok);
        assert!(h > 0.0);
        let mut raw = ptr::null_mut();
        assert_eq!(rp_kernel_build(a, RpKernelKind::Rbf, 0.0, false, &mut raw), RpStatus::Ok);
        let mut g = 0.0;
        assert_eq!(rp_kgv(raw, kb, 1e-3, &mut g), RpStatus::InvalidConfig);
        assert!(last_error().contains("not centered"));

        let mut kp = ptr::null_mut();
        assert_eq!(rp_kpca(ka, 31, &mut kp), RpStatus::InvalidConfig);
        assert!(kp.is_null());

        for m in [primal, dual, kc] {
            rp_modes_free(m);
        }
        for k in [ka, kb, raw] {
            rp_kernel_free(k);
        }
        rp_matrix_free(a);
        rp_matrix_free(b);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rockpca.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let mut count = 0;
    for line in src.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(header.contains(&format!("{name}(")), "{name} missing from header");
            count += 1;
        }
    }
    assert!(count > 30);
    assert!(header.contains("typedef struct RpMatrix RpMatrix;"));
}

fn lib_dir() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?.to_path_buf();
    dir.join("librockpca_ffi.so").exists().then_some(dir)
}

#[test]
fn c_program_links_against_the_library() {
    let (Some(dir), Ok(true)) = (lib_dir(), Command::new("cc").arg("--version").output().map(|o| o.status.success())) else {
        eprintln!("skipping: C compiler or shared library not available");
        return;
    };
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "rockpca.h"
int main(void) {
    double a[8] = {1, 2, 2, 1, 3, 5, 4, 4};
    double b[4] = {1, 2, 3, 4};
    RpMatrix *x = NULL, *y = NULL;
    RpModeSet *m = NULL;
    if (rp_matrix_new_real(a, 4, 2, &x) != RP_STATUS_OK) return 1;
    if (rp_matrix_new_real(b, 4, 1, &y) != RP_STATUS_OK) return 2;
    if (rp_mca(x, y, 1, &m) != RP_STATUS_OK) return 3;
    double v = 0;
    if (rp_modes_values(m, &v, 1) != RP_STATUS_OK) return 4;
    if (rp_mca(x, y, 4, &m) != RP_STATUS_INVALID_CONFIG) return 5;
    printf("%.12f %s\n", v, rp_last_error_message());
    rp_modes_free(m);
    rp_matrix_free(x);
    rp_matrix_free(y);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = tmp.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg("-L")
        .arg(&dir)
        .arg("-lrockpca_ffi")
        .arg(format!("-Wl,-rpath,{}", dir.display()))
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("requested 4 components"), "{text}");
}
