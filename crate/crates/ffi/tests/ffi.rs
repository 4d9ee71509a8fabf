use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use qboole_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    qb_string_free(s);
    out
}

fn last_error() -> String {
    let p = qb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn value(family: QbFamily, order: u32, n: u32, c: QbConstruction) -> *mut QbPoly {
    let mut p = ptr::null_mut();
    assert_eq!(qb_family_value(family as u32, order, n, c as u32, &mut p), QbStatus::Ok);
    p
}

#[test]
fn render_and_eval() {
    unsafe {
        let p = value(QbFamily::QbooleFirst, 1, 2, QbConstruction::Integral);
        let mut s = ptr::null_mut();
        assert_eq!(qb_poly_render(p, &mut s), QbStatus::Ok);
        assert_eq!(take(s), "x^2 - x*lambda - x*q + 1/2*lambda*q");
        assert_eq!(qb_poly_render_latex(p, &mut s), QbStatus::Ok);
        assert!(take(s).contains("\\lambda"));
        let (x, l, q) = (CString::new("3").unwrap(), CString::new("2").unwrap(), CString::new("-1/2").unwrap());
        assert_eq!(qb_poly_eval(p, x.as_ptr(), l.as_ptr(), q.as_ptr(), &mut s), QbStatus::Ok);
        // 9 - 6 + 3/2 - 1/2
        assert_eq!(take(s), "4");
        let bad = CString::new("three").unwrap();
        assert_eq!(qb_poly_eval(p, bad.as_ptr(), l.as_ptr(), q.as_ptr(), &mut s), QbStatus::InvalidArgument);
        assert!(last_error().contains("three"));
        qb_poly_free(p);
    }
}

#[test]
fn constructions_agree() {
    unsafe {
        for family in [QbFamily::QbooleFirst, QbFamily::QbooleSecond] {
            for n in 0..=6 {
                let a = value(family, 2, n, QbConstruction::Series);
                let b = value(family, 2, n, QbConstruction::StirlingSum);
                let mut eq = false;
                assert_eq!(qb_poly_equal(a, b, &mut eq), QbStatus::Ok);
                assert!(eq);
                qb_poly_free(a);
                qb_poly_free(b);
            }
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(qb_family_value(9, 1, 1, 0, &mut p), QbStatus::UnknownFamily);
        assert_eq!(
            qb_family_value(QbFamily::BooleClassical as u32, 2, 1, 0, &mut p),
            QbStatus::UnsupportedOrder
        );
        assert_eq!(
            qb_family_value(QbFamily::Euler as u32, 1, 1, QbConstruction::StirlingSum as u32, &mut p),
            QbStatus::UnknownConstruction
        );
        assert_eq!(qb_family_value(0, 1, 1, 0, ptr::null_mut()), QbStatus::NullPointer);
        assert!(p.is_null());
        let mut s = ptr::null_mut();
        assert_eq!(qb_stirling(QbStirling::Second as u32, 2, 3, &mut s), QbStatus::InvalidArgument);
        assert_eq!(qb_stirling(QbStirling::Second as u32, 4, 2, &mut s), QbStatus::Ok);
        assert_eq!(take(s), "7");
        assert!(qb_last_error_message().is_null());
        qb_poly_free(ptr::null_mut());
        qb_string_free(ptr::null_mut());
    }
}

#[test]
fn padic_check() {
    unsafe {
        let mut r = QbWittResult { pass: false, integral: ptr::null_mut(), polynomial: ptr::null_mut() };
        let f = QbFamily::QbooleFirst as u32;
        assert_eq!(qb_padic_witt_check(f, 1, 1, 3, 2, 6, 5, 4, 3, false, &mut r), QbStatus::Ok);
        assert!(r.pass);
        assert_eq!(CStr::from_ptr(r.integral).to_str().unwrap(), "2");
        assert_eq!(CStr::from_ptr(r.polynomial).to_str().unwrap(), "2");
        qb_witt_result_clear(&mut r);
        assert!(r.integral.is_null());
        assert_eq!(qb_padic_witt_check(f, 1, 1, 3, 2, 7, 5, 4, 3, false, &mut r), QbStatus::QNotCongruent);
        assert!(last_error().contains("mod p"));
        assert_eq!(qb_padic_witt_check(f, 1, 1, 3, 2, 6, 5, 2, 3, false, &mut r), QbStatus::PrecisionOutOfRange);
    }
}

#[test]
fn audit_report() {
    unsafe {
        let mut report = ptr::null_mut();
        assert_eq!(qb_audit_run(QbProfile::Quick as u32, true, 7, &mut report), QbStatus::Ok);
        let mut pass = false;
        assert_eq!(qb_report_all_asserted_pass(report, &mut pass), QbStatus::Ok);
        assert!(pass);
        let mut s = ptr::null_mut();
        assert_eq!(qb_report_json(report, false, &mut s), QbStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(json["seed"], 7);
        qb_report_free(report);
        assert_eq!(qb_audit_run(5, false, 0, &mut report), QbStatus::InvalidArgument);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(qb_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn find_compiler() -> Option<&'static str> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

#[test]
fn header_compiles_and_links_from_c() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/qboole.h");
    assert!(header.exists());
    let lib = profile_dir().join("libqboole_ffi.a");
    let Some(cc) = find_compiler() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("qboole-smoke-{}", std::process::id()));
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("p must be an odd prime"));
    std::fs::remove_file(bin).ok();
}
