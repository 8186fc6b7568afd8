use std::ffi::{c_char, CStr, CString};
use std::ptr;

use discrete_bm_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dbm_last_error()) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { dbm_string_free(p) };
    s
}

fn set(json: &str) -> *mut DbmSet {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { dbm_set_from_json(c.as_ptr(), &mut out) };
    assert_eq!(status, DbmStatus::Ok, "{}", last_error());
    out
}

fn interval_json(lo: &str, hi: &str) -> String {
    use discrete_bm::exactnum::parse_rational;
    use discrete_bm::sets::SetExpr;
    let s = SetExpr::closed_cube(1, parse_rational(lo).unwrap(), parse_rational(hi).unwrap()).unwrap();
    serde_json::to_string(&s).unwrap()
}

fn run(theorem: &str, k: *const DbmSet, l: *const DbmSet, lambda: &str, p: Option<&str>) -> (DbmStatus, *mut DbmCertificate) {
    let theorem = CString::new(theorem).unwrap();
    let lambda = CString::new(lambda).unwrap();
    let p = p.map(|s| CString::new(s).unwrap());
    let mut out = ptr::null_mut();
    let status = unsafe {
        dbm_verify(
            theorem.as_ptr(),
            k,
            l,
            lambda.as_ptr(),
            p.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            &mut out,
        )
    };
    (status, out)
}

#[test]
fn set_round_trip_and_count() {
    let s = set(&interval_json("-1/2", "5/2"));
    assert_eq!(unsafe { dbm_set_dim(s) }, 1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dbm_set_lattice_count(s, &mut out) }, DbmStatus::Ok);
    assert_eq!(take_string(out), "3");
    unsafe { dbm_set_free(s) };
}

#[test]
fn naive_counterexample_is_violated() {
    let k = set(&interval_json("0", "5/2"));
    let l = set(&interval_json("0", "13/4"));
    let (status, cert) = run("naive", k, l, "1/2", None);
    assert_eq!(status, DbmStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { dbm_certificate_verdict(cert) }, DbmVerdict::Violated);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { dbm_certificate_to_json(cert, &mut json) }, DbmStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["theorem"], "naive");

    let (status, main) = run("main_bm", k, l, "1/2", None);
    assert_eq!(status, DbmStatus::Ok);
    assert_ne!(unsafe { dbm_certificate_verdict(main) }, DbmVerdict::Violated);
    unsafe {
        dbm_certificate_free(cert);
        dbm_certificate_free(main);
        dbm_set_free(k);
        dbm_set_free(l);
    }
}

#[test]
fn pmean_and_dilation() {
    let k = set(&interval_json("0", "1"));
    let l = set(&interval_json("0", "3"));
    let (status, cert) = run("bm_pmean", k, l, "1/2", Some("0"));
    assert_eq!(status, DbmStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { dbm_certificate_verdict(cert) }, DbmVerdict::HoldsStrict);

    let mut dil = ptr::null_mut();
    assert_eq!(unsafe { dbm_verify_dilation(k, l, 1, 2, 3, &mut dil) }, DbmStatus::Ok);
    assert_ne!(unsafe { dbm_certificate_verdict(dil) }, DbmVerdict::Violated);
    assert_eq!(
        unsafe { dbm_verify_dilation(k, l, 2, 2, 3, &mut dil) },
        DbmStatus::Precondition
    );
    assert!(last_error().contains("m+p"), "{}", last_error());
    unsafe {
        dbm_certificate_free(cert);
        dbm_set_free(k);
        dbm_set_free(l);
    }
}

#[test]
fn errors_are_reported() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dbm_set_from_json(ptr::null(), &mut out) }, DbmStatus::NullArgument);
    let bad = CString::new("{oops").unwrap();
    assert_eq!(unsafe { dbm_set_from_json(bad.as_ptr(), &mut out) }, DbmStatus::InvalidInput);
    assert!(!last_error().is_empty());
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { dbm_set_from_json(invalid.as_ptr().cast(), &mut out) },
        DbmStatus::InvalidUtf8
    );

    let k = set(&interval_json("0", "1"));
    let (status, _) = run("no_such_theorem", k, k, "1/2", None);
    assert_eq!(status, DbmStatus::InvalidInput);
    let (status, _) = run("main_bm", k, ptr::null(), "1/2", None);
    assert_eq!(status, DbmStatus::NullArgument);
    let (status, _) = run("half_sum", k, k, "1/3", None);
    assert_eq!(status, DbmStatus::Precondition);
    let (status, cert) = run("main_bm", k, k, "1/2", None);
    assert_eq!(status, DbmStatus::Ok);
    assert_eq!(last_error(), "");
    unsafe {
        dbm_certificate_free(cert);
        dbm_set_free(k);
        dbm_set_free(ptr::null_mut());
        dbm_certificate_free(ptr::null_mut());
        dbm_string_free(ptr::null_mut());
    }
    assert_eq!(unsafe { dbm_certificate_verdict(ptr::null()) }, DbmVerdict::Violated);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/discrete_bm.h")).unwrap();
    for name in [
        "dbm_last_error",
        "dbm_version",
        "dbm_set_from_json",
        "dbm_set_dim",
        "dbm_set_lattice_count",
        "dbm_set_free",
        "dbm_verify",
        "dbm_verify_dilation",
        "dbm_certificate_verdict",
        "dbm_certificate_to_json",
        "dbm_certificate_free",
        "dbm_string_free",
        "DBM_STATUS_PRECONDITION",
        "typedef struct DbmSet DbmSet",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let version = unsafe { CStr::from_ptr(dbm_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}
