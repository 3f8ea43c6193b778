use std::ffi::{CStr, CString};
use std::ptr;

use unitary_forms_ffi::*;

fn json_of(r: *const UfReport) -> serde_json::Value {
    let s = unsafe { CStr::from_ptr(uf_report_json(r)) }.to_str().unwrap();
    serde_json::from_str(s).unwrap()
}

fn ring(name: &str) -> *mut UfRing {
    let c = CString::new(name).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uf_ring_parse(c.as_ptr(), &mut out) }, UF_OK);
    out
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(uf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn classify_through_handles() {
    let r = ring("F5");
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { uf_classify(r, 1, 1_000_000, &mut rep) }, UF_OK);
    assert_eq!(json_of(rep)["class_count"], 2);
    assert_eq!(unsafe { uf_report_verdict(rep) }, UF_VERDICT_INFO);
    unsafe {
        uf_report_free(rep);
        uf_ring_free(r);
    }
}

#[test]
fn reflections_pass_and_budget_fails() {
    let r = ring("F3");
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { uf_verify_reflections(r, 2, 1_000_000, &mut rep) }, UF_OK);
    assert_eq!(unsafe { uf_report_verdict(rep) }, UF_VERDICT_PASS);
    unsafe { uf_report_free(rep) };
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { uf_verify_reflections(r, 3, 5, &mut rep) }, UF_BUDGET);
    assert!(rep.is_null());
    assert!(!uf_last_error().is_null());
    unsafe { uf_ring_free(r) };
}

#[test]
fn genus_from_toml() {
    let text = CString::new(include_str!("../../../specs/quaternion_t1.toml")).unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { uf_genus_from_toml(text.as_ptr(), 1_000_000, &mut rep) }, UF_OK);
    assert_eq!(json_of(rep)["size"], 2);
    unsafe { uf_report_free(rep) };
    let bad = CString::new("kind = \"quaternion\"\nprimes = [2]\nu = -1\nv = -1\npi = 2\n").unwrap();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { uf_genus_from_toml(bad.as_ptr(), 1_000_000, &mut rep) }, UF_USAGE);
    let msg = unsafe { CStr::from_ptr(uf_last_error()) }.to_str().unwrap();
    assert!(msg.contains("hypothesis violated"), "{msg}");
}

#[test]
fn hilbert_and_error_codes() {
    let mut s = 0;
    assert_eq!(unsafe { uf_hilbert_symbol(-1, -1, 0, &mut s) }, UF_OK);
    assert_eq!(s, -1);
    assert_eq!(unsafe { uf_hilbert_symbol(-1, -1, 3, &mut s) }, UF_OK);
    assert_eq!(s, 1);
    assert_eq!(unsafe { uf_hilbert_symbol(0, 1, 3, &mut s) }, UF_USAGE);
    assert_eq!(unsafe { uf_hilbert_symbol(1, 1, 3, ptr::null_mut()) }, UF_NULL_POINTER);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { uf_ring_parse(ptr::null(), &mut out) }, UF_NULL_POINTER);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { uf_ring_parse(invalid.as_ptr().cast(), &mut out) }, UF_INVALID_UTF8);
    let unknown = CString::new("Q17").unwrap();
    assert_eq!(unsafe { uf_ring_parse(unknown.as_ptr(), &mut out) }, UF_USAGE);
    assert_eq!(unsafe { uf_report_verdict(ptr::null()) }, -1);
    assert!(unsafe { uf_report_json(ptr::null()) }.is_null());
    unsafe {
        uf_ring_free(ptr::null_mut());
        uf_report_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/unitary_forms.h");
    for f in [
        "uf_ring_parse",
        "uf_classify",
        "uf_verify_reflections",
        "uf_genus_from_toml",
        "uf_hilbert_symbol",
        "uf_report_json",
        "uf_report_verdict",
        "uf_report_free",
        "uf_ring_free",
        "uf_last_error",
        "uf_version",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new(cc)
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", &format!("{dir}/include/unitary_forms.h")])
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
        .ok_or(())
}
