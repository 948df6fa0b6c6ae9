use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use prbox_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { prbox_string_free(s) };
    out
}

fn last_error() -> String {
    let p = prbox_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn catalog(id: &str) -> *mut PrboxTensor {
    let id = CString::new(id).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { prbox_tensor_from_catalog(id.as_ptr(), 0, &mut out) }, PrboxStatus::Ok);
    out
}

#[test]
fn catalog_table_and_chsh() {
    let s = catalog("Omega16");
    assert_eq!(unsafe { prbox_tensor_n_parties(s) }, 2);
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { prbox_state_to_table(s, 0, &mut table) }, PrboxStatus::Ok);
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { prbox_chsh(table, &mut v) }, PrboxStatus::Ok);
    assert_eq!(take(v), "4");
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { prbox_table_to_state(table, 0, &mut back) }, PrboxStatus::Ok);
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        prbox_tensor_to_json(s, &mut a);
        prbox_tensor_to_json(back, &mut b);
    }
    assert_eq!(take(a), take(b));
    unsafe {
        prbox_table_free(table);
        prbox_tensor_free(back);
        prbox_tensor_free(s);
    }
}

#[test]
fn json_round_trips() {
    let s = catalog("class45");
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { prbox_tensor_to_json(s, &mut json) }, PrboxStatus::Ok);
    let text = CString::new(take(json)).unwrap();
    let mut parsed = ptr::null_mut();
    assert_eq!(unsafe { prbox_tensor_from_json(text.as_ptr(), &mut parsed) }, PrboxStatus::Ok);
    let mut valid = false;
    assert_eq!(unsafe { prbox_is_valid(parsed, &mut valid) }, PrboxStatus::Ok);
    assert!(valid);

    let mut table = ptr::null_mut();
    assert_eq!(unsafe { prbox_state_to_table(parsed, 0, &mut table) }, PrboxStatus::Ok);
    let mut tj = ptr::null_mut();
    assert_eq!(unsafe { prbox_table_to_json(table, &mut tj) }, PrboxStatus::Ok);
    let tj = CString::new(take(tj)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { prbox_table_from_json(tj.as_ptr(), &mut again) }, PrboxStatus::Ok);
    unsafe {
        prbox_table_free(again);
        prbox_table_free(table);
        prbox_tensor_free(parsed);
        prbox_tensor_free(s);
    }
}

#[test]
fn pairing_and_validity() {
    let (e, s) = (catalog("b0"), catalog("omega2"));
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { prbox_pair(e, s, &mut p) }, PrboxStatus::Ok);
    assert_eq!(take(p), "0");
    let mut ok = false;
    assert_eq!(unsafe { prbox_is_valid(e, &mut ok) }, PrboxStatus::Ok);
    assert!(ok);
    unsafe {
        prbox_tensor_free(e);
        prbox_tensor_free(s);
    }
}

#[test]
fn errors_are_reported_per_thread() {
    prbox_clear_error();
    assert!(prbox_last_error().is_null());
    let id = CString::new("Omega99").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { prbox_tensor_from_catalog(id.as_ptr(), 0, &mut out) }, PrboxStatus::NotFound);
    assert!(out.is_null());
    assert!(last_error().contains("Omega99"));
    std::thread::spawn(|| assert!(prbox_last_error().is_null())).join().unwrap();

    assert_eq!(unsafe { prbox_tensor_from_catalog(ptr::null(), 0, &mut out) }, PrboxStatus::NullPointer);
    assert_eq!(unsafe { prbox_tensor_from_catalog(id.as_ptr(), 9, &mut out) }, PrboxStatus::InvalidArgument);
    let bad = CString::new("{").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { prbox_table_from_json(bad.as_ptr(), &mut t) }, PrboxStatus::Parse);
    let signalling = CString::new(r#"{"n_parties":1,"entries":[{"x":"0","a":"0","p":"1"}]}"#).unwrap();
    assert_eq!(unsafe { prbox_table_from_json(signalling.as_ptr(), &mut t) }, PrboxStatus::Invalid);
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { prbox_chsh(ptr::null(), &mut v) }, PrboxStatus::NullPointer);
}

#[test]
fn discrimination() {
    let (a, b) = (catalog("Omega0"), catalog("Omega5"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { prbox_discriminate(a, b, 0, &mut out) }, PrboxStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(unsafe { prbox_discriminate(a, a, 0, &mut out) }, PrboxStatus::InvalidArgument);
    unsafe {
        prbox_tensor_free(a);
        prbox_tensor_free(b);
    }
}

#[test]
fn protocol_runs_are_deterministic() {
    let run = || {
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { prbox_bc_run(1, 2, 3, -1, 200, 7, 0, true, &mut out) }, PrboxStatus::Ok);
        take(out)
    };
    let first = run();
    assert_eq!(first, run());
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["accepted"], 200);
    assert_eq!(v["revealed_flipped"], 200);
    assert_eq!(v["transcripts"].as_array().unwrap().len(), 200);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { prbox_bc_run(1, 1, 3, 0, 10, 7, 0, false, &mut out) }, PrboxStatus::Unsupported);
    assert_eq!(unsafe { prbox_bc_run(5, 0, 3, 0, 10, 7, 0, false, &mut out) }, PrboxStatus::InvalidArgument);
}

#[test]
fn sweep_summary() {
    let alice = [0usize];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { prbox_sweep(alice.as_ptr(), 1, 0, &mut out) }, PrboxStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["pairs"], 276);
    assert_eq!(v["perfect"], 0);
}

#[test]
fn header_is_generated_and_compiles() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/prbox.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["prbox_last_error", "prbox_string_free", "prbox_bc_run", "prbox_sweep", "PRBOX_STATUS_OK"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() else {
        return;
    };
    assert!(status.success());
}
