use std::ffi::{c_char, CStr, CString};
use std::ptr;

use arbor_ffi::*;

fn read(buf: &[u8]) -> String {
    CStr::from_bytes_until_nul(buf).unwrap().to_str().unwrap().to_string()
}

#[test]
fn closed_form_roundtrip() {
    let fam = CString::new("gl2").unwrap();
    let mut buf = [0u8; 32];
    let mut needed = 0usize;
    let mut dec = 0.0;
    let s = unsafe { arbor_closed_form_density(fam.as_ptr(), 2, buf.as_mut_ptr() as *mut c_char, buf.len(), &mut needed, &mut dec) };
    assert_eq!(s, ArborStatus::Ok);
    assert_eq!(read(&buf), "11/21");
    assert_eq!(needed, 6);
    assert!((dec - 11.0 / 21.0).abs() < 1e-15);
}

#[test]
fn small_buffer_reports_size() {
    let fam = CString::new("gl2").unwrap();
    let mut buf = [0u8; 3];
    let mut needed = 0usize;
    let s = unsafe { arbor_closed_form_density(fam.as_ptr(), 5, buf.as_mut_ptr() as *mut c_char, buf.len(), &mut needed, ptr::null_mut()) };
    assert_eq!(s, ArborStatus::BufferTooSmall);
    assert_eq!(needed, "2381/2976".len() + 1);
}

#[test]
fn error_codes_and_message() {
    let bad = CString::new("nosuchfamily").unwrap();
    let s = unsafe { arbor_closed_form_density(bad.as_ptr(), 2, ptr::null_mut(), 0, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(s, ArborStatus::ParseError);
    let mut buf = [0u8; 256];
    assert_eq!(unsafe { arbor_last_error(buf.as_mut_ptr() as *mut c_char, buf.len(), ptr::null_mut()) }, ArborStatus::Ok);
    assert!(read(&buf).contains("nosuchfamily"));
    assert_eq!(unsafe { arbor_closed_form_density(ptr::null(), 2, ptr::null_mut(), 0, ptr::null_mut(), ptr::null_mut()) }, ArborStatus::NullPointer);
    let name = CString::new("nosuchexample").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { arbor_scan_config_example(name.as_ptr(), &mut cfg) }, ArborStatus::UnknownReference);
    assert!(cfg.is_null());
}

#[test]
fn interval_handle() {
    let spec = CString::new("gl2").unwrap();
    let mut iv = ptr::null_mut();
    assert_eq!(unsafe { arbor_density_level(spec.as_ptr(), 2, 1, &mut iv) }, ArborStatus::Ok);
    let mut buf = [0u8; 64];
    assert_eq!(unsafe { arbor_interval_exact(iv, buf.as_mut_ptr() as *mut c_char, buf.len(), ptr::null_mut()) }, ArborStatus::Ok);
    assert_eq!(read(&buf), "1/3 5/8");
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { arbor_interval_bounds(iv, &mut lo, &mut hi) }, ArborStatus::Ok);
    assert_eq!((lo, hi), (1.0 / 3.0, 0.625));
    unsafe { arbor_interval_free(iv) };
    let big = CString::new("gsp:2").unwrap();
    let mut iv2 = ptr::null_mut();
    assert_eq!(unsafe { arbor_density_level(big.as_ptr(), 2, 3, &mut iv2) }, ArborStatus::GuardExceeded);
}

#[test]
fn scan_handle() {
    let name = CString::new("untwistedtorus").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { arbor_scan_config_example(name.as_ptr(), &mut cfg) }, ArborStatus::Ok);
    let bounds = [1000u64, 10000];
    assert_eq!(unsafe { arbor_scan_config_set_bounds(cfg, bounds.as_ptr(), 2) }, ArborStatus::Ok);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { arbor_scan_run(cfg, &mut rep) }, ArborStatus::Ok);
    let mut len = 0;
    unsafe { arbor_scan_report_len(rep, &mut len) };
    assert_eq!(len, 2);
    let (mut x, mut g, mut t) = (0, 0, 0);
    assert_eq!(unsafe { arbor_scan_report_row(rep, 1, &mut x, &mut g, &mut t) }, ArborStatus::Ok);
    assert_eq!((x, g, t), (10000, 406, 1228));
    assert_eq!(unsafe { arbor_scan_report_row(rep, 2, &mut x, &mut g, &mut t) }, ArborStatus::OutOfRange);
    let mut mism = 99;
    assert_eq!(unsafe { arbor_scan_report_compare(rep, name.as_ptr(), &mut mism) }, ArborStatus::Ok);
    assert_eq!(mism, 0);
    let mut needed = 0;
    assert_eq!(unsafe { arbor_scan_report_json(rep, ptr::null_mut(), 0, &mut needed) }, ArborStatus::BufferTooSmall);
    let mut buf = vec![0u8; needed];
    assert_eq!(unsafe { arbor_scan_report_json(rep, buf.as_mut_ptr() as *mut c_char, needed, ptr::null_mut()) }, ArborStatus::Ok);
    assert!(read(&buf).contains("\"good\":406"));
    unsafe {
        arbor_scan_report_free(rep);
        arbor_scan_config_free(cfg);
    }
}

#[test]
fn config_text_and_somos() {
    let text = CString::new("group = conic:d=1\npoint = 5/3,4/3\nell = 2\nbounds = 1e3\n").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { arbor_scan_config_parse(text.as_ptr(), &mut cfg) }, ArborStatus::Ok);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { arbor_scan_run(cfg, &mut rep) }, ArborStatus::Ok);
    let (mut g, mut t) = (0, 0);
    unsafe { arbor_scan_report_row(rep, 0, ptr::null_mut(), &mut g, &mut t) };
    assert_eq!((g, t), (57, 167));
    unsafe {
        arbor_scan_report_free(rep);
        arbor_scan_config_free(cfg);
    }
    let (mut r, mut i) = (9, 0);
    assert_eq!(unsafe { arbor_somos_divides(7, &mut r, &mut i) }, ArborStatus::Ok);
    assert_eq!((r, i), (1, 6));
    assert_eq!(unsafe { arbor_somos_divides(5, &mut r, &mut i) }, ArborStatus::Ok);
    assert_eq!(r, 0);
}

#[test]
fn null_frees_are_noops() {
    unsafe {
        arbor_interval_free(ptr::null_mut());
        arbor_scan_config_free(ptr::null_mut());
        arbor_scan_report_free(ptr::null_mut());
    }
}
