use std::ffi::{CStr, CString};
use std::ptr;

use borderfj_ffi::*;

fn fixture(name: &str) -> CString {
    CString::new(format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    bfj_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = bfj_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn reduce_from_file() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(bfj_system_from_file(fixture("bench2.sys").as_ptr(), &mut sys), BfjStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(bfj_reduce(sys, 0x5eed_b0de, 0, &mut rep), BfjStatus::Ok);
        assert_eq!(bfj_report_status(rep), BfjMatrixStatus::Regular);
        assert_eq!(bfj_report_iteration_count(rep), 1);
        assert_eq!(bfj_report_dimension(rep), 8);

        let mut entry = ptr::null_mut();
        assert_eq!(bfj_report_inverse_entry(rep, 0, 7, &mut entry), BfjStatus::Ok);
        assert_eq!(take(entry), "-1/(4*k)");
        assert_eq!(bfj_report_inverse_entry(rep, 8, 0, &mut entry), BfjStatus::OutOfRange);
        assert!(entry.is_null());

        let json: serde_json::Value = serde_json::from_str(&take(bfj_report_json(rep))).unwrap();
        assert_eq!(json["MatrixStatus"], "Regular");
        assert_eq!(json["Theorem1"]["Pass"], true);
        assert!(take(bfj_report_summary(rep)).contains("Extended Dimension  : 8×8"));

        bfj_report_free(rep);
        bfj_system_free(sys);
    }
}

#[test]
fn singular_report_has_no_inverse() {
    unsafe {
        let text = CString::new(std::fs::read_to_string(fixture("gauge.sys").to_str().unwrap()).unwrap()).unwrap();
        let mut sys = ptr::null_mut();
        assert_eq!(bfj_system_from_str(text.as_ptr(), &mut sys), BfjStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(bfj_reduce(sys, 1, 0, &mut rep), BfjStatus::Ok);
        assert_eq!(bfj_report_status(rep), BfjMatrixStatus::Singular);
        let mut entry = ptr::null_mut();
        assert_eq!(bfj_report_inverse_entry(rep, 0, 0, &mut entry), BfjStatus::Unavailable);
        assert!(last_error().contains("singular"));
        bfj_report_free(rep);
        bfj_system_free(sys);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut sys = ptr::null_mut();
        let bad = CString::new("[system]\n[variables]\nx\n[kinetic]\n1/2*dx^2\n[potential]\ny\n").unwrap();
        assert_eq!(bfj_system_from_str(bad.as_ptr(), &mut sys), BfjStatus::Parse);
        assert!(sys.is_null());
        assert!(last_error().contains("`y`"));

        assert_eq!(bfj_system_from_str(ptr::null(), &mut sys), BfjStatus::NullPointer);
        let missing = CString::new("/nonexistent.sys").unwrap();
        assert_eq!(bfj_system_from_file(missing.as_ptr(), &mut sys), BfjStatus::Parse);

        assert_eq!(bfj_system_from_file(fixture("bench3.sys").as_ptr(), &mut sys), BfjStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(bfj_reduce(sys, 1, 1, &mut rep), BfjStatus::Reduce);
        assert!(rep.is_null());
        assert!(last_error().contains("iteration cap"));
        bfj_system_free(sys);

        bfj_string_free(ptr::null_mut());
        bfj_report_free(ptr::null_mut());
        bfj_system_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/borderfj.h")).unwrap();
    for f in ["bfj_reduce", "bfj_report_json", "bfj_last_error", "typedef struct BfjReport BfjReport"] {
        assert!(h.contains(f), "{f}");
    }
}
