use std::ffi::{CStr, CString};
use std::ptr;

use rigidbound_ffi::*;

const DESARGUES: &str = "n 6\n1 2\n1 3\n1 4\n2 3\n2 5\n3 6\n4 5\n4 6\n5 6\n";

fn last_error() -> String {
    let p = rb_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn desargues_round_trip() {
    unsafe {
        let text = CString::new(DESARGUES).unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(rb_graph_from_edge_list(text.as_ptr(), &mut g), RbStatus::Ok);
        let mut laman = false;
        assert_eq!(rb_is_laman(g, &mut laman), RbStatus::Ok);
        assert!(laman);
        let mut class = RbClass::H1;
        assert_eq!(rb_classify(g, &mut class), RbStatus::Ok);
        assert_eq!(class, RbClass::H2);

        let mut r = ptr::null_mut();
        assert_eq!(rb_analyze(g, 0, false, false, &mut r), RbStatus::Ok);
        let (mut bound, mut mv) = (0, 0);
        assert_eq!(rb_report_bound(r, &mut bound), RbStatus::Ok);
        assert_eq!(rb_report_mv(r, &mut mv), RbStatus::Ok);
        assert_eq!((mv, bound), (12, 24));

        let mut json = ptr::null_mut();
        assert_eq!(rb_report_to_json(r, &mut json), RbStatus::Ok);
        let s = CStr::from_ptr(json).to_str().unwrap().to_owned();
        assert!(s.contains("\"bound_mod_rigid\":24"));
        rb_string_free(json);
        rb_report_free(r);
        rb_graph_free(g);
    }
}

#[test]
fn k4_is_not_laman() {
    unsafe {
        let edges: [usize; 12] = [1, 2, 1, 3, 1, 4, 2, 3, 2, 4, 3, 4];
        let mut g = ptr::null_mut();
        assert_eq!(rb_graph_new(4, edges.as_ptr(), 6, &mut g), RbStatus::Ok);
        let mut class = RbClass::H1;
        assert_eq!(rb_classify(g, &mut class), RbStatus::NotLaman);
        let mut r = ptr::null_mut();
        assert_eq!(rb_analyze(g, 0, false, false, &mut r), RbStatus::Ok);
        let mut bound = 0;
        assert_eq!(rb_report_bound(r, &mut bound), RbStatus::NotLaman);
        rb_report_free(r);
        rb_graph_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(rb_graph_from_edge_list(ptr::null(), &mut g), RbStatus::NullPointer);
        let bad = CString::new("n 3\n1 1\n").unwrap();
        assert_eq!(rb_graph_from_edge_list(bad.as_ptr(), &mut g), RbStatus::InvalidInput);
        assert!(!last_error().is_empty());
        let edges: [usize; 2] = [1, 9];
        assert_eq!(rb_graph_new(3, edges.as_ptr(), 1, &mut g), RbStatus::InvalidInput);
        rb_graph_free(ptr::null_mut());
        rb_report_free(ptr::null_mut());
        rb_string_free(ptr::null_mut());
    }
}

#[test]
fn mixed_volume_of_squares() {
    // two unit squares in the plane: MV = 2
    let counts = [4usize, 4];
    let points: [i64; 16] = [0, 0, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1, 1];
    let mut out = 0;
    let status = unsafe { rb_mixed_volume(2, counts.as_ptr(), points.as_ptr(), 1, &mut out) };
    assert_eq!(status, RbStatus::Ok);
    assert_eq!(out, 2);
    let status = unsafe { rb_mixed_volume(0, counts.as_ptr(), points.as_ptr(), 1, &mut out) };
    assert_eq!(status, RbStatus::InvalidInput);
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/rigidbound.h")).unwrap();
    for name in [
        "rb_graph_from_edge_list",
        "rb_graph_new",
        "rb_analyze",
        "rb_report_bound",
        "rb_mixed_volume",
        "rb_last_error_message",
        "RB_STATUS_NOT_LAMAN",
        "typedef struct RbGraph RbGraph",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let src = std::env::temp_dir().join("rigidbound_header_check.c");
    std::fs::write(&src, "#include \"rigidbound.h\"\nint main(void) { return rb_last_error_message() != 0; }\n").unwrap();
    let status = match std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(format!("{dir}/include"))
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler on PATH, skipping");
            return;
        }
    };
    assert!(status.success());
}
