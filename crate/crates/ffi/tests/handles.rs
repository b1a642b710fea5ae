use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use zerocap_ffi::*;

const PENTAGON: &str = r#"{
  "inputs": ["a","b","c","d","e"],
  "outputs": ["v","w","x","y","z"],
  "rows": [
    ["1/2","1/2","0","0","0"],
    ["0","1/2","1/2","0","0"],
    ["0","0","1/2","1/2","0"],
    ["0","0","0","1/2","1/2"],
    ["1/2","0","0","0","1/2"]
  ]
}"#;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = zc_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned())
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    zc_string_free(s);
    out
}

fn channel(json: &str) -> *mut ZcChannel {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { zc_channel_from_json(cstr(json).as_ptr(), &mut out) }, ZcStatus::Ok);
    out
}

fn plant(json: &str) -> *mut ZcPlant {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { zc_plant_from_json(cstr(json).as_ptr(), &mut out) }, ZcStatus::Ok);
    out
}

fn decide(p: *const ZcPlant, c: *const ZcChannel) -> *mut ZcVerdict {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { zc_decide(p, c, 0, 0, &mut out) }, ZcStatus::Ok, "{:?}", last_error());
    out
}

fn outcome(v: *const ZcVerdict) -> ZcOutcome {
    let mut o = ZcOutcome::Undetermined;
    assert_eq!(unsafe { zc_verdict_outcome(v, &mut o) }, ZcStatus::Ok);
    o
}

#[test]
fn pentagon_decisions_round_trip_through_json() {
    unsafe {
        let ch = channel(PENTAGON);
        let (mut nx, mut ny) = (0usize, 0usize);
        assert_eq!(zc_channel_sizes(ch, &mut nx, &mut ny), ZcStatus::Ok);
        assert_eq!((nx, ny), (5, 5));

        let above = plant(r#"{"matrix": [["11/5"]]}"#);
        let below = plant(r#"{"matrix": [["23/10"]]}"#);
        let v = decide(above, ch);
        assert_eq!(outcome(v), ZcOutcome::Solvable);
        let w = decide(below, ch);
        assert_eq!(outcome(w), ZcOutcome::Unsolvable);

        let mut json = ptr::null_mut();
        assert_eq!(zc_verdict_to_json(v, &mut json), ZcStatus::Ok);
        let text = take(json);
        let mut back = ptr::null_mut();
        assert_eq!(zc_verdict_from_json(cstr(&text).as_ptr(), &mut back), ZcStatus::Ok);
        let mut valid = -1;
        assert_eq!(zc_verdict_verify(back, ch, &mut valid), ZcStatus::Ok);
        assert_eq!(valid, 1);
        assert_eq!(outcome(back), ZcOutcome::Solvable);

        let tampered = text.replace("\"11/5\"", "\"23/10\"");
        assert_ne!(tampered, text);
        let mut bad = ptr::null_mut();
        assert_eq!(zc_verdict_from_json(cstr(&tampered).as_ptr(), &mut bad), ZcStatus::Ok);
        assert_eq!(zc_verdict_verify(bad, ch, &mut valid), ZcStatus::Ok);
        assert_eq!(valid, 0);

        for h in [v, w, back, bad] {
            zc_verdict_free(h);
        }
        zc_plant_free(above);
        zc_plant_free(below);
        zc_channel_free(ch);
    }
}

#[test]
fn capacity_json_reports_the_pentagon_value() {
    unsafe {
        let ch = channel(PENTAGON);
        let mut json = ptr::null_mut();
        assert_eq!(zc_channel_capacity_json(ch, 2, &mut json), ZcStatus::Ok);
        let value: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(value["exact"], "sqrt(5)");
        zc_channel_free(ch);
    }
}

#[test]
fn status_codes_follow_the_command_line_exit_codes() {
    unsafe {
        let mut ch = ptr::null_mut();
        assert_eq!(zc_channel_from_json(cstr("{ not json").as_ptr(), &mut ch), ZcStatus::Parse);
        assert!(ch.is_null());
        assert!(last_error().is_some());

        let row_sum_wrong = r#"{"inputs":["a"],"outputs":["x","y"],"rows":[["1/2","1/3"]]}"#;
        assert_eq!(zc_channel_from_json(cstr(row_sum_wrong).as_ptr(), &mut ch), ZcStatus::Domain);

        let mut pl = ptr::null_mut();
        assert_eq!(zc_plant_from_json(cstr(r#"{"matrix": [["1","2"]]}"#).as_ptr(), &mut pl), ZcStatus::Domain);

        assert_eq!(zc_channel_from_json(ptr::null(), &mut ch), ZcStatus::InvalidArgument);
        assert_eq!(zc_channel_from_json(cstr(PENTAGON).as_ptr(), ptr::null_mut()), ZcStatus::InvalidArgument);
        let mut o = ZcOutcome::Solvable;
        assert_eq!(zc_verdict_outcome(ptr::null(), &mut o), ZcStatus::InvalidArgument);

        let ok = channel(PENTAGON);
        assert!(last_error().is_none());
        zc_channel_free(ok);
        zc_channel_free(ptr::null_mut());
        zc_string_free(ptr::null_mut());
    }
}

#[test]
fn bss_evaluation_maps_outcomes_to_statuses() {
    let cube = cstr("(mul (proj 1 0) (mul (proj 1 0) (proj 1 0)))");
    unsafe {
        let mut value = ptr::null_mut();
        let status = zc_bss_eval(cube.as_ptr(), cstr("-3/2").as_ptr(), 1000, &mut value);
        assert_eq!(status, ZcStatus::Ok, "{:?}", last_error());
        assert_eq!(take(value), "-27/8");

        assert_eq!(zc_bss_eval(cube.as_ptr(), cstr("1,2").as_ptr(), 1000, &mut value), ZcStatus::Domain);
        assert_eq!(zc_bss_eval(cube.as_ptr(), cstr("x").as_ptr(), 1000, &mut value), ZcStatus::Parse);
        assert_eq!(zc_bss_eval(cstr("(oops").as_ptr(), cstr("1").as_ptr(), 1000, &mut value), ZcStatus::Parse);
        assert!(value.is_null());
    }
}

#[test]
fn version_is_the_package_version() {
    let v = unsafe { CStr::from_ptr(zc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/zerocap.h");
    assert!(header.exists());
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("use.c");
    std::fs::write(
        &source,
        "#include \"zerocap.h\"\nint main(void) { ZcChannel *c = 0; ZcStatus s = zc_channel_from_json(\"{}\", &c); \
         zc_channel_free(c); return s == ZC_STATUS_OK; }\n",
    )
    .unwrap();
    for compiler in ["cc", "c++"] {
        let Ok(out) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", if compiler == "cc" { "c" } else { "c++" }])
            .arg("-I")
            .arg(header.parent().unwrap())
            .arg(&source)
            .output()
        else {
            eprintln!("{compiler} not available, skipping");
            continue;
        };
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
