use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use tidymiss_ffi::*;

const DAT_MS: &str = "x,y,z\n1,A,-100\n3,N/A,-99\nNA,NA,-98\n-99,E,-101\n-98,F,-1\n";

fn airquality() -> Vec<u8> {
    std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/airquality.csv")).unwrap()
}

fn read(bytes: &[u8]) -> *mut TmTable {
    let mut t = ptr::null_mut();
    let st = unsafe { tm_table_read_csv(bytes.as_ptr(), bytes.len(), ptr::null(), &mut t) };
    assert_eq!(st, TmStatus::Ok);
    t
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    tm_string_free(p);
    s
}

fn last_error() -> String {
    let p = tm_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn counts_and_rates() {
    let t = read(&airquality());
    unsafe {
        assert_eq!(tm_table_n_rows(t), 153);
        assert_eq!(tm_table_n_cols(t), 6);
        let (mut miss, mut complete) = (0usize, 0usize);
        assert_eq!(tm_count_missing(t, &mut miss, &mut complete), TmStatus::Ok);
        assert_eq!((miss, complete), (44, 874));
        let mut rate = 0.0;
        assert_eq!(tm_rate_missing(t, TmUnit::Var, true, false, &mut rate), TmStatus::Ok);
        assert!((rate - 100.0 / 3.0).abs() < 1e-12);
        let mut json = ptr::null_mut();
        assert_eq!(tm_summary_json(t, TmSummary::VarTable, &mut json), TmStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v[2]["n_miss_in_unit"], 37);
        tm_table_free(t);
    }
}

#[test]
fn recode_and_round_trip() {
    let t = read(DAT_MS.as_bytes());
    unsafe {
        let mut nab = ptr::null_mut();
        assert_eq!(tm_nabular(t, &mut nab), TmStatus::Ok);
        let var = CString::new("x").unwrap();
        let clause = CString::new("x == -99").unwrap();
        let suffix = CString::new("broken_sensor").unwrap();
        let mut rec = ptr::null_mut();
        assert_eq!(tm_recode_shadow(nab, var.as_ptr(), clause.as_ptr(), suffix.as_ptr(), &mut rec), TmStatus::Ok);
        let mut csv = ptr::null_mut();
        assert_eq!(tm_nabular_to_csv(rec, &mut csv), TmStatus::Ok);
        let text = take_string(csv);
        assert_eq!(text.lines().nth(4).unwrap(), "-99,E,-101,NA_broken_sensor,!NA,!NA");

        let mut back = ptr::null_mut();
        assert_eq!(tm_nabular_read_csv(text.as_ptr(), text.len(), ptr::null(), &mut back), TmStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(tm_nabular_to_csv(back, &mut again), TmStatus::Ok);
        assert_eq!(take_string(again), text);

        for h in [nab, rec, back] {
            tm_nabular_free(h);
        }
        tm_table_free(t);
    }
}

#[test]
fn tracked_imputation() {
    let t = read(&airquality());
    unsafe {
        let mut nab = ptr::null_mut();
        assert_eq!(tm_nabular(t, &mut nab), TmStatus::Ok);
        let f1 = CString::new("Ozone ~ Temp + Wind").unwrap();
        let f2 = CString::new("Solar.R ~ Temp + Wind").unwrap();
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(tm_nabular_impute_lm(nab, f1.as_ptr(), &mut a), TmStatus::Ok);
        assert_eq!(tm_nabular_impute_lm(a, f2.as_ptr(), &mut b), TmStatus::Ok);
        let mut csv = ptr::null_mut();
        assert_eq!(tm_nabular_to_csv(b, &mut csv), TmStatus::Ok);
        let text = take_string(csv);
        let row5: Vec<&str> = text.lines().nth(5).unwrap().split(',').collect();
        assert!((row5[0].parse::<f64>().unwrap() + 11.67673).abs() < 1e-3);
        assert!((row5[1].parse::<f64>().unwrap() - 127.4317).abs() < 1e-3);
        assert_eq!(&row5[6..8], ["NA", "NA"]);
        for h in [nab, a, b] {
            tm_nabular_free(h);
        }
        tm_table_free(t);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let bad = b"a,b\n1\n";
        let mut t = ptr::null_mut();
        assert_eq!(tm_table_read_csv(bad.as_ptr(), bad.len(), ptr::null(), &mut t), TmStatus::Parse);
        assert!(t.is_null());
        assert!(last_error().contains("row 2"), "{}", last_error());

        assert_eq!(tm_table_read_csv(ptr::null(), 3, ptr::null(), &mut t), TmStatus::NullArgument);

        let t = read(DAT_MS.as_bytes());
        let mut nab = ptr::null_mut();
        tm_nabular(t, &mut nab);
        let formula = CString::new("x ~ q").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(tm_nabular_impute_lm(nab, formula.as_ptr(), &mut out), TmStatus::UnknownColumn);
        assert!(last_error().contains('q'));
        let formula = CString::new("no tilde").unwrap();
        assert_eq!(tm_nabular_impute_lm(nab, formula.as_ptr(), &mut out), TmStatus::Validation);
        assert_eq!(tm_nabular_impute_lm(nab, ptr::null(), &mut out), TmStatus::NullArgument);

        let mut svg = ptr::null_mut();
        assert_eq!(tm_plot_svg(t, TmPlot::MissVar, 0.0, 100.0, &mut svg), TmStatus::Validation);
        assert_eq!(tm_plot_svg(t, TmPlot::MissVar, 300.0, 200.0, &mut svg), TmStatus::Ok);
        let s = take_string(svg);
        assert_eq!(s.matches("<rect").count(), 3);
        assert!(tm_last_error_message().is_null());

        tm_nabular_free(nab);
        tm_table_free(t);
        tm_table_free(ptr::null_mut());
        assert_eq!(tm_table_n_rows(ptr::null()), 0);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(tm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tidymiss.h")).unwrap()
}

#[test]
fn header_declares_every_export() {
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15, "{exports:?}");
    let h = header();
    for name in exports {
        assert!(h.contains(&format!("{name}(")), "`{name}` missing from header");
    }
    for ty in ["typedef struct TmTable TmTable;", "typedef struct TmNabular TmNabular;", "TM_STATUS_OK = 0"] {
        assert!(h.contains(ty), "{ty}");
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libtidymiss_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "n_miss=2 n_complete=13 bad=5");
    assert!(stdout.contains("-99,E,-101,NA_broken_sensor,!NA,!NA"));
    assert!(stdout.contains("error=unknown column `nope`"), "{stdout}");
}
