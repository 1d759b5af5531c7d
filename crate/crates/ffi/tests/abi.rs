use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use anxiety_ffi::*;

fn fixture(name: &str) -> CString {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name);
    CString::new(path.to_str().unwrap()).unwrap()
}

fn last_code() -> Option<String> {
    let p = ax_last_error_code();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

fn last_message() -> String {
    let p = ax_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn builtin() -> *mut AxLexicons {
    let mut lex = ptr::null_mut();
    assert_eq!(unsafe { ax_lexicons_builtin(&mut lex) }, AxStatus::Ok);
    lex
}

fn train(lex: *const AxLexicons, classifier: &str) -> (AxStatus, *mut AxPipeline) {
    let mut p = ptr::null_mut();
    let classifier = CString::new(classifier).unwrap();
    let status = unsafe {
        ax_pipeline_train_csv(lex, fixture("table2.csv").as_ptr(), classifier.as_ptr(), c"counts".as_ptr(), 42, &mut p)
    };
    (status, p)
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(ax_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn preprocess_round_trip() {
    let lex = builtin();
    let text = CString::new("Alhamdulillah saya bisa").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ax_preprocess(lex, text.as_ptr(), &mut out) }, AxStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), "alhamdulillah bisa");
    assert_eq!(last_code(), None);
    unsafe {
        ax_string_free(out);
        ax_lexicons_free(lex);
    }
}

#[test]
fn null_and_bad_utf8_arguments() {
    let lex = builtin();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ax_preprocess(lex, ptr::null(), &mut out) }, AxStatus::NullPointer);
    assert_eq!(last_code().as_deref(), Some("null-pointer"));
    assert!(last_message().contains("text"));

    let bad = [0xffu8, 0xfe, 0];
    let status = unsafe { ax_preprocess(lex, bad.as_ptr().cast(), &mut out) };
    assert_eq!(status, AxStatus::InvalidUtf8);
    assert_eq!(unsafe { ax_preprocess(ptr::null(), c"x".as_ptr(), &mut out) }, AxStatus::NullPointer);
    unsafe {
        ax_string_free(ptr::null_mut());
        ax_lexicons_free(ptr::null_mut());
        ax_pipeline_free(ptr::null_mut());
        ax_lexicons_free(lex);
    }
}

#[test]
fn train_predict_save_load() {
    let lex = builtin();
    let (status, pipeline) = train(lex, "decision-tree");
    assert_eq!(status, AxStatus::Ok, "{:?}", last_code());
    assert!(unsafe { ax_pipeline_n_features(pipeline) } > 0);

    // fixture rows 1 and 6 are Negative and Positive; an unlimited tree memorizes them
    let texts = [
        CString::new("ini penyegelan banyak sekali tetangga sebelah.").unwrap(),
        CString::new("Ya gk pp di syukuri aj ya").unwrap(),
    ];
    let ptrs: Vec<*const libc::c_char> = texts.iter().map(|t| t.as_ptr()).collect();
    let mut labels = [7i32; 2];
    let mut scores = [0f64; 2];
    let status = unsafe {
        ax_pipeline_predict_batch(pipeline, lex, ptrs.as_ptr(), 2, labels.as_mut_ptr(), scores.as_mut_ptr())
    };
    assert_eq!(status, AxStatus::Ok);
    assert_eq!(labels, [0, 1]);

    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("p.json").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { ax_pipeline_save(pipeline, path.as_ptr()) }, AxStatus::Ok);
    let mut loaded = ptr::null_mut();
    assert_eq!(unsafe { ax_pipeline_load(path.as_ptr(), &mut loaded) }, AxStatus::Ok);
    for (i, text) in texts.iter().enumerate() {
        let mut label = -1;
        let mut score = f64::NAN;
        assert_eq!(unsafe { ax_pipeline_predict(loaded, lex, text.as_ptr(), &mut label, &mut score) }, AxStatus::Ok);
        assert_eq!((label, score), (labels[i], scores[i]));
    }
    unsafe {
        ax_pipeline_free(loaded);
        ax_pipeline_free(pipeline);
        ax_lexicons_free(lex);
    }
}

#[test]
fn error_codes_map_to_status() {
    let lex = builtin();
    let (status, p) = train(lex, "perceptron");
    assert_eq!(status, AxStatus::ConfigError);
    assert!(p.is_null());
    assert_eq!(last_code().as_deref(), Some("config"));

    let mut missing = ptr::null_mut();
    let status = unsafe { ax_pipeline_load(c"/no/such/model.json".as_ptr(), &mut missing) };
    assert_eq!(status, AxStatus::InputError);
    assert_eq!(last_code().as_deref(), Some("io"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    std::fs::write(&csv, "text,category\nlistrik mahal,Negative\nharga naik,Negative\n").unwrap();
    let csv = CString::new(csv.to_str().unwrap()).unwrap();
    let mut p = ptr::null_mut();
    let status =
        unsafe { ax_pipeline_train_csv(lex, csv.as_ptr(), c"nb".as_ptr(), c"tfidf".as_ptr(), 1, &mut p) };
    assert_eq!(status, AxStatus::RuntimeError);
    assert_eq!(last_code().as_deref(), Some("single-class"));
    unsafe { ax_lexicons_free(lex) };
}

#[test]
fn lexicons_load_from_directory() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/lexicons");
    let dir = CString::new(dir.to_str().unwrap()).unwrap();
    let mut lex = ptr::null_mut();
    assert_eq!(unsafe { ax_lexicons_load(dir.as_ptr(), &mut lex) }, AxStatus::Ok, "{:?}", last_code());
    unsafe { ax_lexicons_free(lex) };
    assert_eq!(unsafe { ax_lexicons_load(c"/no/such/dir".as_ptr(), &mut lex) }, AxStatus::InputError);
}

#[test]
fn metrics_from_fig6_counts() {
    let mut m = AxMetrics { accuracy: 0.0, precision: 0.0, recall: 0.0, has_precision: false, has_recall: false };
    assert_eq!(unsafe { ax_metrics_from_counts(258, 86, 80, 549, &mut m) }, AxStatus::Ok);
    assert!((m.accuracy - 0.829393627954779).abs() < 1e-12);
    assert!(m.has_precision && m.has_recall);
    assert!((m.precision - 258.0 / 338.0).abs() < 1e-12);
    assert!((m.recall - 258.0 / 344.0).abs() < 1e-12);

    assert_eq!(unsafe { ax_metrics_from_counts(0, 0, 0, 5, &mut m) }, AxStatus::Ok);
    assert!(!m.has_precision && !m.has_recall && m.precision.is_nan());
    assert_eq!(unsafe { ax_metrics_from_counts(0, 0, 0, 0, &mut m) }, AxStatus::RuntimeError);
}

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

/// Compiles the C smoke program; links and runs it when the static library
/// is present next to the test binary.
#[test]
fn c_program_uses_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/smoke.c");
    let check = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_dir())
        .arg(&src)
        .output()
        .unwrap();
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));

    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libanxiety_ffi.a");
    if !lib.is_file() {
        eprintln!("{} not built, skipping link step", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let build = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));
    let run = Command::new(&exe).arg(fixture("table2.csv").to_str().unwrap()).output().unwrap();
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("clean: alhamdulillah bisa"), "{stdout}");
    assert!(stdout.contains("error: config"), "{stdout}");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
