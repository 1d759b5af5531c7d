//! C ABI over `anxiety-core`.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns an
//! [`AxStatus`]; on failure the thread's last error holds a stable code and a
//! message, readable with [`ax_last_error_code`] and
//! [`ax_last_error_message`]. Strings returned through out-parameters are
//! owned by the caller and released with [`ax_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, c_int, size_t};

use anxiety_core::error::ErrorClass;
use anxiety_core::eval::ConfusionMatrix;
use anxiety_core::textprep::clean_text;
use anxiety_core::{ClassifierKind, ClassifierSpec, Error, FeatureKind, Lexicons, Pipeline};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Bad input data: unreadable file, malformed CSV or model, bad label.
    InputError = 3,
    /// Bad configuration: unknown classifier, out-of-range parameter.
    ConfigError = 4,
    /// Failure while training or predicting, e.g. single-class data.
    RuntimeError = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Cleaning resources: slang map, stopwords, emoji names and root words.
pub struct AxLexicons(Lexicons);

/// A fitted vectorizer together with its trained classifier.
pub struct AxPipeline(Pipeline);

/// Headline metrics with Positive as the positive class. Precision and
/// recall are undefined when their denominator is zero; the `has_*` flags
/// say whether the value is meaningful.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub has_precision: bool,
    pub has_recall: bool,
}

struct LastError {
    code: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed")
}

fn set_error(code: &str, message: &str) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { code: c_string(code), message: c_string(message) }));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure {
    status: AxStatus,
    code: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match err.class() {
            ErrorClass::Input => AxStatus::InputError,
            ErrorClass::Config => AxStatus::ConfigError,
            ErrorClass::Runtime => AxStatus::RuntimeError,
        };
        Failure { status, code: err.code(), message: err.to_string() }
    }
}

fn null(what: &str) -> Failure {
    Failure { status: AxStatus::NullPointer, code: "null-pointer", message: format!("{what} is null") }
}

fn config(message: String) -> Failure {
    Failure { status: AxStatus::ConfigError, code: "config", message }
}

/// Runs `f`, records any failure as the thread's last error and converts
/// panics into [`AxStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> AxStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AxStatus::Ok,
        Ok(Err(failure)) => {
            set_error(failure.code, &failure.message);
            failure.status
        }
        Err(_) => {
            set_error("panic", "internal error");
            AxStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Failure {
        status: AxStatus::InvalidUtf8,
        code: "invalid-utf8",
        message: format!("{what} is not valid UTF-8"),
    })
}

/// # Safety
/// `ptr` must be null or point to a live `T`.
unsafe fn ref_arg<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static string; never free it.
#[no_mangle]
pub extern "C" fn ax_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Stable machine-readable code of the last error on this thread, such as
/// "bad-label" or "single-class", or null when the last call succeeded.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ax_last_error_code() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.code.as_ptr()))
}

/// Human-readable message of the last error on this thread, or null.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ax_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn ax_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a handle to the built-in lexicons.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_lexicons_builtin(out: *mut *mut AxLexicons) -> AxStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(AxLexicons(Lexicons::builtin()))), "out"))
}

/// Loads lexicons from a directory holding slang.tsv, stopwords.txt,
/// emoji.tsv and roots.txt.
///
/// # Safety
/// `dir` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_lexicons_load(dir: *const c_char, out: *mut *mut AxLexicons) -> AxStatus {
    guard(|| {
        let dir = str_arg(dir, "dir")?;
        let lex = Lexicons::load_dir(dir).map_err(|e| Failure::from(Error::from(e)))?;
        write_out(out, Box::into_raw(Box::new(AxLexicons(lex))), "out")
    })
}

/// Releases a lexicon handle. Null is ignored.
///
/// # Safety
/// `lex` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ax_lexicons_free(lex: *mut AxLexicons) {
    if !lex.is_null() {
        drop(Box::from_raw(lex));
    }
}

/// Cleans one comment and returns the space-joined tokens in `out`. An
/// empty result is a valid output, not an error.
///
/// # Safety
/// `lex` must be a live handle, `text` a NUL-terminated string and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_preprocess(lex: *const AxLexicons, text: *const c_char, out: *mut *mut c_char) -> AxStatus {
    guard(|| {
        let lex = ref_arg(lex, "lex")?;
        let text = str_arg(text, "text")?;
        let cleaned = clean_text(text, &lex.0).tokens.join(" ");
        write_out(out, c_string(&cleaned).into_raw(), "out")
    })
}

/// Trains a pipeline on a CSV file with `text` and `category` columns.
///
/// `classifier` names a classifier kind ("knn", "bernoulli-nb",
/// "decision-tree", "svm", "random-forest", "grad-boost") and `features` is
/// "counts" or "tfidf". Default hyperparameters are used.
///
/// # Safety
/// `lex` must be a live handle, the strings NUL-terminated and `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_train_csv(
    lex: *const AxLexicons,
    csv_path: *const c_char,
    classifier: *const c_char,
    features: *const c_char,
    seed: u64,
    out: *mut *mut AxPipeline,
) -> AxStatus {
    guard(|| {
        let lex = ref_arg(lex, "lex")?;
        let path = str_arg(csv_path, "csv_path")?;
        let kind: ClassifierKind =
            str_arg(classifier, "classifier")?.parse().map_err(|e| Failure::from(Error::Classifier(e)))?;
        let features: FeatureKind = str_arg(features, "features")?.parse().map_err(config)?;
        let corpus = anxiety_core::dataset::load_csv(
            path,
            anxiety_core::dataset::DEFAULT_TEXT_COLUMN,
            anxiety_core::dataset::DEFAULT_LABEL_COLUMN,
        )
        .map_err(|e| Failure::from(Error::from(e)))?;
        let pipeline = Pipeline::train(&corpus, &lex.0, features, &ClassifierSpec::default_for(kind, seed))?;
        write_out(out, Box::into_raw(Box::new(AxPipeline(pipeline))), "out")
    })
}

/// Loads a pipeline saved by [`ax_pipeline_save`] or the `anxiety train`
/// command.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_load(path: *const c_char, out: *mut *mut AxPipeline) -> AxStatus {
    guard(|| {
        let pipeline = Pipeline::load(str_arg(path, "path")?)?;
        write_out(out, Box::into_raw(Box::new(AxPipeline(pipeline))), "out")
    })
}

/// Writes the pipeline as JSON.
///
/// # Safety
/// `pipeline` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_save(pipeline: *const AxPipeline, path: *const c_char) -> AxStatus {
    guard(|| {
        let pipeline = ref_arg(pipeline, "pipeline")?;
        pipeline.0.save(str_arg(path, "path")?)?;
        Ok(())
    })
}

/// Number of vocabulary terms the pipeline was fitted on, or 0 for null.
///
/// # Safety
/// `pipeline` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_n_features(pipeline: *const AxPipeline) -> size_t {
    pipeline.as_ref().map_or(0, |p| p.0.vectorizer.n_features())
}

/// Classifies one comment. `out_positive` receives 1 for Positive (hope)
/// and 0 for Negative (anxiety); `out_score` receives the model score.
/// Either out-parameter may be null.
///
/// # Safety
/// `pipeline` and `lex` must be live handles, `text` a NUL-terminated
/// string, and non-null out-parameters valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_predict(
    pipeline: *const AxPipeline,
    lex: *const AxLexicons,
    text: *const c_char,
    out_positive: *mut c_int,
    out_score: *mut f64,
) -> AxStatus {
    ax_pipeline_predict_batch(pipeline, lex, &text, 1, out_positive, out_score)
}

/// Classifies `n` comments at once. `out_positive` and `out_score`, when
/// non-null, must have room for `n` values.
///
/// # Safety
/// `texts` must point to `n` NUL-terminated strings; the handles must be
/// live and the non-null output arrays valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_predict_batch(
    pipeline: *const AxPipeline,
    lex: *const AxLexicons,
    texts: *const *const c_char,
    n: size_t,
    out_positive: *mut c_int,
    out_score: *mut f64,
) -> AxStatus {
    guard(|| {
        let pipeline = ref_arg(pipeline, "pipeline")?;
        let lex = ref_arg(lex, "lex")?;
        if n == 0 {
            return Ok(());
        }
        if texts.is_null() {
            return Err(null("texts"));
        }
        let inputs = std::slice::from_raw_parts(texts, n)
            .iter()
            .enumerate()
            .map(|(i, &t)| str_arg(t, &format!("texts[{i}]")))
            .collect::<Result<Vec<&str>, Failure>>()?;
        let predictions = pipeline.0.predict(&inputs, &lex.0)?;
        for (i, p) in predictions.iter().enumerate() {
            if !out_positive.is_null() {
                out_positive.add(i).write(c_int::from(p.label.is_positive()));
            }
            if !out_score.is_null() {
                out_score.add(i).write(p.score);
            }
        }
        Ok(())
    })
}

/// Releases a pipeline handle. Null is ignored.
///
/// # Safety
/// `pipeline` must be null or a handle from this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn ax_pipeline_free(pipeline: *mut AxPipeline) {
    if !pipeline.is_null() {
        drop(Box::from_raw(pipeline));
    }
}

/// Computes the headline metrics from confusion-matrix counts.
/// Fails with a runtime error when all counts are zero.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ax_metrics_from_counts(tp: u64, fn_: u64, fp: u64, tn: u64, out: *mut AxMetrics) -> AxStatus {
    guard(|| {
        let set = ConfusionMatrix::new(tp, fn_, fp, tn).metric_set().map_err(|e| Failure::from(Error::Eval(e)))?;
        let metrics = AxMetrics {
            accuracy: set.accuracy,
            precision: set.precision.unwrap_or(f64::NAN),
            recall: set.recall.unwrap_or(f64::NAN),
            has_precision: set.precision.is_some(),
            has_recall: set.recall.is_some(),
        };
        write_out(out, metrics, "out")
    })
}
