//! The `anxiety` command-line tool.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::classifiers::ClassifierKind;
use crate::config::{require_file, RunConfig};
use crate::dataset::{self, generate_synthetic_with_stats, load_csv, load_texts, Corpus, VocabSpec};
use crate::error::{Error, Result};
use crate::eval::report::{self, ReportFormat};
use crate::eval::{evaluate_cell, run_benchmark, BenchmarkReport, EvalMode, TestSize};
use crate::features::{FeatureKind, Vectorizer};
use crate::pipeline::Pipeline;
use crate::textprep::{preprocess_corpus, CleanDocument, EmptyPolicy};

#[derive(Debug, Parser)]
#[command(name = "anxiety", version, about = "Anxiety vs. hope sentiment classification for social-media comments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean a labeled CSV and write clean_text, trust and angry columns.
    Preprocess(CommonArgs),
    /// Fit a count or TF-IDF vectorizer and write it as JSON.
    Featurize(CommonArgs),
    /// Train one classifier on the whole input and save the pipeline.
    Train(CommonArgs),
    /// Label a CSV with a saved pipeline.
    Predict(CommonArgs),
    /// Evaluate one classifier by hold-out split or k-fold cross-validation.
    Evaluate(CommonArgs),
    /// Run the classifier by feature-extraction grid and write reports.
    Benchmark(CommonArgs),
    /// Render a saved benchmark JSON as Markdown, CSV or JSON.
    Report(CommonArgs),
    /// Generate a synthetic labeled corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON run configuration; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input CSV (or report JSON for `report`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory with slang.tsv, stopwords.txt, emoji.tsv and roots.txt.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Seed for all randomness (default 42)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Test split as a fraction of the corpus (rounded down).
    #[arg(long, conflicts_with = "test_size")]
    pub test_fraction: Option<f64>,
    /// Test split as an absolute row count.
    #[arg(long)]
    pub test_size: Option<usize>,
    /// Keep the class ratio in the hold-out split
    #[arg(long)]
    pub stratified: bool,
    /// Classifier kinds, comma separated or repeated.
    #[arg(long, value_delimiter = ',')]
    pub classifier: Vec<String>,
    /// Same as --classifier.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Feature extraction: counts, tfidf or both (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<String>,
    /// Use stratified k-fold cross-validation instead of a hold-out split.
    #[arg(long)]
    pub kfold: Option<usize>,
    /// Pipeline file to write (`train`) or read (`predict`).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Output file, or output directory for `benchmark`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// md, csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Name of the comment column (default "text")
    #[arg(long)]
    pub text_column: Option<String>,
    /// Name of the label column (default "category")
    #[arg(long)]
    pub label_column: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 2000)]
    pub n: usize,
    /// Probability that a token is drawn from the other class.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Fraction of Positive documents; balanced when omitted.
    #[arg(long)]
    pub positive_prior: Option<f64>,
    /// Pseudo-words per class.
    #[arg(long, default_value_t = 50)]
    pub vocab: usize,
    #[arg(long, default_value_t = crate::config::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_kinds(values: &[String]) -> Result<Vec<ClassifierKind>> {
    values.iter().map(|v| v.parse::<ClassifierKind>().map_err(|e| Error::Config(e.to_string()))).collect()
}

fn parse_features(values: &[String]) -> Result<Vec<FeatureKind>> {
    let mut out = Vec::new();
    for v in values {
        if v.eq_ignore_ascii_case("both") || v.eq_ignore_ascii_case("all") {
            out.extend([FeatureKind::Counts, FeatureKind::TfIdf]);
        } else {
            out.push(v.parse::<FeatureKind>().map_err(|e| Error::Config(e.to_string()))?);
        }
    }
    Ok(out)
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let set = |slot: &mut Option<PathBuf>, v: &Option<PathBuf>| {
        if v.is_some() {
            slot.clone_from(v);
        }
    };
    set(&mut cfg.input, &args.input);
    set(&mut cfg.lexicons, &args.lexicons);
    set(&mut cfg.model, &args.model);
    set(&mut cfg.out, &args.out);
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(f) = args.test_fraction {
        cfg.test_size = TestSize::Fraction(f);
    }
    if let Some(n) = args.test_size {
        cfg.test_size = TestSize::Count(n);
    }
    if args.stratified {
        cfg.stratified = true;
    }
    let kinds: Vec<String> = args.classifier.iter().chain(&args.only).cloned().collect();
    if !kinds.is_empty() {
        cfg.classifiers = parse_kinds(&kinds)?;
    }
    if !args.features.is_empty() {
        cfg.features = parse_features(&args.features)?;
    }
    if let Some(k) = args.kfold {
        cfg.evaluation = EvalMode::Kfold(k);
    }
    if let Some(f) = &args.format {
        cfg.format = f.parse().map_err(Error::Config)?;
    }
    if let Some(c) = &args.text_column {
        cfg.text_column.clone_from(c);
    }
    if let Some(c) = &args.label_column {
        cfg.label_column.clone_from(c);
    }
    if let EvalMode::Kfold(k) = cfg.evaluation {
        if k < 2 {
            return Err(Error::Config(format!("--kfold must be >= 2, got {k}")));
        }
    }
    Ok(cfg)
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn load_corpus(cfg: &RunConfig) -> Result<Corpus> {
    let input = cfg.require_input()?;
    Ok(load_csv(input, &cfg.text_column, &cfg.label_column)?)
}

fn single<T: Copy + std::fmt::Display>(items: &[T], what: &str) -> Result<T> {
    match items {
        [one] => Ok(*one),
        _ => Err(Error::Config(format!(
            "exactly one {what} is required, got {}",
            items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

pub fn cmd_preprocess(cfg: &RunConfig) -> Result<()> {
    let lex = cfg.lexicons()?;
    let corpus = load_corpus(cfg)?;
    let pre = preprocess_corpus(&corpus, &lex, EmptyPolicy::Sentinel);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Dataset(dataset::DatasetError::Csv(e));
    w.write_record([cfg.text_column.as_str(), cfg.label_column.as_str(), "clean_text", "trust", "angry"])
        .map_err(csv_err)?;
    for (comment, doc) in corpus.comments().iter().zip(&pre.docs) {
        w.write_record([
            comment.text.as_str(),
            comment.label.as_str(),
            doc.clean_text.as_str(),
            &doc.annotations.trust.to_string(),
            &doc.annotations.angry.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
    write_output(cfg.out.as_deref(), &String::from_utf8(bytes).expect("csv output is UTF-8"))?;

    let s = &pre.stats;
    eprintln!(
        "documents {} | empty after cleaning {} | emoji converted {} (unknown {}) | slang replaced {} | \
         numbers dropped {} | stopwords dropped {} | stems changed {} | duplicates dropped {}",
        s.documents,
        s.empty,
        s.stages.emoji_converted,
        s.stages.unknown_emoji,
        s.stages.slang_replaced,
        s.stages.numbers_dropped,
        s.stages.stopwords_dropped,
        s.stages.stems_changed,
        s.stages.duplicates_dropped
    );
    Ok(())
}

pub fn cmd_featurize(cfg: &RunConfig) -> Result<()> {
    let lex = cfg.lexicons()?;
    let corpus = load_corpus(cfg)?;
    let kind = single(&cfg.features()?, "feature kind")?;
    let pre = preprocess_corpus(&corpus, &lex, EmptyPolicy::Sentinel);
    let vectorizer = Vectorizer::fit(kind, &pre.docs)?;
    let stats = vectorizer.transform_all(&pre.docs).stats();
    let json = serde_json::to_string_pretty(&vectorizer).expect("vectorizer is serializable");
    write_output(cfg.out.as_deref(), &json)?;
    eprintln!("rows {} | terms {} | non-zeros {} | density {:.6}", stats.rows, stats.n_cols, stats.nnz, stats.density);
    Ok(())
}

pub fn cmd_train(cfg: &RunConfig) -> Result<()> {
    let lex = cfg.lexicons()?;
    let corpus = load_corpus(cfg)?;
    let model_path = cfg.require_model()?;
    let kind = single(&cfg.classifiers, "classifier")?;
    let features = single(&cfg.features()?, "feature kind")?;
    let spec = cfg.spec_for(kind)?;
    let pipeline = Pipeline::train(&corpus, &lex, features, &spec)?;
    pipeline.save(model_path)?;
    let texts: Vec<&str> = corpus.comments().iter().map(|c| c.text.as_str()).collect();
    let predicted = pipeline.predict(&texts, &lex)?;
    let correct = predicted.iter().zip(corpus.comments()).filter(|(p, c)| p.label == c.label).count();
    eprintln!(
        "trained {} on {} with {} terms; training accuracy {}",
        kind.display_name(),
        features.display_name(),
        pipeline.vectorizer.n_features(),
        report::percent(Some(correct as f64 / corpus.len() as f64))
    );
    Ok(())
}

pub fn cmd_predict(cfg: &RunConfig) -> Result<()> {
    let lex = cfg.lexicons()?;
    let input = cfg.require_input()?;
    let model_path = cfg.require_model()?;
    require_file(model_path)?;
    let pipeline = Pipeline::load(model_path)?;
    if !pipeline.checksums_match(&lex) {
        eprintln!("warning: lexicons differ from the ones used to train {}", model_path.display());
    }
    let texts = load_texts(input, &cfg.text_column)?;
    let predictions = pipeline.predict(&texts, &lex)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Dataset(dataset::DatasetError::Csv(e));
    w.write_record([cfg.text_column.as_str(), "label", "score"]).map_err(csv_err)?;
    for (text, p) in texts.iter().zip(&predictions) {
        w.write_record([text.as_str(), p.label.as_str(), &p.score.to_string()]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<csv>", e.into_error()))?;
    write_output(cfg.out.as_deref(), &String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn benchmark_report(cfg: &RunConfig) -> Result<(Vec<CleanDocument>, BenchmarkReport)> {
    let lex = cfg.lexicons()?;
    let corpus = load_corpus(cfg)?;
    let specs = cfg.specs()?;
    let features = cfg.features()?;
    let pre = preprocess_corpus(&corpus, &lex, EmptyPolicy::Sentinel);
    let report = run_benchmark(&pre.docs, &specs, &features, &cfg.benchmark())?;
    Ok((pre.docs, report))
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<()> {
    single(&cfg.classifiers, "classifier")?;
    single(&cfg.features()?, "feature kind")?;
    let (docs, report) = benchmark_report(cfg)?;
    let cell = &report.payload.cells[0];
    if cell.error.is_some() {
        // rerun the cell alone to surface the typed error
        let spec = cfg.spec_for(cell.classifier)?;
        evaluate_cell(&docs, &spec, cell.features, &cfg.benchmark())?;
    }
    let mut text = report::render(&report, cfg.format);
    if cfg.format == ReportFormat::Md {
        if let (Some(m), Some(per_class)) = (cell.confusion, cell.per_class) {
            text.push_str(&format!("\nConfusion: tp {} | fn {} | fp {} | tn {}\n", m.tp, m.fn_, m.fp, m.tn));
            for c in per_class {
                text.push_str(&format!(
                    "{}: precision {} | recall {}\n",
                    c.label,
                    report::percent(c.precision),
                    report::percent(c.recall)
                ));
            }
        }
    }
    write_output(cfg.out.as_deref(), &text)
}

/// Report files written by `benchmark` into its output directory.
pub const REPORT_FILES: [&str; 4] = ["report.json", "report.md", "report.csv", "accuracy_bars.csv"];

pub fn write_report_files(report: &BenchmarkReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let contents = [
        report::render_json(report),
        report::render_markdown(&report.payload),
        report::render_csv(&report.payload),
        report::accuracy_bars_csv(&report.payload),
    ];
    for (name, content) in REPORT_FILES.iter().zip(contents) {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

pub fn cmd_benchmark(cfg: &RunConfig) -> Result<()> {
    let (_, report) = benchmark_report(cfg)?;
    if let Some(dir) = &cfg.out {
        write_report_files(&report, dir)?;
    }
    write_output(None, &report::render(&report, cfg.format))
}

pub fn cmd_report(cfg: &RunConfig) -> Result<()> {
    let input = cfg.require_input()?;
    let json = fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let report: BenchmarkReport = serde_json::from_str(&json).map_err(|e| Error::json(input, e))?;
    write_output(cfg.out.as_deref(), &report::render(&report, cfg.format))
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let mut spec = VocabSpec::disjoint(args.vocab);
    if let Some(p) = args.positive_prior {
        spec = spec.with_prior(p);
    }
    let (corpus, stats) = generate_synthetic_with_stats(args.n, &spec, args.noise, args.seed)?;
    let mut buf = Vec::new();
    dataset::write_csv(&corpus, &mut buf, dataset::DEFAULT_TEXT_COLUMN, dataset::DEFAULT_LABEL_COLUMN)?;
    write_output(args.out.as_deref(), &String::from_utf8(buf).expect("csv output is UTF-8"))?;
    eprintln!(
        "{} documents ({} Positive) | substitution rate {:.4}",
        corpus.len(),
        corpus.counts().positive,
        stats.substitution_rate()
    );
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Preprocess(a) => cmd_preprocess(&resolve_config(a)?),
        Command::Featurize(a) => cmd_featurize(&resolve_config(a)?),
        Command::Train(a) => cmd_train(&resolve_config(a)?),
        Command::Predict(a) => cmd_predict(&resolve_config(a)?),
        Command::Evaluate(a) => cmd_evaluate(&resolve_config(a)?),
        Command::Benchmark(a) => cmd_benchmark(&resolve_config(a)?),
        Command::Report(a) => cmd_report(&resolve_config(a)?),
    }
}

/// The single-line stderr form of an error.
pub fn error_line(err: &Error) -> String {
    let msg = err.to_string().replace('\n', " ");
    format!("error[{}]: {msg}", err.code())
}
