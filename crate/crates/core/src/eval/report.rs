use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::benchmark::{BenchmarkPayload, BenchmarkReport, CellResult, EvalMode};
use crate::classifiers::ClassifierKind;
use crate::features::FeatureKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Md,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(ReportFormat::Md),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format '{other}' (expected md, csv or json)")),
        }
    }
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Md => "md",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

pub const POSITIVE_CLASS_NOTE: &str =
    "Precision and recall are for the Positive class; n/a marks an undefined ratio.";

/// `0.849912` becomes `84.99%`; `None` becomes `n/a`.
pub fn percent(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{:.2}%", v * 100.0),
        None => "n/a".to_owned(),
    }
}

const METRICS: [&str; 3] = ["Accuracy", "Precision", "Recall"];

fn header(payload: &BenchmarkPayload) -> Vec<String> {
    let mut h = vec!["Method".to_owned()];
    for f in &payload.features {
        h.extend(METRICS.iter().map(|m| format!("{} {m}", f.display_name())));
    }
    h
}

fn cell_values(cell: Option<&CellResult>) -> [String; 3] {
    match cell {
        Some(CellResult { metrics: Some(m), .. }) => [percent(Some(m.accuracy)), percent(m.precision), percent(m.recall)],
        Some(_) => ["error".into(), "error".into(), "error".into()],
        None => ["skipped".into(), "skipped".into(), "skipped".into()],
    }
}

fn rows(payload: &BenchmarkPayload) -> Vec<Vec<String>> {
    payload
        .classifiers
        .iter()
        .map(|&k| {
            let mut row = vec![k.display_name().to_owned()];
            for &f in &payload.features {
                row.extend(cell_values(payload.cell(k, f)));
            }
            row
        })
        .collect()
}

fn describe(classifier: ClassifierKind, features: FeatureKind) -> String {
    format!("{} with {}", classifier.display_name(), features.display_name())
}

/// One line naming the most accurate cell.
pub fn best_line(payload: &BenchmarkPayload) -> String {
    match payload.best() {
        Some(c) => format!(
            "Best by accuracy: {} ({})",
            describe(c.classifier, c.features),
            percent(c.metrics.map(|m| m.accuracy))
        ),
        None => "Best by accuracy: none (every cell failed)".to_owned(),
    }
}

pub fn render_markdown(payload: &BenchmarkPayload) -> String {
    let mut out = String::new();
    let table_row = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
    let head = header(payload);
    out.push_str(&table_row(&head));
    out.push_str(&table_row(&vec!["---".to_owned(); head.len()]));
    for r in rows(payload) {
        out.push_str(&table_row(&r));
    }
    out.push('\n');
    out.push_str(&best_line(payload));
    out.push_str("\n\n");
    match (payload.mode, payload.split) {
        (EvalMode::Kfold(k), _) => {
            let _ = writeln!(out, "Means over {k} stratified folds of {} documents, seed {}.", payload.documents, payload.seed);
        }
        (EvalMode::Holdout, Some(s)) => {
            let _ = writeln!(out, "Hold-out split: {} train / {} test, seed {}.", s.train, s.test, payload.seed);
        }
        (EvalMode::Holdout, None) => {}
    }
    let failed: Vec<&CellResult> = payload.cells.iter().filter(|c| c.error.is_some()).collect();
    for c in failed {
        let _ = writeln!(out, "Error in {}: {}", describe(c.classifier, c.features), c.error.as_deref().unwrap_or(""));
    }
    out.push_str(POSITIVE_CLASS_NOTE);
    out.push('\n');
    out
}

fn csv_string(records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

pub fn render_csv(payload: &BenchmarkPayload) -> String {
    csv_string(std::iter::once(header(payload)).chain(rows(payload)))
}

/// Per-cell accuracy in percent, for bar charts.
pub fn accuracy_bars_csv(payload: &BenchmarkPayload) -> String {
    let head = vec!["method".to_owned(), "features".to_owned(), "accuracy_percent".to_owned()];
    let body = payload.cells.iter().map(|c| {
        vec![
            c.classifier.display_name().to_owned(),
            c.features.display_name().to_owned(),
            c.metrics.map_or_else(String::new, |m| format!("{:.2}", m.accuracy * 100.0)),
        ]
    });
    csv_string(std::iter::once(head).chain(body))
}

pub fn render_json(report: &BenchmarkReport) -> String {
    serde_json::to_string_pretty(report).expect("report is serializable")
}

/// Canonical JSON of the payload alone.
pub fn payload_json(payload: &BenchmarkPayload) -> String {
    serde_json::to_string_pretty(payload).expect("payload is serializable")
}

pub fn render(report: &BenchmarkReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Md => render_markdown(&report.payload),
        ReportFormat::Csv => render_csv(&report.payload),
        ReportFormat::Json => render_json(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::metrics::MetricSet;

    fn cell(classifier: ClassifierKind, features: FeatureKind, acc: f64, precision: Option<f64>) -> CellResult {
        CellResult {
            classifier,
            features,
            metrics: Some(MetricSet { accuracy: acc, precision, recall: Some(0.5) }),
            confusion: None,
            per_class: None,
            spread: None,
            error: None,
        }
    }

    fn payload() -> BenchmarkPayload {
        BenchmarkPayload {
            seed: 42,
            mode: EvalMode::Kfold(5),
            stratified: true,
            documents: 10,
            split: None,
            classifiers: vec![ClassifierKind::Knn, ClassifierKind::RandomForest],
            features: vec![FeatureKind::Counts, FeatureKind::TfIdf],
            cells: vec![
                cell(ClassifierKind::Knn, FeatureKind::Counts, 0.5, None),
                cell(ClassifierKind::Knn, FeatureKind::TfIdf, 0.6, Some(0.25)),
                cell(ClassifierKind::RandomForest, FeatureKind::Counts, 0.849912, Some(1.0)),
                CellResult {
                    error: Some("boom".into()),
                    metrics: None,
                    ..cell(ClassifierKind::RandomForest, FeatureKind::TfIdf, 0.0, None)
                },
            ],
        }
    }

    #[test]
    fn percent_uses_two_decimals() {
        assert_eq!(percent(Some(0.849912)), "84.99%");
        assert_eq!(percent(Some(0.82634)), "82.63%");
        assert_eq!(percent(None), "n/a");
    }

    #[test]
    fn markdown_layout() {
        let md = render_markdown(&payload());
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(
            lines[0],
            "| Method | Count-Vectorization Accuracy | Count-Vectorization Precision | Count-Vectorization Recall \
             | TF-IDF Accuracy | TF-IDF Precision | TF-IDF Recall |"
        );
        assert_eq!(lines[2], "| K-NN | 50.00% | n/a | 50.00% | 60.00% | 25.00% | 50.00% |");
        assert_eq!(lines[3], "| Random Forest | 84.99% | 100.00% | 50.00% | error | error | error |");
        assert!(md.contains("Best by accuracy: Random Forest with Count-Vectorization (84.99%)"));
        assert!(md.contains("Error in Random Forest with TF-IDF: boom"));
        assert!(md.trim_end().ends_with(POSITIVE_CLASS_NOTE));
    }

    #[test]
    fn csv_matches_table_rows() {
        let csv = render_csv(&payload());
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("Method,Count-Vectorization Accuracy"));
        assert_eq!(lines.next().unwrap(), "K-NN,50.00%,n/a,50.00%,60.00%,25.00%,50.00%");
        let bars = accuracy_bars_csv(&payload());
        assert_eq!(bars.lines().nth(3).unwrap(), "Random Forest,Count-Vectorization,84.99");
        assert_eq!(bars.lines().nth(4).unwrap(), "Random Forest,TF-IDF,");
    }

    #[test]
    fn best_prefers_first_on_ties() {
        let mut p = payload();
        p.cells[1].metrics.as_mut().unwrap().accuracy = 0.849912;
        assert_eq!(p.best().unwrap().classifier, ClassifierKind::Knn);
    }

    #[test]
    fn format_names() {
        assert_eq!("md".parse::<ReportFormat>().unwrap(), ReportFormat::Md);
        assert_eq!("JSON".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
