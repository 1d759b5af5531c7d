use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Corpus, DatasetError, Label};

pub const DEFAULT_TEXT_COLUMN: &str = "text";
pub const DEFAULT_LABEL_COLUMN: &str = "category";

/// Reads a comma-separated, double-quoted CSV with a header row.
///
/// Rows whose text is blank after trimming are skipped with a warning; every
/// other row must carry a valid label.
pub fn load_csv(
    path: impl AsRef<Path>,
    text_column: &str,
    label_column: &str,
) -> Result<Corpus, DatasetError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, text_column, label_column)
}

pub fn read_csv<R: Read>(
    reader: R,
    text_column: &str,
    label_column: &str,
) -> Result<Corpus, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = reader.byte_headers()?.clone();
    let mut text_idx = None;
    let mut label_idx = None;
    for (i, name) in headers.iter().enumerate() {
        let name = std::str::from_utf8(name).map_err(|_| DatasetError::Encoding { row: 0 })?;
        let name = name.trim_start_matches('\u{feff}');
        if text_idx.is_none() && name == text_column {
            text_idx = Some(i);
        }
        if label_idx.is_none() && name == label_column {
            label_idx = Some(i);
        }
    }
    let text_idx = text_idx.ok_or_else(|| DatasetError::MissingColumn(text_column.to_owned()))?;
    let label_idx = label_idx.ok_or_else(|| DatasetError::MissingColumn(label_column.to_owned()))?;

    let mut rows = Vec::new();
    for (n, record) in reader.byte_records().enumerate() {
        let row = n + 1;
        let record = record?;
        let field = |idx: usize| -> Result<&str, DatasetError> {
            let bytes = record.get(idx).unwrap_or_default();
            std::str::from_utf8(bytes).map_err(|_| DatasetError::Encoding { row })
        };
        let text = field(text_idx)?;
        let raw_label = field(label_idx)?;
        let label = Label::parse(raw_label).ok_or_else(|| DatasetError::BadLabel {
            row,
            label: raw_label.to_owned(),
        })?;
        if text.trim().is_empty() {
            log::warn!("row {row}: blank comment text skipped");
            continue;
        }
        rows.push((text.to_owned(), label));
    }
    if rows.is_empty() {
        return Err(DatasetError::EmptyCorpus);
    }
    Corpus::from_labeled(rows)
}

/// Reads only the text column, keeping every row (blank ones included).
pub fn read_texts<R: Read>(reader: R, text_column: &str) -> Result<Vec<String>, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = reader.byte_headers()?.clone();
    let text_idx = headers
        .iter()
        .position(|h| std::str::from_utf8(h).is_ok_and(|h| h.trim_start_matches('\u{feff}') == text_column))
        .ok_or_else(|| DatasetError::MissingColumn(text_column.to_owned()))?;
    let mut texts = Vec::new();
    for (n, record) in reader.byte_records().enumerate() {
        let record = record?;
        let bytes = record.get(text_idx).unwrap_or_default();
        let text = std::str::from_utf8(bytes).map_err(|_| DatasetError::Encoding { row: n + 1 })?;
        texts.push(text.to_owned());
    }
    Ok(texts)
}

pub fn load_texts(path: impl AsRef<Path>, text_column: &str) -> Result<Vec<String>, DatasetError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_texts(file, text_column)
}

pub fn write_csv<W: Write>(
    corpus: &Corpus,
    writer: W,
    text_column: &str,
    label_column: &str,
) -> Result<(), DatasetError> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record([text_column, label_column])?;
    for c in corpus.comments() {
        out.write_record([c.text.as_str(), c.label.as_str()])?;
    }
    out.flush().map_err(|source| DatasetError::Io { path: "<writer>".into(), source })?;
    Ok(())
}

pub fn write_csv_path(
    corpus: &Corpus,
    path: impl AsRef<Path>,
    text_column: &str,
    label_column: &str,
) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_csv(corpus, file, text_column, label_column)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::ClassCounts;
    use proptest::prelude::*;

    const TABLE_SAMPLE: &str = "\
text,category
ini penyegelan banyak sekali tetangga sebelah.,Negative
nggak adil negara sama sama bayar pajak,Negative
Tak adil macam ini pln sama pengguna,Negative
Bagaimana dgn rmj dinas 450...tp listiknya byr sendiri tiap bln termsk PDAM,Negative
Setuju nih.. kebanyakan ngibul nasih gratisan aja..,Negative
Ya gk pp di syukuri aj ya,Positive
Alhamdulillah saya bisa,Positive
\"Sabar nggeh, insyaallah rezekinya ada terus. Aamiin\",Positive
Almhdllh sdh dpat akses dan sdh dpat nmer tokennya...,Positive
";

    #[test]
    fn loads_sample_rows() {
        let corpus = read_csv(TABLE_SAMPLE.as_bytes(), "text", "category").unwrap();
        assert_eq!(corpus.len(), 9);
        assert_eq!(corpus.counts(), ClassCounts { positive: 4, negative: 5 });
        assert_eq!(corpus.comments()[7].text, "Sabar nggeh, insyaallah rezekinya ada terus. Aamiin");
        assert_eq!(corpus.comments()[8].id, 8);
    }

    #[test]
    fn header_only_is_empty_corpus() {
        let err = read_csv("text,category\n".as_bytes(), "text", "category").unwrap_err();
        assert!(matches!(err, DatasetError::EmptyCorpus));
    }

    #[test]
    fn unknown_label_is_rejected_with_row() {
        let csv = "text,category\nbagus,positive\nbiasa saja,neutral\n";
        match read_csv(csv.as_bytes(), "text", "category").unwrap_err() {
            DatasetError::BadLabel { row, label } => {
                assert_eq!(row, 2);
                assert_eq!(label, "neutral");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn labels_are_canonicalized() {
        let csv = "text,category\nbagus,POSITIVE\njelek,negative\n";
        let corpus = read_csv(csv.as_bytes(), "text", "category").unwrap();
        assert_eq!(corpus.labels(), vec![Label::Positive, Label::Negative]);
    }

    #[test]
    fn missing_column_is_named() {
        let err = read_csv("comment,category\nx,Positive\n".as_bytes(), "text", "category").unwrap_err();
        assert!(matches!(err, DatasetError::MissingColumn(c) if c == "text"));
    }

    #[test]
    fn invalid_utf8_reports_row() {
        let mut bytes = b"text,category\nok,Positive\n".to_vec();
        bytes.extend_from_slice(b"bad \xff\xfe,Negative\n");
        let err = read_csv(bytes.as_slice(), "text", "category").unwrap_err();
        assert!(matches!(err, DatasetError::Encoding { row: 2 }));
    }

    #[test]
    fn custom_columns_and_extra_fields() {
        let csv = "id,komentar,label\n1,mantap,Positive\n2,kecewa,Negative\n";
        let corpus = read_csv(csv.as_bytes(), "komentar", "label").unwrap();
        assert_eq!(corpus.comments()[1].text, "kecewa");
    }

    proptest! {
        #[test]
        fn write_then_read_is_identity(
            rows in proptest::collection::vec(("[a-zA-Z0-9 ,.!\"😂]{0,20}[a-z]", any::<bool>()), 1..20)
        ) {
            let corpus = Corpus::from_labeled(
                rows.into_iter().map(|(t, p)| (t, Label::from_positive(p))),
            ).unwrap();
            let mut buf = Vec::new();
            write_csv(&corpus, &mut buf, "text", "category").unwrap();
            let back = read_csv(buf.as_slice(), "text", "category").unwrap();
            prop_assert_eq!(back, corpus);
        }
    }
}
