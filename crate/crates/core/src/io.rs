//! Labelled numeric CSV ingestion (features plus a 0/1 anomaly column).
//!
//! The first record is treated as a header when any of its cells does not
//! parse as a number. Row and column numbers in errors are 1-based and count
//! the header line when there is one.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::sample::SampleSet;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelColumn {
    /// Final column.
    #[default]
    Last,
    /// Zero-based column index.
    Index(usize),
    /// Header name.
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "last" || s == "-1" {
            return Ok(LabelColumn::Last);
        }
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelColumn::Last => f.write_str("last"),
            LabelColumn::Index(i) => write!(f, "{i}"),
            LabelColumn::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub samples: SampleSet,
    /// `1` marks an anomaly.
    pub labels: Vec<u8>,
    pub name: String,
}

impl LabeledDataset {
    pub fn new(samples: SampleSet, labels: Vec<u8>, name: impl Into<String>) -> Result<Self> {
        if labels.len() != samples.n() {
            return Err(DepthError::DimensionMismatch {
                expected: samples.n(),
                got: labels.len(),
            });
        }
        if let Some(i) = labels.iter().position(|&l| l > 1) {
            return Err(DepthError::InvalidParameter(format!("label {i} is not 0 or 1")));
        }
        Ok(Self {
            samples,
            labels,
            name: name.into(),
        })
    }

    pub fn anomalies(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }
}

struct RawTable {
    header: Option<Vec<String>>,
    records: Vec<Vec<String>>,
}

fn read_table<R: Read>(reader: R, delimiter: u8) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
    }
    if records.is_empty() {
        return Err(DepthError::Empty("CSV file has no records"));
    }
    let header = if records[0].iter().any(|c| c.parse::<f64>().is_err()) {
        Some(records.remove(0))
    } else {
        None
    };
    if records.is_empty() {
        return Err(DepthError::Empty("CSV file has a header but no data rows"));
    }
    Ok(RawTable { header, records })
}

fn parse_cell(cell: &str, row: usize, col: usize) -> Result<f64> {
    let v: f64 = cell.parse().map_err(|_| DepthError::Parse {
        row,
        col,
        msg: format!("'{cell}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(DepthError::Parse {
            row,
            col,
            msg: format!("'{cell}' is not finite"),
        });
    }
    Ok(v)
}

fn parse_numeric(table: &RawTable, skip: Option<usize>) -> Result<(Vec<f64>, Vec<Vec<f64>>, usize)> {
    let width = table.records[0].len();
    let offset = usize::from(table.header.is_some()) + 1;
    let d = width - usize::from(skip.is_some());
    if d == 0 {
        return Err(DepthError::Empty("CSV has no feature columns"));
    }
    let mut features = Vec::with_capacity(table.records.len() * d);
    let mut skipped = Vec::new();
    for (i, rec) in table.records.iter().enumerate() {
        let row = i + offset;
        if rec.len() != width {
            return Err(DepthError::Parse {
                row,
                col: rec.len().min(width) + 1,
                msg: format!("expected {width} cells, found {}", rec.len()),
            });
        }
        let mut extra = Vec::new();
        for (j, cell) in rec.iter().enumerate() {
            let v = parse_cell(cell, row, j + 1)?;
            if Some(j) == skip {
                extra.push(v);
            } else {
                features.push(v);
            }
        }
        skipped.push(extra);
    }
    Ok((features, skipped, d))
}

/// Parses labelled CSV content from any reader.
pub fn parse_labeled_csv<R: Read>(reader: R, label_column: &LabelColumn, delimiter: u8, name: &str) -> Result<LabeledDataset> {
    let table = read_table(reader, delimiter)?;
    let width = table.records[0].len();
    let label_idx = match label_column {
        LabelColumn::Last => width - 1,
        LabelColumn::Index(i) if *i < width => *i,
        LabelColumn::Index(i) => return Err(DepthError::MissingLabelColumn(format!("index {i} (file has {width} columns)"))),
        LabelColumn::Name(n) => table
            .header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == n))
            .ok_or_else(|| DepthError::MissingLabelColumn(n.clone()))?,
    };
    if width < 2 {
        return Err(DepthError::Empty("CSV needs at least one feature column besides the label"));
    }
    let (features, labels_raw, d) = parse_numeric(&table, Some(label_idx))?;
    let offset = usize::from(table.header.is_some()) + 1;
    let labels = labels_raw
        .iter()
        .enumerate()
        .map(|(i, v)| match v[0] {
            0.0 => Ok(0u8),
            1.0 => Ok(1u8),
            x => Err(DepthError::Parse {
                row: i + offset,
                col: label_idx + 1,
                msg: format!("label {x} is not 0 or 1"),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    let n = labels.len();
    LabeledDataset::new(SampleSet::new(features, n, d)?, labels, name)
}

/// Loads an ODDS-style CSV export: numeric feature columns and a 0/1 label column.
pub fn load_labeled_csv(path: impl AsRef<Path>, label_column: &LabelColumn, delimiter: u8) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset").to_string();
    parse_labeled_csv(File::open(path)?, label_column, delimiter, &name)
}

/// Loads an unlabelled numeric CSV.
pub fn load_samples_csv(path: impl AsRef<Path>, delimiter: u8) -> Result<SampleSet> {
    let table = read_table(File::open(path)?, delimiter)?;
    let (features, _, d) = parse_numeric(&table, None)?;
    SampleSet::new(features, table.records.len(), d)
}

/// Writes features then the label column, with a header `x0,...,label`.
pub fn write_labeled_csv<W: Write>(dataset: &LabeledDataset, writer: W, delimiter: u8) -> Result<()> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    let d = dataset.samples.d();
    let mut header: Vec<String> = (0..d).map(|k| format!("x{k}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for (row, label) in dataset.samples.rows().zip(&dataset.labels) {
        let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        rec.push(label.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
