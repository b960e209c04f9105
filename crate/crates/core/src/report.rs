//! Machine-readable experiment output: a JSON report plus an optional CSV
//! table, written atomically.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::data::RNG_NAME;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub library: String,
    pub version: String,
    pub rng: String,
    pub seeds: Vec<u64>,
}

impl Provenance {
    pub fn current(seeds: Vec<u64>) -> Self {
        Self {
            library: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng: RNG_NAME.to_string(),
            seeds,
        }
    }
}

/// Plain numeric table for CSV emission.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl ExperimentReport {
    pub fn new(command: &str, seeds: Vec<u64>) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            metrics: BTreeMap::new(),
            provenance: Provenance::current(seeds),
            table: None,
        }
    }

    pub fn param<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    pub fn metric<T: Serialize>(&mut self, key: &str, value: T) -> &mut Self {
        self.metrics.insert(key.to_string(), serde_json::to_value(value).expect("serializable metric"));
        self
    }

    pub fn metric_f64(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }
}

/// Writes to a temporary file in the target directory, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_top_level_keys() {
        let mut r = ExperimentReport::new("depth", vec![1]);
        r.param("r", 1.0).metric("depths", vec![0.5]);
        let v: Value = serde_json::from_slice(&r.to_json().unwrap()).unwrap();
        for key in ["command", "parameters", "metrics", "provenance"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(r.metric_f64("depths"), None);
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![1.0, 0.25]);
        assert_eq!(String::from_utf8(t.to_csv().unwrap()).unwrap(), "a,b\n1,0.25\n");
    }
}
