use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};
use viro_cook::rational::{fmt_q, to_f64};
use viro_cook::Q;

/// Adds the `schema` field to a JSON object.
pub fn document(schema: &str, body: Value) -> Value {
    let mut map = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("data".into(), other);
            m
        }
    };
    map.insert("schema".into(), json!(format!("viro-{schema}/1")));
    Value::Object(map)
}

pub fn rational(v: &Q) -> Value {
    json!(fmt_q(v))
}

pub fn rationals(v: &[Q]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

/// Exact and float columns for one rational.
pub fn q_cells(v: &Q) -> [String; 2] {
    [fmt_q(v), to_f64(v).to_string()]
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().context("flushing CSV")
}

pub fn json_bytes(v: &Value) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

/// Stdout, or a file when `--output` is set.
pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Self { path }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
