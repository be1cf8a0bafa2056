//! Rendering of command results as JSON or CSV.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command result. `table` is the CSV view; results without one are
/// flattened to `key,value` rows.
pub struct Output {
    pub json: Value,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Self { json, table: None }
    }

    pub fn with_table(json: Value, table: Table) -> Self {
        Self { json, table: Some(table) }
    }
}

pub fn render(out: &Output, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&out.json).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => {
            let flat;
            let table = match &out.table {
                Some(t) => t,
                None => {
                    let mut rows = Vec::new();
                    flatten("", &out.json, &mut rows);
                    flat = Table { header: vec!["key".into(), "value".into()], rows };
                    &flat
                }
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).map_err(|e| e.to_string())?;
            for row in &table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
        }
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows)),
        Value::String(s) => rows.push(vec![prefix.to_string(), s.clone()]),
        other => rows.push(vec![prefix.to_string(), other.to_string()]),
    }
}

/// `{"re": .., "im": ..}` for a complex number.
pub fn complex(z: num_complex::Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), z.re.into());
    m.insert("im".into(), z.im.into());
    Value::Object(m)
}
