use std::io::Write;

use serde::Serialize;

/// Column-oriented numeric output with a metadata echo.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            metadata: vec![("tool".into(), format!("ivsqrt {}", env!("CARGO_PKG_VERSION")))],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                for (k, v) in &self.metadata {
                    writeln!(out, "# {k}: {v}")?;
                }
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let metadata: serde_json::Map<String, serde_json::Value> = self
                    .metadata
                    .iter()
                    .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                    .collect();
                let doc = serde_json::json!({
                    "metadata": metadata,
                    "columns": self.columns,
                    "rows": self.rows,
                });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}
