//! CSV and JSON emission. Numbers are printed with 17 significant digits so
//! that the same configuration always produces byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Flag(bool),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) => x.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            // JSON has no infinities; keep them readable as strings.
            Cell::Num(x) if x.is_finite() => (*x).into(),
            Cell::Num(x) => x.to_string().into(),
            Cell::Int(i) => (*i).into(),
            Cell::Flag(b) => (*b).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Missing => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `#` lines after the configuration (summaries, warnings).
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn render_csv(config: &RunConfig, table: &Table) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    writeln!(out, "# becgap {}", env!("CARGO_PKG_VERSION")).map_err(io_err)?;
    for line in config.describe().into_iter().chain(table.notes.iter().cloned()) {
        writeln!(out, "# {line}").map_err(io_err)?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn render_json(config: &RunConfig, table: &Table) -> Result<Vec<u8>, CliError> {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj = table.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
            serde_json::Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config.to_json(),
        "notes": table.notes,
        "columns": table.columns,
        "rows": rows,
    });
    let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn emit(config: &RunConfig, table: &Table) -> Result<(), CliError> {
    let format = if config.has("format") { config.string("format")? } else { "csv" };
    let bytes = match format {
        "csv" => render_csv(config, table)?,
        "json" => render_json(config, table)?,
        other => return Err(CliError::Usage(format!("--format: expected csv or json, got `{other}`"))),
    };
    if config.has("output") {
        let path = config.string("output")?;
        std::fs::write(Path::new(path), bytes).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))
    } else {
        std::io::stdout().write_all(&bytes).map_err(io_err)
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
