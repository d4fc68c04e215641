//! Tabular output: CSV with a comment header, or a JSON mirror.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const TOOL: &str = concat!("arsm ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::B(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// 17 significant digits, fixed exponent form.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::Empty => String::new(),
            Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) if x.is_finite() => json!(x),
            Cell::F(_) | Cell::Empty => Value::Null,
            Cell::I(i) => json!(i),
            Cell::B(b) => json!(b),
            Cell::S(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn json_body(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("columns".into(), json!(self.columns));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        m.insert("rows".into(), Value::Array(rows));
        m
    }
}

/// Everything that identifies a run: the command and its resolved inputs.
#[derive(Debug, Clone)]
pub struct RunInfo {
    pub command: &'static str,
    pub params: Vec<(&'static str, Cell)>,
}

impl RunInfo {
    fn csv_header(&self) -> String {
        let mut s = format!("# {TOOL}\n# command: {}\n", self.command);
        for (k, v) in &self.params {
            let _ = writeln!(s, "# {k} = {}", v.csv());
        }
        s
    }

    fn json_head(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!(TOOL));
        m.insert("command".into(), json!(self.command));
        let params: Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), v.json()))
            .collect();
        m.insert("parameters".into(), Value::Object(params));
        m
    }

    pub fn render(&self, table: &Table, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = self.csv_header();
                s.push_str(&table.columns.join(","));
                s.push('\n');
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut m = self.json_head();
                m.insert("table".into(), json!(table.name));
                m.extend(table.json_body());
                pretty(&Value::Object(m))
            }
        }
    }

    /// All tables in one document, for standard output.
    pub fn render_all(&self, tables: &[Table], format: Format) -> String {
        match format {
            Format::Csv => tables
                .iter()
                .map(|t| format!("# table: {}\n{}", t.name, self.render(t, format)))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Json => {
                let mut m = self.json_head();
                let body: Map<String, Value> = tables
                    .iter()
                    .map(|t| (t.name.to_string(), Value::Object(t.json_body())))
                    .collect();
                m.insert("tables".into(), Value::Object(body));
                pretty(&Value::Object(m))
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

/// Where results go: a directory of files, or standard output.
#[derive(Debug, Clone)]
pub struct Sink {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: bool,
}

impl Sink {
    /// Checks that the output directory exists or can be created.
    pub fn prepare(&self) -> io::Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir)?;
        }
        Ok(())
    }

    fn write_file(dir: &Path, name: &str, contents: &str) -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents)?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }

    /// Writes tables and plots. Without an output directory tables go to
    /// standard output when `to_stdout` is set and plots are skipped.
    pub fn emit(
        &self,
        info: &RunInfo,
        tables: &[Table],
        plots: &[(&str, String)],
        to_stdout: bool,
    ) -> io::Result<()> {
        match &self.out {
            Some(dir) => {
                for t in tables {
                    let name = format!("{}.{}", t.name, self.format.extension());
                    Self::write_file(dir, &name, &info.render(t, self.format))?;
                }
                if self.plot {
                    for (name, svg) in plots {
                        Self::write_file(dir, &format!("{name}.svg"), svg)?;
                    }
                }
            }
            None if to_stdout => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(info.render_all(tables, self.format).as_bytes())?;
                lock.flush()?;
            }
            None => {}
        }
        Ok(())
    }
}
