//! CSV and JSON writers.
//!
//! CSV output starts with `#` lines recording the command, its parameters and
//! any derived notes, followed by a header row and the data. Complex columns
//! are written as `re_<name>` and `im_<name>` pairs in both formats.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use leaky_core::{Curve, Samples};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
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

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; defaults to `<out-dir>/<command>.<ext>` when an output
    /// directory is set, and to standard output otherwise
    #[arg(short, long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    /// Default output directory
    #[arg(long, env = "LEAKY_OUT_DIR")]
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

impl OutputArgs {
    fn destination(&self, command: &str) -> Option<PathBuf> {
        self.output.clone().or_else(|| {
            self.out_dir
                .as_ref()
                .map(|d| d.join(format!("{command}.{}", self.format.extension())))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Real(Vec<f64>),
    Int(Vec<i64>),
    Text(Vec<String>),
}

impl Values {
    fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Int(v) => v.len(),
            Values::Text(v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Values::Real(v) => number(v[i]),
            Values::Int(v) => v[i].to_string(),
            Values::Text(v) => v[i].clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Values::Real(v) => Value::from(v.iter().map(|x| json_number(*x)).collect::<Vec<_>>()),
            Values::Int(v) => json!(v),
            Values::Text(v) => json!(v),
        }
    }
}

/// Shortest round-trip representation, with an exponent only where needed.
fn number(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else {
        x.to_string()
    }
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Named columns of equal length.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    columns: Vec<(String, Values)>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn real(mut self, name: &str, values: Vec<f64>) -> Self {
        self.columns.push((name.into(), Values::Real(values)));
        self
    }

    pub fn int(mut self, name: &str, values: Vec<i64>) -> Self {
        self.columns.push((name.into(), Values::Int(values)));
        self
    }

    pub fn text(mut self, name: &str, values: Vec<String>) -> Self {
        self.columns.push((name.into(), Values::Text(values)));
        self
    }

    pub fn complex(self, name: &str, values: &[Complex64]) -> Self {
        self.real(&format!("re_{name}"), values.iter().map(|c| c.re).collect())
            .real(&format!("im_{name}"), values.iter().map(|c| c.im).collect())
    }

    pub fn from_curve(curve: &Curve) -> Self {
        let mut table = Table::new().real(curve.abscissa_label(), curve.abscissa().to_vec());
        for col in curve.columns() {
            table = match &col.samples {
                Samples::Real(v) => table.real(&col.label, v.clone()),
                Samples::Complex(v) => table.complex(&col.label, v),
            };
        }
        table
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.1.len())
    }

    pub fn json(&self) -> Value {
        Value::Array(
            self.columns
                .iter()
                .map(|(name, v)| json!({ "name": name, "values": v.json() }))
                .collect(),
        )
    }
}

/// Everything one command writes.
pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub notes: Vec<(String, String)>,
    pub table: Table,
    /// Extra top-level members of the JSON document.
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, parameters: &impl Serialize, table: Table) -> Result<Self> {
        let parameters = match serde_json::to_value(parameters)? {
            Value::Object(map) => map,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        Ok(Self {
            command,
            parameters,
            notes: Vec::new(),
            table,
            extra: Map::new(),
        })
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.notes.push((key.into(), value.to_string()));
        self
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(
            out,
            "# leaky {} (v{})",
            self.command,
            env!("CARGO_PKG_VERSION")
        )?;
        for (k, v) in &self.parameters {
            let v = match v {
                Value::String(s) => s.clone(),
                Value::Null => "none".into(),
                other => other.to_string(),
            };
            writeln!(out, "# {} = {v}", k.replace('_', "-"))?;
        }
        for (k, v) in &self.notes {
            writeln!(out, "# {k}: {v}")?;
        }
        let names: Vec<&str> = self.table.columns.iter().map(|c| c.0.as_str()).collect();
        writeln!(out, "{}", names.join(","))?;
        for i in 0..self.table.rows() {
            let row: Vec<String> = self.table.columns.iter().map(|c| c.1.cell(i)).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        doc.insert("parameters".into(), Value::Object(self.parameters.clone()));
        let notes: Map<String, Value> = self
            .notes
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        doc.insert("notes".into(), Value::Object(notes));
        doc.insert("columns".into(), self.table.json());
        for (k, v) in &self.extra {
            doc.insert(k.clone(), v.clone());
        }
        Value::Object(doc)
    }

    pub fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        serde_json::to_writer(&mut *out, &self.json())?;
        writeln!(out)
    }

    /// Writes in the requested format to the file or directory named by
    /// `output`, or to standard output.
    pub fn emit(&self, output: &OutputArgs) -> Result<()> {
        match output.destination(self.command) {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)
                        .with_context(|| format!("creating {}", dir.display()))?;
                }
                let file =
                    File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(file);
                self.write(output.format, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                self.write(output.format, &mut w)?;
                w.flush()?;
            }
        }
        Ok(())
    }

    fn write(&self, format: Format, w: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }
}
