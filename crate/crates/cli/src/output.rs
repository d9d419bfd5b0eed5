use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A float written with 17 significant digits; non-finite values become
/// `null` in JSON and `NaN`/`inf` in CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn text(&self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

/// A table row that can be written as CSV or serialised as JSON.
pub trait Row: Serialize {
    fn columns() -> Vec<String>;
    fn fields(&self) -> Vec<String>;
}

#[derive(Debug, Clone)]
enum ParamValue {
    Number(Num),
    Int(usize),
    Text(String),
}

/// Ordered (name, value) pairs describing a run.
#[derive(Debug, Clone, Default)]
pub struct Params(Vec<(String, ParamValue)>);

impl Params {
    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.0.push((key.to_string(), ParamValue::Number(Num(v))));
        self
    }

    pub fn int(mut self, key: &str, v: usize) -> Self {
        self.0.push((key.to_string(), ParamValue::Int(v)));
        self
    }

    pub fn text(mut self, key: &str, v: &str) -> Self {
        self.0.push((key.to_string(), ParamValue::Text(v.to_string())));
        self
    }

    pub fn write_csv_header(&self, w: &mut dyn Write) -> io::Result<()> {
        for (k, v) in &self.0 {
            let v = match v {
                ParamValue::Number(n) => n.text(),
                ParamValue::Int(i) => i.to_string(),
                ParamValue::Text(t) => t.clone(),
            };
            writeln!(w, "# {k}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            match v {
                ParamValue::Number(n) => map.serialize_entry(k, n)?,
                ParamValue::Int(i) => map.serialize_entry(k, i)?,
                ParamValue::Text(t) => map.serialize_entry(k, t)?,
            }
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TableDoc<'a, R: Serialize> {
    parameters: &'a Params,
    rows: &'a [R],
}

pub fn write_table<R: Row>(format: Format, params: &Params, rows: &[R], w: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => write_json(
            &TableDoc {
                parameters: params,
                rows,
            },
            w,
        )?,
        Format::Csv => {
            params.write_csv_header(w)?;
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(R::columns())?;
            for r in rows {
                csv.write_record(r.fields())?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

pub fn write_json<T: Serialize>(doc: &T, w: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, doc)?;
    writeln!(w)?;
    Ok(())
}

/// Runs `f` against the output file, or stdout when no path is given.
pub fn with_output<F>(path: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w).with_context(|| format!("writing {}", p.display()))?;
            w.flush().with_context(|| format!("writing {}", p.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
