//! CSV ingestion.
//!
//! * measures: rows `label,mass`
//! * sampled functions: rows `index,re,im`
//! * fixed-grid weights: rows `index,value`
//!
//! A first row whose numeric fields do not parse is treated as a header.
//! Malformed rows are reported with their 1-based line number.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::measure::{Atoms, DiscreteMeasure};
use crate::modular::SampledFunction;
use crate::weighted::Weight;

struct Rows {
    source: String,
    rows: Vec<(u64, Vec<String>)>,
}

fn read_rows<R: Read>(reader: R, source: &str, width: usize) -> Result<Rows> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| LabError::Csv {
            path: source.to_string(),
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != width {
            return Err(LabError::Csv {
                path: source.to_string(),
                line,
                reason: format!("expected {width} fields, found {}", record.len()),
            });
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }
    Ok(Rows {
        source: source.to_string(),
        rows,
    })
}

impl Rows {
    fn err(&self, line: u64, reason: impl Into<String>) -> LabError {
        LabError::Csv {
            path: self.source.clone(),
            line,
            reason: reason.into(),
        }
    }

    /// Drops a leading header row: one whose `numeric` fields do not all parse.
    fn skip_header(&mut self, numeric: &[usize]) {
        if let Some((_, first)) = self.rows.first() {
            if numeric.iter().any(|&i| first[i].parse::<f64>().is_err()) {
                self.rows.remove(0);
            }
        }
    }

    fn number(&self, line: u64, field: &str, what: &str) -> Result<f64> {
        field
            .parse::<f64>()
            .map_err(|_| self.err(line, format!("{what} `{field}` is not a number")))
    }

    /// Values placed by their `index` column; every index in `0..n` exactly once.
    fn indexed<T: Clone, F>(&self, parse: F) -> Result<Vec<T>>
    where
        F: Fn(u64, &[String]) -> Result<T>,
    {
        let n = self.rows.len();
        let mut out: Vec<Option<T>> = vec![None; n];
        for (line, row) in &self.rows {
            let idx: usize = row[0]
                .parse()
                .map_err(|_| self.err(*line, format!("index `{}` is not a non-negative integer", row[0])))?;
            if idx >= n {
                return Err(self.err(*line, format!("index {idx} out of range for {n} rows")));
            }
            if out[idx].is_some() {
                return Err(self.err(*line, format!("duplicate index {idx}")));
            }
            out[idx] = Some(parse(*line, row)?);
        }
        Ok(out.into_iter().map(|v| v.expect("all indices filled")).collect())
    }
}

pub fn read_measure<R: Read>(reader: R, source: &str) -> Result<DiscreteMeasure> {
    let mut rows = read_rows(reader, source, 2)?;
    rows.skip_header(&[1]);
    let mut labels = Vec::with_capacity(rows.rows.len());
    let mut masses = Vec::with_capacity(rows.rows.len());
    for (line, row) in &rows.rows {
        let mass = rows.number(*line, &row[1], "mass")?;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(rows.err(*line, format!("mass {mass} must be positive")));
        }
        labels.push(row[0].clone());
        masses.push(mass);
    }
    if masses.is_empty() {
        return Err(rows.err(0, "no rows"));
    }
    DiscreteMeasure::new(Atoms::Labels(labels), masses)
}

fn complex_values<R: Read>(reader: R, source: &str) -> Result<Vec<Complex64>> {
    let mut rows = read_rows(reader, source, 3)?;
    rows.skip_header(&[1, 2]);
    let values = rows.indexed(|line, row| {
        let re = rows.number(line, &row[1], "re")?;
        let im = rows.number(line, &row[2], "im")?;
        let v = Complex64::new(re, im);
        if !v.is_finite() {
            return Err(rows.err(line, "value is not finite"));
        }
        Ok(v)
    })?;
    if values.is_empty() {
        return Err(rows.err(0, "no rows"));
    }
    Ok(values)
}

/// Reads a function; without a measure, the uniform probability grid of the row count.
pub fn read_function<R: Read>(reader: R, source: &str, measure: Option<Arc<DiscreteMeasure>>) -> Result<SampledFunction> {
    let values = complex_values(reader, source)?;
    let measure = match measure {
        Some(m) => m,
        None => Arc::new(DiscreteMeasure::lebesgue_grid(values.len())?),
    };
    SampledFunction::new(measure, values)
}

pub fn read_weight<R: Read>(reader: R, source: &str, measure: Arc<DiscreteMeasure>) -> Result<Weight> {
    let mut rows = read_rows(reader, source, 2)?;
    rows.skip_header(&[1]);
    let values = rows.indexed(|line, row| rows.number(line, &row[1], "value"))?;
    Weight::new(measure, &values)
}

fn open(path: &Path) -> Result<std::fs::File> {
    Ok(std::fs::File::open(path)?)
}

pub fn load_measure(path: &Path) -> Result<DiscreteMeasure> {
    read_measure(open(path)?, &path.display().to_string())
}

pub fn load_function(path: &Path, measure: Option<Arc<DiscreteMeasure>>) -> Result<SampledFunction> {
    read_function(open(path)?, &path.display().to_string(), measure)
}

pub fn load_weight(path: &Path, measure: Arc<DiscreteMeasure>) -> Result<Weight> {
    read_weight(open(path)?, &path.display().to_string(), measure)
}

/// Writes `index,re,im` rows with a header.
pub fn write_function<W: Write>(writer: W, f: &SampledFunction) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| LabError::Io(std::io::Error::other(e));
    w.write_record(["index", "re", "im"]).map_err(io)?;
    for (i, v) in f.values().iter().enumerate() {
        w.write_record([i.to_string(), format!("{:e}", v.re), format!("{:e}", v.im)])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
