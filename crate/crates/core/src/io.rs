//! File formats: distribution CSV files and JSON-lines training records.
//!
//! A distribution CSV has a header row of domain labels and one
//! distribution per row. Diagnostics give 1-based file line and column.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::benchmarks::ProbSample;
use crate::cascade::Cascade;
use crate::error::Error;
use crate::learning::Sample;
use crate::poss::{Degree, Domain, PossibilityDistribution, ProbabilityDistribution};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: row {row}, column {column}: {message}")]
    Format { path: String, row: usize, column: usize, message: String },
    #[error("{path}: line {line}: {message}")]
    Record { path: String, line: usize, message: String },
    #[error(transparent)]
    Model(#[from] Error),
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.display().to_string(), source }
}

/// Formats a degree with 12 significant digits and no trailing zeros.
pub fn fmt_degree(x: Degree) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

/// Header labels and degree rows of a CSV file. Every cell must parse as a
/// number in [0, 1].
pub fn read_degree_csv(path: &Path) -> IoResult<(Vec<String>, Vec<Vec<Degree>>)> {
    let shown = path.display().to_string();
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file);
    let fmt =
        |row: usize, column: usize, message: String| IoError::Format { path: shown.clone(), row, column, message };
    let header: Vec<String> =
        reader.headers().map_err(|e| fmt(1, 1, e.to_string()))?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let line = r + 2;
        let record = record.map_err(|e| fmt(line, 1, e.to_string()))?;
        if record.len() != header.len() {
            return Err(fmt(
                line,
                record.len().min(header.len()) + 1,
                format!("expected {} cells, found {}", header.len(), record.len()),
            ));
        }
        let mut row = Vec::with_capacity(record.len());
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| fmt(line, c + 1, format!("{cell:?} is not a number")))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(fmt(line, c + 1, format!("degree {cell} outside [0, 1]")));
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Reorders the columns of `rows` from `header` order into domain order.
fn align(path: &Path, header: &[String], domain: &Domain, rows: Vec<Vec<Degree>>) -> IoResult<Vec<Vec<Degree>>> {
    let shown = path.display().to_string();
    if header.len() != domain.len() {
        return Err(IoError::Format {
            path: shown,
            row: 1,
            column: 1,
            message: format!("header has {} labels, domain has {}", header.len(), domain.len()),
        });
    }
    let mut perm = Vec::with_capacity(header.len());
    for (c, h) in header.iter().enumerate() {
        let pos = domain.position(h).ok_or_else(|| IoError::Format {
            path: shown.clone(),
            row: 1,
            column: c + 1,
            message: format!("label {h:?} is not in the domain"),
        })?;
        perm.push(pos);
    }
    Ok(rows
        .into_iter()
        .map(|row| {
            let mut out = vec![0.0; row.len()];
            for (c, v) in row.into_iter().enumerate() {
                out[perm[c]] = v;
            }
            out
        })
        .collect())
}

pub fn read_possibility_csv(
    path: &Path,
    domain: &Arc<Domain>,
    renormalize: bool,
) -> IoResult<Vec<PossibilityDistribution>> {
    let (header, rows) = read_degree_csv(path)?;
    let rows = align(path, &header, domain, rows)?;
    rows.into_iter()
        .enumerate()
        .map(|(r, row)| {
            let made = if renormalize {
                PossibilityDistribution::renormalized(domain.clone(), row)
            } else {
                PossibilityDistribution::normalized(domain.clone(), row)
            };
            made.map_err(|e| IoError::Format {
                path: path.display().to_string(),
                row: r + 2,
                column: 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn read_probability_csv(
    path: &Path,
    domain: &Arc<Domain>,
    renormalize: bool,
) -> IoResult<Vec<ProbabilityDistribution>> {
    let (header, rows) = read_degree_csv(path)?;
    let rows = align(path, &header, domain, rows)?;
    rows.into_iter()
        .enumerate()
        .map(|(r, row)| {
            let made = if renormalize {
                ProbabilityDistribution::renormalized(domain.clone(), row)
            } else {
                ProbabilityDistribution::new(domain.clone(), row)
            };
            made.map_err(|e| IoError::Format {
                path: path.display().to_string(),
                row: r + 2,
                column: 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Writes a header of labels (plus optional extra columns) and one row per
/// entry of `rows`, degrees formatted with [`fmt_degree`].
pub fn write_degree_csv<W: Write>(
    out: W,
    labels: &[String],
    rows: &[Vec<Degree>],
    extra: Option<(&str, Vec<String>)>,
) -> IoResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| IoError::Io { path: "<output>".into(), source: e.into() };
    let mut header: Vec<&str> = labels.iter().map(String::as_str).collect();
    if let Some((name, _)) = &extra {
        header.push(name);
    }
    w.write_record(&header).map_err(wrap)?;
    for (i, row) in rows.iter().enumerate() {
        let mut cells: Vec<String> = row.iter().map(|&d| fmt_degree(d)).collect();
        if let Some((_, col)) = &extra {
            cells.push(col[i].clone());
        }
        w.write_record(&cells).map_err(wrap)?;
    }
    w.flush().map_err(|e| IoError::Io { path: "<output>".into(), source: e })?;
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
struct RawRecord {
    inputs: BTreeMap<String, Vec<Degree>>,
    #[serde(default)]
    targets: BTreeMap<String, String>,
}

/// How the degrees of a training record are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Possibility { renormalize: bool },
    Probability { renormalize: bool },
}

enum Parsed {
    Poss(Vec<Sample>),
    Prob(Vec<ProbSample>),
}

fn read_records(path: &Path, cascade: &Cascade, kind: InputKind) -> IoResult<Parsed> {
    let shown = path.display().to_string();
    let file = File::open(path).map_err(io_err(path))?;
    let attrs: BTreeMap<String, Arc<Domain>> = cascade.attributes().into_iter().map(|a| (a.name, a.domain)).collect();
    let mut poss = Vec::new();
    let mut prob = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec_err = |message: String| IoError::Record { path: shown.clone(), line: line_no, message };
        let raw: RawRecord = serde_json::from_str(&line).map_err(|e| rec_err(e.to_string()))?;
        let mut targets = BTreeMap::new();
        for (attr, label) in &raw.targets {
            let d = attrs.get(attr).ok_or_else(|| rec_err(format!("unknown attribute {attr:?}")))?;
            let idx = d.position(label).ok_or_else(|| rec_err(format!("unknown label {label:?} for {attr:?}")))?;
            targets.insert(attr.clone(), idx);
        }
        match kind {
            InputKind::Possibility { renormalize } => {
                let mut inputs = BTreeMap::new();
                for (attr, v) in raw.inputs {
                    let d = attrs.get(&attr).ok_or_else(|| rec_err(format!("unknown attribute {attr:?}")))?;
                    let pi = if renormalize {
                        PossibilityDistribution::renormalized(d.clone(), v)
                    } else {
                        PossibilityDistribution::normalized(d.clone(), v)
                    }
                    .map_err(|e| rec_err(format!("{attr}: {e}")))?;
                    inputs.insert(attr, pi);
                }
                poss.push(Sample { inputs, targets });
            }
            InputKind::Probability { renormalize } => {
                let mut inputs = BTreeMap::new();
                for (attr, v) in raw.inputs {
                    let d = attrs.get(&attr).ok_or_else(|| rec_err(format!("unknown attribute {attr:?}")))?;
                    let p = if renormalize {
                        ProbabilityDistribution::renormalized(d.clone(), v)
                    } else {
                        ProbabilityDistribution::new(d.clone(), v)
                    }
                    .map_err(|e| rec_err(format!("{attr}: {e}")))?;
                    inputs.insert(attr, p);
                }
                prob.push(ProbSample { inputs, targets });
            }
        }
    }
    Ok(match kind {
        InputKind::Possibility { .. } => Parsed::Poss(poss),
        InputKind::Probability { .. } => Parsed::Prob(prob),
    })
}

/// Reads `{"inputs": {attr: [degrees]}, "targets": {attr: label}}` lines
/// whose degrees are possibility distributions.
pub fn read_training_jsonl(path: &Path, cascade: &Cascade, renormalize: bool) -> IoResult<Vec<Sample>> {
    match read_records(path, cascade, InputKind::Possibility { renormalize })? {
        Parsed::Poss(s) => Ok(s),
        Parsed::Prob(_) => unreachable!(),
    }
}

/// Same record layout with probability distributions as inputs.
pub fn read_probability_jsonl(path: &Path, cascade: &Cascade, renormalize: bool) -> IoResult<Vec<ProbSample>> {
    match read_records(path, cascade, InputKind::Probability { renormalize })? {
        Parsed::Prob(s) => Ok(s),
        Parsed::Poss(_) => unreachable!(),
    }
}
