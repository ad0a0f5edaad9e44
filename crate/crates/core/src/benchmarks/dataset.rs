//! Datasets described by a JSON manifest.
//!
//! The labels file is a CSV whose header names the source attributes and
//! whose rows give each sample's true digit labels. The distributions file
//! is a probability CSV (header = digit labels) holding one row per source
//! attribute per sample, sample by sample, attributes in labels-file order.
//! Targets for every stage follow from the true digits.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::addition::{addition_targets, gen_addition_rules, AdditionSpec};
use super::evaluate::ProbSample;
use super::sudoku::{cell_attr, gen_sudoku_rules, pair_attr, sudoku_valid, SudokuSpec};
use super::synthetic::{synthesize, SyntheticNoiseModel};
use crate::cascade::Cascade;
use crate::error::{Error, Result};
use crate::io::{read_probability_csv, write_degree_csv, IoError, IoResult};
use crate::poss::{Domain, ProbabilityDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Addition,
    Sudoku,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub problem: ProblemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    pub distributions: PathBuf,
    pub labels: PathBuf,
    pub split: String,
}

/// A benchmark problem with its rule system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Addition(AdditionSpec),
    Sudoku(SudokuSpec),
}

impl Problem {
    pub fn from_manifest(m: &Manifest) -> Result<Self> {
        match m.problem {
            ProblemKind::Addition => {
                let k = m.k.ok_or_else(|| Error::InvalidConfig("addition manifest needs k".into()))?;
                Ok(Problem::Addition(AdditionSpec { k }))
            }
            ProblemKind::Sudoku => {
                let side = m.side.ok_or_else(|| Error::InvalidConfig("sudoku manifest needs side".into()))?;
                Ok(Problem::Sudoku(SudokuSpec::new(side)?))
            }
        }
    }

    pub fn rules(&self) -> Result<Cascade> {
        match self {
            Problem::Addition(s) => gen_addition_rules(*s),
            Problem::Sudoku(s) => gen_sudoku_rules(s),
        }
    }

    /// Source attribute names in labels-file order.
    pub fn source_names(&self) -> Vec<String> {
        match self {
            Problem::Addition(s) => (1..=2 * s.k).map(super::addition::digit_attr).collect(),
            Problem::Sudoku(s) => (1..=s.side).flat_map(|i| (1..=s.side).map(move |j| cell_attr(i, j))).collect(),
        }
    }

    pub fn digit_count(&self) -> usize {
        match self {
            Problem::Addition(_) => 10,
            Problem::Sudoku(s) => s.side,
        }
    }

    /// Targets of every stage output for the true digits of one sample.
    pub fn targets(&self, digits: &[usize]) -> Result<BTreeMap<String, usize>> {
        match self {
            Problem::Addition(s) => addition_targets(s.k, digits),
            Problem::Sudoku(s) => {
                let n = s.side;
                if digits.len() != n * n || digits.iter().any(|&d| d >= n) {
                    return Err(Error::InvalidConfig(format!("expected {} digits in 0..{n}", n * n)));
                }
                let grid: Vec<Vec<usize>> = digits.chunks(n).map(<[usize]>::to_vec).collect();
                let mut t: BTreeMap<String, usize> = s
                    .constraints
                    .iter()
                    .map(|&c| (pair_attr(c), grid[c.0 - 1][c.1 - 1] * n + grid[c.2 - 1][c.3 - 1]))
                    .collect();
                t.insert("c".into(), sudoku_valid(s, &grid));
                Ok(t)
            }
        }
    }

    /// Pairs classifier rows with their source attributes and targets.
    pub fn sample(&self, digits: &[usize], rows: Vec<ProbabilityDistribution>) -> Result<ProbSample> {
        let names = self.source_names();
        if rows.len() != names.len() {
            return Err(Error::ShapeMismatch { expected: names.len(), found: rows.len() });
        }
        Ok(ProbSample { inputs: names.into_iter().zip(rows).collect(), targets: self.targets(digits)? })
    }
}

/// Loads the samples described by a manifest. Relative paths are resolved
/// against the manifest's directory.
pub fn load_dataset(manifest_path: &Path) -> IoResult<(Manifest, Problem, Vec<ProbSample>)> {
    let text = fs::read_to_string(manifest_path)
        .map_err(|source| IoError::Io { path: manifest_path.display().to_string(), source })?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| IoError::Record {
        path: manifest_path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let problem = Problem::from_manifest(&manifest)?;
    let digits_domain = Arc::new(Domain::numbered(problem.digit_count())?);
    let labels_path = base.join(&manifest.labels);
    let labels = read_labels(&labels_path, &problem)?;
    let dist_path = base.join(&manifest.distributions);
    let rows = read_probability_csv(&dist_path, &digits_domain, false)?;
    let per = problem.source_names().len();
    if rows.len() != labels.len() * per {
        return Err(IoError::Format {
            path: dist_path.display().to_string(),
            row: rows.len() + 1,
            column: 1,
            message: format!("expected {} rows ({} samples x {per} attributes)", labels.len() * per, labels.len()),
        });
    }
    let mut samples = Vec::with_capacity(labels.len());
    let mut it = rows.into_iter();
    for digits in &labels {
        let chunk: Vec<_> = it.by_ref().take(per).collect();
        samples.push(problem.sample(digits, chunk)?);
    }
    Ok((manifest, problem, samples))
}

fn read_labels(path: &Path, problem: &Problem) -> IoResult<Vec<Vec<usize>>> {
    let shown = path.display().to_string();
    let file = fs::File::open(path).map_err(|source| IoError::Io { path: shown.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let fmt =
        |row: usize, column: usize, message: String| IoError::Format { path: shown.clone(), row, column, message };
    let header: Vec<String> =
        reader.headers().map_err(|e| fmt(1, 1, e.to_string()))?.iter().map(str::to_string).collect();
    if header != problem.source_names() {
        return Err(fmt(1, 1, format!("header must be {}", problem.source_names().join(","))));
    }
    let mut out = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| fmt(r + 2, 1, e.to_string()))?;
        let mut digits = Vec::with_capacity(rec.len());
        for (c, cell) in rec.iter().enumerate() {
            let d: usize = cell
                .parse()
                .ok()
                .filter(|&d| d < problem.digit_count())
                .ok_or_else(|| fmt(r + 2, c + 1, format!("{cell:?} is not a digit label")))?;
            digits.push(d);
        }
        out.push(digits);
    }
    Ok(out)
}

/// Random digits (valid and corrupted grids for Sudoku) with synthetic
/// classifier rows, deterministic in the model seed.
pub fn synthetic_dataset(
    problem: &Problem,
    count: usize,
    model: &SyntheticNoiseModel,
) -> Result<Vec<(Vec<usize>, ProbSample)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    let domain = Arc::new(Domain::numbered(problem.digit_count())?);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let digits = match problem {
            Problem::Addition(s) => (0..2 * s.k).map(|_| rng.random_range(0..10)).collect(),
            Problem::Sudoku(s) => random_grid(s.side, &mut rng),
        };
        let rows = synthesize(&domain, &digits, model, &mut rng)?;
        let sample = problem.sample(&digits, rows)?;
        out.push((digits, sample));
    }
    Ok(out)
}

/// A shuffled valid grid, corrupted in one cell half of the time.
fn random_grid(side: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let b = if side == 4 { 2 } else { 3 };
    let mut perm: Vec<usize> = (0..side).collect();
    perm.shuffle(rng);
    let mut grid: Vec<usize> =
        (0..side).flat_map(|r| (0..side).map(move |c| (b * (r % b) + r / b + c) % side)).collect();
    for g in &mut grid {
        *g = perm[*g];
    }
    if rng.random_bool(0.5) {
        let cell = rng.random_range(0..side * side);
        let shift = rng.random_range(1..side);
        grid[cell] = (grid[cell] + shift) % side;
    }
    grid
}

/// Writes `distributions.csv`, `labels.csv` and `manifest.json` into `dir`.
pub fn write_dataset(
    dir: &Path,
    problem: &Problem,
    split: &str,
    data: &[(Vec<usize>, ProbSample)],
) -> IoResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| IoError::Io { path: dir.display().to_string(), source })?;
    let names = problem.source_names();
    let labels: Vec<String> = (0..problem.digit_count()).map(|d| d.to_string()).collect();
    let rows: Vec<Vec<f64>> =
        data.iter().flat_map(|(_, s)| names.iter().map(move |n| s.inputs[n].masses().to_vec())).collect();
    let dist_path = dir.join("distributions.csv");
    let file =
        fs::File::create(&dist_path).map_err(|source| IoError::Io { path: dist_path.display().to_string(), source })?;
    write_degree_csv(file, &labels, &rows, None)?;

    let labels_path = dir.join("labels.csv");
    let mut w = csv::Writer::from_path(&labels_path)
        .map_err(|e| IoError::Io { path: labels_path.display().to_string(), source: e.into() })?;
    let wrap = |e: csv::Error| IoError::Io { path: labels_path.display().to_string(), source: e.into() };
    w.write_record(&names).map_err(wrap)?;
    for (digits, _) in data {
        w.write_record(digits.iter().map(usize::to_string)).map_err(wrap)?;
    }
    w.flush().map_err(|source| IoError::Io { path: labels_path.display().to_string(), source })?;

    let (kind, k, side) = match problem {
        Problem::Addition(s) => (ProblemKind::Addition, Some(s.k), None),
        Problem::Sudoku(s) => (ProblemKind::Sudoku, None, Some(s.side)),
    };
    let manifest = Manifest {
        problem: kind,
        k,
        side,
        distributions: "distributions.csv".into(),
        labels: "labels.csv".into(),
        split: split.to_string(),
    };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest).expect("manifest serializes"))
        .map_err(|source| IoError::Io { path: path.display().to_string(), source })?;
    Ok(path)
}
