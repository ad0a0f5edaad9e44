use super::Degree;
use crate::error::{Error, Result};

/// The ε-product: `y` when `x < y`, otherwise 0.
#[inline]
pub fn eps(x: Degree, y: Degree) -> Degree {
    if x < y {
        y
    } else {
        0.0
    }
}

/// Dense row-major matrix of degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Degree>,
}

impl DegreeMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Degree>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch { expected: rows * cols, found: data.len() });
        }
        for (index, &value) in data.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::DegreeOutOfRange { index, value });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Degree>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub(crate) fn filled(rows: usize, cols: usize, value: Degree) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Degree {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Degree) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Degree] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Degree>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::filled(self.cols, self.rows, 0.0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Appends the rows of `other` below those of `self`.
    pub fn vstack(&mut self, other: &DegreeMatrix) -> Result<()> {
        if self.rows == 0 && self.cols == 0 {
            self.cols = other.cols;
        }
        if other.cols != self.cols {
            return Err(Error::ShapeMismatch { expected: self.cols, found: other.cols });
        }
        self.data.extend_from_slice(&other.data);
        self.rows += other.rows;
        Ok(())
    }

    /// `self □ x` with `out_i = min_j max(a_ij, x_j)`.
    pub fn minmax(&self, x: &[Degree]) -> Result<Vec<Degree>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a.max(b)).fold(1.0, f64::min)).collect())
    }

    /// `selfᵗ □_ε y` computed without materializing the transpose:
    /// `out_l = max_i (a_il ε y_i)`.
    pub fn maxeps_transposed(&self, y: &[Degree]) -> Result<Vec<Degree>> {
        if y.len() != self.rows {
            return Err(Error::ShapeMismatch { expected: self.rows, found: y.len() });
        }
        let mut out = vec![0.0f64; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = (*o).max(eps(a, yi));
            }
        }
        Ok(out)
    }
}

/// `A □ x` (min-max composition).
pub fn minmax_product(a: &DegreeMatrix, x: &[Degree]) -> Result<Vec<Degree>> {
    a.minmax(x)
}

/// `At □_ε y` where `at` is already the transposed matrix:
/// `out_l = max_i (at_li ε y_i)`.
pub fn maxeps_product(at: &DegreeMatrix, y: &[Degree]) -> Result<Vec<Degree>> {
    if y.len() != at.cols() {
        return Err(Error::ShapeMismatch { expected: at.cols(), found: y.len() });
    }
    Ok((0..at.rows()).map(|l| at.row(l).iter().zip(y).map(|(&a, &b)| eps(a, b)).fold(0.0, f64::max)).collect())
}

/// L∞ distance between two vectors of equal length.
pub fn linf(a: &[Degree], b: &[Degree]) -> Degree {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
