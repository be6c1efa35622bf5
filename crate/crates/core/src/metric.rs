//! Dense finite metrics.

use crate::error::{Error, Result};

/// Dense symmetric distance matrix on `size` points.
///
/// Graph metrics store small integers, which `f64` represents exactly, so
/// comparisons between graph-derived metrics are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    size: usize,
    data: Vec<f64>,
}

impl MetricMatrix {
    pub fn zeros(size: usize) -> Self {
        MetricMatrix {
            size,
            data: vec![0.0; size * size],
        }
    }

    /// Builds a matrix from `f(i, j)` without validating metric axioms.
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        MetricMatrix { size, data }
    }

    /// Builds a matrix from rows and checks shape, zero diagonal, symmetry
    /// and nonnegativity. The triangle inequality is checked separately by
    /// [`MetricMatrix::check_axioms`].
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        let m = MetricMatrix { size, data };
        for i in 0..size {
            if m.get(i, i) != 0.0 {
                return Err(Error::InvalidMetric(format!("nonzero diagonal at {i}")));
            }
            for j in 0..size {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidMetric(format!("entry ({i}, {j}) = {v}")));
                }
                if v != m.get(j, i) {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.size + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.size.max(1)).take(self.size)
    }

    pub fn diameter(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Largest distance from point `p`.
    pub fn eccentricity(&self, p: usize) -> f64 {
        self.row(p).iter().copied().fold(0.0, f64::max)
    }

    /// Subspace metric on the listed points, in the listed order.
    pub fn restrict(&self, points: &[usize]) -> MetricMatrix {
        MetricMatrix::from_fn(points.len(), |i, j| self.get(points[i], points[j]))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> MetricMatrix {
        MetricMatrix {
            size: self.size,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Unordered pairs `i < j` with their distance.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.size).flat_map(move |i| (i + 1..self.size).map(move |j| (i, j, self.get(i, j))))
    }

    /// Exhaustive check of the metric axioms, allowing `tol` slack in the
    /// triangle inequality. Returns a description of the first violation.
    pub fn check_axioms(&self, tol: f64) -> std::result::Result<(), String> {
        let n = self.size;
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                return Err(format!("d({i},{i}) = {}", self.get(i, i)));
            }
            for j in 0..n {
                let v = self.get(i, j);
                if !(v >= 0.0) {
                    return Err(format!("d({i},{j}) = {v}"));
                }
                if v != self.get(j, i) {
                    return Err(format!("d({i},{j}) != d({j},{i})"));
                }
            }
        }
        for y in 0..n {
            let ry = self.row(y);
            for x in 0..n {
                let dxy = self.get(x, y);
                let rx = self.row(x);
                for z in 0..n {
                    if rx[z] > dxy + ry[z] + tol {
                        return Err(format!("triangle fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        Ok(())
    }
}
