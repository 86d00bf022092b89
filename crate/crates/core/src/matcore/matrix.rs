use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real square matrix stored row-major.
///
/// Entries are always finite; every constructor checks this. Values are
/// immutable once built; arithmetic returns new matrices.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct SquareMatrix {
    order: usize,
    data: Vec<f64>,
}

/// Wire form: `{"order": n, "rows": [[...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub order: usize,
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for SquareMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.rows.len() != json.order {
            return Err(Error::ShapeMismatch {
                expected: json.order * json.order,
                actual: json.rows.iter().map(Vec::len).sum(),
            });
        }
        SquareMatrix::from_rows(&json.rows)
    }
}

impl From<SquareMatrix> for MatrixJson {
    fn from(m: SquareMatrix) -> Self {
        MatrixJson {
            order: m.order,
            rows: m.rows(),
        }
    }
}

impl SquareMatrix {
    pub fn new(order: usize, data: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != order * order {
            return Err(Error::ShapeMismatch {
                expected: order * order,
                actual: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: k / order,
                col: k % order,
            });
        }
        Ok(SquareMatrix { order, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let order = rows.len();
        let mut data = Vec::with_capacity(order * order);
        for row in rows {
            let row = row.as_ref();
            if row.len() != order {
                return Err(Error::ShapeMismatch {
                    expected: order * order,
                    actual: rows.iter().map(|r| r.as_ref().len()).sum(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(order, data)
    }

    /// Builds a matrix from an entry function. Panics if `f` yields a
    /// non-finite value, so callers must only pass total functions.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        let mut data = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let v = f(i, j);
                assert!(v.is_finite(), "non-finite entry at ({i}, {j})");
                data.push(v);
            }
        }
        SquareMatrix { order, data }
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_, _| 0.0)
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self::new(n, data)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.order + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.order).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order, "vector length must match matrix order");
        self.data
            .chunks(self.order)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `vᵀ·M·v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.mul_vec(v))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data
            .chunks(self.order)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_fn(self.order, |i, j| self.get(i, j) * factor)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest `|m_ij − m_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.order;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.asymmetry() <= tol
    }

    /// Element-wise equality within `tol`. Matrices of different order are
    /// never equal.
    pub fn approx_eq(&self, other: &SquareMatrix, tol: f64) -> bool {
        self.order == other.order && self.max_abs_diff(other) <= tol
    }

    /// Exact element-wise equality (`-0.0 == 0.0`).
    pub fn exact_eq(&self, other: &SquareMatrix) -> bool {
        self.order == other.order && self.data.iter().zip(&other.data).all(|(a, b)| a == b)
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        assert_eq!(self.order, other.order, "matrix orders must match");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `Pᵀ·self·P` for the permutation matrix with `P[i][perm[i]] = 1`,
    /// computed by reindexing so the result is exact.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> Result<Self> {
        let inverse = super::inverse_permutation(perm)?;
        if perm.len() != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: perm.len(),
            });
        }
        Ok(Self::from_fn(self.order, |i, j| {
            self.get(inverse[i], inverse[j])
        }))
    }

    /// Bit patterns of the entries with signed zeros folded, usable as an
    /// exact-equality hash key.
    pub fn exact_key(&self) -> Vec<u64> {
        self.data
            .iter()
            .map(|&v| {
                if v == 0.0 {
                    0.0_f64.to_bits()
                } else {
                    v.to_bits()
                }
            })
            .collect()
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

impl<'a> Add for &'a SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: &'a SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders must match");
        SquareMatrix::from_fn(self.order, |i, j| self.get(i, j) + rhs.get(i, j))
    }
}

impl<'a> Sub for &'a SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: &'a SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders must match");
        SquareMatrix::from_fn(self.order, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

impl<'a> Mul for &'a SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: &'a SquareMatrix) -> SquareMatrix {
        assert_eq!(self.order, rhs.order, "matrix orders must match");
        let n = self.order;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        SquareMatrix { order: n, data }
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{}) [", self.order, self.order)?;
        for row in self.data.chunks(self.order) {
            write!(f, "  ")?;
            for v in row {
                write!(f, "{v:>10.4} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}
