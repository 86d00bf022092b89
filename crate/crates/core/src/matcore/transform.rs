use serde::Serialize;

use super::matrix::SquareMatrix;
use crate::error::{Error, Result};

/// Returns `p⁻¹`, or `NotBijection` if `perm` repeats or skips an index of
/// `0..perm.len()`.
pub fn inverse_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    let n = perm.len();
    let mut inverse = vec![usize::MAX; n];
    for (i, &p) in perm.iter().enumerate() {
        if p >= n || inverse[p] != usize::MAX {
            return Err(Error::NotBijection { order: n });
        }
        inverse[p] = i;
    }
    Ok(inverse)
}

/// Permutation matrix `J` with `J[i][perm[i]] = 1` (zero-based indices).
pub fn permutation_matrix(perm: &[usize]) -> Result<SquareMatrix> {
    inverse_permutation(perm)?;
    if perm.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(SquareMatrix::from_fn(perm.len(), |i, j| {
        if perm[i] == j {
            1.0
        } else {
            0.0
        }
    }))
}

/// Outcome of checking a candidate similarity transform `Q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationVerdict {
    /// `‖QᵀQ − I‖` (max entry).
    pub orthonormality_error: f64,
    /// `‖Q·1 − 1‖∞`.
    pub ones_error: f64,
    pub orthonormal: bool,
    pub fixes_ones: bool,
    pub is_permutation: bool,
    pub is_identity: bool,
}

impl ValidationVerdict {
    pub fn passes(&self) -> bool {
        self.orthonormal && self.fixes_ones
    }

    /// Reasons for failure, empty when the verdict passes.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.orthonormal {
            out.push(format!(
                "QᵀQ deviates from I by {:e}",
                self.orthonormality_error
            ));
        }
        if !self.fixes_ones {
            out.push(format!("row sums deviate from 1 by {:e}", self.ones_error));
        }
        out
    }
}

pub fn validate_iso_transform(q: &SquareMatrix, tol: f64) -> ValidationVerdict {
    let n = q.order();
    let qtq = &q.transpose() * q;
    let orthonormality_error = qtq.max_abs_diff(&SquareMatrix::identity(n));
    let ones_error = q
        .row_sums()
        .iter()
        .fold(0.0_f64, |m, s| m.max((s - 1.0).abs()));
    let is_permutation = permutation_of(q).is_some();
    let is_identity = q.exact_eq(&SquareMatrix::identity(n));
    ValidationVerdict {
        orthonormality_error,
        ones_error,
        orthonormal: orthonormality_error <= tol,
        fixes_ones: ones_error <= tol,
        is_permutation,
        is_identity,
    }
}

/// Recovers `perm` from an exact 0/1 permutation matrix.
pub fn permutation_of(q: &SquareMatrix) -> Option<Vec<usize>> {
    let n = q.order();
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let row = q.row(i);
        if row.iter().any(|&v| v != 0.0 && v != 1.0) {
            return None;
        }
        let ones: Vec<usize> = (0..n).filter(|&j| row[j] == 1.0).collect();
        if ones.len() != 1 {
            return None;
        }
        perm.push(ones[0]);
    }
    inverse_permutation(&perm).ok().map(|_| perm)
}

/// Rotation by `theta` in the plane spanned by `u = (e₁ − e₂)/√2` and
/// `w = (e₁ + e₂ − 2e₃)/√6`, both orthogonal to the all-ones vector, so the
/// result is orthonormal and satisfies `Q·1 = 1`.
///
/// Requires `n ≥ 3`: for `n = 2` the orthogonal complement of `1` is a line,
/// and the only orthonormal matrices fixing `1` are the identity and the
/// swap.
pub fn ones_axis_rotation(n: usize, theta: f64) -> Result<SquareMatrix> {
    if n < 3 {
        return Err(Error::OrderTooSmall {
            order: n,
            minimum: 3,
        });
    }
    let mut u = vec![0.0; n];
    let mut w = vec![0.0; n];
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let r6 = 1.0 / 6.0_f64.sqrt();
    u[0] = r2;
    u[1] = -r2;
    w[0] = r6;
    w[1] = r6;
    w[2] = -2.0 * r6;

    let (s, c) = theta.sin_cos();
    // Q = I + (c − 1)(uuᵀ + wwᵀ) + s(wuᵀ − uwᵀ)
    Ok(SquareMatrix::from_fn(n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id + (c - 1.0) * (u[i] * u[j] + w[i] * w[j]) + s * (w[i] * u[j] - u[i] * w[j])
    }))
}
