//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Each rotation annihilates one off-diagonal pair; sweeps visit pairs
//! `(p, q)` with `p < q` in row-major order, so the result is a pure
//! function of the input bits. Convergence is declared when the
//! off-diagonal Frobenius mass drops to `1e-14 · ‖M‖_F`.

use serde::Serialize;

use super::matrix::{norm_inf, SquareMatrix};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
pub const CONVERGENCE_RATIO: f64 = 1e-14;
/// Relative asymmetry accepted on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Eigenvalues closer than this are reported as one cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;
/// Magnitudes within this of the maximum count as tied when choosing the
/// sign-defining entry.
const SIGN_TIE: f64 = 1e-12;

/// Ascending eigenvalues with paired unit eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` pairs with `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `max_i ‖M·v_i − λ_i·v_i‖∞` against the input matrix.
    pub residual: f64,
    pub sweeps: usize,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvectors as columns.
    pub fn modal_matrix(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.order(), |i, j| self.eigenvectors[j][i])
    }

    /// True when eigenvalue `i` lies within [`DEGENERACY_GAP`] of a
    /// neighbouring eigenvalue. Vectors inside such a cluster are only
    /// defined up to rotation within the cluster.
    pub fn is_degenerate(&self, i: usize) -> bool {
        self.gap(i) < DEGENERACY_GAP
    }

    /// Distance from eigenvalue `i` to its nearest neighbour in the spectrum
    /// (infinite for a 1×1 matrix).
    pub fn gap(&self, i: usize) -> f64 {
        let ev = &self.eigenvalues;
        let below = if i > 0 {
            ev[i] - ev[i - 1]
        } else {
            f64::INFINITY
        };
        let above = if i + 1 < ev.len() {
            ev[i + 1] - ev[i]
        } else {
            f64::INFINITY
        };
        below.min(above)
    }

    /// `V·diag(λ)·Vᵀ`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let n = self.order();
        SquareMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.eigenvectors[k][i] * self.eigenvalues[k] * self.eigenvectors[k][j])
                .sum()
        })
    }
}

pub fn symmetric_eigendecomposition(m: &SquareMatrix) -> Result<SpectralDecomposition> {
    // SquareMatrix never stores non-finite values, but keep the check local
    // to the solver's contract.
    if let Some(k) = m.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: k / m.order(),
            col: k % m.order(),
        });
    }
    let tolerance = SYMMETRY_TOLERANCE * m.max_abs().max(1.0);
    let asymmetry = m.asymmetry();
    if asymmetry > tolerance {
        return Err(Error::NonSymmetric {
            asymmetry,
            tolerance,
        });
    }

    let n = m.order();
    let mut a = m.rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let threshold = CONVERGENCE_RATIO * m.frobenius_norm();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps the original index order for equal eigenvalues.
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[k][k]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i][k]).collect();
            normalize(&mut col);
            apply_sign_convention(&mut col);
            col
        })
        .collect();

    let residual = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&lambda, vec)| {
            let mv = m.mul_vec(vec);
            let diff: Vec<f64> = mv.iter().zip(vec).map(|(a, b)| a - lambda * b).collect();
            norm_inf(&diff)
        })
        .fold(0.0, f64::max);

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        residual,
        sweeps,
    })
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues(m: &SquareMatrix) -> Result<Vec<f64>> {
    symmetric_eigendecomposition(m).map(|d| d.eigenvalues)
}

fn off_diagonal_mass(a: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                sum += x * x;
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut [Vec<f64>], v: &mut [Vec<f64>], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta < 0.0 { -1.0 } else { 1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = a.len();
    // A ← A·J
    for row in a.iter_mut() {
        let (kp, kq) = (row[p], row[q]);
        row[p] = c * kp - s * kq;
        row[q] = s * kp + c * kq;
    }
    // A ← Jᵀ·A
    #[allow(clippy::needless_range_loop)]
    for k in 0..n {
        let (pk, qk) = (a[p][k], a[q][k]);
        a[p][k] = c * pk - s * qk;
        a[q][k] = s * pk + c * qk;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    // V ← V·J
    for row in v.iter_mut() {
        let (kp, kq) = (row[p], row[q]);
        row[p] = c * kp - s * kq;
        row[q] = s * kp + c * kq;
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Flips `v` so that its largest-magnitude entry is positive; among entries
/// tied in magnitude the lowest index decides.
pub fn apply_sign_convention(v: &mut [f64]) {
    let max = norm_inf(v);
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= max - SIGN_TIE * max)
        .expect("a maximal entry exists");
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
