//! Reference matrices: the four-agent relabeling example, the dense
//! four-agent family at two parameter points and its printed modal matrices.

use crate::matcore::SquareMatrix;

fn m4(rows: [[f64; 4]; 4]) -> SquareMatrix {
    SquareMatrix::from_rows(&rows).expect("fixture is a valid 4x4 matrix")
}

/// Base Laplacian: complete graph on four agents minus the edge 2–4.
pub fn l1() -> SquareMatrix {
    m4([
        [3.0, -1.0, -1.0, -1.0],
        [-1.0, 2.0, -1.0, 0.0],
        [-1.0, -1.0, 3.0, -1.0],
        [-1.0, 0.0, -1.0, 2.0],
    ])
}

/// Reversal permutation matrix.
pub fn j1() -> SquareMatrix {
    m4([
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ])
}

/// `J₁ᵀ·L₁·J₁`.
pub fn l2() -> SquareMatrix {
    m4([
        [2.0, -1.0, 0.0, -1.0],
        [-1.0, 3.0, -1.0, -1.0],
        [0.0, -1.0, 2.0, -1.0],
        [-1.0, -1.0, -1.0, 3.0],
    ])
}

/// Swap of agents 2 and 3.
pub fn j2() -> SquareMatrix {
    m4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// `J₂ᵀ·L₁·J₂`.
pub fn l3() -> SquareMatrix {
    m4([
        [3.0, -1.0, -1.0, -1.0],
        [-1.0, 3.0, -1.0, -1.0],
        [-1.0, -1.0, 2.0, 0.0],
        [-1.0, -1.0, 0.0, 2.0],
    ])
}

/// Dense family at `α = 2, β = 3`.
pub fn l4_prime() -> SquareMatrix {
    m4([
        [4.0, -1.0, -1.0, -2.0],
        [-1.0, 5.0, -1.0, -3.0],
        [-1.0, -1.0, 3.0, -1.0],
        [-2.0, -3.0, -1.0, 6.0],
    ])
}

/// Dense family at `α = 3, β = 4`.
pub fn l4_double_prime() -> SquareMatrix {
    m4([
        [5.0, -1.0, -1.0, -3.0],
        [-1.0, 6.0, -1.0, -4.0],
        [-1.0, -1.0, 3.0, -1.0],
        [-3.0, -4.0, -1.0, 8.0],
    ])
}

/// Printed eigenvalues of [`l4_prime`] (4 decimals).
pub const L4_PRIME_SPECTRUM: [f64; 4] = [0.0, 4.0, 5.2679, 8.7321];
/// Printed eigenvalues of [`l4_double_prime`] (4 decimals).
pub const L4_DOUBLE_PRIME_SPECTRUM: [f64; 4] = [0.0, 4.0, 6.3542, 11.6458];

/// Printed modal matrix of [`l4_prime`], eigenvectors as columns.
pub fn m4_prime() -> SquareMatrix {
    m4([
        [0.5000, -0.2887, 0.7887, -0.2113],
        [0.5000, -0.2887, -0.5774, -0.5774],
        [0.5000, 0.8660, 0.0000, 0.0000],
        [0.5000, -0.2887, -0.2113, 0.7887],
    ])
}

/// Printed modal matrix of [`l4_double_prime`].
pub fn m4_double_prime() -> SquareMatrix {
    m4([
        [0.5000, -0.2887, 0.7651, -0.2852],
        [0.5000, -0.2887, -0.6295, -0.5199],
        [0.5000, 0.8660, 0.0000, 0.0000],
        [0.5000, -0.2887, -0.1355, 0.8052],
    ])
}

/// Common Fiedler direction of the dense family (unnormalized).
pub const DENSE_FIEDLER_DIRECTION: [f64; 4] = [-1.0, -1.0, 3.0, -1.0];

/// Unit-weight complete graph Laplacian.
pub fn complete(n: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |i, j| if i == j { (n - 1) as f64 } else { -1.0 })
}

/// Unit-weight path `0 – 1 – … – n−1`.
pub fn path(n: usize) -> SquareMatrix {
    SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            let ends = usize::from(i == 0) + usize::from(i + 1 == n);
            (2 - ends.min(2)) as f64
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    })
}
