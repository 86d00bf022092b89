//! Dense matrix values, the symmetric eigensolver and similarity-transform
//! helpers.

mod eigen;
mod matrix;
mod transform;

pub use eigen::{
    apply_sign_convention, symmetric_eigendecomposition, symmetric_eigenvalues,
    SpectralDecomposition, CONVERGENCE_RATIO, DEGENERACY_GAP, MAX_SWEEPS, SYMMETRY_TOLERANCE,
};
pub use matrix::{dot, norm_inf, MatrixJson, SquareMatrix};
pub use transform::{
    inverse_permutation, ones_axis_rotation, permutation_matrix, permutation_of,
    validate_iso_transform, ValidationVerdict,
};
