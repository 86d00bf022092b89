//! Algebraic connectivity, Fiedler vectors and spectrum comparisons.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{norm_inf, symmetric_eigendecomposition, SquareMatrix, DEGENERACY_GAP};
use crate::topology::require_structural_laplacian;

/// Absolute tolerance for eigenvalue comparisons.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;
/// Tolerance for eigen-residuals such as `‖ΔL·v_F‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Structural tolerance (relative to the largest entry) for accepting a
/// matrix as a Laplacian.
pub const LAPLACIAN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub lambda2: f64,
    /// Unit eigenvector paired with `lambda2`, largest-magnitude entry
    /// positive.
    pub fiedler: Vec<f64>,
    /// `lambda2` lies within `1e-9` of `λ₁` or `λ₃`, so `fiedler` is one
    /// deterministic pick from a multi-dimensional eigenspace.
    pub degenerate: bool,
    pub spectrum: Vec<f64>,
}

impl ConnectivityReport {
    /// `min(λ₂ − λ₁, λ₃ − λ₂)`.
    pub fn gap(&self) -> f64 {
        let s = &self.spectrum;
        let above = s.get(2).map_or(f64::INFINITY, |l3| l3 - s[1]);
        (s[1] - s[0]).min(above)
    }

    pub fn require_simple(&self) -> Result<()> {
        if self.degenerate {
            Err(Error::DegenerateFiedler { gap: self.gap() })
        } else {
            Ok(())
        }
    }
}

pub fn algebraic_connectivity(l: &SquareMatrix) -> Result<ConnectivityReport> {
    require_structural_laplacian(l, LAPLACIAN_TOLERANCE)?;
    if l.order() < 2 {
        return Err(Error::NotLaplacian(
            "algebraic connectivity needs at least 2 agents".into(),
        ));
    }
    let decomposition = symmetric_eigendecomposition(l)?;
    let degenerate = decomposition.gap(1) < DEGENERACY_GAP;
    Ok(ConnectivityReport {
        lambda2: decomposition.eigenvalues[1],
        fiedler: decomposition.eigenvectors[1].clone(),
        degenerate,
        spectrum: decomposition.eigenvalues,
    })
}

pub fn is_isospectral(a: &SquareMatrix, b: &SquareMatrix, tol: f64) -> Result<bool> {
    Ok(spectral_distance(a, b)? <= tol)
}

/// Largest element-wise difference between the sorted spectra.
pub fn spectral_distance(a: &SquareMatrix, b: &SquareMatrix) -> Result<f64> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let ea = symmetric_eigendecomposition(a)?.eigenvalues;
    let eb = symmetric_eigendecomposition(b)?.eigenvalues;
    Ok(ea
        .iter()
        .zip(&eb)
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())))
}

/// Result of testing whether the Fiedler vector of one Laplacian lies in
/// the null space of the difference to another.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullSpaceCheck {
    /// `residual ≤ tol`.
    pub holds: bool,
    /// `‖(L_b − L_a)·v_F‖∞` with `v_F` the unit Fiedler vector of `L_a`.
    pub residual: f64,
    pub lambda2_a: f64,
    pub lambda2_b: f64,
    /// `|λ₂(L_a) − λ₂(L_b)| ≤ tol`.
    pub lambda2_agree: bool,
    pub fiedler: Vec<f64>,
}

pub fn fiedler_null_space_check(
    a: &SquareMatrix,
    b: &SquareMatrix,
    tol: f64,
) -> Result<NullSpaceCheck> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let report_a = algebraic_connectivity(a)?;
    let report_b = algebraic_connectivity(b)?;
    report_a.require_simple()?;
    report_b.require_simple()?;

    let delta = b - a;
    let residual = norm_inf(&delta.mul_vec(&report_a.fiedler));
    Ok(NullSpaceCheck {
        holds: residual <= tol,
        residual,
        lambda2_a: report_a.lambda2,
        lambda2_b: report_b.lambda2,
        lambda2_agree: (report_a.lambda2 - report_b.lambda2).abs() <= tol,
        fiedler: report_a.fiedler,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn normalized(v: &[f64]) -> Vec<f64> {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter().map(|x| x / n).collect()
    }

    #[test]
    fn dense_family_report() {
        let r = algebraic_connectivity(&fixtures::l4_prime()).unwrap();
        assert!((r.lambda2 - 4.0).abs() < 1e-12);
        assert!(!r.degenerate);
        let expected = normalized(&fixtures::DENSE_FIEDLER_DIRECTION);
        for (a, b) in r.fiedler.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(r.fiedler[2] > 0.0);
    }

    #[test]
    fn base_laplacian_report() {
        let r = algebraic_connectivity(&fixtures::l1()).unwrap();
        for (got, want) in r.spectrum.iter().zip([0.0, 2.0, 4.0, 4.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(!r.degenerate);
        // e₂ − e₄ direction, sign fixed by the lowest-index tie rule.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.fiedler[1] - h).abs() < 1e-12 && (r.fiedler[3] + h).abs() < 1e-12);
    }

    #[test]
    fn two_node_closed_form() {
        let w = 0.37;
        let l = SquareMatrix::from_rows(&[[w, -w], [-w, w]]).unwrap();
        let r = algebraic_connectivity(&l).unwrap();
        assert!((r.lambda2 - 2.0 * w).abs() < 1e-15);
        assert!(r.spectrum[0].abs() < 1e-15);
    }

    #[test]
    fn rejects_non_laplacians() {
        let m = SquareMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(
            algebraic_connectivity(&m),
            Err(Error::NotLaplacian(_))
        ));
        assert!(matches!(
            algebraic_connectivity(&SquareMatrix::zeros(1)),
            Err(Error::NotLaplacian(_))
        ));
    }

    #[test]
    fn degenerate_when_disconnected_or_symmetric() {
        let r = algebraic_connectivity(&fixtures::complete(4)).unwrap();
        assert!(r.degenerate);
        assert!(matches!(
            r.require_simple(),
            Err(Error::DegenerateFiedler { .. })
        ));
        let r = algebraic_connectivity(&SquareMatrix::zeros(3)).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn isospectral_pairs() {
        assert!(is_isospectral(&fixtures::l1(), &fixtures::l2(), 1e-9).unwrap());
        assert!(is_isospectral(&fixtures::l1(), &fixtures::l1(), 0.0).unwrap());
        assert!(!is_isospectral(&fixtures::l1(), &fixtures::path(4), 1e-9).unwrap());
        assert!(matches!(
            is_isospectral(&fixtures::l1(), &fixtures::path(3), 1e-9),
            Err(Error::OrderMismatch { left: 4, right: 3 })
        ));
    }

    #[test]
    fn null_space_condition() {
        let c = fiedler_null_space_check(&fixtures::l4_prime(), &fixtures::l4_double_prime(), 1e-9)
            .unwrap();
        assert!(c.holds && c.lambda2_agree);
        assert!(c.residual <= 1e-9);

        let same =
            fiedler_null_space_check(&fixtures::l4_prime(), &fixtures::l4_prime(), 1e-9).unwrap();
        assert_eq!(same.residual, 0.0);

        assert!(matches!(
            fiedler_null_space_check(&fixtures::l1(), &fixtures::complete(4), 1e-9),
            Err(Error::DegenerateFiedler { .. })
        ));
    }

    #[test]
    fn broken_null_space_condition() {
        // Weaken the 3–4 link by ε. ΔL·v_F picks up ±ε·(v₃ − v₄) = ±4ε/√12
        // in rows 3 and 4, so the check must fail.
        let eps = 1e-3;
        let mut rows = fixtures::l4_prime().rows();
        rows[2][3] += eps;
        rows[3][2] += eps;
        rows[2][2] -= eps;
        rows[3][3] -= eps;
        let perturbed = SquareMatrix::from_rows(&rows).unwrap();
        let c = fiedler_null_space_check(&fixtures::l4_prime(), &perturbed, 1e-9).unwrap();
        assert!(!c.holds);
        let expected = 4.0 * eps / 12.0_f64.sqrt();
        assert!((c.residual - expected).abs() < 1e-12);
    }
}
