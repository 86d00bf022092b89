//! Iso-connectivity in dense graphs.
//!
//! The four-agent family
//!
//! ```text
//! L₄(α, β) = [ 2+α   −1    −1   −α      ]
//!            [ −1    2+β   −1   −β      ]
//!            [ −1    −1     3   −1      ]
//!            [ −α    −β    −1   1+α+β   ]
//! ```
//!
//! has characteristic polynomial
//! `λ(λ − 4)(λ² − (4 + 2α + 2β)λ + 3 + 5α + 5β + 3αβ)` and therefore the
//! spectrum `{0, 4, 2+α+β ± √D}` with
//! `D = 1 − α + α² − β − αβ + β² = ½[(α−β)² + (α−1)² + (β−1)²] ≥ 0`.
//! The eigenvectors for 0 and 4 are `1` and `(1, 1, −3, 1)` for every
//! parameter pair, so agent 4 can move along the family without changing
//! `λ₂` as long as `4` stays the second-smallest eigenvalue.
//!
//! That holds exactly when `2+α+β − √D ≥ 4`, i.e. `(α−1)(β−1) ≥ 0` with
//! `α + β ≥ 2`, which for positive parameters is the quadrant `α, β ≥ 1`.
//! The looser condition `2+α+β + √D > 4` is reported alongside by
//! [`l4_validity`]; it admits pairs where `λ₂ < 4`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{symmetric_eigenvalues, SquareMatrix};
use crate::spectral::EIGENVALUE_TOLERANCE;
use crate::topology::{build_laplacian, AgentConfiguration};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametricL4 {
    alpha: f64,
    beta: f64,
}

impl ParametricL4 {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(alpha) && ok(beta) {
            Ok(ParametricL4 { alpha, beta })
        } else {
            Err(Error::NonPositiveParameter { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `1 − α + α² − β − αβ + β²`, evaluated as a half sum of squares.
    pub fn discriminant(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        0.5 * ((a - b).powi(2) + (a - 1.0).powi(2) + (b - 1.0).powi(2))
    }
}

pub fn parametric_l4(p: ParametricL4) -> SquareMatrix {
    let (a, b) = (p.alpha, p.beta);
    SquareMatrix::from_rows(&[
        [2.0 + a, -1.0, -1.0, -a],
        [-1.0, 2.0 + b, -1.0, -b],
        [-1.0, -1.0, 3.0, -1.0],
        [-a, -b, -1.0, 1.0 + a + b],
    ])
    .expect("finite parameters give a finite matrix")
}

/// `{0, 4, 2+α+β ± √D}` sorted ascending.
pub fn l4_closed_form_spectrum(p: ParametricL4) -> Result<[f64; 4]> {
    let disc = p.discriminant();
    if disc.is_nan() || disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let mid = 2.0 + p.alpha + p.beta;
    let root = disc.sqrt();
    let mut spectrum = [0.0, 4.0, mid - root, mid + root];
    spectrum.sort_by(f64::total_cmp);
    Ok(spectrum)
}

/// `2+α+β + √D > 4`.
pub fn l4_inequality(p: ParametricL4) -> bool {
    2.0 + p.alpha + p.beta + p.discriminant().sqrt() > 4.0
}

/// `2+α+β − √D ≥ 4`: the smaller parametric root does not undercut 4.
/// Equivalent to `α ≥ 1 ∧ β ≥ 1` for positive parameters.
pub fn l4_exact_condition(p: ParametricL4) -> bool {
    (p.alpha - 1.0) * (p.beta - 1.0) >= 0.0 && p.alpha + p.beta >= 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L4Validity {
    pub alpha: f64,
    pub beta: f64,
    /// `2+α+β + √D > 4`.
    pub inequality: bool,
    /// `λ₂` of the constructed matrix from the eigensolver.
    pub numeric_lambda2: f64,
    /// `|numeric_lambda2 − 4| ≤ 1e-9`.
    pub numeric_is_four: bool,
    /// Inequality holds but the numeric check fails.
    pub discrepancy: bool,
    /// `2+α+β − √D ≥ 4`.
    pub exact_condition: bool,
}

impl L4Validity {
    /// The inequality and the numeric check give the same answer.
    pub fn agrees(&self) -> bool {
        self.inequality == self.numeric_is_four
    }
}

pub fn l4_validity(p: ParametricL4) -> L4Validity {
    let inequality = l4_inequality(p);
    let numeric_lambda2 = symmetric_eigenvalues(&parametric_l4(p))
        .expect("parametric family is symmetric and finite")[1];
    let numeric_is_four = (numeric_lambda2 - 4.0).abs() <= EIGENVALUE_TOLERANCE;
    L4Validity {
        alpha: p.alpha,
        beta: p.beta,
        inequality,
        numeric_lambda2,
        numeric_is_four,
        discrepancy: inequality && !numeric_is_four,
        exact_condition: l4_exact_condition(p),
    }
}

/// Rectangular sampling grid; samples are cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl ZoneGrid {
    fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if self.nx == 0
            || self.ny == 0
            || !finite
            || self.x_max <= self.x_min
            || self.y_max <= self.y_min
        {
            Err(Error::EmptyGrid)
        } else {
            Ok(())
        }
    }

    /// Cell centres in row-major order (`y` outer, `x` inner).
    pub fn centers(&self) -> Vec<[f64; 2]> {
        let dx = (self.x_max - self.x_min) / self.nx as f64;
        let dy = (self.y_max - self.y_min) / self.ny as f64;
        (0..self.ny)
            .flat_map(|j| {
                (0..self.nx).map(move |i| {
                    [
                        self.x_min + (i as f64 + 0.5) * dx,
                        self.y_min + (j as f64 + 0.5) * dy,
                    ]
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonePoint {
    pub x: f64,
    pub y: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneSample {
    pub target: f64,
    pub tol: f64,
    pub grid: ZoneGrid,
    pub accepted: Vec<ZonePoint>,
    /// Cells whose `λ₂` misses the target, plus cells that would put the
    /// mobile agent on top of another agent.
    pub rejected_count: usize,
}

/// Scans `grid` for positions of `mobile` whose `λ₂` is within `tol` of
/// `target` (default: the current `λ₂`). Cells are evaluated in parallel
/// and reported in scan order.
pub fn iso_connectivity_zone(
    config: &AgentConfiguration,
    mobile: usize,
    target: Option<f64>,
    grid: ZoneGrid,
    tol: f64,
) -> Result<ZoneSample> {
    grid.validate()?;
    config.check_index(mobile)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidConfiguration(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let target = match target {
        Some(t) => t,
        None => lambda2_of(config)?,
    };

    let centers = grid.centers();
    let outcomes: Vec<Option<ZonePoint>> = centers
        .par_iter()
        .map(|&p| {
            let moved = config.with_position(mobile, p).ok()?;
            let lambda2 = lambda2_of(&moved).ok()?;
            ((lambda2 - target).abs() <= tol).then_some(ZonePoint {
                x: p[0],
                y: p[1],
                lambda2,
            })
        })
        .collect();

    let accepted: Vec<ZonePoint> = outcomes.into_iter().flatten().collect();
    Ok(ZoneSample {
        target,
        tol,
        grid,
        rejected_count: centers.len() - accepted.len(),
        accepted,
    })
}

fn lambda2_of(config: &AgentConfiguration) -> Result<f64> {
    Ok(symmetric_eigenvalues(&build_laplacian(config)?)?[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mobility::mirror_moves;
    use crate::topology::Agent;

    #[test]
    fn printed_parameter_points() {
        let m = parametric_l4(ParametricL4::new(2.0, 3.0).unwrap());
        assert!(m.exact_eq(&fixtures::l4_prime()));
        let m = parametric_l4(ParametricL4::new(3.0, 4.0).unwrap());
        assert!(m.exact_eq(&fixtures::l4_double_prime()));
    }

    #[test]
    fn small_parameter_limit() {
        let m = parametric_l4(ParametricL4::new(1e-12, 1e-12).unwrap());
        let limit = SquareMatrix::from_rows(&[
            [2.0, -1.0, -1.0, 0.0],
            [-1.0, 2.0, -1.0, 0.0],
            [-1.0, -1.0, 3.0, -1.0],
            [0.0, 0.0, -1.0, 1.0],
        ])
        .unwrap();
        assert!(m.approx_eq(&limit, 1e-11));
    }

    #[test]
    fn rejects_non_positive_parameters() {
        for (a, b) in [
            (0.0, 1.0),
            (1.0, -2.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(matches!(
                ParametricL4::new(a, b),
                Err(Error::NonPositiveParameter { .. })
            ));
        }
    }

    #[test]
    fn discriminant_matches_printed_expression() {
        for (a, b) in [(2.0, 3.0), (3.0, 4.0), (0.1, 0.1), (1.0, 1.0), (0.3, 4.7)] {
            let p = ParametricL4::new(a, b).unwrap();
            let printed = 1.0 - a + a * a - b - a * b + b * b;
            assert!((p.discriminant() - printed).abs() < 1e-12);
        }
        assert_eq!(ParametricL4::new(1.0, 1.0).unwrap().discriminant(), 0.0);
    }

    #[test]
    fn closed_form_values() {
        let s = l4_closed_form_spectrum(ParametricL4::new(2.0, 3.0).unwrap()).unwrap();
        let r3 = 3.0_f64.sqrt();
        assert_eq!(s, [0.0, 4.0, 7.0 - r3, 7.0 + r3]);
        let s = l4_closed_form_spectrum(ParametricL4::new(3.0, 4.0).unwrap()).unwrap();
        let r7 = 7.0_f64.sqrt();
        assert_eq!(s, [0.0, 4.0, 9.0 - r7, 9.0 + r7]);
        // 2+α+β = 6 and D = 1; the quadratic factor is λ² − 12λ + 35.
        let s = l4_closed_form_spectrum(ParametricL4::new(2.0, 2.0).unwrap()).unwrap();
        assert_eq!(s, [0.0, 4.0, 5.0, 7.0]);
        // Below the exact region the smaller root drops under 4.
        let s = l4_closed_form_spectrum(ParametricL4::new(0.1, 0.1).unwrap()).unwrap();
        assert!((s[1] - 1.3).abs() < 1e-12);
    }

    #[test]
    fn validity_examples() {
        for (a, b) in [(2.0, 3.0), (3.0, 4.0)] {
            let v = l4_validity(ParametricL4::new(a, b).unwrap());
            assert!(v.inequality && v.numeric_is_four && v.exact_condition && v.agrees());
        }
        let v = l4_validity(ParametricL4::new(0.1, 0.1).unwrap());
        assert!(!v.inequality && !v.numeric_is_four && v.agrees());
        assert!((v.numeric_lambda2 - 1.3).abs() < 1e-9);
    }

    #[test]
    fn inequality_can_disagree() {
        // α < 1 < β: the inequality holds, yet λ₂ = 2+α+β − √D < 4.
        let v = l4_validity(ParametricL4::new(0.5, 1.5).unwrap());
        assert!(v.inequality && !v.numeric_is_four && v.discrepancy && !v.exact_condition);
        // α = β = 1: the spectrum is {0, 4, 4, 4}; λ₂ = 4 but 4 > 4 fails.
        let v = l4_validity(ParametricL4::new(1.0, 1.0).unwrap());
        assert!(!v.inequality && v.numeric_is_four && !v.agrees());
    }

    fn mirror_config() -> AgentConfiguration {
        AgentConfiguration::new(
            2.0,
            5.0,
            vec![
                Agent::new("n1", 0.0, 0.0),
                Agent::new("n2", 4.0, 0.0),
                Agent::new("far", 20.0, 20.0),
                Agent::new("m", 1.0, 2.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn zone_contains_original_and_mirror() {
        let config = mirror_config();
        // Cell centres at integer coordinates in [−3, 5] × [−3, 3].
        let grid = ZoneGrid {
            x_min: -3.5,
            x_max: 5.5,
            y_min: -3.5,
            y_max: 3.5,
            nx: 9,
            ny: 7,
        };
        let mirror = mirror_moves(&config, 3).unwrap().alternatives[0];
        let zone = iso_connectivity_zone(&config, 3, None, grid, 1e-9).unwrap();
        let has = |p: [f64; 2]| zone.accepted.iter().any(|z| z.x == p[0] && z.y == p[1]);
        assert!(has([1.0, 2.0]));
        assert!(has(mirror));
        assert_eq!(zone.accepted.len() + zone.rejected_count, 63);
        // Scan order is row-major.
        let keys: Vec<(f64, f64)> = zone.accepted.iter().map(|z| (z.y, z.x)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
    }

    #[test]
    fn isolated_mobile_zone() {
        let config = AgentConfiguration::new(
            1.0,
            1.0,
            vec![
                Agent::new("a", 0.0, 0.0),
                Agent::new("b", 0.5, 0.0),
                Agent::new("m", 10.0, 10.0),
            ],
        )
        .unwrap();
        let grid = ZoneGrid {
            x_min: 8.0,
            x_max: 12.0,
            y_min: 8.0,
            y_max: 12.0,
            nx: 5,
            ny: 5,
        };
        let zone = iso_connectivity_zone(&config, 2, None, grid, 1e-12).unwrap();
        assert_eq!(zone.target, 0.0);
        assert_eq!(zone.accepted.len(), 25);
        assert!(zone.accepted.iter().all(|z| z.lambda2.abs() < 1e-12));
    }

    #[test]
    fn empty_grid_is_rejected() {
        let grid = ZoneGrid {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            nx: 0,
            ny: 3,
        };
        assert_eq!(
            iso_connectivity_zone(&mirror_config(), 3, None, grid, 1e-9),
            Err(Error::EmptyGrid)
        );
    }
}
