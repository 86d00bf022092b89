//! A single mobile agent in an otherwise static network.
//!
//! Moving agent `m` only changes the links incident to `m`. Writing the
//! Laplacian with `m` last,
//!
//! ```text
//! L = [ L_{n−1} + diag(b)   −b ]
//!     [ −bᵀ                  γ ]
//! ```
//!
//! with `b_j = a_{jm}` and `γ = Σ b_j`, the block `L_{n−1}` (the Laplacian of
//! the other agents among themselves) is independent of `m`'s position.
//! For a simple `λ₂` with unit Fiedler vector `v`, `dλ₂ = vᵀ·dL·v`, so any
//! move with `dL = 0` keeps the algebraic connectivity unchanged.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{inverse_permutation, SquareMatrix};
use crate::spectral::{algebraic_connectivity, LAPLACIAN_TOLERANCE};
use crate::topology::{
    adjacency_weight_slope, build_laplacian, distance, require_structural_laplacian,
    AgentConfiguration,
};

/// `λ₃ − λ₂` below which a path integration step is refused.
pub const PATH_GAP_TOLERANCE: f64 = 1e-6;
/// Element-wise tolerance for accepting a relocated agent as leaving the
/// Laplacian unchanged.
pub const MOVE_TOLERANCE: f64 = 1e-12;
/// Number of evenly spaced circle samples considered for witness points.
pub const CIRCLE_SAMPLES: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockDecomposition {
    /// Original index of the segregated agent.
    pub agent: usize,
    /// Original indices in block order; the agent comes last.
    pub order: Vec<usize>,
    /// `L_{n−1}`: Laplacian of the remaining agents among themselves.
    pub reduced: SquareMatrix,
    /// `b`: link weights between each remaining agent and `agent`.
    pub coupling: Vec<f64>,
    /// `diag(b)`.
    pub coupling_diag: SquareMatrix,
    /// `γ = Σ b_j`.
    pub gamma: f64,
}

impl BlockDecomposition {
    /// The Laplacian in block order (segregated agent last).
    pub fn reassemble(&self) -> SquareMatrix {
        let k = self.reduced.order();
        SquareMatrix::from_fn(k + 1, |i, j| match (i < k, j < k) {
            (true, true) => self.reduced.get(i, j) + self.coupling_diag.get(i, j),
            (true, false) => -self.coupling[i],
            (false, true) => -self.coupling[j],
            (false, false) => self.gamma,
        })
    }

    /// The Laplacian in the original agent order.
    pub fn reassemble_original(&self) -> SquareMatrix {
        let blocked = self.reassemble();
        let position = inverse_permutation(&self.order).expect("order is a permutation");
        SquareMatrix::from_fn(blocked.order(), |i, j| {
            blocked.get(position[i], position[j])
        })
    }
}

pub fn block_decompose(l: &SquareMatrix, agent: usize) -> Result<BlockDecomposition> {
    let n = l.order();
    if agent >= n {
        return Err(Error::IndexOutOfRange {
            index: agent,
            order: n,
        });
    }
    if n < 2 {
        return Err(Error::NotLaplacian(
            "block decomposition needs at least 2 agents".into(),
        ));
    }
    require_structural_laplacian(l, LAPLACIAN_TOLERANCE)?;

    let order: Vec<usize> = (0..n).filter(|&i| i != agent).chain([agent]).collect();
    let others = &order[..n - 1];
    let coupling: Vec<f64> = others.iter().map(|&i| -l.get(i, agent)).collect();
    let gamma = l.get(agent, agent);

    let reduced = SquareMatrix::from_fn(n - 1, |i, j| {
        if i != j {
            l.get(others[i], others[j])
        } else {
            -others
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &o)| l.get(others[i], o))
                .sum::<f64>()
        }
    });
    let coupling_diag = SquareMatrix::from_diagonal(&coupling)?;

    Ok(BlockDecomposition {
        agent,
        order,
        reduced,
        coupling,
        coupling_diag,
        gamma,
    })
}

/// `(∂L/∂x, ∂L/∂y)` with respect to the position of `mobile`.
///
/// Each in-range link contributes `∂a/∂p = slope(d)·(p − p_j)/d`; links at
/// exactly `d = range` use the one-sided derivative from inside the range.
pub fn laplacian_gradient(config: &AgentConfiguration, mobile: usize) -> Result<[SquareMatrix; 2]> {
    config.check_index(mobile)?;
    let n = config.len();
    let p = config.agents[mobile].position();
    let mut gx = vec![0.0; n * n];
    let mut gy = vec![0.0; n * n];
    for j in (0..n).filter(|&j| j != mobile) {
        let q = config.agents[j].position();
        let d = distance(p, q);
        let slope = adjacency_weight_slope(d, config.sigma, config.range);
        if slope == 0.0 {
            continue;
        }
        let da = [slope * (p[0] - q[0]) / d, slope * (p[1] - q[1]) / d];
        for (g, dak) in [(&mut gx, da[0]), (&mut gy, da[1])] {
            g[mobile * n + j] -= dak;
            g[j * n + mobile] -= dak;
            g[mobile * n + mobile] += dak;
            g[j * n + j] += dak;
        }
    }
    Ok([SquareMatrix::new(n, gx)?, SquareMatrix::new(n, gy)?])
}

/// `vᵀ·dL·v` for the unit Fiedler vector `v` of `l`.
pub fn connectivity_differential(l: &SquareMatrix, dl: &SquareMatrix) -> Result<f64> {
    if l.order() != dl.order() {
        return Err(Error::OrderMismatch {
            left: l.order(),
            right: dl.order(),
        });
    }
    let tol = LAPLACIAN_TOLERANCE * dl.max_abs().max(1.0);
    if !dl.is_symmetric(tol) {
        return Err(Error::InvalidVariation("variation is not symmetric".into()));
    }
    if let Some(s) = dl.row_sums().into_iter().find(|s| s.abs() > tol) {
        return Err(Error::InvalidVariation(format!(
            "row sum {s:e} is not zero"
        )));
    }
    let report = algebraic_connectivity(l)?;
    report.require_simple()?;
    Ok(dl.quadratic_form(&report.fiedler))
}

/// `(∂λ₂/∂x, ∂λ₂/∂y)` for the position of `mobile`.
pub fn connectivity_gradient(config: &AgentConfiguration, mobile: usize) -> Result<[f64; 2]> {
    let l = build_laplacian(config)?;
    let [gx, gy] = laplacian_gradient(config, mobile)?;
    Ok([
        connectivity_differential(&l, &gx)?,
        connectivity_differential(&l, &gy)?,
    ])
}

/// Circle on which a mobile agent with exactly one neighbour may move.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    pub fn point_at(&self, angle: f64) -> [f64; 2] {
        let (s, c) = angle.sin_cos();
        [
            self.center[0] + self.radius * c,
            self.center[1] + self.radius * s,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// No neighbour in range: the agent may go anywhere out of everyone's
    /// range.
    Free,
    /// One neighbour: any point of the circle around it that stays out of
    /// range of the others.
    Circle,
    /// Neighbours on a common line: the mirror image across it.
    Reflection,
    /// Mobile agent lies on the neighbours' line; its mirror image is itself.
    Collinear,
    /// A candidate exists but would enter another agent's range or land on
    /// an agent.
    Blocked,
    /// Three or more non-collinear neighbours pin the agent in place.
    Rigid,
}

/// Positions of `mobile` that leave every link weight unchanged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveSolution {
    pub mobile: usize,
    pub original: [f64; 2],
    pub kind: MoveKind,
    pub alternatives: Vec<[f64; 2]>,
    pub preserved_neighbors: Vec<usize>,
    /// Set for [`MoveKind::Circle`]; `alternatives` then holds sampled
    /// witness points on it.
    pub circle: Option<Circle>,
}

pub fn mirror_moves(config: &AgentConfiguration, mobile: usize) -> Result<MoveSolution> {
    config.check_index(mobile)?;
    let original = config.agents[mobile].position();
    let neighbors = config.neighbors(mobile);
    let scale = config.range.max(1.0);

    let mut solution = MoveSolution {
        mobile,
        original,
        kind: MoveKind::Free,
        alternatives: Vec::new(),
        preserved_neighbors: neighbors.clone(),
        circle: None,
    };

    let candidates: Vec<[f64; 2]> = match neighbors.as_slice() {
        [] => return Ok(solution),
        &[only] => {
            let center = config.agents[only].position();
            let circle = Circle {
                center,
                radius: distance(center, original),
            };
            let start = (original[1] - center[1]).atan2(original[0] - center[0]);
            let step = std::f64::consts::TAU / CIRCLE_SAMPLES as f64;
            solution.kind = MoveKind::Circle;
            solution.circle = Some(circle.clone());
            (1..CIRCLE_SAMPLES)
                .map(|k| circle.point_at(start + step * k as f64))
                .collect()
        }
        _ => {
            let a = config.agents[neighbors[0]].position();
            let b = neighbors
                .iter()
                .map(|&j| config.agents[j].position())
                .max_by(|p, q| distance(a, *p).total_cmp(&distance(a, *q)))
                .expect("at least two neighbours");
            let dir = [b[0] - a[0], b[1] - a[1]];
            let len = dir[0].hypot(dir[1]);
            let off_line =
                |p: [f64; 2]| (dir[0] * (p[1] - a[1]) - dir[1] * (p[0] - a[0])).abs() / len;
            let collinear = neighbors
                .iter()
                .all(|&j| off_line(config.agents[j].position()) <= MOVE_TOLERANCE * scale);
            if !collinear {
                solution.kind = MoveKind::Rigid;
                return Ok(solution);
            }
            let mirror = reflect(original, a, b);
            if distance(mirror, original) <= MOVE_TOLERANCE * scale {
                solution.kind = MoveKind::Collinear;
                return Ok(solution);
            }
            solution.kind = MoveKind::Reflection;
            vec![mirror]
        }
    };

    let base = build_laplacian(config)?;
    solution.alternatives = candidates
        .into_iter()
        .filter(|&p| preserves_laplacian(config, mobile, p, &base))
        .collect();
    if solution.alternatives.is_empty() {
        solution.kind = MoveKind::Blocked;
    }
    Ok(solution)
}

/// Mirror image of `p` across the line through `a` and `b`.
pub fn reflect(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let d = [b[0] - a[0], b[1] - a[1]];
    let t = ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]);
    let foot = [a[0] + t * d[0], a[1] + t * d[1]];
    [2.0 * foot[0] - p[0], 2.0 * foot[1] - p[1]]
}

fn preserves_laplacian(
    config: &AgentConfiguration,
    mobile: usize,
    position: [f64; 2],
    base: &SquareMatrix,
) -> bool {
    config
        .with_position(mobile, position)
        .and_then(|moved| build_laplacian(&moved))
        .is_ok_and(|l| l.approx_eq(base, MOVE_TOLERANCE))
}

/// A link of the mobile agent switching between in-range and out-of-range
/// during one integration step; the weight model is discontinuous there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeCrossing {
    pub step: usize,
    pub agent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathIntegral {
    /// Midpoint-rule quadrature of `dλ₂` along the path.
    pub integral: f64,
    /// `λ₂(end) − λ₂(start)` from direct eigendecomposition.
    pub direct: f64,
    pub lambda2_start: f64,
    pub lambda2_end: f64,
    pub steps: usize,
    pub range_crossings: Vec<RangeCrossing>,
}

impl PathIntegral {
    /// The quadrature assumes continuous link weights along the path.
    pub fn is_reliable(&self) -> bool {
        self.range_crossings.is_empty()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.range_crossings
            .iter()
            .map(|c| {
                format!(
                    "RangeCrossing: link to agent {} crosses the range boundary in step {}",
                    c.agent, c.step
                )
            })
            .collect()
    }
}

/// Integrates `dλ₂ = vᵀ·(∂L/∂p · dp)·v` along the polyline from the mobile
/// agent's current position through `waypoints`.
///
/// `steps` midpoint steps are shared between segments in proportion to
/// their length (at least one each). The Fiedler vector is recomputed at
/// every midpoint; a gap `λ₃ − λ₂` (or `λ₂ − λ₁`) below
/// [`PATH_GAP_TOLERANCE`] aborts with `DegenerateFiedler`.
pub fn integrate_connectivity_change(
    config: &AgentConfiguration,
    mobile: usize,
    waypoints: &[[f64; 2]],
    steps: usize,
) -> Result<PathIntegral> {
    config.check_index(mobile)?;
    if steps == 0 {
        return Err(Error::InvalidConfiguration(
            "steps must be at least 1".into(),
        ));
    }
    let start = config.agents[mobile].position();
    let mut points = vec![start];
    points.extend_from_slice(waypoints);
    if let Some(bad) = points
        .iter()
        .find(|p| !(p[0].is_finite() && p[1].is_finite()))
    {
        return Err(Error::InvalidConfiguration(format!(
            "non-finite waypoint {bad:?}"
        )));
    }

    let lambda2_start = algebraic_connectivity(&build_laplacian(config)?)?.lambda2;
    let end_config = config.with_position(mobile, *points.last().expect("non-empty"))?;
    let lambda2_end = algebraic_connectivity(&build_laplacian(&end_config)?)?.lambda2;

    let lengths: Vec<f64> = points.windows(2).map(|w| distance(w[0], w[1])).collect();
    let total: f64 = lengths.iter().sum();
    let mut result = PathIntegral {
        integral: 0.0,
        direct: lambda2_end - lambda2_start,
        lambda2_start,
        lambda2_end,
        steps: 0,
        range_crossings: Vec::new(),
    };
    if total == 0.0 {
        return Ok(result);
    }

    let mut step_index = 0;
    for (segment, &len) in points.windows(2).zip(&lengths) {
        if len == 0.0 {
            continue;
        }
        let k = ((steps as f64 * len / total).round() as usize).max(1);
        let [p, q] = [segment[0], segment[1]];
        let delta = [(q[0] - p[0]) / k as f64, (q[1] - p[1]) / k as f64];
        for s in 0..k {
            let at = |t: f64| [p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t];
            let from = at(s as f64 / k as f64);
            let to = at((s + 1) as f64 / k as f64);
            let mid = at((s as f64 + 0.5) / k as f64);

            for j in (0..config.len()).filter(|&j| j != mobile) {
                let other = config.agents[j].position();
                let inside_from = distance(from, other) <= config.range;
                let inside_to = distance(to, other) <= config.range;
                if inside_from != inside_to {
                    result.range_crossings.push(RangeCrossing {
                        step: step_index,
                        agent: j,
                    });
                }
            }

            let moved = config.with_position(mobile, mid)?;
            let report = algebraic_connectivity(&build_laplacian(&moved)?)?;
            if report.gap() < PATH_GAP_TOLERANCE {
                return Err(Error::DegenerateFiedler { gap: report.gap() });
            }
            let [gx, gy] = laplacian_gradient(&moved, mobile)?;
            result.integral += delta[0] * gx.quadratic_form(&report.fiedler)
                + delta[1] * gy.quadratic_form(&report.fiedler);
            step_index += 1;
        }
    }
    result.steps = step_index;
    Ok(result)
}
