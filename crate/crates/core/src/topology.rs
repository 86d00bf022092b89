//! Distance-weighted communication graphs.
//!
//! Two agents at distance `d` share a link of weight `exp(−(σ/R)·d)` when
//! `d ≤ R` and no link otherwise. The model therefore jumps from `e^{−σ}` to
//! zero at `d = R`; this discontinuity is part of the model and is not
//! smoothed.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{symmetric_eigenvalues, SquareMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

impl Agent {
    pub fn new(id: impl Into<String>, x: f64, y: f64) -> Self {
        Agent {
            id: id.into(),
            x,
            y,
        }
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn distance_to(&self, other: &Agent) -> f64 {
        distance([self.x, self.y], [other.x, other.y])
    }
}

/// Planar agent positions with the shared decay rate `sigma` and range.
/// Agent order fixes the row order of every derived matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationJson")]
pub struct AgentConfiguration {
    pub sigma: f64,
    pub range: f64,
    pub agents: Vec<Agent>,
}

#[derive(Deserialize)]
struct ConfigurationJson {
    sigma: f64,
    range: f64,
    agents: Vec<Agent>,
}

impl TryFrom<ConfigurationJson> for AgentConfiguration {
    type Error = Error;

    fn try_from(raw: ConfigurationJson) -> Result<Self> {
        AgentConfiguration::new(raw.sigma, raw.range, raw.agents)
    }
}

impl AgentConfiguration {
    pub fn new(sigma: f64, range: f64, agents: Vec<Agent>) -> Result<Self> {
        let config = AgentConfiguration {
            sigma,
            range,
            agents,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidConfiguration(msg));
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return invalid(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.range.is_finite() && self.range > 0.0) {
            return invalid(format!("range must be positive, got {}", self.range));
        }
        if self.agents.len() < 2 {
            return invalid(format!("need at least 2 agents, got {}", self.agents.len()));
        }
        let mut seen = HashSet::new();
        for agent in &self.agents {
            if !seen.insert(agent.id.as_str()) {
                return invalid(format!("duplicate agent id {:?}", agent.id));
            }
            if !(agent.x.is_finite() && agent.y.is_finite()) {
                return invalid(format!("agent {:?} has a non-finite position", agent.id));
            }
        }
        for (i, a) in self.agents.iter().enumerate() {
            for b in &self.agents[i + 1..] {
                if a.distance_to(b) == 0.0 {
                    return Err(Error::CoincidentAgents {
                        first: a.id.clone(),
                        second: b.id.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| Error::UnknownAgent(id.to_string()))
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                order: self.len(),
            })
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.agents[i].distance_to(&self.agents[j])
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            adjacency_weight(self.distance(i, j), self.sigma, self.range)
        }
    }

    /// Copy with agent `index` moved to `position`; fails if it lands on
    /// another agent.
    pub fn with_position(&self, index: usize, position: [f64; 2]) -> Result<Self> {
        self.check_index(index)?;
        let mut moved = self.clone();
        moved.agents[index].x = position[0];
        moved.agents[index].y = position[1];
        moved.validate()?;
        Ok(moved)
    }

    /// Indices `j ≠ index` with `distance ≤ range`.
    pub fn neighbors(&self, index: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| j != index && self.distance(index, j) <= self.range)
            .collect()
    }
}

pub fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Link weight for agents `distance` apart; inclusive at `distance = range`.
pub fn adjacency_weight(distance: f64, sigma: f64, range: f64) -> f64 {
    if distance <= range {
        (-(sigma / range) * distance).exp()
    } else {
        0.0
    }
}

/// `d(weight)/d(distance)` on the open interval `(0, range)`, extended
/// one-sidedly to `range` and zero beyond it.
pub fn adjacency_weight_slope(distance: f64, sigma: f64, range: f64) -> f64 {
    if distance <= range {
        -(sigma / range) * adjacency_weight(distance, sigma, range)
    } else {
        0.0
    }
}

pub fn adjacency_matrix(config: &AgentConfiguration) -> SquareMatrix {
    SquareMatrix::from_fn(config.len(), |i, j| config.weight(i, j))
}

/// Laplacian from a symmetric non-negative weight matrix (diagonal ignored).
///
/// Each degree is summed over the row's weights in ascending order, so the
/// diagonal does not depend on the labeling of the other agents.
pub fn laplacian_from_weights(weights: &SquareMatrix) -> SquareMatrix {
    let n = weights.order();
    let degrees: Vec<f64> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| weights.get(i, j))
                .collect();
            row.sort_by(f64::total_cmp);
            row.iter().sum()
        })
        .collect();
    SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            degrees[i]
        } else {
            -weights.get(i, j)
        }
    })
}

pub fn build_laplacian(config: &AgentConfiguration) -> Result<SquareMatrix> {
    // Configurations are validated on construction, but fields are public.
    config.validate()?;
    Ok(laplacian_from_weights(&adjacency_matrix(config)))
}

/// Independent structural and spectral checks of a candidate Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplacianValidation {
    pub symmetric: bool,
    pub zero_row_sums: bool,
    pub nonpositive_offdiag: bool,
    pub psd: bool,
    pub connected: bool,
    /// Smallest and second-smallest eigenvalues, when computable.
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
}

impl LaplacianValidation {
    /// Symmetric, zero row sums, non-positive off-diagonal and PSD.
    pub fn passes(&self) -> bool {
        self.symmetric && self.zero_row_sums && self.nonpositive_offdiag && self.psd
    }

    pub fn structural(&self) -> bool {
        self.symmetric && self.zero_row_sums && self.nonpositive_offdiag
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.symmetric {
            out.push("not symmetric");
        }
        if !self.zero_row_sums {
            out.push("row sums are not zero");
        }
        if !self.nonpositive_offdiag {
            out.push("positive off-diagonal entry");
        }
        if !self.psd {
            out.push("not positive semi-definite");
        }
        out
    }
}

pub fn validate_laplacian(m: &SquareMatrix, tol: f64) -> LaplacianValidation {
    let n = m.order();
    let symmetric = m.is_symmetric(tol);
    let zero_row_sums = m.row_sums().iter().all(|s| s.abs() <= tol);
    let nonpositive_offdiag = (0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j) <= tol));

    let eigenvalues = if symmetric {
        // The solver's own symmetry tolerance is tighter; symmetrize first.
        let sym = SquareMatrix::from_fn(n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)));
        symmetric_eigenvalues(&sym).ok()
    } else {
        None
    };
    let lambda1 = eigenvalues.as_ref().map(|ev| ev[0]);
    let lambda2 = eigenvalues.as_ref().and_then(|ev| ev.get(1).copied());
    let psd = lambda1.is_some_and(|l| l >= -tol);
    let connected = match (&eigenvalues, lambda2) {
        (Some(_), Some(l2)) => l2 > tol,
        (Some(_), None) => true,
        _ => false,
    };
    LaplacianValidation {
        symmetric,
        zero_row_sums,
        nonpositive_offdiag,
        psd,
        connected,
        lambda1,
        lambda2,
    }
}

/// Fails with `NotLaplacian` unless `m` passes the structural checks at
/// `tol · max(1, ‖m‖)`.
pub(crate) fn require_structural_laplacian(m: &SquareMatrix, tol: f64) -> Result<()> {
    let n = m.order();
    let scaled = tol * m.max_abs().max(1.0);
    let mut problems = Vec::new();
    if !m.is_symmetric(scaled) {
        problems.push("not symmetric");
    }
    if !m.row_sums().iter().all(|s| s.abs() <= scaled) {
        problems.push("row sums are not zero");
    }
    if !(0..n).all(|i| (0..n).all(|j| i == j || m.get(i, j) <= scaled)) {
        problems.push("positive off-diagonal entry");
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::NotLaplacian(problems.join(", ")))
    }
}

/// Breadth-first connectivity over links of positive weight.
pub fn is_connected(config: &AgentConfiguration) -> bool {
    let n = config.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        #[allow(clippy::needless_range_loop)]
        for j in 0..n {
            if !seen[j] && config.weight(i, j) > 0.0 {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
