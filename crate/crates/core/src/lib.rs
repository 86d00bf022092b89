//! Spectral analysis of distance-weighted multi-agent communication graphs.
//!
//! - [`topology`]: agent configurations, the exponential link model and
//!   Laplacian construction/validation.
//! - [`matcore`]: dense matrices, the Jacobi eigensolver, permutation and
//!   row-sum-one orthonormal transforms.
//! - [`spectral`]: algebraic connectivity, Fiedler vectors, isospectrality
//!   and the shared-Fiedler-vector null-space test.
//! - [`isospectral`]: isospectral families by similarity transform and
//!   relabeling.
//! - [`mobility`]: one mobile agent: block decomposition, `dλ₂ = vᵀ·dL·v`,
//!   Laplacian-preserving moves and path integration.
//! - [`isoconn`]: the dense four-agent family with closed-form spectrum and
//!   grid search for zones of unchanged connectivity.

pub mod error;
pub mod fixtures;
pub mod isoconn;
pub mod isospectral;
pub mod matcore;
pub mod mobility;
pub mod render;
pub mod spectral;
pub mod topology;

pub use error::{Error, Result};
pub use matcore::{SpectralDecomposition, SquareMatrix};
pub use spectral::ConnectivityReport;
pub use topology::{Agent, AgentConfiguration};
