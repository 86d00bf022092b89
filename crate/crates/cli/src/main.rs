//! `isoconn`: JSON in, JSON/CSV/SVG out.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "isoconn",
    version,
    about = "Spectral analysis of distance-weighted multi-agent networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write the result here (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; defaults to svg for `render` and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Tolerance for comparisons (isospectrality, zone membership).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for sampled permutation families.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Displayed decimals: `4` or `full`.
    #[arg(long, global = true, default_value = "4", value_parser = ["4", "full"])]
    pub precision: String,
}

impl Common {
    pub fn decimals(&self) -> Option<i32> {
        (self.precision == "4").then_some(4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Either a geometric configuration or a raw Laplacian.
#[derive(Debug, Args)]
pub struct Source {
    /// Agent configuration JSON: `{"sigma", "range", "agents": [{"id", "x", "y"}]}`.
    #[arg(long, conflicts_with = "matrix")]
    pub input: Option<PathBuf>,
    /// Matrix JSON: `{"order": n, "rows": [[...]]}`.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConfigSource {
    /// Agent configuration JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Id (or zero-based index) of the mobile agent.
    #[arg(long)]
    pub mobile: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and eigenvectors of a Laplacian.
    Spectrum(Source),
    /// Algebraic connectivity, Fiedler vector and Laplacian checks.
    Connectivity(Source),
    /// Permutation family of a Laplacian, or comparison of two matrices.
    Isospectral {
        /// One matrix to enumerate, or two to compare.
        #[arg(long, num_args = 1, action = clap::ArgAction::Append)]
        matrix: Vec<PathBuf>,
        /// Agent configuration instead of a matrix.
        #[arg(long, conflicts_with = "matrix")]
        input: Option<PathBuf>,
        /// List conjugates by permutations of the agents.
        #[arg(long)]
        enumerate: bool,
        /// Keep only element-wise distinct conjugates.
        #[arg(long)]
        dedupe: bool,
        /// Maximum number of family members.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Apply `QᵀLQ` for a permutation, an explicit `Q`, or a rotation.
    Transform {
        #[command(flatten)]
        source: Source,
        /// Zero-based permutation, e.g. `3,2,1,0`.
        #[arg(long, group = "q_source", value_delimiter = ',')]
        perm: Option<Vec<usize>>,
        /// Matrix JSON holding `Q`.
        #[arg(long, group = "q_source")]
        q: Option<PathBuf>,
        /// Rotation angle (radians) in a plane orthogonal to the ones vector.
        #[arg(long, group = "q_source", allow_negative_numbers = true)]
        theta: Option<f64>,
    },
    /// Positions of the mobile agent that leave every link weight unchanged.
    Moves(ConfigSource),
    /// Integrate the change of algebraic connectivity along a path.
    Integrate {
        #[command(flatten)]
        source: ConfigSource,
        /// Waypoints `x,y;x,y;...`.
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        /// Number of midpoint steps.
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// Grid search for positions that keep algebraic connectivity.
    Zone {
        #[command(flatten)]
        source: ConfigSource,
        /// `x_min,x_max,y_min,y_max,nx,ny`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Target value; defaults to the current algebraic connectivity.
        #[arg(long, allow_negative_numbers = true)]
        target: Option<f64>,
    },
    /// The dense four-agent family for given parameters.
    Parametric {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
    /// SVG drawing of a configuration.
    Render {
        /// Agent configuration JSON.
        #[arg(long)]
        input: PathBuf,
        /// Also draw the alternative positions of this agent.
        #[arg(long)]
        mobile: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
