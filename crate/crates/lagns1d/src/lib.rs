//! Numerical laboratory for the 1D compressible Navier-Stokes equations in
//! Lagrangian coordinates, built around the mild-solution (heat-kernel
//! Duhamel + Picard fixed point) construction for rough initial data.
//!
//! The crate is organised as a stack:
//!
//! * [`grid`] — periodic grid, sampled fields, graded time ladders,
//!   trajectories, and the rough-data generators;
//! * [`norms`] — L^p / BV / Gagliardo / negative-order Sobolev norms and the
//!   time-weighted solution norms with Hölder-in-time quotients;
//! * [`heat`] — exact heat-kernel evaluation, spectral periodic convolution,
//!   fractional multipliers, and the kernel-bound audit;
//! * [`duhamel`] — mild-solution assembly with product integration of the
//!   singular kernel factor, plus the smoothing-estimate audits;
//! * [`isentropic`], [`full_system`] — the two fixed-point solvers;
//! * [`oracle_fd`] — an independent finite-difference cross-check solver;
//! * [`verify`] — decay-rate and product/composition estimate audits;
//! * [`config`], [`report`], [`dump`] — batch configuration, JSON reports,
//!   and the binary field-dump format used by the CLI.

pub mod config;
pub mod dump;
pub mod duhamel;
pub mod full_system;
pub mod generate;
pub mod grid;
pub mod heat;
pub mod isentropic;
pub mod norms;
pub mod oracle_fd;
pub mod report;
pub mod spectral;
pub mod verify;

pub use grid::{Field, Grid, TimeLadder, Trajectory};
pub use norms::{NormMode, NormParams, WeightedNormReport};

/// Crate-wide error type. Variants map onto the CLI exit codes:
/// configuration errors exit 2, divergence exits 3, violated internal
/// invariants exit 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("kernel tail truncation guard violated: {0}")]
    Truncation(String),

    #[error("no periodic antiderivative: field has nonzero mean ({mean:e})")]
    NoAntiderivative { mean: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("volume lower bound lost at t={t}, x={x} (v={v})")]
    VolumeLowerBound { t: f64, x: f64, v: f64 },

    #[error("non-finite forcing at node {node} (t={t})")]
    Propagation { node: usize, t: f64 },

    #[error(
        "Picard iteration diverged after {iterations} iterations \
         (M={m:.3e}, last ratios {ratios:?}); suggest halving the window to T={t_suggest}"
    )]
    Divergence {
        iterations: usize,
        m: f64,
        ratios: Vec<f64>,
        t_suggest: f64,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config, 3 divergence, 4 invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Divergence { .. } => 3,
            _ => 4,
        }
    }
}
