//! Monte-Carlo sampling of self-avoiding polygons at fixed perimeter,
//! layer-moment estimation and finite-size extrapolation.

mod chain;
mod run;
mod stats;

pub use chain::{mc_move, MoveKind, SapChain};
pub use run::{
    chi_square_uniformity, mc_run, mc_run_many, read_csv, write_csv, ChiSquareReport, McConfig,
    McRow, McRun, RowKind, Sample, BURN_IN_SWEEPS,
};
pub use stats::{
    batch_means, extrapolate, jackknife_ratio, Fit, McEstimate, RatioSeriesPoint, MIN_BATCHES,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("degenerate fit: need at least two distinct x values")]
    DegenerateFit,
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}
