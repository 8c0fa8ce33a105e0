//! Square-lattice objects: self-avoiding polygons, staircase polygons and
//! directed walks, together with the counting parameters measured on them
//! and exhaustive enumerators used as oracles for the series engine.

mod enumerate;
mod layers;
mod polygon;
mod staircase;
mod walks;

pub use enumerate::{
    enumerate_sap, enumerate_staircase, enumerate_walks, SapIter, StaircaseIter, WalkIter,
    MAX_SAP_PERIMETER, MAX_STAIRCASE_HALF_PERIMETER, MAX_WALK_LENGTH,
};
pub use layers::{layer_moments, layer_moments_from_cells, LayerFamily, LayerScratch};
pub use polygon::{validate_polygon, LatticePolygon, Step};
pub use staircase::{
    column_moments, diagonal_moments, staircase_to_dyck, ColumnMoments, StaircasePolygon,
};
pub use walks::{DyckPath, Walk, WalkModel};

use thiserror::Error;

/// Errors raised while constructing or enumerating lattice objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty step sequence")]
    Empty,
    #[error("step sequence does not return to its starting vertex")]
    NotClosed,
    #[error("polygon visits a vertex twice")]
    SelfIntersecting,
    #[error("polygon has odd length {0}")]
    OddLength(usize),
    #[error("perimeter {0} is odd")]
    OddPerimeter(usize),
    #[error("size {size} exceeds the enumeration guard {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("size {size} is below the minimum {min}")]
    SizeTooSmall { size: usize, min: usize },
    #[error("invalid step character {0:?}")]
    InvalidStep(char),
    #[error("invalid staircase polygon: {0}")]
    InvalidStaircase(&'static str),
    #[error("invalid Dyck path")]
    InvalidDyck,
}

/// Which variant of a layer moment a [`MomentVector`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentVariant {
    /// Power of the layer total, summed over layers.
    A,
    /// Sum of powers of the segment lengths.
    B,
    /// A single-segment quantity (staircase diagonals, columns, walk heights).
    Exact,
}

/// Counting parameters `(n_0, n_1, ..., n_M)` of one lattice object.
///
/// `n_0` is the number of summands (diagonals, columns, layers or walk
/// positions depending on the producer); `n_k` is the sum of their k-th powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct MomentVector {
    pub variant: MomentVariant,
    pub values: Vec<u64>,
}

impl MomentVector {
    pub fn new(variant: MomentVariant, values: Vec<u64>) -> Self {
        Self { variant, values }
    }

    /// Largest moment order stored.
    pub fn kmax(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> u64 {
        self.values[k]
    }

    /// Moments `n_1..n_M`, i.e. everything except the count `n_0`.
    pub fn higher(&self) -> &[u64] {
        &self.values[1..]
    }
}

/// Sum of `k`-th powers for `k = 0..=kmax` over an iterator of lengths.
pub(crate) fn power_sums<I: IntoIterator<Item = u64>>(lengths: I, kmax: usize) -> Vec<u64> {
    let mut sums = vec![0u64; kmax + 1];
    for l in lengths {
        let mut p = 1u64;
        for s in sums.iter_mut() {
            *s += p;
            p *= l;
        }
    }
    sums
}
