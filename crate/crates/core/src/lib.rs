//! Exact finite-level computations around the extremal characters of the
//! infinite symmetric group and the inclusion generated by the stabilizer of
//! a point.
//!
//! - [`perm`]: permutations, cycle types, double cosets, enumeration.
//! - [`young`]: Young diagram dimensions and characters.
//! - [`thoma`]: Thoma parameters and their characters.
//! - [`groupalg`]: the group algebra with the trace, conditional expectations,
//!   block weights and small projections.
//! - [`tensorrep`]: the signed tensor representation for `γ = 0`.
//! - [`entropy`]: entropy formulas and bounds.

pub mod entropy;
pub mod error;
pub mod groupalg;
pub mod linalg;
pub mod perm;
pub mod tensorrep;
pub mod thoma;
pub mod young;

pub use error::{Error, Result};
pub use perm::{CycleType, Permutation};
pub use thoma::ThomaParameter;
pub use young::YoungDiagram;

use serde::{Deserialize, Serialize};

/// Size caps shared by the enumerating operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of group elements enumerated at once.
    pub enumeration: u128,
    /// Maximum Hilbert space dimension of a tensor power.
    pub dimension: u128,
    /// Largest `n` for which block weights are computed.
    pub weight_degree: usize,
    /// Largest `n` for which partitions are enumerated.
    pub partition_degree: usize,
    /// Largest `n + 1` for the exhaustive commuting-square check.
    pub square_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            enumeration: 3_628_800,
            dimension: 1 << 20,
            weight_degree: 10,
            partition_degree: 14,
            square_degree: 6,
        }
    }
}
