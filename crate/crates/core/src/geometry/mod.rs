//! Lines, intersection data, coordinate frames and the chambers of the real figure.

mod arrangement;
mod chambers;
mod line;
mod normalize;
mod transform;

use thiserror::Error;

pub use arrangement::{
    euler_characteristic, intersections, is_sharp, sharp_pairs, zaslavsky_bounded_count, Arrangement,
    IntersectionPoint,
};
pub use chambers::{chambers, is_interior, BoundaryStep, BoundaryVertex, Chamber};
pub use line::{Line, ProjPoint};
pub use normalize::{normalize, normalize_with, NormalizationRecord, NormalizeOptions, Profile};
pub use transform::{det3, Mat3, Projectivity};


#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("lines {0} and {1} coincide")]
    DuplicateLine(usize, usize),
    #[error("line {0} has all coefficients zero")]
    ZeroLine(usize),
    #[error("line {0} is the line at infinity")]
    LineAtInfinity(usize),
    #[error("no line with id {0}")]
    UnknownLine(usize),
    #[error("arrangement is not in a normalized frame")]
    NotNormalized,
    #[error("lines {0} and {1} do not form a sharp pair")]
    NotSharp(usize, usize),
    #[error("normalization failed (seed {seed}): {reason}")]
    NormalizationFailed { seed: u64, reason: String },
    #[error("internal geometry error: {0}")]
    Internal(String),
}
