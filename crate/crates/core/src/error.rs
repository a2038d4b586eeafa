use thiserror::Error;

use crate::algebra::{Character, LaurentPolynomial};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("zero character where a nonzero one is required")]
    ZeroCharacter,

    #[error("character {0} is not primitive")]
    NonPrimitiveCharacter(Character),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("not divisible: remainder {remainder}")]
    NotDivisible { remainder: LaurentPolynomial },

    #[error("not integral: {remainder} remains over {factors} denominator factor(s)")]
    NotIntegral {
        remainder: LaurentPolynomial,
        factors: usize,
    },

    #[error("zero numerator has no lowest term")]
    ZeroNumerator,

    #[error("sum of an empty list")]
    EmptySum,

    #[error("ray {index}: {reason}")]
    InvalidRay { index: usize, reason: String },

    #[error("cone {index}: {reason}")]
    InvalidCone { index: usize, reason: String },

    #[error("ray {0} does not belong to any maximal cone")]
    DanglingRay(usize),

    #[error("interiors of cones {0} and {1} overlap")]
    Overlap(usize, usize),

    #[error("cone {0} is not simplicial")]
    NotSimplicial(usize),

    #[error("cone {0} is not full-dimensional")]
    NotFullDimensional(usize),

    #[error("cone {0} is not smooth")]
    NotSmooth(usize),

    #[error("cone index {0} out of range")]
    NoSuchCone(usize),

    #[error("facet {rays:?} of cone {cone} is shared by {count} other maximal cone(s)")]
    UnpairedFacet {
        cone: usize,
        rays: Vec<usize>,
        count: usize,
    },

    #[error("fan is not complete")]
    Incomplete,

    #[error("generators are linearly dependent")]
    DependentGenerators,

    #[error("divisor has {found} coefficients, fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },

    #[error("not Cartier on cone {cone}: m = ({})", .solution.join(", "))]
    NotCartier { cone: usize, solution: Vec<String> },

    #[error("expected {expected} cone values, found {found}")]
    ValueCount { expected: usize, found: usize },

    #[error("piecewise exponential fails compatibility on {failed} wall(s)")]
    IncompatibleWalls { failed: usize },

    #[error("operands live on different fans")]
    DifferentFans,

    #[error("bundle data: {0}")]
    BundleData(String),

    #[error("divisor is not basepoint-free; lattice-point oracle does not apply")]
    NotBasepointFree,
}
