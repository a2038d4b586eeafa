//! Exact torus-equivariant K-theory of complete simplicial toric varieties.
//!
//! Everything is computed from fan data with exact integer and rational
//! arithmetic: equivariant Euler characteristics by fixed-point
//! localization, equivariant multiplicities at fixed points, Todd-ratio
//! expansions, and piecewise exponential functions with their wall
//! (GKM) conditions. Lattice-point enumeration in [`divisor`] provides an
//! independent check on the localization results.

pub mod algebra;
pub mod catalog;
pub mod divisor;
pub mod error;
pub mod euler;
pub mod fan;
mod lattice;
pub mod multiplicity;
pub mod pexp;

pub use algebra::{
    exp_expand, lowest_term, sum_localized, todd_series, Character, ChowFraction, Coeff,
    CycloImage, GradedSeries, LaurentPolynomial, LocalizedElement, RatPoly,
};
pub use divisor::{Divisor, Positivity, VertexData};
pub use error::{Error, Result};
pub use euler::{BrionReport, FixedPointBundleData};
pub use fan::{Cone, ConeKind, Fan, Wall};
pub use pexp::{PexpReport, PiecewiseExponential, WallCheck};
