//! Exact arithmetic in the representation ring `Z[M]` of a torus, its
//! localization at the factors `1 - e^{-λ}`, and truncated graded series.

mod character;
mod chow;
mod laurent;
mod localized;
mod series;

pub use character::Character;
pub use chow::{lowest_term, ChowFraction};
pub use laurent::{Coeff, CycloImage, LaurentPolynomial};
pub use localized::{sum_localized, LocalizedElement};
pub use series::{exp_expand, todd_series, GradedSeries, RatPoly};
