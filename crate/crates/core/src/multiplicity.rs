//! Equivariant multiplicities at the torus-fixed points of a simplicial
//! toric variety.
//!
//! The fixed point of a full-dimensional simplicial cone `σ` has tangent
//! cone the affine toric variety of `σ`, whose coordinate ring is the
//! semigroup algebra of `σ^∨ ∩ M`. Its K-theoretic multiplicity is the
//! multigraded Hilbert series of that algebra,
//!
//! ```text
//! em^K = Σ_{b ∈ box(u)} e^b / Π (1 - e^{u_i}),
//! ```
//!
//! where `u_i` are the dual generators. The tangent weights are
//! `λ_i = -u_i`, so the denominator is `Π (1 - e^{-λ_i})`.

use num_traits::Zero;

use crate::algebra::{
    exp_expand, lowest_term, Character, ChowFraction, GradedSeries, LaurentPolynomial,
    LocalizedElement, RatPoly,
};
use crate::error::{Error, Result};
use crate::fan::{box_points, ConeKind, Fan};

/// Weights of the torus on the tangent space at the fixed point of `cone`:
/// the negated dual generators, in the same order.
pub fn tangent_weights(fan: &Fan, cone: usize) -> Result<Vec<Character>> {
    Ok(fan.dual_generators(cone)?.into_iter().map(|u| -u).collect())
}

/// K-theoretic equivariant multiplicity at the fixed point of `cone`.
pub fn em_k(fan: &Fan, cone: usize) -> Result<LocalizedElement> {
    let duals = fan.dual_generators(cone)?;
    let numerator =
        LaurentPolynomial::from_terms(fan.rank(), box_points(&duals)?.into_iter().map(|b| (1, b)))?;
    LocalizedElement::new(numerator, duals.into_iter().map(|u| -u).collect())
}

/// Chow-theoretic equivariant multiplicity: the lowest-degree term of
/// [`em_k`] under the exponential substitution.
pub fn em_a(fan: &Fan, cone: usize) -> Result<ChowFraction> {
    lowest_term(&em_k(fan, cone)?)
}

/// `em^K / em^A` at a smooth fixed point, expanded through degree `order`.
///
/// Each denominator factor contributes `λ / (1 - e^{-λ})`, obtained here by
/// expanding `1 - e^{-λ}`, dividing by its lowest term `λ`, and inverting.
pub fn todd_at_fixed_point(fan: &Fan, cone: usize, order: usize) -> Result<GradedSeries> {
    if fan.cone(cone)?.kind() != ConeKind::Smooth {
        return Err(Error::NotSmooth(cone));
    }
    let k = em_k(fan, cone)?;
    let a = lowest_term(&k)?;
    let rank = fan.rank();

    let mut ratio = exp_expand(k.numerator(), order);
    let lowest = a.numerator().coeff(&vec![0; rank]);
    debug_assert!(!lowest.is_zero());
    ratio = ratio.scale(&lowest.recip());

    for lambda in k.denominator() {
        let factor = LaurentPolynomial::one_minus_exp(&-lambda);
        let expanded = exp_expand(&factor, order + 1);
        let form = RatPoly::linear_form(lambda);
        let shifted: Vec<RatPoly> = expanded.components()[1..]
            .iter()
            .map(|c| c.div_exact(&form).expect("1 - e^{-λ} is divisible by λ"))
            .collect();
        let unit = GradedSeries::from_components(rank, shifted);
        ratio = ratio.mul(&unit.inverse().expect("constant term is 1"));
    }
    Ok(ratio)
}
