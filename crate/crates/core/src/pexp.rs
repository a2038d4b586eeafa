//! Piecewise exponential functions on a fan: one element of `R(T)` per
//! maximal cone, such that across every wall `w` the two values differ by a
//! multiple of `1 - e^{u_w}`, where `u_w` is the primitive character
//! vanishing on the wall. These model the operational equivariant K-theory
//! ring of the toric variety; the tuple of values is its restriction to the
//! fixed points.

use crate::algebra::{sum_localized, CycloImage, LaurentPolynomial};
use crate::divisor::{cartier_data, Divisor};
use crate::error::{Error, Result};
use crate::fan::{Fan, Wall};
use crate::multiplicity::em_k;

/// Outcome of the compatibility check on one wall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCheck {
    pub wall: Wall,
    /// `f_a - f_b` for the wall's cones `(a, b)`.
    pub difference: LaurentPolynomial,
    /// Image of the difference in `Z[M/Z u_w]`; zero iff the wall passes.
    pub image: CycloImage,
}

impl WallCheck {
    pub fn passed(&self) -> bool {
        self.image.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PexpReport {
    pub walls: Vec<WallCheck>,
}

impl PexpReport {
    pub fn passed(&self) -> bool {
        self.walls.iter().all(WallCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &WallCheck> + '_ {
        self.walls.iter().filter(|w| !w.passed())
    }
}

/// Checks every wall of `fan` against the candidate cone values.
pub fn check_pexp(fan: &Fan, values: &[LaurentPolynomial]) -> Result<PexpReport> {
    if values.len() != fan.cones().len() {
        return Err(Error::ValueCount {
            expected: fan.cones().len(),
            found: values.len(),
        });
    }
    if let Some(v) = values.iter().find(|v| v.rank() != fan.rank()) {
        return Err(Error::RankMismatch {
            expected: fan.rank(),
            found: v.rank(),
        });
    }
    let walls = fan
        .walls()?
        .into_iter()
        .map(|wall| {
            let (a, b) = wall.cones;
            let difference = &values[a] - &values[b];
            let image = difference.cyclo_image(&wall.perp)?;
            Ok(WallCheck {
                wall,
                difference,
                image,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PexpReport { walls })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseExponential<'f> {
    fan: &'f Fan,
    values: Vec<LaurentPolynomial>,
}

impl<'f> PiecewiseExponential<'f> {
    /// Validated construction; fails unless every wall passes.
    pub fn new(fan: &'f Fan, values: Vec<LaurentPolynomial>) -> Result<Self> {
        let report = check_pexp(fan, &values)?;
        let failed = report.failures().count();
        if failed > 0 {
            return Err(Error::IncompatibleWalls { failed });
        }
        Ok(PiecewiseExponential { fan, values })
    }

    /// Skips the wall check. Only meant for exercising failure paths.
    pub fn new_unchecked(fan: &'f Fan, values: Vec<LaurentPolynomial>) -> Self {
        PiecewiseExponential { fan, values }
    }

    /// The same value on every cone.
    pub fn constant(fan: &'f Fan, value: LaurentPolynomial) -> Result<Self> {
        Self::new(fan, vec![value; fan.cones().len()])
    }

    /// Class of `O(D)`: `f_σ = e^{m_σ}`.
    pub fn from_divisor(fan: &'f Fan, d: &Divisor) -> Result<Self> {
        let data = cartier_data(fan, d)?;
        Self::new(
            fan,
            data.vertices
                .into_iter()
                .map(LaurentPolynomial::exp)
                .collect(),
        )
    }

    pub fn fan(&self) -> &'f Fan {
        self.fan
    }

    /// Value on each maximal cone: the image in `Π_{fixed points} R(T)`.
    pub fn restrict_to_fixed_points(&self) -> &[LaurentPolynomial] {
        &self.values
    }

    fn same_fan(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.fan, other.fan) || self.fan == other.fan {
            Ok(())
        } else {
            Err(Error::DifferentFans)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_fan(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.fan, values)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_fan(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Self::new(self.fan, values)
    }

    /// Multiplies every cone value by the global element `p`.
    pub fn scale(&self, p: &LaurentPolynomial) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|a| a.try_mul(p))
            .collect::<Result<_>>()?;
        Self::new(self.fan, values)
    }

    /// Pushforward to a point, `χ_T(f · [O_X]) = Σ_σ f_σ · em^K_σ`, cleared
    /// to a polynomial. Non-integrality means the values were not a valid
    /// piecewise exponential function.
    pub fn pushforward_to_point(&self) -> Result<LaurentPolynomial> {
        if !self.fan.complete() {
            return Err(Error::Incomplete);
        }
        let terms = self
            .values
            .iter()
            .enumerate()
            .map(|(ci, f)| em_k(self.fan, ci)?.mul_polynomial(f))
            .collect::<Result<Vec<_>>>()?;
        sum_localized(&terms)?.clear_to_polynomial()
    }
}
