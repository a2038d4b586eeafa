use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::series::{exp_component, poly_terms_record};
use super::{Character, LocalizedElement, RatPoly};
use crate::error::{Error, Result};

/// A fraction `p / (λ_1 ⋯ λ_k)` in the localized Chow ring: a homogeneous
/// rational polynomial over a product of linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowFraction {
    numerator: RatPoly,
    denominator: Vec<Character>,
}

impl ChowFraction {
    pub fn new(numerator: RatPoly, mut denominator: Vec<Character>) -> Result<Self> {
        if denominator.iter().any(Character::is_zero) {
            return Err(Error::ZeroCharacter);
        }
        assert!(numerator.is_homogeneous(), "numerator must be homogeneous");
        denominator.sort();
        Ok(ChowFraction {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &RatPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Character] {
        &self.denominator
    }

    /// `deg(numerator) - #factors`; `None` for the zero fraction.
    pub fn degree(&self) -> Option<i64> {
        self.numerator
            .degree()
            .map(|d| d as i64 - self.denominator.len() as i64)
    }

    fn denominator_product(&self) -> RatPoly {
        self.denominator
            .iter()
            .fold(RatPoly::one(self.numerator.rank()), |acc, l| {
                acc.mul(&RatPoly::linear_form(l))
            })
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn same_value(&self, other: &Self) -> bool {
        self.numerator.mul(&other.denominator_product())
            == other.numerator.mul(&self.denominator_product())
    }
}

/// Lowest-degree part of `x` under the substitution `e^m ↦ exp(m·t)`: the
/// lowest nonzero component of the numerator over the product of the
/// linear forms `λ`, since `1 - e^{-λ} = λ + (higher terms)`.
pub fn lowest_term(x: &LocalizedElement) -> Result<ChowFraction> {
    let num = x.numerator();
    if num.is_zero() {
        return Err(Error::ZeroNumerator);
    }
    // A nonzero f has a nonzero component of degree < #terms (Vandermonde).
    let lowest = (0..num.len())
        .map(|d| exp_component(num, d))
        .find(|p| !p.is_zero())
        .expect("nonzero polynomial has a nonzero low-degree component");
    ChowFraction::new(lowest, x.denominator().to_vec())
}

fn write_factor(f: &mut fmt::Formatter<'_>, p: &RatPoly) -> fmt::Result {
    write!(f, "({p})")
}

impl fmt::Display for ChowFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.numerator.terms().count() <= 1;
        if single {
            write!(f, "{}", self.numerator)?;
        } else {
            write!(f, "({})", self.numerator)?;
        }
        if self.denominator.is_empty() {
            return Ok(());
        }
        f.write_str("/(")?;
        for (i, l) in self.denominator.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write_factor(f, &RatPoly::linear_form(l))?;
        }
        f.write_str(")")
    }
}

impl Serialize for ChowFraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ChowFraction", 2)?;
        st.serialize_field("numerator", &poly_terms_record(&self.numerator))?;
        st.serialize_field("denominator", &self.denominator)?;
        st.end()
    }
}
