use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use super::{Character, LaurentPolynomial};
use crate::error::{Error, Result};

/// An element of `S⁻¹R(T)`, where `S` is generated by the factors
/// `1 - e^{-λ}` for nonzero characters `λ`.
///
/// The denominator is kept as a sorted multiset of the characters `λ` and is
/// only multiplied out when a division has to be carried out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizedElement {
    numerator: LaurentPolynomial,
    denominator: Vec<Character>,
}

impl LocalizedElement {
    /// `numerator / Π (1 - e^{-λ})` over the given `λ`s.
    pub fn new(numerator: LaurentPolynomial, factors: Vec<Character>) -> Result<Self> {
        for lambda in &factors {
            if lambda.rank() != numerator.rank() {
                return Err(Error::RankMismatch {
                    expected: numerator.rank(),
                    found: lambda.rank(),
                });
            }
            if lambda.is_zero() {
                return Err(Error::ZeroCharacter);
            }
        }
        let mut denominator = factors;
        denominator.sort();
        Ok(LocalizedElement {
            numerator,
            denominator,
        })
    }

    pub fn polynomial(p: LaurentPolynomial) -> Self {
        LocalizedElement {
            numerator: p,
            denominator: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.numerator.rank()
    }

    pub fn numerator(&self) -> &LaurentPolynomial {
        &self.numerator
    }

    /// The characters `λ` of the factors `1 - e^{-λ}`, sorted.
    pub fn denominator(&self) -> &[Character] {
        &self.denominator
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_empty()
    }

    /// `Π (1 - e^{-λ})`, multiplied out.
    pub fn denominator_product(&self) -> LaurentPolynomial {
        self.denominator
            .iter()
            .fold(LaurentPolynomial::one(self.rank()), |acc, l| {
                &acc * &LaurentPolynomial::one_minus_exp(&-l)
            })
    }

    /// Multiplies by an element of `R(T)`.
    pub fn mul_polynomial(&self, p: &LaurentPolynomial) -> Result<Self> {
        Ok(LocalizedElement {
            numerator: self.numerator.try_mul(p)?,
            denominator: self.denominator.clone(),
        })
    }

    /// Equality as elements of `S⁻¹R(T)`, by cross-multiplication.
    pub fn same_value(&self, other: &Self) -> bool {
        self.rank() == other.rank()
            && &self.numerator * &other.denominator_product()
                == &other.numerator * &self.denominator_product()
    }

    /// Rewrites every factor so its `λ` is sign-canonical, absorbing the unit
    /// from `1 - e^{-λ} = -e^{-λ}(1 - e^{λ})` into the numerator.
    pub fn sign_canonical(&self) -> Self {
        let mut numerator = self.numerator.clone();
        let mut denominator = Vec::with_capacity(self.denominator.len());
        for lambda in &self.denominator {
            if lambda.is_sign_canonical() {
                denominator.push(lambda.clone());
            } else {
                numerator = numerator.shift(lambda).scale(-1);
                denominator.push(-lambda);
            }
        }
        denominator.sort();
        LocalizedElement {
            numerator,
            denominator,
        }
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn reduced(&self) -> Self {
        let x = self.sign_canonical();
        let mut numerator = x.numerator;
        let mut kept = Vec::new();
        for lambda in x.denominator {
            match divide_by_factor(&numerator, &lambda) {
                Some(q) => numerator = q,
                None => kept.push(lambda),
            }
        }
        LocalizedElement {
            numerator,
            denominator: kept,
        }
    }

    /// The element as a polynomial, if it lies in `R(T) ⊂ S⁻¹R(T)`.
    pub fn clear_to_polynomial(&self) -> Result<LaurentPolynomial> {
        let x = self.sign_canonical();
        let mut numerator = x.numerator;
        for (i, lambda) in x.denominator.iter().enumerate() {
            match divide_by_factor(&numerator, lambda) {
                Some(q) => numerator = q,
                None => {
                    return Err(Error::NotIntegral {
                        remainder: numerator,
                        factors: x.denominator.len() - i,
                    })
                }
            }
        }
        Ok(numerator)
    }
}

/// `f / (1 - e^{-λ})` when exact.
fn divide_by_factor(f: &LaurentPolynomial, lambda: &Character) -> Option<LaurentPolynomial> {
    if f.is_zero() {
        return Some(f.clone());
    }
    // Cheap necessary condition: the image modulo 1 - e^{λ0}, λ0 = λ/content, vanishes.
    if !f.divisible_by_cyclo(&lambda.primitive()).ok()? {
        return None;
    }
    f.exact_divide(&LaurentPolynomial::one_minus_exp(&-lambda))
        .ok()
}

/// Sums elements of `S⁻¹R(T)` over the multiset-union of their denominators,
/// then cancels factors that divide the resulting numerator.
pub fn sum_localized(elems: &[LocalizedElement]) -> Result<LocalizedElement> {
    let first = elems.first().ok_or(Error::EmptySum)?;
    let rank = first.rank();
    if let Some(bad) = elems.iter().find(|x| x.rank() != rank) {
        return Err(Error::RankMismatch {
            expected: rank,
            found: bad.rank(),
        });
    }
    if elems.len() == 1 {
        return Ok(first.clone());
    }

    let canon: Vec<LocalizedElement> = elems.iter().map(|x| x.sign_canonical()).collect();
    let counts: Vec<BTreeMap<&Character, usize>> = canon
        .iter()
        .map(|x| {
            let mut c = BTreeMap::new();
            for l in &x.denominator {
                *c.entry(l).or_insert(0) += 1;
            }
            c
        })
        .collect();
    let mut common: BTreeMap<&Character, usize> = BTreeMap::new();
    for c in &counts {
        for (&l, &k) in c {
            let e = common.entry(l).or_insert(0);
            *e = (*e).max(k);
        }
    }

    let mut numerator = LaurentPolynomial::zero(rank);
    for (x, c) in canon.iter().zip(&counts) {
        let mut term = x.numerator.clone();
        for (&l, &k) in &common {
            let missing = k - c.get(l).copied().unwrap_or(0);
            if missing > 0 {
                let factor = LaurentPolynomial::one_minus_exp(&-l);
                for _ in 0..missing {
                    term = &term * &factor;
                }
            }
        }
        numerator = &numerator + &term;
    }
    let denominator = common
        .into_iter()
        .flat_map(|(l, k)| std::iter::repeat_n(l.clone(), k))
        .collect();
    Ok(LocalizedElement {
        numerator,
        denominator,
    }
    .reduced())
}

#[derive(Deserialize)]
struct LocalizedRecord {
    numerator: LaurentPolynomial,
    denominator: Vec<Character>,
}

impl<'de> Deserialize<'de> for LocalizedElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = LocalizedRecord::deserialize(d)?;
        LocalizedElement::new(rec.numerator, rec.denominator).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "({}) / (", self.numerator)?;
        for (i, l) in self.denominator.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "(1 - e^-{l})")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::exp(Character::new(m.to_vec()))
    }

    fn c(m: &[i64]) -> Character {
        Character::new(m.to_vec())
    }

    #[test]
    fn projective_line_localization_sum() {
        // e^t / (1 - e^{-t}) + 1 / (1 - e^t)
        let at_zero = LocalizedElement::new(e(&[1]), vec![c(&[1])]).unwrap();
        let at_inf = LocalizedElement::new(LaurentPolynomial::one(1), vec![c(&[-1])]).unwrap();
        let sum = sum_localized(&[at_zero, at_inf]).unwrap();
        assert!(sum.is_polynomial());
        assert_eq!(sum.numerator(), &(&LaurentPolynomial::one(1) + &e(&[1])));
    }

    #[test]
    fn opposite_factors_cancel_to_one() {
        let a = LocalizedElement::new(LaurentPolynomial::one(1), vec![c(&[1])]).unwrap();
        let b = LocalizedElement::new(LaurentPolynomial::one(1), vec![c(&[-1])]).unwrap();
        // Oracle: common denominator by hand, then exact division.
        let num =
            &(&LaurentPolynomial::one(1) - &e(&[1])) + &(&LaurentPolynomial::one(1) - &e(&[-1]));
        let den =
            &(&LaurentPolynomial::one(1) - &e(&[-1])) * &(&LaurentPolynomial::one(1) - &e(&[1]));
        let expected = num.exact_divide(&den).unwrap();
        let sum = sum_localized(&[a, b]).unwrap();
        assert_eq!(sum.clear_to_polynomial().unwrap(), expected);
        assert_eq!(expected, LaurentPolynomial::one(1));
    }

    #[test]
    fn singleton_sum_is_identity() {
        let x = LocalizedElement::new(&e(&[1, 1]) + &e(&[0, 2]), vec![c(&[0, 1]), c(&[1, -1])])
            .unwrap();
        assert_eq!(sum_localized(std::slice::from_ref(&x)).unwrap(), x);
        assert_eq!(sum_localized(&[]), Err(Error::EmptySum));
    }

    #[test]
    fn clearing() {
        let p = &LaurentPolynomial::one(1) + &e(&[1]);
        assert_eq!(
            LocalizedElement::polynomial(p.clone())
                .clear_to_polynomial()
                .unwrap(),
            p
        );

        // (1 - e^{2t}) / (1 - e^{-(-t)}) = 1 + e^t
        let x =
            LocalizedElement::new(&LaurentPolynomial::one(1) - &e(&[2]), vec![c(&[-1])]).unwrap();
        assert_eq!(x.clear_to_polynomial().unwrap(), p);

        let y = LocalizedElement::new(LaurentPolynomial::one(1), vec![c(&[1])]).unwrap();
        assert!(matches!(
            y.clear_to_polynomial(),
            Err(Error::NotIntegral { .. })
        ));
    }

    #[test]
    fn zero_factor_rejected() {
        assert_eq!(
            LocalizedElement::new(LaurentPolynomial::one(2), vec![c(&[0, 0])]),
            Err(Error::ZeroCharacter)
        );
    }

    #[test]
    fn sign_canonical_preserves_value() {
        let x = LocalizedElement::new(
            &e(&[1, 0]) - &e(&[0, 3]),
            vec![c(&[-1, 2]), c(&[0, -1]), c(&[2, 1])],
        )
        .unwrap();
        let y = x.sign_canonical();
        assert!(y.denominator().iter().all(Character::is_sign_canonical));
        assert!(x.same_value(&y));
    }

    #[test]
    fn display_and_json() {
        let x = LocalizedElement::new(e(&[1]), vec![c(&[1])]).unwrap();
        assert_eq!(x.to_string(), "(1*e[1]) / ((1 - e^-[1]))");
        let s = serde_json::to_string(&x).unwrap();
        let back: LocalizedElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
