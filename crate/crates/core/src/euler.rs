//! Equivariant and classical Euler characteristics by fixed-point
//! localization, and the lattice-point comparison for basepoint-free
//! divisors.

use crate::algebra::{sum_localized, Character, Coeff, LaurentPolynomial};
use crate::divisor::{cartier_data, polytope_points, positivity_check, Divisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::multiplicity::em_k;
use crate::pexp::PiecewiseExponential;

/// Fiber characters `χ_1(σ), …, χ_r(σ)` of a rank `r` equivariant bundle at
/// each fixed point, in cone order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointBundleData {
    rank: usize,
    weights: Vec<Vec<Character>>,
}

impl FixedPointBundleData {
    /// Fails unless every cone carries exactly `rank` characters.
    pub fn new(rank: usize, weights: Vec<Vec<Character>>) -> Result<Self> {
        if let Some((ci, w)) = weights.iter().enumerate().find(|(_, w)| w.len() != rank) {
            return Err(Error::BundleData(format!(
                "cone {ci} has {} characters, expected {rank}",
                w.len()
            )));
        }
        Ok(FixedPointBundleData { rank, weights })
    }

    /// Trivial bundle of rank `r` with trivial action.
    pub fn trivial(fan: &Fan, r: usize) -> Self {
        FixedPointBundleData {
            rank: r,
            weights: vec![vec![Character::zero(fan.rank()); r]; fan.cones().len()],
        }
    }

    /// Line bundle `O(D)`: the single character `m_σ` on each cone.
    pub fn from_divisor(fan: &Fan, d: &Divisor) -> Result<Self> {
        let data = cartier_data(fan, d)?;
        Ok(FixedPointBundleData {
            rank: 1,
            weights: data.vertices.into_iter().map(|m| vec![m]).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weights(&self) -> &[Vec<Character>] {
        &self.weights
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.weights.len() != other.weights.len() {
            return Err(Error::ValueCount {
                expected: self.weights.len(),
                found: other.weights.len(),
            });
        }
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Ok(FixedPointBundleData {
            rank: self.rank + other.rank,
            weights,
        })
    }

    /// `Σ_i e^{χ_i(σ)}` on each cone.
    pub fn characters(&self, fan: &Fan) -> Result<Vec<LaurentPolynomial>> {
        if self.weights.len() != fan.cones().len() {
            return Err(Error::ValueCount {
                expected: fan.cones().len(),
                found: self.weights.len(),
            });
        }
        self.weights
            .iter()
            .map(|ws| {
                ws.iter()
                    .try_fold(LaurentPolynomial::zero(fan.rank()), |acc, w| {
                        if w.rank() != fan.rank() {
                            return Err(Error::RankMismatch {
                                expected: fan.rank(),
                                found: w.rank(),
                            });
                        }
                        acc.try_add(&LaurentPolynomial::exp(w.clone()))
                    })
            })
            .collect()
    }
}

/// `χ_T(O(D))` as the pushforward of the divisor's piecewise exponential.
pub fn chi_t_divisor(fan: &Fan, d: &Divisor) -> Result<LaurentPolynomial> {
    PiecewiseExponential::from_divisor(fan, d)?.pushforward_to_point()
}

/// `χ_T(E) = Σ_σ (Σ_i e^{χ_i(σ)}) · em^K_σ`. The data is not checked for
/// compatibility across walls; inconsistent data shows up as
/// [`Error::NotIntegral`].
pub fn chi_t_bundle(fan: &Fan, data: &FixedPointBundleData) -> Result<LaurentPolynomial> {
    if !fan.complete() {
        return Err(Error::Incomplete);
    }
    let terms = data
        .characters(fan)?
        .iter()
        .enumerate()
        .map(|(ci, f)| em_k(fan, ci)?.mul_polynomial(f))
        .collect::<Result<Vec<_>>>()?;
    sum_localized(&terms)?.clear_to_polynomial()
}

pub fn chi_classical(fan: &Fan, d: &Divisor) -> Result<Coeff> {
    Ok(chi_t_divisor(fan, d)?.augment())
}

pub fn chi_classical_bundle(fan: &Fan, data: &FixedPointBundleData) -> Result<Coeff> {
    Ok(chi_t_bundle(fan, data)?.augment())
}

/// Both sides of `χ_T(O(D)) = Σ_{m ∈ P_D ∩ M} e^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrionReport {
    pub localization: LaurentPolynomial,
    pub oracle: LaurentPolynomial,
    pub points: usize,
    pub agree: bool,
}

/// Lattice-point generating function of `P_D`.
pub fn polytope_sum(fan: &Fan, d: &Divisor) -> Result<(LaurentPolynomial, usize)> {
    let pts = polytope_points(fan, d)?;
    let n = pts.len();
    let sum = LaurentPolynomial::from_terms(fan.rank(), pts.into_iter().map(|m| (1, m)))?;
    Ok((sum, n))
}

/// Compares localization against the polytope sum. Refuses divisors that
/// are not basepoint-free.
pub fn brion_check(fan: &Fan, d: &Divisor) -> Result<BrionReport> {
    if !positivity_check(fan, d)?.is_basepoint_free() {
        return Err(Error::NotBasepointFree);
    }
    let localization = chi_t_divisor(fan, d)?;
    let (oracle, points) = polytope_sum(fan, d)?;
    let agree = localization == oracle;
    Ok(BrionReport {
        localization,
        oracle,
        points,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(m: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::exp(Character::new(m.to_vec()))
    }

    #[test]
    fn projective_line() {
        let fan = catalog::p1();
        let d = Divisor::prime(2, 1, 1);
        assert_eq!(
            chi_t_divisor(&fan, &d).unwrap().to_string(),
            "1*e[0] + 1*e[1]"
        );
        assert_eq!(chi_classical(&fan, &d).unwrap(), 2);
        assert!(brion_check(&fan, &d).unwrap().agree);
    }

    #[test]
    fn projective_plane() {
        let fan = catalog::projective_space(2);
        let h = Divisor::prime(3, 2, 1);
        let one = LaurentPolynomial::one(2);
        assert_eq!(
            chi_t_divisor(&fan, &h).unwrap(),
            &(&one + &e(&[1, 0])) + &e(&[0, 1])
        );
        let r = brion_check(&fan, &h.scaled(2)).unwrap();
        assert!(r.agree);
        assert_eq!(r.points, 6);
        assert_eq!(chi_classical(&fan, &h.scaled(2)).unwrap(), 6);
    }

    #[test]
    fn zero_divisor_gives_one() {
        for fan in [
            catalog::p112(),
            catalog::hirzebruch(1),
            catalog::projective_space(3),
        ] {
            let d = Divisor::zero(fan.rays().len());
            assert_eq!(
                chi_t_divisor(&fan, &d).unwrap(),
                LaurentPolynomial::one(fan.rank())
            );
            assert_eq!(chi_classical(&fan, &d).unwrap(), 1);
        }
    }

    #[test]
    fn weighted_projective_plane() {
        let fan = catalog::p112();
        let d = Divisor::new(vec![0, 0, 2]);
        let r = brion_check(&fan, &d).unwrap();
        assert!(r.agree);
        let expect = LaurentPolynomial::from_terms(
            2,
            [[0, 0], [1, 0], [2, 0], [0, 1]].map(|m| (1, Character::from(m))),
        )
        .unwrap();
        assert_eq!(r.localization, expect);
        assert!(matches!(
            chi_t_divisor(&fan, &Divisor::new(vec![0, 0, 1])),
            Err(Error::NotCartier { .. })
        ));
    }

    #[test]
    fn bundle_sums() {
        let fan = catalog::p1();
        let data = FixedPointBundleData::new(
            2,
            vec![
                vec![Character::from([0]), Character::from([0])],
                vec![Character::from([0]), Character::from([1])],
            ],
        )
        .unwrap();
        assert_eq!(
            chi_t_bundle(&fan, &data).unwrap(),
            &LaurentPolynomial::constant(1, 2) + &e(&[1])
        );
        assert_eq!(chi_classical_bundle(&fan, &data).unwrap(), 3);
    }

    #[test]
    fn trivial_bundle_gives_rank() {
        let fan = catalog::hirzebruch(2);
        let data = FixedPointBundleData::trivial(&fan, 3);
        assert_eq!(
            chi_t_bundle(&fan, &data).unwrap(),
            LaurentPolynomial::constant(2, 3)
        );
    }

    #[test]
    fn line_bundle_data_matches_divisor() {
        let fan = catalog::hirzebruch(2);
        let d = Divisor::new(vec![1, 0, 2, 1]);
        let data = FixedPointBundleData::from_divisor(&fan, &d).unwrap();
        assert_eq!(
            chi_t_bundle(&fan, &data).unwrap(),
            chi_t_divisor(&fan, &d).unwrap()
        );
    }

    #[test]
    fn inconsistent_bundle_data_is_not_integral() {
        let p2 = catalog::projective_space(2);
        let mut w = FixedPointBundleData::trivial(&p2, 1).weights().to_vec();
        w[0][0] = Character::from([1, 1]);
        let broken = FixedPointBundleData::new(1, w).unwrap();
        assert!(matches!(
            chi_t_bundle(&p2, &broken),
            Err(Error::NotIntegral { .. })
        ));
    }

    #[test]
    fn ragged_bundle_data_rejected() {
        assert!(matches!(
            FixedPointBundleData::new(2, vec![vec![Character::from([0])]]),
            Err(Error::BundleData(_))
        ));
    }

    #[test]
    fn non_basepoint_free_refused() {
        let fan = catalog::p1();
        assert_eq!(
            brion_check(&fan, &Divisor::prime(2, 1, -2)),
            Err(Error::NotBasepointFree)
        );
    }
}
