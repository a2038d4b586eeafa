use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{Character, LaurentPolynomial};
use crate::error::{Error, Result};

/// A polynomial in the weight symbols `t_1..t_n` with exact rational
/// coefficients. Exponent vectors are keys; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    rank: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

fn add_term(terms: &mut BTreeMap<Vec<u32>, BigRational>, e: Vec<u32>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl RatPoly {
    pub fn zero(rank: usize) -> Self {
        RatPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: BigRational) -> Self {
        let mut p = Self::zero(rank);
        add_term(&mut p.terms, vec![0; rank], c);
        p
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigRational::one())
    }

    /// `c * t^e`.
    pub fn monomial(c: BigRational, exponent: Vec<u32>) -> Self {
        let mut p = Self::zero(exponent.len());
        add_term(&mut p.terms, exponent, c);
        p
    }

    /// The linear form `Σ m_i t_i`.
    pub fn linear_form(m: &Character) -> Self {
        let rank = m.rank();
        let mut p = Self::zero(rank);
        for (i, &x) in m.entries().iter().enumerate() {
            let mut e = vec![0; rank];
            e[i] = 1;
            add_term(&mut p.terms, e, BigRational::from_integer(x.into()));
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponent: &[u32]) -> BigRational {
        self.terms
            .get(exponent)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Total degree of the leading part; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The degree-`d` homogeneous component.
    pub fn component(&self, d: u32) -> RatPoly {
        RatPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        RatPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_term(&mut out.terms, e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut out = Self::zero(self.rank);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                add_term(&mut out.terms, e, ca * cb);
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when there is a remainder.
    pub fn div_exact(&self, divisor: &RatPoly) -> Option<RatPoly> {
        assert_eq!(self.rank, divisor.rank, "rank mismatch");
        let (lead_e, lead_c) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.rank);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            rem = rem.sub(&divisor.mul(&RatPoly::monomial(qc.clone(), qe.clone())));
            add_term(&mut quot.terms, qe, qc);
        }
        Some(quot)
    }

    pub fn pow(&self, k: u32) -> RatPoly {
        let mut acc = Self::one(self.rank);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for RatPoly {
    /// Graded order, highest degree first, lex-descending within a degree:
    /// `2*t1 - t2`, `1/2*t1^2 + t1*t2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let constant = e.iter().all(|&x| x == 0);
            if constant || !abs.is_one() {
                write_rational(f, &abs)?;
                if !constant {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "t{}", j + 1)?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// A truncated element of the completed ring `Q[[t_1..t_n]]`: homogeneous
/// components of degrees `0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    rank: usize,
    components: Vec<RatPoly>,
}

impl GradedSeries {
    pub fn zero(rank: usize, order: usize) -> Self {
        GradedSeries {
            rank,
            components: vec![RatPoly::zero(rank); order + 1],
        }
    }

    pub fn one(rank: usize, order: usize) -> Self {
        let mut s = Self::zero(rank, order);
        s.components[0] = RatPoly::one(rank);
        s
    }

    /// Builds a series from its homogeneous components, degree 0 first.
    pub fn from_components(rank: usize, components: Vec<RatPoly>) -> Self {
        assert!(
            !components.is_empty(),
            "a series needs a degree-0 component"
        );
        for (d, c) in components.iter().enumerate() {
            assert_eq!(c.rank(), rank, "rank mismatch");
            assert!(
                c.is_zero() || (c.is_homogeneous() && c.degree() == Some(d as u32)),
                "component {d} is not homogeneous of degree {d}"
            );
        }
        GradedSeries { rank, components }
    }

    /// Splits a polynomial by degree, dropping everything above `order`.
    pub fn from_poly(p: &RatPoly, order: usize) -> Self {
        let mut s = Self::zero(p.rank(), order);
        for (e, c) in p.terms() {
            let d = e.iter().sum::<u32>() as usize;
            if d <= order {
                add_term(&mut s.components[d].terms, e.to_vec(), c.clone());
            }
        }
        s
    }

    /// `Σ_k coeffs[k] * (λ·t)^k`, truncated at `order`.
    pub fn from_univariate(coeffs: &[BigRational], lambda: &Character, order: usize) -> Self {
        let rank = lambda.rank();
        let form = RatPoly::linear_form(lambda);
        let mut s = Self::zero(rank, order);
        let mut power = RatPoly::one(rank);
        for (k, c) in coeffs.iter().enumerate().take(order + 1) {
            s.components[k] = power.scale(c);
            power = power.mul(&form);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[RatPoly] {
        &self.components
    }

    pub fn component(&self, d: usize) -> &RatPoly {
        &self.components[d]
    }

    /// Lowest degree with a nonzero component, if any within the order.
    pub fn valuation(&self) -> Option<usize> {
        self.components.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        GradedSeries {
            rank: self.rank,
            components: self.components[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let order = self.order().min(other.order());
        GradedSeries {
            rank: self.rank,
            components: (0..=order)
                .map(|d| self.components[d].add(&other.components[d]))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        GradedSeries {
            rank: self.rank,
            components: self.components.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let order = self.order().min(other.order());
        let mut out = Self::zero(self.rank, order);
        for i in 0..=order {
            if self.components[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.components[j].is_zero() {
                    continue;
                }
                out.components[i + j] =
                    out.components[i + j].add(&self.components[i].mul(&other.components[j]));
            }
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.components[0].coeff(&vec![0; self.rank]);
        if c0.is_zero() {
            return None;
        }
        let inv_c0 = c0.recip();
        let order = self.order();
        let mut out = Self::zero(self.rank, order);
        out.components[0] = RatPoly::constant(self.rank, inv_c0.clone());
        for d in 1..=order {
            let mut acc = RatPoly::zero(self.rank);
            for j in 1..=d {
                acc = acc.add(&self.components[j].mul(&out.components[d - j]));
            }
            out.components[d] = acc.scale(&-inv_c0.clone());
        }
        Some(out)
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for c in self.components.iter().filter(|c| !c.is_zero()) {
            if wrote {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O({})", self.order() + 1)
    }
}

#[derive(Serialize)]
pub(crate) struct SeriesTerm {
    c: String,
    t: Vec<u32>,
}

#[derive(Serialize)]
struct SeriesComponent {
    degree: usize,
    terms: Vec<SeriesTerm>,
}

pub(crate) fn rational_string(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn poly_terms_record(p: &RatPoly) -> Vec<SeriesTerm> {
    p.terms()
        .map(|(e, c)| SeriesTerm {
            c: rational_string(c),
            t: e.to_vec(),
        })
        .collect()
}

impl Serialize for GradedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let components: Vec<SeriesComponent> = self
            .components
            .iter()
            .enumerate()
            .map(|(degree, p)| SeriesComponent {
                degree,
                terms: poly_terms_record(p),
            })
            .collect();
        let mut st = s.serialize_struct("GradedSeries", 3)?;
        st.serialize_field("rank", &self.rank)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("components", &components)?;
        st.end()
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Degree-`d` component of the exponential substitution of `f`:
/// `Σ_m c_m (m·t)^d / d!`.
pub(crate) fn exp_component(f: &LaurentPolynomial, d: usize) -> RatPoly {
    let rank = f.rank();
    let mut acc = RatPoly::zero(rank);
    for (m, c) in f.terms() {
        let p = RatPoly::linear_form(m).pow(d as u32);
        acc = acc.add(&p.scale(&BigRational::from_integer(BigInt::from(c))));
    }
    acc.scale(&BigRational::new(BigInt::one(), factorial(d)))
}

/// Replaces each `e^m` by `Σ_{k≤N} (m·t)^k / k!`.
pub fn exp_expand(f: &LaurentPolynomial, order: usize) -> GradedSeries {
    GradedSeries {
        rank: f.rank(),
        components: (0..=order).map(|d| exp_component(f, d)).collect(),
    }
}

/// Coefficients of `x / (1 - e^{-x})` through `x^order`, by inverting
/// `(1 - e^{-x}) / x = Σ (-1)^k x^k / (k+1)!`.
pub(crate) fn todd_coefficients(order: usize) -> Vec<BigRational> {
    let quotient: Vec<BigRational> = (0..=order)
        .map(|k| {
            let sign = if k % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            BigRational::new(sign, factorial(k + 1))
        })
        .collect();
    let mut inv = vec![BigRational::zero(); order + 1];
    inv[0] = BigRational::one();
    for d in 1..=order {
        let mut acc = BigRational::zero();
        for j in 1..=d {
            acc += &quotient[j] * &inv[d - j];
        }
        inv[d] = -acc;
    }
    inv
}

/// `Π_λ λ / (1 - e^{-λ})`, truncated at `order`.
pub fn todd_series(weights: &[Character], rank: usize, order: usize) -> Result<GradedSeries> {
    let coeffs = todd_coefficients(order);
    let mut acc = GradedSeries::one(rank, order);
    for w in weights {
        if w.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: w.rank(),
            });
        }
        if w.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        acc = acc.mul(&GradedSeries::from_univariate(&coeffs, w, order));
    }
    Ok(acc)
}
