use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Character;
use crate::error::{Error, Result};

/// Integer coefficient type. Arithmetic is checked; overflow panics rather
/// than wrapping.
pub type Coeff = i128;

#[inline]
fn cadd(a: Coeff, b: Coeff) -> Coeff {
    a.checked_add(b).expect("coefficient overflow")
}

#[inline]
fn cmul(a: Coeff, b: Coeff) -> Coeff {
    a.checked_mul(b).expect("coefficient overflow")
}

fn accumulate(terms: &mut BTreeMap<Character, Coeff>, m: Character, c: Coeff) {
    if c == 0 {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = cadd(*e.get(), c);
            if s == 0 {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// An element of the representation ring `R(T) = Z[M]`: a finite integer
/// combination of formal exponentials `e^m`.
///
/// Terms are kept in lexicographic order of their exponents and no stored
/// coefficient is zero, so structural equality is ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    rank: usize,
    terms: BTreeMap<Character, Coeff>,
}

impl LaurentPolynomial {
    pub fn zero(rank: usize) -> Self {
        LaurentPolynomial {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, 1)
    }

    pub fn constant(rank: usize, c: Coeff) -> Self {
        Self::monomial(c, Character::zero(rank))
    }

    /// `c * e^m`.
    pub fn monomial(c: Coeff, m: Character) -> Self {
        let mut p = Self::zero(m.rank());
        accumulate(&mut p.terms, m, c);
        p
    }

    /// `e^m`.
    pub fn exp(m: Character) -> Self {
        Self::monomial(1, m)
    }

    /// `1 - e^m`.
    pub fn one_minus_exp(m: &Character) -> Self {
        let mut p = Self::one(m.rank());
        accumulate(&mut p.terms, m.clone(), -1);
        p
    }

    /// Builds a polynomial from `(coefficient, exponent)` pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(rank: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Coeff, Character)>,
    {
        let mut p = Self::zero(rank);
        for (c, m) in terms {
            if m.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: m.rank(),
                });
            }
            accumulate(&mut p.terms, m, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Character, Coeff)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Character) -> Coeff {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Character> + '_ {
        self.terms.keys()
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Character, Coeff)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                accumulate(&mut out.terms, a + b, cmul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: Coeff) -> Self {
        if k == 0 {
            return Self::zero(self.rank);
        }
        LaurentPolynomial {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), cmul(c, k)))
                .collect(),
        }
    }

    /// Multiplies by the unit `e^m`.
    pub fn shift(&self, m: &Character) -> Self {
        assert_eq!(m.rank(), self.rank, "rank mismatch in shift");
        LaurentPolynomial {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, &c)| (e + m, c)).collect(),
        }
    }

    /// The augmentation `R(T) -> Z`, sending every `e^m` to 1.
    pub fn augment(&self) -> Coeff {
        self.terms.values().fold(0, |s, &c| cadd(s, c))
    }

    /// Exact quotient `self / divisor` in `Z[M]`.
    ///
    /// Leading-term elimination under lex order. Since lex is not a
    /// well-order on `Z^n`, every candidate quotient exponent is also
    /// checked against the coordinate box `[min f - min g, max f - max g]`,
    /// which must contain the support of any true quotient; leaving the box
    /// means the division is not exact.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self> {
        self.check_rank(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Self::zero(self.rank));
        }
        let (f_lo, f_hi) = self.bounding_box();
        let (g_lo, g_hi) = divisor.bounding_box();
        let lo: Vec<i64> = f_lo.iter().zip(&g_lo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = f_hi.iter().zip(&g_hi).map(|(a, b)| a - b).collect();

        let mut quotient = BTreeMap::new();
        let mut rem = self.terms.clone();
        while let Some((m, &c)) = rem.iter().next_back() {
            let qm = m - lead_m;
            let inside = qm
                .entries()
                .iter()
                .enumerate()
                .all(|(i, &x)| lo[i] <= x && x <= hi[i]);
            if !inside || c % lead_c != 0 {
                return Err(Error::NotDivisible {
                    remainder: LaurentPolynomial {
                        rank: self.rank,
                        terms: rem,
                    },
                });
            }
            let qc = c / lead_c;
            for (gm, &gc) in &divisor.terms {
                accumulate(&mut rem, gm + &qm, -cmul(qc, gc));
            }
            quotient.insert(qm, qc);
        }
        Ok(LaurentPolynomial {
            rank: self.rank,
            terms: quotient,
        })
    }

    /// Per-coordinate minimum and maximum of the exponents. Panics on zero.
    fn bounding_box(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = vec![i64::MAX; self.rank];
        let mut hi = vec![i64::MIN; self.rank];
        for m in self.terms.keys() {
            for (i, &x) in m.entries().iter().enumerate() {
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        (lo, hi)
    }

    /// Image of `self` in `Z[M/Zu] ≅ Z[M]/(1 - e^u)` for primitive `u`.
    pub fn cyclo_image(&self, u: &Character) -> Result<CycloImage> {
        if u.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: u.rank(),
            });
        }
        if u.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        if !u.is_primitive() {
            return Err(Error::NonPrimitiveCharacter(u.clone()));
        }
        let mut classes: BTreeMap<Vec<i64>, (Character, Coeff)> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let entry = classes
                .entry(coset_key(m, u))
                .or_insert_with(|| (m.clone(), 0));
            entry.1 = cadd(entry.1, c);
        }
        classes.retain(|_, (_, c)| *c != 0);
        Ok(CycloImage {
            modulus: u.clone(),
            classes: classes.into_values().collect(),
        })
    }

    /// Whether `1 - e^u` divides `self`, for primitive `u`.
    pub fn divisible_by_cyclo(&self, u: &Character) -> Result<bool> {
        Ok(self.cyclo_image(u)?.is_zero())
    }

    /// Parses the canonical text form (`c*e[a1,...,an]` terms joined by
    /// ` + ` / ` - `, or `0`).
    pub fn parse(s: &str, rank: usize) -> std::result::Result<Self, ParseError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(rank));
        }
        let mut tokens = s.split_whitespace();
        let mut p = Self::zero(rank);
        let first = tokens
            .next()
            .ok_or_else(|| ParseError::new("empty input"))?;
        let (c, m) = parse_term(first, rank)?;
        accumulate(&mut p.terms, m, c);
        while let Some(op) = tokens.next() {
            let sign = match op {
                "+" => 1,
                "-" => -1,
                other => return Err(ParseError::new(format!("expected + or -, found {other:?}"))),
            };
            let term = tokens
                .next()
                .ok_or_else(|| ParseError::new("dangling operator"))?;
            let (c, m) = parse_term(term, rank)?;
            accumulate(&mut p.terms, m, sign * c);
        }
        Ok(p)
    }
}

/// Coordinates of `m` in `M/Zu`: the 2x2 minors of `(m, u)`. Two characters
/// have equal keys iff their difference lies in `Qu ∩ M = Zu` (u primitive).
fn coset_key(m: &Character, u: &Character) -> Vec<i64> {
    let (a, b) = (m.entries(), u.entries());
    let n = a.len();
    let mut key = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            key.push(a[i] * b[j] - a[j] * b[i]);
        }
    }
    key
}

/// The nonzero residue classes of a polynomial modulo `1 - e^u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloImage {
    pub modulus: Character,
    /// `(representative exponent, coefficient sum)` for each class with a
    /// nonzero sum; the representative is the lex-smallest exponent of the
    /// class occurring in the input.
    pub classes: Vec<(Character, Coeff)>,
}

impl CycloImage {
    pub fn is_zero(&self) -> bool {
        self.classes.is_empty()
    }
}

impl fmt::Display for CycloImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.classes.is_empty() {
            return f.write_str("0");
        }
        write_terms(f, self.classes.iter().map(|(m, c)| (m, *c)))?;
        write!(f, " (mod 1 - e{})", self.modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(String);

impl ParseError {
    fn new(msg: impl Into<String>) -> Self {
        ParseError(msg.into())
    }
}

fn parse_term(tok: &str, rank: usize) -> std::result::Result<(Coeff, Character), ParseError> {
    let (c, rest) = tok
        .split_once("*e[")
        .ok_or_else(|| ParseError::new(format!("malformed term {tok:?}")))?;
    let inner = rest
        .strip_suffix(']')
        .ok_or_else(|| ParseError::new(format!("malformed term {tok:?}")))?;
    let c: Coeff = c
        .parse()
        .map_err(|_| ParseError::new(format!("bad coefficient in {tok:?}")))?;
    let m: Vec<i64> = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|x| x.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| ParseError::new(format!("bad exponent in {tok:?}")))?
    };
    if m.len() != rank {
        return Err(ParseError::new(format!(
            "exponent of rank {} in {tok:?}, expected {rank}",
            m.len()
        )));
    }
    Ok((c, Character::new(m)))
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Character, Coeff)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        if first {
            write!(f, "{c}*e{m}")?;
            first = false;
        } else if c < 0 {
            write!(f, " - {}*e{m}", c.unsigned_abs())?;
        } else {
            write!(f, " + {c}*e{m}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    c: Coeff,
    m: Character,
}

#[derive(Serialize, Deserialize)]
struct LaurentRecord {
    rank: usize,
    terms: Vec<TermRecord>,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRecord {
            rank: self.rank,
            terms: self
                .terms()
                .map(|(m, c)| TermRecord { c, m: m.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = LaurentRecord::deserialize(d)?;
        LaurentPolynomial::from_terms(rec.rank, rec.terms.into_iter().map(|t| (t.c, t.m)))
            .map_err(serde::de::Error::custom)
    }
}

// Operator forms panic on rank mismatch; use the `try_*` methods to recover.

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_add(rhs).expect("rank mismatch")
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_sub(rhs).expect("rank mismatch")
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_mul(rhs).expect("rank mismatch")
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        self.scale(-1)
    }
}
