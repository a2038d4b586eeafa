use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// An element of the character lattice `M ≅ Z^n`.
///
/// Ordering is lexicographic on the entries, which is the monomial order used
/// throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(Vec<i64>);

impl Character {
    pub fn new(entries: impl Into<Vec<i64>>) -> Self {
        Character(entries.into())
    }

    pub fn zero(rank: usize) -> Self {
        Character(vec![0; rank])
    }

    /// The `i`-th standard basis vector of `Z^rank`.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Character(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divides out the content. The zero vector is returned unchanged.
    pub fn primitive(&self) -> Character {
        let g = self.content();
        if g <= 1 {
            return self.clone();
        }
        Character(self.0.iter().map(|x| x / g).collect())
    }

    /// True when the first nonzero entry is positive.
    pub fn is_sign_canonical(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0)
    }

    /// `self` or `-self`, whichever has a positive first nonzero entry.
    pub fn sign_canonical(&self) -> Character {
        if self.is_sign_canonical() {
            self.clone()
        } else {
            -self
        }
    }

    /// Pairing with a vector of the dual lattice `N`.
    pub fn pair(&self, v: &[i64]) -> i64 {
        debug_assert_eq!(self.0.len(), v.len());
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> Character {
        Character(self.0.iter().map(|x| x * k).collect())
    }
}

impl From<Vec<i64>> for Character {
    fn from(v: Vec<i64>) -> Self {
        Character(v)
    }
}

impl<const N: usize> From<[i64; N]> for Character {
    fn from(v: [i64; N]) -> Self {
        Character(v.to_vec())
    }
}

impl Add for &Character {
    type Output = Character;

    fn add(self, rhs: &Character) -> Character {
        debug_assert_eq!(self.rank(), rhs.rank());
        Character(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Character {
    type Output = Character;

    fn sub(self, rhs: &Character) -> Character {
        debug_assert_eq!(self.rank(), rhs.rank());
        Character(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Character {
    type Output = Character;

    fn neg(self) -> Character {
        Character(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for Character {
    type Output = Character;

    fn neg(self) -> Character {
        -&self
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}
