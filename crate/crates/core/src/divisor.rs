//! T-Cartier divisors on a fan, their vertex characters, positivity, and
//! the lattice points of the associated polytope.
//!
//! Sign convention: a divisor `D = Σ a_ρ D_ρ` has vertex character `m_σ`
//! on each maximal cone defined by `<m_σ, v_ρ> = -a_ρ` for the rays of `σ`,
//! its fiber at the fixed point of `σ` has weight `e^{m_σ}`, and its
//! polytope is `P_D = {u : <u, v_ρ> ≥ -a_ρ for all ρ}`. With this
//! convention `χ_T(O(D)) = Σ_{m ∈ P_D ∩ M} e^m` for basepoint-free `D`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::Character;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice;

/// Integer coefficients `a_ρ`, one per ray of the fan, in ray order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor {
    coeffs: Vec<i64>,
}

impl Divisor {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Divisor { coeffs }
    }

    pub fn zero(rays: usize) -> Self {
        Divisor {
            coeffs: vec![0; rays],
        }
    }

    /// `k · D_ρ`.
    pub fn prime(rays: usize, ray: usize, k: i64) -> Self {
        let mut coeffs = vec![0; rays];
        coeffs[ray] = k;
        Divisor { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn scaled(&self, k: i64) -> Self {
        Divisor {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    /// Adds the principal divisor whose vertex character is `m` on every
    /// cone: `a_ρ ↦ a_ρ - <m, v_ρ>`. Every `m_σ` moves to `m_σ + m`, and
    /// the polytope is translated by `m`.
    pub fn translate(&self, fan: &Fan, m: &Character) -> Self {
        Divisor {
            coeffs: self
                .coeffs
                .iter()
                .zip(fan.rays())
                .map(|(a, v)| a - m.pair(v))
                .collect(),
        }
    }

    fn check_len(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() != fan.rays().len() {
            return Err(Error::DivisorLength {
                expected: fan.rays().len(),
                found: self.coeffs.len(),
            });
        }
        Ok(())
    }
}

/// The vertex character `m_σ` of each maximal cone, in cone order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub vertices: Vec<Character>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    Ample,
    BasepointFree,
    Neither,
}

impl Positivity {
    pub fn is_basepoint_free(self) -> bool {
        !matches!(self, Positivity::Neither)
    }
}

/// Solves `<m_σ, v_ρ> = -a_ρ` on every maximal cone. Fails with the first
/// cone whose solution is not integral.
pub fn cartier_data(fan: &Fan, d: &Divisor) -> Result<VertexData> {
    d.check_len(fan)?;
    let n = fan.rank();
    let mut vertices = Vec::with_capacity(fan.cones().len());
    for (ci, cone) in fan.cones().iter().enumerate() {
        if !cone.kind().is_simplicial() {
            return Err(Error::NotSimplicial(ci));
        }
        if cone.dim() != n {
            return Err(Error::NotFullDimensional(ci));
        }
        let gens = fan.generators(ci)?;
        let det = lattice::det(&gens);
        let adj = lattice::adjugate(&gens);
        let rhs: Vec<i128> = cone
            .rays()
            .iter()
            .map(|&r| -(d.coeffs[r] as i128))
            .collect();
        let numer: Vec<i128> = (0..n)
            .map(|i| (0..n).map(|j| adj[i][j] * rhs[j]).sum())
            .collect();
        if numer.iter().any(|x| x % det != 0) {
            let solution = numer
                .iter()
                .map(|&x| {
                    let q = BigRational::new(BigInt::from(x), BigInt::from(det));
                    if q.is_integer() {
                        q.numer().to_string()
                    } else {
                        format!("{}/{}", q.numer(), q.denom())
                    }
                })
                .collect();
            return Err(Error::NotCartier { cone: ci, solution });
        }
        vertices.push(Character::new(
            numer
                .iter()
                .map(|&x| lattice::to_i64(x / det))
                .collect::<Vec<_>>(),
        ));
    }
    Ok(VertexData { vertices })
}

/// Basepoint-free iff `<m_σ, v_ρ> ≥ -a_ρ` for every cone and every ray;
/// ample iff moreover strict for every ray outside `σ`.
pub fn positivity_check(fan: &Fan, d: &Divisor) -> Result<Positivity> {
    let data = cartier_data(fan, d)?;
    let mut ample = true;
    for (ci, m) in data.vertices.iter().enumerate() {
        let cone = &fan.cones()[ci];
        for (r, v) in fan.rays().iter().enumerate() {
            let lhs = m.pair(v);
            let rhs = -d.coeffs[r];
            if lhs < rhs {
                return Ok(Positivity::Neither);
            }
            if lhs == rhs && !cone.rays().contains(&r) {
                ample = false;
            }
        }
    }
    Ok(if ample {
        Positivity::Ample
    } else {
        Positivity::BasepointFree
    })
}

/// Lattice points of `P_D`, sorted lexicographically, by scanning the
/// bounding box of the vertex characters (which contains `P_D` for any
/// Cartier `D` on a complete fan).
pub fn polytope_points(fan: &Fan, d: &Divisor) -> Result<Vec<Character>> {
    if !fan.complete() {
        return Err(Error::Incomplete);
    }
    let data = cartier_data(fan, d)?;
    let n = fan.rank();
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    for m in &data.vertices {
        for (k, &x) in m.entries().iter().enumerate() {
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        let u = Character::new(x.clone());
        if fan
            .rays()
            .iter()
            .zip(d.coeffs())
            .all(|(v, &a)| u.pair(v) >= -a)
        {
            out.push(u);
        }
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                return Ok(out);
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}
