//! Rational polyhedral fans in `N = Z^n`: validation, completeness, cone
//! classification, walls, dual cones and fundamental-parallelepiped points.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::algebra::Character;
use crate::error::{Error, Result};
use crate::lattice::{self, combinations};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    /// Full-dimensional with unimodular generators.
    Smooth,
    /// Linearly independent generators; `multiplicity` is the lattice index.
    Simplicial {
        multiplicity: u64,
    },
    NonSimplicial,
}

impl ConeKind {
    pub fn is_simplicial(self) -> bool {
        !matches!(self, ConeKind::NonSimplicial)
    }

    /// Multiplicity of a simplicial cone (1 when smooth).
    pub fn multiplicity(self) -> Option<u64> {
        match self {
            ConeKind::Smooth => Some(1),
            ConeKind::Simplicial { multiplicity } => Some(multiplicity),
            ConeKind::NonSimplicial => None,
        }
    }
}

/// Classifies the cone spanned by `generators` in `Z^n`.
pub fn classify_cone(generators: &[Vec<i64>], n: usize) -> (usize, ConeKind) {
    let dim = lattice::rank(generators);
    if dim != generators.len() {
        return (dim, ConeKind::NonSimplicial);
    }
    let index = lattice::lattice_index(generators, n).unsigned_abs() as u64;
    let kind = if dim == n && index == 1 {
        ConeKind::Smooth
    } else {
        ConeKind::Simplicial {
            multiplicity: index,
        }
    };
    (dim, kind)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    rays: Vec<usize>,
    dim: usize,
    kind: ConeKind,
}

impl Cone {
    /// Ray indices, in the order given at construction.
    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }
}

/// A shared codimension-one face of two maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    /// The two maximal cones, smaller index first.
    pub cones: (usize, usize),
    /// Sorted ray indices spanning the wall.
    pub rays: Vec<usize>,
    /// Primitive character vanishing on the wall, first nonzero entry positive.
    pub perp: Character,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Cone>,
    complete: bool,
}

impl Fan {
    /// Validates raw fan data: primitive rays of the right length, sane
    /// cone index lists, no dangling rays, and no two full-dimensional
    /// simplicial cones with overlapping interiors.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        if rank == 0 {
            return Err(Error::RankMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::InvalidRay {
                    index: i,
                    reason: format!("has length {}, fan rank is {rank}", r.len()),
                });
            }
            let c = Character::new(r.clone());
            if c.is_zero() {
                return Err(Error::InvalidRay {
                    index: i,
                    reason: "zero vector".into(),
                });
            }
            if !c.is_primitive() {
                return Err(Error::InvalidRay {
                    index: i,
                    reason: format!("{c} is not primitive (gcd {})", c.content()),
                });
            }
        }
        if let Some(i) = (0..rays.len()).find(|&i| (0..i).any(|j| rays[j] == rays[i])) {
            return Err(Error::InvalidRay {
                index: i,
                reason: "duplicate ray".into(),
            });
        }

        let mut cones = Vec::with_capacity(max_cones.len());
        for (ci, idx) in max_cones.into_iter().enumerate() {
            if idx.is_empty() {
                return Err(Error::InvalidCone {
                    index: ci,
                    reason: "no rays".into(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&r| r >= rays.len()) {
                return Err(Error::InvalidCone {
                    index: ci,
                    reason: format!("ray index {bad} out of range"),
                });
            }
            if idx.iter().collect::<BTreeSet<_>>().len() != idx.len() {
                return Err(Error::InvalidCone {
                    index: ci,
                    reason: "repeated ray index".into(),
                });
            }
            let gens: Vec<Vec<i64>> = idx.iter().map(|&r| rays[r].clone()).collect();
            let opposite = gens
                .iter()
                .any(|a| gens.iter().any(|b| a.iter().zip(b).all(|(x, y)| *x == -*y)));
            if opposite {
                return Err(Error::InvalidCone {
                    index: ci,
                    reason: "contains a ray and its negative (not strictly convex)".into(),
                });
            }
            let (dim, kind) = classify_cone(&gens, rank);
            cones.push(Cone {
                rays: idx,
                dim,
                kind,
            });
        }

        let mut used = vec![false; rays.len()];
        for c in &cones {
            for &r in &c.rays {
                used[r] = true;
            }
        }
        if let Some(r) = used.iter().position(|u| !u) {
            return Err(Error::DanglingRay(r));
        }

        let mut fan = Fan {
            rank,
            rays,
            cones,
            complete: false,
        };
        fan.check_overlaps()?;
        fan.complete = fan.is_complete().unwrap_or(false);
        Ok(fan)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, i: usize) -> Result<&Cone> {
        self.cones.get(i).ok_or(Error::NoSuchCone(i))
    }

    /// Set at validation when [`Fan::is_complete`] succeeds.
    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn generators(&self, cone: usize) -> Result<Vec<Vec<i64>>> {
        Ok(self
            .cone(cone)?
            .rays
            .iter()
            .map(|&r| self.rays[r].clone())
            .collect())
    }

    fn is_full_simplicial(&self, c: &Cone) -> bool {
        c.dim == self.rank && c.kind.is_simplicial()
    }

    fn check_overlaps(&self) -> Result<()> {
        for i in 0..self.cones.len() {
            if !self.is_full_simplicial(&self.cones[i]) {
                continue;
            }
            for j in i + 1..self.cones.len() {
                if !self.is_full_simplicial(&self.cones[j]) {
                    continue;
                }
                if !self.separated(i, j) {
                    return Err(Error::Overlap(i, j));
                }
            }
        }
        Ok(())
    }

    /// Whether some nonzero `y` is `≥ 0` on cone `a` and `≤ 0` on cone `b`.
    ///
    /// The set of such `y` is a pointed polyhedral cone, so if nonzero it has
    /// an extreme ray cut out by `rank - 1` independent tight constraints;
    /// all such candidates are enumerated.
    fn separated(&self, a: usize, b: usize) -> bool {
        let mut constraints: Vec<Vec<i64>> = Vec::new();
        for &r in &self.cones[a].rays {
            constraints.push(self.rays[r].clone());
        }
        for &r in &self.cones[b].rays {
            constraints.push(self.rays[r].iter().map(|x| -x).collect());
        }
        let n = self.rank;
        for subset in combinations(constraints.len(), n - 1) {
            let rows: Vec<Vec<i64>> = subset.iter().map(|&i| constraints[i].clone()).collect();
            if lattice::rank(&rows) != n - 1 {
                continue;
            }
            let y = Character::new(lattice::primitive_perp(&rows, n));
            for cand in [y.clone(), -y] {
                if constraints.iter().all(|c| cand.pair(c) >= 0) {
                    return true;
                }
            }
        }
        false
    }

    /// Codimension-one faces of a full-dimensional maximal cone, as sorted
    /// ray index lists.
    fn facets(&self, ci: usize) -> Vec<Vec<usize>> {
        let cone = &self.cones[ci];
        let n = self.rank;
        if cone.kind.is_simplicial() {
            return combinations(cone.rays.len(), n - 1)
                .into_iter()
                .map(|s| {
                    let mut f: Vec<usize> = s.into_iter().map(|i| cone.rays[i]).collect();
                    f.sort();
                    f
                })
                .collect();
        }
        // Non-simplicial: a facet is the set of rays on a supporting
        // hyperplane spanned by n - 1 of them.
        let mut out = BTreeSet::new();
        for s in combinations(cone.rays.len(), n - 1) {
            let rows: Vec<Vec<i64>> = s.iter().map(|&i| self.rays[cone.rays[i]].clone()).collect();
            if lattice::rank(&rows) != n - 1 {
                continue;
            }
            let y = Character::new(lattice::primitive_perp(&rows, n));
            let vals: Vec<i64> = cone.rays.iter().map(|&r| y.pair(&self.rays[r])).collect();
            if vals.iter().all(|&v| v >= 0) || vals.iter().all(|&v| v <= 0) {
                let mut f: Vec<usize> = cone
                    .rays
                    .iter()
                    .zip(&vals)
                    .filter(|(_, &v)| v == 0)
                    .map(|(&r, _)| r)
                    .collect();
                f.sort();
                out.insert(f);
            }
        }
        out.into_iter().collect()
    }

    /// Facet -> maximal cones containing it, over full-dimensional cones.
    fn facet_incidence(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut map: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for ci in 0..self.cones.len() {
            if self.cones[ci].dim != self.rank {
                continue;
            }
            for f in self.facets(ci) {
                map.entry(f).or_default().push(ci);
            }
        }
        map
    }

    /// True iff every facet of every maximal cone is shared with exactly one
    /// other maximal cone and the adjacency graph is connected. Requires all
    /// maximal cones to be full-dimensional and simplicial.
    pub fn is_complete(&self) -> Result<bool> {
        for (i, c) in self.cones.iter().enumerate() {
            if !c.kind.is_simplicial() {
                return Err(Error::NotSimplicial(i));
            }
            if c.dim != self.rank {
                return Err(Error::NotFullDimensional(i));
            }
        }
        let incidence = self.facet_incidence();
        if incidence.values().any(|cs| cs.len() != 2) {
            return Ok(false);
        }
        let mut adj = vec![Vec::new(); self.cones.len()];
        for cs in incidence.values() {
            adj[cs[0]].push(cs[1]);
            adj[cs[1]].push(cs[0]);
        }
        let mut seen = vec![false; self.cones.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        Ok(seen.iter().all(|&s| s))
    }

    fn make_wall(&self, rays: Vec<usize>, a: usize, b: usize) -> Wall {
        let rows: Vec<Vec<i64>> = rays.iter().map(|&r| self.rays[r].clone()).collect();
        let perp = Character::new(lattice::primitive_perp(&rows, self.rank)).sign_canonical();
        Wall {
            cones: (a.min(b), a.max(b)),
            rays,
            perp,
        }
    }

    /// Walls between maximal cones, asserting that every facet is paired.
    pub fn walls(&self) -> Result<Vec<Wall>> {
        if let Some(i) = self.cones.iter().position(|c| c.dim != self.rank) {
            return Err(Error::NotFullDimensional(i));
        }
        let mut walls = Vec::new();
        for (rays, cs) in self.facet_incidence() {
            if cs.len() != 2 {
                return Err(Error::UnpairedFacet {
                    cone: cs[0],
                    rays,
                    count: cs.len() - 1,
                });
            }
            walls.push(self.make_wall(rays, cs[0], cs[1]));
        }
        walls.sort_by(|x, y| (x.cones, &x.rays).cmp(&(y.cones, &y.rays)));
        Ok(walls)
    }

    /// All facets shared by exactly two maximal cones, without asserting
    /// completeness.
    pub fn interior_walls(&self) -> Vec<Wall> {
        let mut walls: Vec<Wall> = self
            .facet_incidence()
            .into_iter()
            .filter(|(_, cs)| cs.len() == 2)
            .map(|(rays, cs)| self.make_wall(rays, cs[0], cs[1]))
            .collect();
        walls.sort_by(|x, y| (x.cones, &x.rays).cmp(&(y.cones, &y.rays)));
        walls
    }

    /// Dual generators of a full-dimensional simplicial maximal cone; see
    /// [`dual_generators`].
    pub fn dual_generators(&self, cone: usize) -> Result<Vec<Character>> {
        let c = self.cone(cone)?;
        if !c.kind.is_simplicial() {
            return Err(Error::NotSimplicial(cone));
        }
        if c.dim != self.rank {
            return Err(Error::NotFullDimensional(cone));
        }
        dual_generators(&self.generators(cone)?)
    }
}

/// Primitive generators `u_1..u_n` of the dual of the simplicial cone with
/// the given `n` generators, ordered so `<u_i, v_j>` is zero for `i ≠ j`
/// and positive for `i = j`.
pub fn dual_generators(generators: &[Vec<i64>]) -> Result<Vec<Character>> {
    let n = generators.len();
    if n == 0 || generators.iter().any(|g| g.len() != n) {
        return Err(Error::DependentGenerators);
    }
    let d = lattice::det(generators);
    if d == 0 {
        return Err(Error::DependentGenerators);
    }
    let adj = lattice::adjugate(generators);
    let sign = d.signum();
    Ok((0..n)
        .map(|i| {
            let col: Vec<i64> = (0..n).map(|k| lattice::to_i64(sign * adj[k][i])).collect();
            Character::new(col).primitive()
        })
        .collect())
}

/// Lattice points `Σ c_i u_i` with every `c_i ∈ [0, 1)`, sorted
/// lexicographically. There are `|det(u)|` of them.
pub fn box_points(generators: &[Character]) -> Result<Vec<Character>> {
    let n = generators.len();
    if n == 0 || generators.iter().any(|g| g.rank() != n) {
        return Err(Error::DependentGenerators);
    }
    let rows: Vec<Vec<i64>> = generators.iter().map(|g| g.entries().to_vec()).collect();
    let d = lattice::det(&rows);
    if d == 0 {
        return Err(Error::DependentGenerators);
    }
    let adj = lattice::adjugate(&rows);

    // Bounding box of the parallelepiped.
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for g in generators {
        for (k, &x) in g.entries().iter().enumerate() {
            if x < 0 {
                lo[k] += x;
            } else {
                hi[k] += x;
            }
        }
    }

    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        // c = x · adj / det; keep when every c_i ∈ [0, 1).
        let inside = (0..n).all(|i| {
            let s: i128 = (0..n).map(|k| x[k] as i128 * adj[k][i]).sum();
            if d > 0 {
                0 <= s && s < d
            } else {
                d < s && s <= 0
            }
        });
        if inside {
            out.push(Character::new(x.clone()));
        }
        // Odometer step.
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
