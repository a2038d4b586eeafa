//! Standard fans, plus a generator of random complete simplicial fans in
//! the plane.

use std::cmp::Ordering;

use rand::Rng;

use crate::fan::Fan;

fn build(rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Fan {
    Fan::new(rank, rays, cones).expect("catalog fan is valid")
}

/// `P¹`: rays `+1` and `-1`.
pub fn p1() -> Fan {
    build(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]])
}

/// `Pⁿ`: rays `e_1..e_n, -(e_1+…+e_n)`; every `n`-subset is a maximal cone.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n)
        .map(|skip| (0..=n).filter(|&r| r != skip).collect())
        .collect();
    build(n, rays, cones)
}

pub fn p1xp1() -> Fan {
    build(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// Hirzebruch surface `F_a`.
pub fn hirzebruch(a: i64) -> Fan {
    build(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
}

/// Weighted projective plane `P(1,1,2)`: rays `(1,0), (0,1), (-1,-2)`.
pub fn p112() -> Fan {
    build(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
}

/// Face fan of the cube `[-1,1]³`: six non-simplicial maximal cones.
pub fn cube_fan() -> Fan {
    let mut rays = Vec::new();
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                rays.push(vec![x, y, z]);
            }
        }
    }
    let mut cones = Vec::new();
    for axis in 0..3 {
        for sign in [-1, 1] {
            cones.push((0..rays.len()).filter(|&i| rays[i][axis] == sign).collect());
        }
    }
    build(3, rays, cones)
}

/// Counterclockwise angular order starting from the positive x-axis.
fn angle_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let upper = |v: &[i64]| v[1] > 0 || (v[1] == 0 && v[0] > 0);
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => (a[1] * b[0]).cmp(&(a[0] * b[1])),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A random complete simplicial fan in `Z²` with between 3 and `max_rays`
/// rays, each with coordinates in `[-bound, bound]`.
pub fn random_complete_fan_2d<R: Rng + ?Sized>(rng: &mut R, max_rays: usize, bound: i64) -> Fan {
    assert!(max_rays >= 3 && bound >= 1);
    loop {
        let k = rng.gen_range(3..=max_rays);
        let mut rays: Vec<Vec<i64>> = Vec::with_capacity(k);
        let mut attempts = 0;
        while rays.len() < k && attempts < 1000 {
            attempts += 1;
            let v = vec![rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)];
            if v == [0, 0] || gcd(v[0], v[1]) != 1 || rays.contains(&v) {
                continue;
            }
            rays.push(v);
        }
        rays.sort_by(|a, b| angle_cmp(a, b));
        // Consecutive rays must turn strictly counterclockwise by less than π.
        let ok = (0..rays.len()).all(|i| {
            let (a, b) = (&rays[i], &rays[(i + 1) % rays.len()]);
            a[0] * b[1] - a[1] * b[0] > 0
        });
        if rays.len() < 3 || !ok {
            continue;
        }
        let n = rays.len();
        let cones = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        return build(2, rays, cones);
    }
}
