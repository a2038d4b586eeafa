//! Small exact integer linear algebra for desk-scale lattices.

use num_integer::Integer;

/// Determinant of a square integer matrix (Bareiss elimination).
pub(crate) fn det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "det of a non-square matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank of an integer matrix given by rows.
pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[c] != 0 {
                let (x, y) = (pivot[c], row[c]);
                let g = x.gcd(&y);
                let (fx, fy) = (y / g, x / g);
                for (v, &pv) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *v = *v * fy - pv * fx;
                }
                let content = row.iter().fold(0i128, |g, v| g.gcd(v));
                if content > 1 {
                    row.iter_mut().for_each(|v| *v /= content);
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

fn minor(rows: &[Vec<i64>], skip_row: usize, skip_col: usize) -> Vec<Vec<i64>> {
    rows.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip_row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != skip_col)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Adjugate matrix: `rows · adj = det · I`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn adjugate(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = rows.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det(&minor(rows, i, j));
        }
    }
    adj
}

/// Generator of the integer vectors orthogonal to `k - 1` independent
/// vectors in `Z^k`, via signed maximal minors, made primitive.
pub(crate) fn primitive_perp(rows: &[Vec<i64>], n: usize) -> Vec<i64> {
    debug_assert_eq!(rows.len() + 1, n);
    let mut v: Vec<i128> = (0..n)
        .map(|j| {
            let m: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * det(&m)
        })
        .collect();
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    v.into_iter().map(to_i64).collect()
}

/// Lattice index of the sublattice spanned by independent rows inside its
/// saturation: gcd of the maximal minors.
pub(crate) fn lattice_index(rows: &[Vec<i64>], n: usize) -> i128 {
    let k = rows.len();
    let mut g = 0i128;
    for cols in combinations(n, k) {
        let m: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        g = g.gcd(&det(&m));
    }
    g
}

/// All `k`-subsets of `0..n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("lattice coordinate overflow")
}
