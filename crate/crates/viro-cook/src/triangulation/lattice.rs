//! Small exact integer linear algebra on lattice points.

use crate::rational::Q;
use num_bigint::BigInt;

pub type Point = Vec<i64>;

/// Determinant by fraction-free elimination.
#[must_use]
pub fn det(rows: &[Vec<i128>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn minor(rows: &[Vec<i128>], skip_row: usize, skip_col: usize) -> Vec<Vec<i128>> {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_col).map(|(_, v)| *v).collect())
        .collect()
}

/// Edge matrix `v_i - v_0`, one row per `i >= 1`.
#[must_use]
pub fn edge_matrix(vertices: &[&Point]) -> Vec<Vec<i128>> {
    let v0 = vertices[0];
    vertices[1..].iter().map(|v| v.iter().zip(v0).map(|(a, b)| i128::from(a - b)).collect()).collect()
}

/// Adjugate and determinant of a square matrix: `adj · M = det · I`.
#[must_use]
pub fn adjugate(m: &[Vec<i128>]) -> (Vec<Vec<i128>>, i128) {
    let n = m.len();
    let d = det(m);
    if n == 1 {
        return (vec![vec![1]], d);
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, i, j));
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    (adj, d)
}

/// A nonzero integer normal to the hyperplane through `n` points of `ℤⁿ`, or `None` if they are dependent.
#[must_use]
pub fn hyperplane_normal(points: &[&Point]) -> Option<Vec<i128>> {
    let n = points[0].len();
    let rows = edge_matrix(points);
    let normal: Vec<i128> = (0..n)
        .map(|j| {
            let sub: Vec<Vec<i128>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
            let c = det(&sub);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    normal.iter().any(|&v| v != 0).then_some(normal)
}

#[must_use]
pub fn dot(a: &[i128], p: &Point, origin: &Point) -> i128 {
    a.iter().zip(p.iter().zip(origin)).map(|(x, (u, v))| x * i128::from(u - v)).sum()
}

/// Dimension of the affine hull.
#[must_use]
pub fn affine_rank(points: &[Point]) -> usize {
    let Some(first) = points.first() else { return 0 };
    let mut rows: Vec<Vec<Q>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| Q::from_integer(BigInt::from(a - b))).collect())
        .collect();
    let cols = first.len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != Q::from_integer(0.into())) else { continue };
        rows.swap(rank, piv);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != Q::from_integer(0.into()) {
                let f = &rows[r][c] / &pivot;
                for k in c..cols {
                    let v = &rows[rank][k] * &f;
                    rows[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A full-dimensional simplex prepared for repeated barycentric queries.
#[derive(Debug, Clone)]
pub struct Frame {
    origin: Point,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl Frame {
    /// `None` for a degenerate simplex.
    #[must_use]
    pub fn new(vertices: &[&Point]) -> Option<Self> {
        let (adj, det) = adjugate(&edge_matrix(vertices));
        (det != 0).then(|| Self { origin: vertices[0].clone(), adj, det })
    }

    /// `|det|` of the edge matrix.
    #[must_use]
    pub fn volume(&self) -> i128 {
        self.det.abs()
    }

    /// Barycentric coordinates of `p` scaled by `|det|`, vertex 0 first.
    #[must_use]
    pub fn barycentric(&self, p: &Point) -> Vec<i128> {
        // λ·M = p - v0 with λ indexed by v1..vn, so λ = (p - v0)·adj / det
        let diff: Vec<i128> = p.iter().zip(&self.origin).map(|(a, b)| i128::from(a - b)).collect();
        let n = diff.len();
        let s = self.det.signum();
        let mut lam: Vec<i128> = (0..n).map(|j| s * (0..n).map(|i| diff[i] * self.adj[i][j]).sum::<i128>()).collect();
        let rest = self.det.abs() - lam.iter().sum::<i128>();
        lam.insert(0, rest);
        lam
    }

    #[must_use]
    pub fn contains(&self, p: &Point) -> bool {
        self.barycentric(p).iter().all(|&v| v >= 0)
    }
}

/// Barycentric coordinates of `p` in the simplex `vertices`, scaled by `|det|`;
/// returns `(scaled coordinates, |det|)` or `None` for a degenerate simplex.
#[must_use]
pub fn barycentric_scaled(vertices: &[&Point], p: &Point) -> Option<(Vec<i128>, i128)> {
    Frame::new(vertices).map(|f| (f.barycentric(p), f.volume()))
}

/// `p` lies in the closed simplex.
#[must_use]
pub fn in_simplex(vertices: &[&Point], p: &Point) -> bool {
    Frame::new(vertices).is_some_and(|f| f.contains(p))
}

/// All lattice points of `S^n_d = {x >= 0, Σx <= d}` in lexicographic order.
#[must_use]
pub fn simplex_points(n: usize, d: u64) -> Vec<Point> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(i: usize, left: i64, cur: &mut Point, out: &mut Vec<Point>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d as i64, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![2, 0], vec![0, 3]]), 6);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
        let m = vec![vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]];
        let (adj, d) = adjugate(&m);
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| adj[i][k] * m[k][j]).sum();
                assert_eq!(s, if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn barycentric() {
        let a = vec![0, 0];
        let b = vec![2, 0];
        let c = vec![0, 2];
        let (lam, d) = barycentric_scaled(&[&a, &b, &c], &vec![1, 1]).unwrap();
        assert_eq!((lam, d), (vec![0, 2, 2], 4));
        assert!(!in_simplex(&[&a, &b, &c], &vec![2, 1]));
    }

    #[test]
    fn point_counts() {
        assert_eq!(simplex_points(2, 3).len(), 10);
        assert_eq!(simplex_points(4, 6).len(), 210);
        assert_eq!(affine_rank(&[vec![0, 0], vec![1, 1], vec![2, 2]]), 1);
    }
}
