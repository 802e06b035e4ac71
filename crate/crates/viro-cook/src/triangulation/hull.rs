//! Regular subdivisions from lower convex hulls.
//!
//! Heights are scaled to integers and given a tiny deterministic perturbation,
//! which makes the lower hull simplicial. One lower simplex is found by a
//! linear program; the rest are reached by rotating across ridges. Simplices
//! whose unperturbed affine functions coincide are then merged back into the
//! cells of the true subdivision.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lattice::{adjugate, affine_rank, dot, edge_matrix, hyperplane_normal, Point};
use super::PLFunction;
use crate::error::{Error, Result};
use crate::rational::Q;

const ATTEMPTS: u32 = 6;

/// Cells of a regular subdivision, each listing the indices of the points on its lower face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub n: usize,
    pub points: Vec<Point>,
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    /// Every cell carries exactly `n + 1` points.
    #[must_use]
    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.len() == self.n + 1)
    }

    /// Point sets of the cells.
    pub fn cell_points(&self) -> impl Iterator<Item = Vec<&Point>> {
        self.cells.iter().map(|c| c.iter().map(|&i| &self.points[i]).collect())
    }
}

/// Affine function through `n + 1` lifted points, as `D·L(q) = D·h_0 + N·(q - v_0)`.
pub(crate) struct Affine {
    origin: usize,
    normal: Vec<BigInt>,
    den: BigInt,
}

impl Affine {
    pub(crate) fn through(points: &[Point], heights: &[BigInt], idx: &[usize]) -> Option<Self> {
        let verts: Vec<&Point> = idx.iter().map(|&i| &points[i]).collect();
        let (adj, d) = adjugate(&edge_matrix(&verts));
        if d == 0 {
            return None;
        }
        let dh: Vec<BigInt> = idx[1..].iter().map(|&i| &heights[i] - &heights[idx[0]]).collect();
        let n = adj.len();
        let normal = (0..n).map(|r| (0..n).map(|c| BigInt::from(adj[r][c]) * &dh[c]).sum()).collect();
        Some(Self { origin: idx[0], normal, den: BigInt::from(d) })
    }

    /// Sign of `h(q) - L(q)`.
    pub(crate) fn side(&self, points: &[Point], heights: &[BigInt], q: usize) -> i8 {
        let o = &points[self.origin];
        let mut rhs = &self.den * &heights[self.origin];
        for (k, c) in self.normal.iter().enumerate() {
            let step = points[q][k] - o[k];
            if step != 0 {
                rhs += c * step;
            }
        }
        let lhs = &self.den * &heights[q];
        let diff = if self.den.is_positive() { lhs - rhs } else { rhs - lhs };
        match diff.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// The values scaled by the common denominator.
pub(crate) fn integer_heights(values: &[Q]) -> Vec<BigInt> {
    let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values.iter().map(|v| v.numer() * (&den / v.denom())).collect()
}

/// The regular subdivision of the point configuration induced by `f`.
pub fn lower_hull(f: &PLFunction) -> Result<Subdivision> {
    let points = &f.points;
    let Some(first) = points.first() else {
        return Err(Error::Construction("empty point configuration".into()));
    };
    let n = first.len();
    if affine_rank(points) < n {
        return Err(Error::Construction("degenerate domain: points do not span the ambient space".into()));
    }
    let base = integer_heights(&f.values);
    let mut last_err = String::new();
    for attempt in 0..ATTEMPTS {
        let shift = 48u32 << attempt;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ u64::from(attempt));
        let heights: Vec<BigInt> = base.iter().map(|b| (b << shift) + BigInt::from(rng.gen_range(0u32..1 << 20))).collect();
        match simplicial_hull(points, &heights).and_then(|s| merge(points, &base, s)) {
            Ok(cells) => return Ok(Subdivision { n, points: points.clone(), cells }),
            Err(e) => last_err = e,
        }
    }
    Err(Error::Construction(format!("lower hull failed after {ATTEMPTS} perturbations: {last_err}")))
}

fn simplicial_hull(points: &[Point], heights: &[BigInt]) -> std::result::Result<Vec<Vec<usize>>, String> {
    let start = initial_simplex(points, heights)?;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut out = Vec::new();
    while let Some(simplex) = queue.pop_front() {
        for skip in 0..simplex.len() {
            let ridge: Vec<usize> = simplex.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
            if let Some(next) = wrap(points, heights, &ridge, simplex[skip])? {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        out.push(simplex);
    }
    Ok(out)
}

/// The lower simplex across `ridge` from `away`, if the ridge is interior.
fn wrap(points: &[Point], heights: &[BigInt], ridge: &[usize], away: usize) -> std::result::Result<Option<Vec<usize>>, String> {
    let rpts: Vec<&Point> = ridge.iter().map(|&i| &points[i]).collect();
    let normal = if rpts.len() == 1 {
        // dimension one: the ridge is a point
        vec![1i128]
    } else {
        hyperplane_normal(&rpts).ok_or("dependent ridge")?
    };
    let origin = rpts[0];
    let away_side = dot(&normal, &points[away], origin).signum();
    let mut best: Option<(usize, Affine)> = None;
    for q in 0..points.len() {
        if dot(&normal, &points[q], origin).signum() != -away_side {
            continue;
        }
        match &best {
            None => {
                let mut idx = ridge.to_vec();
                idx.push(q);
                best = Some((q, Affine::through(points, heights, &idx).ok_or("degenerate candidate")?));
            }
            Some((_, aff)) => match aff.side(points, heights, q) {
                -1 => {
                    let mut idx = ridge.to_vec();
                    idx.push(q);
                    best = Some((q, Affine::through(points, heights, &idx).ok_or("degenerate candidate")?));
                }
                0 => return Err("perturbation is not generic".into()),
                _ => {}
            },
        }
    }
    Ok(best.map(|(q, _)| {
        let mut s = ridge.to_vec();
        s.push(q);
        s.sort_unstable();
        s
    }))
}

/// A lower simplex from the linear program `min Σλ h` over `Σλ(p,1) = (centroid,1)`, `λ >= 0`.
fn initial_simplex(points: &[Point], heights: &[BigInt]) -> std::result::Result<Vec<usize>, String> {
    let n = points[0].len();
    let m = n + 1;
    let cols = points.len();
    let count = Q::from_integer(BigInt::from(cols));
    let mut rhs: Vec<Q> = (0..n)
        .map(|k| Q::from_integer(points.iter().map(|p| BigInt::from(p[k])).sum::<BigInt>()) / &count)
        .collect();
    rhs.push(Q::one());
    // tableau columns: points, then one artificial per row
    let mut a: Vec<Vec<Q>> = (0..m)
        .map(|r| {
            let mut row: Vec<Q> = (0..cols)
                .map(|c| if r < n { Q::from_integer(BigInt::from(points[c][r])) } else { Q::one() })
                .collect();
            row.extend((0..m).map(|k| if k == r { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for r in 0..m {
        if rhs[r].is_negative() {
            for v in a[r].iter_mut().take(cols) {
                *v = -v.clone();
            }
            rhs[r] = -rhs[r].clone();
        }
    }
    let mut basis: Vec<usize> = (cols..cols + m).collect();
    let phase1: Vec<Q> = (0..cols + m).map(|c| if c >= cols { Q::one() } else { Q::zero() }).collect();
    simplex_method(&mut a, &mut rhs, &mut basis, &phase1, cols + m)?;
    // drive zero-level artificials out of the basis
    for r in 0..m {
        if basis[r] >= cols {
            let c = (0..cols).find(|&c| !a[r][c].is_zero()).ok_or("rank deficient")?;
            pivot(&mut a, &mut rhs, &mut basis, r, c);
        }
    }
    let cost: Vec<Q> = (0..cols + m)
        .map(|c| if c < cols { Q::from_integer(heights[c].clone()) } else { Q::zero() })
        .collect();
    simplex_method(&mut a, &mut rhs, &mut basis, &cost, cols)?;
    let mut s = basis;
    s.sort_unstable();
    Ok(s)
}

fn pivot(a: &mut [Vec<Q>], rhs: &mut [Q], basis: &mut [usize], r: usize, c: usize) {
    let p = a[r][c].clone();
    for v in a[r].iter_mut() {
        *v /= &p;
    }
    rhs[r] /= &p;
    for i in 0..a.len() {
        if i != r && !a[i][c].is_zero() {
            let f = a[i][c].clone();
            for j in 0..a[i].len() {
                let t = &a[r][j] * &f;
                a[i][j] -= t;
            }
            let t = &rhs[r] * &f;
            rhs[i] -= t;
        }
    }
    basis[r] = c;
}

/// Bland's rule minimisation over columns `< allowed`.
fn simplex_method(a: &mut [Vec<Q>], rhs: &mut [Q], basis: &mut [usize], cost: &[Q], allowed: usize) -> std::result::Result<(), String> {
    for _ in 0..100_000 {
        let entering = (0..allowed).find(|&c| {
            if basis.contains(&c) {
                return false;
            }
            let reduced = (0..a.len()).fold(cost[c].clone(), |acc, r| acc - &cost[basis[r]] * &a[r][c]);
            reduced.is_negative()
        });
        let Some(c) = entering else { return Ok(()) };
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..a.len() {
            if a[r][c].is_positive() {
                let ratio = &rhs[r] / &a[r][c];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (r, _) = leave.ok_or("unbounded program")?;
        pivot(a, rhs, basis, r, c);
    }
    Err("simplex method did not terminate".into())
}

/// Groups perturbed simplices by the point set on their unperturbed affine function.
fn merge(points: &[Point], base: &[BigInt], simplices: Vec<Vec<usize>>) -> std::result::Result<Vec<Vec<usize>>, String> {
    let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in simplices {
        let aff = Affine::through(points, base, &s).ok_or("degenerate simplex")?;
        let mut on = Vec::new();
        for q in 0..points.len() {
            match aff.side(points, base, q) {
                -1 => return Err("perturbation too large".into()),
                0 => on.push(q),
                _ => {}
            }
        }
        cells.insert(on);
    }
    Ok(cells.into_iter().collect())
}
