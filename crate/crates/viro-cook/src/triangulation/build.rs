//! The constructions: inner-simplex triangulations `μ`, the extension `T`
//! through staircase slabs, lift refinement and primitive refinement.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lattice::{adjugate, affine_rank, det, edge_matrix, simplex_points, Frame, Point};
use super::{lower_hull, region_is_union_of_cells, verify_triangulation, LatticeSimplex, PLFunction, Subdivision, Triangulation};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

const RETRIES: u32 = 4;

fn pow2_inv(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k)
}

/// `Σ_{0<=i<j<=n} (y_j - y_i)²` with partial sums `y_0 = 0`, `y_k = x_1 + ... + x_k`.
/// Strictly convex; on `S^n_d` it induces the alcove triangulation into `d^n` unit simplices.
#[must_use]
pub fn alcove_lift(p: &Point) -> Q {
    let mut y = vec![0i64];
    for &x in p {
        y.push(y.last().unwrap() + x);
    }
    let mut s = 0i64;
    for j in 0..y.len() {
        for i in 0..j {
            s += (y[j] - y[i]).pow(2);
        }
    }
    qi(s)
}

fn barycentric(p: &Point, s: u64) -> Vec<i64> {
    let mut b = vec![s as i64 - p.iter().sum::<i64>()];
    b.extend(p);
    b
}

fn from_barycentric(b: &[i64]) -> Point {
    b[1..].to_vec()
}

/// Vertices of the inner simplex `{λ_j >= 1 for j ∈ J}` of the face of `S^k_s`
/// spanned by the vertices `J` (vertex 0 is the origin, vertex `i` is `s·e_i`).
#[must_use]
pub fn inner_simplex_vertices(k: usize, s: u64, face: &[usize]) -> Vec<Point> {
    let big = s as i64 - (face.len() as i64 - 1);
    face.iter()
        .map(|&j| {
            let mut b = vec![0i64; k + 1];
            for &i in face {
                b[i] = if i == j { big } else { 1 };
            }
            from_barycentric(&b)
        })
        .collect()
}

/// Faces of `S^k_s` whose inner simplex is a proper simplex of the right dimension.
fn required_faces(k: usize, s: u64) -> Vec<Vec<usize>> {
    (0u32..1 << (k + 1))
        .map(|mask| (0..=k).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|f| f.len() >= 2 && (f.len() as u64) < s)
        .collect()
}

/// Convex triangulation of `S^k_s` in which the inner simplex of every face
/// (including the simplex itself) is a cell, restricted to that face.
pub fn build_mu(k: usize, s: u64) -> Result<Triangulation> {
    if k == 0 || s < k as u64 {
        return Err(Error::InvalidInput(format!("need k >= 1 and s >= k, got k = {k}, s = {s}")));
    }
    let mut last = Error::Construction("no attempt".into());
    for attempt in 0..RETRIES {
        match try_mu(k, s, 8 << attempt) {
            Ok(t) => return Ok(t),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn try_mu(k: usize, s: u64, w: u32) -> Result<Triangulation> {
    let points = simplex_points(k, s);
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(w));
    let mut lam = PLFunction { points: Vec::new(), values: Vec::new() };
    for p in &points {
        let b = barycentric(p, s);
        let support: Vec<usize> = (0..=k).filter(|&i| b[i] > 0).collect();
        if support.len() == 1 {
            lam.points.push(p.clone());
            lam.values.push(Q::one());
        } else if support.iter().filter(|&&i| b[i] != 1).count() <= 1 {
            let eps = pow2_inv(w * (support.len() as u32 - 1));
            let jitter = qi(i64::from(rng.gen_range(1u32..1 << 20)));
            let v = &eps * (Q::one() + jitter * &eps);
            lam.points.push(p.clone());
            lam.values.push(v);
        }
    }
    let sub = lower_hull(&lam)?;
    if !sub.is_triangulation() {
        return Err(Error::Construction("inner-simplex lift is not generic".into()));
    }
    let cells: Vec<BTreeSet<&Point>> = sub.cell_points().map(|c| c.into_iter().collect()).collect();
    for face in required_faces(k, s) {
        let verts = inner_simplex_vertices(k, s, &face);
        if !cells.iter().any(|c| verts.iter().all(|v| c.contains(v))) {
            return Err(Error::Construction(format!("inner simplex of face {face:?} is missing")));
        }
    }
    let certificate = extend_above(&sub, &lam, points);
    Triangulation::from_certificate(k, s, certificate)
}

/// An affine function `h0 + g·(p - origin)`.
struct Piece {
    origin: Point,
    h0: Q,
    g: Vec<Q>,
}

impl Piece {
    fn eval(&self, p: &Point) -> Q {
        self.g.iter().zip(p.iter().zip(&self.origin)).fold(self.h0.clone(), |acc, (g, (a, b))| {
            if a == b {
                acc
            } else {
                acc + g * qi(a - b)
            }
        })
    }
}

/// The affine pieces of the convex function `Φ(values)`, one per cell.
fn hull_pieces(sub: &Subdivision, values: &[Q]) -> Vec<Piece> {
    sub.cells
        .iter()
        .map(|cell| {
            let mut frame = vec![cell[0]];
            for &i in &cell[1..] {
                let mut trial: Vec<Point> = frame.iter().map(|&j| sub.points[j].clone()).collect();
                trial.push(sub.points[i].clone());
                if affine_rank(&trial) == frame.len() {
                    frame.push(i);
                    if frame.len() == sub.n + 1 {
                        break;
                    }
                }
            }
            let verts: Vec<&Point> = frame.iter().map(|&i| &sub.points[i]).collect();
            let (adj, det) = adjugate(&edge_matrix(&verts));
            let h0 = values[frame[0]].clone();
            let dh: Vec<Q> = frame[1..].iter().map(|&i| &values[i] - &h0).collect();
            let g = (0..sub.n)
                .map(|i| dh.iter().enumerate().fold(Q::zero(), |acc, (j, h)| acc + h * qi(adj[i][j] as i64)) / qi(det as i64))
                .collect();
            Piece { origin: verts[0].clone(), h0, g }
        })
        .collect()
}

/// Value of the convex piecewise-linear function at `p`: the largest affine piece.
fn hull_value(pieces: &[Piece], p: &Point) -> Q {
    pieces.iter().map(|f| f.eval(p)).max().expect("at least one cell")
}

/// The hull values of `f` on `points`, plus one wherever `points` misses the domain of `f`.
fn extend_above(sub: &Subdivision, f: &PLFunction, points: Vec<Point>) -> PLFunction {
    let pieces = hull_pieces(sub, &f.values);
    let index = f.index();
    let values = points
        .iter()
        .map(|p| match index.get(p) {
            Some(&i) => f.values[i].clone(),
            None => hull_value(&pieces, p) + Q::one(),
        })
        .collect();
    PLFunction { points, values }
}

/// A simplex region with a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub label: String,
    pub vertices: Vec<Point>,
}

/// The regions of `S^n_d` that must be unions of cells of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequiredRegions {
    pub joins: Vec<Region>,
    pub cones: Vec<Region>,
    pub slabs: Vec<Region>,
}

impl RequiredRegions {
    #[must_use]
    pub fn new(n: usize, d: u64) -> Self {
        let d = d as i64;
        let top = d - n as i64 - 1;
        let mut joins = Vec::new();
        let mut cones = Vec::new();
        for m in 0..=top {
            for i in 1..n - 1 {
                let mut v = floor_region(n, d, m, i);
                v.extend(floor_region(n, d, m + 1, n - 1 - i));
                joins.push(Region { label: format!("R({m},{i}) * R({},{})", m + 1, n - 1 - i), vertices: v });
            }
            let base = floor_region(n, d, m, n - 1);
            let mut apexes = Vec::new();
            if m % 2 == 1 {
                apexes.push(point_on(n, &[(n - 1, d - m - 1), (n, m + 1)]));
                apexes.push(point_on(n, &[(n - 1, d - m + 1), (n, m - 1)]));
            } else {
                apexes.push(point_on(n, &[(n, m + 1)]));
                if m >= 2 {
                    apexes.push(point_on(n, &[(n, m - 1)]));
                }
            }
            for a in apexes {
                let mut v = base.clone();
                let label = format!("R({m},{}) * {a:?}", n - 1);
                v.push(a);
                cones.push(Region { label, vertices: v });
            }
        }
        let mut slabs = Vec::new();
        for m in 0..d {
            for (j, v) in staircase_slab_simplices(n, d as u64, m as u64).into_iter().enumerate() {
                slabs.push(Region { label: format!("slab {m} simplex {j}"), vertices: v });
            }
        }
        Self { joins, cones, slabs }
    }

    pub fn all(&self) -> impl Iterator<Item = &Region> {
        self.joins.iter().chain(&self.cones).chain(&self.slabs)
    }
}

/// Point with the given (1-based coordinate, value) entries.
fn point_on(n: usize, entries: &[(usize, i64)]) -> Point {
    let mut p = vec![0i64; n];
    for &(c, v) in entries {
        p[c - 1] += v;
    }
    p
}

/// Vertices of `R^n_{d,m,i}` on floor `x_n = m`, a copy of `S^i_{d-m-1-i}`.
fn floor_region(n: usize, d: i64, m: i64, i: usize) -> Vec<Point> {
    let t = d - m - 1 - i as i64;
    let coords: Vec<usize> = if m % 2 == 1 || i == n - 1 { (1..=i).collect() } else { (n - 1 - i..=n - 1).collect() };
    let mut base = vec![0i64; n];
    for &c in &coords {
        base[c - 1] = 1;
    }
    base[n - 1] = m;
    let mut out = Vec::new();
    if m % 2 == 1 || i == n - 1 {
        out.push(base.clone());
        for &c in &coords {
            let mut v = base.clone();
            v[c - 1] += t;
            out.push(v);
        }
    } else {
        for &c in &coords {
            let mut v = base.clone();
            v[c - 1] += t;
            out.push(v);
        }
    }
    out
}

/// Lattice points of `R^n_{d,m,k}`, each paired with its image under the
/// lattice identification with `S^k_{d-m-1-k}`.
#[must_use]
pub fn floor_region_points(n: usize, d: u64, m: u64, k: usize) -> Vec<(Point, Point)> {
    let Some(t) = (d as i64 - m as i64 - 1 - k as i64).try_into().ok() else { return Vec::new() };
    simplex_points(k, t)
        .into_iter()
        .map(|z| {
            let mut p = vec![0i64; n];
            p[n - 1] = m as i64;
            if m % 2 == 1 || k == n - 1 {
                for j in 0..k {
                    p[j] = z[j] + 1;
                }
            } else {
                let first = n - 1 - k;
                for j in 0..k {
                    p[first + j] = z[j] + 1;
                }
                p[first - 1] = d as i64 - m as i64 - z.iter().sum::<i64>() - k as i64;
            }
            (p, z)
        })
        .collect()
}

/// The `n` simplices of the staircase decomposition of the slab `m <= x_n <= m + 1`
/// (fewer on the top slab, where the upper floor is a point).
#[must_use]
pub fn staircase_slab_simplices(n: usize, d: u64, m: u64) -> Vec<Vec<Point>> {
    let (d, m) = (d as i64, m as i64);
    let vertex = |floor: i64, i: usize| {
        let mut p = vec![0i64; n];
        p[n - 1] = floor;
        if i > 0 {
            p[i - 1] += d - floor;
        }
        p
    };
    let mut out = Vec::new();
    for j in 0..n {
        let (low, high): (Vec<usize>, Vec<usize>) =
            if m % 2 == 0 { ((j..n).collect(), (0..=j).collect()) } else { ((0..=j).collect(), (j..n).collect()) };
        let mut v: Vec<Point> = low.into_iter().map(|i| vertex(m, i)).collect();
        v.extend(high.into_iter().map(|i| vertex(m + 1, i)));
        let refs: Vec<&Point> = v.iter().collect();
        if det(&edge_matrix(&refs)) != 0 {
            out.push(v);
        }
    }
    out
}

/// `T` together with the floor triangulations it restricts to and its required regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltT {
    pub triangulation: Triangulation,
    pub floors: Vec<Triangulation>,
    pub regions: RequiredRegions,
}

/// Convex triangulation of `S^n_d` whose floors `x_n = m`, `m <= d - n`, carry `build_mu(n-1, d-m)`
/// and which contains the joins and cones of the floor regions as unions of cells.
pub fn build_t(n: usize, d: u64) -> Result<BuiltT> {
    if n < 2 || d == 0 {
        return Err(Error::InvalidInput(format!("need n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    let floors: Vec<Triangulation> =
        (0..=d.saturating_sub(n as u64)).filter(|_| d >= n as u64).map(|m| build_mu(n - 1, d - m)).collect::<Result<_>>()?;
    let floor_index: Vec<HashMap<&Point, usize>> = floors.iter().map(|f| f.certificate.index()).collect();
    let regions = RequiredRegions::new(n, d);
    let mut last = Error::Construction("no attempt".into());
    for attempt in 0..RETRIES {
        let k = qi((2 * n as i64 * d as i64 + 2) << attempt);
        let w = 8u32 << attempt;
        let lift = |p: &Point| {
            let m = p[n - 1];
            let g: i64 = if m % 2 == 1 { p[..n - 1].iter().enumerate().map(|(i, x)| (i as i64 + 1) * x).sum() } else { 0 };
            let local: Point = p[..n - 1].to_vec();
            let fine = match floors.get(m as usize) {
                Some(f) => f.certificate.values[floor_index[m as usize][&local]].clone(),
                None => alcove_lift(&local),
            };
            &k * qi(m * m) + qi(g) + pow2_inv(w) * fine / qi(1 + d as i64 * d as i64 * d as i64)
        };
        let certificate = PLFunction::on_simplex(n, d, lift);
        let attempt = Triangulation::from_certificate(n, d, certificate)
            .map(|t| BuiltT { triangulation: t, floors: floors.clone(), regions: regions.clone() })
            .and_then(|b| verify_built_t(&b).map(|()| b));
        match attempt {
            Ok(b) => return Ok(b),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// The facets of `t` lying on the floor `x_n = m`, in floor coordinates.
fn floor_cells(t: &Triangulation, m: i64) -> BTreeSet<Vec<Point>> {
    let n = t.n;
    let mut out = BTreeSet::new();
    for s in &t.simplices {
        let on: Vec<Point> = s.vertices().iter().filter(|v| v[n - 1] == m).map(|v| v[..n - 1].to_vec()).collect();
        if on.len() == n {
            out.insert(on);
        }
    }
    out
}

/// Exact check of everything `build_t` promises.
pub fn verify_built_t(b: &BuiltT) -> Result<()> {
    let t = &b.triangulation;
    verify_triangulation(t)?;
    for (m, floor) in b.floors.iter().enumerate() {
        let want: BTreeSet<Vec<Point>> = floor.simplices.iter().map(|s| s.vertices().to_vec()).collect();
        if floor_cells(t, m as i64) != want {
            return Err(Error::InvariantViolation(format!("floor {m} does not carry its inner-simplex triangulation")));
        }
    }
    for s in &t.simplices {
        let hs: BTreeSet<i64> = s.vertices().iter().map(|v| v[t.n - 1]).collect();
        if hs.iter().next_back().unwrap() - hs.iter().next().unwrap() > 1 {
            return Err(Error::InvariantViolation(format!("cell {:?} crosses a floor", s.vertices())));
        }
    }
    for r in b.regions.all() {
        if !region_is_union_of_cells(t, &r.vertices) {
            return Err(Error::InvariantViolation(format!("region {} is not a union of cells", r.label)));
        }
    }
    Ok(())
}

/// Cells of a subdivision as point sets.
fn cell_sets(sub: &Subdivision) -> Vec<BTreeSet<Point>> {
    sub.cell_points().map(|c| c.into_iter().cloned().collect()).collect()
}

/// Refines the convex function `mu` on the face `Γ = conv(nu.points)` of its subdivision:
/// on the lattice points of `Γ` the result is `Φ(mu) + ε·nu`, elsewhere it equals `mu`.
/// The result's subdivision refines that of `mu` and restricts to that of `nu` on `Γ`.
pub fn refine(mu: &PLFunction, nu: &PLFunction) -> Result<PLFunction> {
    let sub = lower_hull(mu)?;
    let pieces = hull_pieces(&sub, &mu.values);
    let gamma: BTreeSet<&Point> = nu.points.iter().collect();
    let rank = affine_rank(&nu.points);
    let face_ok = sub.cell_points().any(|c| {
        let in_aff: BTreeSet<&Point> = c
            .into_iter()
            .filter(|p| {
                let mut t = nu.points.clone();
                t.push((*p).clone());
                affine_rank(&t) == rank
            })
            .collect();
        in_aff == gamma
    });
    let mut flat = mu.clone();
    let mu_index = mu.index();
    for p in &nu.points {
        let Some(&i) = mu_index.get(p) else {
            return Err(Error::InvalidInput(format!("point {p:?} of Γ is outside the domain")));
        };
        flat.values[i] = hull_value(&pieces, p);
    }
    // cells of the flattened function carry every lattice point of Γ
    let coarse = cell_sets(&lower_hull(&flat)?);
    if !face_ok {
        return Err(Error::InvalidInput("Γ is not a face of the subdivision".into()));
    }
    let target = restricted_subdivision(nu, rank)?;
    let scale = Q::one() + nu.values.iter().map(|v| if v < &Q::zero() { -v.clone() } else { v.clone() }).max().unwrap_or_default();
    let mut last = Error::Construction("no attempt".into());
    for attempt in 0..RETRIES {
        let eps = pow2_inv(16 << attempt) / &scale;
        let mut xi = flat.clone();
        for (p, v) in nu.points.iter().zip(&nu.values) {
            let i = mu_index[p];
            xi.values[i] = &flat.values[i] + &eps * v;
        }
        let fine = cell_sets(&lower_hull(&xi)?);
        let refines = fine.iter().all(|c| coarse.iter().any(|big| c.is_subset(big)));
        let mut restricted: BTreeSet<BTreeSet<Point>> = BTreeSet::new();
        for c in &fine {
            let on: BTreeSet<Point> = c.iter().filter(|p| gamma.contains(p)).cloned().collect();
            if on.len() > rank && affine_rank(&on.iter().cloned().collect::<Vec<_>>()) == rank {
                restricted.insert(on);
            }
        }
        if refines && restricted == target {
            return Ok(xi);
        }
        last = Error::Construction("refinement does not restrict to the subdivision of ν".into());
    }
    Err(last)
}

/// Subdivision of `Γ` induced by `nu`, computed in coordinates chosen from the ambient ones.
fn restricted_subdivision(nu: &PLFunction, rank: usize) -> Result<BTreeSet<BTreeSet<Point>>> {
    let n = nu.points[0].len();
    let mut coords: Vec<usize> = Vec::new();
    for c in 0..n {
        let mut trial = coords.clone();
        trial.push(c);
        let proj: Vec<Point> = nu.points.iter().map(|p| trial.iter().map(|&k| p[k]).collect()).collect();
        if affine_rank(&proj) == trial.len() {
            coords = trial;
        }
        if coords.len() == rank {
            break;
        }
    }
    let proj: Vec<Point> = nu.points.iter().map(|p| coords.iter().map(|&k| p[k]).collect()).collect();
    let sub = lower_hull(&PLFunction { points: proj, values: nu.values.clone() })?;
    Ok(sub.cells.iter().map(|c| c.iter().map(|&i| nu.points[i].clone()).collect()).collect())
}

/// Refines every cell of `t` by the alcove lift, giving a convex triangulation into `d^n` unit simplices.
pub fn primitive_refinement(t: &Triangulation) -> Result<Triangulation> {
    let sub = lower_hull(&t.certificate)?;
    let pieces = hull_pieces(&sub, &t.certificate.values);
    let flat: Vec<Q> = t.certificate.points.iter().map(|p| hull_value(&pieces, p)).collect();
    let frames: Vec<Frame> = t.simplices.iter().map(LatticeSimplex::frame).collect();
    let phi_max = t.certificate.points.iter().map(alcove_lift).max().unwrap_or_default();
    let mut last = Error::Construction("no attempt".into());
    for attempt in 0..RETRIES {
        let eps = pow2_inv(16 << attempt) / (Q::one() + &phi_max);
        let values = t.certificate.points.iter().zip(&flat).map(|(p, v)| v + &eps * alcove_lift(p)).collect();
        let certificate = PLFunction { points: t.certificate.points.clone(), values };
        let result = Triangulation::from_certificate(t.n, t.d, certificate).and_then(|r| {
            let refines = r.simplices.iter().all(|s| frames.iter().any(|c| s.vertices().iter().all(|v| c.contains(v))));
            if !refines {
                return Err(Error::Construction("refinement leaves a cell".into()));
            }
            if !r.is_primitive() {
                return Err(Error::Construction("a refined cell is not unimodular".into()));
            }
            Ok(r)
        });
        match result {
            Ok(r) => return Ok(r),
            Err(e) => last = e,
        }
    }
    Err(last)
}
