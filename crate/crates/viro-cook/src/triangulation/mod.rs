//! Convex lattice triangulations of the simplices `S^n_d = {x ∈ ℝⁿ : x >= 0, Σx <= d}`.
//!
//! [`lower_hull`] turns a lift of lattice points into the induced regular
//! subdivision. [`build_mu`] triangulates a simplex so that the inner simplex
//! of every face is a cell, [`build_t`] extends floor triangulations through
//! staircase slabs, and [`primitive_refinement`] refines everything into unit
//! simplices. Every result carries its lift as a certificate, and
//! [`verify_triangulation`] re-checks it exactly.

mod build;
mod hull;
pub mod io;
pub mod lattice;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

pub use build::{
    alcove_lift, build_mu, build_t, floor_region_points, inner_simplex_vertices, primitive_refinement, refine, staircase_slab_simplices, verify_built_t,
    BuiltT, RequiredRegions, Region,
};
pub use hull::{lower_hull, Subdivision};
use hull::{integer_heights, Affine};
pub use lattice::Point;

use crate::error::{Error, Result};
use crate::rational::{qi, Q};
use lattice::{barycentric_scaled, dot, edge_matrix, det, hyperplane_normal, simplex_points, Frame};

/// A full-dimensional lattice simplex, vertices sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeSimplex {
    vertices: Vec<Point>,
}

impl LatticeSimplex {
    /// `n + 1` affinely independent points of `ℤⁿ`.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        if vertices.len() != n + 1 || vertices.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidInput(format!("a simplex in dimension {n} needs {} vertices", n + 1)));
        }
        vertices.sort();
        let s = Self { vertices };
        if s.normalized_volume() == 0 {
            return Err(Error::InvalidInput("affinely dependent vertices".into()));
        }
        Ok(s)
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    #[must_use]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub(crate) fn vertex_refs(&self) -> Vec<&Point> {
        self.vertices.iter().collect()
    }

    /// `n!` times the Euclidean volume.
    #[must_use]
    pub fn normalized_volume(&self) -> u128 {
        det(&edge_matrix(&self.vertex_refs())).unsigned_abs()
    }

    #[must_use]
    pub fn is_primitive(&self) -> bool {
        self.normalized_volume() == 1
    }

    #[must_use]
    pub fn contains(&self, p: &Point) -> bool {
        self.frame().contains(p)
    }

    /// Prepared barycentric coordinates, for repeated containment queries.
    #[must_use]
    pub fn frame(&self) -> Frame {
        Frame::new(&self.vertex_refs()).expect("non-degenerate simplex")
    }
}

/// Values on the lattice points of a polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    pub points: Vec<Point>,
    pub values: Vec<Q>,
}

impl PLFunction {
    pub fn new(points: Vec<Point>, values: Vec<Q>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: values.len() });
        }
        Ok(Self { points, values })
    }

    /// `f` evaluated on every lattice point of `S^n_d`.
    pub fn on_simplex(n: usize, d: u64, f: impl Fn(&Point) -> Q) -> Self {
        let points = simplex_points(n, d);
        let values = points.iter().map(f).collect();
        Self { points, values }
    }

    #[must_use]
    pub fn index(&self) -> HashMap<&Point, usize> {
        self.points.iter().enumerate().map(|(i, p)| (p, i)).collect()
    }

    #[must_use]
    pub fn value(&self, p: &Point) -> Option<&Q> {
        self.points.iter().position(|q| q == p).map(|i| &self.values[i])
    }
}

/// A triangulation of `S^n_d` with the lift that certifies its convexity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub n: usize,
    pub d: u64,
    pub simplices: Vec<LatticeSimplex>,
    pub certificate: PLFunction,
}

impl Triangulation {
    /// Cells of the lower hull of `certificate`, which must all be simplices.
    pub fn from_certificate(n: usize, d: u64, certificate: PLFunction) -> Result<Self> {
        let sub = lower_hull(&certificate)?;
        if !sub.is_triangulation() {
            return Err(Error::Construction("lift does not induce a triangulation".into()));
        }
        let mut simplices = sub
            .cell_points()
            .map(|pts| LatticeSimplex::new(pts.into_iter().cloned().collect()))
            .collect::<Result<Vec<_>>>()?;
        simplices.sort();
        Ok(Self { n, d, simplices, certificate })
    }

    #[must_use]
    pub fn total_volume(&self) -> u128 {
        self.simplices.iter().map(LatticeSimplex::normalized_volume).sum()
    }

    #[must_use]
    pub fn is_primitive(&self) -> bool {
        self.simplices.iter().all(LatticeSimplex::is_primitive)
    }

    /// Value of the piecewise-linear function at any point of `S^n_d`.
    #[must_use]
    pub fn pl_value(&self, p: &Point) -> Option<Q> {
        let index = self.certificate.index();
        self.simplices.iter().find(|s| s.contains(p)).map(|s| affine_value(s, &self.certificate, &index, p))
    }
}

/// Value at `p` of the affine function through the lifted vertices of `s`.
fn affine_value(s: &LatticeSimplex, cert: &PLFunction, index: &HashMap<&Point, usize>, p: &Point) -> Q {
    let verts = s.vertex_refs();
    let (lam, det) = barycentric_scaled(&verts, p).expect("non-degenerate simplex");
    let total = lam.iter().zip(&verts).fold(Q::zero(), |acc, (l, v)| acc + qi(*l as i64) * &cert.values[index[*v]]);
    total / qi(det as i64)
}

/// What [`verify_triangulation`] checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationReport {
    pub cells: usize,
    pub volume: u128,
    pub primitive: bool,
}

fn on_boundary(ridge: &[&Point], d: u64) -> bool {
    let n = ridge[0].len();
    (0..n).any(|i| ridge.iter().all(|p| p[i] == 0)) || ridge.iter().all(|p| p.iter().sum::<i64>() == d as i64)
}

/// Exact check: every lattice point off a cell lies strictly above the cell's
/// affine function, the volumes add up to `d^n`, and every interior ridge is
/// shared by exactly two cells on opposite sides.
pub fn verify_triangulation(t: &Triangulation) -> Result<TriangulationReport> {
    let fail = |m: String| Err(Error::InvariantViolation(m));
    let expected = simplex_points(t.n, t.d);
    if t.certificate.points.len() != expected.len() {
        return fail("certificate does not cover every lattice point".into());
    }
    let index = t.certificate.index();
    if expected.iter().any(|p| !index.contains_key(p)) {
        return fail("certificate domain differs from the lattice points of the simplex".into());
    }
    let heights = integer_heights(&t.certificate.values);
    for s in &t.simplices {
        if s.dim() != t.n {
            return fail("simplex of wrong dimension".into());
        }
        let mut idx = Vec::with_capacity(t.n + 1);
        for v in s.vertices() {
            match index.get(v) {
                Some(&i) => idx.push(i),
                None => return fail(format!("vertex {v:?} outside the polytope")),
            }
        }
        let aff = Affine::through(&t.certificate.points, &heights, &idx).expect("non-degenerate simplex");
        for (i, p) in t.certificate.points.iter().enumerate() {
            if !idx.contains(&i) && aff.side(&t.certificate.points, &heights, i) <= 0 {
                return fail(format!("lattice point {p:?} is not strictly above the cell {:?}", s.vertices()));
            }
        }
    }
    let volume = t.total_volume();
    if volume != u128::from(t.d).pow(t.n as u32) {
        return fail(format!("volume {volume} differs from d^n = {}", u128::from(t.d).pow(t.n as u32)));
    }
    let mut ridges: BTreeMap<Vec<&Point>, Vec<i128>> = BTreeMap::new();
    for s in &t.simplices {
        for skip in 0..=t.n {
            let ridge: Vec<&Point> = s.vertices().iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v).collect();
            let side = if t.n == 1 {
                s.vertices()[skip][0] - ridge[0][0]
            } else {
                let normal = hyperplane_normal(&ridge).expect("ridge of a simplex");
                dot(&normal, &s.vertices()[skip], ridge[0]) as i64
            };
            ridges.entry(ridge).or_default().push(i128::from(side.signum()));
        }
    }
    for (ridge, sides) in &ridges {
        let ok = if on_boundary(ridge, t.d) { sides.len() == 1 } else { sides.len() == 2 && sides[0] == -sides[1] };
        if !ok {
            return fail(format!("ridge {ridge:?} is not matched"));
        }
    }
    Ok(TriangulationReport { cells: t.simplices.len(), volume, primitive: t.is_primitive() })
}

/// Volume of the cells lying inside the simplex `region`, compared with the region's own volume.
#[must_use]
pub fn region_is_union_of_cells(t: &Triangulation, region: &[Point]) -> bool {
    let refs: Vec<&Point> = region.iter().collect();
    let Some(frame) = Frame::new(&refs) else { return false };
    let target = frame.volume() as u128;
    let inside: u128 = t
        .simplices
        .iter()
        .filter(|s| s.vertices().iter().all(|v| frame.contains(v)))
        .map(LatticeSimplex::normalized_volume)
        .sum();
    inside == target
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn constant_lift_on_a_segment() {
        let f = PLFunction::on_simplex(1, 5, |_| qi(0));
        let sub = lower_hull(&f).unwrap();
        assert_eq!(sub.cells.len(), 1);
        assert_eq!(sub.cells[0].len(), 6);
        assert!(!sub.is_triangulation());
    }

    #[test]
    fn square_lift_on_floors_gives_slabs() {
        let f = PLFunction::on_simplex(3, 4, |p| qi(p[2] * p[2]));
        let sub = lower_hull(&f).unwrap();
        assert_eq!(sub.cells.len(), 4);
        for cell in sub.cell_points() {
            let heights: std::collections::BTreeSet<i64> = cell.iter().map(|p| p[2]).collect();
            assert_eq!(heights.len(), 2);
        }
    }

    #[test]
    fn small_random_lifts_tile_s2_3() {
        for seed in 0..5i64 {
            let f = PLFunction::on_simplex(2, 3, |p| q((p[0] * 7 + p[1] * 13 + seed * 5) % 11 + p[0] * p[1], 3));
            let sub = lower_hull(&f).unwrap();
            let vol: u128 = sub.cell_points().map(|c| {
                let r: Vec<&Point> = c[..3].to_vec();
                det(&edge_matrix(&r)).unsigned_abs()
            }).sum();
            if sub.is_triangulation() {
                assert_eq!(vol, 9);
                let t = Triangulation::from_certificate(2, 3, f).unwrap();
                verify_triangulation(&t).unwrap();
            }
        }
    }

    #[test]
    fn degenerate_domain_rejected() {
        let f = PLFunction::new(vec![vec![0, 0], vec![1, 1], vec![2, 2]], vec![qi(0), qi(1), qi(0)]).unwrap();
        assert!(matches!(lower_hull(&f), Err(Error::Construction(_))));
    }

    #[test]
    fn simplex_type() {
        assert!(LatticeSimplex::new(vec![vec![0, 0], vec![1, 1], vec![2, 2]]).is_err());
        let s = LatticeSimplex::new(vec![vec![0, 0], vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(s.normalized_volume(), 2);
        assert!(s.contains(&vec![1, 0]));
    }
}
