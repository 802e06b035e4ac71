//! Combinatorial patchworking: chart pieces, gluing of orthant copies and `Z_2` homology.
//!
//! Points are kept in doubled coordinates so that edge midpoints stay integral.
//! A cell of the glued complex is a simplex of midpoints together with an
//! orthant, taken modulo the reflections fixing the smallest face of `S^n_d`
//! that contains it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::coefficients::complex_total_homology;
use crate::error::{Error, Result};
use crate::triangulation::{build_t, floor_region_points, primitive_refinement, LatticeSimplex, Point, Triangulation};

/// A sign at every lattice point of `S^n_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignDistribution {
    pub n: usize,
    pub d: u64,
    signs: BTreeMap<Point, i8>,
}

impl SignDistribution {
    pub fn from_fn(n: usize, d: u64, f: impl Fn(&Point) -> i8) -> Self {
        let signs = crate::triangulation::lattice::simplex_points(n, d)
            .into_iter()
            .map(|p| {
                let s = if f(&p) < 0 { -1 } else { 1 };
                (p, s)
            })
            .collect();
        Self { n, d, signs }
    }

    /// Sign at `p`.
    ///
    /// # Panics
    /// Panics if `p` is not a lattice point of `S^n_d`.
    #[must_use]
    pub fn get(&self, p: &Point) -> i8 {
        self.signs[p]
    }

    pub fn set(&mut self, p: &Point, sign: i8) -> Result<()> {
        match self.signs.get_mut(p) {
            Some(s) => {
                *s = if sign < 0 { -1 } else { 1 };
                Ok(())
            }
            None => Err(Error::InvalidInput(format!("{p:?} is not a lattice point of S^{}_{}", self.n, self.d))),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, i8)> {
        self.signs.iter().map(|(p, s)| (p, *s))
    }

    /// One `(c1,...,cn) ±` line per point.
    #[must_use]
    pub fn to_text(&self) -> String {
        self.signs
            .iter()
            .map(|(p, s)| {
                let c: Vec<String> = p.iter().map(i64::to_string).collect();
                format!("({}) {}\n", c.join(","), if *s > 0 { '+' } else { '-' })
            })
            .collect()
    }

    pub fn parse(text: &str, n: usize, d: u64) -> Result<Self> {
        let mut out = Self::from_fn(n, d, |_| 1);
        let mut seen = 0usize;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let bad = || Error::Parse(format!("bad sign line `{line}`"));
            let (pt, sign) = line.rsplit_once(char::is_whitespace).ok_or_else(bad)?;
            let inner = pt.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let p: Point = inner.split(',').map(|c| c.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            let s = match sign {
                "+" | "+1" => 1,
                "-" | "-1" => -1,
                _ => return Err(bad()),
            };
            out.set(&p, s)?;
            seen += 1;
        }
        if seen != out.signs.len() {
            return Err(Error::Parse(format!("expected {} sign lines, found {seen}", out.signs.len())));
        }
        Ok(out)
    }
}

/// `ε ∈ {±1}ⁿ`, stored as a bit mask with bit `i` set when `ε_i = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthantIndex(pub u32);

impl OrthantIndex {
    pub fn from_signs(eps: &[i8]) -> Self {
        Self(eps.iter().enumerate().filter(|(_, &e)| e < 0).fold(0, |m, (i, _)| m | 1 << i))
    }

    #[must_use]
    pub fn sign(self, i: usize) -> i8 {
        if self.0 >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// `ε^v = Π ε_i^{v_i}`.
    #[must_use]
    pub fn monomial(self, v: &Point) -> i8 {
        let odd = v.iter().enumerate().filter(|(i, x)| self.0 >> i & 1 == 1 && x.rem_euclid(2) == 1).count();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn all(n: usize) -> impl Iterator<Item = Self> {
        (0..1u32 << n).map(Self)
    }
}

/// The part of the hypersurface inside one primitive simplex and one orthant:
/// the hull of the midpoints of edges joining a positive vertex to a negative one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartPiece {
    pub positive: Vec<Point>,
    pub negative: Vec<Point>,
}

impl ChartPiece {
    /// Dimension of the piece, a product of two simplices.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.positive.len() + self.negative.len() - 2
    }

    /// Midpoints in doubled coordinates, `p + q`.
    #[must_use]
    pub fn doubled_vertices(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for p in &self.positive {
            for q in &self.negative {
                out.push(p.iter().zip(q).map(|(a, b)| a + b).collect());
            }
        }
        out
    }

    /// Simplices of the staircase triangulation, in doubled coordinates.
    /// Both vertex lists are sorted, so a shared face is cut the same way from either side.
    #[must_use]
    pub fn staircase(&self) -> Vec<Vec<Point>> {
        let (a, b) = (self.positive.len(), self.negative.len());
        let mid = |i: usize, j: usize| -> Point { self.positive[i].iter().zip(&self.negative[j]).map(|(x, y)| x + y).collect() };
        let mut out = Vec::new();
        let mut path = vec![(0usize, 0usize)];
        fn walk(a: usize, b: usize, path: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            let (i, j) = *path.last().unwrap();
            if i + 1 == a && j + 1 == b {
                out.push(path.clone());
                return;
            }
            if i + 1 < a {
                path.push((i + 1, j));
                walk(a, b, path, out);
                path.pop();
            }
            if j + 1 < b {
                path.push((i, j + 1));
                walk(a, b, path, out);
                path.pop();
            }
        }
        let mut paths = Vec::new();
        walk(a, b, &mut path, &mut paths);
        for p in paths {
            out.push(p.into_iter().map(|(i, j)| mid(i, j)).collect());
        }
        out
    }
}

/// Piece of the chart of `signs` in the simplex `s` and orthant `eps`; `None` when the twisted signs agree.
pub fn chart_piece(s: &LatticeSimplex, signs: &SignDistribution, eps: OrthantIndex) -> Result<Option<ChartPiece>> {
    if !s.is_primitive() {
        return Err(Error::InvalidInput(format!("simplex {:?} is not primitive", s.vertices())));
    }
    let (mut positive, mut negative) = (Vec::new(), Vec::new());
    for v in s.vertices() {
        if signs.get(v) * eps.monomial(v) > 0 {
            positive.push(v.clone());
        } else {
            negative.push(v.clone());
        }
    }
    if positive.is_empty() || negative.is_empty() {
        return Ok(None);
    }
    positive.sort();
    negative.sort();
    Ok(Some(ChartPiece { positive, negative }))
}

/// Which orthant copies are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// No identifications: the hypersurface in `(ℝ*)ⁿ`.
    Torus,
    /// Copies glued across the coordinate hyperplanes: the hypersurface in `ℝⁿ`.
    Affine,
    /// Also glued across the hyperplane at infinity: the hypersurface in `ℝPⁿ`.
    Projective,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Self::Torus),
            "affine" => Ok(Self::Affine),
            "projective" => Ok(Self::Projective),
            _ => Err(Error::InvalidInput(format!("unknown mode `{s}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Torus => "torus",
            Self::Affine => "affine",
            Self::Projective => "projective",
        })
    }
}

/// A cell: midpoints in doubled coordinates, sorted, plus the smallest orthant mask in its class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub points: Vec<Point>,
    pub orthant: OrthantIndex,
}

/// The glued piecewise-linear hypersurface as a Δ-complex.
#[derive(Debug, Clone)]
pub struct TComplex {
    pub n: usize,
    pub d: u64,
    pub mode: Mode,
    /// `cells[k]` lists the `k`-cells.
    pub cells: Vec<Vec<CellKey>>,
    /// `boundary[k][c]`: indices of the `(k-1)`-cells on the boundary of `cells[k][c]`, for `k >= 1`.
    pub boundary: Vec<Vec<Vec<u32>>>,
}

/// Reflections fixing every point: a flip of `x_i` for each vanishing coordinate,
/// and in projective mode the flip of all coordinates on `Σx = d`.
fn stabilizer(points: &[Point], n: usize, d: u64, mode: Mode) -> Vec<u32> {
    let mut gens = Vec::new();
    if mode == Mode::Torus {
        return gens;
    }
    for i in 0..n {
        if points.iter().all(|p| p[i] == 0) {
            gens.push(1 << i);
        }
    }
    if mode == Mode::Projective && points.iter().all(|p| p.iter().sum::<i64>() == 2 * d as i64) {
        gens.push((1 << n) - 1);
    }
    gens
}

fn canonical(eps: u32, gens: &[u32]) -> u32 {
    let mut group = vec![0u32];
    for &g in gens {
        if !group.contains(&g) {
            let more: Vec<u32> = group.iter().map(|h| h ^ g).collect();
            group.extend(more);
        }
    }
    group.iter().map(|h| eps ^ h).min().unwrap()
}

fn key(points: Vec<Point>, eps: u32, n: usize, d: u64, mode: Mode) -> CellKey {
    let gens = stabilizer(&points, n, d, mode);
    CellKey { orthant: OrthantIndex(canonical(eps, &gens)), points }
}

/// Glues the chart pieces of every simplex of `t` in every orthant.
pub fn glue(t: &Triangulation, signs: &SignDistribution, mode: Mode) -> Result<TComplex> {
    let (n, d) = (t.n, t.d);
    if signs.n != n || signs.d != d {
        return Err(Error::InvalidInput(format!("signs live on S^{}_{}, triangulation on S^{n}_{d}", signs.n, signs.d)));
    }
    if let Some(s) = t.simplices.iter().find(|s| !s.is_primitive()) {
        return Err(Error::InvalidInput(format!("simplex {:?} is not primitive", s.vertices())));
    }
    let jobs: Vec<(&LatticeSimplex, OrthantIndex)> =
        t.simplices.iter().flat_map(|s| OrthantIndex::all(n).map(move |e| (s, e))).collect();
    let tops: Vec<CellKey> = jobs
        .par_iter()
        .map(|&(s, e)| -> Result<Vec<CellKey>> {
            let Some(piece) = chart_piece(s, signs, e)? else { return Ok(Vec::new()) };
            Ok(piece.staircase().into_iter().map(|mut pts| {
                pts.sort();
                key(pts, e.0, n, d, mode)
            }).collect())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let top = n.saturating_sub(1);
    let mut index: Vec<HashMap<CellKey, u32>> = vec![HashMap::new(); top + 1];
    let mut cells: Vec<Vec<CellKey>> = vec![Vec::new(); top + 1];
    for c in tops {
        if !index[top].contains_key(&c) {
            index[top].insert(c.clone(), cells[top].len() as u32);
            cells[top].push(c);
        }
    }
    let mut boundary: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top + 1];
    for k in (1..=top).rev() {
        let mut bd = Vec::with_capacity(cells[k].len());
        for c in 0..cells[k].len() {
            let cell = cells[k][c].clone();
            let mut faces = Vec::with_capacity(k + 1);
            for skip in 0..=k {
                let pts: Vec<Point> = cell.points.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p.clone()).collect();
                let f = key(pts, cell.orthant.0, n, d, mode);
                let id = match index[k - 1].get(&f) {
                    Some(&id) => id,
                    None => {
                        let id = cells[k - 1].len() as u32;
                        index[k - 1].insert(f.clone(), id);
                        cells[k - 1].push(f);
                        id
                    }
                };
                faces.push(id);
            }
            faces.sort_unstable();
            bd.push(faces);
        }
        boundary[k] = bd;
    }
    let complex = TComplex { n, d, mode, cells, boundary };
    complex.check_boundary_squared()?;
    Ok(complex)
}

impl TComplex {
    #[must_use]
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    #[must_use]
    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// `∂∘∂ = 0` over `Z_2`.
    pub fn check_boundary_squared(&self) -> Result<()> {
        for k in 2..self.boundary.len() {
            for faces in &self.boundary[k] {
                let mut count: HashMap<u32, u32> = HashMap::new();
                for &f in faces {
                    for &g in &self.boundary[k - 1][f as usize] {
                        *count.entry(g).or_default() += 1;
                    }
                }
                if count.values().any(|c| c % 2 == 1) {
                    return Err(Error::InvariantViolation(format!("boundary of a boundary is nonzero in degree {k}")));
                }
            }
        }
        Ok(())
    }

    /// Number of vertex classes, recomputed with a union-find over (midpoint, orthant) pairs.
    #[must_use]
    pub fn vertex_classes_by_union_find(&self, t: &Triangulation, signs: &SignDistribution) -> usize {
        let mut ids: HashMap<(Point, u32), usize> = HashMap::new();
        for s in &t.simplices {
            for e in OrthantIndex::all(self.n) {
                if let Ok(Some(piece)) = chart_piece(s, signs, e) {
                    for m in piece.doubled_vertices() {
                        let next = ids.len();
                        ids.entry((m, e.0)).or_insert(next);
                    }
                }
            }
        }
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for ((m, e), &id) in &ids {
            let mut flips: Vec<u32> = Vec::new();
            if self.mode != Mode::Torus {
                flips.extend((0..self.n).filter(|&i| m[i] == 0).map(|i| 1u32 << i));
            }
            if self.mode == Mode::Projective && m.iter().sum::<i64>() == 2 * self.d as i64 {
                flips.push((1 << self.n) - 1);
            }
            for f in flips {
                if let Some(&other) = ids.get(&(m.clone(), e ^ f)) {
                    let (a, b) = (find(&mut parent, id), find(&mut parent, other));
                    parent[a] = b;
                }
            }
        }
        (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
    }
}

/// Rank over `Z_2` of a boundary matrix given by sorted column supports.
fn rank_z2(columns: &[Vec<u32>]) -> usize {
    let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut rank = 0;
    for col in columns {
        let mut c = col.clone();
        while let Some(&low) = c.last() {
            match pivots.get(&low) {
                Some(p) => c = xor_sorted(&c, p),
                None => {
                    pivots.insert(low, c);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `Z_2` Betti numbers `b_0..b_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiVector(pub Vec<u64>);

impl BettiVector {
    #[must_use]
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// `b_k = dim ker ∂_k - rank ∂_{k+1}`.
#[must_use]
pub fn betti_z2(c: &TComplex) -> BettiVector {
    let top = c.cells.len();
    let ranks: Vec<usize> = (0..=top).map(|k| if k == 0 || k >= top { 0 } else { rank_z2(&c.boundary[k]) }).collect();
    let mut b: Vec<u64> = (0..top).map(|k| (c.cells[k].len() - ranks[k] - ranks[k + 1]) as u64).collect();
    b.resize(c.n.max(1), 0);
    BettiVector(b)
}

/// The comparison with the complex hypersurface of the same degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithThom {
    pub bound: u64,
    pub total: u64,
}

impl SmithThom {
    #[must_use]
    pub fn holds(&self) -> bool {
        self.total <= self.bound
    }

    #[must_use]
    pub fn equal(&self) -> bool {
        self.total == self.bound
    }
}

#[must_use]
pub fn smith_thom(n: usize, d: u64, b: &BettiVector) -> SmithThom {
    let bound = complex_total_homology(n, d).try_into().unwrap_or(u64::MAX);
    SmithThom { bound, total: b.total() }
}

/// `(-1)^{ij}` on `S²_d`.
#[must_use]
pub fn harnack_signs(d: u64) -> SignDistribution {
    SignDistribution::from_fn(2, d, |p| if p[0] * p[1] % 2 == 0 { 1 } else { -1 })
}

/// `(-1)^{x_1}` on a segment for `k = 1`, and `(-1)^{Σ_{i<j} x_i x_j}` for `k >= 2`.
#[must_use]
pub fn standard_ingredient_signs(k: usize, m: u64) -> SignDistribution {
    SignDistribution::from_fn(k, m, |p| {
        let e: i64 = if k == 1 { p[0] } else { (0..k).flat_map(|j| (0..j).map(move |i| (i, j))).map(|(i, j)| p[i] * p[j]).sum() };
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    })
}

/// Lattice points of `R^n_{d,m,k}` paired with their images in `S^k_{d-m-1-k}`.
#[must_use]
pub fn region_identification(n: usize, d: u64, m: u64, k: usize) -> Vec<(Point, Point)> {
    floor_region_points(n, d, m, k)
}

/// The primitive refinement of `build_t(n, d)` with ingredient signs transplanted onto every floor region.
pub fn construct_qnd_signs(
    n: usize,
    d: u64,
    ingredient: &dyn Fn(usize, u64) -> SignDistribution,
) -> Result<(Triangulation, SignDistribution)> {
    if d < n as u64 || n < 2 {
        return Err(Error::InvalidInput(format!("need d >= n >= 2, got n = {n}, d = {d}")));
    }
    let t = primitive_refinement(&build_t(n, d)?.triangulation)?;
    let mut signs = SignDistribution::from_fn(n, d, |_| 1);
    for m in 0..=d - n as u64 {
        for k in 1..n {
            let size = d - m - 1 - k as u64;
            let source = ingredient(k, size);
            if source.n != k || source.d != size {
                return Err(Error::DimensionMismatch { expected: k, found: source.n });
            }
            for (p, z) in region_identification(n, d, m, k) {
                signs.set(&p, source.get(&z))?;
            }
        }
        let mut anchor = vec![0i64; n];
        anchor[n - 1] = m as i64;
        if m % 2 == 0 {
            anchor[n - 2] = (d - m) as i64;
        }
        signs.set(&anchor, 1)?;
    }
    Ok((t, signs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{alcove_lift, PLFunction};

    fn alcove(n: usize, d: u64) -> Triangulation {
        Triangulation::from_certificate(n, d, PLFunction::on_simplex(n, d, alcove_lift)).unwrap()
    }

    fn betti(t: &Triangulation, s: &SignDistribution, mode: Mode) -> Vec<u64> {
        betti_z2(&glue(t, s, mode).unwrap()).0
    }

    #[test]
    fn pieces() {
        let tri = LatticeSimplex::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let plus = SignDistribution::from_fn(2, 1, |_| 1);
        assert_eq!(chart_piece(&tri, &plus, OrthantIndex(0)).unwrap(), None);
        let s = SignDistribution::from_fn(2, 1, |p| if p == &vec![0, 1] { -1 } else { 1 });
        let piece = chart_piece(&tri, &s, OrthantIndex(0)).unwrap().unwrap();
        assert_eq!(piece.dim(), 1);
        assert_eq!(piece.doubled_vertices(), vec![vec![0, 1], vec![1, 1]]);
        let seg = LatticeSimplex::new(vec![vec![0], vec![1]]).unwrap();
        let alt = SignDistribution::from_fn(1, 1, |p| if p[0] == 0 { 1 } else { -1 });
        let piece = chart_piece(&seg, &alt, OrthantIndex(0)).unwrap().unwrap();
        assert_eq!(piece.doubled_vertices(), vec![vec![1]]);
        let fat = LatticeSimplex::new(vec![vec![0], vec![2]]).unwrap();
        assert!(chart_piece(&fat, &SignDistribution::from_fn(1, 2, |_| 1), OrthantIndex(0)).is_err());
    }

    #[test]
    fn orthant_monomial() {
        let e = OrthantIndex::from_signs(&[-1, 1, -1]);
        assert_eq!(e.0, 0b101);
        assert_eq!(e.monomial(&vec![1, 5, 0]), -1);
        assert_eq!(e.monomial(&vec![1, 5, 3]), 1);
    }

    #[test]
    fn staircase_sizes() {
        let piece = ChartPiece { positive: vec![vec![0, 0], vec![1, 0]], negative: vec![vec![0, 1], vec![1, 1]] };
        // Δ1 × Δ1 splits into two triangles
        assert_eq!(piece.staircase().len(), 2);
        let piece = ChartPiece { positive: vec![vec![0; 3], vec![1, 0, 0]], negative: vec![vec![0, 1, 0], vec![0, 0, 1]] };
        assert_eq!(piece.staircase().len(), 2);
    }

    #[test]
    fn cubic_roots_on_a_line() {
        let t = alcove(1, 3);
        let alt = SignDistribution::from_fn(1, 3, |p| if p[0] % 2 == 0 { 1 } else { -1 });
        assert_eq!(betti(&t, &alt, Mode::Torus), vec![3]);
    }

    #[test]
    fn one_oval_in_a_conic() {
        let t = alcove(2, 2);
        let s = SignDistribution::from_fn(2, 2, |p| if p == &vec![0, 0] { -1 } else { 1 });
        assert_eq!(betti(&t, &s, Mode::Projective), vec![1, 1]);
    }

    #[test]
    fn empty_complex() {
        let c = TComplex { n: 2, d: 3, mode: Mode::Projective, cells: vec![Vec::new(), Vec::new()], boundary: vec![Vec::new(), Vec::new()] };
        assert_eq!(betti_z2(&c).0, vec![0, 0]);
    }

    #[test]
    fn harnack_curves_are_maximal() {
        for d in 1..=6u64 {
            let t = alcove(2, d);
            let c = glue(&t, &harnack_signs(d), Mode::Projective).unwrap();
            let b = betti_z2(&c);
            let ovals = (d as i64 - 1) * (d as i64 - 2) / 2 + 1;
            assert_eq!(b.0[0] as i64, ovals, "d = {d}");
            assert!(smith_thom(2, d, &b).equal());
            assert_eq!(c.euler_characteristic(), b.0[0] as i64 - b.0[1] as i64);
            assert_eq!(c.cell_counts()[0], c.vertex_classes_by_union_find(&t, &harnack_signs(d)));
        }
        assert_eq!(betti(&alcove(2, 3), &harnack_signs(3), Mode::Projective), vec![2, 2]);
    }

    #[test]
    fn sign_text_round_trip() {
        let s = harnack_signs(3);
        assert_eq!(SignDistribution::parse(&s.to_text(), 2, 3).unwrap(), s);
        assert!(SignDistribution::parse("(0,0) +", 2, 3).is_err());
        assert!(SignDistribution::parse("(0,0) x", 2, 3).is_err());
    }

    #[test]
    fn transplanted_signs_read_back() {
        let (n, d) = (3usize, 6u64);
        let (_, signs) = construct_qnd_signs(n, d, &standard_ingredient_signs).unwrap();
        for m in 0..=d - n as u64 {
            for k in 1..n {
                let source = standard_ingredient_signs(k, d - m - 1 - k as u64);
                let pairs = region_identification(n, d, m, k);
                assert_eq!(pairs.len(), source.iter().count());
                for (p, z) in pairs {
                    assert_eq!(signs.get(&p), source.get(&z));
                }
            }
        }
    }
}
