//! Search over recursive cooking plans.
//!
//! A [`Plan`] is a tree whose leaves are registry families and whose nodes cook
//! their children. [`enumerate_frontier`] collects, per dimension, every
//! distinct vector reachable from a leaf set, keeping the smallest witness plan
//! for each. The brute-force mode enumerates plan trees directly and serves as
//! an oracle for the memoized mode.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coefficients::hodge_row;
use crate::cooking::{cook, cook_scaled, registry_leaf, CoeffVector, IngredientSet, Scaled};
use crate::error::{Error, Result};
use crate::rational::{to_f64, Q};

/// Default cap on the number of combinations examined per dimension.
pub const DEFAULT_CAP: usize = 100_000;

// ============================================================================
// Plans
// ============================================================================

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Plan {
    Leaf { name: String, n: usize },
    Node { n: usize, children: BTreeMap<usize, Arc<Plan>> },
}

impl Plan {
    #[must_use]
    pub fn leaf(name: impl Into<String>, n: usize) -> Self {
        Plan::Leaf { name: name.into(), n }
    }

    /// Node of dimension `children.len() + 1` with child `k` at position `k - 1`.
    #[must_use]
    pub fn node(children: Vec<Plan>) -> Self {
        let n = children.len() + 1;
        Plan::Node { n, children: children.into_iter().enumerate().map(|(i, c)| (i + 1, Arc::new(c))).collect() }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        match self {
            Plan::Leaf { n, .. } | Plan::Node { n, .. } => *n,
        }
    }

    /// Number of leaves and nodes in the tree.
    #[must_use]
    pub fn size(&self) -> usize {
        match self {
            Plan::Leaf { .. } => 1,
            Plan::Node { children, .. } => 1 + children.values().map(|c| c.size()).sum::<usize>(),
        }
    }
}

impl Ord for Plan {
    /// Smaller plans first; then leaves before nodes; leaves by name and
    /// dimension, nodes by dimension and then children in key order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| match (self, other) {
            (Plan::Leaf { name: a, n: na }, Plan::Leaf { name: b, n: nb }) => a.cmp(b).then(na.cmp(nb)),
            (Plan::Leaf { .. }, Plan::Node { .. }) => Ordering::Less,
            (Plan::Node { .. }, Plan::Leaf { .. }) => Ordering::Greater,
            (Plan::Node { n: na, children: ca }, Plan::Node { n: nb, children: cb }) => {
                na.cmp(nb).then_with(|| ca.iter().cmp(cb.iter()))
            }
        })
    }
}

impl PartialOrd for Plan {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plan::Leaf { name, n } => write!(f, "{name}_{n}"),
            Plan::Node { n, children } => {
                write!(f, "cook{n}(")?;
                for (i, c) in children.values().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Evaluates a plan exactly. Leaves go through the registry.
pub fn evaluate(plan: &Plan) -> Result<CoeffVector> {
    match plan {
        Plan::Leaf { name, n } => registry_leaf(name, *n),
        Plan::Node { n, children } => {
            if *n < 2 {
                return Err(Error::InvalidInput("plan node of dimension < 2".into()));
            }
            let mut ing = IngredientSet::new(*n);
            for k in 1..*n {
                let child = children.get(&k).ok_or(Error::MissingDimension(k))?;
                if child.dim() != k {
                    return Err(Error::DimensionMismatch { expected: k, found: child.dim() });
                }
                ing.insert(k, evaluate(child)?)?;
            }
            if children.len() != n - 1 {
                return Err(Error::InvalidInput(format!("plan node {n} has children outside 1..{}", n - 1)));
            }
            cook(&ing)
        }
    }
}

// ============================================================================
// Frontiers
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Memo,
    Brute,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub mode: Mode,
    /// Maximum number of combinations (memo) or plans (brute) per dimension.
    pub cap: usize,
    /// Parameters of the `interp:a` leaves added when the leaf list asks for them.
    pub interp_grid: Vec<Q>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Memo,
            cap: DEFAULT_CAP,
            interp_grid: vec![crate::rational::q(-1, 24), Q::from_integer(0.into()), crate::rational::q(5, 24)],
        }
    }
}

/// Expands user-facing leaf names (`std`, `brugalle` for both signs, `interp` for the grid).
pub fn expand_leaves(spec: &str, opts: &SearchOptions) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for raw in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match raw {
            "std" | "standard" => out.push("standard".to_string()),
            "brugalle" | "brugalle+-" => {
                out.push("brugalle+".to_string());
                out.push("brugalle-".to_string());
            }
            "brugalle+" | "b+" => out.push("brugalle+".to_string()),
            "brugalle-" | "b-" => out.push("brugalle-".to_string()),
            "interp" => out.extend(opts.interp_grid.iter().map(|a| format!("interp:{}", crate::rational::fmt_q(a)))),
            other if other.starts_with("interp:") => {
                registry_leaf(other, 3)?;
                out.push(other.to_string());
            }
            other => return Err(Error::UnknownLeaf(other.to_string())),
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("empty leaf set".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierEntry {
    pub vector: CoeffVector,
    pub plan: Arc<Plan>,
}

/// Distinct vectors of one dimension, each with its smallest witness plan.
/// Entries are ordered by witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub dim: usize,
    pub entries: Vec<FrontierEntry>,
}

impl Frontier {
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[must_use]
    pub fn contains(&self, v: &CoeffVector) -> bool {
        self.entries.iter().any(|e| e.vector.entries() == v.entries())
    }

    fn from_map(dim: usize, map: BTreeMap<Vec<Q>, Arc<Plan>>) -> Result<Self> {
        let mut entries = map
            .into_iter()
            .map(|(x, plan)| Ok(FrontierEntry { vector: CoeffVector::new(dim, x)?, plan }))
            .collect::<Result<Vec<_>>>()?;
        entries.sort_by(|a, b| a.plan.cmp(&b.plan));
        Ok(Self { dim, entries })
    }
}

fn insert_min(map: &mut BTreeMap<Vec<Q>, Arc<Plan>>, x: Vec<Q>, plan: Arc<Plan>) {
    match map.get(&x) {
        Some(old) if **old <= *plan => {}
        _ => {
            map.insert(x, plan);
        }
    }
}

fn leaf_entries(leaves: &[String], k: usize) -> Vec<(Vec<Q>, Arc<Plan>)> {
    leaves
        .iter()
        .filter_map(|name| registry_leaf(name, k).ok().map(|v| (v.entries().to_vec(), Arc::new(Plan::leaf(name.clone(), k)))))
        .collect()
}

/// Mixed-radix decoding of a combination index.
fn combo(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .map(|&s| {
            let c = idx % s;
            idx /= s;
            c
        })
        .collect()
}

fn product(sizes: &[usize], cap: usize, dim: usize) -> Result<usize> {
    sizes.iter().try_fold(1usize, |acc, &s| {
        acc.checked_mul(s).filter(|&p| p <= cap).ok_or(Error::CapExceeded { dim, cap })
    })
}

/// Frontiers for every dimension `1..=n_max`. Dimensions up to 3 hold only the leaves.
pub fn enumerate_frontier(n_max: usize, leaves: &[String], opts: &SearchOptions) -> Result<BTreeMap<usize, Frontier>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    if leaves.is_empty() {
        return Err(Error::InvalidInput("empty leaf set".into()));
    }
    for name in leaves {
        if !(1..=3).any(|k| registry_leaf(name, k).is_ok()) {
            return Err(Error::UnknownLeaf(name.clone()));
        }
    }
    match opts.mode {
        Mode::Memo => enumerate_memo(n_max, leaves, opts.cap),
        Mode::Brute => enumerate_brute(n_max, leaves, opts.cap),
    }
}

fn enumerate_memo(n_max: usize, leaves: &[String], cap: usize) -> Result<BTreeMap<usize, Frontier>> {
    let mut out: BTreeMap<usize, Frontier> = BTreeMap::new();
    let mut scaled: Vec<Vec<Scaled>> = vec![Vec::new()];
    for k in 1..=n_max {
        let mut map = BTreeMap::new();
        for (x, p) in leaf_entries(leaves, k) {
            insert_min(&mut map, x, p);
        }
        if k >= 4 {
            let sizes: Vec<usize> = (1..k).map(|j| out[&j].len()).collect();
            let total = product(&sizes, cap, k)?;
            let frontiers: Vec<&Frontier> = (1..k).map(|j| &out[&j]).collect();
            let cooked: Vec<(Vec<Q>, Plan)> = (0..total)
                .into_par_iter()
                .map(|idx| {
                    let choice = combo(idx, &sizes);
                    let parts: Vec<&Scaled> = choice.iter().enumerate().map(|(j, &c)| &scaled[j + 1][c]).collect();
                    let x = cook_scaled(k, &parts).to_entries();
                    let children = choice
                        .iter()
                        .enumerate()
                        .map(|(j, &c)| (j + 1, frontiers[j].entries[c].plan.clone()))
                        .collect();
                    (x, Plan::Node { n: k, children })
                })
                .collect();
            for (x, p) in cooked {
                insert_min(&mut map, x, Arc::new(p));
            }
        }
        if map.len() > cap {
            return Err(Error::CapExceeded { dim: k, cap });
        }
        let frontier = Frontier::from_map(k, map)?;
        scaled.push(frontier.entries.iter().map(|e| Scaled::from_entries(e.vector.entries())).collect());
        out.insert(k, frontier);
    }
    Ok(out)
}

/// Every plan tree of each dimension, evaluated from scratch and grouped by vector.
fn enumerate_brute(n_max: usize, leaves: &[String], cap: usize) -> Result<BTreeMap<usize, Frontier>> {
    let mut plans: Vec<Vec<Arc<Plan>>> = vec![Vec::new()];
    let mut out = BTreeMap::new();
    for k in 1..=n_max {
        let mut level: Vec<Arc<Plan>> = leaf_entries(leaves, k).into_iter().map(|(_, p)| p).collect();
        if k >= 4 {
            let sizes: Vec<usize> = (1..k).map(|j| plans[j].len()).collect();
            let total = product(&sizes, cap, k)?;
            for idx in 0..total {
                let choice = combo(idx, &sizes);
                let children = choice.iter().enumerate().map(|(j, &c)| (j + 1, plans[j + 1][c].clone())).collect();
                level.push(Arc::new(Plan::Node { n: k, children }));
            }
        }
        let evaluated: Vec<Vec<Q>> =
            level.par_iter().map(|p| evaluate(p).map(|v| v.entries().to_vec())).collect::<Result<_>>()?;
        let mut map = BTreeMap::new();
        for (x, p) in evaluated.into_iter().zip(&level) {
            insert_min(&mut map, x, p.clone());
        }
        out.insert(k, Frontier::from_map(k, map)?);
        plans.push(level);
    }
    Ok(out)
}

/// The largest `x^n_i` over the frontier, with the smallest witness among ties.
pub fn best_coefficient(n: usize, i: usize, leaves: &[String], opts: &SearchOptions) -> Result<(Q, Arc<Plan>)> {
    if i >= n {
        return Err(Error::InvalidInput(format!("index {i} outside 0..{}", n.saturating_sub(1))));
    }
    let frontiers = enumerate_frontier(n, leaves, opts)?;
    best_in(&frontiers[&n], i).ok_or_else(|| Error::InvalidInput(format!("no vector of dimension {n} reachable")))
}

fn best_in(frontier: &Frontier, i: usize) -> Option<(Q, Arc<Plan>)> {
    // entries are sorted by plan, so the first maximum is the smallest witness
    let mut best: Option<&FrontierEntry> = None;
    for e in &frontier.entries {
        if best.is_none_or(|b| e.vector.get(i as i64) > b.vector.get(i as i64)) {
            best = Some(e);
        }
    }
    best.map(|e| (e.vector.get(i as i64), e.plan.clone()))
}

/// One row of the t-table: best surplus `t^n_i` and its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TRow {
    pub n: usize,
    pub i: usize,
    pub x: Q,
    pub t: Q,
    pub plan: Arc<Plan>,
}

/// Best coefficients for every `n <= n_max` and every `i`.
pub fn t_table(n_max: usize, leaves: &[String], opts: &SearchOptions) -> Result<Vec<TRow>> {
    let frontiers = enumerate_frontier(n_max, leaves, opts)?;
    let mut rows = Vec::new();
    for (&n, frontier) in &frontiers {
        let a = hodge_row(n);
        for i in 0..n {
            if let Some((x, plan)) = best_in(frontier, i) {
                rows.push(TRow { n, i, t: &x - a.get(i as i64), x, plan });
            }
        }
    }
    Ok(rows)
}

// ============================================================================
// The F⁻ family
// ============================================================================

/// Members `F⁻_3 ..= F⁻_{n_max}` as scaled vectors: Brugallé-minus at 3, then
/// standard at 1 and 2, Brugallé-minus at 3 and the earlier members above.
pub(crate) fn f_minus_scaled(n_max: usize) -> Vec<Scaled> {
    let mut seq: Vec<Scaled> = vec![Scaled::from_entries(&[])];
    for k in 1..=n_max.max(3) {
        let v = match k {
            1 | 2 => Scaled::from_entries(hodge_row(k).values.as_slice()),
            3 => Scaled::from_entries(crate::cooking::brugalle(crate::cooking::BrugalleSign::Minus).entries()),
            _ => {
                let parts: Vec<&Scaled> = seq[1..k].iter().collect();
                cook_scaled(k, &parts)
            }
        };
        seq.push(v);
    }
    seq
}

/// The F⁻ member of dimension `n >= 3`.
pub fn f_minus(n: usize) -> Result<CoeffVector> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("F- starts at n = 3, got {n}")));
    }
    Ok(CoeffVector::new(n, f_minus_scaled(n)[n].to_entries())?.named(format!("F-_{n}")))
}

/// `(x_m - a_m) / a_m` at the midpoint `m = (n-1)/2` of F⁻ for each odd `n` in the list.
pub fn midpoint_ratio_table(n_list: &[usize]) -> Result<Vec<(usize, Q)>> {
    if let Some(&bad) = n_list.iter().find(|&&n| n % 2 == 0 || n < 3) {
        return Err(Error::InvalidInput(format!("midpoint ratio needs odd n >= 3, got {bad}")));
    }
    let max = n_list.iter().copied().max().unwrap_or(3);
    let seq = f_minus_scaled(max);
    Ok(n_list
        .iter()
        .map(|&n| {
            let m = (n - 1) / 2;
            let x = Q::new(seq[n].num[m].clone(), seq[n].den.clone());
            let a = hodge_row(n).get(m as i64);
            (n, (x - &a) / a)
        })
        .collect())
}

/// `√10/3 - 1`.
#[must_use]
pub fn f_minus_ratio_limit() -> f64 {
    10f64.sqrt() / 3.0 - 1.0
}

/// Whether the tail of a ratio table moves monotonically towards `limit`.
#[must_use]
pub fn approaches_monotonically(table: &[(usize, Q)], limit: f64) -> bool {
    let gaps: Vec<f64> = table.iter().map(|(_, r)| (to_f64(r) - limit).abs()).collect();
    gaps.windows(2).all(|w| w[1] <= w[0])
}

/// Frontier sizes by dimension, for reporting.
#[must_use]
pub fn frontier_sizes(frontiers: &BTreeMap<usize, Frontier>) -> Vec<(usize, usize)> {
    frontiers.iter().map(|(&k, f)| (k, f.len())).collect()
}

/// Float view of a rational, for CSV columns.
#[must_use]
pub fn approx(x: &Q) -> f64 {
    to_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooking::{brugalle, cook_h, standard, BrugalleSign};
    use crate::rational::q;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn evaluate_leaves_and_nodes() {
        assert_eq!(evaluate(&Plan::leaf("standard", 3)).unwrap(), standard(3));
        let node = Plan::node(vec![Plan::leaf("standard", 1), Plan::leaf("standard", 2), Plan::leaf("brugalle+", 3)]);
        let direct = cook(&IngredientSet::standard(4).with(3, brugalle(BrugalleSign::Plus))).unwrap();
        assert_eq!(evaluate(&node).unwrap().entries(), direct.entries());

        let children: Vec<Plan> =
            (1..8).map(|k| if k == 3 { Plan::leaf("brugalle+", 3) } else { Plan::leaf("standard", k) }).collect();
        assert_eq!(evaluate(&Plan::node(children)).unwrap().entries(), cook_h(8, BrugalleSign::Plus).unwrap().entries());
    }

    #[test]
    fn malformed_plans() {
        assert!(matches!(evaluate(&Plan::leaf("nope", 2)), Err(Error::UnknownLeaf(_))));
        let wrong = Plan::node(vec![Plan::leaf("standard", 1), Plan::leaf("standard", 3)]);
        assert!(evaluate(&wrong).is_err());
    }

    #[test]
    fn plan_order() {
        let l = Plan::leaf("standard", 4);
        let n = Plan::node(vec![Plan::leaf("standard", 1), Plan::leaf("standard", 2), Plan::leaf("brugalle+", 3)]);
        assert!(l < n);
        assert!(Plan::leaf("brugalle+", 3) < Plan::leaf("brugalle-", 3));
    }

    #[test]
    fn standard_only_frontiers() {
        let f = enumerate_frontier(5, &names(&["standard"]), &SearchOptions::default()).unwrap();
        for k in 1..=5 {
            assert_eq!(f[&k].len(), 1);
            assert_eq!(f[&k].entries[0].vector.entries(), standard(k).entries());
            assert_eq!(*f[&k].entries[0].plan, Plan::leaf("standard", k));
        }
    }

    #[test]
    fn frontier_four_has_three_vectors() {
        let leaves = names(&["standard", "brugalle+", "brugalle-"]);
        let f = enumerate_frontier(4, &leaves, &SearchOptions::default()).unwrap();
        assert_eq!(f[&3].len(), 3);
        assert_eq!(f[&4].len(), 3);
    }

    #[test]
    fn best_in_dimension_three() {
        let leaves = names(&["standard", "brugalle+", "brugalle-"]);
        let opts = SearchOptions::default();
        let (v, p) = best_coefficient(3, 0, &leaves, &opts).unwrap();
        assert_eq!((v, &*p), (q(3, 8), &Plan::leaf("brugalle+", 3)));
        let (v, p) = best_coefficient(3, 1, &leaves, &opts).unwrap();
        assert_eq!((v, &*p), (q(3, 4), &Plan::leaf("brugalle-", 3)));
    }

    #[test]
    fn cap_is_enforced() {
        let leaves = names(&["standard", "brugalle+", "brugalle-"]);
        let opts = SearchOptions { cap: 50, ..SearchOptions::default() };
        assert_eq!(enumerate_frontier(6, &leaves, &opts), Err(Error::CapExceeded { dim: 6, cap: 50 }));
    }

    #[test]
    fn leaf_expansion() {
        let opts = SearchOptions::default();
        assert_eq!(expand_leaves("std,brugalle", &opts).unwrap(), names(&["brugalle+", "brugalle-", "standard"]));
        assert_eq!(expand_leaves("interp", &opts).unwrap().len(), 3);
        assert!(expand_leaves("foo", &opts).is_err());
    }

    #[test]
    fn f_minus_small() {
        assert_eq!(f_minus(3).unwrap(), brugalle(BrugalleSign::Minus).named("F-_3"));
        let v5 = f_minus(5).unwrap();
        assert!(v5.is_maximal() && v5.is_symmetric());
        let direct = cook(&IngredientSet::standard(5).with(3, brugalle(BrugalleSign::Minus)).with(4, f_minus(4).unwrap()))
            .unwrap();
        assert_eq!(v5.entries(), direct.entries());
        assert!(midpoint_ratio_table(&[4]).is_err());
    }
}
