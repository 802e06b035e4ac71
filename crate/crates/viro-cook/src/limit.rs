//! Gaussian limit of cooked coefficient distributions.
//!
//! With ingredients fixed for `k = 1..N` and every later level cooked from all
//! earlier ones, `x^n` is a recursive convolution. Writing the edge terms with
//! an artificial level `x^0` (mass 1/2 at `-1` and at `0`) turns the recursion
//! into `x^n_i = (1/n) Σ_{k=0}^{n-1} Σ_j x^k_j x^{n-1-k}_{i-1-j}`, and the
//! recentred distributions converge to a Gaussian of variance `σ²`.
//!
//! The splitting process counts parts of each size in a random recursive
//! partition of `{1..n}`; its first two moments are computed exactly here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coefficients::hodge_row;
use crate::cooking::{cook_scaled, CoeffVector, Scaled};
use crate::error::{Error, Result};
use crate::rational::{q, qi, to_f64, Q};

/// Levels up to this dimension are computed exactly by default.
pub const DEFAULT_EXACT_HORIZON: usize = 60;

// ============================================================================
// Half-integer distributions
// ============================================================================

/// Finite distribution on `½ℤ`, keyed by twice the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntDistribution {
    pub masses: BTreeMap<i64, Q>,
}

impl HalfIntDistribution {
    #[must_use]
    pub fn mass_at(&self, doubled_point: i64) -> Q {
        self.masses.get(&doubled_point).cloned().unwrap_or_else(Q::zero)
    }

    #[must_use]
    pub fn total(&self) -> Q {
        self.masses.values().fold(Q::zero(), |a, m| a + m)
    }

    #[must_use]
    pub fn mean(&self) -> Q {
        self.masses.iter().fold(Q::zero(), |a, (p, m)| a + m * q(*p, 2))
    }

    #[must_use]
    pub fn variance(&self) -> Q {
        let mu = self.mean();
        self.masses.iter().fold(Q::zero(), |a, (p, m)| {
            let d = q(*p, 2) - &mu;
            a + m * &d * &d
        })
    }

    /// True when every point carrying mass is an integer (`want_half = false`)
    /// or a proper half-integer (`want_half = true`).
    #[must_use]
    pub fn support_parity_is(&self, want_half: bool) -> bool {
        self.masses.iter().filter(|(_, m)| !m.is_zero()).all(|(p, _)| (p.rem_euclid(2) == 1) == want_half)
    }
}

/// `x̃^k_i = x^{k-1}_{i + (k-2)/2}` for `x` of dimension `k - 1`.
pub fn shift_distribution(x: &CoeffVector, k: usize) -> Result<HalfIntDistribution> {
    if k < 2 || x.n != k - 1 {
        return Err(Error::DimensionMismatch { expected: k.saturating_sub(1), found: x.n });
    }
    let masses = x.entries().iter().enumerate().map(|(j, m)| (2 * j as i64 - (k as i64 - 2), m.clone())).collect();
    Ok(HalfIntDistribution { masses })
}

/// Shift of the artificial level `x^0` to `k = 1`: mass 1/2 at `±1/2`.
#[must_use]
pub fn floor_distribution() -> HalfIntDistribution {
    // x^0 sits at -1 and 0, the shift at k = 1 adds 1/2
    HalfIntDistribution { masses: [(-1, q(1, 2)), (1, q(1, 2))].into_iter().collect() }
}

// ============================================================================
// The recursion
// ============================================================================

fn check_ingredients(ingredients: &[CoeffVector]) -> Result<()> {
    if ingredients.is_empty() {
        return Err(Error::InvalidInput("need at least one ingredient (N >= 1)".into()));
    }
    for (idx, v) in ingredients.iter().enumerate() {
        let k = idx + 1;
        if v.n != k {
            return Err(Error::DimensionMismatch { expected: k, found: v.n });
        }
        if !v.is_maximal() {
            return Err(Error::InvalidInput(format!("ingredient of dimension {k} is not maximal")));
        }
        if !v.is_symmetric() {
            return Err(Error::InvalidInput(format!("ingredient of dimension {k} is not symmetric")));
        }
    }
    Ok(())
}

/// Levels `x^1..x^{n_target}` of the recursion.
#[derive(Debug, Clone)]
pub struct DistributionSeq {
    /// Number of fixed ingredient levels.
    pub floor: usize,
    pub horizon: usize,
    /// `exact[k - 1] = x^k` for `k <= min(horizon, n_target)`.
    pub exact: Vec<CoeffVector>,
    /// `float[k - 1] = x^k` for every `k`.
    pub float: Vec<Vec<f64>>,
    /// Max deviation between the exact last level and its float recomputation.
    pub switch_error: f64,
}

impl DistributionSeq {
    #[must_use]
    pub fn row(&self, n: usize) -> &[f64] {
        &self.float[n - 1]
    }

    #[must_use]
    pub fn exact_row(&self, n: usize) -> Option<&CoeffVector> {
        self.exact.get(n - 1)
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.float.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.float.is_empty()
    }
}

/// One step of the float recursion from levels `1..n-1`.
fn float_step(n: usize, levels: &[Vec<f64>]) -> Vec<f64> {
    let top = &levels[n - 2];
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = top.get(i).copied().unwrap_or(0.0) + if i > 0 { top[i - 1] } else { 0.0 };
            if i >= 1 {
                for k in 1..=n.saturating_sub(2) {
                    let a = &levels[k - 1];
                    let b = &levels[n - 2 - k];
                    // j ranges over 0..k and i-1-j over 0..n-1-k
                    let lo = (i - 1).saturating_sub(b.len() - 1);
                    let hi = (i - 1).min(a.len() - 1);
                    for j in lo..hi + 1 {
                        s += a[j] * b[i - 1 - j];
                    }
                }
            }
            s / n as f64
        })
        .collect()
}

/// Runs the recursion to `n_target`, exactly up to `horizon` and in `f64` after.
///
/// Ingredients must be maximal and symmetric. Exact levels up to 20 are
/// checked against a direct evaluation of the `x^0` form.
pub fn iterate_distribution(ingredients: &[CoeffVector], n_target: usize, horizon: usize) -> Result<DistributionSeq> {
    check_ingredients(ingredients)?;
    let floor = ingredients.len();
    let exact_top = n_target.min(horizon.max(floor));
    let mut scaled: Vec<Scaled> = Vec::with_capacity(exact_top);
    let mut exact: Vec<CoeffVector> = Vec::with_capacity(exact_top);
    for k in 1..=exact_top {
        let s = if k <= floor {
            Scaled::from_entries(ingredients[k - 1].entries())
        } else {
            let parts: Vec<&Scaled> = scaled.iter().collect();
            cook_scaled(k, &parts)
        };
        let v = CoeffVector::new(k, s.to_entries())?;
        if k > floor && k <= 20 && v.entries() != proof_form_step(k, &exact).as_slice() {
            return Err(Error::InvariantViolation(format!("recursion forms disagree at n = {k}")));
        }
        scaled.push(s);
        exact.push(v);
    }
    let mut float: Vec<Vec<f64>> = exact.iter().map(|v| v.entries().iter().map(to_f64).collect()).collect();
    let mut switch_error = 0.0;
    if exact_top > floor {
        let redo = float_step(exact_top, &float[..exact_top - 1]);
        switch_error = redo.iter().zip(&float[exact_top - 1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    }
    for n in exact_top + 1..=n_target {
        let next = float_step(n, &float);
        float.push(next);
    }
    Ok(DistributionSeq { floor, horizon, exact, float, switch_error })
}

/// `x^n` from the full `k = 0..n-1` sum with the artificial level `x^0`.
fn proof_form_step(n: usize, below: &[CoeffVector]) -> Vec<Q> {
    let get = |k: usize, j: i64| -> Q {
        if k == 0 {
            if j == -1 || j == 0 {
                q(1, 2)
            } else {
                Q::zero()
            }
        } else {
            below[k - 1].get(j)
        }
    };
    (0..n as i64)
        .map(|i| {
            let mut s = Q::zero();
            for k in 0..n {
                for j in -1..=(k as i64) {
                    let a = get(k, j);
                    if !a.is_zero() {
                        s += a * get(n - 1 - k, i - 1 - j);
                    }
                }
            }
            s / qi(n as i64)
        })
        .collect()
}

/// `σ² = 2/((N+1)(N+2)) (1/4 + Σ_k Σ_i x^k_i (i - (k-1)/2)²)`.
pub fn sigma_squared(ingredients: &[CoeffVector]) -> Result<Q> {
    check_ingredients(ingredients)?;
    let big_n = ingredients.len() as i64;
    let mut s = q(1, 4);
    for v in ingredients {
        let centre = q(v.n as i64 - 1, 2);
        for (i, x) in v.entries().iter().enumerate() {
            let d = qi(i as i64) - &centre;
            s += x * &d * &d;
        }
    }
    Ok(q(2, (big_n + 1) * (big_n + 2)) * s)
}

/// `1/(σ√(2πn)) exp(-((n-1)/2 - m)² / (2nσ²))`.
#[must_use]
pub fn gaussian(m: f64, n: usize, sigma2: f64) -> f64 {
    let n = n as f64;
    let z = (n - 1.0) / 2.0 - m;
    (-(z * z) / (2.0 * n * sigma2)).exp() / (sigma2.sqrt() * (2.0 * std::f64::consts::PI * n).sqrt())
}

/// `√n · max_m |x^n_m - gaussian(m)|`.
pub fn gaussian_error(seq: &DistributionSeq, sigma2: &Q, n: usize) -> Result<f64> {
    if n <= seq.floor || n > seq.len() {
        return Err(Error::InvalidInput(format!("level {n} not in {}..={}", seq.floor + 1, seq.len())));
    }
    let s2 = to_f64(sigma2);
    let sup = seq.row(n).iter().enumerate().map(|(m, x)| (x - gaussian(m as f64, n, s2)).abs()).fold(0.0, f64::max);
    Ok((n as f64).sqrt() * sup)
}

/// `(x^n_m - a^n_m)/a^n_m` at `m = (n-1)/2`, for odd `n`.
pub fn midpoint_ratio(seq: &DistributionSeq, n: usize) -> Option<f64> {
    if n.is_multiple_of(2) || n > seq.len() {
        return None;
    }
    let m = (n - 1) / 2;
    let x = match seq.exact_row(n) {
        Some(v) => {
            let a = hodge_row(n).get(m as i64);
            return Some(to_f64(&((v.get(m as i64) - &a) / a)));
        }
        None => seq.row(n)[m],
    };
    let a = to_f64(&hodge_row(n).get(m as i64));
    Some((x - a) / a)
}

// ============================================================================
// Splitting process
// ============================================================================

/// Exact first two moments of `α_i^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMoments {
    pub big_n: usize,
    pub n: usize,
    pub i: usize,
    pub mean: Q,
    pub second_moment: Q,
    pub variance: Q,
}

/// Moments of `α_i^k` for `k = 1..=n_max`, from the recursions
/// `E[α^{n+1}] = (2/n) Σ_{k<=n} E[α^k]` and
/// `E[(α^{n+1})²] = (2/n) Σ_{k<=n} (E[(α^k)²] + E[α^k] E[α^{n+1-k}])`.
pub fn split_moment_table(big_n: usize, i: usize, n_max: usize) -> Result<Vec<SplitMoments>> {
    if big_n == 0 || i == 0 || i > big_n {
        return Err(Error::InvalidInput(format!("need 1 <= i <= N, got i = {i}, N = {big_n}")));
    }
    let mut e1: Vec<Q> = vec![Q::zero()];
    let mut e2: Vec<Q> = vec![Q::zero()];
    for k in 1..=n_max.max(big_n) {
        if k <= big_n {
            let v = if k == i { Q::one() } else { Q::zero() };
            e1.push(v.clone());
            e2.push(v);
        } else {
            let m = k - 1;
            let scale = q(2, m as i64);
            let s1: Q = e1[1..=m].iter().sum();
            let mut s2: Q = e2[1..=m].iter().sum();
            for j in 1..=m {
                s2 += &e1[j] * &e1[k - j];
            }
            e1.push(&scale * s1);
            e2.push(&scale * s2);
        }
    }
    Ok((1..=n_max)
        .map(|n| SplitMoments {
            big_n,
            n,
            i,
            variance: &e2[n] - &e1[n] * &e1[n],
            mean: e1[n].clone(),
            second_moment: e2[n].clone(),
        })
        .collect())
}

/// Moments of `α_i^n`.
pub fn split_moments(big_n: usize, n: usize, i: usize) -> Result<SplitMoments> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    Ok(split_moment_table(big_n, i, n)?.pop().expect("n >= 1"))
}

/// `2n/((N+1)N)`.
#[must_use]
pub fn split_mean_formula(big_n: usize, n: usize) -> Q {
    q(2 * n as i64, ((big_n + 1) * big_n) as i64)
}

/// First `n` from which `Var(α_i^n)/n` stays constant up to `n_max`, with the constant.
pub fn variance_proportional_from(big_n: usize, i: usize, n_max: usize) -> Result<Option<(usize, Q)>> {
    let table = split_moment_table(big_n, i, n_max)?;
    let ratios: Vec<Q> = table.iter().map(|m| &m.variance / qi(m.n as i64)).collect();
    let last = match ratios.last() {
        Some(r) => r.clone(),
        None => return Ok(None),
    };
    let start = ratios.iter().rposition(|r| *r != last).map_or(1, |p| p + 2);
    Ok((start < n_max).then_some((start, last)))
}

/// Monte-Carlo estimate of `E[α_i^n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSimulation {
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

fn sample_alpha(rng: &mut ChaCha8Rng, big_n: usize, i: usize, m: usize) -> u64 {
    if m <= big_n {
        u64::from(m == i)
    } else {
        let k = rng.gen_range(1..m);
        sample_alpha(rng, big_n, i, k) + sample_alpha(rng, big_n, i, m - k)
    }
}

/// Simulates the splitting process; deterministic for a fixed seed.
pub fn simulate_split(big_n: usize, n: usize, i: usize, trials: u64, seed: u64) -> Result<SplitSimulation> {
    if big_n == 0 || i == 0 || i > big_n || trials < 2 {
        return Err(Error::InvalidInput("need 1 <= i <= N and at least two trials".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s1, mut s2) = (0f64, 0f64);
    for _ in 0..trials {
        let a = sample_alpha(&mut rng, big_n, i, n) as f64;
        s1 += a;
        s2 += a * a;
    }
    let t = trials as f64;
    let mean = s1 / t;
    let variance = (s2 - t * mean * mean) / (t - 1.0);
    Ok(SplitSimulation { trials, mean, variance, std_error: (variance / t).sqrt() })
}

/// Exact integer check used by callers that want `Var = C·n` on a range.
#[must_use]
pub fn is_proportional(table: &[SplitMoments], from: usize) -> bool {
    let mut ratios = table.iter().filter(|m| m.n >= from).map(|m| &m.variance / Q::from_integer(BigInt::from(m.n)));
    match ratios.next() {
        Some(first) => ratios.all(|r| r == first) && !first.is_negative(),
        None => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooking::{brugalle, cook, standard, BrugalleSign, IngredientSet};
    use crate::search::f_minus;

    fn floor3(sign: BrugalleSign) -> Vec<CoeffVector> {
        vec![standard(1), standard(2), brugalle(sign)]
    }

    #[test]
    fn standard_floor_reproduces_a() {
        let seq = iterate_distribution(&[standard(1)], 20, 60).unwrap();
        for n in 1..=20 {
            assert_eq!(seq.exact_row(n).unwrap().entries(), standard(n).entries());
        }
    }

    #[test]
    fn brugalle_floor_matches_cook_and_f_minus() {
        let seq = iterate_distribution(&floor3(BrugalleSign::Plus), 4, 60).unwrap();
        let direct = cook(&IngredientSet::standard(4).with(3, brugalle(BrugalleSign::Plus))).unwrap();
        assert_eq!(seq.exact_row(4).unwrap().entries(), direct.entries());
        let seq = iterate_distribution(&floor3(BrugalleSign::Minus), 12, 60).unwrap();
        assert_eq!(seq.exact_row(12).unwrap().entries(), f_minus(12).unwrap().entries());
    }

    #[test]
    fn hypotheses_rejected() {
        let half = CoeffVector::new(1, vec![q(1, 2)]).unwrap();
        assert!(iterate_distribution(&[half], 5, 60).is_err());
        let skew = CoeffVector::new(2, vec![q(1, 3), q(2, 3)]).unwrap();
        assert!(iterate_distribution(&[standard(1), skew.clone()], 5, 60).is_err());
        assert!(sigma_squared(&[standard(1), skew]).is_err());
    }

    #[test]
    fn float_tail_is_consistent() {
        let seq = iterate_distribution(&[standard(1)], 30, 15).unwrap();
        assert!(seq.switch_error < 1e-14);
        let exact = iterate_distribution(&[standard(1)], 30, 60).unwrap();
        for n in 16..=30 {
            let diff = seq.row(n).iter().zip(exact.row(n)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-13, "n = {n}: {diff}");
            assert!((seq.row(n).iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shifts() {
        let f = floor_distribution();
        assert_eq!(f.mass_at(1), q(1, 2));
        assert_eq!(f.mass_at(-1), q(1, 2));
        let s = shift_distribution(&standard(2), 3).unwrap();
        assert_eq!(s, f);
        let s = shift_distribution(&brugalle(BrugalleSign::Plus), 4).unwrap();
        assert!(s.mean().is_zero());
        assert!(s.support_parity_is(false));
        assert_eq!(s.variance(), q(3, 4));
        assert!(shift_distribution(&standard(2), 4).is_err());
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma_squared(&floor3(BrugalleSign::Plus)).unwrap(), q(1, 8));
        assert_eq!(sigma_squared(&floor3(BrugalleSign::Minus)).unwrap(), q(3, 40));
        for big_n in 1..=3 {
            let ing: Vec<CoeffVector> = (1..=big_n).map(standard).collect();
            assert_eq!(sigma_squared(&ing).unwrap(), q(1, 12));
        }
    }

    #[test]
    fn split_means() {
        for big_n in 1..=5 {
            let t = split_moment_table(big_n, 1, 40).unwrap();
            for m in &t[big_n..] {
                assert_eq!(m.mean, split_mean_formula(big_n, m.n));
            }
            let base: Q = (1..=big_n).map(|k| split_moments(big_n, big_n, k).unwrap().mean).sum();
            assert_eq!(base, qi(1));
        }
        assert_eq!(split_moments(3, 12, 1).unwrap().mean, qi(2));
    }

    #[test]
    fn split_variance_is_proportional_only_from_2n_plus_1() {
        assert_eq!(variance_proportional_from(3, 1, 60).unwrap(), Some((7, q(181, 1260))));
        assert_eq!(variance_proportional_from(3, 3, 60).unwrap(), Some((7, q(23, 420))));
        assert_eq!(variance_proportional_from(2, 1, 60).unwrap(), Some((5, q(8, 45))));
        let t = split_moment_table(2, 1, 6).unwrap();
        assert_eq!(t[3].variance, q(8, 9));
        assert!(!is_proportional(&t, 4));
    }

    #[test]
    fn simulation_is_seeded() {
        let a = simulate_split(3, 12, 1, 2000, 7).unwrap();
        let b = simulate_split(3, 12, 1, 2000, 7).unwrap();
        assert_eq!(a, b);
    }
}
