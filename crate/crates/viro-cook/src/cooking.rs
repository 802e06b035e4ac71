//! The cooking recursion on asymptotic Betti-coefficient vectors.
//!
//! Given coefficient vectors `x^k` for `k = 1..n-1`, cooking produces
//!
//! ```text
//! x^n_i = (1/n) (x^{n-1}_i + x^{n-1}_{i-1} + Σ_{k=1}^{n-2} Σ_{j=0}^{i-1} x^k_j x^{n-1-k}_{i-1-j})
//! ```
//!
//! with `x^k_j = 0` outside `0..k`. For maximal ingredients the asymptotic
//! inequality is an equality, and the output is again maximal; non-maximal
//! ingredients are cooked too and the result is flagged as a lower bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::coefficients::{hodge_row, second_diff};
use crate::error::{Error, Result};
use crate::rational::{factorial, fmt_q, q, Q};

// ============================================================================
// Coefficient vectors
// ============================================================================

/// Betti coefficients `x^n_i` of a family of hypersurfaces of projective `n`-space.
///
/// Indexed over all of `ℤ` through [`CoeffVector::get`]; entries outside
/// `0..n` read as zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffVector {
    pub n: usize,
    x: Vec<Q>,
    pub name: Option<String>,
    /// Set when some ingredient was not maximal, so the values only bound the Betti numbers.
    pub lower_bound_only: bool,
}

impl CoeffVector {
    /// A vector of dimension `n` with entries `x_0..x_{n-1}`.
    pub fn new(n: usize, x: Vec<Q>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        if let Some(v) = x.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidInput(format!("negative coefficient {}", fmt_q(v))));
        }
        Ok(Self { n, x, name: None, lower_bound_only: false })
    }

    #[must_use]
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `x_i`, zero outside `0..n`.
    #[must_use]
    pub fn get(&self, i: i64) -> Q {
        if i < 0 || i >= self.n as i64 {
            Q::zero()
        } else {
            self.x[i as usize].clone()
        }
    }

    #[must_use]
    pub fn entries(&self) -> &[Q] {
        &self.x
    }

    #[must_use]
    pub fn sum(&self) -> Q {
        self.x.iter().fold(Q::zero(), |acc, v| acc + v)
    }

    /// `Σ x_i = 1`.
    #[must_use]
    pub fn is_maximal(&self) -> bool {
        self.sum().is_one()
    }

    /// `x_i = x_{n-1-i}`.
    #[must_use]
    pub fn is_symmetric(&self) -> bool {
        self.x.iter().eq(self.x.iter().rev())
    }
}

impl fmt::Display for CoeffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.x.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `t_i = x_i - a^n_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurplusVector {
    pub n: usize,
    pub t: Vec<Q>,
}

impl SurplusVector {
    #[must_use]
    pub fn get(&self, i: i64) -> Q {
        if i < 0 || i >= self.n as i64 {
            Q::zero()
        } else {
            self.t[i as usize].clone()
        }
    }

    #[must_use]
    pub fn sum(&self) -> Q {
        self.t.iter().fold(Q::zero(), |acc, v| acc + v)
    }
}

/// Surplus over the standard coefficients.
#[must_use]
pub fn surplus(v: &CoeffVector) -> SurplusVector {
    let a = hodge_row(v.n);
    SurplusVector { n: v.n, t: (0..v.n as i64).map(|i| v.get(i) - a.get(i)).collect() }
}

/// One ingredient vector per dimension `k = 1..n-1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngredientSet {
    pub n: usize,
    per_dim: BTreeMap<usize, CoeffVector>,
}

impl IngredientSet {
    #[must_use]
    pub fn new(n: usize) -> Self {
        Self { n, per_dim: BTreeMap::new() }
    }

    /// Standard ingredients in every dimension `1..n-1`.
    #[must_use]
    pub fn standard(n: usize) -> Self {
        let mut set = Self::new(n);
        for k in 1..n {
            set.per_dim.insert(k, standard(k));
        }
        set
    }

    pub fn insert(&mut self, k: usize, v: CoeffVector) -> Result<()> {
        if k == 0 || k >= self.n {
            return Err(Error::InvalidInput(format!("dimension {k} outside 1..{}", self.n - 1)));
        }
        if v.n != k {
            return Err(Error::DimensionMismatch { expected: k, found: v.n });
        }
        self.per_dim.insert(k, v);
        Ok(())
    }

    #[must_use]
    pub fn with(mut self, k: usize, v: CoeffVector) -> Self {
        self.insert(k, v).expect("ingredient dimension");
        self
    }

    #[must_use]
    pub fn get(&self, k: usize) -> Option<&CoeffVector> {
        self.per_dim.get(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &CoeffVector)> {
        self.per_dim.iter()
    }
}

// ============================================================================
// Registry
// ============================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BrugalleSign {
    Plus,
    Minus,
}

/// The Itenberg-Viro coefficients `a^n`.
#[must_use]
pub fn standard(n: usize) -> CoeffVector {
    CoeffVector::new(n, hodge_row(n).values.clone()).expect("a^n is valid").named(format!("standard_{n}"))
}

/// Brugallé's two dimension-3 families.
#[must_use]
pub fn brugalle(sign: BrugalleSign) -> CoeffVector {
    let (x, name) = match sign {
        BrugalleSign::Plus => (vec![q(3, 8), q(1, 4), q(3, 8)], "brugalle+"),
        BrugalleSign::Minus => (vec![q(1, 8), q(3, 4), q(1, 8)], "brugalle-"),
    };
    CoeffVector::new(3, x).expect("valid").named(name)
}

/// `(1/6 + a, 4/6 - 2a, 1/6 + a)` for `-1/24 <= a <= 5/24`.
pub fn interpolate_dim3(a: &Q) -> Result<CoeffVector> {
    if *a < q(-1, 24) || *a > q(5, 24) {
        return Err(Error::InvalidInput(format!("interpolation parameter {} outside [-1/24, 5/24]", fmt_q(a))));
    }
    let side = q(1, 6) + a;
    let mid = q(2, 3) - a * Q::from_integer(BigInt::from(2));
    Ok(CoeffVector::new(3, vec![side.clone(), mid, side])?.named(format!("interp:{}", fmt_q(a))))
}

/// Resolves a registry name (`standard`, `brugalle+`, `brugalle-`, `interp:<a>`) in dimension `n`.
pub fn registry_leaf(name: &str, n: usize) -> Result<CoeffVector> {
    let need3 = |v: CoeffVector| {
        if n == 3 {
            Ok(v)
        } else {
            Err(Error::DimensionMismatch { expected: 3, found: n })
        }
    };
    match name {
        "standard" | "std" => {
            if n == 0 {
                Err(Error::InvalidInput("dimension must be positive".into()))
            } else {
                Ok(standard(n))
            }
        }
        "brugalle+" | "b+" => need3(brugalle(BrugalleSign::Plus)),
        "brugalle-" | "b-" => need3(brugalle(BrugalleSign::Minus)),
        other => match other.strip_prefix("interp:") {
            Some(a) => need3(interpolate_dim3(&crate::rational::parse_q(a)?)?),
            None => Err(Error::UnknownLeaf(other.to_string())),
        },
    }
}

// ============================================================================
// The recursion
// ============================================================================

/// Vector with integer numerators over one common denominator; the working
/// representation for long recursions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Scaled {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl Scaled {
    pub fn from_entries(x: &[Q]) -> Self {
        let den = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let num = x.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        Self { num, den }
    }

    pub fn to_entries(&self) -> Vec<Q> {
        self.num.iter().map(|v| Q::new(v.clone(), self.den.clone())).collect()
    }

    fn reduce(&mut self) {
        let g = self.num.iter().fold(self.den.clone(), |acc, v| acc.gcd(v));
        if !g.is_one() && !g.is_zero() {
            for v in &mut self.num {
                *v /= &g;
            }
            self.den /= &g;
        }
    }
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Cooks dimension `n` from `parts[k-1] = x^k`, `k = 1..n-1`.
pub(crate) fn cook_scaled(n: usize, parts: &[&Scaled]) -> Scaled {
    assert!(n >= 2 && parts.len() == n - 1);
    let top = parts[n - 2];
    // (numerators of length n - 2 shifted by one, denominator) for each product term
    let mut terms: Vec<(Vec<BigInt>, BigInt, u32)> = Vec::new();
    for k in 1..=(n - 1) / 2 {
        let other = n - 1 - k;
        if k > n - 2 || other < 1 {
            continue;
        }
        let mult = if k == other { 1 } else { 2 };
        let c = convolve(&parts[k - 1].num, &parts[other - 1].num);
        terms.push((c, &parts[k - 1].den * &parts[other - 1].den, mult));
    }
    let lcm = terms.iter().fold(top.den.clone(), |acc, (_, d, _)| acc.lcm(d));
    let mut num = vec![BigInt::zero(); n];
    let f = &lcm / &top.den;
    for (i, v) in top.num.iter().enumerate() {
        let s = v * &f;
        num[i] += &s;
        num[i + 1] += s;
    }
    for (c, d, mult) in terms {
        let f = (&lcm / d) * mult;
        for (i, v) in c.into_iter().enumerate() {
            num[i + 1] += v * &f;
        }
    }
    let mut out = Scaled { num, den: lcm * n };
    out.reduce();
    out
}

/// Cooks the ingredient set into a dimension-`n` vector.
///
/// Checks the conservation laws on the way out: maximal ingredients give a
/// maximal result and symmetric ingredients a symmetric one. A failure there is
/// reported as [`Error::InvariantViolation`].
pub fn cook(ing: &IngredientSet) -> Result<CoeffVector> {
    let n = ing.n;
    if n < 2 {
        return Err(Error::InvalidInput("cooking needs n >= 2".into()));
    }
    let mut scaled = Vec::with_capacity(n - 1);
    for k in 1..n {
        let v = ing.get(k).ok_or(Error::MissingDimension(k))?;
        if v.n != k {
            return Err(Error::DimensionMismatch { expected: k, found: v.n });
        }
        scaled.push(Scaled::from_entries(v.entries()));
    }
    let refs: Vec<&Scaled> = scaled.iter().collect();
    let mut out = CoeffVector::new(n, cook_scaled(n, &refs).to_entries())?;
    let all_maximal = ing.iter().all(|(_, v)| v.is_maximal());
    let all_symmetric = ing.iter().all(|(_, v)| v.is_symmetric());
    out.lower_bound_only = !all_maximal || ing.iter().any(|(_, v)| v.lower_bound_only);
    if all_maximal && !out.is_maximal() {
        return Err(Error::InvariantViolation(format!("maximality lost at n = {n}")));
    }
    if all_symmetric && !out.is_symmetric() {
        return Err(Error::InvariantViolation(format!("symmetry lost at n = {n}")));
    }
    Ok(out)
}

// ============================================================================
// Derived families
// ============================================================================

fn h_coefficient(sign: BrugalleSign) -> Q {
    match sign {
        BrugalleSign::Plus => q(5, 24),
        BrugalleSign::Minus => q(-1, 24),
    }
}

/// `a^n_i + (2/n) c D²a^{n-4}_{i-2}` with `c = 5/24` (plus) or `-1/24` (minus).
#[must_use]
pub fn cook_h_closed_form(n: usize, sign: BrugalleSign) -> Vec<Q> {
    let c = h_coefficient(sign) * q(2, n as i64);
    let a = hodge_row(n);
    (0..n as i64).map(|i| a.get(i) + &c * second_diff(n - 4, i - 2)).collect()
}

/// Brugallé's family at `k = 3`, standard everywhere else, cooked into dimension `n >= 8`.
/// The result is checked against [`cook_h_closed_form`].
pub fn cook_h(n: usize, sign: BrugalleSign) -> Result<CoeffVector> {
    if n < 8 {
        return Err(Error::InvalidInput(format!("cook_h needs n >= 8, got {n}")));
    }
    let ing = IngredientSet::standard(n).with(3, brugalle(sign));
    let out = cook(&ing)?;
    if out.entries() != cook_h_closed_form(n, sign).as_slice() {
        return Err(Error::InvariantViolation(format!("cook_h({n}) differs from its closed form")));
    }
    let tag = if sign == BrugalleSign::Plus { '+' } else { '-' };
    Ok(out.named(format!("H{tag}_{n}")))
}

/// `a^n_0 + (5/24) 3!/n!`.
#[must_use]
pub fn cook_l_bound(n: usize) -> Q {
    hodge_row(n).get(0) + q(5, 24) * Q::new(BigInt::from(6), factorial(n as u64))
}

/// The L family: Brugallé-plus at `n = 3`, then standard ingredients below
/// `n-1` and the previous member at `n-1`. Checks the lower bound on `x_0`.
pub fn cook_l(n: usize) -> Result<CoeffVector> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("cook_l needs n >= 3, got {n}")));
    }
    let mut cur = brugalle(BrugalleSign::Plus);
    for m in 4..=n {
        cur = cook(&IngredientSet::standard(m).with(m - 1, cur))?;
    }
    if cur.get(0) < cook_l_bound(n) {
        return Err(Error::InvariantViolation(format!("cook_l({n}) misses its bound on x_0")));
    }
    Ok(cur.named(format!("L_{n}")))
}
