//! Eulerian numbers and the Hodge coefficients `a^n_p = E(n,p)/n!`.
//!
//! Everything here is exact. Rows are memoized per `n` behind a mutex, so the
//! functions are cheap to call repeatedly and safe to share between threads.
//! Floating point only appears in [`polya_midpoint`].

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, sign, Q};

// ============================================================================
// Eulerian numbers
// ============================================================================

/// `E(n, 0..n-1)`: number of permutations of `{1..n}` with exactly `p` ascents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianRow {
    pub n: usize,
    pub values: Vec<BigInt>,
}

impl EulerianRow {
    /// `E(n, p)`, zero outside `0..n`.
    #[must_use]
    pub fn get(&self, p: i64) -> BigInt {
        if p < 0 || p >= self.n as i64 {
            BigInt::zero()
        } else {
            self.values[p as usize].clone()
        }
    }
}

fn eulerian_memo() -> &'static Mutex<Vec<Arc<EulerianRow>>> {
    static MEMO: OnceLock<Mutex<Vec<Arc<EulerianRow>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(Vec::new()))
}

/// Memoized row `E(n, ·)`, built with `E(n,p) = (n-p)E(n-1,p-1) + (p+1)E(n-1,p)`.
///
/// # Panics
/// Panics if `n == 0`.
#[must_use]
pub fn eulerian_row(n: usize) -> Arc<EulerianRow> {
    assert!(n >= 1, "Eulerian rows start at n = 1");
    let mut memo = eulerian_memo().lock().expect("eulerian memo poisoned");
    if memo.is_empty() {
        memo.push(Arc::new(EulerianRow { n: 1, values: vec![BigInt::one()] }));
    }
    while memo.len() < n {
        let prev = memo.last().expect("non-empty").clone();
        let m = prev.n + 1;
        let values = (0..m as i64)
            .map(|p| prev.get(p - 1) * (m as i64 - p) + prev.get(p) * (p + 1))
            .collect();
        memo.push(Arc::new(EulerianRow { n: m, values }));
    }
    memo[n - 1].clone()
}

/// `E(n, p)`; zero for `p < 0` or `p > n-1`.
///
/// # Panics
/// Panics if `n == 0`.
#[must_use]
pub fn eulerian(n: usize, p: i64) -> BigInt {
    eulerian_row(n).get(p)
}

/// `E(n,p) = Σ_{i=0}^{p} (-1)^i C(n+1,i) (p+1-i)^n`, evaluated directly.
#[must_use]
pub fn eulerian_closed_form(n: usize, p: i64) -> BigInt {
    if p < 0 || p >= n as i64 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    for i in 0..=p {
        let term = binomial(n as i64 + 1, i) * BigInt::from(p + 1 - i).pow(n as u32);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

// ============================================================================
// Hodge coefficients
// ============================================================================

/// `a^n_p` on `0..n`; zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeCoeffRow {
    pub n: usize,
    pub values: Vec<Q>,
}

impl HodgeCoeffRow {
    #[must_use]
    pub fn get(&self, p: i64) -> Q {
        if p < 0 || p >= self.n as i64 {
            Q::zero()
        } else {
            self.values[p as usize].clone()
        }
    }

    /// `(a_p)^2 >= a_{p-1} a_{p+1}` on the support.
    #[must_use]
    pub fn is_log_concave(&self) -> bool {
        (0..self.n as i64).all(|p| {
            let a = self.get(p);
            &a * &a >= self.get(p - 1) * self.get(p + 1)
        })
    }
}

/// Memoized row `a^n_·`.
///
/// # Panics
/// Panics if `n == 0`.
#[must_use]
pub fn hodge_row(n: usize) -> Arc<HodgeCoeffRow> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Arc<HodgeCoeffRow>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(row) = memo.lock().expect("hodge memo poisoned").get(&n) {
        return row.clone();
    }
    let e = eulerian_row(n);
    let fact = factorial(n as u64);
    let row = Arc::new(HodgeCoeffRow {
        n,
        values: e.values.iter().map(|v| Q::new(v.clone(), fact.clone())).collect(),
    });
    memo.lock().expect("hodge memo poisoned").insert(n, row.clone());
    row
}

/// `a^n_p = E(n,p)/n!`, zero outside `0..n`.
#[must_use]
pub fn hodge_coeff(n: usize, p: i64) -> Q {
    hodge_row(n).get(p)
}

/// Hodge number `h^{p,n-1-p}` of a smooth degree-`d` hypersurface of projective `n`-space.
///
/// `Σ_{i=0}^{n+1} (-1)^i C(n+1,i) C(d(p+1)-(d-1)i-1, n) + δ_{n-1,2p}`.
pub fn hodge_number(n: usize, p: i64, d: u64) -> Result<BigInt> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidInput("hodge_number needs n >= 1 and d >= 1".into()));
    }
    if p < 0 || p >= n as i64 {
        return Err(Error::InvalidInput(format!("p = {p} outside 0..{}", n - 1)));
    }
    let (ni, di) = (n as i64, d as i64);
    let mut acc = BigInt::zero();
    for i in 0..=ni + 1 {
        let term = binomial(ni + 1, i) * binomial(di * (p + 1) - (di - 1) * i - 1, ni);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    if ni - 1 == 2 * p {
        acc += 1;
    }
    Ok(acc)
}

/// Total `Z_2` Betti number of a smooth complex degree-`d` hypersurface of projective `n`-space:
/// `((d-1)^{n+1} - (-1)^{n+1})/d + n + (-1)^{n+1}`.
///
/// # Panics
/// Panics if `d == 0`.
#[must_use]
pub fn complex_total_homology(n: usize, d: u64) -> BigInt {
    assert!(d >= 1, "degree must be positive");
    let sgn = if (n + 1).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let top = BigInt::from(d - 1).pow(n as u32 + 1) - &sgn;
    top / BigInt::from(d) + BigInt::from(n) + sgn
}

/// Betti numbers of the hypersurface outside the middle degree: one for each even degree
/// `0, 2, .., 2(n-1)` other than `n-1`. Adding this to `Σ_p h^{p,n-1-p}` gives
/// [`complex_total_homology`].
#[must_use]
pub fn non_middle_betti(n: usize) -> u64 {
    let n = n as u64;
    if n % 2 == 1 {
        n - 1
    } else {
        n
    }
}

// ============================================================================
// Second differences and their signs
// ============================================================================

/// `D²a^n_p = a^n_{p+1} - 2a^n_p + a^n_{p-1}`.
#[must_use]
pub fn second_diff(n: usize, p: i64) -> Q {
    let row = hodge_row(n);
    row.get(p + 1) - row.get(p) * Q::from_integer(BigInt::from(2)) + row.get(p - 1)
}

/// `D²a^n_p` through `((n-p+1)/n) D²a^{n-1}_{p-1} + ((p+2)/n) D²a^{n-1}_p`.
///
/// # Panics
/// Panics if `n < 2`.
#[must_use]
pub fn second_diff_by_recursion(n: usize, p: i64) -> Q {
    assert!(n >= 2, "the recursion needs n >= 2");
    let ni = n as i64;
    let den = BigInt::from(ni);
    Q::new(BigInt::from(ni - p + 1), den.clone()) * second_diff(n - 1, p - 1)
        + Q::new(BigInt::from(p + 2), den) * second_diff(n - 1, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(v: &Q) -> Self {
        match sign(v) {
            1 => Sign::Positive,
            -1 => Sign::Negative,
            _ => Sign::Zero,
        }
    }

    #[must_use]
    pub fn symbol(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Zero => '0',
            Sign::Negative => '-',
        }
    }
}

/// Sign pattern of `D²a^n_p` for `p = -1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignProfile {
    pub n: usize,
    pub ptilde: i64,
    /// `(p, sign)` for `p = -1..=n`.
    pub signs: Vec<(i64, Sign)>,
}

impl SignProfile {
    #[must_use]
    pub fn at(&self, p: i64) -> Sign {
        self.signs[(p + 1) as usize].1
    }

    /// True when no `D²a^n_p` vanishes on `-1..=n`.
    #[must_use]
    pub fn zero_free(&self) -> bool {
        self.signs.iter().all(|&(_, s)| s != Sign::Zero)
    }
}

/// Computes `p̃_n` and checks the four-part sign structure from exact values.
///
/// `p̃_n` is the end of the initial run of positive values starting at `p = -1`.
/// Any disagreement with the structure is reported as
/// [`Error::InvariantViolation`]: it would mean an arithmetic bug.
pub fn sign_profile(n: usize) -> Result<SignProfile> {
    if n < 3 {
        return Err(Error::InvalidInput("sign_profile needs n >= 3".into()));
    }
    let ni = n as i64;
    let signs: Vec<(i64, Sign)> = (-1..=ni).map(|p| (p, Sign::of(&second_diff(n, p)))).collect();
    let at = |p: i64| signs[(p + 1) as usize].1;
    let mut ptilde = -1;
    while ptilde < ni && at(ptilde + 1) == Sign::Positive {
        ptilde += 1;
    }
    let fail = |what: &str| Err(Error::InvariantViolation(format!("n = {n}: {what}")));

    let bound_ok = if n % 2 == 1 { 2 * ptilde < ni - 1 } else { 2 * ptilde < ni - 2 };
    if ptilde < 0 || !bound_ok {
        return fail(&format!("p̃ = {ptilde} out of range"));
    }
    for p in [-3, -2, ni + 1, ni + 2] {
        if !second_diff(n, p).is_zero() {
            return fail(&format!("D² nonzero at p = {p}"));
        }
    }
    for p in (-1..=ptilde).chain(ni - 1 - ptilde..=ni) {
        if at(p) != Sign::Positive {
            return fail(&format!("D² not positive at p = {p}"));
        }
    }
    for p in [ptilde + 1, ni - 2 - ptilde] {
        if at(p) == Sign::Positive {
            return fail(&format!("D² positive at p = {p}"));
        }
    }
    for p in ptilde + 2..=ni - 3 - ptilde {
        if at(p) != Sign::Negative {
            return fail(&format!("D² not negative at p = {p}"));
        }
    }
    Ok(SignProfile { n, ptilde, signs })
}

// ============================================================================
// Polya asymptotics
// ============================================================================

/// Index `⌊(n-1)/2 + x√n⌋` at which [`polya_midpoint`] approximates `a^n`.
#[must_use]
pub fn polya_index(n: usize, x: f64) -> i64 {
    ((n as f64 - 1.0) / 2.0 + x * (n as f64).sqrt()).floor() as i64
}

/// Gaussian approximation `√(6/(π(n+1))) exp(-6x²)` of `a^n_{⌊(n-1)/2 + x√n⌋}`.
#[must_use]
pub fn polya_midpoint(n: usize, x: f64) -> f64 {
    (6.0 / (std::f64::consts::PI * (n as f64 + 1.0))).sqrt() * (-6.0 * x * x).exp()
}

/// `|polya_midpoint(n, x) / a^n_index - 1|`.
#[must_use]
pub fn polya_relative_error(n: usize, x: f64) -> f64 {
    let exact = crate::rational::to_f64(&hodge_coeff(n, polya_index(n, x)));
    (polya_midpoint(n, x) / exact - 1.0).abs()
}

/// Is the second-difference row free of zeros on `-1..=n`? Used to probe the
/// observation that it never vanishes there; nothing else relies on it.
#[must_use]
pub fn second_diff_zero_free(n: usize) -> bool {
    (-1..=n as i64).all(|p| !second_diff(n, p).is_zero())
}

/// Largest `d·|h^{p,n-1-p}/d^n - a^n_p|` over `p` and `1 <= d <= d_max`.
#[must_use]
pub fn hodge_ratio_constant(n: usize, d_max: u64) -> Q {
    let mut worst = Q::zero();
    for d in 1..=d_max {
        let dn = BigInt::from(d).pow(n as u32);
        for p in 0..n as i64 {
            let h = hodge_number(n, p, d).expect("valid range");
            let diff = (Q::new(h, dn.clone()) - hodge_coeff(n, p)).abs() * Q::from_integer(d.into());
            if diff > worst {
                worst = diff;
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn small_rows() {
        assert_eq!(eulerian(3, 1), BigInt::from(4));
        assert_eq!(eulerian(5, 0), BigInt::one());
        assert_eq!(eulerian(3, 3), BigInt::zero());
        assert_eq!(eulerian(4, -1), BigInt::zero());
        let e4: Vec<_> = (0..4).map(|p| eulerian(4, p)).collect();
        assert_eq!(e4, [1, 11, 11, 1].map(BigInt::from));
        assert_eq!(hodge_coeff(3, 1), q(2, 3));
        assert_eq!(hodge_coeff(2, 0), q(1, 2));
        assert_eq!(hodge_coeff(4, -1), Q::zero());
    }

    #[test]
    fn closed_form_matches_recursion() {
        for n in 1..=12 {
            for p in -1..=n as i64 {
                assert_eq!(eulerian_closed_form(n, p), eulerian(n, p), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(hodge_number(3, 1, 4).unwrap(), BigInt::from(20));
        assert_eq!(hodge_number(2, 0, 3).unwrap(), BigInt::one());
        assert_eq!(hodge_number(1, 0, 1).unwrap(), BigInt::one());
        assert!(hodge_number(3, 3, 4).is_err());
        assert!(hodge_number(3, -1, 4).is_err());
    }

    #[test]
    fn total_homology_examples() {
        assert_eq!(complex_total_homology(2, 3), BigInt::from(4));
        assert_eq!(complex_total_homology(2, 1), BigInt::from(2));
        for d in 1..10 {
            assert_eq!(complex_total_homology(1, d), BigInt::from(d));
        }
        assert_eq!(complex_total_homology(3, 4), BigInt::from(24));
    }

    #[test]
    fn second_diff_examples() {
        assert_eq!(second_diff(3, -1), q(1, 6));
        assert_eq!(second_diff(3, 1), qi(-1));
        assert_eq!(second_diff(3, -2), Q::zero());
        assert_eq!(second_diff(3, 4), Q::zero());
    }

    #[test]
    fn sign_profiles_small() {
        let s3 = sign_profile(3).unwrap();
        assert_eq!(s3.ptilde, 0);
        let pattern: String = s3.signs.iter().map(|(_, s)| s.symbol()).collect();
        assert_eq!(pattern, "++-++");
        let s4 = sign_profile(4).unwrap();
        assert_eq!(s4.ptilde, 0);
        assert!(s4.zero_free());
        assert!(sign_profile(2).is_err());
    }

    #[test]
    fn hodge_sum_plus_lefschetz_classes_is_total() {
        for n in 1..=6 {
            for d in 1..=30 {
                let middle: BigInt = (0..n as i64).map(|p| hodge_number(n, p, d).unwrap()).sum();
                assert_eq!(middle + non_middle_betti(n), complex_total_homology(n, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn polya_anchor() {
        assert!((polya_midpoint(10, 0.0) - (6.0 / (std::f64::consts::PI * 11.0)).sqrt()).abs() < 1e-15);
        assert!(polya_midpoint(100_000, 0.5) < polya_midpoint(100, 0.5));
    }
}
