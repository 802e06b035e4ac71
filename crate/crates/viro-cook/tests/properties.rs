use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use viro_cook::coefficients::{eulerian, hodge_coeff, hodge_number, hodge_row, second_diff, second_diff_by_recursion};
use viro_cook::cooking::{cook, standard, CoeffVector, IngredientSet};
use viro_cook::limit::{iterate_distribution, shift_distribution, split_mean_formula, split_moments};
use viro_cook::patchwork::{betti_z2, glue, smith_thom, Mode, SignDistribution};
use viro_cook::rational::{q, qi};
use viro_cook::search::{best_coefficient, enumerate_frontier, expand_leaves, SearchOptions};
use viro_cook::triangulation::{
    build_t, io, primitive_refinement, verify_triangulation, PLFunction, Triangulation,
};
use viro_cook::Q;

/// Non-negative vector of length `k` with entries `w_i / Σ w`.
fn maximal_vector(k: usize) -> impl Strategy<Value = CoeffVector> {
    prop::collection::vec(0u32..20, k).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)).prop_map(move |w| {
        let total: i64 = w.iter().map(|&x| i64::from(x)).sum();
        CoeffVector::new(k, w.iter().map(|&x| q(i64::from(x), total)).collect()).unwrap()
    })
}

fn symmetric_maximal_vector(k: usize) -> impl Strategy<Value = CoeffVector> {
    prop::collection::vec(0u32..20, k.div_ceil(2)).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)).prop_map(move |half| {
        let w: Vec<i64> = (0..k).map(|i| i64::from(half[i.min(k - 1 - i)])).collect();
        let total: i64 = w.iter().sum();
        CoeffVector::new(k, w.iter().map(|&x| q(x, total)).collect()).unwrap()
    })
}

fn ingredient_set(n: usize, symmetric: bool) -> BoxedStrategy<IngredientSet> {
    let parts: Vec<BoxedStrategy<CoeffVector>> =
        (1..n).map(|k| if symmetric { symmetric_maximal_vector(k).boxed() } else { maximal_vector(k).boxed() }).collect();
    parts
        .prop_map(move |vs| {
            let mut set = IngredientSet::new(n);
            for (k, v) in vs.into_iter().enumerate() {
                set.insert(k + 1, v).unwrap();
            }
            set
        })
        .boxed()
}

fn random_set() -> impl Strategy<Value = (IngredientSet, bool)> {
    (2usize..9, any::<bool>()).prop_flat_map(|(n, sym)| ingredient_set(n, sym).prop_map(move |s| (s, sym)))
}

// ----------------------------------------------------------------------------
// coefficients
// ----------------------------------------------------------------------------

proptest! {
    #[test]
    fn hodge_rows_are_distributions(n in 1usize..=40) {
        let a = hodge_row(n);
        let total = (0..n as i64).fold(Q::zero(), |acc, p| acc + a.get(p));
        prop_assert_eq!(total, qi(1));
        for p in 0..n as i64 {
            prop_assert_eq!(a.get(p), a.get(n as i64 - 1 - p));
            prop_assert!(a.get(p).clone() * a.get(p) >= a.get(p - 1) * a.get(p + 1));
        }
    }

    #[test]
    fn eulerian_recursion(n in 2usize..=30, p in 0i64..30) {
        let lhs = eulerian(n, p);
        let rhs = BigInt::from(n as i64 - p) * eulerian(n - 1, p - 1) + BigInt::from(p + 1) * eulerian(n - 1, p);
        prop_assert_eq!(lhs, if p < n as i64 { rhs } else { BigInt::zero() });
    }

    #[test]
    fn second_differences(n in 2usize..=30) {
        let mut total = Q::zero();
        for p in -3..=n as i64 + 2 {
            prop_assert_eq!(second_diff(n, p), second_diff_by_recursion(n, p));
            total += second_diff(n, p);
        }
        prop_assert_eq!(total, Q::zero());
    }

    #[test]
    fn hodge_numbers_approach_the_coefficients(n in 1usize..=6, p in 0i64..6, d in 1u64..=200) {
        prop_assume!(p < n as i64);
        let h = Q::from_integer(hodge_number(n, p, d).unwrap()) / Q::from_integer(BigInt::from(d).pow(n as u32));
        // K = 3 covers the fitted worst case, about 2.72 at n = 5, p = 2
        prop_assert!((h - hodge_coeff(n, p)).abs() * qi(d as i64) <= qi(3));
    }
}

// ----------------------------------------------------------------------------
// cooking
// ----------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cooking_conserves_mass_and_symmetry((set, symmetric) in random_set()) {
        let x = cook(&set).unwrap();
        prop_assert_eq!(x.sum(), qi(1));
        prop_assert!(x.is_maximal());
        prop_assert!(x.entries().iter().all(|v| !v.is_negative()));
        prop_assert!(x.get(-1).is_zero() && x.get(set.n as i64).is_zero());
        if symmetric {
            prop_assert!(x.is_symmetric());
        }
    }
}

#[test]
fn standard_is_fixed_for_every_n_to_fifteen() {
    for n in 2..=15 {
        assert_eq!(cook(&IngredientSet::standard(n)).unwrap().entries(), standard(n).entries());
    }
}

// ----------------------------------------------------------------------------
// search
// ----------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn best_coefficients_are_mirror_symmetric(n in 1usize..=5, i in 0usize..5, mask in 1u8..8) {
        prop_assume!(i < n);
        let names: Vec<&str> = ["std", "brugalle+", "brugalle-"].iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, s)| *s).collect();
        let opts = SearchOptions::default();
        let leaves = expand_leaves(&names.join(","), &opts).unwrap();
        match (best_coefficient(n, i, &leaves, &opts), best_coefficient(n, n - 1 - i, &leaves, &opts)) {
            (Ok((a, _)), Ok((b, _))) => prop_assert_eq!(a, b),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }
}

#[test]
fn frontier_vectors_sum_to_one() {
    let opts = SearchOptions::default();
    let leaves = expand_leaves("std,brugalle,interp", &opts).unwrap();
    for (_, f) in enumerate_frontier(6, &leaves, &opts).unwrap() {
        assert!(f.entries.iter().all(|e| e.vector.sum() == qi(1)));
    }
}

#[test]
fn search_is_deterministic() {
    let opts = SearchOptions::default();
    let leaves = expand_leaves("std,brugalle,interp", &opts).unwrap();
    let a = enumerate_frontier(6, &leaves, &opts).unwrap();
    let b = enumerate_frontier(6, &leaves, &opts).unwrap();
    assert_eq!(a, b);
}

// ----------------------------------------------------------------------------
// limit
// ----------------------------------------------------------------------------

fn floor_strategy() -> impl Strategy<Value = Vec<CoeffVector>> {
    (1usize..=3).prop_flat_map(|big_n| (1..=big_n).map(symmetric_maximal_vector).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distribution_levels_match_cooking(floor in floor_strategy()) {
        let big_n = floor.len();
        let seq = iterate_distribution(&floor, 12, 60).unwrap();
        for n in big_n + 1..=12 {
            let mut set = IngredientSet::new(n);
            for k in 1..n {
                set.insert(k, seq.exact_row(k).unwrap().clone()).unwrap();
            }
            let x = seq.exact_row(n).unwrap();
            let cooked = cook(&set).unwrap();
            prop_assert_eq!(cooked.entries(), x.entries());
            prop_assert_eq!(x.sum(), qi(1));
            prop_assert!(x.is_symmetric());
            prop_assert!(x.entries().iter().all(|v| !v.is_negative()));
            let s = shift_distribution(x, n + 1).unwrap();
            prop_assert_eq!(s.mean(), Q::zero());
            prop_assert!(s.support_parity_is(n % 2 == 0));
        }
    }

    #[test]
    fn split_means_match_the_formula(big_n in 1usize..=5, extra in 1usize..=40, i in 1usize..=5) {
        prop_assume!(i <= big_n);
        let n = big_n + extra;
        prop_assert_eq!(split_moments(big_n, n, i).unwrap().mean, split_mean_formula(big_n, n));
    }
}

// ----------------------------------------------------------------------------
// triangulation
// ----------------------------------------------------------------------------

fn random_lift(n: usize, d: u64) -> impl Strategy<Value = PLFunction> {
    let size = PLFunction::on_simplex(n, d, |_| Q::zero()).points.len();
    prop::collection::vec(0i64..1000, size).prop_map(move |h| {
        let mut f = PLFunction::on_simplex(n, d, |_| Q::zero());
        f.values = h.into_iter().map(qi).collect();
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generic_lifts_give_certified_triangulations(
        (n, d, f) in prop_oneof![Just((2usize, 3u64)), Just((2, 4)), Just((3, 2))].prop_flat_map(|(n, d)| random_lift(n, d).prop_map(move |f| (n, d, f)))
    ) {
        // ties can make a cell non-simplicial; those lifts are skipped
        if let Ok(t) = Triangulation::from_certificate(n, d, f) {
            let report = verify_triangulation(&t).unwrap();
            prop_assert_eq!(report.volume, u128::from(d.pow(n as u32)));
            let back = io::read(&io::write(&t)).unwrap();
            prop_assert_eq!(back.simplices, t.simplices);
            prop_assert_eq!(back.certificate.values, t.certificate.values);
        }
    }
}

// ----------------------------------------------------------------------------
// patchwork
// ----------------------------------------------------------------------------

fn primitive(n: usize, d: u64) -> Triangulation {
    primitive_refinement(&build_t(n, d).unwrap().triangulation).unwrap()
}

fn signs_strategy(n: usize, d: u64) -> impl Strategy<Value = SignDistribution> {
    let size = PLFunction::on_simplex(n, d, |_| Q::zero()).points.len();
    prop::collection::vec(any::<bool>(), size).prop_map(move |bits| {
        let pts = PLFunction::on_simplex(n, d, |_| Q::zero()).points;
        let mut s = SignDistribution::from_fn(n, d, |_| 1);
        for (p, b) in pts.iter().zip(bits) {
            s.set(p, if b { 1 } else { -1 }).unwrap();
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_curves((d, signs, seed) in (2u64..=5).prop_flat_map(|d| (Just(d), signs_strategy(2, d), any::<u64>()))) {
        let t = primitive(2, d);
        for mode in [Mode::Torus, Mode::Affine, Mode::Projective] {
            let c = glue(&t, &signs, mode).unwrap();
            c.check_boundary_squared().unwrap();
            if mode == Mode::Projective {
                prop_assert!(smith_thom(2, d, &betti_z2(&c)).holds());
            }
        }
        let c = glue(&t, &signs, Mode::Torus).unwrap();
        prop_assert_eq!(c.vertex_classes_by_union_find(&t, &signs), c.cell_counts()[0]);

        // simplex order does not matter
        let mut shuffled = t.clone();
        let len = shuffled.simplices.len();
        for i in 0..len {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add((i as u64).wrapping_mul(1442695040888963407)) % len as u64) as usize;
            shuffled.simplices.swap(i, j);
        }
        let a = glue(&t, &signs, Mode::Projective).unwrap();
        let b = glue(&shuffled, &signs, Mode::Projective).unwrap();
        prop_assert_eq!(betti_z2(&a), betti_z2(&b));
        prop_assert_eq!(a.cell_counts(), b.cell_counts());

        prop_assert_eq!(SignDistribution::parse(&signs.to_text(), 2, d).unwrap(), signs);
    }

    #[test]
    fn random_surfaces(signs in signs_strategy(3, 3)) {
        let t = primitive(3, 3);
        let c = glue(&t, &signs, Mode::Projective).unwrap();
        c.check_boundary_squared().unwrap();
        prop_assert!(smith_thom(3, 3, &betti_z2(&c)).holds());
    }
}
