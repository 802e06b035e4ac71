//! Independently computed values, frozen after the first run.

use num_bigint::BigInt;
use viro_cook::coefficients::{
    complex_total_homology, eulerian, hodge_coeff, hodge_number, polya_relative_error, second_diff, sign_profile, Sign,
};
use viro_cook::cooking::{brugalle, cook, cook_h, cook_l, standard, BrugalleSign, IngredientSet};
use viro_cook::limit::{
    gaussian_error, iterate_distribution, shift_distribution, sigma_squared, simulate_split, split_moments, variance_proportional_from,
};
use viro_cook::patchwork::{
    betti_z2, chart_piece, construct_qnd_signs, glue, harnack_signs, smith_thom, standard_ingredient_signs, Mode, OrthantIndex,
    SignDistribution,
};
use viro_cook::rational::{fmt_q, q, qi};
use viro_cook::search::{
    best_coefficient, enumerate_frontier, evaluate, expand_leaves, f_minus, frontier_sizes, midpoint_ratio_table, t_table, Mode as Search,
    Plan, SearchOptions,
};
use viro_cook::triangulation::{
    build_mu, build_t, inner_simplex_vertices, primitive_refinement, verify_built_t, verify_triangulation, LatticeSimplex, Triangulation,
};
use viro_cook::Q;

fn strs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn leaves(spec: &str) -> Vec<String> {
    expand_leaves(spec, &SearchOptions::default()).unwrap()
}

fn brute() -> SearchOptions {
    SearchOptions { mode: Search::Brute, ..SearchOptions::default() }
}

// ----------------------------------------------------------------------------
// coefficients
// ----------------------------------------------------------------------------

#[test]
fn eulerian_and_hodge_values() {
    assert_eq!(eulerian(3, 1), BigInt::from(4));
    assert_eq!(hodge_coeff(2, 0), q(1, 2));
    assert_eq!(hodge_number(3, 1, 4).unwrap(), BigInt::from(20));
    assert_eq!(hodge_number(2, 0, 3).unwrap(), BigInt::from(1));
    assert_eq!(complex_total_homology(2, 3), BigInt::from(4));
    assert_eq!(complex_total_homology(2, 1), BigInt::from(2));
    assert_eq!(second_diff(3, 1), qi(-1));
}

#[test]
fn sign_profiles() {
    let p3 = sign_profile(3).unwrap();
    assert_eq!(p3.ptilde, 0);
    let want = [(-1, Sign::Positive), (0, Sign::Positive), (1, Sign::Negative), (2, Sign::Positive), (3, Sign::Positive)];
    assert_eq!(p3.signs, want.to_vec());
    let p4 = sign_profile(4).unwrap();
    assert!(p4.zero_free());
    assert_eq!(p4.ptilde, 0);
}

#[test]
fn polya_at_199() {
    let err = polya_relative_error(199, 0.0);
    assert!(err < 0.02, "{err}");
}

// ----------------------------------------------------------------------------
// cooking
// ----------------------------------------------------------------------------

#[test]
fn small_cooked_vectors() {
    assert_eq!(strs(cook(&IngredientSet::standard(2)).unwrap().entries()), ["1/2", "1/2"]);
    let h9 = cook_h(9, BrugalleSign::Minus).unwrap();
    let expected = hodge_coeff(9, 2) - q(2, 9) * q(1, 24) * second_diff(5, 0);
    assert_eq!(h9.get(2), expected);
    let l4 = cook_l(4).unwrap();
    assert_eq!(strs(l4.entries()), ["3/32", "13/32", "13/32", "3/32"]);
    assert!(l4.get(0) >= hodge_coeff(4, 0) + q(5, 24) * q(1, 4));
}

// ----------------------------------------------------------------------------
// search
// ----------------------------------------------------------------------------

#[test]
fn plan_with_brugalle_plus_at_three_is_cook_h() {
    let children = (1..8).map(|k| if k == 3 { Plan::leaf("brugalle+", 3) } else { Plan::leaf("standard", k) }).collect();
    let v = evaluate(&Plan::node(children)).unwrap();
    assert_eq!(v.entries(), cook_h(8, BrugalleSign::Plus).unwrap().entries());
}

#[test]
fn frontier_sizes_to_seven() {
    let l = leaves("std,brugalle");
    let memo = enumerate_frontier(7, &l, &SearchOptions::default()).unwrap();
    assert_eq!(frontier_sizes(&memo), vec![(1, 1), (2, 1), (3, 3), (4, 3), (5, 9), (6, 75), (7, 2826)]);
    let small = enumerate_frontier(5, &l, &brute()).unwrap();
    for n in 1..=5 {
        assert_eq!(small[&n], memo[&n]);
    }
}

#[test]
fn frontier_four_has_one_vector_per_dimension_three_choice() {
    let f = enumerate_frontier(4, &leaves("std,brugalle"), &SearchOptions::default()).unwrap();
    assert_eq!(f[&4].len(), 3);
}

#[test]
fn dimension_four_best_coefficients_match_brute_force() {
    let l = leaves("std,brugalle");
    for i in 0..4 {
        let (memo, _) = best_coefficient(4, i, &l, &SearchOptions::default()).unwrap();
        let (slow, _) = best_coefficient(4, i, &l, &brute()).unwrap();
        assert_eq!(memo, slow);
    }
}

#[test]
fn surplus_table_to_six() {
    let rows = t_table(6, &leaves("std,brugalle"), &SearchOptions::default()).unwrap();
    let by_n = |n: usize| rows.iter().filter(|r| r.n == n).map(|r| fmt_q(&r.t)).collect::<Vec<_>>();
    assert_eq!(by_n(3), ["5/24", "1/12", "5/24"]);
    assert_eq!(by_n(4), ["5/96", "1/96", "1/96", "5/96"]);
    assert_eq!(by_n(5), ["1/96", "1/12", "3/80", "1/12", "1/96"]);
    assert_eq!(by_n(6), ["1/576", "13/192", "1/72", "1/72", "13/192", "1/576"]);
}

#[test]
fn f_minus_five_and_midpoint_ratios() {
    assert_eq!(strs(f_minus(5).unwrap().entries()), ["1/160", "1/5", "47/80", "1/5", "1/160"]);
    let table = midpoint_ratio_table(&[5, 7, 9, 11]).unwrap();
    let got: Vec<(usize, String)> = table.iter().map(|(n, r)| (*n, fmt_q(r))).collect();
    assert_eq!(
        got,
        [(5, "3/44".to_string()), (7, "313/4832".to_string()), (9, "19453/312380".to_string()), (11, "637843/10482832".to_string())]
    );
}

// ----------------------------------------------------------------------------
// limit
// ----------------------------------------------------------------------------

#[test]
fn brugalle_plus_floor_matches_cook() {
    let floor = vec![standard(1), standard(2), brugalle(BrugalleSign::Plus)];
    let seq = iterate_distribution(&floor, 4, 60).unwrap();
    let direct = cook(&IngredientSet::standard(4).with(3, brugalle(BrugalleSign::Plus))).unwrap();
    assert_eq!(seq.exact_row(4).unwrap().entries(), direct.entries());
}

#[test]
fn shifted_standard_pair() {
    let d = shift_distribution(&standard(2), 3).unwrap();
    assert_eq!(d.mass_at(-1), q(1, 2));
    assert_eq!(d.mass_at(1), q(1, 2));
    assert_eq!(d.total(), qi(1));
}

#[test]
fn standard_floor_sigma_and_gaussian_error() {
    let floor = vec![standard(1)];
    let s2 = sigma_squared(&floor).unwrap();
    assert_eq!(s2, q(1, 12));
    let seq = iterate_distribution(&floor, 200, 60).unwrap();
    let errs: Vec<f64> = [50, 100, 200].iter().map(|&n| gaussian_error(&seq, &s2, n).unwrap()).collect();
    assert!(errs[2] <= 0.02, "{errs:?}");
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn splitting_mean_at_twelve() {
    assert_eq!(split_moments(3, 12, 1).unwrap().mean, qi(2));
    let sim = simulate_split(3, 12, 1, 1_000_000, 11).unwrap();
    assert!((sim.mean - 2.0).abs() <= 3.0 * sim.std_error, "{sim:?}");
}

#[test]
fn splitting_variance_ratio_settles_at_five_for_two() {
    // Var/n is constant from n = 5 on, not from n = 4
    assert_eq!(variance_proportional_from(2, 1, 50).unwrap(), Some((5, q(8, 45))));
    assert_eq!(split_moments(2, 4, 1).unwrap().variance / qi(4), q(2, 9));
}

// ----------------------------------------------------------------------------
// triangulation
// ----------------------------------------------------------------------------

fn has_cell_with(t: &Triangulation, verts: &[Vec<i64>]) -> bool {
    t.simplices.iter().any(|s| verts.iter().all(|v| s.vertices().contains(v)))
}

#[test]
fn mu_on_s2_6_contains_every_inner_simplex() {
    let t = build_mu(2, 6).unwrap();
    for face in [vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
        let inner = inner_simplex_vertices(2, 6, &face);
        assert!(has_cell_with(&t, &inner), "{face:?}");
    }
    assert!(t.simplices.contains(&LatticeSimplex::new(vec![vec![1, 1], vec![4, 1], vec![1, 4]]).unwrap()));
}

#[test]
fn certified_t_three_seven() {
    let b = build_t(3, 7).unwrap();
    verify_built_t(&b).unwrap();
    assert_eq!(verify_triangulation(&b.triangulation).unwrap().volume, 343);
}

#[test]
fn cell_counts() {
    assert_eq!(build_mu(3, 4).unwrap().simplices.len(), 58);
    assert_eq!(build_mu(3, 5).unwrap().simplices.len(), 73);
    assert_eq!(build_mu(2, 6).unwrap().simplices.len(), 13);
    assert_eq!(build_t(3, 6).unwrap().triangulation.simplices.len(), 128);
    assert_eq!(build_t(4, 4).unwrap().triangulation.simplices.len(), 232);
}

#[test]
fn s3_4_has_64_primitive_cells() {
    let r = primitive_refinement(&build_t(3, 4).unwrap().triangulation).unwrap();
    assert_eq!(r.simplices.len(), 64);
    assert!(r.is_primitive());
}

// ----------------------------------------------------------------------------
// patchwork
// ----------------------------------------------------------------------------

#[test]
fn triangle_piece_joins_two_midpoints() {
    let tri = LatticeSimplex::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let signs = SignDistribution::from_fn(2, 1, |p| if p == &vec![0, 1] { -1 } else { 1 });
    let piece = chart_piece(&tri, &signs, OrthantIndex::from_signs(&[-1, -1])).unwrap().unwrap();
    assert_eq!(piece.dim(), 1);
    assert_eq!(piece.doubled_vertices(), vec![vec![1, 0], vec![1, 1]]);
}

fn harnack_betti(d: u64, mode: Mode) -> Vec<u64> {
    let t = primitive_refinement(&build_t(2, d).unwrap().triangulation).unwrap();
    betti_z2(&glue(&t, &harnack_signs(d), mode).unwrap()).0
}

#[test]
fn conic_with_one_negative_centre_is_one_oval() {
    let t = primitive_refinement(&build_t(2, 2).unwrap().triangulation).unwrap();
    let s = SignDistribution::from_fn(2, 2, |p| if p == &vec![1, 1] { -1 } else { 1 });
    // an oval is a circle: one component, one loop
    assert_eq!(betti_z2(&glue(&t, &s, Mode::Projective).unwrap()).0, vec![1, 1]);
}

#[test]
fn harnack_values() {
    assert_eq!(harnack_betti(2, Mode::Projective), vec![1, 1]);
    assert_eq!(harnack_betti(3, Mode::Projective), vec![2, 2]);
    assert_eq!(harnack_betti(4, Mode::Projective), vec![4, 4]);
    assert_eq!(harnack_betti(6, Mode::Projective), vec![11, 11]);
    assert_eq!(harnack_betti(6, Mode::Affine), vec![16, 10]);
    assert_eq!(harnack_betti(6, Mode::Torus), vec![28, 10]);
    assert_eq!(harnack_betti(8, Mode::Torus), vec![45, 21]);
    let b = viro_cook::patchwork::BettiVector(harnack_betti(6, Mode::Projective));
    assert!(smith_thom(2, 6, &b).equal());
}

#[test]
fn qnd_curve_of_degree_eight() {
    let (t, s) = construct_qnd_signs(2, 8, &standard_ingredient_signs).unwrap();
    let b = betti_z2(&glue(&t, &s, Mode::Projective).unwrap());
    assert_eq!(b.0, vec![22, 22]);
    assert!(b.0[0] >= 20);
    assert!(smith_thom(2, 8, &b).holds());
}

#[test]
fn qnd_surface_of_degree_six() {
    let (t, s) = construct_qnd_signs(3, 6, &standard_ingredient_signs).unwrap();
    let c = glue(&t, &s, Mode::Projective).unwrap();
    assert_eq!(c.cell_counts(), vec![1016, 3240, 2160]);
    let b = betti_z2(&c);
    assert_eq!(b.0, vec![7, 78, 7]);
    assert!(smith_thom(3, 6, &b).holds());
    assert_eq!(betti_z2(&glue(&t, &s, Mode::Torus).unwrap()).0, vec![54, 87, 5]);
    assert_eq!(betti_z2(&glue(&t, &s, Mode::Affine).unwrap()).0, vec![12, 82, 6]);
}
