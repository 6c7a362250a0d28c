use proptest::prelude::*;

use lejadiff::diffengine::{interpolate, solve_coefficients, stability_constant};
use lejadiff::leja::extract_leja;
use lejadiff::linalg::{lu_row_pivot, Matrix, RANK_TOLERANCE};
use lejadiff::multiindex::{enumerate, rank, space_dimension};
use lejadiff::pointset::{halton_points, points_in_ball, uniform_random_points};
use lejadiff::MultiIndex;

fn multiindex(dim: usize, max: u32) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0..=max, dim).prop_map(MultiIndex::new)
}

fn stencil_setup() -> impl Strategy<Value = (u64, [f64; 2], f64, usize)> {
    (any::<u64>(), 0.0..=1.0f64, 0.0..=1.0f64, 0.3..0.7f64, 1usize..=7)
        .prop_map(|(seed, x, y, r, d)| (seed, [x, y], r, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graded_order_is_total_and_antisymmetric(a in multiindex(3, 5), b in multiindex(3, 5)) {
        let ab = a.compare(&b).unwrap();
        let ba = b.compare(&a).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == std::cmp::Ordering::Equal, a == b);
        prop_assert_eq!(ab, rank(&a).cmp(&rank(&b)));
    }

    #[test]
    fn rank_matches_enumeration(a in multiindex(3, 6)) {
        let all = enumerate(3, a.degree());
        prop_assert_eq!(&all[rank(&a)], &a);
        prop_assert_eq!(rank(&a.successor()), rank(&a) + 1);
    }

    #[test]
    fn text_form_round_trips(a in multiindex(4, 9)) {
        let back: MultiIndex = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn pivots_ignore_positive_column_scaling(
        seed in any::<u64>(),
        scales in proptest::collection::vec(0.01..100.0f64, 6),
    ) {
        let pts = uniform_random_points(20, 6, seed);
        let rows: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| 2.0 * x - 1.0).collect()).collect();
        let a = Matrix::from_rows(&rows);
        let base = lu_row_pivot(&a, RANK_TOLERANCE).unwrap();
        let scaled = lu_row_pivot(&a.scale_columns(&scales), RANK_TOLERANCE).unwrap();
        prop_assert_eq!(base.pivot_rows(), scaled.pivot_rows());
    }

    #[test]
    fn ball_filter_is_idempotent(seed in any::<u64>(), x in 0.0..=1.0f64, y in 0.0..=1.0f64, r in 0.0..1.0f64) {
        let cloud = uniform_random_points(300, 2, seed);
        let once = points_in_ball(&cloud, &[x, y], r).unwrap();
        let twice = points_in_ball(&once, &[x, y], r).unwrap();
        prop_assert_eq!(once.coords(), twice.coords());
    }

    #[test]
    fn leja_nodes_come_from_candidates((seed, c, r, d) in stencil_setup()) {
        let cand = points_in_ball(&uniform_random_points(800, 2, seed), &c, r).unwrap();
        prop_assume!(cand.len() >= space_dimension(2, d));
        let st = extract_leja(&cand, &c, d).unwrap();
        let mut sel = st.selection().to_vec();
        sel.sort_unstable();
        sel.dedup();
        prop_assert_eq!(sel.len(), st.len());
        for (i, node) in st.nodes().iter().enumerate() {
            prop_assert_eq!(node, cand.point(st.selection()[i]));
        }
    }

    #[test]
    fn noise_response_is_dominated_by_stability_constant(
        (seed, c, r, d) in stencil_setup(),
        noise_seed in any::<u64>(),
    ) {
        let cand = points_in_ball(&uniform_random_points(800, 2, seed), &c, r).unwrap();
        prop_assume!(cand.len() >= space_dimension(2, d));
        let st = extract_leja(&cand, &c, d).unwrap();
        let eps = 1e-3;
        let noise = lejadiff::testlab::perturb(&vec![0.0; st.len()], eps, noise_seed);
        let coeffs = solve_coefficients(&st, &noise).unwrap();
        for nu in enumerate(2, d.min(2)) {
            let pos = st.position(&nu).unwrap();
            let response = nu.factorial().unwrap() as f64 * coeffs[pos] / st.h().powi(nu.degree() as i32);
            let bound = eps * stability_constant(&st, &nu).unwrap();
            prop_assert!(response.abs() <= bound * (1.0 + 1e-9) + 1e-14 * st.cond() * eps,
                "nu={} response {} bound {}", nu, response, bound);
        }
    }

    #[test]
    fn polynomials_are_differentiated_exactly(
        (_, c, r, d) in stencil_setup(),
        coeffs in proptest::collection::vec(-1.0..1.0f64, 10),
    ) {
        prop_assume!(d >= 3);
        let cand = points_in_ball(&halton_points(1000, 2).unwrap(), &c, r).unwrap();
        prop_assume!(cand.len() >= space_dimension(2, d));
        let st = extract_leja(&cand, &c, d).unwrap();
        // cubic in raw monomials: 1, x, y, x^2, xy, y^2, x^3, x^2y, xy^2, y^3
        let p = |x: f64, y: f64| {
            coeffs[0] + coeffs[1] * x + coeffs[2] * y + coeffs[3] * x * x + coeffs[4] * x * y
                + coeffs[5] * y * y + coeffs[6] * x * x * x + coeffs[7] * x * x * y
                + coeffs[8] * x * y * y + coeffs[9] * y * y * y
        };
        let [x, y] = c;
        let px = coeffs[1] + 2.0 * coeffs[3] * x + coeffs[4] * y + 3.0 * coeffs[6] * x * x
            + 2.0 * coeffs[7] * x * y + coeffs[8] * y * y;
        let pyy = 2.0 * coeffs[5] + 2.0 * coeffs[8] * x + 6.0 * coeffs[9] * y;
        let values: Vec<f64> = st.nodes().iter().map(|q| p(q[0], q[1])).collect();
        let report = interpolate(&st, &values, 2).unwrap();
        let tol = 1e-11 * st.cond();
        prop_assert!((report.derivative(&MultiIndex::new(vec![1, 0])).unwrap() - px).abs() <= tol * (1.0 + px.abs()));
        prop_assert!((report.derivative(&MultiIndex::new(vec![0, 2])).unwrap() - pyy).abs() <= tol * (1.0 + pyy.abs()));
    }
}
