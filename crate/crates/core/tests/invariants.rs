use proptest::prelude::*;

use steiner_core::solver::validate_solution;
use steiner_core::spanning::prim_mst;
use steiner_core::{solve, Instance64, Point64, SolveOptions};

fn instance(d: usize, max_n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 2..=max_n)
}

fn points(raw: &[Vec<f64>]) -> Vec<Point64> {
    raw.iter().map(|c| Point64::new(c.clone()).unwrap()).collect()
}

fn spread(raw: &[Vec<f64>]) -> bool {
    let p = points(raw);
    p.iter().enumerate().all(|(i, a)| {
        p[..i]
            .iter()
            .all(|b| steiner_core::geometry::distance(a, b).unwrap() > 1e-3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planar_solutions_are_valid_trees(raw in instance(2, 6)) {
        prop_assume!(spread(&raw));
        let inst = Instance64::new(points(&raw)).unwrap();
        let sol = solve(&inst, &SolveOptions::default()).unwrap();
        prop_assert!(validate_solution(&sol.tree, &inst).pass());
        prop_assert!(sol.steiner_point_count() <= inst.n() - 2);
        let mst = prim_mst(inst.terminals()).length;
        prop_assert!(sol.length <= mst + 1e-12);
        prop_assert!(mst <= 3f64.sqrt() * sol.length + 1e-9);
    }

    #[test]
    fn spatial_solutions_are_valid_trees(raw in instance(3, 5)) {
        prop_assume!(spread(&raw));
        let inst = Instance64::new(points(&raw)).unwrap();
        let sol = solve(&inst, &SolveOptions::default()).unwrap();
        prop_assert!(validate_solution(&sol.tree, &inst).pass());
        prop_assert!(sol.length <= prim_mst(inst.terminals()).length + 1e-12);
    }

    #[test]
    fn length_follows_similarities(raw in instance(2, 6), angle in 0.0f64..6.3, scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        prop_assume!(spread(&raw));
        let base = solve(&Instance64::new(points(&raw)).unwrap(), &SolveOptions::default()).unwrap();
        let (s, c) = angle.sin_cos();
        let moved: Vec<Point64> = raw
            .iter()
            .map(|p| Point64::xy(scale * (c * p[0] - s * p[1]) + shift, scale * (s * p[0] + c * p[1]) - shift))
            .collect();
        let other = solve(&Instance64::new(moved).unwrap(), &SolveOptions::default()).unwrap();
        prop_assert!((other.length - scale * base.length).abs() <= 1e-9 * scale * base.length);
    }

    #[test]
    fn terminal_order_does_not_matter(raw in instance(2, 6), k in 0usize..6) {
        prop_assume!(spread(&raw));
        let mut p = points(&raw);
        let a = solve(&Instance64::new(p.clone()).unwrap(), &SolveOptions::default()).unwrap();
        let k = k % p.len();
        p.rotate_left(k);
        let b = solve(&Instance64::new(p).unwrap(), &SolveOptions::default()).unwrap();
        prop_assert!((a.length - b.length).abs() <= 1e-10 * (1.0 + a.length));
    }
}
