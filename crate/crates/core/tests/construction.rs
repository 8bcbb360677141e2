use steiner_core::pathology::{
    advance, build_stage0, certify_stage, run_construction, EpsSchedule, PathologyError, PathologyOptions,
};
use steiner_core::sphere_connect::{connect_on_sphere, random_unit, SphereError};
use steiner_core::{Point64, SolveOptions};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn first_two_stages_are_solver_optimal() {
    let opts = PathologyOptions::default();
    let s0 = build_stage0::<f64>();
    let c0 = certify_stage(&s0, &SolveOptions::default(), None, opts.rigidity_tol).unwrap();
    assert!(c0.exact && c0.optimal == Some(true) && c0.pass());
    assert!(c0.delta.unwrap().value > 0.0);
    let s1 = advance(&s0, 1e-3, &opts).unwrap();
    let c1 = certify_stage(&s1, &SolveOptions::default(), None, opts.rigidity_tol).unwrap();
    assert!(c1.exact && c1.optimal == Some(true) && c1.pass());
    assert!((c1.solver_length.unwrap() - s1.length).abs() < 1e-9);
}

#[test]
fn later_stages_are_heuristic() {
    let built = run_construction::<f64>(3, &EpsSchedule::default(), &PathologyOptions::default(), &SolveOptions::default()).unwrap();
    let modes: Vec<bool> = built.iter().map(|(_, c)| c.exact).collect();
    assert_eq!(modes, vec![true, true, false, false]);
    let (s3, c3) = &built[3];
    assert!(c3.pass());
    let d = s3.delta.as_ref().unwrap();
    assert!(!d.exact && d.value > 0.0);
    for (k, (s, _)) in built.iter().enumerate() {
        assert_eq!(s.terminals.len(), 4 * (k + 1));
        assert_eq!(s.branch_count(), 4 * k + 2);
    }
}

#[test]
fn stage_count_is_capped() {
    let r = run_construction::<f64>(13, &EpsSchedule::default(), &PathologyOptions::default(), &SolveOptions::default());
    assert!(matches!(r, Err(PathologyError::TooManyStages(13))));
}

#[test]
fn gap_capped_schedule_shrinks_faster() {
    let schedule = EpsSchedule {
        use_delta: true,
        ..EpsSchedule::default()
    };
    let built = run_construction::<f64>(2, &schedule, &PathologyOptions::default(), &SolveOptions::default()).unwrap();
    let d1 = built[1].0.delta.as_ref().unwrap().value;
    let eps2 = built[2].0.eps;
    assert!(eps2 <= d1 * d1 / 64.0 && eps2 <= 1e-3 / 16.0);
    assert_eq!(built[2].0.gap_condition, Some(true));
}

#[test]
fn sphere_connector_in_four_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pts: Vec<Point64> = (0..200).map(|_| random_unit(&mut rng, 4)).collect();
    let c = connect_on_sphere(&pts, 4, 4).unwrap();
    assert!(c.pass(), "{:?}", c.length_bound);
    let one = connect_on_sphere(&pts[..1], 4, 0).unwrap();
    assert_eq!(one.length, 0.0);
    let flat = [Point64::xy(1.0, 0.0)];
    assert!(matches!(connect_on_sphere(&flat, 2, 0), Err(SphereError::DimensionTooSmall(2))));
}
