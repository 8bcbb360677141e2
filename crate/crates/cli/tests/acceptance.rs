//! One PASS/FAIL line per acceptance criterion. Runs without the test
//! harness so the lines show up in `cargo test` output.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steiner_cli::generate::{cocircular, long_gap_count, random_ball};
use steiner_core::analysis::{
    ball_profile, check_main_bound, coarea_audit, count_segments_in_ball, maxwell_length,
    planar_branched_components_audit, segment_count_bound, windrose_sum,
};
use steiner_core::geometry::{clip_to_ball, Ball};
use steiner_core::pathology::{accumulation_report, run_construction, EpsSchedule, PathologyOptions};
use steiner_core::spanning::{hypercube_instance, prim_mst};
use steiner_core::sphere_connect::{connect_on_sphere, random_unit};
use steiner_core::{solve, Forest64, Instance64, Point64, Solution64, SolveOptions};

struct Outcome {
    pass: bool,
    detail: String,
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn solved(pts: Vec<Point64>) -> (Instance64, Solution64) {
    let inst = Instance64::new(pts).expect("generated instances are valid");
    let sol = solve(&inst, &opts()).expect("solver succeeds");
    (inst, sol)
}

fn is_full(tree: &Forest64, n: usize) -> bool {
    let deg = tree.degrees();
    (0..n).all(|v| deg[v] == 1)
}

fn closed_forms() -> Outcome {
    let s3 = 3f64.sqrt();
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    let cases: Vec<(Vec<Point64>, f64)> = vec![
        (
            vec![Point64::xy(0.0, 0.0), Point64::xy(1.0, 0.0), Point64::xy(0.5, s3 / 2.0)],
            s3,
        ),
        (
            vec![
                Point64::xy(0.0, 0.0),
                Point64::xy(1.0, 0.0),
                Point64::xy(1.0, 1.0),
                Point64::xy(0.0, 1.0),
            ],
            1.0 + s3,
        ),
        (steiner_core::pathology::rectangle::<f64>().to_vec(), 2.0 * s3),
    ];
    let mut branches_ok = false;
    for (k, (pts, expect)) in cases.into_iter().enumerate() {
        let t = Instant::now();
        let (_, sol) = solved(pts);
        slowest = slowest.max(t.elapsed());
        worst = worst.max((sol.length - expect).abs());
        if k == 2 {
            let mut b: Vec<(f64, f64)> = sol
                .tree
                .branch_indices()
                .iter()
                .map(|&i| (sol.tree.vertex(i).x(), sol.tree.vertex(i).y()))
                .collect();
            b.sort_by(|p, q| p.0.total_cmp(&q.0));
            let e = 1.0 / s3;
            branches_ok = b.len() == 2
                && (b[0].0 + e).abs() <= 1e-8
                && (b[1].0 - e).abs() <= 1e-8
                && b[0].1.abs() <= 1e-8
                && b[1].1.abs() <= 1e-8;
        }
    }
    Outcome {
        pass: worst <= 1e-8 && branches_ok && slowest < Duration::from_secs(1),
        detail: format!(
            "max |error| {worst:.2e} <= 1e-8, rectangle branches at (±1/sqrt3, 0): {branches_ok}, slowest {:.3} s < 1 s",
            slowest.as_secs_f64()
        ),
    }
}

fn steiner_ratio() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..1000 {
        let d = 2 + (i % 2);
        let n = rng.gen_range(2..=7);
        let (inst, sol) = solved(random_ball(d, n, rng.gen()));
        let r = prim_mst(inst.terminals()).length / sol.length;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let s3 = 3f64.sqrt();
    let (inst, sol) = solved(vec![
        Point64::xy(0.0, 0.0),
        Point64::xy(1.0, 0.0),
        Point64::xy(0.5, s3 / 2.0),
    ]);
    let tri = prim_mst(inst.terminals()).length / sol.length;
    let tri_err = (tri - 2.0 / s3).abs();
    Outcome {
        pass: lo >= 1.0 - 1e-12 && hi <= s3 + 1e-9 && tri_err <= 1e-9,
        detail: format!("1000 instances, ratio in [{lo:.6}, {hi:.6}] within [1, sqrt3 + 1e-9]; triangle |ratio - 2/sqrt3| = {tri_err:.2e}"),
    }
}

fn maxwell_windrose() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut found, mut tried) = (0, 0);
    let (mut worst_len, mut worst_rose) = (0.0f64, 0.0f64);
    while found < 500 && tried < 50_000 {
        tried += 1;
        let n = rng.gen_range(3..=6);
        let (_, sol) = solved(random_ball(2, n, rng.gen()));
        if !is_full(&sol.tree, n) {
            continue;
        }
        found += 1;
        let m = maxwell_length(&sol.tree).expect("planar full tree");
        worst_len = worst_len.max((m.value - sol.length).abs()).max(m.residual);
        let w = windrose_sum(&sol.tree).expect("planar full tree");
        worst_rose = worst_rose.max(w[0].hypot(w[1]));
    }
    Outcome {
        pass: found == 500 && worst_len <= 1e-9 && worst_rose <= 1e-9,
        detail: format!(
            "{found} full trees ({tried} instances), max |Maxwell - length| {worst_len:.2e}, max |sum c_k| {worst_rose:.2e}, both <= 1e-9"
        ),
    }
}

fn cocircular_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut with_steiner = 0;
    let mut bad_hypothesis = 0;
    for _ in 0..200 {
        let n = rng.gen_range(3..=7);
        let r = rng.gen_range(0.5..2.0);
        let pts = cocircular(n, r, rng.gen());
        if long_gap_count(&pts, &Point64::xy(0.0, 0.0), r) > 1 {
            bad_hypothesis += 1;
        }
        let (_, sol) = solved(pts);
        if sol.steiner_point_count() > 0 {
            with_steiner += 1;
        }
    }
    Outcome {
        pass: with_steiner == 0 && bad_hypothesis == 0,
        detail: format!("200 instances, hypothesis violations {bad_hypothesis}, solutions with Steiner points {with_steiner}"),
    }
}

/// A ball centered near the tree, free of terminals.
fn random_ball_on_tree(rng: &mut ChaCha8Rng, inst: &Instance64, tree: &Forest64) -> Option<(Point64, f64, f64)> {
    let e = tree.edges()[rng.gen_range(0..tree.edge_count())];
    let x = tree.vertex(e.0).lerp(tree.vertex(e.1), rng.gen_range(0.0..1.0));
    let gap = inst
        .terminals()
        .iter()
        .map(|p| steiner_core::geometry::distance(p, &x).unwrap())
        .fold(f64::INFINITY, f64::min);
    if gap < 1e-3 {
        return None;
    }
    Some((x, gap * rng.gen_range(0.5..1.0), rng.gen_range(0.1..0.9)))
}

fn regularity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut counts = [0usize; 2];
    let mut worst_planar = 0.0f64;
    for (di, d) in [2usize, 3].into_iter().enumerate() {
        while counts[di] < 200 {
            let n = rng.gen_range(3..=6);
            let (inst, sol) = solved(random_ball(d, n, rng.gen()));
            let Some((x, s, rho)) = random_ball_on_tree(&mut rng, &inst, &sol.tree) else {
                continue;
            };
            counts[di] += 1;
            let profile = ball_profile(&sol.tree, &inst, &x, s, 32).expect("terminal-free ball");
            let inside = clip_to_ball(&sol.tree, &Ball::new(x.clone(), s).unwrap());
            let mut ok = coarea_audit(&inside, &x).pass && profile.differential_inequality_holds();
            ok &= check_main_bound(&profile, d, rho).pass;
            let r = rho * s;
            if d == 2 {
                let b = planar_branched_components_audit(&sol.tree, &inst, &x, r).unwrap();
                ok &= b.pass();
                worst_planar = worst_planar.max(b.length.measured / r);
            } else {
                let segs = count_segments_in_ball(&sol.tree, &x, r) as f64;
                ok &= segs <= segment_count_bound(d, rho);
            }
            if !ok {
                failures.push(format!("d={d} x={:?} s={s} rho={rho}", x.coords()));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{} + {} (tree, ball) pairs, failures {}{}; largest planar branched length / r = {worst_planar:.4} <= {:.4}",
            counts[0],
            counts[1],
            failures.len(),
            failures.first().map_or(String::new(), |f| format!(" (first: {f})")),
            4.0 * PI / 3.0 + 1.0
        ),
    }
}

fn hypercube() -> Outcome {
    let t = Instant::now();
    let (_, r) = hypercube_instance::<f64>(3).unwrap();
    let el = t.elapsed();
    let lb_err = (r.lower_bound - 14.0 / 3f64.sqrt()).abs();
    Outcome {
        pass: r.mst_length == 14.0 && lb_err <= 1e-6 && (r.lower_bound - 8.0829).abs() < 1e-4 && el < Duration::from_secs(1),
        detail: format!("MST {} (exact 14), lower bound {:.6} vs 14/sqrt3 error {lb_err:.1e}", r.mst_length, r.lower_bound),
    }
}

fn sphere_connector() -> Outcome {
    let t = Instant::now();
    let (mut worst, mut all) = (0.0f64, true);
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<Point64> = (0..100).map(|_| random_unit(&mut rng, 3)).collect();
        let c = connect_on_sphere(&pts, 3, seed).unwrap();
        worst = worst.max(c.length);
        all &= c.pass() && c.length <= 77.7;
    }
    let el = t.elapsed();
    Outcome {
        pass: all && el < Duration::from_secs(60),
        detail: format!(
            "50 seeds, longest {worst:.4} <= 77.7, connectivity and cap/Prim audits {}, {:.2} s",
            if all { "hold" } else { "fail" },
            el.as_secs_f64()
        ),
    }
}

fn pathology() -> Outcome {
    let t = Instant::now();
    let built = match run_construction::<f64>(5, &EpsSchedule::default(), &PathologyOptions::default(), &opts()) {
        Ok(b) => b,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: format!("construction aborted: {e}"),
            }
        }
    };
    let mut ok = true;
    let mut deltas = Vec::new();
    for (st, cert) in &built {
        ok &= cert.pass();
        if st.j <= 1 {
            ok &= cert.optimal == Some(true);
            let d = st.delta.as_ref().map_or(0.0, |d| d.value);
            ok &= d > 0.0;
            deltas.push(d);
        }
    }
    for w in built.windows(2) {
        let inc = w[1].0.length - w[0].0.length;
        ok &= inc > 0.0 && inc < 4.0 * (2.0 * w[1].0.eps).sqrt();
    }
    let worst_rigid = built.iter().fold(0.0f64, |m, (_, c)| m.max(c.rigidity));
    let stages: Vec<_> = built.into_iter().map(|(s, _)| s).collect();
    let acc = accumulation_report(&stages).unwrap();
    let worst_res = acc.sixth_power_residuals.iter().fold(0.0f64, |m, &x| m.max(x));
    ok &= acc.pass(1e-6) && worst_rigid <= 1e-7;
    let el = t.elapsed();
    Outcome {
        pass: ok && el < Duration::from_secs(600),
        detail: format!(
            "stages 0..5, delta_0 = {:.4}, delta_1 = {:.4}, rigidity {worst_rigid:.1e} <= 1e-7, clusters {}, max |xi^6 + 1| {worst_res:.1e}, {:.2} s",
            deltas[0],
            deltas[1],
            acc.clusters,
            el.as_secs_f64()
        ),
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_steiner");
    let dir = std::env::temp_dir().join(format!("steiner-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let inst = dir.join("ball.pts");
    let gen = Command::new(bin)
        .args(["generate", "random-ball", "--d", "2", "--n", "7", "--seed", "9"])
        .output()
        .unwrap();
    std::fs::write(&inst, &gen.stdout).unwrap();
    let inst = inst.to_str().unwrap();
    let runs: [Vec<&str>; 4] = [
        vec!["solve", inst],
        vec!["sphere-connect", "--d", "4", "--t", "60", "--seed", "3"],
        vec!["pathology", "--stages", "2"],
        vec!["generate", "cocircular", "--n", "6", "--seed", "11"],
    ];
    let mut same = 0;
    for args in &runs {
        let a = Command::new(bin).args(args).arg("--threads").arg("1").output().unwrap();
        let b = Command::new(bin).args(args).output().unwrap();
        let c = Command::new(bin).args(args).output().unwrap();
        if a.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout && b.stdout == c.stdout {
            same += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Outcome {
        pass: same == runs.len(),
        detail: format!("{same}/{} commands byte-identical over three runs (one single-threaded)", runs.len()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 exact closed forms", closed_forms),
        ("2 Steiner ratio", steiner_ratio),
        ("3 Maxwell formula and direction sum", maxwell_windrose),
        ("4 cocircular terminals need no Steiner points", cocircular_property),
        ("5 regularity audits", regularity),
        ("6 hypercube d=3", hypercube),
        ("7 sphere connector d=3 t=100", sphere_connector),
        ("8 accumulating construction", pathology),
        ("9 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "acceptance {name}: {} ({}; {:.2} s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
