//! The exact solver against brute force and against Melzak's construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steiner_core::solver::validate_solution;
use steiner_core::{solve, Instance64, Point64, SolveOptions};

fn random_planar(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point64> {
    (0..n)
        .map(|_| Point64::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Pattern search over coordinate and pairwise diagonal directions, with
/// the step halved after a few sweeps; exact enough on these convex
/// objectives once the step is far below the tolerance.
fn pattern_search(mut x: Vec<f64>, f: impl Fn(&[f64]) -> f64) -> f64 {
    let k = x.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..k {
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        dirs.push(e);
        for j in i + 1..k {
            for sj in [1.0, -1.0] {
                let mut e = vec![0.0; k];
                e[i] = h;
                e[j] = sj * h;
                dirs.push(e);
            }
        }
    }
    let mut fx = f(&x);
    let mut step = 0.5;
    while step > 1e-12 {
        for _ in 0..20 {
            let mut improved = false;
            for d in &dirs {
                for sgn in [1.0, -1.0] {
                    let y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + sgn * step * b).collect();
                    let fy = f(&y);
                    if fy < fx {
                        fx = fy;
                        x = y;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    fx
}

#[test]
fn three_points_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let p = random_planar(&mut rng, 3);
        let q: Vec<[f64; 2]> = p.iter().map(|p| [p.x(), p.y()]).collect();
        let f = |s: &[f64]| q.iter().map(|&t| dist([s[0], s[1]], t)).sum::<f64>();
        // Coarse grid, then compass search from the best cell.
        let mut best = (f64::INFINITY, vec![0.0, 0.0]);
        for i in 0..=100 {
            for j in 0..=100 {
                let s = [-1.0 + i as f64 * 0.02, -1.0 + j as f64 * 0.02];
                let v = f(&s);
                if v < best.0 {
                    best = (v, s.to_vec());
                }
            }
        }
        let oracle = pattern_search(best.1, f);
        let sol = solve(&Instance64::new(p).unwrap(), &SolveOptions::default()).unwrap();
        assert!((sol.length - oracle).abs() < 1e-8, "{} vs {}", sol.length, oracle);
    }
}

#[test]
fn four_points_against_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let pairings = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    for _ in 0..30 {
        let p = random_planar(&mut rng, 4);
        let q: Vec<[f64; 2]> = p.iter().map(|p| [p.x(), p.y()]).collect();
        let oracle = pairings
            .iter()
            .map(|&[a, b, c, d]| {
                let f = |s: &[f64]| {
                    let (u, v) = ([s[0], s[1]], [s[2], s[3]]);
                    dist(u, q[a]) + dist(u, q[b]) + dist(u, v) + dist(v, q[c]) + dist(v, q[d])
                };
                let mid = |i: usize, j: usize| [(q[i][0] + q[j][0]) / 2.0, (q[i][1] + q[j][1]) / 2.0];
                let (u, v) = (mid(a, b), mid(c, d));
                pattern_search(vec![u[0], u[1], v[0], v[1]], f)
            })
            .fold(f64::INFINITY, f64::min);
        let sol = solve(&Instance64::new(p).unwrap(), &SolveOptions::default()).unwrap();
        assert!(sol.length <= oracle + 1e-9, "solver {} above brute force {}", sol.length, oracle);
        assert!(oracle - sol.length < 1e-6, "brute force {} far above solver {}", oracle, sol.length);
    }
}

#[test]
fn melzak_agrees_with_numerical_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut exact = 0;
    for i in 0..60 {
        let n = 3 + i % 5;
        let inst = Instance64::new(random_planar(&mut rng, n)).unwrap();
        let plain = solve(
            &inst,
            &SolveOptions {
                melzak: false,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        let m = solve(&inst, &SolveOptions::default()).unwrap();
        assert!((plain.length - m.length).abs() < 1e-9, "{} vs {}", plain.length, m.length);
        assert!(!plain.melzak_exact);
        if m.melzak_exact {
            exact += 1;
            assert!(validate_solution(&m.tree, &inst).pass());
        }
    }
    assert!(exact > 0);
}

#[test]
fn pruning_does_not_change_the_answer() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for n in [5, 6, 7] {
        let inst = Instance64::new(random_planar(&mut rng, n)).unwrap();
        let a = solve(&inst, &SolveOptions::default()).unwrap();
        let b = solve(
            &inst,
            &SolveOptions {
                prune: false,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(a.code, b.code);
        assert!((a.length - b.length).abs() < 1e-12);
        assert_eq!(b.pruned_count(), 0);
    }
}
