//! Seeded instance generators.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steiner_core::sphere_connect::random_unit;
use steiner_core::Point64;

/// Uniform points in the unit ball of `R^d`.
pub fn random_ball(d: usize, n: usize, seed: u64) -> Vec<Point64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: Point64 = random_unit(&mut rng, d);
            let r = rng.gen::<f64>().powf(1.0 / d as f64);
            u.map(|c| c * r)
        })
        .collect()
}

/// Uniform points on the unit sphere `S^{d-1}`.
pub fn sphere(d: usize, t: usize, seed: u64) -> Vec<Point64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..t).map(|_| random_unit(&mut rng, d)).collect()
}

/// `n` points on the circle of radius `r` about the origin where every
/// gap between neighbors, except possibly one, has chord at most `r`.
pub fn cocircular(n: usize, r: f64, seed: u64) -> Vec<Point64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(0.3..1.0)).collect();
    let wmax = w.iter().fold(0.0f64, |m, &x| m.max(x));
    let wsum: f64 = w.iter().sum();
    // Chord <= r exactly when the gap angle is <= pi/3.
    let scale = if w.is_empty() {
        0.0
    } else {
        (0.98 * PI / 3.0 / wmax).min(0.95 * 2.0 * PI / wsum)
    };
    let mut theta = rng.gen_range(0.0..2.0 * PI);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        out.push(Point64::xy(r * theta.cos(), r * theta.sin()));
        if k < w.len() {
            theta += w[k] * scale;
        }
    }
    out
}

/// Number of neighbor gaps, in angular order about `center`, whose chord
/// exceeds `r`.
pub fn long_gap_count(points: &[Point64], center: &Point64, r: f64) -> usize {
    let mut ang: Vec<(f64, &Point64)> = points
        .iter()
        .map(|p| ((p.y() - center.y()).atan2(p.x() - center.x()), p))
        .collect();
    ang.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = ang.len();
    if k < 2 {
        return 0;
    }
    (0..k)
        .filter(|&i| {
            let (p, q) = (ang[i].1, ang[(i + 1) % k].1);
            let dx = p.x() - q.x();
            let dy = p.y() - q.y();
            (dx * dx + dy * dy).sqrt() > r * (1.0 + 1e-12)
        })
        .count()
}
