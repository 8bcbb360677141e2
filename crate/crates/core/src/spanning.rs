//! Minimum spanning trees and the quantities built on them.

use thiserror::Error;

use crate::geometry::{dist_slices, EmbeddedForest, Point, VertexKind, TOL_LEN};
use crate::scalar::Scalar;
use crate::solver::{Instance, InstanceError};

#[derive(Clone, Debug)]
pub struct MstResult<T> {
    /// Vertices are the input points in input order.
    pub tree: EmbeddedForest<T>,
    pub length: T,
    /// Vertices in the order Prim's algorithm reached them.
    pub order: Vec<usize>,
    /// Length of each edge as it was inserted, aligned with `order[1..]`.
    pub step_lengths: Vec<T>,
}

/// Prim's algorithm with a dense `O(n^2)` scan, starting at vertex 0. Ties
/// go to the smaller vertex index.
pub fn prim_mst<T: Scalar>(points: &[Point<T>]) -> MstResult<T> {
    let n = points.len();
    let mut tree = EmbeddedForest::new();
    for p in points {
        tree.add_vertex(p.clone(), VertexKind::Terminal);
    }
    if n == 0 {
        return MstResult {
            tree,
            length: T::zero(),
            order: Vec::new(),
            step_lengths: Vec::new(),
        };
    }
    let mut in_tree = vec![false; n];
    let mut key = vec![T::infinity(); n];
    let mut parent = vec![usize::MAX; n];
    key[0] = T::zero();
    let mut order = Vec::with_capacity(n);
    let mut step_lengths = Vec::with_capacity(n.saturating_sub(1));
    let mut length = T::zero();
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || key[v] < key[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        order.push(u);
        if parent[u] != usize::MAX {
            tree.add_edge(parent[u], u).expect("prim never repeats an edge");
            length = length + key[u];
            step_lengths.push(key[u]);
        }
        for v in 0..n {
            if !in_tree[v] {
                let w = dist_slices(points[u].coords(), points[v].coords());
                if w < key[v] {
                    key[v] = w;
                    parent[v] = u;
                }
            }
        }
    }
    MstResult {
        tree,
        length,
        order,
        step_lengths,
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RatioError {
    #[error("Steiner tree length must be positive")]
    NonPositive,
    #[error("ratio {0} outside [1, sqrt 3]")]
    OutOfRange(f64),
}

/// MST length over the given Steiner tree length. A value outside
/// `[1, sqrt 3]` means the Steiner length is wrong.
pub fn steiner_ratio<T: Scalar>(inst: &Instance<T>, smt_length: T) -> Result<T, RatioError> {
    if !(smt_length > T::zero()) {
        return Err(RatioError::NonPositive);
    }
    let r = prim_mst(inst.terminals()).length / smt_length;
    let tol = T::lit(TOL_LEN);
    if r < T::one() - tol || r > T::sqrt3() + tol {
        return Err(RatioError::OutOfRange(r.to_f64_lossy()));
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypercubeReport<T> {
    pub d: usize,
    pub mst_length: T,
    /// `2 (2^d - 1)`.
    pub mst_formula: T,
    /// `(2 / sqrt 3) (2^d - 1)`.
    pub lower_bound: T,
    /// `2 (2^d - 1) / sqrt(3 d)`: length per unit ball after rescaling the
    /// cube into the unit ball.
    pub density: T,
    /// The lower bound is a statement about `d > 2`; in the plane it is
    /// only reported.
    pub informational: bool,
}

/// The corners of `{-1, 1}^d` in binary order (bit `k` set means
/// coordinate `k` is `+1`), with the MST figures.
pub fn hypercube_instance<T: Scalar>(d: usize) -> Result<(Instance<T>, HypercubeReport<T>), InstanceError> {
    let pts: Vec<Point<T>> = (0..1usize << d)
        .map(|mask| {
            Point::new(
                (0..d)
                    .map(|k| if mask >> k & 1 == 1 { T::one() } else { -T::one() })
                    .collect(),
            )
        })
        .collect::<Result<_, _>>()?;
    let inst = Instance::new(pts)?;
    let m = T::from_usize_lossy((1usize << d) - 1);
    let report = HypercubeReport {
        d,
        mst_length: prim_mst(inst.terminals()).length,
        mst_formula: T::two() * m,
        lower_bound: T::two() / T::sqrt3() * m,
        density: T::two() * m / (T::three() * T::from_usize_lossy(d)).sqrt(),
        informational: d <= 2,
    };
    Ok((inst, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pts(v: &[(f64, f64)]) -> Vec<Point<f64>> {
        v.iter().map(|&(x, y)| Point::xy(x, y)).collect()
    }

    #[test]
    fn square_and_triangle() {
        let sq = pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let m = prim_mst(&sq);
        assert_abs_diff_eq!(m.length, 3.0, epsilon = 1e-15);
        assert_eq!(m.order, vec![0, 1, 2, 3]);
        assert_eq!(m.tree.edge_count(), 3);
        let tri = pts(&[(0.0, 0.0), (1.0, 0.0), (0.5, 3f64.sqrt() / 2.0)]);
        assert_abs_diff_eq!(prim_mst(&tri).length, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(prim_mst::<f64>(&[]).length, 0.0);
        let one = prim_mst(&pts(&[(1.0, 2.0)]));
        assert_eq!(one.order, vec![0]);
        assert_eq!(one.tree.edge_count(), 0);
    }

    #[test]
    fn hypercube_figures() {
        let (i, r) = hypercube_instance::<f64>(3).unwrap();
        assert_eq!(i.n(), 8);
        assert_eq!(r.mst_length, 14.0);
        assert_eq!(r.mst_formula, 14.0);
        assert_abs_diff_eq!(r.lower_bound, 14.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.density, 14.0 / 3.0, epsilon = 1e-12);
        let (_, r2) = hypercube_instance::<f64>(2).unwrap();
        assert_eq!(r2.mst_length, 6.0);
        assert!(r2.informational);
        assert_abs_diff_eq!(r2.lower_bound, 2.0 * 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn ratio_checks_range() {
        let i = Instance::new(pts(&[(0.0, 0.0), (1.0, 0.0)])).unwrap();
        assert_eq!(steiner_ratio(&i, 1.0).unwrap(), 1.0);
        assert!(matches!(steiner_ratio(&i, 0.5), Err(RatioError::OutOfRange(_))));
        assert!(matches!(steiner_ratio(&i, 0.0), Err(RatioError::NonPositive)));
    }
}
