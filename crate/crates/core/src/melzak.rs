//! Melzak's construction of the full locally minimal tree for a fixed
//! planar topology.
//!
//! Merge phase: a Steiner vertex with two leaf neighbors `p1, p2` (a cherry)
//! is replaced by the apex `p` of an equilateral triangle on `[p1 p2]`,
//! which keeps the optimal length. After `n - 2` merges two points remain and
//! their distance is the tree length. Reconstruction walks the merges
//! backwards: the Steiner point is the second intersection of the segment
//! from `p` towards its already placed neighbor with the circle through
//! `p, p1, p2`. Each merge has two possible apex sides; all `2^(n-2)`
//! choices are searched depth first.

use crate::geometry::{dist_slices, forest_length, EmbeddedForest, Point, VertexKind, TOL_GEOM};
use crate::opt::{validate_local_minimality, FixedTopologyResult};
use crate::scalar::Scalar;
use crate::solver::Instance;
use crate::topology::{ContractedTopology, FullTopology};

/// Largest topology handled by the orientation search.
pub const MELZAK_N_MAX: usize = 12;

/// Side of the directed line `p1 -> p2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Counterclockwise of `p1 -> p2`.
    Left,
    Right,
}

/// Apex of the equilateral triangle on `[p1 p2]` on the requested side.
/// `None` for coincident or non-planar input.
pub fn melzak_third_point<T: Scalar>(p1: &Point<T>, p2: &Point<T>, side: Side) -> Option<Point<T>> {
    if p1.dim() != 2 || p2.dim() != 2 {
        return None;
    }
    let (dx, dy) = (p2.x() - p1.x(), p2.y() - p1.y());
    if dx == T::zero() && dy == T::zero() {
        return None;
    }
    let h = T::sqrt3() / T::two();
    let (mx, my) = ((p1.x() + p2.x()) * T::half(), (p1.y() + p2.y()) * T::half());
    // Left normal of (dx, dy) is (-dy, dx).
    let sgn = match side {
        Side::Left => T::one(),
        Side::Right => -T::one(),
    };
    Some(Point::xy(mx - sgn * h * dy, my + sgn * h * dx))
}

/// One merge of the reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeRecord<T> {
    /// Topology vertex ids of the two merged leaves.
    pub merged: (usize, usize),
    /// The Steiner vertex that became a leaf.
    pub steiner: usize,
    pub apex: Point<T>,
    pub side: Side,
}

/// Full record of a successful construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MelzakTrace<T> {
    pub merges: Vec<MergeRecord<T>>,
    /// The two points left after all merges.
    pub final_pair: (Point<T>, Point<T>),
    /// Segments of the reconstructed tree as topology vertex pairs.
    pub segments: Vec<(usize, usize)>,
}

fn circumcenter<T: Scalar>(a: &[T], b: &[T], c: &[T]) -> Option<(T, T)> {
    let (ax, ay, bx, by, cx, cy) = (a[0], a[1], b[0], b[1], c[0], c[1]);
    let d = T::two() * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == T::zero() {
        return None;
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    Some((
        (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d,
        (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d,
    ))
}

fn orient<T: Scalar>(a: &[T], b: &[T], c: &[T]) -> T {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

struct Search<'a, T> {
    inst: &'a Instance<T>,
    n: usize,
    adj: Vec<Vec<usize>>,
    /// Merge plan: (steiner, leaf1, leaf2) in merge order; fixed by the
    /// topology alone.
    plan: Vec<(usize, usize, usize)>,
    final_pair: (usize, usize),
    tries: usize,
}

impl<'a, T: Scalar> Search<'a, T> {
    fn new(inst: &'a Instance<T>, t: &FullTopology) -> Self {
        let n = inst.n();
        let adj = t.adjacency();
        let total = adj.len();
        let mut alive_deg: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; total];
        let mut is_leaf: Vec<bool> = (0..total).map(|v| v < n).collect();
        let mut plan = Vec::new();
        for _ in 0..t.steiner_count() {
            let (q, p1, p2) = (n..total)
                .filter(|&q| !removed[q] && !is_leaf[q])
                .find_map(|q| {
                    let leaves: Vec<usize> = adj[q]
                        .iter()
                        .copied()
                        .filter(|&w| !removed[w] && is_leaf[w])
                        .collect();
                    (leaves.len() >= 2).then(|| (q, leaves[0], leaves[1]))
                })
                .expect("a full topology always has a cherry");
            removed[p1] = true;
            removed[p2] = true;
            alive_deg[q] -= 2;
            is_leaf[q] = true;
            plan.push((q, p1.min(p2), p1.max(p2)));
        }
        let rest: Vec<usize> = (0..total).filter(|&v| !removed[v]).collect();
        debug_assert_eq!(rest.len(), 2);
        Self {
            inst,
            n,
            adj,
            plan,
            final_pair: (rest[0], rest[1]),
            tries: 0,
        }
    }

    /// Runs merges for one orientation vector and reconstructs. Returns the
    /// Steiner positions (indexed by `v - n`) on success.
    fn attempt(&mut self, sides: &[Side]) -> Option<(Vec<Point<T>>, Vec<Point<T>>)> {
        self.tries += 1;
        let n = self.n;
        let total = self.adj.len();
        let tol = T::lit(TOL_GEOM);
        let mut pseudo: Vec<Option<Point<T>>> = vec![None; total];
        for v in 0..n {
            pseudo[v] = Some(self.inst.terminals()[v].clone());
        }
        let mut apexes = Vec::with_capacity(self.plan.len());
        for (k, &(q, p1, p2)) in self.plan.iter().enumerate() {
            let a = pseudo[p1].as_ref()?;
            let b = pseudo[p2].as_ref()?;
            let apex = melzak_third_point(a, b, sides[k])?;
            apexes.push(apex.clone());
            pseudo[q] = Some(apex);
        }
        // Reconstruction.
        let mut actual: Vec<Option<Point<T>>> = vec![None; total];
        for v in 0..n {
            actual[v] = Some(self.inst.terminals()[v].clone());
        }
        let mut far: Vec<Option<Point<T>>> = vec![None; total];
        let (fa, fb) = self.final_pair;
        far[fa] = pseudo[fb].clone();
        far[fb] = pseudo[fa].clone();
        for &(q, p1, p2) in self.plan.iter().rev() {
            let p = pseudo[q].clone()?;
            let w = far[q].clone()?;
            let (c1, c2) = (pseudo[p1].as_ref()?, pseudo[p2].as_ref()?);
            let (cx, cy) = circumcenter(p.coords(), c1.coords(), c2.coords())?;
            let v = p.minus(&w);
            let v: Vec<T> = v.iter().map(|x| -*x).collect();
            let vv = v[0] * v[0] + v[1] * v[1];
            if vv == T::zero() {
                return None;
            }
            let s = -T::two() * ((p.x() - cx) * v[0] + (p.y() - cy) * v[1]) / vv;
            let slack = tol / vv.sqrt();
            if s < -slack || s > T::one() + slack {
                return None;
            }
            let sq = p.offset(&v, s);
            // The Steiner point must sit on the arc of the circle opposite to
            // the apex, where p1 and p2 subtend 2 pi / 3.
            let side_p = orient(c1.coords(), c2.coords(), p.coords());
            let side_s = orient(c1.coords(), c2.coords(), sq.coords());
            if !(side_p * side_s < T::zero()) {
                return None;
            }
            far[p1] = Some(sq.clone());
            far[p2] = Some(sq.clone());
            actual[q] = Some(sq);
        }
        let steiner: Vec<Point<T>> = (n..total).map(|v| actual[v].clone()).collect::<Option<_>>()?;
        Some((steiner, apexes))
    }

    fn build_tree(&self, steiner: &[Point<T>]) -> EmbeddedForest<T> {
        let mut f = EmbeddedForest::new();
        for p in self.inst.terminals() {
            f.add_vertex(p.clone(), VertexKind::Terminal);
        }
        for p in steiner {
            f.add_vertex(p.clone(), VertexKind::Branch);
        }
        for (u, nb) in self.adj.iter().enumerate() {
            for &w in nb {
                if u < w {
                    f.add_edge(u, w).expect("topology edges are distinct");
                }
            }
        }
        f
    }

    /// Accepts a reconstruction only if it is a genuine full tree: positive
    /// edge lengths and 2 pi / 3 angles everywhere.
    fn acceptable(&self, tree: &EmbeddedForest<T>) -> bool {
        let tol = T::lit(TOL_GEOM);
        if (0..tree.edge_count()).any(|e| tree.edge_length(e) <= tol) {
            return false;
        }
        validate_local_minimality(tree, T::lit(1e-6)).pass
    }
}

/// Exact full realization of topology `t` for a planar instance, or `None`
/// when no full locally minimal tree with that topology exists.
pub fn solve_full_planar<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
) -> Option<FixedTopologyResult<T>> {
    solve_full_planar_traced(inst, t).map(|(r, _)| r)
}

/// As [`solve_full_planar`], also returning the merge/reconstruction trace.
pub fn solve_full_planar_traced<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
) -> Option<(FixedTopologyResult<T>, MelzakTrace<T>)> {
    let n = inst.n();
    if inst.dim() != 2 || t.terminal_count() != n || n > MELZAK_N_MAX {
        return None;
    }
    let mut search = Search::new(inst, t);
    let k = search.plan.len();
    let mut best: Option<(T, Vec<Point<T>>, Vec<Point<T>>, Vec<Side>)> = None;
    let mut sides = vec![Side::Left; k];
    // Depth-first over the orientation bits; the leaf level runs the
    // reconstruction, which rejects as soon as a Steiner point leaves its arc.
    fn dfs<T: Scalar>(
        i: usize,
        sides: &mut Vec<Side>,
        search: &mut Search<'_, T>,
        best: &mut Option<(T, Vec<Point<T>>, Vec<Point<T>>, Vec<Side>)>,
    ) {
        if i == sides.len() {
            if let Some((steiner, apexes)) = search.attempt(sides) {
                let tree = search.build_tree(&steiner);
                if search.acceptable(&tree) {
                    let len = forest_length(&tree);
                    if best.as_ref().map_or(true, |b| len < b.0) {
                        *best = Some((len, steiner, apexes, sides.clone()));
                    }
                }
            }
            return;
        }
        for s in [Side::Left, Side::Right] {
            sides[i] = s;
            dfs(i + 1, sides, search, best);
        }
    }
    dfs(0, &mut sides, &mut search, &mut best);
    let (_, steiner, apexes, sides) = best?;
    let tree = search.build_tree(&steiner);
    let length = forest_length(&tree);
    let final_pair = {
        let (a, b) = search.final_pair;
        let pseudo_of = |v: usize| -> Point<T> {
            if v < n {
                inst.terminals()[v].clone()
            } else {
                let k = search.plan.iter().position(|&(q, _, _)| q == v).unwrap();
                apexes[k].clone()
            }
        };
        (pseudo_of(a), pseudo_of(b))
    };
    debug_assert!({
        let reduced = dist_slices(final_pair.0.coords(), final_pair.1.coords());
        (reduced - length).abs() <= T::lit(1e-8) * (T::one() + length)
    });
    let trace = MelzakTrace {
        merges: search
            .plan
            .iter()
            .zip(apexes.iter().zip(&sides))
            .map(|(&(q, p1, p2), (a, s))| MergeRecord {
                merged: (p1, p2),
                steiner: q,
                apex: a.clone(),
                side: *s,
            })
            .collect(),
        final_pair,
        segments: tree.edges().to_vec(),
    };
    let result = FixedTopologyResult {
        tree,
        length,
        converged: true,
        iterations: search.tries,
        max_branch_move_last_iter: T::zero(),
        steiner_positions: steiner,
        clusters: Vec::new(),
        family_member: ContractedTopology::new(t.clone(), Vec::new()).ok(),
    };
    Some((result, trace))
}
