//! Fixed-topology length minimization in `R^d`.
//!
//! For a full topology the tree length is a convex function of the Steiner
//! positions `(y_1, .., y_{n-2})`. It is non-smooth where an edge collapses,
//! so we minimize the smoothed objective `sum sqrt(|p_u - p_v|^2 + eta^2)`
//! with damped Newton steps while `eta` shrinks geometrically, and finish
//! with exact Newton steps when no edge has collapsed.

use thiserror::Error;

use crate::geometry::{
    angle_between, dist_slices, dot, forest_length, norm, EmbeddedForest, Point, VertexKind,
};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;
use crate::solver::Instance;
use crate::topology::{ContractedTopology, FullTopology};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptError {
    #[error("topology has {topology} terminals, instance has {instance}")]
    TerminalCountMismatch { topology: usize, instance: usize },
    #[error("initial guess has {got} Steiner points, expected {expected}")]
    BadInitialGuess { got: usize, expected: usize },
    #[error("no convergence after {iterations} Newton iterations (length {length})")]
    NotConverged { iterations: usize, length: f64 },
}

/// Tuning knobs; all distances are relative to the instance diameter.
#[derive(Clone, Debug, PartialEq)]
pub struct OptOptions {
    /// Convergence tolerance on branch moves.
    pub tol: f64,
    /// Cap on the total number of Newton iterations.
    pub max_iterations: usize,
    /// Vertices closer than this are reported as one merged cluster.
    pub merge_tol: f64,
    /// First and last smoothing parameters of the continuation.
    pub eta_start: f64,
    pub eta_end: f64,
}

impl Default for OptOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iterations: 1_000_000,
            merge_tol: 1e-7,
            eta_start: 1e-3,
            eta_end: 1e-14,
        }
    }
}

/// Minimizer of the length function for one full topology.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedTopologyResult<T> {
    /// Embedded tree after merging collapsed clusters. Vertices `0..n` are the
    /// terminals in instance order.
    pub tree: EmbeddedForest<T>,
    pub length: T,
    pub converged: bool,
    pub iterations: usize,
    pub max_branch_move_last_iter: T,
    /// Raw Steiner positions, one per Steiner vertex of the topology.
    pub steiner_positions: Vec<Point<T>>,
    /// Topology vertices grouped into merged clusters (singletons omitted).
    pub clusters: Vec<Vec<usize>>,
    /// The realized member of `D(T)` when every cluster is a single
    /// terminal-to-Steiner contraction; `None` for other degenerations.
    pub family_member: Option<ContractedTopology>,
}

impl<T: Scalar> FixedTopologyResult<T> {
    pub fn is_full(&self) -> bool {
        self.clusters.is_empty()
    }
}

/// Outcome of a minimization with a pruning cutoff.
#[derive(Clone, Debug, PartialEq)]
pub enum Minimized<T> {
    Done(FixedTopologyResult<T>),
    /// A certified lower bound on the family minimum exceeded the cutoff.
    Pruned { lower_bound: T },
}

struct Problem<'a, T> {
    terminals: &'a [Point<T>],
    n: usize,
    m: usize,
    d: usize,
    edges: Vec<(usize, usize)>,
}

impl<'a, T: Scalar> Problem<'a, T> {
    fn pos<'b>(&'b self, v: usize, y: &'b [T]) -> &'b [T] {
        if v < self.n {
            self.terminals[v].coords()
        } else {
            let i = v - self.n;
            &y[i * self.d..(i + 1) * self.d]
        }
    }

    fn value(&self, y: &[T], eta2: T) -> T {
        self.edges.iter().fold(T::zero(), |s, &(u, v)| {
            let (a, b) = (self.pos(u, y), self.pos(v, y));
            let r2 = a
                .iter()
                .zip(b)
                .fold(T::zero(), |s, (x, z)| s + (*x - *z) * (*x - *z));
            s + (r2 + eta2).sqrt()
        })
    }

    fn gradient(&self, y: &[T], eta2: T) -> Vec<T> {
        let (n, d) = (self.n, self.d);
        let mut g = vec![T::zero(); self.m * d];
        for &(u, v) in &self.edges {
            let w: Vec<T> = self
                .pos(u, y)
                .iter()
                .zip(self.pos(v, y))
                .map(|(a, b)| *a - *b)
                .collect();
            let r = (dot(&w, &w) + eta2).sqrt();
            if r == T::zero() {
                continue;
            }
            for c in 0..d {
                if u >= n {
                    g[(u - n) * d + c] = g[(u - n) * d + c] + w[c] / r;
                }
                if v >= n {
                    g[(v - n) * d + c] = g[(v - n) * d + c] - w[c] / r;
                }
            }
        }
        g
    }

    fn hessian(&self, y: &[T], eta2: T) -> DenseMatrix<T> {
        let (n, d) = (self.n, self.d);
        let mut h = DenseMatrix::zeros(self.m * d);
        for &(u, v) in &self.edges {
            let w: Vec<T> = self
                .pos(u, y)
                .iter()
                .zip(self.pos(v, y))
                .map(|(a, b)| *a - *b)
                .collect();
            let r2 = dot(&w, &w) + eta2;
            let r = r2.sqrt();
            if r == T::zero() {
                continue;
            }
            for a in 0..d {
                for b in 0..d {
                    let delta = if a == b { T::one() } else { T::zero() };
                    let val = (delta - w[a] * w[b] / r2) / r;
                    if u >= n {
                        h.add((u - n) * d + a, (u - n) * d + b, val);
                    }
                    if v >= n {
                        h.add((v - n) * d + a, (v - n) * d + b, val);
                    }
                    if u >= n && v >= n {
                        h.add((u - n) * d + a, (v - n) * d + b, -val);
                        h.add((v - n) * d + a, (u - n) * d + b, -val);
                    }
                }
            }
        }
        h
    }

    /// Minimizer of the sum of squared edge lengths: every Steiner point at
    /// the average of its neighbors. One linear solve.
    fn quadratic_start(&self) -> Vec<T> {
        let (n, d, m) = (self.n, self.d, self.m);
        let mut lap = DenseMatrix::zeros(m);
        let mut rhs = vec![vec![T::zero(); m]; d];
        for &(u, v) in &self.edges {
            for (a, b) in [(u, v), (v, u)] {
                if a >= n {
                    lap.add(a - n, a - n, T::one());
                    if b >= n {
                        lap.add(a - n, b - n, -T::one());
                    } else {
                        for c in 0..d {
                            rhs[c][a - n] = rhs[c][a - n] + self.terminals[b].coords()[c];
                        }
                    }
                }
            }
        }
        let ok = lap.cholesky_in_place();
        debug_assert!(ok, "tree Laplacian with terminal anchors is positive definite");
        let mut y = vec![T::zero(); m * d];
        for (c, r) in rhs.iter().enumerate() {
            let sol = lap.cholesky_solve(r);
            for i in 0..m {
                y[i * d + c] = sol[i];
            }
        }
        y
    }

    /// One damped Newton step. Returns `(max vertex move, new value)` or
    /// `None` if no descent was possible.
    fn newton_step(&self, y: &mut [T], eta2: T) -> Option<(T, T)> {
        let f0 = self.value(y, eta2);
        let g = self.gradient(y, eta2);
        let base = self.hessian(y, eta2);
        let mut shift = T::zero();
        let dirn = loop {
            let mut h = base.clone();
            if shift > T::zero() {
                for i in 0..h.size() {
                    h.add(i, i, shift);
                }
            }
            if h.cholesky_in_place() {
                let p = h.cholesky_solve(&g);
                break p.into_iter().map(|v| -v).collect::<Vec<T>>();
            }
            let scale = (0..base.size())
                .fold(T::zero(), |s, i| s.max(base.get(i, i).abs()))
                .max(T::one());
            shift = if shift == T::zero() {
                scale * T::lit(1e-12)
            } else {
                shift * T::lit(10.0)
            };
            if shift > scale * T::lit(1e6) {
                return None;
            }
        };
        let slope = dot(&g, &dirn);
        if !(slope < T::zero()) {
            return None;
        }
        let mut t = T::one();
        let mut trial = y.to_vec();
        // Once the predicted decrease is below the rounding of `f` the
        // Armijo test is noise; the full step is then the better estimate.
        let quadratic = -slope <= T::epsilon() * T::lit(64.0) * f0.abs();
        for _ in 0..80 {
            for (k, v) in trial.iter_mut().enumerate() {
                *v = y[k] + t * dirn[k];
            }
            let f1 = self.value(&trial, eta2);
            if quadratic || f1 <= f0 + T::lit(1e-4) * t * slope {
                let d = self.d;
                let mut mv = T::zero();
                for i in 0..self.m {
                    let s = dist_slices(&trial[i * d..(i + 1) * d], &y[i * d..(i + 1) * d]);
                    mv = mv.max(s);
                }
                y.copy_from_slice(&trial);
                return Some((mv, f1));
            }
            t = t * T::half();
        }
        None
    }

    /// Certified lower bound on the unsmoothed minimum: convexity gives
    /// `min f_eta >= f_eta(y) - |grad| * R`, `R` bounding the distance to
    /// any minimizer inside the terminal hull, and `f_0 >= f_eta - |E| eta`.
    fn lower_bound(&self, y: &[T], eta: T, center: &[T], radius: T) -> T {
        let eta2 = eta * eta;
        let f = self.value(y, eta2);
        let g = self.gradient(y, eta2);
        let mut r2 = T::zero();
        for i in 0..self.m {
            let s = dist_slices(&y[i * self.d..(i + 1) * self.d], center) + radius;
            r2 = r2 + s * s;
        }
        f - norm(&g) * r2.sqrt() - T::from_usize_lossy(self.edges.len()) * eta
    }
}

/// Minimizes the tree length over Steiner positions for topology `t`.
pub fn minimize_topology<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
    opts: &OptOptions,
) -> Result<FixedTopologyResult<T>, OptError> {
    match minimize_core(inst, t, None, opts, None)? {
        Minimized::Done(r) => Ok(r),
        Minimized::Pruned { .. } => unreachable!("no cutoff given"),
    }
}

/// As [`minimize_topology`], starting from the given Steiner positions.
pub fn minimize_topology_from<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
    initial: &[Point<T>],
    opts: &OptOptions,
) -> Result<FixedTopologyResult<T>, OptError> {
    match minimize_core(inst, t, Some(initial), opts, None)? {
        Minimized::Done(r) => Ok(r),
        Minimized::Pruned { .. } => unreachable!("no cutoff given"),
    }
}

/// As [`minimize_topology`], but gives up early once a certified lower bound
/// on the family minimum exceeds `cutoff`.
pub fn minimize_topology_with_cutoff<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
    opts: &OptOptions,
    cutoff: T,
) -> Result<Minimized<T>, OptError> {
    minimize_core(inst, t, None, opts, Some(cutoff))
}

fn minimize_core<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
    initial: Option<&[Point<T>]>,
    opts: &OptOptions,
    cutoff: Option<T>,
) -> Result<Minimized<T>, OptError> {
    let n = inst.n();
    if t.terminal_count() != n {
        return Err(OptError::TerminalCountMismatch {
            topology: t.terminal_count(),
            instance: n,
        });
    }
    let d = inst.dim();
    let m = t.steiner_count();
    let problem = Problem {
        terminals: inst.terminals(),
        n,
        m,
        d,
        edges: t.edges().collect(),
    };
    let diam = inst.diameter();
    let mut y = match initial {
        Some(init) => {
            if init.len() != m {
                return Err(OptError::BadInitialGuess {
                    got: init.len(),
                    expected: m,
                });
            }
            init.iter().flat_map(|p| p.coords().iter().copied()).collect()
        }
        None if m > 0 => problem.quadratic_start(),
        None => Vec::new(),
    };
    let mut iterations = 0usize;
    let mut last_move = T::zero();
    let mut converged = m == 0;
    if m > 0 {
        let (center, radius) = inst.bounding_ball();
        let tol_abs = T::lit(opts.tol) * diam;
        let mut eta = T::lit(opts.eta_start) * diam;
        let eta_end = T::lit(opts.eta_end) * diam;
        let mut levels = Vec::new();
        while eta > eta_end * T::lit(1.5) {
            levels.push(eta);
            eta = eta * T::lit(0.1);
        }
        levels.push(eta_end);
        for &eta in &levels {
            let eta2 = eta * eta;
            let level_tol = (eta * T::lit(1e-2)).max(tol_abs);
            let mut fprev = problem.value(&y, eta2);
            for _ in 0..200 {
                if iterations >= opts.max_iterations {
                    break;
                }
                iterations += 1;
                let Some((mv, f)) = problem.newton_step(&mut y, eta2) else {
                    break;
                };
                last_move = mv;
                let stalled = f >= fprev;
                fprev = f;
                if mv <= level_tol || stalled {
                    break;
                }
            }
            if let Some(cut) = cutoff {
                let lb = problem.lower_bound(&y, eta, center.coords(), radius);
                if lb > cut + T::lit(1e-9) * diam {
                    return Ok(Minimized::Pruned { lower_bound: lb });
                }
            }
        }
        // Exact polish when nothing collapsed.
        let merge_abs = T::lit(opts.merge_tol) * diam;
        let min_edge = problem.edges.iter().fold(T::infinity(), |s, &(u, v)| {
            s.min(dist_slices(problem.pos(u, &y), problem.pos(v, &y)))
        });
        if min_edge > merge_abs {
            let mut fprev = problem.value(&y, T::zero());
            // Near the optimum the decrease drops below rounding of `f`, so
            // steps within a few ulps still count as progress.
            let noise = T::epsilon() * T::lit(16.0);
            for _ in 0..50 {
                if iterations >= opts.max_iterations {
                    break;
                }
                iterations += 1;
                let mut trial = y.clone();
                match problem.newton_step(&mut trial, T::zero()) {
                    Some((mv, f)) if f <= fprev + noise * fprev.abs() => {
                        y = trial;
                        last_move = mv;
                        fprev = f;
                        if mv <= tol_abs * T::lit(1e-3) {
                            break;
                        }
                    }
                    _ => break,
                }
            }
        }
        converged = iterations < opts.max_iterations;
    }
    let steiner_positions: Vec<Point<T>> = (0..m)
        .map(|i| Point::from_vec_unchecked(y[i * d..(i + 1) * d].to_vec()))
        .collect();
    let result = assemble(inst, t, steiner_positions, T::lit(opts.merge_tol) * diam, converged, iterations, last_move);
    if !result.converged {
        return Err(OptError::NotConverged {
            iterations,
            length: result.length.to_f64_lossy(),
        });
    }
    Ok(Minimized::Done(result))
}

/// Builds the merged embedded tree from raw Steiner positions.
pub(crate) fn assemble<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
    steiner_positions: Vec<Point<T>>,
    merge_abs: T,
    converged: bool,
    iterations: usize,
    last_move: T,
) -> FixedTopologyResult<T> {
    let n = inst.n();
    let total = t.topology().vertex_count();
    let pos = |v: usize| -> &Point<T> {
        if v < n {
            &inst.terminals()[v]
        } else {
            &steiner_positions[v - n]
        }
    };
    // Union-find over short edges; never joins two terminal clusters.
    let mut parent: Vec<usize> = (0..total).collect();
    let mut has_terminal: Vec<bool> = (0..total).map(|v| v < n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in t.edges() {
        if dist_slices(pos(u).coords(), pos(v).coords()) <= merge_abs {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv && !(has_terminal[ru] && has_terminal[rv]) {
                // Keep a terminal as the representative.
                let (keep, drop) = if has_terminal[rv] { (rv, ru) } else { (ru, rv) };
                parent[drop] = keep;
                has_terminal[keep] = has_terminal[keep] || has_terminal[drop];
            }
        }
    }
    let roots: Vec<usize> = (0..total).map(|v| find(&mut parent, v)).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); total];
    for v in 0..total {
        members[roots[v]].push(v);
    }
    let mut tree = EmbeddedForest::new();
    let mut vid = vec![usize::MAX; total];
    for (i, p) in inst.terminals().iter().enumerate() {
        vid[i] = tree.add_vertex(p.clone(), VertexKind::Terminal);
    }
    for v in n..total {
        if roots[v] != v {
            continue;
        }
        if members[v].iter().any(|&w| w < n) {
            continue;
        }
        let k = T::from_usize_lossy(members[v].len());
        let d = inst.dim();
        let mut c = vec![T::zero(); d];
        for &w in &members[v] {
            for (j, x) in pos(w).coords().iter().enumerate() {
                c[j] = c[j] + *x / k;
            }
        }
        vid[v] = tree.add_vertex(Point::from_vec_unchecked(c), VertexKind::Branch);
    }
    for v in 0..total {
        if vid[v] == usize::MAX {
            vid[v] = vid[roots[v]];
        }
    }
    for (u, v) in t.edges() {
        let (a, b) = (vid[roots[u]], vid[roots[v]]);
        if a != b {
            tree.add_edge(a, b).expect("merged tree has no parallel edges");
        }
    }
    let clusters: Vec<Vec<usize>> = members.into_iter().filter(|c| c.len() > 1).collect();
    let family_member = if clusters.iter().all(|c| c.len() == 2 && c[0] < n && c[1] >= n) {
        ContractedTopology::new(t.clone(), clusters.iter().map(|c| (c[0], c[1])).collect()).ok()
    } else {
        None
    };
    let length = forest_length(&tree);
    FixedTopologyResult {
        tree,
        length,
        converged,
        iterations,
        max_branch_move_last_iter: last_move,
        steiner_positions,
        clusters,
        family_member,
    }
}

/// Residuals of the first-order optimality conditions at a minimizer.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgradientReport<T> {
    /// Largest norm of the unit-direction sum at a free (unmerged) Steiner
    /// point, and of the total external force on a terminal-free cluster.
    pub max_free_residual: T,
    /// Largest force an internal collapsed edge has to carry; the
    /// subgradient of a zero-length edge is the unit ball, so this must not
    /// exceed 1.
    pub max_collapsed_force: T,
}

impl<T: Scalar> SubgradientReport<T> {
    pub fn holds(&self, tol_grad: T) -> bool {
        self.max_free_residual <= tol_grad && self.max_collapsed_force <= T::one() + tol_grad
    }
}

/// Checks the subdifferential optimality conditions for a result of
/// [`minimize_topology`] on `(inst, t)`.
pub fn subgradient_report<T: Scalar>(
    inst: &Instance<T>,
    t: &FullTopology,
    r: &FixedTopologyResult<T>,
) -> SubgradientReport<T> {
    let n = inst.n();
    let total = t.topology().vertex_count();
    let mut cluster_of = vec![usize::MAX; total];
    for (k, c) in r.clusters.iter().enumerate() {
        for &v in c {
            cluster_of[v] = k;
        }
    }
    // Positions after merging: cluster members sit at the cluster vertex.
    let place = |v: usize| -> Vec<T> {
        if cluster_of[v] != usize::MAX {
            let c = &r.clusters[cluster_of[v]];
            if let Some(&term) = c.iter().find(|&&w| w < n) {
                return inst.terminals()[term].coords().to_vec();
            }
            let k = T::from_usize_lossy(c.len());
            let mut acc = vec![T::zero(); inst.dim()];
            for &w in c {
                for (j, x) in r.steiner_positions[w - n].coords().iter().enumerate() {
                    acc[j] = acc[j] + *x / k;
                }
            }
            return acc;
        }
        if v < n {
            inst.terminals()[v].coords().to_vec()
        } else {
            r.steiner_positions[v - n].coords().to_vec()
        }
    };
    let adj = t.adjacency();
    let same = |a: usize, b: usize| cluster_of[a] != usize::MAX && cluster_of[a] == cluster_of[b];
    // Sum of outward unit directions over external edges at v.
    let ext_force = |v: usize| -> Vec<T> {
        let pv = place(v);
        let mut acc = vec![T::zero(); inst.dim()];
        for &w in &adj[v] {
            if same(v, w) {
                continue;
            }
            let pw = place(w);
            let dir: Vec<T> = pw.iter().zip(&pv).map(|(a, b)| *a - *b).collect();
            let len = norm(&dir);
            if len > T::zero() {
                for j in 0..acc.len() {
                    acc[j] = acc[j] + dir[j] / len;
                }
            }
        }
        acc
    };
    let mut max_free = T::zero();
    let mut max_force = T::zero();
    for v in n..total {
        if cluster_of[v] == usize::MAX {
            max_free = max_free.max(norm(&ext_force(v)));
        }
    }
    for c in &r.clusters {
        // Root the cluster at its terminal (or any member) and push forces up.
        let root = c.iter().copied().find(|&w| w < n).unwrap_or(c[0]);
        let mut order = vec![root];
        let mut par = vec![usize::MAX; total];
        par[root] = root;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for &w in &adj[u] {
                if same(u, w) && par[w] == usize::MAX {
                    par[w] = u;
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut force: Vec<Vec<T>> = vec![Vec::new(); total];
        for &u in order.iter().rev() {
            let mut f = ext_force(u);
            for &w in &adj[u] {
                if same(u, w) && par[w] == u {
                    for j in 0..f.len() {
                        f[j] = f[j] + force[w][j];
                    }
                }
            }
            if u != root {
                max_force = max_force.max(norm(&f));
            } else if root >= n {
                max_free = max_free.max(norm(&f));
            }
            force[u] = f;
        }
    }
    SubgradientReport {
        max_free_residual: max_free,
        max_collapsed_force: max_force,
    }
}

/// Per-vertex verdict of [`validate_local_minimality`].
#[derive(Clone, Debug, PartialEq)]
pub struct VertexVerdict<T> {
    pub vertex: usize,
    pub degree: usize,
    /// Smallest pairwise angle between incident edges (`pi` if fewer than two).
    pub min_angle: T,
    /// Largest pairwise angle (only informative at degree 3).
    pub max_angle: T,
    /// Distance of the third unit direction from the plane of the first two
    /// (degree-3 vertices in `d > 2`).
    pub coplanarity_residual: Option<T>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalMinimalityReport<T> {
    pub vertices: Vec<VertexVerdict<T>>,
    pub pass: bool,
}

impl<T: Scalar> LocalMinimalityReport<T> {
    pub fn failures(&self) -> impl Iterator<Item = &VertexVerdict<T>> {
        self.vertices.iter().filter(|v| !v.pass)
    }
}

/// Degree at most 3, pairwise angles at least `2 pi / 3 - tol_angle`, and at
/// degree-3 vertices all angles `2 pi / 3` with coplanar edges.
pub fn validate_local_minimality<T: Scalar>(
    tree: &EmbeddedForest<T>,
    tol_angle: T,
) -> LocalMinimalityReport<T> {
    let adj = tree.adjacency();
    let third = T::two() * T::PI() / T::three();
    let mut vertices = Vec::with_capacity(tree.vertex_count());
    for (v, nb) in adj.iter().enumerate() {
        let dirs: Vec<Vec<T>> = nb.iter().map(|&w| tree.vertex(w).minus(tree.vertex(v))).collect();
        let mut min_angle = T::PI();
        let mut max_angle = T::zero();
        for i in 0..dirs.len() {
            for j in (i + 1)..dirs.len() {
                let a = angle_between(&dirs[i], &dirs[j]).unwrap_or_else(T::zero);
                min_angle = min_angle.min(a);
                max_angle = max_angle.max(a);
            }
        }
        let coplanarity_residual = if dirs.len() == 3 && tree.dim().unwrap_or(2) > 2 {
            Some(coplanarity(&dirs))
        } else {
            None
        };
        let mut pass = nb.len() <= 3 && min_angle >= third - tol_angle;
        if nb.len() == 3 {
            pass &= max_angle <= third + tol_angle;
            if let Some(c) = coplanarity_residual {
                pass &= c <= tol_angle;
            }
        }
        vertices.push(VertexVerdict {
            vertex: v,
            degree: nb.len(),
            min_angle,
            max_angle,
            coplanarity_residual,
            pass,
        });
    }
    let pass = vertices.iter().all(|v| v.pass);
    LocalMinimalityReport { vertices, pass }
}

fn coplanarity<T: Scalar>(dirs: &[Vec<T>]) -> T {
    let unit = |v: &Vec<T>| -> Vec<T> {
        let l = norm(v);
        v.iter().map(|x| *x / l).collect()
    };
    let e1 = unit(&dirs[0]);
    let u2 = unit(&dirs[1]);
    let p = dot(&u2, &e1);
    let r2: Vec<T> = u2.iter().zip(&e1).map(|(a, b)| *a - p * *b).collect();
    let nr2 = norm(&r2);
    let mut u3 = unit(&dirs[2]);
    let p1 = dot(&u3, &e1);
    for (x, b) in u3.iter_mut().zip(&e1) {
        *x = *x - p1 * *b;
    }
    if nr2 > T::lit(1e-12) {
        let e2: Vec<T> = r2.iter().map(|x| *x / nr2).collect();
        let p2 = dot(&u3, &e2);
        for (x, b) in u3.iter_mut().zip(&e2) {
            *x = *x - p2 * *b;
        }
    }
    norm(&u3)
}
