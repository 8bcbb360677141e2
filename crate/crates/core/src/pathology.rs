//! Stage-by-stage construction of a full Steiner tree whose terminals lie
//! on the unit circle and whose branching points accumulate at four
//! points.
//!
//! Stage 0 is the Steiner tree of the rectangle `±e^{i pi/6}, ±e^{5 i pi/6}`.
//! Stage `j` moves the four rectangle corners along the circle by `eps_j`
//! into the `2 pi / 3` side of their edge, re-solves the fixed topology
//! (the tree only translates its edges), and then splices a regular tripod
//! into each corner edge. The tripod reattaches the original corner and
//! adds one new terminal on the circle, so every stage adds four terminals
//! and four branch points while all edges stay parallel to three lines.

use thiserror::Error;

use crate::geometry::{angle_between, dist_slices, forest_length, EmbeddedForest, Point, VertexKind, TOL_GEOM};
use crate::opt::{minimize_topology_from, validate_local_minimality, OptOptions};
use crate::scalar::Scalar;
use crate::solver::{family_gap, solve, tree_topology, Instance, SolveError, SolveOptions};
use crate::topology::{FullTopology, TopologyError};

/// Largest stage index accepted by [`run_construction`].
pub const MAX_STAGES: usize = 12;

#[derive(Debug, Error)]
pub enum PathologyError {
    #[error("shift must be positive")]
    NonPositiveShift,
    #[error("shift {eps} exceeds the cap {cap}")]
    ShiftTooLarge { eps: f64, cap: f64 },
    #[error("stage {stage}: edge directions moved by {deviation} rad")]
    Parallelism { stage: usize, deviation: f64 },
    #[error("stage {stage}, corner {corner}: {reason}")]
    Tripod {
        stage: usize,
        corner: usize,
        reason: String,
    },
    #[error("stage {stage}: length grew by {increase}, allowed (0, {bound})")]
    LengthIncrease { stage: usize, increase: f64, bound: f64 },
    #[error("stage {stage}: {message}")]
    Optimization { stage: usize, message: String },
    #[error("at most {MAX_STAGES} stages, asked for {0}")]
    TooManyStages(usize),
    #[error("the accumulation report needs at least 3 stages, got {0}")]
    TooFewStages(usize),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    Counterclockwise,
    Clockwise,
}

/// What happened at one rectangle corner during a stage.
#[derive(Clone, Debug, PartialEq)]
pub struct CornerStep<T> {
    /// The original corner, which stays a terminal.
    pub corner: Point<T>,
    /// The corner moved along the circle.
    pub shifted: Point<T>,
    pub direction: ShiftDirection,
    /// Branch point of the inserted tripod.
    pub tripod: Point<T>,
    /// New terminal on the circle.
    pub new_terminal: Point<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEstimate<T> {
    pub value: T,
    /// Measured by a full solve rather than extrapolated.
    pub exact: bool,
    /// Pruned topologies entered the measurement through lower bounds.
    pub lower_bound: bool,
}

#[derive(Clone, Debug)]
pub struct PathologyStage<T> {
    pub j: usize,
    /// The four corners first, then four new terminals per stage.
    pub terminals: Vec<Point<T>>,
    /// Terminals first (same order), then branch points; numbered
    /// canonically for `topology`.
    pub tree: EmbeddedForest<T>,
    pub topology: FullTopology,
    pub length: T,
    /// Shift used to reach this stage (zero at stage 0).
    pub eps: T,
    pub delta: Option<DeltaEstimate<T>>,
    /// One entry per corner (empty at stage 0).
    pub corners: Vec<CornerStep<T>>,
    /// Largest direction change between the previous tree and its
    /// re-solved translate.
    pub parallel_deviation: T,
    /// Whether `eps < delta_{j-1}^2 / 64` held, when `delta_{j-1}` is known.
    pub gap_condition: Option<bool>,
}

impl<T: Scalar> PathologyStage<T> {
    pub fn branch_count(&self) -> usize {
        self.tree.vertex_count() - self.terminals.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathologyOptions {
    /// Used to re-solve the shifted trees; the merge tolerance must stay
    /// below the shortest tripod arm.
    pub opt: OptOptions,
    pub eps_cap: f64,
    /// Allowed deviation from the three edge directions, radians.
    pub rigidity_tol: f64,
}

impl Default for PathologyOptions {
    fn default() -> Self {
        Self {
            opt: OptOptions {
                merge_tol: 1e-13,
                eta_start: 1e-16,
                eta_end: 1e-16,
                tol: 1e-14,
                ..OptOptions::default()
            },
            eps_cap: 1e-2,
            rigidity_tol: 1e-7,
        }
    }
}

/// The corners `e^{i pi/6}, e^{5 i pi/6}, -e^{i pi/6}, -e^{5 i pi/6}`.
pub fn rectangle<T: Scalar>() -> [Point<T>; 4] {
    let (c, s) = (T::sqrt3() / T::two(), T::half());
    [Point::xy(c, s), Point::xy(-c, s), Point::xy(-c, -s), Point::xy(c, -s)]
}

fn canonicalize<T: Scalar>(
    tree: &EmbeddedForest<T>,
    n: usize,
) -> Result<(FullTopology, EmbeddedForest<T>), TopologyError> {
    let (topology, map) = FullTopology::from_edges_relabeled(n, tree.edges())?;
    let mut slots: Vec<Option<(Point<T>, VertexKind)>> = vec![None; tree.vertex_count()];
    for v in 0..tree.vertex_count() {
        slots[map[v]] = Some((tree.vertex(v).clone(), tree.kind(v)));
    }
    let mut out = EmbeddedForest::new();
    for s in slots {
        let (p, k) = s.expect("relabeling is a permutation");
        out.add_vertex(p, k);
    }
    for (a, b) in topology.edges() {
        out.add_edge(a, b).expect("canonical edges are distinct");
    }
    Ok((topology, out))
}

/// The Steiner tree of the rectangle: branch points `(±1/sqrt 3, 0)`,
/// length `2 sqrt 3`.
pub fn build_stage0<T: Scalar>() -> PathologyStage<T> {
    let corners = rectangle::<T>();
    let b = T::one() / T::sqrt3();
    let mut f = EmbeddedForest::new();
    for c in &corners {
        f.add_vertex(c.clone(), VertexKind::Terminal);
    }
    let right = f.add_vertex(Point::xy(b, T::zero()), VertexKind::Branch);
    let left = f.add_vertex(Point::xy(-b, T::zero()), VertexKind::Branch);
    for (u, v) in [(0, right), (3, right), (1, left), (2, left), (left, right)] {
        f.add_edge(u, v).expect("distinct edges");
    }
    let (topology, tree) = canonicalize(&f, 4).expect("the rectangle tree is full");
    PathologyStage {
        j: 0,
        terminals: corners.to_vec(),
        length: forest_length(&tree),
        tree,
        topology,
        eps: T::zero(),
        delta: None,
        corners: Vec::new(),
        parallel_deviation: T::zero(),
        gap_condition: None,
    }
}

fn unit<T: Scalar>(v: &[T]) -> [T; 2] {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    [v[0] / n, v[1] / n]
}

fn rotate<T: Scalar>(v: [T; 2], angle: T) -> [T; 2] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

/// Largest angle between corresponding edges (same endpoints) of two
/// trees.
pub fn max_direction_deviation<T: Scalar>(a: &EmbeddedForest<T>, b: &EmbeddedForest<T>) -> Option<T> {
    let mut ea: Vec<(usize, usize)> = a.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let mut eb: Vec<(usize, usize)> = b.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    ea.sort_unstable();
    eb.sort_unstable();
    if ea != eb {
        return None;
    }
    let mut worst = T::zero();
    for (u, v) in ea {
        let da = a.vertex(v).minus(a.vertex(u));
        let db = b.vertex(v).minus(b.vertex(u));
        worst = worst.max(angle_between(&da, &db)?);
    }
    Some(worst)
}

/// Largest angle between an edge line and the nearest of the horizontal
/// and the two `±60°` lines.
pub fn three_direction_deviation<T: Scalar>(tree: &EmbeddedForest<T>) -> T {
    let third = T::PI() / T::three();
    let mut worst = T::zero();
    for &(u, v) in tree.edges() {
        let d = tree.vertex(v).minus(tree.vertex(u));
        let mut th = d[1].atan2(d[0]);
        // Reduce the line angle to [0, pi/3).
        th = th - (th / third).floor() * third;
        worst = worst.max(th.min(third - th));
    }
    worst
}

/// Moves the corners by `eps`, re-solves, and inserts the four tripods.
pub fn advance<T: Scalar>(
    stage: &PathologyStage<T>,
    eps: T,
    opts: &PathologyOptions,
) -> Result<PathologyStage<T>, PathologyError> {
    let j = stage.j + 1;
    if !(eps > T::zero()) {
        return Err(PathologyError::NonPositiveShift);
    }
    if eps > T::lit(opts.eps_cap) {
        return Err(PathologyError::ShiftTooLarge {
            eps: eps.to_f64_lossy(),
            cap: opts.eps_cap,
        });
    }
    let n = stage.terminals.len();
    let adj = stage.tree.adjacency();
    let mut shifted_terminals = stage.terminals.clone();
    let mut directions = Vec::with_capacity(4);
    for (k, slot) in shifted_terminals.iter_mut().enumerate().take(4) {
        let x = &stage.terminals[k];
        let [y] = adj[k][..] else {
            return Err(PathologyError::Tripod {
                stage: j,
                corner: k,
                reason: "corner is not a leaf".into(),
            });
        };
        let w = unit(&stage.tree.vertex(y).minus(x));
        // The edge makes 2 pi / 3 with the counterclockwise tangent exactly
        // when their dot product is negative.
        let ccw = -x.y() * w[0] + x.x() * w[1] < T::zero();
        let theta = x.y().atan2(x.x()) + if ccw { eps } else { -eps };
        *slot = Point::xy(theta.cos(), theta.sin());
        directions.push(if ccw {
            ShiftDirection::Counterclockwise
        } else {
            ShiftDirection::Clockwise
        });
    }
    let inst = Instance::new(shifted_terminals.clone()).map_err(|e| PathologyError::Optimization {
        stage: j,
        message: e.to_string(),
    })?;
    let init: Vec<Point<T>> = stage.tree.vertices()[n..].to_vec();
    let moved = minimize_topology_from(&inst, &stage.topology, &init, &opts.opt).map_err(|e| {
        PathologyError::Optimization {
            stage: j,
            message: e.to_string(),
        }
    })?;
    if !moved.clusters.is_empty() || moved.tree.vertex_count() != stage.tree.vertex_count() {
        return Err(PathologyError::Optimization {
            stage: j,
            message: "the shifted tree degenerated".into(),
        });
    }
    let deviation = max_direction_deviation(&stage.tree, &moved.tree).ok_or(PathologyError::Optimization {
        stage: j,
        message: "the shifted tree changed its edges".into(),
    })?;
    if deviation > T::lit(opts.rigidity_tol) {
        return Err(PathologyError::Parallelism {
            stage: j,
            deviation: deviation.to_f64_lossy(),
        });
    }
    let st = &moved.tree;
    let m = st.vertex_count() - n;
    let sixty = T::PI() / T::three();
    let mut corners = Vec::with_capacity(4);
    let mut out = EmbeddedForest::new();
    for p in &stage.terminals {
        out.add_vertex(p.clone(), VertexKind::Terminal);
    }
    let mut tripod_of = [0usize; 4];
    let mut neighbor = [0usize; 4];
    let mut zs = Vec::with_capacity(4);
    let mut ts = Vec::with_capacity(4);
    for k in 0..4 {
        let x = &stage.terminals[k];
        let xs = st.vertex(k);
        let y = adj[k][0];
        let yp = st.vertex(y);
        let edge_len = dist_slices(xs.coords(), yp.coords());
        let u = unit(&yp.minus(xs));
        let r = x.minus(xs);
        let back = [-u[0], -u[1]];
        let mut found = None;
        for sigma in [T::one(), -T::one()] {
            let a = rotate(back, sigma * sixty);
            let det = u[0] * a[1] - u[1] * a[0];
            let s = (r[0] * a[1] - r[1] * a[0]) / det;
            let lambda = (u[0] * r[1] - u[1] * r[0]) / det;
            if s > T::zero() && lambda > T::zero() && s < edge_len {
                found = Some((sigma, s));
            }
        }
        let Some((sigma, s)) = found else {
            return Err(PathologyError::Tripod {
                stage: j,
                corner: k,
                reason: "no tripod apex inside the corner edge".into(),
            });
        };
        let t = xs.offset(&u, s);
        let b = rotate(back, -sigma * sixty);
        let tb = t.x() * b[0] + t.y() * b[1];
        let tt = t.x() * t.x() + t.y() * t.y();
        let mu = -tb + (tb * tb - (tt - T::one())).sqrt();
        let z = t.offset(&b, mu);
        let xz = dist_slices(x.coords(), z.coords());
        if !(xz < (T::two() * eps).sqrt()) {
            return Err(PathologyError::Tripod {
                stage: j,
                corner: k,
                reason: format!("|xz| = {} is not below sqrt(2 eps)", xz.to_f64_lossy()),
            });
        }
        neighbor[k] = y;
        zs.push(z.clone());
        ts.push(t.clone());
        corners.push(CornerStep {
            corner: x.clone(),
            shifted: xs.clone(),
            direction: directions[k],
            tripod: t,
            new_terminal: z,
        });
    }
    for z in &zs {
        out.add_vertex(z.clone(), VertexKind::Terminal);
    }
    let old_to_new = |v: usize| if v < n { v } else { v + 4 };
    for v in n..n + m {
        out.add_vertex(st.vertex(v).clone(), VertexKind::Branch);
    }
    for (k, t) in ts.iter().enumerate() {
        tripod_of[k] = out.add_vertex(t.clone(), VertexKind::Branch);
    }
    for &(a, b) in st.edges() {
        let corner = (0..4).find(|&k| (a == k && b == neighbor[k]) || (b == k && a == neighbor[k]));
        match corner {
            Some(k) => out.add_edge(tripod_of[k], old_to_new(neighbor[k])),
            None => out.add_edge(old_to_new(a), old_to_new(b)),
        }
        .expect("distinct edges");
    }
    for k in 0..4 {
        out.add_edge(tripod_of[k], k).expect("distinct edges");
        out.add_edge(tripod_of[k], n + k).expect("distinct edges");
    }
    let (topology, tree) = canonicalize(&out, n + 4)?;
    let length = forest_length(&tree);
    let increase = length - stage.length;
    let bound = T::lit(4.0) * (T::two() * eps).sqrt();
    if !(increase > T::zero() && increase < bound) {
        return Err(PathologyError::LengthIncrease {
            stage: j,
            increase: increase.to_f64_lossy(),
            bound: bound.to_f64_lossy(),
        });
    }
    let rigid = three_direction_deviation(&tree);
    if rigid > T::lit(opts.rigidity_tol) {
        return Err(PathologyError::Parallelism {
            stage: j,
            deviation: rigid.to_f64_lossy(),
        });
    }
    let mut terminals = stage.terminals.clone();
    terminals.extend(zs);
    Ok(PathologyStage {
        j,
        terminals,
        tree,
        topology,
        length,
        eps,
        delta: None,
        corners,
        parallel_deviation: deviation,
        gap_condition: stage
            .delta
            .as_ref()
            .map(|d| eps < d.value * d.value / T::lit(64.0)),
    })
}

#[derive(Clone, Debug)]
pub struct Certification<T> {
    pub j: usize,
    /// A full solve was run.
    pub exact: bool,
    /// Exact mode: the solver's optimum matches the stage tree.
    pub optimal: Option<bool>,
    pub solver_length: Option<T>,
    pub delta: Option<DeltaEstimate<T>>,
    pub full: bool,
    pub counts_ok: bool,
    pub on_circle: bool,
    pub local_minimality: bool,
    pub rigidity: T,
    pub rigidity_ok: bool,
}

impl<T> Certification<T> {
    pub fn pass(&self) -> bool {
        self.optimal != Some(false)
            && self.full
            && self.counts_ok
            && self.on_circle
            && self.local_minimality
            && self.rigidity_ok
    }
}

/// Checks the stage. With at most `solve_opts.n_max` terminals the stage
/// is solved exactly, which certifies optimality and measures `delta_j`;
/// otherwise `delta_j` is `calibration * eps_j` when a calibration constant
/// is given.
pub fn certify_stage<T: Scalar>(
    stage: &PathologyStage<T>,
    solve_opts: &SolveOptions,
    calibration: Option<T>,
    rigidity_tol: f64,
) -> Result<Certification<T>, PathologyError> {
    let n = stage.terminals.len();
    let degrees = stage.tree.degrees();
    let full = (0..n).all(|v| degrees[v] == 1) && (n..stage.tree.vertex_count()).all(|v| degrees[v] == 3);
    let counts_ok = n == 4 * (stage.j + 1) && stage.branch_count() == 4 * stage.j + 2;
    let tol = T::lit(TOL_GEOM);
    let on_circle = stage.terminals.iter().all(|p| (p.norm() - T::one()).abs() <= tol);
    let local_minimality = validate_local_minimality(&stage.tree, T::lit(1e-6)).pass;
    let rigidity = three_direction_deviation(&stage.tree);
    let mut cert = Certification {
        j: stage.j,
        exact: false,
        optimal: None,
        solver_length: None,
        delta: None,
        full,
        counts_ok,
        on_circle,
        local_minimality,
        rigidity,
        rigidity_ok: rigidity <= T::lit(rigidity_tol),
    };
    if n <= solve_opts.n_max {
        let inst = Instance::new(stage.terminals.clone()).map_err(|e| PathologyError::Optimization {
            stage: stage.j,
            message: e.to_string(),
        })?;
        let opts = SolveOptions {
            prune: false,
            ..solve_opts.clone()
        };
        let sol = solve(&inst, &opts)?;
        let same = tree_topology(&sol.tree, n).map_or(false, |t| &t == stage.topology.topology());
        let close = (sol.length - stage.length).abs() <= T::lit(1e-9);
        let (gap, lower) = family_gap(&sol, &inst);
        cert.exact = true;
        cert.optimal = Some(same && close);
        cert.solver_length = Some(sol.length);
        cert.delta = Some(DeltaEstimate {
            value: gap,
            exact: true,
            lower_bound: lower,
        });
    } else if let Some(c) = calibration {
        cert.delta = Some(DeltaEstimate {
            value: c * stage.eps,
            exact: false,
            lower_bound: false,
        });
    }
    Ok(cert)
}

/// `eps_1 = first`, then `eps_{j+1} = ratio * eps_j`, additionally capped
/// by `delta_j^2 / 64` when `use_delta` is set and `delta_j` is known.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSchedule {
    pub first: f64,
    pub ratio: f64,
    pub use_delta: bool,
}

impl Default for EpsSchedule {
    fn default() -> Self {
        Self {
            first: 1e-3,
            ratio: 1.0 / 16.0,
            use_delta: false,
        }
    }
}

impl EpsSchedule {
    pub fn next<T: Scalar>(&self, previous: &PathologyStage<T>) -> T {
        let mut eps = if previous.j == 0 {
            T::lit(self.first)
        } else {
            previous.eps * T::lit(self.ratio)
        };
        if self.use_delta {
            if let Some(d) = &previous.delta {
                eps = eps.min(d.value * d.value / T::lit(64.0));
            }
        }
        eps
    }
}

/// Builds stages `0..=stages`, certifying each one. The calibration for
/// heuristic `delta` estimates comes from the last exact stage with a
/// positive shift.
pub fn run_construction<T: Scalar>(
    stages: usize,
    schedule: &EpsSchedule,
    opts: &PathologyOptions,
    solve_opts: &SolveOptions,
) -> Result<Vec<(PathologyStage<T>, Certification<T>)>, PathologyError> {
    if stages > MAX_STAGES {
        return Err(PathologyError::TooManyStages(stages));
    }
    let mut out: Vec<(PathologyStage<T>, Certification<T>)> = Vec::with_capacity(stages + 1);
    let mut calibration: Option<T> = None;
    let mut stage = build_stage0::<T>();
    for j in 0..=stages {
        if j > 0 {
            let eps = schedule.next(&out[j - 1].0);
            stage = advance(&out[j - 1].0, eps, opts)?;
        }
        let cert = certify_stage(&stage, solve_opts, calibration, opts.rigidity_tol)?;
        if cert.exact && stage.eps > T::zero() {
            calibration = cert.delta.as_ref().map(|d| d.value / stage.eps);
        }
        stage.delta = cert.delta.clone();
        out.push((stage.clone(), cert));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AccumulationReport<T> {
    /// The original corners, which every later point approaches.
    pub limits: Vec<Point<T>>,
    /// `|xi^6 + 1|` per limit after rotating the horizontal edge to the
    /// real axis.
    pub sixth_power_residuals: Vec<T>,
    /// Per limit, the number of final-stage vertices within the cluster
    /// radius.
    pub cluster_sizes: Vec<usize>,
    /// Final-stage vertices outside every cluster.
    pub unclustered: usize,
    /// `radii[j - 1][k]`: distance from corner `k` to the farthest point
    /// created at stage `j`.
    pub radii: Vec<Vec<T>>,
    /// `sum_{l >= j} (eps_l + sqrt(2 eps_l))` over the built stages.
    pub radius_bounds: Vec<T>,
    pub radii_within_bounds: bool,
    pub shrinking: bool,
    pub clusters: usize,
}

impl<T: Scalar> AccumulationReport<T> {
    pub fn pass(&self, residual_tol: T) -> bool {
        self.clusters == 4
            && self.sixth_power_residuals.iter().all(|&r| r <= residual_tol)
            && self.radii_within_bounds
            && self.shrinking
    }
}

pub fn accumulation_report<T: Scalar>(stages: &[PathologyStage<T>]) -> Result<AccumulationReport<T>, PathologyError> {
    if stages.len() < 3 {
        return Err(PathologyError::TooFewStages(stages.len()));
    }
    let s0 = &stages[0];
    // Rotation taking the middle edge of stage 0 to the real axis.
    let mid = s0
        .tree
        .edges()
        .iter()
        .find(|&&(u, v)| u >= 4 && v >= 4)
        .copied()
        .expect("stage 0 has a Steiner-Steiner edge");
    let dm = s0.tree.vertex(mid.1).minus(s0.tree.vertex(mid.0));
    let alpha = dm[1].atan2(dm[0]);
    let limits: Vec<Point<T>> = s0.terminals[..4].to_vec();
    let sixth_power_residuals = limits
        .iter()
        .map(|p| {
            let q = rotate([p.x(), p.y()], -alpha);
            let (mut re, mut im) = (T::one(), T::zero());
            for _ in 0..6 {
                (re, im) = (re * q[0] - im * q[1], re * q[1] + im * q[0]);
            }
            ((re + T::one()).powi(2) + im.powi(2)).sqrt()
        })
        .collect();
    let later = &stages[1..];
    let radius_bounds: Vec<T> = (0..later.len())
        .map(|i| {
            later[i..]
                .iter()
                .fold(T::zero(), |s, st| s + st.eps + (T::two() * st.eps).sqrt())
        })
        .collect();
    let radii: Vec<Vec<T>> = later
        .iter()
        .map(|st| {
            st.corners
                .iter()
                .map(|c| {
                    dist_slices(c.corner.coords(), c.tripod.coords())
                        .max(dist_slices(c.corner.coords(), c.new_terminal.coords()))
                })
                .collect()
        })
        .collect();
    let tol = T::lit(TOL_GEOM);
    let radii_within_bounds = radii
        .iter()
        .zip(&radius_bounds)
        .all(|(r, &b)| r.iter().all(|&x| x <= b + tol));
    let shrinking = radii
        .windows(2)
        .all(|w| w[1].iter().zip(&w[0]).all(|(a, b)| a < b));
    let last = stages.last().expect("non-empty");
    let cut = radius_bounds[0];
    let mut cluster_sizes = vec![0usize; 4];
    let mut unclustered = 0;
    for p in last.tree.vertices() {
        let (k, d) = limits
            .iter()
            .enumerate()
            .map(|(k, l)| (k, dist_slices(l.coords(), p.coords())))
            .fold((0, T::infinity()), |m, x| if x.1 < m.1 { x } else { m });
        if d <= cut + tol {
            cluster_sizes[k] += 1;
        } else {
            unclustered += 1;
        }
    }
    // A cluster accumulates only if every stage added points to it.
    let clusters = (0..4)
        .filter(|&k| cluster_sizes[k] >= 1 + 2 * later.len())
        .count();
    Ok(AccumulationReport {
        limits,
        sixth_power_residuals,
        cluster_sizes,
        unclustered,
        radii,
        radius_bounds,
        radii_within_bounds,
        shrinking,
        clusters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stage0_rectangle() {
        let s = build_stage0::<f64>();
        assert_eq!(s.terminals.len(), 4);
        assert_eq!(s.branch_count(), 2);
        assert_abs_diff_eq!(s.length, 2.0 * 3f64.sqrt(), epsilon = 1e-14);
        assert!(three_direction_deviation(&s.tree) < 1e-15);
    }

    #[test]
    fn first_stage() {
        let s0 = build_stage0::<f64>();
        let s1 = advance(&s0, 1e-3, &PathologyOptions::default()).unwrap();
        assert_eq!(s1.terminals.len(), 8);
        assert_eq!(s1.branch_count(), 6);
        assert!(s1.length > s0.length && s1.length < s0.length + 4.0 * 0.002f64.sqrt());
        assert!(s1.parallel_deviation < 1e-9);
        assert_eq!(s1.corners[0].direction, ShiftDirection::Counterclockwise);
        let s2 = advance(&s1, 1e-3 / 16.0, &PathologyOptions::default()).unwrap();
        assert_eq!(s2.corners[0].direction, ShiftDirection::Clockwise);
        assert_eq!(s2.terminals.len(), 12);
        assert_eq!(s2.branch_count(), 10);
    }

    #[test]
    fn rejects_bad_shifts() {
        let s0 = build_stage0::<f64>();
        assert!(matches!(
            advance(&s0, 0.0, &PathologyOptions::default()),
            Err(PathologyError::NonPositiveShift)
        ));
        assert!(matches!(
            advance(&s0, 0.5, &PathologyOptions::default()),
            Err(PathologyError::ShiftTooLarge { .. })
        ));
    }

    #[test]
    fn sixth_power_of_corner() {
        let stages: Vec<PathologyStage<f64>> = {
            let o = PathologyOptions::default();
            let s0 = build_stage0();
            let s1 = advance(&s0, 1e-3, &o).unwrap();
            let s2 = advance(&s1, 1e-3 / 16.0, &o).unwrap();
            vec![s0, s1, s2]
        };
        let r = accumulation_report(&stages).unwrap();
        for x in &r.sixth_power_residuals {
            assert!(*x < 1e-14);
        }
        assert_eq!(r.clusters, 4);
        assert!(r.shrinking && r.radii_within_bounds);
        assert_eq!(r.unclustered, 2);
    }
}
