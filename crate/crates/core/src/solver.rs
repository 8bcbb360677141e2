//! Exact Steiner minimal trees by exhaustive topology search.
//!
//! Every full topology is minimized (the minimum over its closure is the
//! minimum over the contraction family `D(T)`), and the shortest result
//! wins. Ties within `1e-12 * diam` go to the smaller canonical code.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{
    dist_slices, hull_distance, EmbeddedForest, GeomError, Point, VertexKind, TOL_GEOM, TOL_LEN,
};
use crate::melzak::{solve_full_planar, MELZAK_N_MAX};
use crate::opt::{
    minimize_topology, minimize_topology_with_cutoff, validate_local_minimality, Minimized, OptError,
    OptOptions,
};
use crate::scalar::Scalar;
use crate::spanning::prim_mst;
use crate::topology::{
    contract_family, enumerate_full, ContractedTopology, FullTopology, Topology, TopologyError,
    DEFAULT_N_MAX,
};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("an instance needs at least two terminals, got {0}")]
    TooFewTerminals(usize),
    #[error("terminals {i} and {j} coincide")]
    Duplicate { i: usize, j: usize },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A finite terminal set in `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<T> {
    terminals: Vec<Point<T>>,
    diameter: T,
}

impl<T: Scalar> Instance<T> {
    pub fn new(terminals: Vec<Point<T>>) -> Result<Self, InstanceError> {
        if terminals.len() < 2 {
            return Err(InstanceError::TooFewTerminals(terminals.len()));
        }
        let d = terminals[0].dim();
        let tol = T::lit(TOL_GEOM);
        let mut diameter = T::zero();
        for (i, p) in terminals.iter().enumerate() {
            if p.dim() != d {
                return Err(GeomError::DimensionMismatch(d, p.dim()).into());
            }
            for (j, q) in terminals.iter().enumerate().take(i) {
                let r = dist_slices(p.coords(), q.coords());
                if r <= tol {
                    return Err(InstanceError::Duplicate { i: j, j: i });
                }
                diameter = diameter.max(r);
            }
        }
        Ok(Self {
            terminals,
            diameter,
        })
    }

    pub fn n(&self) -> usize {
        self.terminals.len()
    }

    pub fn dim(&self) -> usize {
        self.terminals[0].dim()
    }

    pub fn terminals(&self) -> &[Point<T>] {
        &self.terminals
    }

    pub fn diameter(&self) -> T {
        self.diameter
    }

    /// Center of the bounding box and the radius of the smallest ball about
    /// it holding every terminal. The hull, and so every Steiner point of a
    /// locally minimal tree, lies inside.
    pub fn bounding_ball(&self) -> (Point<T>, T) {
        let d = self.dim();
        let mut c = vec![T::zero(); d];
        for (k, slot) in c.iter_mut().enumerate() {
            let (lo, hi) = self.terminals.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| {
                (lo.min(p.coords()[k]), hi.max(p.coords()[k]))
            });
            *slot = (lo + hi) * T::half();
        }
        let r = self
            .terminals
            .iter()
            .fold(T::zero(), |r, p| r.max(dist_slices(p.coords(), &c)));
        (Point::from_vec_unchecked(c), r)
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("topology {code}: {source}")]
    Optimization { code: String, source: OptError },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub n_max: usize,
    pub opt: OptOptions,
    /// Skip topologies whose certified lower bound exceeds the incumbent.
    pub prune: bool,
    /// Topologies per parallel batch. The incumbent used for pruning only
    /// changes between batches, which keeps the audit trail independent of
    /// the thread count.
    pub chunk_size: usize,
    /// Replace the planar winner by its Melzak reconstruction when it is full.
    pub melzak: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            opt: OptOptions::default(),
            prune: true,
            chunk_size: 512,
            melzak: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AuditOutcome<T> {
    Minimized {
        length: T,
        /// Number of Steiner points left after merging.
        steiner_points: usize,
    },
    Pruned {
        lower_bound: T,
    },
}

impl<T: Scalar> AuditOutcome<T> {
    /// The family minimum, or a lower bound on it if pruned.
    pub fn length_bound(&self) -> T {
        match *self {
            AuditOutcome::Minimized { length, .. } => length,
            AuditOutcome::Pruned { lower_bound } => lower_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopologyAudit<T> {
    pub code: String,
    pub outcome: AuditOutcome<T>,
}

#[derive(Clone, Debug)]
pub struct SteinerSolution<T> {
    pub tree: EmbeddedForest<T>,
    pub length: T,
    /// The winning full topology.
    pub topology: FullTopology,
    pub code: String,
    /// Which contraction of `topology` the tree realizes, when it is one.
    pub family_member: Option<ContractedTopology>,
    /// Whether the winner was rebuilt by Melzak's construction.
    pub melzak_exact: bool,
    /// One entry per full topology in canonical order.
    pub audit: Vec<TopologyAudit<T>>,
    /// Codes of every topology whose family minimum ties the winner.
    pub tied_codes: Vec<String>,
}

impl<T: Scalar> SteinerSolution<T> {
    pub fn steiner_point_count(&self) -> usize {
        self.tree.branch_indices().len()
    }

    pub fn pruned_count(&self) -> usize {
        self.audit
            .iter()
            .filter(|a| matches!(a.outcome, AuditOutcome::Pruned { .. }))
            .count()
    }
}

/// Abstract topology of a tree whose first `n` vertices are the terminals
/// and whose other vertices all have degree 3.
pub fn tree_topology<T: Scalar>(tree: &EmbeddedForest<T>, n: usize) -> Option<Topology> {
    let steiner = tree.vertex_count().checked_sub(n)?;
    Topology::from_edges(n, steiner, tree.edges()).ok()
}

pub fn solve<T: Scalar>(inst: &Instance<T>, opts: &SolveOptions) -> Result<SteinerSolution<T>, SolveError> {
    let n = inst.n();
    let topologies = enumerate_full(n, opts.n_max)?;
    let diam = inst.diameter();
    let tie_tol = T::lit(1e-12) * diam;
    let margin = T::lit(1e-9) * diam;
    let mut incumbent = if opts.prune {
        prim_mst(inst.terminals()).length
    } else {
        T::infinity()
    };
    let mut audit: Vec<TopologyAudit<T>> = Vec::with_capacity(topologies.len());
    let mut best: Option<(usize, crate::opt::FixedTopologyResult<T>)> = None;
    let chunk = opts.chunk_size.max(1);
    for (c, batch) in topologies.chunks(chunk).enumerate() {
        let cutoff = incumbent + tie_tol + margin;
        let results: Vec<Result<Minimized<T>, OptError>> = batch
            .par_iter()
            .map(|t| {
                if opts.prune && cutoff.is_finite() {
                    minimize_topology_with_cutoff(inst, t, &opts.opt, cutoff)
                } else {
                    minimize_topology(inst, t, &opts.opt).map(Minimized::Done)
                }
            })
            .collect();
        for (k, r) in results.into_iter().enumerate() {
            let idx = c * chunk + k;
            let t = &topologies[idx];
            let r = r.map_err(|source| SolveError::Optimization {
                code: t.code(),
                source,
            })?;
            let outcome = match r {
                Minimized::Pruned { lower_bound } => AuditOutcome::Pruned { lower_bound },
                Minimized::Done(res) => {
                    let out = AuditOutcome::Minimized {
                        length: res.length,
                        steiner_points: res.tree.branch_indices().len(),
                    };
                    // Canonical order means the first of a tie is kept.
                    if best.as_ref().map_or(true, |(_, b)| res.length < b.length - tie_tol) {
                        best = Some((idx, res));
                    }
                    out
                }
            };
            audit.push(TopologyAudit {
                code: t.code(),
                outcome,
            });
        }
        if let Some((_, b)) = &best {
            incumbent = incumbent.min(b.length);
        }
    }
    let (idx, mut res) = best.expect("the optimal family is never pruned");
    let topology = topologies[idx].clone();
    let mut melzak_exact = false;
    if opts.melzak && inst.dim() == 2 && res.is_full() && n <= MELZAK_N_MAX && n >= 3 {
        if let Some(m) = solve_full_planar(inst, &topology) {
            if (m.length - res.length).abs() <= T::lit(1e-8) * (T::one() + diam) {
                res = m;
                melzak_exact = true;
            }
        }
    }
    let tied_codes = audit
        .iter()
        .filter(|a| matches!(a.outcome, AuditOutcome::Minimized { length, .. } if length <= res.length + tie_tol))
        .map(|a| a.code.clone())
        .collect();
    Ok(SteinerSolution {
        length: res.length,
        code: topology.code(),
        family_member: res.family_member.clone(),
        tree: res.tree,
        topology,
        melzak_exact,
        audit,
        tied_codes,
    })
}

/// Outcome of re-solving under random terminal perturbations.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport<T> {
    /// Gap from the optimum to the best family that does not attain it.
    pub gap: T,
    /// True when pruned topologies entered the gap through their lower
    /// bounds, so the gap itself is a lower bound.
    pub gap_is_lower_bound: bool,
    pub shift: T,
    /// `gap / (5 n)`.
    pub guaranteed_shift: T,
    pub trials: usize,
    pub retained: usize,
    /// Retention was guaranteed for this shift, and happened every time.
    pub pass: bool,
}

impl<T: Scalar> StabilityReport<T> {
    pub fn retention_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.retained as f64 / self.trials as f64
        }
    }
}

/// Gap between the optimum and every family minimum that does not tie it.
pub fn family_gap<T: Scalar>(sol: &SteinerSolution<T>, inst: &Instance<T>) -> (T, bool) {
    let tie_tol = T::lit(1e-12) * inst.diameter();
    let mut gap = T::infinity();
    let mut lower = false;
    for a in &sol.audit {
        let v = a.outcome.length_bound();
        let tied = matches!(a.outcome, AuditOutcome::Minimized { .. }) && v <= sol.length + tie_tol;
        if !tied {
            if matches!(a.outcome, AuditOutcome::Pruned { .. }) && v - sol.length < gap {
                lower = true;
            } else if v - sol.length < gap {
                lower = false;
            }
            gap = gap.min(v - sol.length);
        }
    }
    (gap, lower)
}

/// Perturbs each terminal uniformly inside a ball of radius `shift` and
/// checks that the new optimum stays in the union of the families `D(T)`
/// of the tied optimal topologies.
pub fn stability_probe<T: Scalar>(
    inst: &Instance<T>,
    shift: T,
    trials: usize,
    seed: u64,
    opts: &SolveOptions,
) -> Result<StabilityReport<T>, SolveError> {
    let n = inst.n();
    let exact_opts = SolveOptions {
        prune: false,
        ..opts.clone()
    };
    let sol = solve(inst, &exact_opts)?;
    let (gap, gap_is_lower_bound) = family_gap(&sol, inst);
    let guaranteed_shift = gap / T::from_usize_lossy(5 * n);
    let mut allowed: HashSet<Topology> = HashSet::new();
    let by_code: Vec<FullTopology> = enumerate_full(n, opts.n_max)?;
    for t in by_code.iter().filter(|t| sol.tied_codes.contains(&t.code())) {
        for m in contract_family(t) {
            allowed.insert(m.tree());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = inst.dim();
    let mut retained = 0;
    for _ in 0..trials {
        let moved: Vec<Point<T>> = inst
            .terminals()
            .iter()
            .map(|p| {
                let dir = loop {
                    let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let r2: f64 = v.iter().map(|x| x * x).sum();
                    if r2 > 0.0 && r2 < 1.0 {
                        break v;
                    }
                };
                let v: Vec<T> = dir.into_iter().map(T::lit).collect();
                p.offset(&v, shift)
            })
            .collect();
        let Ok(perturbed) = Instance::new(moved) else {
            continue;
        };
        let s = solve(&perturbed, opts)?;
        if n == 2 || tree_topology(&s.tree, n).map_or(false, |r| allowed.contains(&r)) {
            retained += 1;
        }
    }
    let pass = retained == trials && (shift < guaranteed_shift || n == 2);
    Ok(StabilityReport {
        gap,
        gap_is_lower_bound,
        shift,
        guaranteed_shift,
        trials,
        retained,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport<T> {
    pub connected: bool,
    pub acyclic: bool,
    pub spans_terminals: bool,
    pub degrees_ok: bool,
    /// Largest distance of a tree vertex from the terminal hull.
    pub hull_excess: T,
    pub in_hull: bool,
    pub local_minimality: bool,
    /// `|Maxwell value - length|` and imaginary residual for planar full
    /// trees, `None` otherwise.
    pub maxwell: Option<(T, T)>,
    pub maxwell_ok: bool,
}

impl<T> ValidationReport<T> {
    pub fn pass(&self) -> bool {
        self.connected
            && self.acyclic
            && self.spans_terminals
            && self.degrees_ok
            && self.in_hull
            && self.local_minimality
            && self.maxwell_ok
    }
}

/// Structural checks every Steiner minimal tree must pass.
pub fn validate_solution<T: Scalar>(tree: &EmbeddedForest<T>, inst: &Instance<T>) -> ValidationReport<T> {
    let tol = T::lit(TOL_GEOM) * (T::one() + inst.diameter());
    let n = inst.n();
    let spans_terminals = tree.vertex_count() >= n
        && (0..n).all(|i| {
            tree.kind(i) == VertexKind::Terminal
                && dist_slices(tree.vertex(i).coords(), inst.terminals()[i].coords()) <= tol
        });
    let degrees = tree.degrees();
    let degrees_ok = degrees.iter().enumerate().all(|(v, &k)| {
        if tree.is_terminal(v) {
            (1..=3).contains(&k)
        } else {
            k == 3
        }
    });
    let hull_excess = tree
        .vertices()
        .iter()
        .map(|p| hull_distance(inst.terminals(), p).unwrap_or(T::infinity()))
        .fold(T::zero(), T::max);
    let local_minimality = validate_local_minimality(tree, T::lit(1e-6)).pass;
    let full = inst.dim() == 2 && (0..n).all(|i| degrees.get(i) == Some(&1));
    let maxwell = if full {
        crate::analysis::maxwell_length(tree)
            .ok()
            .map(|m| ((m.value - crate::geometry::forest_length(tree)).abs(), m.residual))
    } else {
        None
    };
    let len_tol = T::lit(TOL_LEN) * (T::one() + inst.diameter());
    let maxwell_ok = maxwell.map_or(true, |(dv, res)| dv <= len_tol && res <= len_tol);
    ValidationReport {
        connected: tree.is_connected(),
        acyclic: tree.is_acyclic(),
        spans_terminals,
        degrees_ok,
        hull_excess,
        in_hull: hull_excess <= tol,
        local_minimality,
        maxwell,
        maxwell_ok,
    }
}
