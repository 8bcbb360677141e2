//! Length formulas and regularity audits on solved trees.

use thiserror::Error;

use crate::geometry::{
    angle_between, clip_to_ball, coarea_integral, dist_slices, dot, forest_length, segment_radius_pieces,
    sphere_crossings, sphere_points, sub, Ball, EmbeddedForest, GeomError, Point, VertexKind, TOL_GEOM,
    TOL_LEN,
};
use crate::scalar::Scalar;
use crate::solver::Instance;
use crate::spanning::prim_mst;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("the formula needs a planar tree")]
    NotPlanar,
    #[error("terminal {0} is not a leaf, the tree is not full")]
    NotFull(usize),
    #[error("terminal {0} lies inside the ball")]
    TerminalInBall(usize),
    #[error("the competitor does not connect the terminals")]
    Disconnected,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// A measured quantity against its bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<T> {
    pub name: &'static str,
    pub measured: T,
    pub bound: T,
    pub pass: bool,
}

impl<T: Scalar> Verdict<T> {
    /// `measured <= bound + tol`.
    pub fn at_most(name: &'static str, measured: T, bound: T, tol: T) -> Self {
        Self {
            name,
            measured,
            bound,
            pass: measured <= bound + tol,
        }
    }

    /// `measured >= bound - tol`.
    pub fn at_least(name: &'static str, measured: T, bound: T, tol: T) -> Self {
        Self {
            name,
            measured,
            bound,
            pass: measured >= bound - tol,
        }
    }
}

/// Outward unit direction at a terminal leaf.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminalDirection<T> {
    pub terminal: usize,
    pub direction: [T; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxwellTerms<T> {
    pub directions: Vec<TerminalDirection<T>>,
    /// `Re sum conj(c_k) p_k`.
    pub value: T,
    /// `|Im sum conj(c_k) p_k|`.
    pub residual: T,
}

/// Outward directions of every terminal of a planar full tree.
pub fn terminal_directions<T: Scalar>(tree: &EmbeddedForest<T>) -> Result<Vec<TerminalDirection<T>>, AnalysisError> {
    if tree.dim().map_or(false, |d| d != 2) {
        return Err(AnalysisError::NotPlanar);
    }
    let adj = tree.adjacency();
    tree.terminal_indices()
        .into_iter()
        .map(|k| {
            let [nb] = adj[k][..] else {
                return Err(AnalysisError::NotFull(k));
            };
            let v = tree.vertex(k).minus(tree.vertex(nb));
            let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
            Ok(TerminalDirection {
                terminal: k,
                direction: [v[0] / len, v[1] / len],
            })
        })
        .collect()
}

/// Length of a planar full locally minimal tree from its terminals and
/// their outward directions alone.
pub fn maxwell_length<T: Scalar>(tree: &EmbeddedForest<T>) -> Result<MaxwellTerms<T>, AnalysisError> {
    let directions = terminal_directions(tree)?;
    let (mut re, mut im) = (T::zero(), T::zero());
    for td in &directions {
        let p = tree.vertex(td.terminal);
        let [cx, cy] = td.direction;
        // conj(c) * p = (cx - i cy)(px + i py)
        re = re + cx * p.x() + cy * p.y();
        im = im + cx * p.y() - cy * p.x();
    }
    Ok(MaxwellTerms {
        directions,
        value: re,
        residual: im.abs(),
    })
}

/// Sum of the outward unit directions.
pub fn windrose_sum<T: Scalar>(tree: &EmbeddedForest<T>) -> Result<[T; 2], AnalysisError> {
    let dirs = terminal_directions(tree)?;
    Ok(dirs.iter().fold([T::zero(), T::zero()], |[a, b], td| {
        [a + td.direction[0], b + td.direction[1]]
    }))
}

/// Length of the tree inside the closed ball `B_r(x)`; zero for `r <= 0`.
pub fn length_in_ball<T: Scalar>(tree: &EmbeddedForest<T>, x: &Point<T>, r: T) -> T {
    if !(r > T::zero()) {
        return T::zero();
    }
    let ball = Ball::new(x.clone(), r).expect("positive radius");
    forest_length(&clip_to_ball(tree, &ball))
}

/// `integral_a^b t_r dr`, exactly, from the monotone radius pieces.
pub fn crossing_integral<T: Scalar>(tree: &EmbeddedForest<T>, x: &Point<T>, a: T, b: T) -> T {
    let mut total = T::zero();
    for &(u, v) in tree.edges() {
        for (lo, hi) in segment_radius_pieces(tree.vertex(u).coords(), tree.vertex(v).coords(), x.coords()) {
            let (l, h) = (lo.max(a), hi.min(b));
            if h > l {
                total = total + (h - l);
            }
        }
    }
    total
}

/// Every radius at which `r -> L_r` can change slope: vertex distances and
/// perpendicular feet of the edges.
pub fn critical_radii<T: Scalar>(tree: &EmbeddedForest<T>, x: &Point<T>) -> Vec<T> {
    let mut out: Vec<T> = tree
        .vertices()
        .iter()
        .map(|p| dist_slices(p.coords(), x.coords()))
        .collect();
    for &(u, v) in tree.edges() {
        for (lo, _) in segment_radius_pieces(tree.vertex(u).coords(), tree.vertex(v).coords(), x.coords()) {
            out.push(lo);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= T::lit(TOL_GEOM));
    out
}

#[derive(Clone, Debug)]
pub struct RegularityProfile<T> {
    pub center: Point<T>,
    pub scale: T,
    /// Sorted sample radii in `[0, s]`, always including every critical
    /// radius below `s`.
    pub radii: Vec<T>,
    /// `L_r` at each radius.
    pub lengths: Vec<T>,
    /// `t_r` at each radius.
    pub crossings: Vec<usize>,
    /// `L_r` is non-decreasing and `L_0 = 0`.
    pub monotone: bool,
    /// Worst violation of `L_b - L_a >= integral_a^b t_r dr` over
    /// consecutive radii (non-positive when it holds).
    pub coarea_defect: T,
    tree: EmbeddedForest<T>,
}

impl<T: Scalar> RegularityProfile<T> {
    pub fn length_at(&self, r: T) -> T {
        length_in_ball(&self.tree, &self.center, r)
    }

    pub fn tree(&self) -> &EmbeddedForest<T> {
        &self.tree
    }

    pub fn differential_inequality_holds(&self) -> bool {
        self.coarea_defect <= T::lit(TOL_LEN) * (T::one() + self.scale)
    }
}

/// The index of the first terminal within distance `< s` of `x`.
fn terminal_inside<T: Scalar>(inst: &Instance<T>, x: &Point<T>, s: T) -> Option<usize> {
    let tol = T::lit(TOL_GEOM);
    inst.terminals()
        .iter()
        .position(|p| dist_slices(p.coords(), x.coords()) < s - tol)
}

/// `L_r` and `t_r` over `[0, s]` on a uniform grid of `samples` radii
/// merged with the critical radii.
pub fn ball_profile<T: Scalar>(
    tree: &EmbeddedForest<T>,
    inst: &Instance<T>,
    x: &Point<T>,
    s: T,
    samples: usize,
) -> Result<RegularityProfile<T>, AnalysisError> {
    if !(s > T::zero()) {
        return Err(GeomError::NonPositiveRadius.into());
    }
    if let Some(i) = terminal_inside(inst, x, s) {
        return Err(AnalysisError::TerminalInBall(i));
    }
    let mut radii: Vec<T> = (0..=samples.max(1))
        .map(|k| s * T::from_usize_lossy(k) / T::from_usize_lossy(samples.max(1)))
        .collect();
    radii.extend(critical_radii(tree, x).into_iter().filter(|&r| r > T::zero() && r < s));
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup_by(|a, b| (*a - *b).abs() <= T::lit(1e-15) * s);
    let lengths: Vec<T> = radii.iter().map(|&r| length_in_ball(tree, x, r)).collect();
    let crossings: Vec<usize> = radii
        .iter()
        .map(|&r| if r > T::zero() { sphere_crossings(tree, x, r) } else { 0 })
        .collect();
    let tol = T::lit(TOL_LEN) * (T::one() + s);
    let monotone = lengths[0] == T::zero() && lengths.windows(2).all(|w| w[1] >= w[0] - tol);
    let mut coarea_defect = T::neg_infinity();
    for k in 1..radii.len() {
        let need = crossing_integral(tree, x, radii[k - 1], radii[k]);
        coarea_defect = coarea_defect.max(need - (lengths[k] - lengths[k - 1]));
    }
    let whole = crossing_integral(tree, x, T::zero(), s);
    coarea_defect = coarea_defect.max(whole - lengths[lengths.len() - 1]);
    Ok(RegularityProfile {
        center: x.clone(),
        scale: s,
        radii,
        lengths,
        crossings,
        monotone,
        coarea_defect,
        tree: tree.clone(),
    })
}

/// `(64 d / (1 - rho))^(d - 2)`.
pub fn main_bound<T: Scalar>(d: usize, rho: T) -> T {
    (T::lit(64.0) * T::from_usize_lossy(d) / (T::one() - rho)).powi(d as i32 - 2)
}

/// `(64 d / (1 - rho))^(d - 1)`.
pub fn segment_count_bound<T: Scalar>(d: usize, rho: T) -> T {
    (T::lit(64.0) * T::from_usize_lossy(d) / (T::one() - rho)).powi(d as i32 - 1)
}

/// In `d > 2`: `L_{rho s} / s` against [`main_bound`]. In the plane:
/// `L_r` against `2 pi r` with `r = rho s`.
pub fn check_main_bound<T: Scalar>(profile: &RegularityProfile<T>, d: usize, rho: T) -> Verdict<T> {
    let s = profile.scale;
    let r = rho * s;
    let l = profile.length_at(r);
    let tol = T::lit(TOL_LEN) * (T::one() + s);
    if d > 2 {
        Verdict::at_most("main_bound", l / s, main_bound(d, rho), tol)
    } else {
        Verdict::at_most("two_pi_r", l, T::two() * T::PI() * r, tol)
    }
}

/// Number of maximal straight segments of the tree inside the closed ball:
/// clipped edges, with collinear edges through a degree-2 vertex merged.
pub fn count_segments_in_ball<T: Scalar>(tree: &EmbeddedForest<T>, x: &Point<T>, r: T) -> usize {
    let Ok(ball) = Ball::new(x.clone(), r) else {
        return 0;
    };
    let clipped = clip_to_ball(tree, &ball);
    let adj = clipped.adjacency();
    let straight = (0..clipped.vertex_count())
        .filter(|&v| adj[v].len() == 2)
        .filter(|&v| {
            let p = clipped.vertex(v);
            let a = clipped.vertex(adj[v][0]).minus(p);
            let b = clipped.vertex(adj[v][1]).minus(p);
            angle_between(&a, &b).map_or(false, |t| T::PI() - t < T::lit(1e-9))
        })
        .count();
    clipped.edge_count() - straight
}

/// The length of any set dominates the integral of its sphere counts.
pub fn coarea_audit<T: Scalar>(tree: &EmbeddedForest<T>, x: &Point<T>) -> Verdict<T> {
    Verdict::at_least(
        "coarea",
        forest_length(tree),
        coarea_integral(tree, x),
        T::lit(TOL_LEN) * (T::one() + forest_length(tree)),
    )
}

fn segment_distance<T: Scalar>(p1: &[T], q1: &[T], p2: &[T], q2: &[T]) -> T {
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let r = sub(p1, p2);
    let a = dot(&d1, &d1);
    let e = dot(&d2, &d2);
    let f = dot(&d2, &r);
    let (s, t);
    let zero = T::zero();
    let one = T::one();
    let clamp01 = |v: T| v.max(zero).min(one);
    if a == zero && e == zero {
        return dist_slices(p1, p2);
    }
    if a == zero {
        s = zero;
        t = clamp01(f / e);
    } else {
        let c = dot(&d1, &r);
        if e == zero {
            t = zero;
            s = clamp01(-c / a);
        } else {
            let b = dot(&d1, &d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > zero { clamp01((b * f - c * e) / denom) } else { zero };
            let mut t0 = (b * s0 + f) / e;
            if t0 < zero {
                t0 = zero;
                s0 = clamp01(-c / a);
            } else if t0 > one {
                t0 = one;
                s0 = clamp01((b - c) / a);
            }
            s = s0;
            t = t0;
        }
    }
    let c1: Vec<T> = p1.iter().zip(&d1).map(|(p, d)| *p + s * *d).collect();
    let c2: Vec<T> = p2.iter().zip(&d2).map(|(p, d)| *p + t * *d).collect();
    dist_slices(&c1, &c2)
}

/// Pieces of the tree's edges not covered by the segments of `x`.
fn remove_subforest<T: Scalar>(tree: &EmbeddedForest<T>, x: &EmbeddedForest<T>) -> Vec<(Vec<T>, Vec<T>)> {
    let tol = T::lit(TOL_GEOM);
    let mut out = Vec::new();
    for &(u, v) in tree.edges() {
        let (a, b) = (tree.vertex(u).coords(), tree.vertex(v).coords());
        let dir = sub(b, a);
        let len2 = dot(&dir, &dir);
        let len = len2.sqrt();
        let on_line = |p: &[T]| -> Option<T> {
            let s = dot(&sub(p, a), &dir) / len2;
            let q: Vec<T> = a.iter().zip(&dir).map(|(c, d)| *c + s * *d).collect();
            (dist_slices(&q, p) <= tol).then_some(s)
        };
        let mut covered: Vec<(T, T)> = x
            .edges()
            .iter()
            .filter_map(|&(xu, xv)| {
                let s0 = on_line(x.vertex(xu).coords())?;
                let s1 = on_line(x.vertex(xv).coords())?;
                Some((s0.min(s1), s0.max(s1)))
            })
            .collect();
        covered.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        let mut cursor = T::zero();
        let slack = tol / len;
        let mut pieces: Vec<(T, T)> = Vec::new();
        for (lo, hi) in covered {
            if lo > cursor + slack {
                pieces.push((cursor, lo.min(T::one())));
            }
            cursor = cursor.max(hi);
        }
        if cursor < T::one() - slack {
            pieces.push((cursor.max(T::zero()), T::one()));
        }
        for (s0, s1) in pieces {
            let p: Vec<T> = a.iter().zip(&dir).map(|(c, d)| *c + s0 * *d).collect();
            let q: Vec<T> = a.iter().zip(&dir).map(|(c, d)| *c + s1 * *d).collect();
            out.push((p, q));
        }
    }
    out
}

/// Exchange argument: if `(tree \ x) ∪ y` still connects the terminals,
/// an optimal tree satisfies `H(x) <= H(y)`. `x` must consist of pieces of
/// the tree's edges.
pub fn exchange_audit<T: Scalar>(
    tree: &EmbeddedForest<T>,
    inst: &Instance<T>,
    x: &EmbeddedForest<T>,
    y: &EmbeddedForest<T>,
) -> Result<Verdict<T>, AnalysisError> {
    let tol = T::lit(TOL_GEOM) * (T::one() + inst.diameter());
    let mut segs = remove_subforest(tree, x);
    segs.extend(
        y.edges()
            .iter()
            .map(|&(u, v)| (y.vertex(u).coords().to_vec(), y.vertex(v).coords().to_vec())),
    );
    let m = segs.len();
    let n = inst.n();
    // Union-find over segments and terminals (terminal k is node m + k).
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let join = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra] = rb;
        }
    };
    for i in 0..m {
        for j in (i + 1)..m {
            if segment_distance(&segs[i].0, &segs[i].1, &segs[j].0, &segs[j].1) <= tol {
                join(&mut parent, i, j);
            }
        }
        for (k, t) in inst.terminals().iter().enumerate() {
            if segment_distance(&segs[i].0, &segs[i].1, t.coords(), t.coords()) <= tol {
                join(&mut parent, i, m + k);
            }
        }
    }
    let root = find(&mut parent, m);
    if (1..n).any(|k| find(&mut parent, m + k) != root) {
        return Err(AnalysisError::Disconnected);
    }
    let hx = forest_length(x);
    let hy = forest_length(y);
    Ok(Verdict::at_most(
        "exchange",
        hx,
        hy,
        T::lit(TOL_LEN) * (T::one() + hx + hy),
    ))
}

/// The clipped tree in `B_r(x)` together with a competitor joining its
/// sphere points: in the plane the polygon through them in angular order
/// with its longest side dropped, otherwise their spanning tree.
pub fn sphere_competitor<T: Scalar>(
    tree: &EmbeddedForest<T>,
    x: &Point<T>,
    r: T,
) -> Result<(EmbeddedForest<T>, EmbeddedForest<T>), AnalysisError> {
    let ball = Ball::new(x.clone(), r)?;
    let clipped = clip_to_ball(tree, &ball);
    let mut pts = sphere_points(tree, x, r);
    let mut y = EmbeddedForest::new();
    if pts.len() < 2 {
        for p in pts {
            y.add_vertex(p, VertexKind::Boundary);
        }
        return Ok((clipped, y));
    }
    if x.dim() == 2 {
        let ang = |p: &Point<T>| (p.y() - x.y()).atan2(p.x() - x.x());
        pts.sort_by(|a, b| ang(a).partial_cmp(&ang(b)).unwrap());
        let k = pts.len();
        let gap = |i: usize| dist_slices(pts[i].coords(), pts[(i + 1) % k].coords());
        let longest = (0..k).fold(0, |m, i| if gap(i) > gap(m) { i } else { m });
        for p in &pts {
            y.add_vertex(p.clone(), VertexKind::Boundary);
        }
        for i in 0..k {
            if i != longest {
                y.add_edge(i, (i + 1) % k)?;
            }
        }
    } else {
        y = prim_mst(&pts).tree;
    }
    Ok((clipped, y))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchedComponent<T> {
    pub length: T,
    pub branch_points: usize,
    pub boundary_points: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchedComponentsReport<T> {
    pub components: Vec<BranchedComponent<T>>,
    pub count: Verdict<T>,
    /// Total branched length against `4 pi r / 3 + r`.
    pub length: Verdict<T>,
    /// Shortest component with at least three boundary points against
    /// `sqrt 3 r`; vacuous when there is none.
    pub floor: Verdict<T>,
}

impl<T: Scalar> BranchedComponentsReport<T> {
    pub fn pass(&self) -> bool {
        self.count.pass && self.length.pass && self.floor.pass
    }
}

/// Components of the tree inside a terminal-free disc that contain a
/// branch point: at most two, of total length at most `4 pi r / 3 + r`,
/// and each reaching three or more boundary points has length at least
/// `sqrt 3 r`.
pub fn planar_branched_components_audit<T: Scalar>(
    tree: &EmbeddedForest<T>,
    inst: &Instance<T>,
    x: &Point<T>,
    r: T,
) -> Result<BranchedComponentsReport<T>, AnalysisError> {
    if x.dim() != 2 {
        return Err(AnalysisError::NotPlanar);
    }
    if let Some(i) = terminal_inside(inst, x, r) {
        return Err(AnalysisError::TerminalInBall(i));
    }
    let ball = Ball::new(x.clone(), r)?;
    let clipped = clip_to_ball(tree, &ball);
    let deg = clipped.degrees();
    let mut components = Vec::new();
    for comp in clipped.components() {
        let branch_points = comp.iter().filter(|&&v| deg[v] >= 3).count();
        if branch_points == 0 {
            continue;
        }
        let in_comp = |v: usize| comp.binary_search(&v).is_ok();
        let length = clipped
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, _))| in_comp(u))
            .fold(T::zero(), |s, (e, _)| s + clipped.edge_length(e));
        let boundary_points = comp
            .iter()
            .filter(|&&v| clipped.kind(v) == VertexKind::Boundary)
            .count();
        components.push(BranchedComponent {
            length,
            branch_points,
            boundary_points,
        });
    }
    let tol = T::lit(TOL_LEN) * (T::one() + r);
    let total = components.iter().fold(T::zero(), |s, c| s + c.length);
    let floor_measured = components
        .iter()
        .filter(|c| c.boundary_points >= 3)
        .fold(T::infinity(), |m, c| m.min(c.length));
    let floor_bound = T::sqrt3() * r;
    let floor = if floor_measured.is_finite() {
        Verdict::at_least("sqrt3_floor", floor_measured, floor_bound, tol)
    } else {
        Verdict {
            name: "sqrt3_floor",
            measured: floor_bound,
            bound: floor_bound,
            pass: true,
        }
    };
    Ok(BranchedComponentsReport {
        count: Verdict::at_most(
            "branched_components",
            T::from_usize_lossy(components.len()),
            T::two(),
            T::zero(),
        ),
        length: Verdict::at_most(
            "branched_length",
            total,
            T::lit(4.0) * T::PI() * r / T::three() + r,
            tol,
        ),
        floor,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn forest(pts: &[(f64, f64, VertexKind)], edges: &[(usize, usize)]) -> EmbeddedForest<f64> {
        let mut f = EmbeddedForest::new();
        for &(x, y, k) in pts {
            f.add_vertex(Point::xy(x, y), k);
        }
        for &(u, v) in edges {
            f.add_edge(u, v).unwrap();
        }
        f
    }

    fn tripod(arm: f64) -> EmbeddedForest<f64> {
        let s = 3f64.sqrt() / 2.0;
        forest(
            &[
                (arm, 0.0, VertexKind::Terminal),
                (-arm / 2.0, arm * s, VertexKind::Terminal),
                (-arm / 2.0, -arm * s, VertexKind::Terminal),
                (0.0, 0.0, VertexKind::Branch),
            ],
            &[(0, 3), (1, 3), (2, 3)],
        )
    }

    fn rectangle_tree() -> EmbeddedForest<f64> {
        let s = 3f64.sqrt() / 2.0;
        let b = 1.0 / 3f64.sqrt();
        forest(
            &[
                (s, 0.5, VertexKind::Terminal),
                (s, -0.5, VertexKind::Terminal),
                (-s, 0.5, VertexKind::Terminal),
                (-s, -0.5, VertexKind::Terminal),
                (b, 0.0, VertexKind::Branch),
                (-b, 0.0, VertexKind::Branch),
            ],
            &[(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)],
        )
    }

    fn rectangle_instance() -> Instance<f64> {
        let t = rectangle_tree();
        Instance::new(t.vertices()[..4].to_vec()).unwrap()
    }

    #[test]
    fn maxwell_examples() {
        let seg = forest(
            &[(0.0, 0.0, VertexKind::Terminal), (1.0, 0.0, VertexKind::Terminal)],
            &[(0, 1)],
        );
        let m = maxwell_length(&seg).unwrap();
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.residual, 0.0, epsilon = 1e-15);
        let m = maxwell_length(&tripod(1.0)).unwrap();
        assert_abs_diff_eq!(m.value, 3.0, epsilon = 1e-15);
        let m = maxwell_length(&rectangle_tree()).unwrap();
        assert_abs_diff_eq!(m.value, 2.0 * 3f64.sqrt(), epsilon = 1e-14);
        assert!(m.residual < 1e-14);
        let w = windrose_sum(&rectangle_tree()).unwrap();
        assert!(w[0].abs() < 1e-15 && w[1].abs() < 1e-15);
        let w = windrose_sum(&seg).unwrap();
        assert_eq!(w, [0.0, 0.0]);
    }

    #[test]
    fn maxwell_rejects_non_full() {
        let path = forest(
            &[
                (0.0, 0.0, VertexKind::Terminal),
                (1.0, 0.0, VertexKind::Terminal),
                (2.0, 0.0, VertexKind::Terminal),
            ],
            &[(0, 1), (1, 2)],
        );
        assert_eq!(maxwell_length(&path).unwrap_err(), AnalysisError::NotFull(1));
    }

    #[test]
    fn profile_of_rectangle() {
        let t = rectangle_tree();
        let i = rectangle_instance();
        let p = ball_profile(&t, &i, &Point::xy(0.0, 0.0), 1.0, 20).unwrap();
        assert!(p.monotone);
        assert!(p.differential_inequality_holds());
        let b = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(p.length_at(0.5), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.length_at(b), 2.0 * b, epsilon = 1e-12);
        // Past the branch radius four arms join the middle edge.
        let r = 0.8;
        // |(b, 0) + s (cos 60, sin 60)| = r
        let q = b * 0.5;
        let arm = -q + (q * q - (b * b - r * r)).sqrt();
        assert_abs_diff_eq!(p.length_at(r), 2.0 * b + 4.0 * arm, epsilon = 1e-12);
        assert!(p.radii.iter().any(|&x| (x - b).abs() < 1e-12));
        let v = check_main_bound(&p, 2, 0.9);
        assert!(v.pass);
        assert_abs_diff_eq!(v.bound, 2.0 * std::f64::consts::PI * 0.9, epsilon = 1e-12);
    }

    #[test]
    fn radial_and_tripod_profiles() {
        let seg = forest(
            &[(0.0, 0.0, VertexKind::Branch), (1.0, 0.0, VertexKind::Terminal)],
            &[(0, 1)],
        );
        let far = Instance::new(vec![Point::xy(1.0, 0.0), Point::xy(5.0, 0.0)]).unwrap();
        let p = ball_profile(&seg, &far, &Point::xy(0.0, 0.0), 1.0, 10).unwrap();
        for (r, l) in p.radii.iter().zip(&p.lengths) {
            assert_abs_diff_eq!(*l, *r, epsilon = 1e-14);
        }
        let t = tripod(1.0);
        let inst = Instance::new(t.vertices()[..3].to_vec()).unwrap();
        let p = ball_profile(&t, &inst, &Point::xy(0.0, 0.0), 1.0, 10).unwrap();
        for ((r, l), c) in p.radii.iter().zip(&p.lengths).zip(&p.crossings) {
            assert_abs_diff_eq!(*l, 3.0 * r, epsilon = 1e-14);
            if *r > 0.0 && *r < 1.0 {
                assert_eq!(*c, 3);
            }
        }
    }

    #[test]
    fn profile_rejects_terminal_inside() {
        let t = rectangle_tree();
        let i = rectangle_instance();
        assert_eq!(
            ball_profile(&t, &i, &Point::xy(0.0, 0.0), 1.5, 4).unwrap_err(),
            AnalysisError::TerminalInBall(0)
        );
    }

    #[test]
    fn bound_formulas() {
        assert_abs_diff_eq!(main_bound(3, 0.5), 384.0, epsilon = 1e-9);
        assert_abs_diff_eq!(main_bound(4, 0.5), 262144.0, epsilon = 1e-6);
        assert_abs_diff_eq!(segment_count_bound(3, 0.5), 147456.0, epsilon = 1e-6);
        assert_eq!(main_bound(2, 0.5), 1.0);
    }

    #[test]
    fn segment_counts() {
        let chord = forest(
            &[(-2.0, 0.0, VertexKind::Terminal), (2.0, 0.0, VertexKind::Terminal)],
            &[(0, 1)],
        );
        assert_eq!(count_segments_in_ball(&chord, &Point::xy(0.0, 0.0), 1.0), 1);
        // Collinear edges through a degree-2 vertex count once.
        let bent = forest(
            &[
                (-2.0, 0.0, VertexKind::Terminal),
                (0.0, 0.0, VertexKind::Terminal),
                (2.0, 0.0, VertexKind::Terminal),
            ],
            &[(0, 1), (1, 2)],
        );
        assert_eq!(count_segments_in_ball(&bent, &Point::xy(0.0, 0.0), 1.0), 1);
        assert_eq!(count_segments_in_ball(&tripod(2.0), &Point::xy(0.0, 0.0), 1.0), 3);
    }

    #[test]
    fn coarea_cases() {
        let chord = forest(
            &[(-0.8, 0.6, VertexKind::Terminal), (0.8, 0.6, VertexKind::Terminal)],
            &[(0, 1)],
        );
        let v = coarea_audit(&chord, &Point::xy(0.0, 0.0));
        assert!(v.pass);
        assert_abs_diff_eq!(v.bound, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(v.measured, 1.6, epsilon = 1e-12);
        assert!(coarea_audit(&EmbeddedForest::<f64>::new(), &Point::xy(0.0, 0.0)).pass);
        let radial = forest(
            &[(0.0, 0.0, VertexKind::Branch), (1.0, 0.0, VertexKind::Terminal)],
            &[(0, 1)],
        );
        let v = coarea_audit(&radial, &Point::xy(0.0, 0.0));
        assert_abs_diff_eq!(v.measured, v.bound, epsilon = 1e-15);
    }

    #[test]
    fn exchange_cases() {
        let t = rectangle_tree();
        let i = rectangle_instance();
        let x0 = Point::xy(0.0, 0.0);
        let (clipped, comp) = sphere_competitor(&t, &x0, 0.9).unwrap();
        let v = exchange_audit(&t, &i, &clipped, &comp).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(v.bound <= 2.0 * std::f64::consts::PI * 0.9);
        let empty = EmbeddedForest::new();
        assert!(exchange_audit(&t, &i, &empty, &empty).unwrap().pass);
        let one = t.edge_subforest(&[2]);
        let v = exchange_audit(&t, &i, &one, &one).unwrap();
        assert_abs_diff_eq!(v.measured, v.bound, epsilon = 1e-15);
        assert!(v.pass);
        // Removing the middle edge without a replacement disconnects.
        assert_eq!(
            exchange_audit(&t, &i, &one, &empty).unwrap_err(),
            AnalysisError::Disconnected
        );
    }

    #[test]
    fn branched_components() {
        let inst = Instance::new(vec![Point::xy(5.0, 0.0), Point::xy(-5.0, 0.0)]).unwrap();
        let t2 = tripod(2.0);
        let r = planar_branched_components_audit(&t2, &inst, &Point::xy(0.0, 0.0), 1.0).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_abs_diff_eq!(r.length.measured, 3.0, epsilon = 1e-12);
        assert!(r.pass());
        let chord = forest(
            &[(-2.0, 0.0, VertexKind::Terminal), (2.0, 0.0, VertexKind::Terminal)],
            &[(0, 1)],
        );
        let r = planar_branched_components_audit(&chord, &inst, &Point::xy(0.0, 0.0), 1.0).unwrap();
        assert!(r.components.is_empty() && r.pass());
        let rt = rectangle_tree();
        let r = planar_branched_components_audit(&rt, &rectangle_instance(), &Point::xy(0.0, 0.0), 0.99).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(r.length.measured < 5.188 * 0.99);
        assert!(r.pass());
    }
}
