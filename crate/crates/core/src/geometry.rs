//! Points, segments, balls and embedded forests in `R^d`, together with the
//! measure-theoretic primitives the audits are built on: length, clipping to
//! a ball, sphere crossing counts and the exact per-segment coarea integral.

use std::collections::VecDeque;

use thiserror::Error;

use crate::scalar::{clamp, Scalar};

/// Absolute tolerance for point coincidence and on-sphere tests.
pub const TOL_GEOM: f64 = 1e-9;
/// Absolute tolerance for length comparisons.
pub const TOL_LEN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("ambient dimension {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("coincident points")]
    Coincident,
    #[error("ball radius must be positive")]
    NonPositiveRadius,
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("invalid forest: {0}")]
    InvalidForest(String),
}

// ---------------------------------------------------------------------------
// slice helpers

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + *x * *y)
}

#[inline]
pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

#[inline]
pub(crate) fn dist_slices<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |s, (x, y)| s + (*x - *y) * (*x - *y))
        .sqrt()
}

// ---------------------------------------------------------------------------
// Point

/// A point of `R^d`, `d >= 2`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self, GeomError> {
        if coords.len() < 2 {
            return Err(GeomError::DimensionTooSmall(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(Self { coords })
    }

    /// Planar point. Panics on non-finite input.
    pub fn xy(x: T, y: T) -> Self {
        Self::new(vec![x, y]).expect("finite planar coordinates")
    }

    pub fn origin(d: usize) -> Self {
        Self {
            coords: vec![T::zero(); d.max(2)],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn x(&self) -> T {
        self.coords[0]
    }

    pub fn y(&self) -> T {
        self.coords[1]
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<T>) -> Self {
        debug_assert!(coords.len() >= 2);
        Self { coords }
    }

    /// `self - other` as a raw vector.
    pub fn minus(&self, other: &Self) -> Vec<T> {
        sub(&self.coords, &other.coords)
    }

    /// `self + s * dir`.
    pub fn offset(&self, dir: &[T], s: T) -> Self {
        Self::from_vec_unchecked(
            self.coords
                .iter()
                .zip(dir)
                .map(|(c, v)| *c + s * *v)
                .collect(),
        )
    }

    /// `(1 - s) * self + s * other`.
    pub fn lerp(&self, other: &Self, s: T) -> Self {
        Self::from_vec_unchecked(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| *a + s * (*b - *a))
                .collect(),
        )
    }

    pub fn norm(&self) -> T {
        norm(&self.coords)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Point<U> {
        Point {
            coords: self.coords.iter().map(|c| f(*c)).collect(),
        }
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance<T: Scalar>(p: &Point<T>, q: &Point<T>) -> Result<T, GeomError> {
    if p.dim() != q.dim() {
        return Err(GeomError::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(dist_slices(&p.coords, &q.coords))
}

/// Angle in `[0, pi]` between the rays `v -> a` and `v -> b`.
///
/// Uses `2 atan2(|u - w|, |u + w|)` on the unit directions, which stays
/// accurate near `0` and `pi` where `acos` of a dot product does not.
pub fn angle_at<T: Scalar>(v: &Point<T>, a: &Point<T>, b: &Point<T>) -> Result<T, GeomError> {
    if v.dim() != a.dim() || v.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch(v.dim(), a.dim().max(b.dim())));
    }
    let u = a.minus(v);
    let w = b.minus(v);
    let (nu, nw) = (norm(&u), norm(&w));
    if nu == T::zero() || nw == T::zero() {
        return Err(GeomError::Coincident);
    }
    Ok(angle_between(&u, &w).unwrap_or_else(T::zero))
}

/// Angle between two nonzero vectors.
pub(crate) fn angle_between<T: Scalar>(u: &[T], w: &[T]) -> Option<T> {
    let (nu, nw) = (norm(u), norm(w));
    if nu == T::zero() || nw == T::zero() {
        return None;
    }
    let diff: Vec<T> = u.iter().zip(w).map(|(a, b)| *a / nu - *b / nw).collect();
    let sum: Vec<T> = u.iter().zip(w).map(|(a, b)| *a / nu + *b / nw).collect();
    Some(T::two() * norm(&diff).atan2(norm(&sum)))
}

// ---------------------------------------------------------------------------
// Segment / Ball

/// A closed segment with distinct endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<T> {
    a: Point<T>,
    b: Point<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn new(a: Point<T>, b: Point<T>) -> Result<Self, GeomError> {
        if distance(&a, &b)? <= T::lit(TOL_GEOM) {
            return Err(GeomError::Coincident);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &Point<T> {
        &self.a
    }

    pub fn b(&self) -> &Point<T> {
        &self.b
    }

    pub fn length(&self) -> T {
        dist_slices(self.a.coords(), self.b.coords())
    }
}

/// Ball with a positive radius. Open or closed is decided by the operation
/// that uses it; clipping uses the closed ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball<T> {
    center: Point<T>,
    radius: T,
}

impl<T: Scalar> Ball<T> {
    pub fn new(center: Point<T>, radius: T) -> Result<Self, GeomError> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(GeomError::NonPositiveRadius);
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Point<T> {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    /// Membership in the open ball.
    pub fn contains_open(&self, p: &Point<T>) -> bool {
        dist_slices(p.coords(), self.center.coords()) < self.radius
    }
}

// ---------------------------------------------------------------------------
// Embedded forests

/// Role of a forest vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    /// A prescribed point of the instance.
    Terminal,
    /// A free vertex of the tree (a Steiner point when it has degree 3).
    Branch,
    /// A vertex created where clipping cut an edge at a sphere.
    Boundary,
}

/// Straight-line embedding of a forest: indexed vertices, undirected edges,
/// and a role mark per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedForest<T> {
    vertices: Vec<Point<T>>,
    kinds: Vec<VertexKind>,
    edges: Vec<(usize, usize)>,
}

impl<T: Scalar> Default for EmbeddedForest<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> EmbeddedForest<T> {
    pub fn new() -> Self {
        Self {
            vertices: Vec::new(),
            kinds: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, p: Point<T>, kind: VertexKind) -> usize {
        self.vertices.push(p);
        self.kinds.push(kind);
        self.vertices.len() - 1
    }

    /// Adds the undirected edge `{u, v}`. Self loops and repeated edges are
    /// rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GeomError> {
        let n = self.vertices.len();
        if u >= n {
            return Err(GeomError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(GeomError::VertexOutOfRange(v));
        }
        if u == v {
            return Err(GeomError::InvalidForest(format!("self loop at {u}")));
        }
        let e = (u.min(v), u.max(v));
        if self.edges.contains(&e) {
            return Err(GeomError::InvalidForest(format!("repeated edge {e:?}")));
        }
        self.edges.push(e);
        Ok(())
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point<T> {
        &self.vertices[i]
    }

    pub fn kind(&self, i: usize) -> VertexKind {
        self.kinds[i]
    }

    pub fn set_kind(&mut self, i: usize, kind: VertexKind) {
        self.kinds[i] = kind;
    }

    pub fn is_terminal(&self, i: usize) -> bool {
        self.kinds[i] == VertexKind::Terminal
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Ambient dimension, or `None` for a forest without vertices.
    pub fn dim(&self) -> Option<usize> {
        self.vertices.first().map(Point::dim)
    }

    pub fn terminal_indices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&i| self.is_terminal(i))
            .collect()
    }

    /// Non-terminal, non-boundary vertices of degree 3.
    pub fn branch_indices(&self) -> Vec<usize> {
        let deg = self.degrees();
        (0..self.vertex_count())
            .filter(|&i| self.kinds[i] == VertexKind::Branch && deg[i] >= 3)
            .collect()
    }

    /// Vertices of degree at least 3, whatever their kind.
    pub fn branching_points(&self) -> Vec<usize> {
        let deg = self.degrees();
        (0..self.vertex_count()).filter(|&i| deg[i] >= 3).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn edge_length(&self, e: usize) -> T {
        let (u, v) = self.edges[e];
        dist_slices(self.vertices[u].coords(), self.vertices[v].coords())
    }

    /// Connected components as sorted vertex lists (isolated vertices form
    /// their own component).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_acyclic(&self) -> bool {
        self.edges.len() + self.components().len() == self.vertex_count()
    }

    /// Checks the structural invariants: distinct vertex positions, and for
    /// a tree claim acyclicity plus the degree rules (terminals degree 1..=3,
    /// branch vertices degree exactly 3, boundary vertices degree 1).
    pub fn validate(&self, claims_tree: bool) -> Result<(), GeomError> {
        let tol = T::lit(TOL_GEOM);
        for i in 0..self.vertex_count() {
            for j in (i + 1)..self.vertex_count() {
                if dist_slices(self.vertices[i].coords(), self.vertices[j].coords()) <= tol {
                    return Err(GeomError::InvalidForest(format!(
                        "vertices {i} and {j} coincide"
                    )));
                }
            }
        }
        if claims_tree {
            if !self.is_acyclic() {
                return Err(GeomError::InvalidForest("edge set has a cycle".into()));
            }
            let deg = self.degrees();
            for (i, &d) in deg.iter().enumerate() {
                let ok = match self.kinds[i] {
                    VertexKind::Terminal => (1..=3).contains(&d) || self.edges.is_empty(),
                    VertexKind::Branch => d == 3,
                    VertexKind::Boundary => d == 1,
                };
                if !ok {
                    return Err(GeomError::InvalidForest(format!(
                        "vertex {i} ({:?}) has degree {d}",
                        self.kinds[i]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Applies `f` to every vertex position.
    pub fn map_points(&self, f: impl Fn(&Point<T>) -> Point<T>) -> Self {
        Self {
            vertices: self.vertices.iter().map(f).collect(),
            kinds: self.kinds.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Sub-forest on a subset of the edges, keeping only the touched vertices.
    pub fn edge_subforest(&self, edge_ids: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.vertex_count()];
        let mut out = Self::new();
        for &e in edge_ids {
            let (u, v) = self.edges[e];
            for w in [u, v] {
                if map[w] == usize::MAX {
                    map[w] = out.add_vertex(self.vertices[w].clone(), self.kinds[w]);
                }
            }
            out.add_edge(map[u], map[v]).expect("subforest edges are distinct");
        }
        out
    }
}

/// Total length: the sum of the edge lengths.
pub fn forest_length<T: Scalar>(f: &EmbeddedForest<T>) -> T {
    (0..f.edge_count()).fold(T::zero(), |s, e| s + f.edge_length(e))
}

/// Parameter interval `[lo, hi]` (intersected with `[0, 1]`) on which the
/// segment `a + s (b - a)` lies in the closed ball; `None` if empty.
fn segment_ball_interval<T: Scalar>(a: &[T], b: &[T], c: &[T], r: T) -> Option<(T, T)> {
    let v = sub(b, a);
    let w = sub(a, c);
    let qa = dot(&v, &v);
    if qa == T::zero() {
        return None;
    }
    // Work from the foot of the perpendicular: the textbook discriminant
    // cancels badly when the center lies on the segment line.
    let foot = -dot(&w, &v) / qa;
    let perp: Vec<T> = w.iter().zip(&v).map(|(a, b)| *a + foot * *b).collect();
    let m = dot(&perp, &perp).sqrt();
    if m > r {
        return None;
    }
    let half = ((r - m) * (r + m)).sqrt() / qa.sqrt();
    let (lo, hi) = (foot - half, foot + half);
    let lo = lo.max(T::zero());
    let hi = hi.min(T::one());
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// Intersection of the forest with the closed ball `B`. Edges crossing the
/// sphere are cut at the closed-form intersection points, which become
/// [`VertexKind::Boundary`] vertices.
pub fn clip_to_ball<T: Scalar>(f: &EmbeddedForest<T>, ball: &Ball<T>) -> EmbeddedForest<T> {
    let tol = T::lit(TOL_GEOM);
    let c = ball.center().coords();
    let r = ball.radius();
    let mut out = EmbeddedForest::new();
    let mut map = vec![usize::MAX; f.vertex_count()];
    let mut keep = |out: &mut EmbeddedForest<T>, i: usize| -> usize {
        if map[i] == usize::MAX {
            map[i] = out.add_vertex(f.vertex(i).clone(), f.kind(i));
        }
        map[i]
    };
    for &(u, v) in f.edges() {
        let (pa, pb) = (f.vertex(u), f.vertex(v));
        let len = dist_slices(pa.coords(), pb.coords());
        let Some((lo, hi)) = segment_ball_interval(pa.coords(), pb.coords(), c, r) else {
            continue;
        };
        if (hi - lo) * len <= tol {
            continue;
        }
        let start = if lo * len <= tol {
            keep(&mut out, u)
        } else {
            out.add_vertex(pa.lerp(pb, lo), VertexKind::Boundary)
        };
        let end = if (T::one() - hi) * len <= tol {
            keep(&mut out, v)
        } else {
            out.add_vertex(pa.lerp(pb, hi), VertexKind::Boundary)
        };
        out.add_edge(start, end).expect("clipped edge endpoints are distinct");
    }
    out
}

/// Points of the forest at distance `r` from `x`.
///
/// Each segment contributes its (at most two) sphere intersections; a
/// tangency contributes one point; points shared between segments (a vertex
/// on the sphere) are counted once.
pub fn sphere_points<T: Scalar>(f: &EmbeddedForest<T>, x: &Point<T>, r: T) -> Vec<Point<T>> {
    let tol = T::lit(TOL_GEOM);
    let mut pts: Vec<Point<T>> = Vec::new();
    let mut push = |p: Point<T>| {
        if !pts
            .iter()
            .any(|q| dist_slices(q.coords(), p.coords()) <= tol)
        {
            pts.push(p);
        }
    };
    for &(u, v) in f.edges() {
        let (a, b) = (f.vertex(u), f.vertex(v));
        let dir = b.minus(a);
        let len2 = dot(&dir, &dir);
        if len2 == T::zero() {
            continue;
        }
        let len = len2.sqrt();
        let w = a.minus(x);
        let foot = -dot(&w, &dir) / len2;
        let perp = a.offset(&dir, foot);
        let m = dist_slices(perp.coords(), x.coords());
        let slack = tol / len;
        if (m - r).abs() <= tol {
            if foot >= -slack && foot <= T::one() + slack {
                push(a.offset(&dir, clamp(foot, T::zero(), T::one())));
            }
            continue;
        }
        if m > r {
            continue;
        }
        let half = (r * r - m * m).max(T::zero()).sqrt() / len;
        for s in [foot - half, foot + half] {
            if s >= -slack && s <= T::one() + slack {
                push(a.offset(&dir, clamp(s, T::zero(), T::one())));
            }
        }
    }
    pts
}

/// `t_r`: number of points of the forest on the sphere of radius `r` about
/// `x`, with coincidences resolved at `TOL_GEOM`.
pub fn sphere_crossings<T: Scalar>(f: &EmbeddedForest<T>, x: &Point<T>, r: T) -> usize {
    sphere_points(f, x, r).len()
}

/// Monotone pieces of `s -> |a + s (b - a) - x|` on `[0, 1]`, each returned
/// as the radius interval it sweeps.
pub fn segment_radius_pieces<T: Scalar>(a: &[T], b: &[T], x: &[T]) -> Vec<(T, T)> {
    let dir = sub(b, a);
    let len2 = dot(&dir, &dir);
    let da = dist_slices(a, x);
    let db = dist_slices(b, x);
    if len2 == T::zero() {
        return Vec::new();
    }
    let foot = -dot(&sub(a, x), &dir) / len2;
    if foot > T::zero() && foot < T::one() {
        let p: Vec<T> = a.iter().zip(&dir).map(|(c, v)| *c + foot * *v).collect();
        let m = dist_slices(&p, x);
        vec![(m, da), (m, db)]
    } else {
        vec![(da.min(db), da.max(db))]
    }
}

/// Exact value of `integral_0^inf t_r dr`, where `t_r` counts forest points
/// on the sphere of radius `r` about `x`. Each segment is split at the foot
/// of the perpendicular from `x` (when interior) and the radius ranges of
/// the monotone pieces are summed.
pub fn coarea_integral<T: Scalar>(f: &EmbeddedForest<T>, x: &Point<T>) -> T {
    let mut total = T::zero();
    for &(u, v) in f.edges() {
        for (lo, hi) in segment_radius_pieces(f.vertex(u).coords(), f.vertex(v).coords(), x.coords()) {
            total = total + (hi - lo);
        }
    }
    total
}

/// Distance from `q` to the convex hull of `points`, by Wolfe's minimum-norm
/// point algorithm (finite active-set method). Returns `None` on dimension
/// mismatch or an empty point list.
pub fn hull_distance<T: Scalar>(points: &[Point<T>], q: &Point<T>) -> Option<T> {
    let d = q.dim();
    if points.is_empty() || points.iter().any(|p| p.dim() != d) {
        return None;
    }
    let shifted: Vec<Vec<T>> = points.iter().map(|p| p.minus(q)).collect();
    let scale = shifted
        .iter()
        .fold(T::zero(), |m, p| m.max(dot(p, p)))
        .max(T::min_positive_value());
    let eps = T::lit(1e-13) * scale;
    let start = (0..shifted.len())
        .min_by(|&i, &j| {
            dot(&shifted[i], &shifted[i])
                .partial_cmp(&dot(&shifted[j], &shifted[j]))
                .unwrap()
        })
        .unwrap();
    let mut active = vec![start];
    let mut lambda = vec![T::one()];
    let combo = |active: &[usize], lam: &[T]| -> Vec<T> {
        let mut x = vec![T::zero(); d];
        for (k, &i) in active.iter().enumerate() {
            for c in 0..d {
                x[c] = x[c] + lam[k] * shifted[i][c];
            }
        }
        x
    };
    let mut x = shifted[start].clone();
    for _major in 0..(10 * shifted.len() + 50) {
        let xx = dot(&x, &x);
        if xx <= eps * T::lit(1e-6) {
            break;
        }
        let j = (0..shifted.len())
            .min_by(|&i, &k| {
                dot(&x, &shifted[i])
                    .partial_cmp(&dot(&x, &shifted[k]))
                    .unwrap()
            })
            .unwrap();
        if dot(&x, &shifted[j]) > xx - eps || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(T::zero());
        for _minor in 0..(active.len() + 5) {
            // Affine minimum-norm point over the active set.
            let m = active.len();
            let mut a = vec![vec![T::zero(); m + 1]; m + 1];
            for r in 0..m {
                for c in 0..m {
                    a[r][c] = dot(&shifted[active[r]], &shifted[active[c]]);
                }
                a[r][m] = T::one();
                a[m][r] = T::one();
            }
            let mut rhs = vec![T::zero(); m + 1];
            rhs[m] = T::one();
            let Some(sol) = crate::linalg::solve_dense(a, rhs) else {
                // Affinely dependent active set: drop the newest point.
                active.pop();
                lambda.pop();
                break;
            };
            let mu = &sol[..m];
            if mu.iter().all(|v| *v > T::zero()) {
                lambda = mu.to_vec();
                break;
            }
            let mut theta = T::one();
            for k in 0..m {
                if mu[k] <= T::zero() {
                    let denom = lambda[k] - mu[k];
                    if denom > T::zero() {
                        theta = theta.min(lambda[k] / denom);
                    }
                }
            }
            for k in 0..m {
                lambda[k] = lambda[k] + theta * (mu[k] - lambda[k]);
            }
            let mut k = 0;
            while k < active.len() {
                if lambda[k] <= T::lit(1e-15) {
                    active.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total = lambda.iter().fold(T::zero(), |s, v| s + *v);
            for v in lambda.iter_mut() {
                *v = *v / total;
            }
        }
        x = combo(&active, &lambda);
    }
    Some(norm(&x))
}

/// Whether `q` lies in the convex hull of `points` up to `TOL_GEOM`.
pub fn convex_hull_contains<T: Scalar>(points: &[Point<T>], q: &Point<T>) -> bool {
    hull_distance(points, q).is_some_and(|d| d <= T::lit(TOL_GEOM))
}
