//! Connecting `t` points on the unit sphere `S^{d-1}` through a greedy
//! packing of spherical caps.
//!
//! Caps are Euclidean balls of radius `eps = sin phi` about their centers,
//! intersected with the sphere. Disjoint caps means centers at least
//! `2 eps` apart; maximality means every candidate is closer than `2 eps`
//! to a center.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::Verdict;
use crate::geometry::{dist_slices, norm, EmbeddedForest, Point, VertexKind, TOL_GEOM, TOL_LEN};
use crate::scalar::Scalar;
use crate::spanning::prim_mst;

/// Upper limit on the candidate net, so tiny `eps` cannot exhaust memory.
pub const MAX_NET_POINTS: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("the connector needs d >= 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("eps must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("point {0} is not on the unit sphere")]
    OffSphere(usize),
    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, got: usize, expected: usize },
}

#[derive(Clone, Debug)]
pub struct CapPacking<T> {
    pub d: usize,
    pub eps: T,
    /// `asin(eps)`.
    pub phi: T,
    pub centers: Vec<Point<T>>,
    /// For each center, the input point it was taken from, if any.
    pub center_origin: Vec<Option<usize>>,
    /// Number of candidates the maximality is certified against.
    pub candidates: usize,
    /// Verdict on `k <= sqrt(2 pi d) / eps^(d-1)`.
    pub k_bound: Verdict<T>,
}

impl<T: Scalar> CapPacking<T> {
    pub fn k(&self) -> usize {
        self.centers.len()
    }

    /// Smallest distance between two centers; infinite for `k < 2`.
    pub fn min_separation(&self) -> T {
        let mut m = T::infinity();
        for i in 0..self.centers.len() {
            for j in 0..i {
                m = m.min(dist_slices(self.centers[i].coords(), self.centers[j].coords()));
            }
        }
        m
    }
}

/// `2 sin(theta / 2)`: the Euclidean chord of the angle `theta`.
pub fn chord<T: Scalar>(theta: T) -> T {
    T::two() * (theta * T::half()).sin()
}

/// `sqrt(2 pi d) / eps^(d-1)`.
pub fn cap_count_bound<T: Scalar>(d: usize, eps: T) -> T {
    (T::two() * T::PI() * T::from_usize_lossy(d)).sqrt() / eps.powi(d as i32 - 1)
}

/// `(2 sqrt(2 pi d) (d - 1))^(1/d)`.
pub fn c_min<T: Scalar>(d: usize) -> T {
    let df = T::from_usize_lossy(d);
    (T::two() * (T::two() * T::PI() * df).sqrt() * (df - T::one())).powf(T::one() / df)
}

/// `2 c_min d / (d - 1)`: the constant in front of `t^((d-2)/(d-1))`.
pub fn length_constant<T: Scalar>(d: usize) -> T {
    let df = T::from_usize_lossy(d);
    T::two() * c_min::<T>(d) * df / (df - T::one())
}

/// Quasi-uniform points on `S^{d-1}`: the Fibonacci spiral in `d = 3`,
/// seeded Gaussian directions otherwise.
pub fn sphere_net<T: Scalar>(d: usize, count: usize, seed: u64) -> Vec<Point<T>> {
    if d == 3 {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        return (0..count)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let a = 2.0 * std::f64::consts::PI * i as f64 / golden;
                Point::from_vec_unchecked(vec![T::lit(r * a.cos()), T::lit(r * a.sin()), T::lit(z)])
            })
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_unit::<T>(&mut rng, d)).collect()
}

/// A uniformly distributed point of `S^{d-1}` (Box-Muller Gaussians).
pub fn random_unit<T: Scalar>(rng: &mut impl Rng, d: usize) -> Point<T> {
    loop {
        let g: Vec<f64> = (0..d)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return Point::from_vec_unchecked(g.into_iter().map(|x| T::lit(x / n)).collect());
        }
    }
}

fn check_points<T: Scalar>(points: &[Point<T>], d: usize) -> Result<(), SphereError> {
    let tol = T::lit(TOL_GEOM);
    for (i, p) in points.iter().enumerate() {
        if p.dim() != d {
            return Err(SphereError::DimensionMismatch {
                index: i,
                got: p.dim(),
                expected: d,
            });
        }
        if (norm(p.coords()) - T::one()).abs() > tol {
            return Err(SphereError::OffSphere(i));
        }
    }
    Ok(())
}

/// Greedy maximal packing over the inputs plus a net of `64 / eps^(d-1)`
/// points, visited in a seeded random order.
pub fn greedy_cap_packing<T: Scalar>(
    points: &[Point<T>],
    d: usize,
    eps: T,
    seed: u64,
) -> Result<CapPacking<T>, SphereError> {
    if d < 3 {
        return Err(SphereError::DimensionTooSmall(d));
    }
    if !(eps > T::zero() && eps < T::one()) {
        return Err(SphereError::BadEpsilon(eps.to_f64_lossy()));
    }
    check_points(points, d)?;
    let net_size = (64.0 / eps.to_f64_lossy().powi(d as i32 - 1)).ceil() as usize;
    let net = sphere_net::<T>(d, net_size.clamp(1, MAX_NET_POINTS), seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut order: Vec<(Option<usize>, &Point<T>)> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (Some(i), p))
        .chain(net.iter().map(|p| (None, p)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let sep = T::two() * eps;
    let mut centers: Vec<Point<T>> = Vec::new();
    let mut center_origin = Vec::new();
    for (origin, p) in &order {
        if centers.iter().all(|c| dist_slices(c.coords(), p.coords()) >= sep) {
            centers.push((*p).clone());
            center_origin.push(*origin);
        }
    }
    let bound = cap_count_bound(d, eps);
    Ok(CapPacking {
        d,
        eps,
        phi: eps.asin(),
        k_bound: Verdict::at_most("cap_count", T::from_usize_lossy(centers.len()), bound, T::zero()),
        centers,
        center_origin,
        candidates: order.len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimStepAudit<T> {
    pub max_step: T,
    /// `chord(4 phi) = 2 sin 2 phi`, the bound the covering argument gives.
    pub chord_bound: T,
    /// The literal `sin 4 phi`.
    pub literal_bound: T,
    /// `4 sin phi`, the form used in the length estimate.
    pub linear_bound: T,
    pub chord_held: bool,
    pub literal_held: bool,
    pub linear_held: bool,
}

impl<T> PrimStepAudit<T> {
    pub fn pass(&self) -> bool {
        self.chord_held && self.linear_held
    }
}

/// Longest Prim step over the centers against the three readings of the
/// bound.
pub fn prim_step_bound_audit<T: Scalar>(packing: &CapPacking<T>) -> PrimStepAudit<T> {
    let mst = prim_mst(&packing.centers);
    let max_step = mst.step_lengths.iter().fold(T::zero(), |m, &s| m.max(s));
    let phi = packing.phi;
    let tol = T::lit(TOL_GEOM);
    let chord_bound = chord(T::lit(4.0) * phi);
    let literal_bound = (T::lit(4.0) * phi).sin();
    let linear_bound = T::lit(4.0) * packing.eps;
    PrimStepAudit {
        max_step,
        chord_bound,
        literal_bound,
        linear_bound,
        chord_held: max_step <= chord_bound + tol,
        literal_held: max_step <= literal_bound + tol,
        linear_held: max_step <= linear_bound + tol,
    }
}

#[derive(Clone, Debug)]
pub struct SphereConnection<T> {
    /// Inputs are vertices `0..t`; centers that are not inputs follow.
    pub forest: EmbeddedForest<T>,
    pub length: T,
    pub packing: Option<CapPacking<T>>,
    pub prim: Option<PrimStepAudit<T>>,
    /// Longest attachment edge against `chord(2 phi) = 2 eps`.
    pub attachment: Verdict<T>,
    /// Against `2 c_min d/(d-1) t^((d-2)/(d-1))`.
    pub length_bound: Verdict<T>,
    pub connected: bool,
}

impl<T: Scalar> SphereConnection<T> {
    pub fn pass(&self) -> bool {
        self.connected
            && self.length_bound.pass
            && self.attachment.pass
            && self.packing.as_ref().map_or(true, |p| p.k_bound.pass)
            && self.prim.as_ref().map_or(true, |p| p.pass())
    }
}

/// Connects the points with `eps = c_min t^(-1/(d-1))`: a spanning tree on
/// the packing centers plus an edge from each point to its nearest center.
pub fn connect_on_sphere<T: Scalar>(
    points: &[Point<T>],
    d: usize,
    seed: u64,
) -> Result<SphereConnection<T>, SphereError> {
    if d < 3 {
        return Err(SphereError::DimensionTooSmall(d));
    }
    check_points(points, d)?;
    let t = points.len();
    let exponent = T::from_usize_lossy(d - 2) / T::from_usize_lossy(d - 1);
    let bound = length_constant::<T>(d) * T::from_usize_lossy(t).powf(exponent);
    let mut forest = EmbeddedForest::new();
    for p in points {
        forest.add_vertex(p.clone(), VertexKind::Terminal);
    }
    if t <= 1 {
        return Ok(SphereConnection {
            forest,
            length: T::zero(),
            packing: None,
            prim: None,
            attachment: Verdict::at_most("attachment", T::zero(), T::zero(), T::zero()),
            length_bound: Verdict::at_most("length", T::zero(), bound, T::zero()),
            connected: true,
        });
    }
    let eps = c_min::<T>(d) * T::from_usize_lossy(t).powf(-T::one() / T::from_usize_lossy(d - 1));
    // For small t the formula gives eps >= 1; any single cap then suffices.
    let eps = eps.min(T::lit(0.999));
    let packing = greedy_cap_packing(points, d, eps, seed)?;
    let mut cid = Vec::with_capacity(packing.k());
    for (c, origin) in packing.centers.iter().zip(&packing.center_origin) {
        cid.push(match origin {
            Some(i) => *i,
            None => forest.add_vertex(c.clone(), VertexKind::Branch),
        });
    }
    let mst = prim_mst(&packing.centers);
    for &(a, b) in mst.tree.edges() {
        forest.add_edge(cid[a], cid[b]).expect("distinct centers");
    }
    let mut longest = T::zero();
    for (i, p) in points.iter().enumerate() {
        if packing.center_origin.contains(&Some(i)) {
            continue;
        }
        let (j, dist) = packing
            .centers
            .iter()
            .enumerate()
            .map(|(j, c)| (j, dist_slices(c.coords(), p.coords())))
            .fold((0, T::infinity()), |m, x| if x.1 < m.1 { x } else { m });
        longest = longest.max(dist);
        if cid[j] != i && dist > T::lit(TOL_GEOM) {
            forest.add_edge(i, cid[j]).expect("fresh attachment edge");
        }
    }
    let length = crate::geometry::forest_length(&forest);
    let prim = prim_step_bound_audit(&packing);
    let connected = forest.is_connected();
    Ok(SphereConnection {
        attachment: Verdict::at_most("attachment", longest, chord(T::two() * packing.phi), T::lit(TOL_GEOM)),
        length_bound: Verdict::at_most("length", length, bound, T::lit(TOL_LEN) * bound),
        forest,
        length,
        prim: Some(prim),
        packing: Some(packing),
        connected,
    })
}
