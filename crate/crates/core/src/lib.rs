//! Exact Euclidean Steiner minimal trees for small terminal sets, with the
//! length formulas and regularity audits that go with them.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix `f64`.

pub mod analysis;
pub mod geometry;
pub mod linalg;
pub mod melzak;
pub mod opt;
pub mod pathology;
pub mod scalar;
pub mod solver;
pub mod spanning;
pub mod sphere_connect;
pub mod topology;

pub use geometry::{EmbeddedForest, Point, VertexKind, TOL_GEOM, TOL_LEN};
pub use scalar::Scalar;
pub use solver::{solve, Instance, SolveOptions, SteinerSolution};
pub use topology::{FullTopology, Topology};

pub type Point64 = geometry::Point<f64>;
pub type Forest64 = geometry::EmbeddedForest<f64>;
pub type Instance64 = solver::Instance<f64>;
pub type Solution64 = solver::SteinerSolution<f64>;
pub type FixedTopologyResult64 = opt::FixedTopologyResult<f64>;
pub type RegularityProfile64 = analysis::RegularityProfile<f64>;
