//! Classical simplex centers in finite-dimensional normed (Minkowski)
//! spaces.
//!
//! Given a simplex and one of its circumcenters `M`, this crate computes the
//! centroid, Monge point, complementary point and Feuerbach sphere, checks
//! that they lie on a common Euler line in fixed ratios, and does the same
//! for cyclic polygons in normed planes. Circumcenters are located
//! numerically for arbitrary norms and certified at a stated tolerance.
//!
//! Modules follow the construction order:
//! [`norms`] → [`affine`] → [`simplex`] → [`circumcenter`] → [`centers`],
//! with [`polygon`] for the planar polygon analogues.

pub mod affine;
pub mod centers;
pub mod circumcenter;
pub mod error;
pub mod figure;
pub mod instance;
mod linalg;
pub mod norms;
mod optimize;
pub mod polygon;
pub mod sampling;
pub mod simplex;
pub mod tolerance;
pub mod verify;

pub use affine::{Line, Point, Segment};
pub use centers::{full_report, CentersReport};
pub use circumcenter::{solve_circumcenter, CircumResult, CircumStatus, SolverOptions};
pub use error::{GeomError, Result};
pub use norms::NormSpec;
pub use polygon::{CyclicPolygon, PolygonReport};
pub use simplex::{FaceIndex, Simplex};
pub use tolerance::Tolerances;
