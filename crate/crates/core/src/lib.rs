//! Universal covers, cone-induced partitions and certified diameter bounds.
//!
//! The crate builds the four-element universal covering system obtained by
//! truncating the Lassak cover in dimension 4, partitions each element into
//! eight parts by cones over rotated hypercube directions, and bounds part
//! diameters from below (inscribed point samples) and above (circumscribed
//! polytopes).  A seeded multistart search looks for configurations whose
//! certified maximum part diameter stays below a threshold strictly less
//! than 1.
//!
//! Module layout follows the pipeline:
//!
//! * [`geometry`] - points, balls, halfspaces, covers, ray casting, exact
//!   point-set diameters and Haar-random rotations;
//! * [`covers`] - the Jung ball, the Lassak cover in canonical coordinates,
//!   the rhombic-dodecahedron normal system and the four-element covering
//!   system, plus the planar demo covers;
//! * [`partition`] - hypercube/hexagon direction systems, cone partitions
//!   and the inscribed lower-bound objective;
//! * [`polytope`] - circumscribed polytopes, halfspace vertex enumeration
//!   and the circumscribed upper-bound objective;
//! * [`optimize`] - finite-difference descent, Nelder-Mead fine-tuning,
//!   seeded multistart search and certification;
//! * [`specfile`] - line-oriented text formats for covers, direction
//!   systems, certificates and run reports.

// Indexed loops are the clearer idiom in the small dense numeric kernels
// below; the iterator rewrites clippy suggests obscure the math.
#![allow(clippy::needless_range_loop)]

pub mod covers;
pub mod error;
pub mod geometry;
mod hull;
mod linalg;
pub mod optimize;
pub mod partition;
pub mod polytope;
pub mod specfile;

pub use error::{Error, Result};
pub use geometry::{Ball, Cover, Halfspace, Point, Rotation};
pub use optimize::{Certificate, SearchParams};
pub use partition::DirectionSystem;
pub use polytope::Polytope;
