//! Exact primary decomposition of downsets and downset-finite modules over
//! polyhedral partially ordered groups.
//!
//! The library works in three layers:
//!
//! * geometry of the partially ordered group itself: cones, faces, the face
//!   lattice and closedness ([`cone`], [`geometry`]);
//! * symbolic set calculus for downsets over orthant-ordered groups, built on
//!   an exact Boolean algebra of generalized boxes ([`region`], [`downset`]);
//! * exact rational linear algebra for poset modules presented by downset
//!   hulls, including localization, support functors, coprimary tests and the
//!   primary decomposition of such modules ([`module`]).
//!
//! Every symbolic operation has a definition-chasing brute-force counterpart
//! on a finite grid in [`oracle`]; the test suite checks the two against each
//! other on randomized instances.

pub mod bounds;
pub mod cone;
pub mod downset;
pub mod fm;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod region;
pub mod render;
pub mod sample;

pub use cone::{Closedness, ConePresentation, Face, FaceLattice};
pub use downset::{CoprincipalPiece, DownsetExpr};
pub use module::{GridModule, HullPresentation};
pub use region::{GeneralizedBox, Region};
