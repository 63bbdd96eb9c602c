//! Exact analyzer for dominant polynomial maps `f = (f1, f2): C^2 -> C^2`.
//!
//! The library computes the polyhedral data attached to the support of a
//! planar polynomial map (Newton polygons, Minkowski sums, mixed volumes,
//! face pairs and their classification), decides generic non-properness,
//! builds the Jelonek set from relevant faces, locates the critical values
//! at infinity `K_f`, and produces the finite set of isolated missing
//! points together with the linear upper-bound checks.
//!
//! Exact arithmetic is over Gaussian rationals; a high-precision floating
//! tier (MPFR via `rug`) is used only to locate roots numerically, never to
//! decide emptiness of a fiber over a rational target.

pub mod analysis;
pub mod config;
pub mod faceclass;
pub mod families;
pub mod lattice;
pub mod missing;
pub mod parse;
pub mod polyring;
pub mod report;
pub mod solver;
pub mod toric;

pub use analysis::{analyze, Analysis, Verdict};
pub use config::NumericConfig;
pub use lattice::{FacePair, Pt, Support, SupportPair};
pub use polyring::{GaussRat, Poly, PolyMap, UPoly};
