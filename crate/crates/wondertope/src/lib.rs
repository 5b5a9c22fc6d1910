//! Exact canonical forms of polytopes, blow-ups along linear centers, and
//! machine checks of the resulting positive-geometry structure.
//!
//! Everything is exact over `ℚ`: forms are rational functions times the standard volume
//! form of a named chart, and every verifier returns a [`VerificationReport`].

pub mod algebra;
pub mod blowup;
pub mod buildingset_geom;
pub mod canonical_form;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod m0n;
pub mod matroid;
pub mod polytope;
pub mod report;

pub use algebra::{MPoly, PolyMap, Rat, RatFunc, TopForm};
pub use error::{Error, Result};
pub use polytope::{LinearSubspace, Polytope};
pub use report::VerificationReport;
