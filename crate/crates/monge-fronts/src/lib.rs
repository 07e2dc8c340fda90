//! Truncated power-series geometric solutions of Monge-Ampere systems and
//! classification of their wave-front singularities.
//!
//! The crate constructs Legendrian map jets `(x, y, z, p, q)` solving the
//! contact-geometric form of the equations `Hess = c` (improper affine
//! spheres), `K = c` (constant Gaussian curvature) and `Hess = 0`
//! (developable surfaces), projects them through the two legs of the double
//! Legendrian fibration, and classifies the projection singularities
//! (cuspidal edge, swallowtail) with the
//! Kokubu-Rossman-Saji-Umehara-Yamada (KRSUY) criterion.
//!
//! All constructions run on either an exact rational coefficient backend,
//! where every residual identity is checked with equality, or on `f64` for
//! meshing and randomized sweeps.
//!
//! Start with the runnable programs in `examples/`; each one exercises a
//! major capability end to end.

pub mod classify;
pub mod error;
pub mod genericity;
pub mod legendrian;
pub mod mesh;
pub mod pipeline;
pub mod scalar;
pub mod series;
pub mod solutions;

pub use error::{Error, Result};
pub use scalar::{rat, Backend, Rational, Scalar};
pub use series::{path_integrate, ComplexSeries1, Series1, Series2, Var};
