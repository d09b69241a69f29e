//! Rank-one solvmanifolds of Iwasawa type, from algebraic data to verdict.
//!
//! The crate builds metric solvable Lie algebras `g = a + n` (with `a`
//! one-dimensional and `D = ad_A` symmetric positive definite on the
//! nilradical), computes their left-invariant curvature, follows the
//! distinguished geodesics spanned by `A` and a top-eigenvalue center
//! direction `Z`, integrates the block Jacobi systems for the volume density
//! `V(t, phi)`, reproduces the same data as exact truncated series, and runs
//! a battery of harmonicity checks that classifies each input as flat, real
//! hyperbolic, Damek-Ricci, or not harmonic.
//!
//! Module map:
//! - [`algebra`]: construction and validation of the algebras (raw structure
//!   constants, the Damek-Ricci recipe with Clifford-module generators, or
//!   declared spectral data), spectral decomposition and `J`-operator blocks.
//! - [`curvature`]: connection table, curvature tensor, Jacobi operators,
//!   Ricci, the first two trace conditions, and sectional-curvature scans.
//! - [`geodesic`]: closed-form geodesic state `(q, Phi)` and the adapted
//!   moving frame with its restricted Jacobi blocks.
//! - [`density`]: fixed-step fourth-order integration of the block Jacobi
//!   systems, assembly of `V(t, phi)`, closed-form cross-checks, and the
//!   phi-independence scan.
//! - [`series`]: the exact truncated-series engine (polynomials in
//!   `c = cos(phi)` over big rationals) with the second-order expansions,
//!   coth-combination constraints, and the ninth-order Taylor coefficient of
//!   the exceptional `{lambda/3, 2lambda/3, lambda}` spectrum.
//! - [`classify`]: the check battery in proof order with verdicts.

pub mod algebra;
pub mod classify;
pub mod curvature;
pub mod density;
pub mod geodesic;
pub mod rational;
pub mod series;

pub use algebra::{AlgebraError, AlgebraSpec, JOperatorFamily, MetricSolvableAlgebra, SpectralData};
pub use classify::{classify, ConstraintReport, Verdict};
pub use curvature::CurvatureOracle;
pub use density::{volume_density, BlockOde, BlockOdeKind};
pub use geodesic::{AdaptedBasis, GeodesicState};
