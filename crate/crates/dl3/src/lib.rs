//! Dual Lorentzian 3-space.
//!
//! This crate implements the module `D³` of dual vectors over the dual-number
//! ring `D = {a + εa*, ε² = 0}`, equipped with the Lorentzian inner product
//! `⟨a,b⟩ = −a₁b₁ + a₂b₂ + a₃b₃` (timelike first coordinate), and the
//! differential geometry of dual timelike curves in that space:
//!
//! - [`dual`]: the dual-number ring with division and Taylor-lifted
//!   elementary functions (which double as forward-mode differentiation),
//! - [`lorentz`]: real Minkowski 3-space primitives and causal classification,
//! - [`dual_vec`]: dual vectors, dual inner/cross products, dual norm and the
//!   four dual angles between unit dual vectors,
//! - [`expr`]: a small expression language for scalar functions of one
//!   variable, evaluated over dual scalars,
//! - [`curve`]: dual space curves, dual arc length, Frenet frames and
//!   invariants (curvature and torsion) for dual timelike curves, and curve
//!   synthesis from prescribed invariants,
//! - [`mannheim`]: construction and numerical verification of dual timelike
//!   Mannheim partner pairs, with per-sample residuals for every identity
//!   relating the two curves' invariants.
//!
//! Sample grids are evaluated in parallel with rayon when the `parallel`
//! feature (default) is enabled; every parallel entry point has a sequential
//! twin so the two can be compared.

// `!(a < b)` guards are deliberate: they also reject NaN bounds.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::large_enum_variant)]

pub mod curve;
pub mod dual;
pub mod dual_vec;
pub mod error;
pub mod exec;
pub mod expr;
pub mod lorentz;
pub mod mannheim;

pub use dual::{hyperbolic_pair, lift, DualScalar, LiftFn};
pub use dual_vec::{DualAngle, DualAngleKind, DualVec3};
pub use error::{Error, Result};
pub use lorentz::{CausalClass, RealVec3};
