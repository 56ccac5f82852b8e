//! Planar Signorini condition for frictionless contact patches.
//!
//! A rigid contact between two bodies over a planar patch `P` is summarized
//! by two homogeneous triples: the wrench part `[m_t, f_n]` and the twist
//! part `[omega_t, v_n]`. Pointwise nonpenetration and repulsivity over the
//! whole patch are equivalent to the conic complementarity condition
//!
//! ```text
//! K_P  ∋  [m_t, f_n]  ⊥  [omega_t, v_n]  ∈  K_P*
//! ```
//!
//! where `K_P` is the cone over the quarter-turned hull of the patch.
//!
//! Modules, bottom-up:
//!
//! - [`geometry`]: vectors, patches, hulls, support sets, containment.
//! - [`fields`]: twists, wrenches, atom distributions, CoP/ZMP/Varignon.
//! - [`cones`]: `K_P`, its dual, residuals, cone sampling.
//! - [`signorini`]: the full check, regimes, zero-line, extended CoP and
//!   distribution synthesis.
//! - [`oracle`]: brute-force pointwise verification and randomized
//!   property suites.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod cones;
pub mod fields;
pub mod geometry;
pub mod oracle;
pub mod signorini;

pub use cones::{complementarity_residual, HomVec3, PatchCone};
pub use fields::{
    center_of_pressure, integrate_wrench, normal_velocity, tangential_velocity, varignon_shift, zmp, Atom, FieldError,
    ForceDistribution, Twist, Wrench,
};
pub use geometry::{perp, Ellipse, GeometryError, Hull, Patch, Shape, SupportSet, Vec2};
pub use signorini::{
    check, classify, extended_cop, synthesize_distribution, zero_line, ExtendedCop, Regime, RegimeKind, SignoriniError,
    Verdict, ZeroLine,
};

/// Default relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
