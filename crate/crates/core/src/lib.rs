//! Numerical laboratory for low-frequency dispersive estimates of
//! Schrödinger operators `-Δ + V` on `R^n`, `n ∈ {4, 5, 6}`.
//!
//! The crate evaluates every computable object entering those estimates —
//! scaled cylinder functions, free and perturbed resolvent kernels, the
//! Helffer–Sjöstrand functional calculus, band-limited propagator kernels,
//! Born/Duhamel correction terms, the zero-resonance operator and a family
//! of oscillatory integrals — and provides the sweep/fit machinery used to
//! measure the constants in the claimed envelopes at desk scale.
//!
//! Everything is organized around radial reductions: potentials are radial,
//! convolution kernels are functions of the inter-point distance, and all
//! spatial integrals collapse to at most three dimensions.

pub mod error;
pub mod funcalc;
pub mod grid;
pub mod interp;
pub mod mc;
pub mod oscint;
pub mod potential;
pub mod propagator;
pub mod quad;
pub mod radialops;
pub mod resolvent;
pub mod specfun;

pub use error::{Error, Result};
pub use grid::RadialGrid;
pub use radialops::fit::EnvelopeFitReport;
