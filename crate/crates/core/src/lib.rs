//! Flat U(1) connections on the punctured plane.
//!
//! The crate computes holonomies, de Rham periods, gauge orbits and
//! moduli-space coordinates for connections of the form `λA₀ + i db`, where
//! `A₀ = (i/|e|)(x dy - y dx)/(x² + y²)` is the Aharonov-Bohm form and
//! `|e| = √(4πα)`. Gauge classes of such connections form a circle of
//! circumference `|e|`, and the holonomy group for `ρ = λ/|e|` is `Z_q` when
//! `ρ = p/q` and `Z` when `ρ` is irrational.
//!
//! Modules:
//! - [`geometry`]: punctured-plane points, polyline loops, winding numbers.
//! - [`forms`]: the canonical form, connections, line integrals, flatness checks.
//! - [`gauge`]: gauge maps `f_n`, `exp ∘ β`, products, and their action.
//! - [`moduli`]: periods, holonomy, the moduli circle, group classification.
//! - [`io`] and [`cli`]: file formats and the command-line surface.

pub mod cli;
pub mod error;
pub mod forms;
pub mod gauge;
pub mod geometry;
pub mod io;
pub mod moduli;
pub mod quadrature;
pub mod rational;

pub use error::{Error, Result};
pub use forms::{
    canonical_a0_at, line_integral, line_integral_sampled, verify_field, verify_flat, BuiltinField,
    FlatConnection, Imaginary, SampledCovectorField, ScalarField,
};
pub use gauge::{construct_fn, evaluate_map, exp_sharp, gauge_apply, map_winding, GaugeMap};
pub use geometry::{segment_angle, validate_path, winding_number, PolyPath, PuncturedPoint};
pub use moduli::{
    classify_holonomy, gauge_equivalent, holonomy, holonomy_spectrum, make_constants, period,
    reduce_to_moduli, FluxRatio, HolonomyGroup, ModuliCoordinate, PhysicalConstants,
};
