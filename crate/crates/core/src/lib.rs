//! Helical vortex dynamics in the reduced plane.
//!
//! - [`geometry`]: helical coefficients `K`, `τ`, `T`, `DT`, `H` and the constants `A`, `B`.
//! - [`kernel`]: the δ-regularized singular Green's kernel and its velocity.
//! - [`pointvortex`]: the limiting N-vortex system and its integrator.
//! - [`leapfrog`]: two-vortex reduction, level sets, periods, separation check.
//! - [`blob`]: vortex-blob solver for concentrated initial vorticity.
//! - [`diagnostics`]: centers, moments, energies and tracking errors of a blob field.
//! - [`config`], [`output`], [`app`]: the scenario files, CSV/JSON artifacts and
//!   the `ode`/`leapfrog`/`blob`/`sweep` drivers behind the `helivort` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod blob;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod leapfrog;
pub mod output;
pub mod pointvortex;
pub mod rk4;
pub mod vec2;

pub use error::{Error, Result};
pub use geometry::HelixGeometry;
pub use vec2::{Mat2, Vec2};
