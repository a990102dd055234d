//! Mandelbrot-type sets for template iterations of two quadratic maps.
//!
//! A template is a binary word choosing, at every step, which of
//! `f_{c0}(z) = z^2 + c0` or `f_{c1}(z) = z^2 + c1` is applied. This crate
//! enumerates finite template roots with prefix pruning, measures the set of
//! roots that keep the critical orbit bounded, and sweeps that measure over
//! parameter planes. It also approximates template Julia sets on a grid and
//! counts their connected components.

pub mod cli;
pub mod error;
pub mod fields;
pub mod grid;
pub mod io;
pub mod julia;
pub mod msets;
pub mod orbit;
pub mod templates;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use msets::{Budget, CriticalMode};
pub use orbit::{ComplexValue, OrbitOutcome, OrbitResult, ParamPair};
pub use templates::{DyadicIntervalSet, TemplateRoot};
