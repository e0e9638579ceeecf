//! Rest points, index bookkeeping and bistability for an SIRS model with
//! births, deaths and disease-related removal, where the population is not
//! closed and proportions evolve by a quadratic planar field.
//!
//! - [`model`]: parameters, the population, proportions and planar fields.
//! - [`equilibria`]: rest points from a resultant quartic, classification.
//! - [`index`]: Jordan curves and winding numbers of the field.
//! - [`dynamics`]: adaptive integration, omega-limits, growth of `N`.
//! - [`analysis`]: regime verdicts, perturbation, basins, sweeps.
//! - [`io`]: configs, CSV/JSON, SVG portraits; [`cli`] wraps it all.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod index;
pub mod io;
pub mod model;
pub mod poly;

pub use error::{Error, Result};
