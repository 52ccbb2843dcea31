//! Fermion spectra of the Dirac operator on a two-sphere carrying an
//! equatorial domain wall, its flat disk analogue, and a scenario layer
//! that maps market parameters onto the model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod disk;
pub mod error;
pub mod geometry;
pub mod market;
pub mod mode;
pub mod output;
pub mod plot;
pub mod shooting;
pub mod solver;
pub mod specfun;
pub mod sphere;

pub use error::{Error, Result};
pub use mode::ModeIndex;
