//! Special-function and root-finding kernel.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod hyper;
mod roots;

pub use bessel::{bessel_i, bessel_j, MAX_ARG as BESSEL_MAX_ARG, MAX_ORDER as BESSEL_MAX_ORDER};
pub use hyper::{hyp2f1, hyp2f1_dz, HyperParams, MAX_TERMS, TAIL_TOL};
pub use roots::{find_roots, find_roots_par, refine, roots_from_samples, scan_abscissae, RootBracket};

/// Complex scalar used for hypergeometric parameters and spinor samples.
pub type ComplexScalar = num_complex::Complex64;
