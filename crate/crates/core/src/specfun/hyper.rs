//! Gauss hypergeometric function by direct power series.
//!
//! The series is summed in double-double complex arithmetic. For the
//! parameters met by the wall problem (|a|, |b| up to ~60, z = 1/2) the
//! terms reach 1e17 while the sum is O(1), so plain `f64` summation
//! returns noise; 106 bits of mantissa leave ~14 good digits after the
//! cancellation.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

use super::ComplexScalar;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 500;

/// Relative tail bound at which summation stops.
pub const TAIL_TOL: f64 = 1e-14;

// the bound is slack by ~1/(1-q); stop with margin so the result meets TAIL_TOL
const STOP_TOL: f64 = TAIL_TOL * 1e-2;

type Dd = TwoFloat;
type Cdd = Complex<TwoFloat>;

/// Parameters `(a, b; c)` of `2F1`. In the wall problem `a` plays the
/// stock-price role and `b` the strike-price role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub a: ComplexScalar,
    pub b: ComplexScalar,
    pub c: f64,
}

impl HyperParams {
    pub fn new(a: ComplexScalar, b: ComplexScalar, c: f64) -> Self {
        Self { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), c)
    }

    /// `(a+1, b+1; c+1)`, the parameters of the z-derivative.
    pub fn raised(&self) -> Self {
        Self::new(self.a + 1.0, self.b + 1.0, self.c + 1.0)
    }

    /// True when `b == conj(a)` exactly, which makes the series real.
    pub fn is_conjugate_pair(&self) -> bool {
        self.a.re == self.b.re && self.a.im == -self.b.im
    }
}

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

fn cdd(z: Complex64) -> Cdd {
    Cdd::new(dd(z.re), dd(z.im))
}

// twofloat's quotient is only accurate to f64; one correction step
// restores double-double accuracy
fn dd_div(a: Dd, b: Dd) -> Dd {
    let q = a / b;
    let r = a - q * b;
    q + r / b
}

fn to_c64(z: Cdd) -> Complex64 {
    Complex64::new(f64::from(z.re), f64::from(z.im))
}

fn check_c(c: f64) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("non-finite value {c}"),
        });
    }
    if c <= 0.0 && c == c.round() {
        return Err(Error::ParameterPole { c });
    }
    Ok(())
}

/// Upper bound on `sup_{k >= n} |t_{k+1} / t_k|`, or `None` when no bound
/// below 1 is available yet.
fn ratio_bound(p: &HyperParams, z: f64, n: usize) -> Option<f64> {
    let k = n as f64;
    let cn = p.c + k;
    if cn <= 0.0 {
        return None;
    }
    let fa = ((p.a.norm() + k) / cn).max(1.0);
    let fb = ((p.b.norm() + k) / (k + 1.0)).max(1.0);
    let q = z.abs() * fa * fb;
    (q < 1.0).then_some(q)
}

/// `2F1(a, b; c; z) = sum_n (a)_n (b)_n / (c)_n z^n / n!` for real `|z| < 1`.
///
/// Stops once the geometric tail bound is well below `TAIL_TOL` relative to
/// the partial sum. Returns [`Error::NonConvergence`] when that does not
/// happen within [`MAX_TERMS`] terms, which in practice means `z` is too
/// close to 1 for the given parameters.
pub fn hyp2f1(p: &HyperParams, z: f64) -> Result<ComplexScalar> {
    check_c(p.c)?;
    if !z.is_finite() || z.abs() >= 1.0 {
        return Err(Error::OutOfRange {
            what: "z",
            value: z,
            range: "(-1, 1)",
        });
    }
    if z == 0.0 {
        return Ok(Complex64::one());
    }
    let a = cdd(p.a);
    let b = cdd(p.b);
    let c = dd(p.c);
    let zd = dd(z);
    let mut term = Cdd::one();
    let mut sum = Cdd::one();
    for n in 0..MAX_TERMS {
        let k = dd(n as f64);
        let num = (a + Cdd::new(k, Dd::zero())) * (b + Cdd::new(k, Dd::zero()));
        let den = (c + k) * (k + dd(1.0));
        let factor = dd_div(zd, den);
        term = num * Cdd::new(factor, Dd::zero()) * term;
        sum += term;
        if term.re == Dd::zero() && term.im == Dd::zero() {
            return Ok(to_c64(sum));
        }
        if let Some(q) = ratio_bound(p, z, n + 1) {
            let t = to_c64(term).norm();
            let s = to_c64(sum).norm();
            if t * q / (1.0 - q) <= STOP_TOL * s {
                return Ok(to_c64(sum));
            }
        }
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        z,
    })
}

/// `d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z)`.
pub fn hyp2f1_dz(p: &HyperParams, z: f64) -> Result<ComplexScalar> {
    check_c(p.c)?;
    let scale = p.a * p.b / p.c;
    if scale.is_zero() {
        return Ok(Complex64::zero());
    }
    Ok(scale * hyp2f1(&p.raised(), z)?)
}
