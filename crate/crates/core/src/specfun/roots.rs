//! Bracketed scalar root extraction: uniform scan for sign changes, then
//! Illinois-modified regula falsi with a bisection fallback.

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

impl RootBracket {
    pub fn new(lo: f64, hi: f64, tol_abs: f64, tol_rel: f64) -> Result<Self> {
        let ok = lo.is_finite()
            && hi.is_finite()
            && lo < hi
            && tol_abs > 0.0
            && tol_rel > 0.0
            && tol_abs.is_finite()
            && tol_rel.is_finite();
        if !ok {
            return Err(Error::InvalidBracket {
                lo,
                hi,
                tol_abs,
                tol_rel,
            });
        }
        Ok(Self {
            lo,
            hi,
            tol_abs,
            tol_rel,
        })
    }

    /// Bracket with tolerances near machine precision.
    pub fn tight(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, 1e-14, 4.0 * f64::EPSILON)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn converged(&self, a: f64, b: f64) -> bool {
        (b - a).abs() <= self.tol_abs + self.tol_rel * a.abs().max(b.abs())
    }
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { x, value: v })
    }
}

/// Refine a root inside `[a, b]` given `fa`, `fb` of opposite sign.
pub fn refine<F: FnMut(f64) -> f64>(
    f: &mut F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: &RootBracket,
) -> Result<f64> {
    debug_assert!(fa.signum() != fb.signum());
    // side of the last retained endpoint, for the Illinois halving
    let mut side = 0i8;
    for _ in 0..200 {
        if tol.converged(a, b) {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        let mid = 0.5 * (a + b);
        // fall back to bisection when the secant point is useless
        if !(x > a.min(b) && x < a.max(b)) || !x.is_finite() {
            x = mid;
        }
        let fx = eval(f, x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        // a plain bisection step keeps worst-case progress bounded
        let m = 0.5 * (a + b);
        if !tol.converged(a, b) {
            let fm = eval(f, m)?;
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// The `scan_points` uniformly spaced abscissae used by [`find_roots`].
pub fn scan_abscissae(bracket: &RootBracket, scan_points: usize) -> Result<Vec<f64>> {
    if scan_points < 2 {
        return Err(Error::InvalidParameter {
            name: "scan_points",
            reason: format!("{scan_points} < 2"),
        });
    }
    let n = scan_points - 1;
    let step = bracket.width() / n as f64;
    Ok((0..=n)
        .map(|i| {
            if i == n {
                bracket.hi
            } else {
                bracket.lo + step * i as f64
            }
        })
        .collect())
}

/// Refine every sign change of precomputed samples `fs` at `xs`.
pub fn roots_from_samples<F: FnMut(f64) -> f64>(
    f: &mut F,
    xs: &[f64],
    fs: &[f64],
    bracket: &RootBracket,
) -> Result<Vec<f64>> {
    let n = xs.len() - 1;
    let mut roots = Vec::new();
    for i in 0..n {
        let (a, b, fa, fb) = (xs[i], xs[i + 1], fs[i], fs[i + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fb == 0.0 {
            if i + 1 == n {
                roots.push(b);
            }
            continue;
        }
        if fa.signum() != fb.signum() {
            roots.push(refine(f, a, b, fa, fb, bracket)?);
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= bracket.tol_abs);
    Ok(roots)
}

/// All sign-change roots of `f` on the bracket, sorted ascending and
/// deduplicated within `tol_abs`.
///
/// `scan_points` uniformly spaced samples (endpoints included) locate the
/// sign changes. A non-finite sample is an error carrying its location.
/// Callers whose `f` has poles must certify the returned roots.
pub fn find_roots<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: &RootBracket,
    scan_points: usize,
) -> Result<Vec<f64>> {
    let xs = scan_abscissae(bracket, scan_points)?;
    let mut fs = Vec::with_capacity(xs.len());
    for &x in &xs {
        fs.push(eval(&mut f, x)?);
    }
    roots_from_samples(&mut f, &xs, &fs, bracket)
}

/// [`find_roots`] with the scan evaluated in parallel. Results are
/// identical to the sequential version.
pub fn find_roots_par<F: Fn(f64) -> f64 + Sync>(
    f: F,
    bracket: &RootBracket,
    scan_points: usize,
) -> Result<Vec<f64>> {
    let xs = scan_abscissae(bracket, scan_points)?;
    let fs: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    if let Some(i) = fs.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { x: xs[i], value: fs[i] });
    }
    let mut g = |x: f64| f(x);
    roots_from_samples(&mut g, &xs, &fs, bracket)
}
