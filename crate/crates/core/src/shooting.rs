//! Shooting oracle for the wall spectrum. Integrates the first-order
//! component equations from each pole to the equator with classical RK4
//! and locates eigenvalues as zeros of the 2x2 matching determinant. No
//! hypergeometric code is involved.
//!
//! # Reduced variables
//!
//! On a hemisphere with constant `Phi = mu`, put
//! `psi1 = sin^{-1/2} T^m u`, `psi2 = sin^{-1/2} T^m q` with
//! `T = tan(theta/2)`. Using `d ln T / d theta = 1/sin` the equations
//! become
//!
//! ```text
//!   u' = -(E~ + mu) q
//!   q' =  (E~ - mu) u - (2m / sin) q
//! ```
//!
//! Near the north pole the second coefficient is singular, so the first
//! stretch is integrated in `x = ln T` (`d theta = sech(x) dx`):
//!
//! ```text
//!   du/dx = -(E~ + mu) sech(x) q
//!   dq/dx =  (E~ - mu) sech(x) u - 2m q
//! ```
//!
//! which has bounded coefficients; the irregular solution `q ~ T^{-2m}`
//! decays in the direction of integration.
//!
//! # Indicial start
//!
//! The regular solution at `theta -> 0` has `u -> const`. Substituting
//! `u = 1`, `q = C theta` into the `theta` form gives
//! `C = (E~ - mu) - 2m C`, i.e. `C = (E~ - mu) / (2m + 1)`. In the
//! original components this is `psi1 ~ theta^{m-1/2}`,
//! `psi2 ~ C theta^{m+1/2}`, with relative corrections of order `theta^2`.
//!
//! # South pole
//!
//! Under `theta' = pi - theta` the equations keep their form with the
//! components exchanged and `mu -> -mu`. The southern hemisphere
//! (`Phi = -Phi0`) is therefore the same kernel with `(P, Q) = (psi2, psi1)`
//! and `mu = +Phi0`.
//!
//! # Matching
//!
//! An eigenfunction needs `psi_N(pi/2) = k psi_S(pi/2)`, i.e. a vanishing
//! determinant `psi1N psi2S - psi2N psi1S`. Because the two starts are
//! mirror images with the same normalisation, `psi_S = (psi2N, psi1N)` and
//! the determinant factors as `(psi1N - psi2N)(psi1N + psi2N)`. The roots
//! are therefore taken class by class from
//! `M_alpha = (psi1N + alpha psi1S) / |psi_N|`, whose zeros have `k = -alpha`.
//! Roots of opposite class can sit within 1e-3 of each other, closer than
//! any affordable scan of the full determinant resolves.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::mode::ModeIndex;
use crate::specfun::{roots_from_samples, scan_abscissae, RootBracket};
use crate::sphere::{Alpha, WallField};

/// Angle at which the log-tangent stretch hands over to `theta`.
const SWITCH_THETA: f64 = 0.05;
/// Share of the steps spent in the log-tangent stretch.
const LOG_SHARE: f64 = 0.2;
const RESCALE_AT: f64 = 1e100;
const RESCALE_BY: f64 = 1.0 / (1u128 << 100) as f64 / (1u128 << 100) as f64 / (1u128 << 100) as f64;

/// Default scan density of the determinant, in samples per unit `E~`.
pub const SHOOTING_SCAN_DENSITY: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub epsilon_pole: f64,
    /// Total RK4 steps per hemisphere.
    pub step_count: usize,
    pub scan_density: f64,
}

impl ShootingConfig {
    pub fn new(epsilon_pole: f64, step_count: usize, scan_density: f64) -> Result<Self> {
        if !(epsilon_pole > 0.0 && epsilon_pole <= 1e-3) {
            return Err(invalid("epsilon_pole", format!("{epsilon_pole} outside (0, 1e-3]")));
        }
        if step_count < 1000 {
            return Err(invalid("step_count", format!("{step_count} < 1000")));
        }
        if !(scan_density.is_finite() && scan_density > 0.0) {
            return Err(invalid("scan_density", format!("{scan_density} must be positive")));
        }
        Ok(Self {
            epsilon_pole,
            step_count,
            scan_density,
        })
    }

    /// Step count scaled to the largest local frequency `Phi0 + |E~|max`.
    pub fn for_problem(phi0: f64, e_max: f64) -> Self {
        let steps = (100.0 * (phi0 + e_max.abs() + 1.0)).ceil() as usize;
        Self {
            epsilon_pole: 1e-6,
            step_count: steps.max(1000),
            scan_density: SHOOTING_SCAN_DENSITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pole {
    North,
    South,
}

/// Leading two terms of the regular solution at a pole, evaluated at
/// distance `epsilon` from it: `(psi1, psi2)`.
pub fn indicial_start(e_tilde: f64, phi0: f64, mode: ModeIndex, pole: Pole, epsilon: f64) -> Result<[f64; 2]> {
    if !mode.is_positive() {
        return Err(invalid("m", format!("{mode}: the indicial start is written for m > 0")));
    }
    let m = mode.m();
    let c = (e_tilde - phi0) / (2.0 * m + 1.0);
    let lead = epsilon.powf(m - 0.5);
    let sub = c * epsilon.powf(m + 0.5);
    Ok(match pole {
        Pole::North => [lead, sub],
        Pole::South => [sub, lead],
    })
}

/// Precomputed coefficients `(c, d)` of `A = [[0, -(E+mu) c], [(E-mu) c, -2m d]]`
/// at the RK4 stage points of one stretch.
#[derive(Debug, Clone)]
struct Stretch {
    h: f64,
    // index 2i: start of step i, 2i+1: midpoint, 2i+2: end
    coef: Vec<[f64; 2]>,
}

impl Stretch {
    fn new(t0: f64, t1: f64, steps: usize, coef: impl Fn(f64) -> [f64; 2]) -> Self {
        let h = (t1 - t0) / steps as f64;
        let coef = (0..=2 * steps).map(|k| coef(t0 + 0.5 * h * k as f64)).collect();
        Self { h, coef }
    }
}

/// Integration tables for one `(epsilon, step_count)` pair.
#[derive(Debug, Clone)]
pub struct ShootingGrid {
    config: ShootingConfig,
    log_stretch: Stretch,
    theta_stretch: Stretch,
}

impl ShootingGrid {
    pub fn new(config: ShootingConfig) -> Self {
        let eps = config.epsilon_pole;
        let n_log = ((config.step_count as f64 * LOG_SHARE).round() as usize).max(1);
        let n_theta = config.step_count - n_log;
        let x0 = (0.5 * eps).tan().ln();
        let xb = (0.5 * SWITCH_THETA).tan().ln();
        let log_stretch = Stretch::new(x0, xb, n_log, |x| [1.0 / x.cosh(), 1.0]);
        let theta_stretch = Stretch::new(SWITCH_THETA, FRAC_PI_2, n_theta, |t| [1.0, 1.0 / t.sin()]);
        Self {
            config,
            log_stretch,
            theta_stretch,
        }
    }

    pub fn config(&self) -> &ShootingConfig {
        &self.config
    }
}

#[inline]
fn rhs(y: [f64; 2], k: [f64; 2], lam_plus: f64, lam_minus: f64, two_m: f64) -> [f64; 2] {
    [-lam_plus * k[0] * y[1], lam_minus * k[0] * y[0] - two_m * k[1] * y[1]]
}

fn run_stretch(mut y: [f64; 2], s: &Stretch, lam_plus: f64, lam_minus: f64, two_m: f64) -> [f64; 2] {
    let h = s.h;
    let steps = (s.coef.len() - 1) / 2;
    for i in 0..steps {
        let (ka, km, kb) = (s.coef[2 * i], s.coef[2 * i + 1], s.coef[2 * i + 2]);
        let k1 = rhs(y, ka, lam_plus, lam_minus, two_m);
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
        let k2 = rhs(y2, km, lam_plus, lam_minus, two_m);
        let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
        let k3 = rhs(y3, km, lam_plus, lam_minus, two_m);
        let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
        let k4 = rhs(y4, kb, lam_plus, lam_minus, two_m);
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        // exact power-of-two rescaling keeps the map linear
        if y[0].abs().max(y[1].abs()) > RESCALE_AT {
            y = [y[0] * RESCALE_BY, y[1] * RESCALE_BY];
        }
    }
    y
}

/// Integrate the generic pole-to-equator kernel from start data `(P, Q)`
/// given in the original components at `theta = epsilon`. Returns `(P, Q)`
/// at the equator, up to a positive power-of-two factor when rescaling
/// kicked in.
fn kernel(start: [f64; 2], e_tilde: f64, mu: f64, m: f64, grid: &ShootingGrid) -> [f64; 2] {
    let eps = grid.config.epsilon_pole;
    // psi = sin^{-1/2} T^m (u, q)
    let to_reduced = eps.sin().sqrt() * (0.5 * eps).tan().powf(-m);
    let y = [start[0] * to_reduced, start[1] * to_reduced];
    let (lp, lm, two_m) = (e_tilde + mu, e_tilde - mu, 2.0 * m);
    let y = run_stretch(y, &grid.log_stretch, lp, lm, two_m);
    // at theta = pi/2 the prefactor is 1
    run_stretch(y, &grid.theta_stretch, lp, lm, two_m)
}

/// `(psi1, psi2)` at the equator for the regular solution started at the
/// given pole, `m > 0`.
pub fn integrate_hemisphere(e_tilde: f64, phi0: f64, mode: ModeIndex, grid: &ShootingGrid, pole: Pole) -> Result<[f64; 2]> {
    let start = indicial_start(e_tilde, phi0, mode, pole, grid.config.epsilon_pole)?;
    let m = mode.m();
    Ok(match pole {
        Pole::North => kernel(start, e_tilde, phi0, m, grid),
        Pole::South => {
            // the south problem with Phi = -Phi0 in the mirrored kernel: mu = +Phi0
            let [p, q] = kernel([start[1], start[0]], e_tilde, phi0, m, grid);
            [q, p]
        }
    })
}

/// Normalised matching determinant `psi1N psi2S - psi2N psi1S`.
pub fn matching_determinant(e_tilde: f64, phi0: f64, mode: ModeIndex, grid: &ShootingGrid) -> Result<f64> {
    let n = integrate_hemisphere(e_tilde, phi0, mode, grid, Pole::North)?;
    let s = integrate_hemisphere(e_tilde, phi0, mode, grid, Pole::South)?;
    let norm = n[0].hypot(n[1]) * s[0].hypot(s[1]);
    Ok((n[0] * s[1] - n[1] * s[0]) / norm)
}

/// Class-resolved matching function `M_alpha`.
pub fn symmetric_matching(e_tilde: f64, phi0: f64, mode: ModeIndex, grid: &ShootingGrid, alpha: Alpha) -> Result<f64> {
    let n = integrate_hemisphere(e_tilde, phi0, mode, grid, Pole::North)?;
    let s = integrate_hemisphere(e_tilde, phi0, mode, grid, Pole::South)?;
    Ok((n[0] + alpha.value() * s[0]) / n[0].hypot(n[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRoot {
    pub e_tilde: f64,
    /// Class of the matching function that vanishes; equals
    /// `-sign(psi2 / psi1)` at the equator.
    pub alpha: Alpha,
    /// Normalised full determinant at the root.
    pub determinant: f64,
}

/// Signed roots of the matching determinant with `|E~|` in `window`, for
/// a step of magnitude `phi0 >= 0` (zero gives the free sphere).
pub fn oracle_spectrum_for(phi0: f64, mode: ModeIndex, window: &RootBracket, config: &ShootingConfig) -> Result<Vec<OracleRoot>> {
    if !(phi0.is_finite() && phi0 >= 0.0) {
        return Err(invalid("phi0", format!("{phi0} must be non-negative")));
    }
    if window.lo <= 0.0 {
        return Err(invalid("window", format!("lower end {} must be positive (window is on |E~|)", window.lo)));
    }
    let base = mode.abs();
    let grid = ShootingGrid::new(*config);
    let points = (config.scan_density * window.width()).ceil() as usize + 1;
    let neg = RootBracket::new(-window.hi, -window.lo, window.tol_abs, window.tol_rel)?;
    let flip = if mode.is_positive() { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    for bracket in [neg, *window] {
        let xs = scan_abscissae(&bracket, points)?;
        let ends: Vec<([f64; 2], [f64; 2])> = xs
            .par_iter()
            .map(|&e| {
                Ok((
                    integrate_hemisphere(e, phi0, base, &grid, Pole::North)?,
                    integrate_hemisphere(e, phi0, base, &grid, Pole::South)?,
                ))
            })
            .collect::<Result<_>>()?;
        for alpha in Alpha::both() {
            let fs: Vec<f64> = ends
                .iter()
                .map(|(n, s)| (n[0] + alpha.value() * s[0]) / n[0].hypot(n[1]))
                .collect();
            let mut f = |e: f64| symmetric_matching(e, phi0, base, &grid, alpha).unwrap_or(f64::NAN);
            for e in roots_from_samples(&mut f, &xs, &fs, &bracket)? {
                out.push(OracleRoot {
                    e_tilde: flip * e,
                    alpha,
                    determinant: matching_determinant(e, phi0, base, &grid)?,
                });
            }
        }
    }
    out.sort_by(|a, b| a.e_tilde.total_cmp(&b.e_tilde));
    Ok(out)
}

pub fn oracle_spectrum(wall: &WallField, mode: ModeIndex, window: &RootBracket, config: &ShootingConfig) -> Result<Vec<OracleRoot>> {
    oracle_spectrum_for(wall.phi0(), mode, window, config)
}

/// Pairwise comparison of two sorted signed root lists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootComparison {
    pub matching: Vec<f64>,
    pub shooting: Vec<f64>,
    pub max_rel_gap: f64,
    pub counts_agree: bool,
}

impl RootComparison {
    pub fn new(matching: Vec<f64>, shooting: Vec<f64>) -> Self {
        let counts_agree = matching.len() == shooting.len();
        let max_rel_gap = if counts_agree {
            matching
                .iter()
                .zip(&shooting)
                .map(|(a, b)| (a - b).abs() / a.abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        Self {
            matching,
            shooting,
            max_rel_gap,
            counts_agree,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.counts_agree && self.max_rel_gap < tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> ModeIndex {
        ModeIndex::from_twice(1).unwrap()
    }

    #[test]
    fn indicial_powers() {
        let m32 = ModeIndex::from_twice(3).unwrap();
        let a = indicial_start(1.0, 0.0, half(), Pole::North, 1e-4).unwrap();
        assert_eq!(a[0], 1.0);
        assert!((a[1] - 0.5e-4).abs() < 1e-18);
        let b = indicial_start(1.0, 0.0, m32, Pole::North, 1e-4).unwrap();
        assert!((b[0] - 1e-4).abs() < 1e-18 && (b[1] - 0.25e-8).abs() < 1e-20);
        let s = indicial_start(1.0, 0.0, m32, Pole::South, 1e-4).unwrap();
        assert_eq!([s[1], s[0]], b);
    }

    #[test]
    fn linear_in_start_data() {
        let grid = ShootingGrid::new(ShootingConfig::new(1e-6, 4000, 10.0).unwrap());
        let run = |s: [f64; 2]| kernel(s, 2.3, 5.0, 0.5, &grid);
        let (a, b) = ([1.0, 0.3e-6], [0.2, -1.1e-6]);
        let (ya, yb) = (run(a), run(b));
        let yab = run([a[0] + b[0], a[1] + b[1]]);
        let y2 = run([2.0 * a[0], 2.0 * a[1]]);
        for k in 0..2 {
            assert_eq!(y2[k], 2.0 * ya[k]);
            assert!((yab[k] - ya[k] - yb[k]).abs() < 1e-12 * (ya[k].abs() + yb[k].abs()));
        }
    }

    #[test]
    fn free_sphere_lowest_root() {
        let cfg = ShootingConfig::for_problem(0.0, 4.0);
        let win = RootBracket::tight(0.1, 4.0).unwrap();
        for twice in [1, 3] {
            let mode = ModeIndex::from_twice(twice).unwrap();
            let roots = oracle_spectrum_for(0.0, mode, &win, &cfg).unwrap();
            let lowest = roots.iter().map(|r| r.e_tilde).filter(|e| *e > 0.0).fold(f64::INFINITY, f64::min);
            let want = mode.m() + 0.5;
            assert!((lowest - want).abs() < 1e-9 * want, "{lowest} vs {want}");
        }
    }

    #[test]
    fn empty_window() {
        let cfg = ShootingConfig::for_problem(10.0, 0.3);
        let win = RootBracket::tight(0.1, 0.3).unwrap();
        assert!(oracle_spectrum_for(10.0, half(), &win, &cfg).unwrap().is_empty());
    }

    #[test]
    fn roots_independent_of_pole_offset() {
        let wall = WallField::new(5.0).unwrap();
        let win = RootBracket::tight(0.1, 8.0).unwrap();
        let base = ShootingConfig::for_problem(5.0, 8.0);
        let roots: Vec<Vec<f64>> = [1e-5, 1e-6, 1e-7]
            .iter()
            .map(|&eps| {
                let cfg = ShootingConfig { epsilon_pole: eps, ..base };
                oracle_spectrum(&wall, half(), &win, &cfg).unwrap().iter().map(|r| r.e_tilde).collect()
            })
            .collect();
        for other in &roots[1..] {
            assert_eq!(other.len(), roots[0].len());
            for (a, b) in roots[0].iter().zip(other) {
                assert!((a - b).abs() < 1e-8 * a.abs(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn equator_vector_converges_at_fourth_order() {
        let m32 = ModeIndex::from_twice(3).unwrap();
        let at = |steps: usize| {
            let grid = ShootingGrid::new(ShootingConfig::new(1e-6, steps, 10.0).unwrap());
            let v = integrate_hemisphere(3.7, 5.0, m32, &grid, Pole::North).unwrap();
            let n = v[0].hypot(v[1]);
            [v[0] / n, v[1] / n]
        };
        let (a, b, c) = (at(1000), at(2000), at(4000));
        let d1 = (a[0] - b[0]).hypot(a[1] - b[1]);
        let d2 = (b[0] - c[0]).hypot(b[1] - c[1]);
        let order = (d1 / d2).log2();
        assert!(order > 3.7 && order < 4.3, "observed order {order}");
    }

    #[test]
    fn lowest_root_at_strong_wall() {
        let wall = WallField::new(50.0).unwrap();
        let win = RootBracket::tight(1e-3, 3.0).unwrap();
        let cfg = ShootingConfig::for_problem(50.0, 3.0);
        let roots = oracle_spectrum(&wall, half(), &win, &cfg).unwrap();
        let lowest = roots.iter().map(|r| r.e_tilde.abs()).fold(f64::INFINITY, f64::min);
        assert!((lowest - 0.5).abs() < 5e-3 * 0.5, "{lowest}");
    }

    #[test]
    fn config_validation() {
        assert!(ShootingConfig::new(1e-2, 5000, 10.0).is_err());
        assert!(ShootingConfig::new(1e-6, 999, 10.0).is_err());
    }
}
