//! Spectrum of the wall Dirac operator on the sphere by hypergeometric
//! matching at the equator.
//!
//! With `z = cos^2(theta/2)` and `psi1 = P1 xi`, `psi2 = P2 eta` the
//! component equations become
//!
//! ```text
//!    z xi'      + (m+1/2) xi  = (E~ + Phi) eta
//!  -(1-z) eta'  + (m+1/2) eta = (E~ - Phi) xi
//! ```
//!
//! so on each hemisphere `xi` and `eta` are Gauss functions with
//! `a, b = m + 1/2 +- sqrt(E~^2 - Phi0^2)` and `c = m + 3/2` resp. `m + 1/2`.
//! The series in `z` is regular at the south pole (`z = 0`), the series in
//! `1 - z` at the north pole. Writing `F1 = 2F1(a,b;m+1/2;1/2)`,
//! `F3 = 2F1(a,b;m+3/2;1/2)` and `nu = F3/F1`, the allowed energies are the
//! roots of
//!
//! ```text
//!   g(E~) = (nu F1' + F3') / (4 Phi0 F3) = alpha,   alpha = +-1,
//! ```
//!
//! which depends on `E~` only through `E~^2`. The sign of the eigenvalue
//! follows from the first-order equations at the equator:
//! `(E~ - Phi0) F3 + alpha (m+1/2) F1 = 0`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{AngularGrid, ScalarField, SphereGeometry, SpinorSamples};
use crate::mode::ModeIndex;
use crate::specfun::{find_roots_par, hyp2f1, hyp2f1_dz, ComplexScalar, HyperParams, RootBracket};

/// Scan density of the root search, in samples per unit `E~`.
pub const SCAN_DENSITY: f64 = 400.0;

/// Bound on `|g(E~) - alpha|` at a returned root.
pub const ROOT_CERTIFICATE_TOL: f64 = 1e-9;

/// Bound on imaginary parts that must vanish for conjugate parameters.
pub const REALITY_TOL: f64 = 1e-12;

const NU_POLE_TOL: f64 = 1e-13;
const SIGN_RELATION_TOL: f64 = 1e-8;

/// Step profile `+Phi0` on the northern hemisphere, `-Phi0` on the southern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WallField {
    phi0: f64,
}

impl WallField {
    pub fn new(phi0: f64) -> Result<Self> {
        if !(phi0.is_finite() && phi0 > 0.0) {
            return Err(invalid("phi0", format!("wall magnitude must be positive, got {phi0}")));
        }
        Ok(Self { phi0 })
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }
}

impl ScalarField for WallField {
    fn value(&self, theta: f64) -> f64 {
        if theta < FRAC_PI_2 {
            self.phi0
        } else if theta > FRAC_PI_2 {
            -self.phi0
        } else {
            0.0
        }
    }
}

/// Parity label of a root of the matching condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Alpha {
    Plus,
    Minus,
}

impl Alpha {
    pub fn value(self) -> f64 {
        match self {
            Alpha::Plus => 1.0,
            Alpha::Minus => -1.0,
        }
    }

    pub fn both() -> [Alpha; 2] {
        [Alpha::Plus, Alpha::Minus]
    }
}

impl From<Alpha> for i8 {
    fn from(a: Alpha) -> i8 {
        match a {
            Alpha::Plus => 1,
            Alpha::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Alpha {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Alpha::Plus),
            -1 => Ok(Alpha::Minus),
            _ => Err(invalid("alpha", format!("{v} is not +1 or -1"))),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alpha::Plus => "+1",
            Alpha::Minus => "-1",
        })
    }
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" | "plus" => Ok(Alpha::Plus),
            "-1" | "-" | "minus" => Ok(Alpha::Minus),
            other => Err(invalid("alpha", format!("'{other}' is not +1 or -1"))),
        }
    }
}

/// Which lower parameter: `m + 1/2` or `m + 3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CChoice {
    Lower,
    Upper,
}

fn require_positive(mode: ModeIndex) -> Result<()> {
    if mode.is_positive() {
        Ok(())
    } else {
        Err(invalid("m", format!("{mode}: the matching functions are defined for m > 0")))
    }
}

/// `sqrt(E~^2 - Phi0^2)`, imaginary below the gap.
fn gap_root(e_tilde: f64, phi0: f64) -> ComplexScalar {
    let e = e_tilde.abs();
    let d = (e - phi0) * (e + phi0);
    if d >= 0.0 {
        ComplexScalar::new(d.sqrt(), 0.0)
    } else {
        ComplexScalar::new(0.0, (-d).sqrt())
    }
}

pub fn hyper_params(e_tilde: f64, wall: &WallField, mode: ModeIndex, c: CChoice) -> Result<HyperParams> {
    require_positive(mode)?;
    if !e_tilde.is_finite() {
        return Err(invalid("e_tilde", format!("non-finite value {e_tilde}")));
    }
    let c0 = mode.m() + 0.5;
    let s = gap_root(e_tilde, wall.phi0());
    let c = match c {
        CChoice::Lower => c0,
        CChoice::Upper => c0 + 1.0,
    };
    Ok(HyperParams::new(c0 + s, c0 - s, c))
}

fn real_part(z: ComplexScalar, context: &'static str) -> Result<f64> {
    if z.im.abs() > REALITY_TOL * z.norm() {
        return Err(Error::ImaginaryResidue {
            residue: z.im.abs() / z.norm(),
            context,
        });
    }
    Ok(z.re)
}

/// Gauss functions and their z-derivatives at `z = 1/2`.
#[derive(Debug, Clone, Copy)]
struct EquatorValues {
    f1: f64,
    f3: f64,
    f1p: f64,
    f3p: f64,
}

fn equator_values(e_tilde: f64, wall: &WallField, mode: ModeIndex) -> Result<EquatorValues> {
    let lo = hyper_params(e_tilde, wall, mode, CChoice::Lower)?;
    let up = hyper_params(e_tilde, wall, mode, CChoice::Upper)?;
    Ok(EquatorValues {
        f1: real_part(hyp2f1(&lo, 0.5)?, "F(m+1/2)")?,
        f3: real_part(hyp2f1(&up, 0.5)?, "F(m+3/2)")?,
        f1p: real_part(hyp2f1_dz(&lo, 0.5)?, "F'(m+1/2)")?,
        f3p: real_part(hyp2f1_dz(&up, 0.5)?, "F'(m+3/2)")?,
    })
}

/// Same values with the derivatives taken from contiguous relations, at
/// half the cost. With `a + b = 2 c0` and `(c0 - a)(c0 - b) = Phi0^2 - E~^2`
/// at `z = 1/2`:
/// `F3' = 2 c0 (F1 - F3)` and `F1' = 2 (c0 F1 + (Phi0^2 - E~^2) F3 / c0)`.
fn equator_values_contiguous(e_tilde: f64, wall: &WallField, mode: ModeIndex) -> Result<EquatorValues> {
    let lo = hyper_params(e_tilde, wall, mode, CChoice::Lower)?;
    let up = hyper_params(e_tilde, wall, mode, CChoice::Upper)?;
    let f1 = real_part(hyp2f1(&lo, 0.5)?, "F(m+1/2)")?;
    let f3 = real_part(hyp2f1(&up, 0.5)?, "F(m+3/2)")?;
    let c0 = lo.c;
    let e = e_tilde.abs();
    let gap = (wall.phi0() - e) * (wall.phi0() + e);
    Ok(EquatorValues {
        f1,
        f3,
        f1p: 2.0 * (c0 * f1 + gap * f3 / c0),
        f3p: 2.0 * c0 * (f1 - f3),
    })
}

fn nu_from(v: &EquatorValues, e_tilde: f64, wall: &WallField, mode: ModeIndex) -> Result<f64> {
    if v.f1.abs() < NU_POLE_TOL {
        let p = hyper_params(e_tilde, wall, mode, CChoice::Lower)?;
        return Err(Error::NuPole {
            value: v.f1,
            a: p.a.to_string(),
            c: p.c,
        });
    }
    Ok(v.f3 / v.f1)
}

fn g_from(v: &EquatorValues, nu: f64, phi0: f64) -> f64 {
    (nu * v.f1p + v.f3p) / (4.0 * phi0 * v.f3)
}

/// `nu = F(m+3/2; 1/2) / F(m+1/2; 1/2)`.
pub fn nu_ratio(e_tilde: f64, wall: &WallField, mode: ModeIndex) -> Result<f64> {
    let v = equator_values(e_tilde, wall, mode)?;
    nu_from(&v, e_tilde, wall, mode)
}

/// The matching function `g(E~)`; allowed energies solve `g = alpha`.
pub fn matching_value(e_tilde: f64, wall: &WallField, mode: ModeIndex) -> Result<f64> {
    let v = equator_values(e_tilde, wall, mode)?;
    let nu = nu_from(&v, e_tilde, wall, mode)?;
    let g = g_from(&v, nu, wall.phi0());
    if !g.is_finite() {
        return Err(Error::NonFinite { x: e_tilde, value: g });
    }
    Ok(g)
}

/// `(F3 F1' + F1 F3' - 4 alpha Phi0 F1 F3) / (F1^2 + F3^2)`: vanishes
/// exactly where `g = alpha` but has no poles, so it is what the scan uses.
/// Roots found with it are certified against [`matching_value`], which
/// takes the derivatives from their own series.
pub fn matching_residual(e_tilde: f64, wall: &WallField, mode: ModeIndex, alpha: Alpha) -> Result<f64> {
    let v = equator_values_contiguous(e_tilde, wall, mode)?;
    let num = v.f3 * v.f1p + v.f1 * v.f3p - 4.0 * alpha.value() * wall.phi0() * v.f1 * v.f3;
    Ok(num / (v.f1 * v.f1 + v.f3 * v.f3))
}

/// `|E~| in (1e-3, min(Phi0 + 10, 3 Phi0))`.
pub fn default_window(wall: &WallField) -> Result<RootBracket> {
    let hi = (wall.phi0() + 10.0).min(3.0 * wall.phi0());
    RootBracket::tight(1e-3, hi)
}

pub fn scan_points_for(window: &RootBracket) -> usize {
    (SCAN_DENSITY * window.width()).ceil() as usize + 1
}

/// Sampled eigenfunction on an angular grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSamples {
    pub theta: Vec<f64>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub spinor: SpinorSamples,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSolution {
    /// Signed dimensionless eigenvalue `r E`.
    pub e_tilde: f64,
    /// Physical energy `E = E~ / r`.
    pub energy: f64,
    pub radius: f64,
    pub alpha: Alpha,
    pub mode: ModeIndex,
    pub nu: f64,
    /// `|g(|E~|) - alpha|` at the refined root.
    pub certificate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<EigenSamples>,
}

impl EigenSolution {
    pub fn abs_e_tilde(&self) -> f64 {
        self.e_tilde.abs()
    }
}

/// Certify a positive root of `g = alpha` and attach its sign.
fn certify(root: f64, wall: &WallField, mode: ModeIndex, alpha: Alpha) -> Result<(f64, f64, f64)> {
    let v = equator_values(root, wall, mode)?;
    let nu = nu_from(&v, root, wall, mode)?;
    let g = g_from(&v, nu, wall.phi0());
    let cert = (g - alpha.value()).abs();
    if !(cert <= ROOT_CERTIFICATE_TOL) {
        return Err(Error::RootCertificate {
            e_tilde: root,
            residual: cert,
        });
    }
    let c0 = mode.m() + 0.5;
    let sign_residual = |lam: f64| ((lam - wall.phi0()) * v.f3 + alpha.value() * c0 * v.f1).abs();
    let (plus, minus) = (sign_residual(root), sign_residual(-root));
    let signed = if plus <= minus { root } else { -root };
    let scale = (root + wall.phi0()) * v.f3.abs() + c0 * v.f1.abs();
    if plus.min(minus) > SIGN_RELATION_TOL * scale {
        return Err(Error::RootCertificate {
            e_tilde: root,
            residual: plus.min(minus) / scale,
        });
    }
    Ok((signed, nu, cert))
}

/// All roots of `g = alpha` with `|E~|` in `window`, ascending in `|E~|`.
///
/// Negative `m` is handled by reflection: the spectrum of `-m` is the
/// negated spectrum of `|m|`, with the two spinor components exchanged.
pub fn solve_spectrum(
    wall: &WallField,
    mode: ModeIndex,
    geom: &SphereGeometry,
    alpha: Alpha,
    window: &RootBracket,
) -> Result<Vec<EigenSolution>> {
    if window.lo <= 0.0 {
        return Err(invalid("window", format!("lower end {} must be positive (window is on |E~|)", window.lo)));
    }
    let base = mode.abs();
    let roots = find_roots_par(
        |e| matching_residual(e, wall, base, alpha).unwrap_or(f64::NAN),
        window,
        scan_points_for(window),
    )?;
    let flip = if mode.is_positive() { 1.0 } else { -1.0 };
    roots
        .into_iter()
        .map(|root| {
            let (signed, nu, certificate) = certify(root, wall, base, alpha)?;
            let e_tilde = flip * signed;
            Ok(EigenSolution {
                e_tilde,
                energy: e_tilde / geom.radius(),
                radius: geom.radius(),
                alpha,
                mode,
                nu,
                certificate,
                samples: None,
            })
        })
        .collect()
}

/// Both parity classes merged and sorted by signed `E~`.
pub fn solve_full_spectrum(
    wall: &WallField,
    mode: ModeIndex,
    geom: &SphereGeometry,
    window: &RootBracket,
) -> Result<Vec<EigenSolution>> {
    let mut all = solve_spectrum(wall, mode, geom, Alpha::Plus, window)?;
    all.extend(solve_spectrum(wall, mode, geom, Alpha::Minus, window)?);
    all.sort_by(|a, b| a.e_tilde.total_cmp(&b.e_tilde));
    Ok(all)
}

fn hyp_real(p: &HyperParams, z: f64) -> Result<f64> {
    real_part(hyp2f1(p, z)?, "eigenfunction branch")
}

/// Hemisphere branches for `m > 0`: `(xi, eta)` at `theta`.
fn branches(theta: f64, p1: &HyperParams, p3: &HyperParams, nu: f64, alpha: Alpha) -> Result<(f64, f64)> {
    let half = 0.5 * theta;
    if theta >= FRAC_PI_2 {
        let z = half.cos().powi(2);
        Ok((hyp_real(p3, z)?, -alpha.value() * nu * hyp_real(p1, z)?))
    } else {
        let w = half.sin().powi(2);
        Ok((nu * hyp_real(p1, w)?, -alpha.value() * hyp_real(p3, w)?))
    }
}

/// Attach samples of `xi`, `eta` and the spinor, normalised to
/// `max |psi| = 1`.
pub fn eigenfunction(sol: &EigenSolution, wall: &WallField, grid: &AngularGrid) -> Result<EigenSolution> {
    let base = sol.mode.abs();
    let root = sol.abs_e_tilde();
    let g = matching_value(root, wall, base)?;
    if !((g - sol.alpha.value()).abs() <= ROOT_CERTIFICATE_TOL) {
        return Err(Error::RootCertificate {
            e_tilde: sol.e_tilde,
            residual: (g - sol.alpha.value()).abs(),
        });
    }
    let p1 = hyper_params(root, wall, base, CChoice::Lower)?;
    let p3 = hyper_params(root, wall, base, CChoice::Upper)?;
    let m = base.m();
    let n = grid.len();
    let (mut xi, mut eta) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut spinor = SpinorSamples::zeros(n);
    for (i, &t) in grid.theta().iter().enumerate() {
        let (x_b, e_b) = branches(t, &p1, &p3, sol.nu, sol.alpha)?;
        // 1 - cos = 2 sin^2(t/2), 1 + cos = 2 cos^2(t/2)
        let one_minus = 2.0 * (0.5 * t).sin().powi(2);
        let one_plus = 2.0 * (0.5 * t).cos().powi(2);
        let pre1 = one_minus.powf(0.5 * m - 0.25) * one_plus.powf(0.5 * m + 0.25);
        let pre2 = one_minus.powf(0.5 * m + 0.25) * one_plus.powf(0.5 * m - 0.25);
        let (u1, u2) = (pre1 * x_b, pre2 * e_b);
        if sol.mode.is_positive() {
            xi.push(x_b);
            eta.push(e_b);
            spinor.psi1[i] = ComplexScalar::new(u1, 0.0);
            spinor.psi2[i] = ComplexScalar::new(u2, 0.0);
        } else {
            xi.push(e_b);
            eta.push(x_b);
            spinor.psi1[i] = ComplexScalar::new(u2, 0.0);
            spinor.psi2[i] = ComplexScalar::new(u1, 0.0);
        }
    }
    let scale = spinor.max_abs();
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::NonFinite { x: sol.e_tilde, value: scale });
    }
    let spinor = spinor.scaled(1.0 / scale);
    xi.iter_mut().chain(eta.iter_mut()).for_each(|v| *v /= scale);
    let mut out = sol.clone();
    out.samples = Some(EigenSamples {
        theta: grid.theta().to_vec(),
        xi,
        eta,
        spinor,
    });
    Ok(out)
}

/// Unnormalised `(xi, eta)` of a solution at `z = cos^2(theta/2)` in
/// `[0, 1]`, on the branch regular at the nearer pole.
pub fn components_at(sol: &EigenSolution, wall: &WallField, z: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::OutOfRange {
            what: "z",
            value: z,
            range: "[0, 1]",
        });
    }
    let base = sol.mode.abs();
    let root = sol.abs_e_tilde();
    let p1 = hyper_params(root, wall, base, CChoice::Lower)?;
    let p3 = hyper_params(root, wall, base, CChoice::Upper)?;
    let theta = 2.0 * z.sqrt().acos();
    let (x, e) = branches(theta, &p1, &p3, sol.nu, sol.alpha)?;
    Ok(if sol.mode.is_positive() { (x, e) } else { (e, x) })
}

/// Branch values at `z = 1/2` for a positive-`m` root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquatorCheck {
    pub xi_south: f64,
    pub xi_north: f64,
    pub eta_south: f64,
    pub eta_north: f64,
    /// Bare Gauss factors: `xi1 = F(m+3/2; z)`, `eta1 = F(m+1/2; z)` on the
    /// south branch, `xi2 = F(m+1/2; 1-z)`, `eta2 = F(m+3/2; 1-z)` on the
    /// north branch.
    pub bare_xi1: f64,
    pub bare_eta1: f64,
    pub bare_xi2: f64,
    pub bare_eta2: f64,
}

impl EquatorCheck {
    pub fn xi_jump(&self) -> f64 {
        (self.xi_south - self.xi_north).abs() / self.xi_south.abs().max(self.xi_north.abs())
    }

    pub fn eta_jump(&self) -> f64 {
        (self.eta_south - self.eta_north).abs() / self.eta_south.abs().max(self.eta_north.abs())
    }
}

pub fn equator_check(sol: &EigenSolution, wall: &WallField) -> Result<EquatorCheck> {
    let base = sol.mode.abs();
    let root = sol.abs_e_tilde();
    let p1 = hyper_params(root, wall, base, CChoice::Lower)?;
    let p3 = hyper_params(root, wall, base, CChoice::Upper)?;
    let z = 0.5;
    let w = 1.0 - z;
    let a = sol.alpha.value();
    let (xi1, eta1) = (hyp_real(&p3, z)?, hyp_real(&p1, z)?);
    let (xi2, eta2) = (hyp_real(&p1, w)?, hyp_real(&p3, w)?);
    Ok(EquatorCheck {
        xi_south: xi1,
        xi_north: sol.nu * xi2,
        eta_south: -a * sol.nu * eta1,
        eta_north: -a * eta2,
        bare_xi1: xi1,
        bare_eta1: eta1,
        bare_xi2: xi2,
        bare_eta2: eta2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionRow {
    pub mode: ModeIndex,
    pub e_tilde: f64,
    pub energy: f64,
    /// `|E| r / |m| - 1`.
    pub deviation: f64,
}

/// Lowest-`|E~|` root per mode in the default window.
pub fn dispersion_table(
    wall: &WallField,
    geom: &SphereGeometry,
    modes: &[ModeIndex],
    alpha: Alpha,
) -> Result<Vec<DispersionRow>> {
    let window = default_window(wall)?;
    modes
        .iter()
        .map(|&mode| {
            let sols = solve_spectrum(wall, mode, geom, alpha, &window)?;
            let low = sols.first().ok_or_else(|| {
                Error::Unsupported(format!("no alpha = {alpha} root for m = {mode} in the default window"))
            })?;
            Ok(DispersionRow {
                mode,
                e_tilde: low.e_tilde,
                energy: low.energy,
                deviation: low.energy.abs() * geom.radius() / mode.m().abs() - 1.0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dirac_apply;

    fn half() -> ModeIndex {
        ModeIndex::from_twice(1).unwrap()
    }

    #[test]
    fn parameters_at_the_money() {
        let w = WallField::new(3.0).unwrap();
        let p = hyper_params(3.0, &w, half(), CChoice::Lower).unwrap();
        assert_eq!((p.a.re, p.a.im, p.b.re, p.b.im), (1.0, 0.0, 1.0, 0.0));
        let w1 = WallField::new(1.0).unwrap();
        let q = hyper_params(0.0, &w1, half(), CChoice::Upper).unwrap();
        assert_eq!((q.a.re, q.a.im, q.b.re, q.b.im, q.c), (1.0, 1.0, 1.0, -1.0, 2.0));
        assert!(q.is_conjugate_pair());
    }

    #[test]
    fn terminating_parameters_give_unit_nu() {
        let w = WallField::new(2.0).unwrap();
        let m = ModeIndex::from_twice(3).unwrap();
        let e = (4.0f64 + 4.0).sqrt();
        let p = hyper_params(e, &w, m, CChoice::Lower).unwrap();
        assert!(p.b.norm() < 1e-15);
        assert!((nu_ratio(e, &w, m).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matching_is_even() {
        let w = WallField::new(10.0).unwrap();
        for i in 0..40 {
            let e = 0.37 * i as f64 + 0.01;
            assert_eq!(matching_value(e, &w, half()).unwrap(), matching_value(-e, &w, half()).unwrap());
        }
    }

    #[test]
    fn negative_mode_is_rejected_by_matching() {
        let w = WallField::new(1.0).unwrap();
        assert!(matching_value(0.5, &w, ModeIndex::from_twice(-1).unwrap()).is_err());
        assert!(WallField::new(0.0).is_err());
    }

    #[test]
    fn lowest_state_sits_below_zero_near_minus_m() {
        let w = WallField::new(10.0).unwrap();
        let g = SphereGeometry::unit();
        let sols = solve_spectrum(&w, half(), &g, Alpha::Plus, &default_window(&w).unwrap()).unwrap();
        let low = &sols[0];
        assert!((low.e_tilde + 0.501_266_070_5).abs() < 1e-8, "{}", low.e_tilde);
        assert!(low.certificate <= ROOT_CERTIFICATE_TOL);
    }

    #[test]
    fn reflection_negates_the_spectrum() {
        let w = WallField::new(5.0).unwrap();
        let g = SphereGeometry::unit();
        let win = RootBracket::tight(1e-3, 6.0).unwrap();
        let p = solve_full_spectrum(&w, half(), &g, &win).unwrap();
        let n = solve_full_spectrum(&w, half().reflected(), &g, &win).unwrap();
        assert_eq!(p.len(), n.len());
        for (a, b) in p.iter().zip(n.iter().rev()) {
            assert_eq!(a.e_tilde, -b.e_tilde);
        }
    }

    #[test]
    fn eigenfunction_solves_the_discrete_operator() {
        let w = WallField::new(5.0).unwrap();
        let g = SphereGeometry::unit();
        for mode in [half(), half().reflected(), ModeIndex::from_twice(3).unwrap()] {
            let sol = solve_spectrum(&w, mode, &g, Alpha::Plus, &default_window(&w).unwrap()).unwrap()[0].clone();
            let mut res = Vec::new();
            for n in [400usize, 800] {
                let grid = AngularGrid::symmetric(n, 0.05).unwrap();
                let s = eigenfunction(&sol, &w, &grid).unwrap();
                let psi = &s.samples.as_ref().unwrap().spinor;
                let d = dirac_apply(&g, &w, mode, psi, &grid).unwrap();
                res.push(d.sub_scaled(psi, sol.energy).max_abs());
            }
            let order = (res[0] / res[1]).log2();
            assert!(order > 1.8, "m = {mode}: residuals {res:?}");
        }
    }

    #[test]
    fn equator_branches_agree() {
        let w = WallField::new(10.0).unwrap();
        let g = SphereGeometry::unit();
        let sol = solve_spectrum(&w, half(), &g, Alpha::Minus, &default_window(&w).unwrap()).unwrap()[0].clone();
        let c = equator_check(&sol, &w).unwrap();
        assert!(c.xi_jump() < 1e-12 && c.eta_jump() < 1e-12);
        assert_eq!(c.bare_xi1, c.bare_eta2);
        assert_eq!(c.bare_eta1, c.bare_xi2);
    }

    #[test]
    fn contiguous_derivatives_match_series() {
        let w = WallField::new(7.0).unwrap();
        for twice in [1, 3, 5] {
            let m = ModeIndex::from_twice(twice).unwrap();
            for e in [0.2, 3.0, 7.0, 9.5, 15.0] {
                let a = equator_values(e, &w, m).unwrap();
                let b = equator_values_contiguous(e, &w, m).unwrap();
                let scale = a.f1.abs() + a.f3.abs() + a.f1p.abs() + a.f3p.abs();
                assert!((a.f1p - b.f1p).abs() < 1e-12 * scale, "m={m} e={e}");
                assert!((a.f3p - b.f3p).abs() < 1e-12 * scale, "m={m} e={e}");
            }
        }
    }

    #[test]
    fn alpha_parsing() {
        assert_eq!("+1".parse::<Alpha>().unwrap(), Alpha::Plus);
        assert_eq!("-1".parse::<Alpha>().unwrap(), Alpha::Minus);
        assert!("0".parse::<Alpha>().is_err());
    }
}
