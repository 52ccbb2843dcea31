//! Flat disk analogue. In polar coordinates with `gamma = (tau3, i tau1,
//! i tau2)` the operator is
//!
//! ```text
//!        [ Phi                             e^{-i phi} (-d_r + (i/r) d_phi) ]
//!  D  =  [                                                                 ]
//!        [ e^{i phi} (d_r + (i/r) d_phi)   -Phi                            ]
//! ```
//!
//! For `psi = (e^{i n phi} f(r), e^{i(n+1) phi} g(r))` the eigenproblem
//! reduces to
//!
//! ```text
//!   Phi f - g' - (n+1) g / r = E f
//!   f' - n f / r - Phi g     = E g
//! ```
//!
//! Regular solutions are `f = J_n(kr) E+`, `g = -sgn(E) J_{n+1}(kr) E-`
//! above the gap and `f = I_n(kr) E+`, `g = I_{n+1}(kr) E-` below it, with
//! `E+- = sqrt|E +- Phi|`, `k = sqrt|E^2 - Phi^2|`. At `E = Phi` the lower
//! component vanishes and `f = r^n`.
//!
//! The gamma matrices here differ from the sphere's; the two modules
//! never share spinors.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::SpinorSamples;
use crate::mode::ModeIndex;
use crate::solver::{Named, Registry};
use crate::specfun::{bessel_i, bessel_j, find_roots, ComplexScalar, RootBracket, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskKind {
    Oscillatory,
    Evanescent,
    Threshold,
}

impl fmt::Display for DiskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiskKind::Oscillatory => "oscillatory",
            DiskKind::Evanescent => "evanescent",
            DiskKind::Threshold => "threshold",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskMode {
    pub n: u32,
    /// Radial index; 0 for the threshold mode.
    pub s: usize,
    pub energy: f64,
    pub k: f64,
    pub kind: DiskKind,
}

impl DiskMode {
    /// Build a mode of energy `energy` in a bulk field `phi >= 0`.
    pub fn new(n: u32, s: usize, energy: f64, phi: f64) -> Result<Self> {
        if !energy.is_finite() {
            return Err(invalid("energy", format!("non-finite value {energy}")));
        }
        let d = (energy.abs() - phi) * (energy.abs() + phi);
        let kind = if energy == phi {
            DiskKind::Threshold
        } else if d > 0.0 {
            DiskKind::Oscillatory
        } else if energy == -phi {
            return Err(Error::Unsupported(format!(
                "E = -Phi = {energy} has no regular solution with psi2 = 0"
            )));
        } else {
            DiskKind::Evanescent
        };
        Ok(Self {
            n,
            s,
            energy,
            k: d.abs().sqrt(),
            kind,
        })
    }
}

/// Rim boundary condition fixing the radial quantisation.
pub trait DiskBoundary: Named + Send + Sync {
    /// The first `count` allowed wavenumbers `k` for azimuthal index `n`.
    fn wavenumbers(&self, n: u32, count: usize, rim_radius: f64) -> Result<Vec<f64>>;
    /// Whether the `E = Phi` mode satisfies the condition.
    fn admits_threshold(&self) -> bool;
    /// Boundary residual of sampled rim values `(psi1(R), psi2(R))`.
    fn residual(&self, rim: [ComplexScalar; 2]) -> f64;
}

/// `psi2(R) = 0`: `J_{n+1}(kR) = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LowerDirichlet;

impl Named for LowerDirichlet {
    fn name(&self) -> &'static str {
        "lower-dirichlet"
    }
    fn summary(&self) -> &'static str {
        "lower spinor component vanishes on the rim"
    }
}

impl DiskBoundary for LowerDirichlet {
    fn wavenumbers(&self, n: u32, count: usize, rim_radius: f64) -> Result<Vec<f64>> {
        Ok(bessel_zeros(n + 1, count)?.into_iter().map(|j| j / rim_radius).collect())
    }

    fn admits_threshold(&self) -> bool {
        true
    }

    fn residual(&self, rim: [ComplexScalar; 2]) -> f64 {
        rim[1].norm()
    }
}

pub fn disk_boundaries() -> Registry<dyn DiskBoundary> {
    let mut r: Registry<dyn DiskBoundary> = Registry::default();
    r.register(Arc::new(LowerDirichlet));
    r
}

/// First `count` positive zeros of `J_order` below the supported argument
/// range.
pub fn bessel_zeros(order: u32, count: usize) -> Result<Vec<f64>> {
    if order > BESSEL_MAX_ORDER {
        return Err(Error::OutOfRange {
            what: "order",
            value: order as f64,
            range: "[0, 50]",
        });
    }
    // j_{v,1} > v, so the scan may start there (away from the zero at 0)
    let lo = (order as f64).max(0.5);
    let bracket = RootBracket::tight(lo, BESSEL_MAX_ARG)?;
    let points = ((BESSEL_MAX_ARG - lo) * 20.0).ceil() as usize + 1;
    let zeros = find_roots(|x| bessel_j(order, x).unwrap_or(f64::NAN), &bracket, points)?;
    if zeros.len() < count {
        return Err(Error::BesselZeros {
            found: zeros.len(),
            requested: count,
            limit: BESSEL_MAX_ARG,
        });
    }
    Ok(zeros.into_iter().take(count).collect())
}

#[derive(Clone)]
pub struct DiskModel {
    rim_radius: f64,
    phi0: f64,
    boundary: Arc<dyn DiskBoundary>,
}

impl fmt::Debug for DiskModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiskModel")
            .field("rim_radius", &self.rim_radius)
            .field("phi0", &self.phi0)
            .field("boundary", &self.boundary.name())
            .finish()
    }
}

impl DiskModel {
    pub fn new(rim_radius: f64, phi0: f64, boundary: Arc<dyn DiskBoundary>) -> Result<Self> {
        if !(rim_radius.is_finite() && rim_radius > 0.0) {
            return Err(invalid("rim_radius", format!("{rim_radius} must be positive")));
        }
        if !(phi0.is_finite() && phi0 >= 0.0) {
            return Err(invalid("phi0", format!("{phi0} must be non-negative")));
        }
        Ok(Self {
            rim_radius,
            phi0,
            boundary,
        })
    }

    pub fn with_lower_dirichlet(rim_radius: f64, phi0: f64) -> Result<Self> {
        Self::new(rim_radius, phi0, Arc::new(LowerDirichlet))
    }

    pub fn rim_radius(&self) -> f64 {
        self.rim_radius
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn boundary(&self) -> &dyn DiskBoundary {
        self.boundary.as_ref()
    }
}

/// Radial profiles `(f, g)` at `r`.
fn radial(mode: &DiskMode, phi: f64, r: f64) -> Result<(f64, f64)> {
    let e = mode.energy;
    let ep = (e + phi).abs().sqrt();
    let em = (e - phi).abs().sqrt();
    let x = mode.k * r;
    match mode.kind {
        DiskKind::Oscillatory => Ok((
            bessel_j(mode.n, x)? * ep,
            -e.signum() * bessel_j(mode.n + 1, x)? * em,
        )),
        DiskKind::Evanescent => Ok((bessel_i(mode.n, x)? * ep, bessel_i(mode.n + 1, x)? * em)),
        DiskKind::Threshold => {
            // sqrt(2 Phi) is E+ at E = Phi; at Phi = 0 the unit amplitude is kept
            let amp = if phi > 0.0 { (2.0 * phi).sqrt() } else { 1.0 };
            Ok((amp * r.powi(mode.n as i32), 0.0))
        }
    }
}

/// Spinor samples at radii `radial_points` and polar angle `angle`.
pub fn disk_solution(model: &DiskModel, mode: &DiskMode, radial_points: &[f64], angle: f64) -> Result<SpinorSamples> {
    let mut out = SpinorSamples::zeros(radial_points.len());
    let up = ComplexScalar::from_polar(1.0, mode.n as f64 * angle);
    let down = ComplexScalar::from_polar(1.0, (mode.n + 1) as f64 * angle);
    for (i, &r) in radial_points.iter().enumerate() {
        if !(0.0..=model.rim_radius() * (1.0 + 1e-12)).contains(&r) {
            return Err(Error::OutOfRange {
                what: "r",
                value: r,
                range: "[0, R]",
            });
        }
        let (f, g) = radial(mode, model.phi0(), r)?;
        out.psi1[i] = up * f;
        out.psi2[i] = down * g;
    }
    Ok(out)
}

/// Threshold mode (if the boundary admits it) followed by the first
/// `count` radial modes of each sign, ordered by `(s, E)`.
pub fn disk_spectrum(model: &DiskModel, n: u32, count: usize) -> Result<Vec<DiskMode>> {
    if count == 0 {
        return Err(invalid("count", "must be at least 1"));
    }
    let phi = model.phi0();
    let mut modes = Vec::new();
    if model.boundary().admits_threshold() {
        modes.push(DiskMode::new(n, 0, phi, phi)?);
    }
    for (i, k) in model.boundary().wavenumbers(n, count, model.rim_radius())?.into_iter().enumerate() {
        let e = k.hypot(phi);
        for energy in [-e, e] {
            let mut m = DiskMode::new(n, i + 1, energy, phi)?;
            m.k = k;
            modes.push(m);
        }
    }
    Ok(modes)
}

/// Boundary residual of a mode on the rim.
pub fn rim_residual(model: &DiskModel, mode: &DiskMode) -> Result<f64> {
    let s = disk_solution(model, mode, &[model.rim_radius()], 0.0)?;
    Ok(model.boundary().residual([s.psi1[0], s.psi2[0]]))
}

/// `E = m / r`, the flat-space chiral energy.
pub fn disk_energy(mode: ModeIndex, r: f64) -> Result<f64> {
    if !mode.is_positive() {
        return Err(invalid("m", format!("{mode} must be positive")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid("r", format!("{r} must be positive")));
    }
    Ok(mode.m() / r)
}

/// Residual of the reduced equations at `r > 0` with derivatives taken
/// analytically (`J_n' = n J_n / x - J_{n+1}`,
/// `J_{n+1}' = J_n - (n+1) J_{n+1} / x`, same for `I` with `+`).
pub fn analytic_residual(model: &DiskModel, mode: &DiskMode, r: f64) -> Result<[f64; 2]> {
    if !(r > 0.0) {
        return Err(invalid("r", format!("{r} must be positive")));
    }
    let phi = model.phi0();
    let e = mode.energy;
    let nn = mode.n as f64;
    let (f, g) = radial(mode, phi, r)?;
    let (fp, gp) = match mode.kind {
        DiskKind::Threshold => (if mode.n == 0 { 0.0 } else { nn * f / r }, 0.0),
        DiskKind::Oscillatory | DiskKind::Evanescent => {
            let x = mode.k * r;
            let ep = (e + phi).abs().sqrt();
            let em = (e - phi).abs().sqrt();
            let (jn, jn1, sign, gsign) = if mode.kind == DiskKind::Oscillatory {
                (bessel_j(mode.n, x)?, bessel_j(mode.n + 1, x)?, -1.0, -e.signum())
            } else {
                (bessel_i(mode.n, x)?, bessel_i(mode.n + 1, x)?, 1.0, 1.0)
            };
            let dn = nn * jn / x + sign * jn1;
            let dn1 = jn - (nn + 1.0) * jn1 / x;
            (mode.k * ep * dn, gsign * mode.k * em * dn1)
        }
    };
    Ok([
        phi * f - gp - (nn + 1.0) * g / r - e * f,
        fp - nn * f / r - phi * g - e * g,
    ])
}

/// Relative max-norm residual `|D psi - E psi| / |psi|` of the reduced
/// radial equations, second-order differences on `n_points` uniform radii
/// in `[R / n_points, R]` (the origin is skipped for the `1/r` terms).
pub fn disk_residual(model: &DiskModel, mode: &DiskMode, n_points: usize) -> Result<f64> {
    if n_points < 4 {
        return Err(Error::GridTooCoarse {
            n_points,
            required: 4,
        });
    }
    let h = model.rim_radius() / n_points as f64;
    let rs: Vec<f64> = (1..=n_points).map(|i| h * i as f64).collect();
    let phi = model.phi0();
    let mut f = Vec::with_capacity(n_points);
    let mut g = Vec::with_capacity(n_points);
    for &r in &rs {
        let (a, b) = radial(mode, phi, r)?;
        f.push(a);
        g.push(b);
    }
    let d = |v: &[f64], i: usize| -> f64 {
        let n = v.len();
        if i == 0 {
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        } else if i == n - 1 {
            (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        }
    };
    let nn = mode.n as f64;
    let e = mode.energy;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (i, &r) in rs.iter().enumerate() {
        let r1 = phi * f[i] - d(&g, i) - (nn + 1.0) * g[i] / r - e * f[i];
        let r2 = d(&f, i) - nn * f[i] / r - phi * g[i] - e * g[i];
        worst = worst.max(r1.abs()).max(r2.abs());
        scale = scale.max(f[i].abs()).max(g[i].abs());
    }
    Ok(worst / scale)
}
