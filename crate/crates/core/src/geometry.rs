//! Round two-sphere: metric, frames, spin connection, curvature, and a
//! second-order finite-difference realisation of the wall Dirac operator
//! for a fixed azimuthal mode.
//!
//! Coordinates are `(theta, phi)` with `theta` measured from the north
//! pole. After the substitution `d/dphi -> i m` the operator acting on
//! `(psi1, psi2)` is
//!
//! ```text
//!        [  Phi                          d + cot/2 + m/sin ]
//! D  =   [                                                  ]  / r
//!        [ -(d + cot/2 - m/sin)         -Phi               ]
//! ```
//!
//! with `d = d/dtheta`. Its eigenvalues are the physical energies `E`; the
//! dimensionless values used by the matching solver are `E~ = r E`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mode::ModeIndex;
use crate::specfun::ComplexScalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereGeometry {
    radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metric {
    pub g_phiphi: f64,
    pub g_thetatheta: f64,
}

/// Frame components `e^a_mu`, rows `a = 1, 2`, columns `mu = phi, theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zweibein {
    pub e1_phi: f64,
    pub e1_theta: f64,
    pub e2_phi: f64,
    pub e2_theta: f64,
}

impl Zweibein {
    /// Inverse frame `e_a^mu`, or `None` where the frame degenerates.
    pub fn inverse(&self) -> Option<[[f64; 2]; 2]> {
        let det = self.e1_phi * self.e2_theta - self.e1_theta * self.e2_phi;
        if det.abs() < 1e-300 {
            return None;
        }
        Some([
            [self.e2_theta / det, -self.e1_theta / det],
            [-self.e2_phi / det, self.e1_phi / det],
        ])
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.e1_phi, self.e1_theta], [self.e2_phi, self.e2_theta]]
    }
}

/// Connection one-form components in the orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinConnection {
    pub r1_phi2: f64,
    pub r2_phi1: f64,
    pub r1_theta2: f64,
    pub r2_theta1: f64,
}

impl SphereGeometry {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: format!("radius must be positive and finite, got {radius}"),
            });
        }
        Ok(Self { radius })
    }

    pub fn unit() -> Self {
        Self { radius: 1.0 }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn metric(&self, theta: f64) -> Metric {
        let r2 = self.radius * self.radius;
        let s = theta.sin();
        Metric {
            g_phiphi: r2 * s * s,
            g_thetatheta: r2,
        }
    }

    pub fn zweibein(&self, theta: f64) -> Zweibein {
        Zweibein {
            e1_phi: self.radius * theta.sin(),
            e1_theta: 0.0,
            e2_phi: 0.0,
            e2_theta: self.radius,
        }
    }

    /// Scalar curvature trace `R^{ab}_{ab} = 2 / r^2`. Vanishes in the flat
    /// (large-radius) limit.
    pub fn ricci_trace(&self) -> f64 {
        2.0 / (self.radius * self.radius)
    }

    /// Determinant of the metric, `r^4 sin^2(theta)`.
    pub fn metric_determinant(&self, theta: f64) -> f64 {
        let m = self.metric(theta);
        m.g_phiphi * m.g_thetatheta
    }

    /// `r^2 sin^2(theta)`, the form sometimes quoted for `det g`.
    ///
    /// It coincides with [`metric_determinant`](Self::metric_determinant)
    /// only at `r = 1`; the two are kept apart rather than reconciled.
    pub fn determinant_quoted_form(&self, theta: f64) -> f64 {
        let s = theta.sin();
        self.radius * self.radius * s * s
    }
}

/// `(R^1_{phi 2}, R^2_{phi 1}, R^1_{theta 2}, R^2_{theta 1}) = (cos, -cos, 0, 0)`.
pub fn spin_connection(theta: f64) -> SpinConnection {
    let c = theta.cos();
    SpinConnection {
        r1_phi2: c,
        r2_phi1: -c,
        r1_theta2: 0.0,
        r2_theta1: 0.0,
    }
}

/// Uniform polar grid on `[eps, pi - eps]`, mirror-symmetric about the
/// equator, with the equator itself excluded (it sits midway between the
/// two central points).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularGrid {
    theta: Vec<f64>,
    step: f64,
    equator_index: usize,
}

pub const DEFAULT_POLE_OFFSET: f64 = 1e-3;

impl AngularGrid {
    pub fn symmetric(n_points: usize, pole_offset: f64) -> Result<Self> {
        if n_points < 4 || n_points % 2 == 1 {
            return Err(Error::InvalidParameter {
                name: "n_points",
                reason: format!(
                    "{n_points}: need an even count >= 4 so the equator is not a grid point"
                ),
            });
        }
        if !(pole_offset > 0.0 && pole_offset < PI / 4.0) {
            return Err(Error::InvalidParameter {
                name: "pole_offset",
                reason: format!("{pole_offset} outside (0, pi/4)"),
            });
        }
        let step = (PI - 2.0 * pole_offset) / (n_points - 1) as f64;
        let half = n_points / 2;
        let mut theta: Vec<f64> = (0..half).map(|i| pole_offset + step * i as f64).collect();
        let north = theta.clone();
        theta.extend(north.iter().rev().map(|t| PI - t));
        Ok(Self {
            theta,
            step,
            equator_index: half,
        })
    }

    pub fn with_points(n_points: usize) -> Result<Self> {
        Self::symmetric(n_points, DEFAULT_POLE_OFFSET)
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Index of the first point south of the equator.
    pub fn equator_index(&self) -> usize {
        self.equator_index
    }

    /// `(north, south)` index ranges.
    pub fn hemispheres(&self) -> [std::ops::Range<usize>; 2] {
        [0..self.equator_index, self.equator_index..self.theta.len()]
    }
}

/// Two-component spinor sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinorSamples {
    pub psi1: Vec<ComplexScalar>,
    pub psi2: Vec<ComplexScalar>,
}

impl SpinorSamples {
    pub fn zeros(n: usize) -> Self {
        Self {
            psi1: vec![ComplexScalar::new(0.0, 0.0); n],
            psi2: vec![ComplexScalar::new(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.psi1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi1.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.psi1
            .iter()
            .chain(&self.psi2)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            psi1: self.psi1.iter().map(|z| z * k).collect(),
            psi2: self.psi2.iter().map(|z| z * k).collect(),
        }
    }

    /// `self - k * other`.
    pub fn sub_scaled(&self, other: &Self, k: f64) -> Self {
        Self {
            psi1: self.psi1.iter().zip(&other.psi1).map(|(a, b)| a - b * k).collect(),
            psi2: self.psi2.iter().zip(&other.psi2).map(|(a, b)| a - b * k).collect(),
        }
    }

    /// Max-abs over the samples whose index satisfies `keep`.
    pub fn max_abs_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        (0..self.len())
            .filter(|&i| keep(i))
            .map(|i| self.psi1[i].norm().max(self.psi2[i].norm()))
            .fold(0.0, f64::max)
    }
}

/// A scalar field profile `Phi(theta)` entering the operator diagonal.
pub trait ScalarField: Sync {
    fn value(&self, theta: f64) -> f64;
}

/// Constant field; `UniformField(0.0)` is the free operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformField(pub f64);

impl ScalarField for UniformField {
    fn value(&self, _theta: f64) -> f64 {
        self.0
    }
}

fn check_samples(samples: &SpinorSamples, grid: &AngularGrid) -> Result<()> {
    if samples.psi1.len() != grid.len() || samples.psi2.len() != grid.len() {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: format!(
                "sample lengths ({}, {}) do not match grid size {}",
                samples.psi1.len(),
                samples.psi2.len(),
                grid.len()
            ),
        });
    }
    Ok(())
}

/// First derivative on a uniform segment: central in the interior,
/// one-sided second-order at both ends.
fn segment_derivative(f: &[ComplexScalar], h: f64) -> Vec<ComplexScalar> {
    let n = f.len();
    let inv = 1.0 / (2.0 * h);
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv
            } else if i == n - 1 {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv
            } else {
                (f[i + 1] - f[i - 1]) * inv
            }
        })
        .collect()
}

/// Second derivative on a uniform segment: three-point in the interior,
/// one-sided four-point at the ends.
fn segment_second_derivative(f: &[ComplexScalar], h: f64) -> Vec<ComplexScalar> {
    let n = f.len();
    let inv = 1.0 / (h * h);
    (0..n)
        .map(|i| {
            if i == 0 {
                (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv
            } else if i == n - 1 {
                (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv
            } else {
                (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv
            }
        })
        .collect()
}

/// Derivative of each hemisphere separately; the wall makes the solution
/// kinked across the equator, so no stencil straddles it.
fn split_derivative(
    f: &[ComplexScalar],
    grid: &AngularGrid,
    op: fn(&[ComplexScalar], f64) -> Vec<ComplexScalar>,
) -> Vec<ComplexScalar> {
    let mut out = Vec::with_capacity(f.len());
    for range in grid.hemispheres() {
        out.extend(op(&f[range], grid.step()));
    }
    out
}

/// Apply the wall Dirac operator (physical units, eigenvalue `E`) to
/// sampled spinors for the azimuthal mode `m`.
pub fn dirac_apply(
    geom: &SphereGeometry,
    field: &dyn ScalarField,
    mode: ModeIndex,
    samples: &SpinorSamples,
    grid: &AngularGrid,
) -> Result<SpinorSamples> {
    if grid.len() < 5 {
        return Err(Error::GridTooCoarse {
            n_points: grid.len(),
            required: 5,
        });
    }
    check_samples(samples, grid)?;
    let m = mode.m();
    let d1 = split_derivative(&samples.psi1, grid, segment_derivative);
    let d2 = split_derivative(&samples.psi2, grid, segment_derivative);
    let inv_r = 1.0 / geom.radius();
    let mut out = SpinorSamples::zeros(grid.len());
    for (i, &t) in grid.theta().iter().enumerate() {
        let (s, c) = t.sin_cos();
        let half_cot = 0.5 * c / s;
        let phi = field.value(t);
        let (p1, p2) = (samples.psi1[i], samples.psi2[i]);
        out.psi1[i] = (p1 * phi + d2[i] + p2 * (half_cot + m / s)) * inv_r;
        out.psi2[i] = (-(d1[i] + p1 * (half_cot - m / s)) - p2 * phi) * inv_r;
    }
    Ok(out)
}

/// Covariant spinor Laplacian for mode `m`, component-wise
/// `(1/r^2) [d^2 + cot d - (m -/+ cos/2)^2 / sin^2]`, where the spin
/// connection shifts `m` by `-cos/2` on the upper and `+cos/2` on the
/// lower component.
pub fn spinor_laplacian(
    geom: &SphereGeometry,
    mode: ModeIndex,
    samples: &SpinorSamples,
    grid: &AngularGrid,
) -> Result<SpinorSamples> {
    if grid.len() < 8 {
        return Err(Error::GridTooCoarse {
            n_points: grid.len(),
            required: 8,
        });
    }
    check_samples(samples, grid)?;
    let m = mode.m();
    let inv_r2 = 1.0 / (geom.radius() * geom.radius());
    let mut out = SpinorSamples::zeros(grid.len());
    for (comp, shift) in [(0usize, -0.5), (1usize, 0.5)] {
        let f = if comp == 0 { &samples.psi1 } else { &samples.psi2 };
        let d1 = split_derivative(f, grid, segment_derivative);
        let d2 = split_derivative(f, grid, segment_second_derivative);
        let dst = if comp == 0 { &mut out.psi1 } else { &mut out.psi2 };
        for (i, &t) in grid.theta().iter().enumerate() {
            let (s, c) = t.sin_cos();
            let mm = m + shift * c;
            dst[i] = (d2[i] + d1[i] * (c / s) - f[i] * (mm * mm / (s * s))) * inv_r2;
        }
    }
    Ok(out)
}

/// `D^2 psi + lap psi - (R/4) psi` for the free operator; vanishes in
/// the continuum limit.
pub fn lichnerowicz_defect(
    geom: &SphereGeometry,
    mode: ModeIndex,
    samples: &SpinorSamples,
    grid: &AngularGrid,
) -> Result<SpinorSamples> {
    let free = UniformField(0.0);
    let d = dirac_apply(geom, &free, mode, samples, grid)?;
    let dd = dirac_apply(geom, &free, mode, &d, grid)?;
    let lap = spinor_laplacian(geom, mode, samples, grid)?;
    Ok(dd.sub_scaled(&lap, -1.0).sub_scaled(samples, 0.25 * geom.ricci_trace()))
}

/// Weighted discrete L2 norm of [`lichnerowicz_defect`] on the grids `n`
/// and `2n`, and the observed order `log2(e_n / e_2n)`. The weight is a
/// `sin^2` taper on each hemisphere that vanishes `margin` away from the
/// grid ends and the equator, where one-sided stencils act.
pub fn lichnerowicz_order(
    geom: &SphereGeometry,
    mode: ModeIndex,
    spinor: impl Fn(f64) -> (ComplexScalar, ComplexScalar),
    n: usize,
    pole_offset: f64,
    margin: f64,
) -> Result<(f64, f64, f64)> {
    let mut errs = [0.0; 2];
    for (slot, pts) in [n, 2 * n].into_iter().enumerate() {
        let grid = AngularGrid::symmetric(pts, pole_offset)?;
        let mut s = SpinorSamples::zeros(grid.len());
        for (i, &t) in grid.theta().iter().enumerate() {
            (s.psi1[i], s.psi2[i]) = spinor(t);
        }
        let defect = lichnerowicz_defect(geom, mode, &s, &grid)?;
        let (a, b) = (pole_offset + margin, FRAC_PI_2 - margin);
        let sum: f64 = grid
            .theta()
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let u = t.min(PI - t);
                let w = if u > a && u < b { (PI * (u - a) / (b - a)).sin().powi(2) } else { 0.0 };
                w * (defect.psi1[i].norm_sqr() + defect.psi2[i].norm_sqr())
            })
            .sum();
        errs[slot] = (sum * grid.step()).sqrt();
    }
    Ok((errs[0], errs[1], (errs[0] / errs[1]).log2()))
}

/// `pi / 2`, re-exported for callers that build hemisphere-aware samples.
pub const EQUATOR: f64 = FRAC_PI_2;
