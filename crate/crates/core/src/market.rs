//! Market reading of the wall model: volatilities, rate, trend and
//! maturity mapped onto model parameters, and the time evolution of the
//! mode amplitudes of the field `Psi(sigma_int, phi; t)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::SphereGeometry;
use crate::mode::ModeIndex;
use crate::specfun::RootBracket;
use crate::sphere::{components_at, default_window, solve_spectrum, Alpha, EigenSolution, WallField};

pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

/// Default number of `phi` samples in a field slice.
pub const DEFAULT_PHI_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketScenario {
    pub sigma_int: f64,
    pub sigma_ext_shock: f64,
    pub rate: f64,
    pub trend: ModeIndex,
    pub maturity: f64,
    pub phi0: f64,
}

impl MarketScenario {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be positive and finite, got {v}")))
            }
        };
        pos("sigma_int", self.sigma_int)?;
        if self.sigma_int > 1.0 {
            return Err(Error::OutOfRange {
                what: "sigma_int",
                value: self.sigma_int,
                range: "(0, 1]",
            });
        }
        if !(self.sigma_ext_shock.is_finite() && self.sigma_ext_shock >= 0.0) {
            return Err(invalid(
                "sigma_ext_shock",
                format!("must be non-negative, got {}", self.sigma_ext_shock),
            ));
        }
        pos("rate", self.rate)?;
        pos("maturity", self.maturity)?;
        pos("phi0", self.phi0)
    }

    pub fn trend_direction(&self) -> TrendDirection {
        if self.trend.is_positive() {
            TrendDirection::Up
        } else {
            TrendDirection::Down
        }
    }
}

/// Knobs of the mapping that are not market data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    /// `r0` in `r = r0 rho`.
    pub radius_scale: f64,
    /// Panic when `sigma_ext_shock > panic_ratio * sigma_int`.
    pub panic_ratio: f64,
    pub phi_samples: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            radius_scale: 1.0,
            panic_ratio: 1.0,
            phi_samples: DEFAULT_PHI_SAMPLES,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_scale.is_finite() && self.radius_scale > 0.0) {
            return Err(invalid("radius_scale", format!("must be positive, got {}", self.radius_scale)));
        }
        if !(self.panic_ratio.is_finite() && self.panic_ratio > 0.0) {
            return Err(invalid("panic_ratio", format!("must be positive, got {}", self.panic_ratio)));
        }
        if self.phi_samples < 2 {
            return Err(invalid("phi_samples", format!("need at least 2, got {}", self.phi_samples)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrendDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeLabel {
    Normal,
    Panic,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeLabel::Normal => "normal",
            RegimeLabel::Panic => "panic",
        })
    }
}

/// Electron mass `M = 1/sigma^2`.
pub fn mass_from_volatility(sigma: f64) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid("sigma", format!("volatility must be positive, got {sigma}")));
    }
    Ok(1.0 / (sigma * sigma))
}

pub fn classify_regime(scenario: &MarketScenario) -> RegimeLabel {
    classify_regime_with(scenario, 1.0)
}

pub fn classify_regime_with(scenario: &MarketScenario, panic_ratio: f64) -> RegimeLabel {
    if scenario.sigma_ext_shock > panic_ratio * scenario.sigma_int {
        RegimeLabel::Panic
    } else {
        RegimeLabel::Normal
    }
}

pub fn radius_from_rate(rate: f64, scale: f64) -> Result<f64> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(invalid("rate", format!("must be positive, got {rate}")));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(invalid("radius_scale", format!("must be positive, got {scale}")));
    }
    Ok(scale * rate)
}

/// Model-side quantities derived from a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub radius: f64,
    pub ricci: f64,
    pub z: f64,
    pub mass_internal: f64,
    /// `None` when the external shock is zero (infinite mass).
    pub mass_external: Option<f64>,
    pub regime: RegimeLabel,
    /// In the panic regime the external mass is negligible and the massless
    /// wall operator describes the dynamics.
    pub massless_limit: bool,
    pub trend: TrendDirection,
}

pub fn map_scenario(scenario: &MarketScenario, config: &ModelConfig) -> Result<ModelParameters> {
    scenario.validate()?;
    config.validate()?;
    let radius = radius_from_rate(scenario.rate, config.radius_scale)?;
    let geom = SphereGeometry::new(radius)?;
    let regime = classify_regime_with(scenario, config.panic_ratio);
    let mass_external = if scenario.sigma_ext_shock > 0.0 {
        Some(mass_from_volatility(scenario.sigma_ext_shock)?)
    } else {
        None
    };
    Ok(ModelParameters {
        radius,
        ricci: geom.ricci_trace(),
        z: scenario.sigma_int,
        mass_internal: mass_from_volatility(scenario.sigma_int)?,
        mass_external,
        regime,
        massless_limit: regime == RegimeLabel::Panic,
        trend: scenario.trend_direction(),
    })
}

/// Mode amplitudes `A_m` at time `time`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSet {
    entries: BTreeMap<ModeIndex, Complex64>,
    time: f64,
}

impl AmplitudeSet {
    pub fn new(entries: BTreeMap<ModeIndex, Complex64>, time: f64) -> Result<Self> {
        if !time.is_finite() {
            return Err(invalid("time", format!("must be finite, got {time}")));
        }
        if entries.values().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(invalid("amplitudes", "entries must be finite"));
        }
        let set = Self { entries, time };
        if !(set.power() > 0.0) {
            return Err(invalid("amplitudes", "total power must be positive"));
        }
        Ok(set)
    }

    pub fn from_triples(triples: &[AmplitudeTriple], time: f64) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for t in triples {
            let m = ModeIndex::from_twice(t.0)?;
            if entries.insert(m, Complex64::new(t.1, t.2)).is_some() {
                return Err(invalid("amplitudes", format!("mode {m} listed twice")));
            }
        }
        Self::new(entries, time)
    }

    pub fn entries(&self) -> &BTreeMap<ModeIndex, Complex64> {
        &self.entries
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeIndex> + '_ {
        self.entries.keys().copied()
    }

    pub fn power(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn triples(&self) -> Vec<AmplitudeTriple> {
        self.entries
            .iter()
            .map(|(m, a)| AmplitudeTriple(m.twice_m(), a.re, a.im))
            .collect()
    }
}

/// `(2m, Re A, Im A)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTriple(pub i32, pub f64, pub f64);

/// Advance every amplitude by `dt`: `A_m -> A_m exp(-i E_m dt)`.
pub fn evolve(amps: &AmplitudeSet, spectrum: &BTreeMap<ModeIndex, f64>, dt: f64) -> Result<AmplitudeSet> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(invalid("t", format!("evolution time must be non-negative, got {dt}")));
    }
    let mut out = BTreeMap::new();
    for (&m, &a) in &amps.entries {
        let e = *spectrum.get(&m).ok_or(Error::MissingSpectrum { twice_m: m.twice_m() })?;
        out.insert(m, a * Complex64::from_polar(1.0, -e * dt));
    }
    Ok(AmplitudeSet {
        entries: out,
        time: amps.time + dt,
    })
}

/// Samples of `Psi(sigma_int, phi; t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSlice {
    pub z: f64,
    pub time: f64,
    pub phi: Vec<f64>,
    pub psi1: Vec<Complex64>,
    pub psi2: Vec<Complex64>,
}

impl FieldSlice {
    /// Trapezoid rule for `int_0^{2 pi} |Psi|^2 dphi` on a uniform periodic grid.
    pub fn power(&self) -> f64 {
        let n = self.phi.len() as f64;
        let s: f64 = self
            .psi1
            .iter()
            .zip(&self.psi2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum();
        s * 2.0 * PI / n
    }
}

/// `n` points `2 pi k / n`, `k = 0..n`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// `Psi = (2 pi)^{-1/2} sum_m e^{i m phi} (xi_m, eta_m) A_m(t)` at
/// `z = sigma_int`. `amps` are evolved from their own time to `t`.
pub fn assemble_field(
    scenario: &MarketScenario,
    solutions: &[EigenSolution],
    amps: &AmplitudeSet,
    phi_samples: &[f64],
    t: f64,
) -> Result<FieldSlice> {
    let z = scenario.sigma_int;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::OutOfRange {
            what: "sigma_int",
            value: z,
            range: "[0, 1]",
        });
    }
    let wall = WallField::new(scenario.phi0)?;
    let by_mode: BTreeMap<ModeIndex, &EigenSolution> = solutions.iter().map(|s| (s.mode, s)).collect();
    let spectrum = by_mode.iter().map(|(&m, s)| (m, s.energy)).collect();
    let now = evolve(amps, &spectrum, t - amps.time)?;
    let mut terms = Vec::with_capacity(now.entries.len());
    for (&m, &a) in &now.entries {
        let sol = by_mode[&m];
        let (xi, eta) = components_at(sol, &wall, z)?;
        terms.push((m.m(), xi * a, eta * a));
    }
    let norm = 1.0 / (2.0 * PI).sqrt();
    let mut psi1 = Vec::with_capacity(phi_samples.len());
    let mut psi2 = Vec::with_capacity(phi_samples.len());
    for &phi in phi_samples {
        let (mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &(m, c1, c2) in &terms {
            let w = Complex64::from_polar(norm, m * phi);
            s1 += w * c1;
            s2 += w * c2;
        }
        psi1.push(s1);
        psi2.push(s2);
    }
    Ok(FieldSlice {
        z,
        time: t,
        phi: phi_samples.to_vec(),
        psi1,
        psi2,
    })
}

/// Lowest-`|E~|` state of class `alpha = +1` for one mode.
pub fn ground_state(wall: &WallField, mode: ModeIndex, geom: &SphereGeometry) -> Result<EigenSolution> {
    let full = default_window(wall)?;
    let quick = RootBracket::tight(full.lo, full.hi.min(mode.abs().m() + 4.0))?;
    for win in [quick, full] {
        if let Some(s) = solve_spectrum(wall, mode, geom, Alpha::Plus, &win)?.into_iter().next() {
            return Ok(s);
        }
    }
    Err(Error::Unsupported(format!("no alpha = +1 root of mode {mode} in the default window")))
}

/// Parsed scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// Initial amplitudes; empty means `A_trend = 1`.
    #[serde(default)]
    pub amplitudes: Vec<AmplitudeTriple>,
    pub scenario: MarketScenario,
    #[serde(default)]
    pub model: ModelConfig,
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid("scenario", e.message().to_string()))
    }

    pub fn initial_amplitudes(&self) -> Result<AmplitudeSet> {
        if self.amplitudes.is_empty() {
            AmplitudeSet::from_triples(&[AmplitudeTriple(self.scenario.trend.twice_m(), 1.0, 0.0)], 0.0)
        } else {
            AmplitudeSet::from_triples(&self.amplitudes, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub twice_m: i32,
    pub alpha: Alpha,
    pub e_tilde: f64,
    pub energy: f64,
}

/// Full record of one scenario evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario: MarketScenario,
    pub model: ModelConfig,
    pub parameters: ModelParameters,
    pub spectrum: Vec<SpectrumEntry>,
    pub initial: Vec<AmplitudeTriple>,
    pub time: f64,
    pub beyond_maturity: bool,
    pub amplitudes: Vec<AmplitudeTriple>,
    pub power: f64,
    pub field: FieldSlice,
}

impl ScenarioReport {
    pub fn spectrum_map(&self) -> Result<BTreeMap<ModeIndex, f64>> {
        self.spectrum
            .iter()
            .map(|e| Ok((ModeIndex::from_twice(e.twice_m)?, e.energy)))
            .collect()
    }
}

fn report(
    file: &ScenarioFile,
    params: ModelParameters,
    solutions: &[EigenSolution],
    initial: &AmplitudeSet,
    now: &AmplitudeSet,
) -> Result<ScenarioReport> {
    let field = assemble_field(
        &file.scenario,
        solutions,
        now,
        &phi_grid(file.model.phi_samples),
        now.time(),
    )?;
    Ok(ScenarioReport {
        schema_version: SCENARIO_SCHEMA_VERSION,
        scenario: file.scenario,
        model: file.model,
        parameters: params,
        spectrum: solutions
            .iter()
            .map(|s| SpectrumEntry {
                twice_m: s.mode.twice_m(),
                alpha: s.alpha,
                e_tilde: s.e_tilde,
                energy: s.energy,
            })
            .collect(),
        initial: initial.triples(),
        time: now.time(),
        beyond_maturity: now.time() > file.scenario.maturity,
        amplitudes: now.triples(),
        power: now.power(),
        field,
    })
}

/// Solve the populated modes and evolve the initial amplitudes to `t`.
pub fn run_scenario(file: &ScenarioFile, t: f64) -> Result<ScenarioReport> {
    let params = map_scenario(&file.scenario, &file.model)?;
    let wall = WallField::new(file.scenario.phi0)?;
    let geom = SphereGeometry::new(params.radius)?;
    let initial = file.initial_amplitudes()?;
    let solutions = initial
        .modes()
        .map(|m| ground_state(&wall, m, &geom))
        .collect::<Result<Vec<_>>>()?;
    let spectrum = solutions.iter().map(|s| (s.mode, s.energy)).collect();
    let now = evolve(&initial, &spectrum, t)?;
    report(file, params, &solutions, &initial, &now)
}

/// Continue a previous report to time `t` from its stored amplitudes and
/// spectrum, without re-solving the modes.
pub fn resume_scenario(prev: &ScenarioReport, t: f64) -> Result<ScenarioReport> {
    if !(t >= prev.time) {
        return Err(invalid("t", format!("resume time {t} precedes the stored time {}", prev.time)));
    }
    let file = ScenarioFile {
        amplitudes: prev.initial.clone(),
        scenario: prev.scenario,
        model: prev.model,
    };
    let params = map_scenario(&file.scenario, &file.model)?;
    let wall = WallField::new(file.scenario.phi0)?;
    let geom = SphereGeometry::new(params.radius)?;
    let initial = AmplitudeSet::from_triples(&prev.initial, 0.0)?;
    let stored = AmplitudeSet::from_triples(&prev.amplitudes, prev.time)?;
    let solutions = rebuild_solutions(prev, &wall, &geom)?;
    let now = evolve(&stored, &prev.spectrum_map()?, t - prev.time)?;
    report(&file, params, &solutions, &initial, &now)
}

fn rebuild_solutions(prev: &ScenarioReport, wall: &WallField, geom: &SphereGeometry) -> Result<Vec<EigenSolution>> {
    prev.spectrum
        .iter()
        .map(|e| {
            let mode = ModeIndex::from_twice(e.twice_m)?;
            let sol = ground_state(wall, mode, geom)?;
            if (sol.e_tilde - e.e_tilde).abs() > 1e-9 * e.e_tilde.abs().max(1.0) {
                return Err(invalid(
                    "resume",
                    format!("stored E~ = {} of mode {mode} disagrees with {}", e.e_tilde, sol.e_tilde),
                ));
            }
            Ok(EigenSolution {
                e_tilde: e.e_tilde,
                energy: e.energy,
                ..sol
            })
        })
        .collect()
}
