//! Name-keyed registries of interchangeable algorithms, and the sphere
//! spectrum solvers registered in them.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::SphereGeometry;
use crate::mode::ModeIndex;
use crate::shooting::{oracle_spectrum, ShootingConfig};
use crate::specfun::RootBracket;
use crate::sphere::{solve_full_spectrum, Alpha, WallField};

pub trait Named {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
}

/// Variants of `T` registered under their names, iterated in name order.
pub struct Registry<T: ?Sized + Named> {
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn register(&mut self, item: Arc<T>) {
        self.entries.insert(item.name(), item);
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries.get(name).cloned().ok_or_else(|| {
            invalid(
                "method",
                format!("unknown variant '{name}'; registered: {}", self.names().join(", ")),
            )
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

/// One signed eigenvalue `E~ = r E` and its parity class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRoot {
    pub e_tilde: f64,
    pub alpha: Alpha,
}

/// A method producing the signed spectrum with `|E~|` in a window.
pub trait SpectrumSolver: Named + Send + Sync {
    fn roots(&self, wall: &WallField, mode: ModeIndex, window: &RootBracket) -> Result<Vec<SpectralRoot>>;
}

/// Hypergeometric matching at the equator.
#[derive(Debug, Clone, Copy, Default)]
pub struct MatchingSolver;

impl Named for MatchingSolver {
    fn name(&self) -> &'static str {
        "matching"
    }
    fn summary(&self) -> &'static str {
        "roots of the hypergeometric matching condition"
    }
}

impl SpectrumSolver for MatchingSolver {
    fn roots(&self, wall: &WallField, mode: ModeIndex, window: &RootBracket) -> Result<Vec<SpectralRoot>> {
        Ok(solve_full_spectrum(wall, mode, &SphereGeometry::unit(), window)?
            .into_iter()
            .map(|s| SpectralRoot {
                e_tilde: s.e_tilde,
                alpha: s.alpha,
            })
            .collect())
    }
}

/// RK4 shooting from both poles; `config = None` sizes the step count to
/// the problem.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShootingSolver {
    pub config: Option<ShootingConfig>,
}

impl ShootingSolver {
    pub fn config_for(&self, wall: &WallField, window: &RootBracket) -> ShootingConfig {
        self.config
            .unwrap_or_else(|| ShootingConfig::for_problem(wall.phi0(), window.hi))
    }
}

impl Named for ShootingSolver {
    fn name(&self) -> &'static str {
        "shooting"
    }
    fn summary(&self) -> &'static str {
        "zeros of the pole-to-equator shooting determinant"
    }
}

impl SpectrumSolver for ShootingSolver {
    fn roots(&self, wall: &WallField, mode: ModeIndex, window: &RootBracket) -> Result<Vec<SpectralRoot>> {
        let cfg = self.config_for(wall, window);
        Ok(oracle_spectrum(wall, mode, window, &cfg)?
            .into_iter()
            .map(|r| SpectralRoot {
                e_tilde: r.e_tilde,
                alpha: r.alpha,
            })
            .collect())
    }
}

pub fn spectrum_solvers() -> Registry<dyn SpectrumSolver> {
    let mut r: Registry<dyn SpectrumSolver> = Registry::default();
    r.register(Arc::new(MatchingSolver));
    r.register(Arc::new(ShootingSolver::default()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = spectrum_solvers();
        assert_eq!(r.names(), vec!["matching", "shooting"]);
        assert_eq!(r.get("shooting").unwrap().name(), "shooting");
        assert!(r.get("spectral").is_err());
    }

    #[test]
    fn registered_solvers_agree() {
        let wall = WallField::new(5.0).unwrap();
        let win = RootBracket::tight(1e-3, 8.0).unwrap();
        let mode = ModeIndex::from_twice(1).unwrap();
        let r = spectrum_solvers();
        let a = r.get("matching").unwrap().roots(&wall, mode, &win).unwrap();
        let b = r.get("shooting").unwrap().roots(&wall, mode, &win).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.alpha, y.alpha);
            assert!((x.e_tilde - y.e_tilde).abs() < 1e-8 * x.e_tilde.abs());
        }
    }
}
