//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::process::{Command, ExitCode};
use std::time::Instant;

use brane_spectrum::disk::{analytic_residual, disk_residual, disk_spectrum, DiskKind, DiskModel, DiskMode};
use brane_spectrum::geometry::{lichnerowicz_order, SphereGeometry};
use brane_spectrum::market::{evolve, AmplitudeSet};
use brane_spectrum::solver::{spectrum_solvers, SpectralRoot};
use brane_spectrum::specfun::{bessel_j, hyp2f1, ComplexScalar, HyperParams};
use brane_spectrum::sphere::{
    default_window, dispersion_table, equator_check, matching_value, solve_full_spectrum, Alpha, WallField,
};
use brane_spectrum::ModeIndex;
use num_complex::Complex64;

const DISPERSION_TOL: f64 = 5e-3;
const ORACLE_TOL: f64 = 1e-6;
const ZERO_MODE_GAP: f64 = 0.1;
const ORDER_MIN: f64 = 1.9;
const J11_TOL: f64 = 1e-8;
const CONTINUITY_TOL: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-10;
const EVOLVE_TOL: f64 = 1e-12;

const PHI0S: [f64; 4] = [1.0, 5.0, 10.0, 50.0];
const TWICE_MS: [i32; 2] = [1, 3];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn mode(t: i32) -> ModeIndex {
    ModeIndex::from_twice(t).unwrap()
}

type Spectra = BTreeMap<(u64, i32), (Vec<SpectralRoot>, Vec<SpectralRoot>)>;

fn spectra() -> Spectra {
    let solvers = spectrum_solvers();
    let (mat, sho) = (solvers.get("matching").unwrap(), solvers.get("shooting").unwrap());
    let mut out = BTreeMap::new();
    for phi0 in PHI0S {
        let wall = WallField::new(phi0).unwrap();
        let win = default_window(&wall).unwrap();
        for t in TWICE_MS {
            let a = mat.roots(&wall, mode(t), &win).unwrap();
            let b = sho.roots(&wall, mode(t), &win).unwrap();
            out.insert((phi0.to_bits(), t), (a, b));
        }
    }
    out
}

fn dispersion() -> Verdict {
    let geom = SphereGeometry::unit();
    let wall = WallField::new(50.0).unwrap();
    let rows = dispersion_table(&wall, &geom, &[mode(1), mode(3), mode(5)], Alpha::Plus).unwrap();
    let worst = rows.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max);
    let sweep: Vec<f64> = [10.0, 20.0, 30.0, 40.0, 50.0]
        .iter()
        .map(|&p| {
            let w = WallField::new(p).unwrap();
            dispersion_table(&w, &geom, &[mode(1)], Alpha::Plus).unwrap()[0].deviation.abs()
        })
        .collect();
    let monotone = sweep.windows(2).all(|w| w[1] < w[0]);
    verdict(
        worst < DISPERSION_TOL && monotone,
        format!(
            "max ||E|r/m - 1| at Phi0=50 = {worst:.3e} (< {DISPERSION_TOL:e}); m=1/2 deviations Phi0=10..50: {}",
            sweep.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(" > ")
        ),
    )
}

fn oracle(sp: &Spectra) -> Verdict {
    let mut worst = 0.0f64;
    let mut total = 0;
    let mut bad = Vec::new();
    for ((bits, t), (a, b)) in sp {
        let phi0 = f64::from_bits(*bits);
        if a.len() != b.len() || a.is_empty() {
            bad.push(format!("count Phi0={phi0} 2m={t}: {} vs {}", a.len(), b.len()));
            continue;
        }
        for (x, y) in a.iter().zip(b) {
            let gap = (x.e_tilde - y.e_tilde).abs() / x.e_tilde.abs();
            worst = worst.max(gap);
            if x.alpha != y.alpha {
                bad.push(format!("alpha at E~={}", x.e_tilde));
            }
        }
        total += a.len();
    }
    verdict(
        bad.is_empty() && worst < ORACLE_TOL,
        format!("{total} roots over 8 cells, max relative gap {worst:.3e} (< {ORACLE_TOL:e}) {}", bad.join("; ")),
    )
}

fn zero_modes(sp: &Spectra) -> Verdict {
    let lowest = sp
        .values()
        .flat_map(|(a, b)| a.iter().chain(b))
        .map(|r| r.e_tilde.abs())
        .fold(f64::INFINITY, f64::min);
    let mut g_gap = f64::INFINITY;
    for phi0 in PHI0S {
        let wall = WallField::new(phi0).unwrap();
        for t in TWICE_MS {
            let g = matching_value(0.0, &wall, mode(t)).unwrap();
            g_gap = g_gap.min((g.abs() - 1.0).abs());
        }
    }
    verdict(
        lowest > ZERO_MODE_GAP && g_gap > 1e-6,
        format!("lowest |E~| found = {lowest:.4} (> {ZERO_MODE_GAP}); min ||g(0)| - 1| = {g_gap:.3e}"),
    )
}

fn curvature() -> Verdict {
    let exact = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .all(|&r| SphereGeometry::new(r).unwrap().ricci_trace() == 2.0 / (r * r));
    let spinor = |t: f64| {
        (
            ComplexScalar::new(t.sin() * t.cos().exp(), 0.3 * t.cos()),
            ComplexScalar::new(t.cos() * t.sin().powi(2), -t.sin()),
        )
    };
    let mut min_order = f64::INFINITY;
    for (t, r) in [(1, 1.0), (3, 2.0), (-1, 0.7)] {
        let g = SphereGeometry::new(r).unwrap();
        let (_, _, order) = lichnerowicz_order(&g, mode(t), spinor, 400, 0.05, 0.2).unwrap();
        min_order = min_order.min(order);
    }
    verdict(
        exact && min_order >= ORDER_MIN,
        format!("ricci = 2/r^2 exact: {exact}; Lichnerowicz defect order {min_order:.3} (>= {ORDER_MIN})"),
    )
}

/// `J_1` by its power series, independent of the library's Bessel code.
fn j1_series(x: f64) -> f64 {
    let mut term = x / 2.0;
    let mut sum = term;
    for k in 1..60 {
        term *= -(x * x / 4.0) / (k as f64 * (k as f64 + 1.0));
        sum += term;
    }
    sum
}

fn j11_by_bisection() -> f64 {
    let (mut lo, mut hi) = (3.0, 4.5);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if j1_series(lo).signum() == j1_series(mid).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn disk() -> Verdict {
    let mut min_order = f64::INFINITY;
    for (phi, n) in [(0.0, 0u32), (1.5, 1), (3.0, 2)] {
        let model = DiskModel::with_lower_dirichlet(1.0, phi).unwrap();
        for m in disk_spectrum(&model, n, 2).unwrap() {
            if m.kind == DiskKind::Threshold {
                continue;
            }
            let a = disk_residual(&model, &m, 200).unwrap();
            let b = disk_residual(&model, &m, 400).unwrap();
            min_order = min_order.min((a / b).log2());
        }
    }
    let mut threshold_exact = true;
    for (phi, n) in [(0.0, 0u32), (2.0, 0), (2.0, 3)] {
        let model = DiskModel::with_lower_dirichlet(1.0, phi).unwrap();
        let m = DiskMode::new(n, 0, phi, phi).unwrap();
        for r in [0.1, 0.5, 1.0] {
            threshold_exact &= analytic_residual(&model, &m, r).unwrap() == [0.0, 0.0];
        }
    }
    let free = DiskModel::with_lower_dirichlet(1.0, 0.0).unwrap();
    let first = disk_spectrum(&free, 0, 1)
        .unwrap()
        .into_iter()
        .find(|m| m.kind == DiskKind::Oscillatory && m.energy > 0.0)
        .unwrap();
    let j11 = j11_by_bisection();
    let err = (first.energy - j11).abs();
    verdict(
        min_order >= ORDER_MIN && threshold_exact && err < J11_TOL,
        format!(
            "residual order {min_order:.3} (>= {ORDER_MIN}); E=Phi exact: {threshold_exact}; E_1 = {:.12} vs j_11 = {j11:.12} (|diff| {err:.1e})",
            first.energy
        ),
    )
}

fn equator() -> Verdict {
    let mut worst_jump = 0.0f64;
    let mut worst_dual = 0.0f64;
    let mut n = 0;
    for phi0 in [1.0, 5.0, 10.0] {
        let wall = WallField::new(phi0).unwrap();
        let win = default_window(&wall).unwrap();
        for t in [1, 3, 5, -1] {
            for sol in solve_full_spectrum(&wall, mode(t), &SphereGeometry::unit(), &win).unwrap() {
                let c = equator_check(&sol, &wall).unwrap();
                worst_jump = worst_jump.max(c.xi_jump()).max(c.eta_jump());
                let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
                worst_dual = worst_dual
                    .max(rel(c.bare_xi1, c.bare_eta2))
                    .max(rel(c.bare_eta1, c.bare_xi2));
                n += 1;
            }
        }
    }
    verdict(
        worst_jump < CONTINUITY_TOL && worst_dual <= 4.0 * f64::EPSILON,
        format!("{n} eigenfunctions: max relative jump {worst_jump:.2e} (< {CONTINUITY_TOL:e}); duality defect {worst_dual:.1e}"),
    )
}

fn kernel() -> Verdict {
    let log = hyp2f1(&HyperParams::real(1.0, 1.0, 2.0), 0.5).unwrap();
    let log_err = (log - Complex64::new(2.0 * LN_2, 0.0)).norm();
    let mut contiguous = 0.0f64;
    for ar in [-2.5, -0.3, 0.5, 1.7, 3.2] {
        for ai in [0.0, 1.3, -2.1] {
            for c in [1.7, 2.5, 4.0] {
                for z in [0.0, 0.1, 0.3, 0.5] {
                    let a = Complex64::new(ar, ai);
                    let b = Complex64::new(1.1 - ar, -ai);
                    let f = |cc: f64| hyp2f1(&HyperParams::new(a, b, cc), z).unwrap();
                    let (fm, f0, fp) = (f(c - 1.0), f(c), f(c + 1.0));
                    let t1 = fm * (c * (c - 1.0) * (z - 1.0));
                    let t2 = f0 * (c * ((c - 1.0) - (2.0 * c - a - b - 1.0) * z));
                    let t3 = fp * ((c - a) * (c - b) * z);
                    let scale = (t1.norm() + t2.norm() + t3.norm()).max(1e-300);
                    contiguous = contiguous.max((t1 + t2 + t3).norm() / scale);
                }
            }
        }
    }
    let mut recurrence = 0.0f64;
    for n in 1..=12u32 {
        for x in [0.3, 1.0, 2.5, 7.0, 15.0, 30.0] {
            let (jm, j0, jp) = (bessel_j(n - 1, x).unwrap(), bessel_j(n, x).unwrap(), bessel_j(n + 1, x).unwrap());
            let rhs = 2.0 * n as f64 / x * j0;
            let scale = jm.abs().max(jp.abs()).max(rhs.abs());
            recurrence = recurrence.max((jm + jp - rhs).abs() / scale);
        }
    }
    verdict(
        log_err < KERNEL_TOL && contiguous < KERNEL_TOL && recurrence < KERNEL_TOL,
        format!("|2F1(1,1;2;1/2) - 2 ln 2| = {log_err:.1e}; contiguous {contiguous:.1e}; Bessel recurrence {recurrence:.1e}"),
    )
}

/// SplitMix64 for reproducible random amplitude sets.
struct Mix(u64);

impl Mix {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn evolution() -> Verdict {
    let mut rng = Mix(20_261_014);
    let (mut power, mut group) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let mut entries = BTreeMap::new();
        let mut spectrum = BTreeMap::new();
        while entries.len() < 5 {
            let t = 2 * (rng.next() * 20.0) as i32 - 19;
            let m = mode(t);
            entries.insert(m, Complex64::new(4.0 * rng.next() - 2.0, 4.0 * rng.next() - 2.0));
            spectrum.insert(m, 100.0 * rng.next() - 50.0);
        }
        let a = AmplitudeSet::new(entries, 0.0).unwrap();
        let (t1, t2) = (10.0 * rng.next(), 10.0 * rng.next());
        let b = evolve(&a, &spectrum, t1).unwrap();
        power = power.max((b.power() - a.power()).abs() / a.power());
        let two = evolve(&b, &spectrum, t2).unwrap();
        let one = evolve(&a, &spectrum, t1 + t2).unwrap();
        let scale = a.power().sqrt();
        for (x, y) in two.entries().values().zip(one.entries().values()) {
            group = group.max((x - y).norm() / scale);
        }
    }
    verdict(
        power < EVOLVE_TOL && group < EVOLVE_TOL,
        format!("200 random 5-mode sets: power drift {power:.1e}, group defect {group:.1e} (< {EVOLVE_TOL:e})"),
    )
}

fn run_cli(args: &[&str], dir: &std::path::Path) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_brane"))
        .args(args)
        .current_dir(dir)
        .env_remove("BRANE_OUT_DIR")
        .output()
        .expect("brane binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("s.toml"),
        "amplitudes = [[1, 1.0, 0.0], [-3, 0.25, -0.5], [5, 0.0, 0.3]]\n\n[scenario]\nsigma_int = 0.3\nsigma_ext_shock = 0.4\nrate = 1.5\ntrend = \"1/2\"\nmaturity = 2.0\nphi0 = 4.0\n",
    )
    .unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["geometry", "--r", "2", "--what", "ricci"],
        vec!["geometry", "--r", "1.5", "--what", "metric", "--theta", "0.7"],
        vec!["geometry", "--what", "zweibein", "--theta", "1.1"],
        vec!["geometry", "--what", "spin-connection", "--theta", "0.4"],
        vec!["geometry", "--what", "determinant", "--theta", "2.0"],
        vec!["fun", "hyp2f1", "--a", "1.5", "--a-im", "2", "--b", "1.5", "--b-im", "-2", "--c", "2.5"],
        vec!["fun", "bessel-j", "--order", "3", "--x", "7.5"],
        vec!["spectrum", "--phi0", "5", "--m", "3/2"],
        vec!["spectrum", "--phi0", "5", "--m", "-1/2", "--method", "shooting"],
        vec!["dispersion", "--phi0", "10"],
        vec!["disk", "--phi0", "1.5", "--n", "1", "--count", "3"],
        vec!["scenario", "--file", "s.toml", "--t", "1.25", "--format", "csv"],
        vec!["scenario", "--file", "s.toml", "--t", "1.25"],
        vec!["verify", "--phi0", "5", "--m", "1/2,3/2"],
    ];
    let mut bad = Vec::new();
    for c in &commands {
        let (s1, o1) = run_cli(c, dir.path());
        let (s2, o2) = run_cli(c, dir.path());
        if s1 != 0 || s2 != 0 || o1 != o2 || o1.is_empty() {
            bad.push(c.join(" "));
        }
    }
    verdict(
        bad.is_empty(),
        format!("{} commands run twice, byte-identical output {}", commands.len(), bad.join("; ")),
    )
}

type Check<'a> = Box<dyn Fn() -> Verdict + 'a>;

fn main() -> ExitCode {
    let t0 = Instant::now();
    let sp = spectra();
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("dispersion law at Phi0 = 50", Box::new(dispersion)),
        ("matching and shooting agree", Box::new(|| oracle(&sp))),
        ("no sphere zero modes", Box::new(|| zero_modes(&sp))),
        ("curvature and Lichnerowicz identity", Box::new(curvature)),
        ("disk modes", Box::new(disk)),
        ("equator continuity and duality", Box::new(equator)),
        ("special-function kernel", Box::new(kernel)),
        ("time evolution", Box::new(evolution)),
        ("CLI determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "[{}] {}. {name}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail.trim_end(),
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        t0.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
