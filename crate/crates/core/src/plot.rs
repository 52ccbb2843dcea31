//! Static SVG 1.1 plots of result tables.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::output::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 2] = ["#1f5fa8", "#c0392b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Marked points `(m, E~)` with the line `E~ = m` for reference.
    Dispersion,
    /// `|psi1|` and `|psi2|` against `theta`.
    Wavefunction,
    /// `|Psi|^2` against `phi`.
    FieldSlice,
}

impl FromStr for PlotKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dispersion" => Ok(PlotKind::Dispersion),
            "wavefunction" => Ok(PlotKind::Wavefunction),
            "field-slice" => Ok(PlotKind::FieldSlice),
            _ => Err(invalid("plot", format!("unknown plot kind '{s}'"))),
        }
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: &[f64], ys: &[f64]) -> Self {
        let span = |v: &[f64]| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > 0.0 {
                let pad = 0.05 * (hi - lo);
                (lo - pad, hi + pad)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let (x0, x1) = span(xs);
        let (y0, y1) = span(ys);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, f: &Frame, xlabel: &str, ylabel: &str) {
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1"><line x1="{l}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{l}" y1="{b}" x2="{l}" y2="{t}"/></g>"#
    );
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11">"#);
    for i in 0..=4 {
        let s = i as f64 / 4.0;
        let xv = f.x0 + s * (f.x1 - f.x0);
        let yv = f.y0 + s * (f.y1 - f.y0);
        let (xp, yp) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{xp:.2}" y1="{b}" x2="{xp:.2}" y2="{:.2}" stroke="black"/><text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            b + 4.0,
            b + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{yp:.2}" x2="{l}" y2="{yp:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            l - 4.0,
            l - 6.0,
            yp + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(ylabel)
    );
    let _ = writeln!(out, "</g>");
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-2..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn polyline(out: &mut String, f: &Frame, xs: &[f64], ys: &[f64], color: &str, label: &str) {
    let pts: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| format!("{:.3},{:.3}", f.px(x), f.py(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
        pts.join(" "),
        escape(label)
    );
}

fn legend(out: &mut String, labels: &[&str]) {
    for (i, l) in labels.iter().enumerate() {
        let y = MARGIN + 14.0 * i as f64;
        let x = WIDTH - MARGIN - 90.0;
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{}" width="10" height="3" fill="{}"/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            y - 3.0,
            COLORS[i % COLORS.len()],
            x + 14.0,
            y + 1.0,
            escape(l)
        );
    }
}

/// Render `table` as an SVG document.
pub fn emit_plot(table: &Table, kind: PlotKind) -> Result<String> {
    if table.is_empty() {
        return Err(invalid("plot", format!("table {} has no rows", table.name)));
    }
    let mut out = String::new();
    match kind {
        PlotKind::Dispersion => {
            let xs = table.column("m")?;
            let ys = table.column("e_tilde")?;
            let all: Vec<f64> = ys.iter().chain(&xs).copied().collect();
            let f = Frame::fit(&xs, &all);
            header(&mut out, "Lowest eigenvalue per mode");
            axes(&mut out, &f, "m", "E~ = r E");
            let (a, b) = (f.x0, f.x1);
            let _ = writeln!(
                out,
                r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#888888" stroke-dasharray="4 3"/>"##,
                f.px(a),
                f.py(a),
                f.px(b),
                f.py(b)
            );
            for (&x, &y) in xs.iter().zip(&ys) {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{}"/>"#,
                    f.px(x),
                    f.py(y),
                    COLORS[0]
                );
            }
        }
        PlotKind::Wavefunction => {
            let th = table.column("theta")?;
            let p1 = table.column("abs_psi1")?;
            let p2 = table.column("abs_psi2")?;
            let all: Vec<f64> = p1.iter().chain(&p2).copied().collect();
            let xs: Vec<f64> = th.iter().chain(&th).copied().collect();
            let f = Frame::fit(&xs, &all);
            header(&mut out, "Eigenfunction magnitude");
            axes(&mut out, &f, "theta", "|psi|");
            polyline(&mut out, &f, &th, &p1, COLORS[0], "|psi1|");
            polyline(&mut out, &f, &th, &p2, COLORS[1], "|psi2|");
            legend(&mut out, &["|psi1|", "|psi2|"]);
        }
        PlotKind::FieldSlice => {
            let phi = table.column("phi")?;
            let d = table.column("density")?;
            let f = Frame::fit(&phi, &d);
            header(&mut out, "Field density at fixed time");
            axes(&mut out, &f, "phi", "|Psi|^2");
            polyline(&mut out, &f, &phi, &d, COLORS[0], "|Psi|^2");
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
