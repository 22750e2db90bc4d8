//! Static shock-pattern figure in the `(xi1, xi2)` plane.

use std::fmt::Write as _;

use caretflow::geometry::{ConicCurve, RegimeReport, ShockLine};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
/// Rays per conic polyline.
const CONIC_SAMPLES: usize = 2048;

struct View {
    x0: f64,
    y1: f64,
    scale: f64,
    height: f64,
}

impl View {
    fn new(report: &RegimeReport) -> Self {
        let (mut lo, mut hi) = ([0.0f64, 0.0f64], [0.0f64, 0.0f64]);
        for (_, p) in report.points.iter() {
            for a in 0..2 {
                // Far intersection points would flatten the figure.
                let v = p[a].clamp(-3.0, 3.0);
                lo[a] = lo[a].min(v);
                hi[a] = hi[a].max(v);
            }
        }
        let pad = 0.15 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(0.5);
        let (x0, x1, y0, y1) = (lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad);
        let scale = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
        Self { x0, y1, scale, height: (y1 - y0) * scale + 2.0 * MARGIN }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (MARGIN + (p[0] - self.x0) * self.scale, MARGIN + (self.y1 - p[1]) * self.scale)
    }

    /// Length in xi units that certainly leaves the view.
    fn reach(&self) -> f64 {
        4.0 * (WIDTH + self.height) / self.scale
    }
}

fn line(s: &mut String, v: &View, id: &str, a: [f64; 2], b: [f64; 2], style: &str) {
    let (x1, y1) = v.map(a);
    let (x2, y2) = v.map(b);
    let _ = writeln!(s, r#"<line id="{id}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#);
}

fn conic(s: &mut String, v: &View, id: &str, c: &ConicCurve, style: &str) {
    let _ = writeln!(s, r#"<g id="{id}" {style}>"#);
    let mut run: Vec<(f64, f64)> = Vec::new();
    let flush = |s: &mut String, run: &mut Vec<(f64, f64)>| {
        if run.len() > 1 {
            let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            let _ = writeln!(s, r#"<polyline fill="none" points="{}"/>"#, pts.join(" "));
        }
        run.clear();
    };
    for k in 0..=CONIC_SAMPLES {
        let th = std::f64::consts::TAU * k as f64 / CONIC_SAMPLES as f64;
        match c.point_at(th) {
            Ok(p) if p[0].abs() < 50.0 && p[1].abs() < 50.0 => run.push(v.map(p)),
            _ => flush(s, &mut run),
        }
    }
    flush(s, &mut run);
    s.push_str("</g>\n");
}

fn shock(s: &mut String, v: &View, id: &str, l: &ShockLine, style: &str) {
    let nn = l.n1 * l.n1 + l.n2 * l.n2;
    if nn == 0.0 {
        return;
    }
    let nl = nn.sqrt();
    let foot = [-l.d * l.n1 / nn, -l.d * l.n2 / nn];
    let dir = [-l.n2 / nl, l.n1 / nl];
    let r = v.reach();
    line(s, v, id, [foot[0] - r * dir[0], foot[1] - r * dir[1]], [foot[0] + r * dir[0], foot[1] + r * dir[1]], style);
}

/// Deterministic SVG of the shock pattern: axes, wing and symmetry sides,
/// Mach cones, shock lines and the labelled points.
pub fn geometry_svg(report: &RegimeReport) -> String {
    let v = View::new(report);
    let h = v.height;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{h:.0}" viewBox="0 0 {WIDTH:.0} {h:.0}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r#"<defs><clipPath id="frame"><rect x="{MARGIN}" y="{MARGIN}" width="{:.3}" height="{:.3}"/></clipPath></defs>"#, WIDTH - 2.0 * MARGIN, h - 2.0 * MARGIN);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let inp = &report.inputs;
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="24">{:?}: q = {:.4}, alpha = {:.4}, sigma = {:.4}, beta = {:.4}</text>"#,
        report.regime, inp.q_inf, inp.alpha, inp.sigma, inp.beta
    );
    s.push_str("<g clip-path=\"url(#frame)\">\n");
    let r = v.reach();
    let thin = r##"stroke="#888" stroke-width="0.8""##;
    line(&mut s, &v, "xi1-axis", [-r, 0.0], [r, 0.0], thin);
    line(&mut s, &v, "xi2-axis", [0.0, -r], [0.0, r], thin);
    let wing = [-inp.beta.sin(), inp.beta.cos()];
    line(&mut s, &v, "Gamma_wing", [0.0, 0.0], [r * wing[0], r * wing[1]], r##"stroke="black" stroke-width="3""##);
    if let Some(p2) = report.points.p2 {
        line(&mut s, &v, "Gamma_sym", [0.0, 0.0], p2, r##"stroke="black" stroke-width="3""##);
    }
    let curves = &report.curves;
    if let Some(c) = &curves.c_inf {
        conic(&mut s, &v, "C_inf", c, r##"stroke="#1f77b4" stroke-width="1.5""##);
    }
    if let Some(c) = &curves.c_sigma {
        conic(&mut s, &v, "C_sigma", c, r##"stroke="#2ca02c" stroke-width="1.5""##);
    }
    if let Some(c) = &curves.c_sigma_prime {
        conic(&mut s, &v, "C_sigma_prime", c, r##"stroke="#9467bd" stroke-width="1.5" stroke-dasharray="6 3""##);
    }
    if let Some(l) = &report.shocks.s_ob {
        shock(&mut s, &v, "S_ob", l, r##"stroke="#d62728" stroke-width="2""##);
    }
    if let Some(l) = &report.shocks.s_r {
        shock(&mut s, &v, "S_R", l, r##"stroke="#ff7f0e" stroke-width="2""##);
    }
    s.push_str("</g>\n");
    let (ox, oy) = v.map([0.0, 0.0]);
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">O</text>"#, ox + 5.0, oy + 15.0);
    for (name, p) in report.points.iter() {
        if p[0].abs() > 3.0 || p[1].abs() > 3.0 {
            continue;
        }
        let (x, y) = v.map(p);
        let _ = writeln!(s, r#"<circle id="{name}" cx="{x:.3}" cy="{y:.3}" r="3.5" fill="black"/>"#);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">{name}</text>"#, x + 6.0, y - 6.0);
    }
    s.push_str("</svg>\n");
    s
}
