//! Static SVG plot of trajectories in the complex energy plane.

use std::fmt::Write as _;

use resonance_core::resonance::{StationaryPoint, Trajectory};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn around(points: impl Iterator<Item = (f64, f64)>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| {
            let span = (hi - lo).max(1e-6);
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x0, x1) = pad(x0, x1);
        let (y0, y1) = pad(y0, y1);
        Self { x0, x1, y0, y1 }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN);
        let py = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN);
        (px, py)
    }
}

pub fn render(trajectories: &[Trajectory], stationary: Option<&StationaryPoint>) -> String {
    let frame = Frame::around(
        trajectories
            .iter()
            .flat_map(|t| &t.points)
            .map(|p| (p.energy.re, p.energy.im)),
    );
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ax0, ay0) = frame.map(frame.x0, frame.y0);
    let (ax1, ay1) = frame.map(frame.x1, frame.y1);
    let _ = writeln!(
        out,
        r#"<rect x="{ax0:.1}" y="{ay1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        ax1 - ax0,
        ay0 - ay1
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">Re E (Hartree)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{:.1}" transform="rotate(-90 15 {:.1})" text-anchor="middle">Im E (Hartree)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (x, y, anchor, text) in [
        (ax0, ay0 + 16.0, "start", format!("{:.4}", frame.x0)),
        (ax1, ay0 + 16.0, "end", format!("{:.4}", frame.x1)),
        (ax0 - 4.0, ay0, "end", format!("{:.4}", frame.y0)),
        (ax0 - 4.0, ay1 + 10.0, "end", format!("{:.4}", frame.y1)),
    ] {
        let _ = writeln!(out, r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}">{text}</text>"#);
    }
    for (k, t) in trajectories.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = t
            .points
            .iter()
            .map(|p| {
                let (x, y) = frame.map(p.energy.re, p.energy.im);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        for p in &t.points {
            let (x, y) = frame.map(p.energy.re, p.energy.im);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}"/>"#);
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">alpha = {}</text>"#,
            WIDTH - MARGIN + 5.0 - 110.0,
            MARGIN + 16.0 * k as f64 + 12.0,
            t.alpha
        );
    }
    if let Some(s) = stationary {
        let (x, y) = frame.map(s.energy.re, s.energy.im);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="none" stroke="black" stroke-width="2"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">theta = {}</text>"#,
            x + 8.0,
            y - 8.0,
            s.theta
        );
    }
    out.push_str("</svg>\n");
    out
}
