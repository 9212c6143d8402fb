//! Static SVG plot of a segmented trajectory.
//!
//! The whole trajectory is drawn in gray, then each labeled run on top in its
//! class color, with a legend of class names. Two or more dimensions plot
//! `x0` against `x1`; one dimension plots `x0` against time.

use std::fmt::Write;

use corrseg_core::{Labeling, Trajectory};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;
const LEGEND_WIDTH: f64 = 160.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn color(class: usize) -> &'static str {
    PALETTE[class % PALETTE.len()]
}

fn xy(traj: &Trajectory, k: usize) -> (f64, f64) {
    let p = traj.point(k);
    if traj.dim() == 1 {
        (k as f64, p[0])
    } else {
        (p[0], p[1])
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render(traj: &Trajectory, labeling: &Labeling, names: &[String]) -> String {
    let pts: Vec<(f64, f64)> = (0..traj.len()).map(|k| xy(traj, k)).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let plot_w = WIDTH - 2.0 * MARGIN - LEGEND_WIDTH;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let sx = plot_w / (x1 - x0).max(1e-12);
    let sy = plot_h / (y1 - y0).max(1e-12);
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * sx, HEIGHT - MARGIN - (y - y0) * sy);
    let polyline = |range: std::ops::Range<usize>| {
        pts[range]
            .iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<polyline fill="none" stroke="#bbbbbb" stroke-width="1" points="{}"/>"##,
        polyline(0..pts.len())
    );
    for run in labeling.runs() {
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="2.5" points="{}"/>"#,
            color(run.class),
            polyline(run.start..run.end)
        );
    }
    let lx = WIDTH - LEGEND_WIDTH + 10.0;
    for (i, name) in names.iter().enumerate() {
        let ly = MARGIN + 20.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{}" width="12" height="12" fill="{}"/>"#,
            ly - 10.0,
            color(i)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 18.0,
            escape(name)
        );
    }
    let ly = MARGIN + 20.0 * names.len() as f64;
    let _ = writeln!(
        svg,
        r##"<rect x="{lx}" y="{}" width="12" height="12" fill="#bbbbbb"/>"##,
        ly - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="12">unlabeled</text>"#,
        lx + 18.0
    );
    svg.push_str("</svg>\n");
    svg
}
