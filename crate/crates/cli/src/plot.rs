use std::fmt::Write;

use swarmbench_core::{Error, RunTrace};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Best-so-far against iteration as a standalone SVG 1.1 document.
///
/// The y axis is logarithmic when every value is positive and linear
/// otherwise. A trace with a single record is drawn as one marker.
pub fn render_convergence_svg(trace: &RunTrace) -> Result<String, Error> {
    let records = &trace.records;
    if records.is_empty() {
        return Err(Error::InvalidTrace("trace has no records".into()));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.iteration as f64).collect();
    let log = records.iter().all(|r| r.best_so_far > 0.0);
    let ys: Vec<f64> = records
        .iter()
        .map(|r| if log { r.best_so_far.log10() } else { r.best_so_far })
        .collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(Error::InvalidTrace("trace has non-finite values".into()));
    }

    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        }
    };
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let h = &trace.header;
    let title = format!("{} on {} (seed {})", h.algorithm(), h.problem, h.seed);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"  <title>{}</title>"#, escape(&title));
    let _ = writeln!(svg, r#"  <rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"  <text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&title)
    );
    let _ = writeln!(
        svg,
        r#"  <path d="M{LEFT} {TOP}V{}H{}" fill="none" stroke="black"/>"#,
        HEIGHT - BOTTOM,
        WIDTH - RIGHT
    );

    for k in 0..=TICKS {
        let t = k as f64 / TICKS as f64;
        let x = x0 + t * (x1 - x0);
        let y = y0 + t * (y1 - y0);
        let label_y = if log {
            format!("{:.1e}", 10f64.powf(y))
        } else {
            format!("{y:.3e}")
        };
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            px(x),
            HEIGHT - BOTTOM + 18.0,
            (x.round() as i64)
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{}" y="{:.2}" text-anchor="end" dominant-baseline="middle">{label_y}</text>"#,
            LEFT - 6.0,
            py(y)
        );
    }
    let _ = writeln!(
        svg,
        r#"  <text x="{}" y="{}" text-anchor="middle">iteration</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"  <text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">best so far{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        if log { " (log)" } else { "" }
    );

    if records.len() == 1 {
        let _ = writeln!(
            svg,
            r##"  <circle cx="{:.2}" cy="{:.2}" r="4" fill="#1f77b4"/>"##,
            px(xs[0]),
            py(ys[0])
        );
    } else {
        let points: Vec<String> = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r##"  <polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
            points.join(" ")
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
