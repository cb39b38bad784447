//! Standalone SVG histograms.

use std::fmt::Write as _;

use crate::bias::Histogram;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 60.0;
const BOTTOM: f64 = 80.0;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders `h` as an SVG 1.1 document on an 800x600 canvas.
///
/// Output depends only on the inputs, so identical histograms give
/// identical bytes.
pub fn emit_histogram_svg(h: &Histogram, title: &str) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let base = TOP + plot_h;
    let n = h.counts.len().max(1);
    let bar_w = plot_w / n as f64;
    let max_count = h.counts.iter().copied().max().unwrap_or(0).max(1);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="35" font-family="sans-serif" font-size="20" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    for (i, &count) in h.counts.iter().enumerate() {
        let bar_h = plot_h * count as f64 / max_count as f64;
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a72b0" stroke="#1f3b63" stroke-width="1"/>"##,
            LEFT + i as f64 * bar_w,
            base - bar_h,
            bar_w,
            bar_h
        );
    }

    // axes
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{base}" x2="{:.1}" y2="{base}" stroke="black"/>"#,
        LEFT + plot_w
    );
    let _ = writeln!(s, r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}" stroke="black"/>"#);

    for (i, edge) in h.bin_edges.iter().enumerate() {
        let x = LEFT + i as f64 * bar_w;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{base}" x2="{x:.2}" y2="{:.1}" stroke="black"/>"#,
            base + 6.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end" transform="rotate(-45 {x:.2} {:.1})">{edge:.3}</text>"#,
            base + 20.0,
            base + 20.0
        );
    }

    for (value, label) in [(0, "0".to_string()), (max_count, max_count.to_string())] {
        let y = base - plot_h * value as f64 / max_count as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{label}</text>"#,
            LEFT - 8.0
        );
    }
    s.push_str("</svg>\n");
    s
}
