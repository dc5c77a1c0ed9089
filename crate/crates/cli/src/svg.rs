//! Minimal static SVG output: grid heatmaps and stacked time-series strips.

use std::fmt::Write as _;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Sequential white → dark blue ramp.
fn ramp(x: f64) -> String {
    let x = x.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * x).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(247.0, 8.0), lerp(251.0, 48.0), lerp(255.0, 107.0))
}

fn short(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 {
        "0".into()
    } else if a >= 1e6 {
        format!("{:.1}M", v / 1e6)
    } else if a >= 1e3 {
        format!("{:.0}k", v / 1e3)
    } else if a >= 10.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Heatmap of `grid[row][col]`, rows drawn bottom-up so the first row sits
/// on the horizontal axis. Empty cells are left blank.
pub fn heatmap(title: &str, grid: &[Vec<Option<f64>>], row_labels: &[String], col_labels: &[String], x_label: &str, y_label: &str) -> String {
    let nr = grid.len();
    let nc = grid.first().map_or(0, Vec::len);
    let (cw, ch) = (44.0, 22.0);
    let (left, top, bottom) = (70.0, 40.0, 50.0);
    let width = left + cw * nc as f64 + 20.0;
    let height = top + ch * nr as f64 + bottom;
    let max = grid.iter().flatten().flatten().fold(0.0f64, |m, &v| m.max(v));
    let mut s = String::new();
    let _ = writeln!(s, r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"##);
    let _ = writeln!(s, r##"<text x="{}" y="20" font-size="14" text-anchor="middle">{}</text>"##, width / 2.0, escape(title));
    for (i, row) in grid.iter().enumerate() {
        let y = top + ch * (nr - 1 - i) as f64;
        for (j, cell) in row.iter().enumerate() {
            let x = left + cw * j as f64;
            if let Some(v) = cell {
                let f = if max > 0.0 { v / max } else { 0.0 };
                let _ = writeln!(s, r##"<rect x="{x}" y="{y}" width="{cw}" height="{ch}" fill="{}" stroke="#ccc"/>"##, ramp(f));
                let colour = if f > 0.55 { "#fff" } else { "#000" };
                let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="middle" fill="{colour}">{}</text>"##, x + cw / 2.0, y + ch * 0.68, short(*v));
            } else {
                let _ = writeln!(s, r##"<rect x="{x}" y="{y}" width="{cw}" height="{ch}" fill="none" stroke="#eee"/>"##);
            }
        }
        if let Some(l) = row_labels.get(i) {
            let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="end">{}</text>"##, left - 4.0, y + ch * 0.68, escape(l));
        }
    }
    let base = top + ch * nr as f64;
    for (j, l) in col_labels.iter().enumerate().take(nc) {
        let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="middle">{}</text>"##, left + cw * (j as f64 + 0.5), base + 14.0, escape(l));
    }
    let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="middle">{}</text>"##, left + cw * nc as f64 / 2.0, base + 36.0, escape(x_label));
    let _ = writeln!(
        s,
        r##"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"##,
        top + ch * nr as f64 / 2.0,
        top + ch * nr as f64 / 2.0,
        escape(y_label)
    );
    s.push_str("</svg>\n");
    s
}

/// One strip per channel sharing the time axis.
pub fn strips(title: &str, time: &[f64], channels: &[(&str, &[f64])]) -> String {
    let (w, sh, left, top) = (760.0, 90.0, 110.0, 36.0);
    let height = top + sh * channels.len() as f64 + 30.0;
    let width = left + w + 20.0;
    let (t0, t1) = (time.first().copied().unwrap_or(0.0), time.last().copied().unwrap_or(1.0));
    let span = if t1 > t0 { t1 - t0 } else { 1.0 };
    let mut s = String::new();
    let _ = writeln!(s, r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="10">"##);
    let _ = writeln!(s, r##"<text x="{}" y="20" font-size="14" text-anchor="middle">{}</text>"##, width / 2.0, escape(title));
    // decimate to at most ~2000 points per strip
    let stride = (time.len() / 2000).max(1);
    for (k, (name, y)) in channels.iter().enumerate() {
        let oy = top + sh * k as f64;
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = if hi > lo { hi - lo } else { 1.0 };
        let _ = writeln!(s, r##"<rect x="{left}" y="{oy}" width="{w}" height="{}" fill="none" stroke="#ddd"/>"##, sh - 8.0);
        let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="end">{}</text>"##, left - 6.0, oy + sh / 2.0, escape(name));
        let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="end" fill="#888">{}</text>"##, left - 6.0, oy + 10.0, short(hi));
        let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="end" fill="#888">{}</text>"##, left - 6.0, oy + sh - 10.0, short(lo));
        let mut pts = String::new();
        for (t, v) in time.iter().zip(y.iter()).step_by(stride) {
            let px = left + (t - t0) / span * w;
            let py = oy + (sh - 8.0) * (1.0 - (v - lo) / range);
            let _ = write!(pts, "{px:.1},{py:.1} ");
        }
        let _ = writeln!(s, r##"<polyline fill="none" stroke="#08306b" stroke-width="0.8" points="{}"/>"##, pts.trim_end());
    }
    let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="middle">time [s] ({t0:.0} to {t1:.0})</text>"##, left + w / 2.0, height - 8.0);
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heatmap_draws_one_rect_per_cell() {
        let g = vec![vec![Some(1.0), None], vec![Some(2.0), Some(0.5)]];
        let svg = heatmap("t", &g, &["a".into(), "b".into()], &["x".into(), "y".into()], "Te", "Hm0");
        assert_eq!(svg.matches("<rect").count(), 4);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn strips_escape_names() {
        let t = [0.0, 1.0, 2.0];
        let svg = strips("a<b", &t, &[("x&y", &[1.0, 2.0, 3.0])]);
        assert!(svg.contains("a&lt;b") && svg.contains("x&amp;y"));
    }
}
