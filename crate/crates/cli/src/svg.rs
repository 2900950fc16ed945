//! Minimal line plots. Output depends only on the table, so identical runs
//! give identical files.

use std::fmt::Write as _;
use std::io::{self, Write};

use ccsim_core::netlist::format_value;

use crate::table::{Axis, Table};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo <= 1e-12 * lo.abs().max(hi.abs()).max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick_label(v: f64) -> String {
    if v.abs() < 1e-15 {
        "0".into()
    } else {
        let rounded: f64 = format!("{v:.3e}").parse().unwrap_or(v);
        format_value(rounded)
    }
}

pub fn write_svg(table: &Table, out: &mut impl Write) -> io::Result<()> {
    out.write_all(svg_string(table).as_bytes())
}

pub fn svg_string(table: &Table) -> String {
    let log_x = table.axis == Axis::Freq;
    let xmap = |x: f64| if log_x { x.log10() } else { x };
    let (x0, x1) = {
        let xs: Vec<f64> = table.xs.iter().map(|&x| xmap(x)).collect();
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() && hi > lo {
            (lo, hi)
        } else {
            (lo.min(0.0), lo.max(0.0) + 1.0)
        }
    };
    let cols = table.plotted();
    let (y0, y1) = span(cols.iter().flat_map(|&c| table.rows.iter().map(move |r| r[c])));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (xmap(x) - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );

    // x ticks: decades on a log axis, five intervals otherwise
    let xticks: Vec<f64> = if log_x {
        (x0.ceil() as i32..=x1.floor() as i32).map(|e| 10f64.powi(e)).collect()
    } else {
        (0..=5).map(|k| x0 + (x1 - x0) * k as f64 / 5.0).collect()
    };
    for x in xticks {
        let gx = px(x);
        let _ = writeln!(
            s,
            r##"<line x1="{gx:.2}" y1="{TOP}" x2="{gx:.2}" y2="{:.2}" stroke="#dddddd"/><text x="{gx:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + ph,
            TOP + ph + 16.0,
            tick_label(x)
        );
    }
    for k in 0..=5 {
        let y = y0 + (y1 - y0) * k as f64 / 5.0;
        let gy = py(y);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            gy + 4.0,
            tick_label(y)
        );
    }

    let (xlabel, ylabel) = match table.axis {
        Axis::Freq => ("frequency (Hz)", "magnitude (dB)"),
        Axis::Time => ("time (s)", "value"),
        Axis::Op => ("operating point", "value"),
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{ylabel}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (n, &c) in cols.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let points: Vec<String> = table
            .xs
            .iter()
            .zip(&table.rows)
            .filter(|(_, r)| r[c].is_finite())
            .map(|(&x, r)| format!("{:.2},{:.2}", px(x), py(r[c])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        // a lone point (operating point) is invisible as a line
        if let [only] = points.as_slice() {
            let (cx, cy) = only.split_once(',').expect("x,y pair");
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="4" fill="{color}"/>"#);
        }
    }

    let lx = LEFT + pw + 16.0;
    let _ = writeln!(s, r#"<g class="legend">"#);
    for (n, &c) in cols.iter().enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let ly = TOP + 10.0 + 18.0 * n as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{:.2}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&table.columns[c])
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tran(columns: usize) -> Table {
        Table {
            axis: Axis::Time,
            columns: (0..columns).map(|k| format!("V(n{k})")).collect(),
            xs: vec![0.0, 1e-3, 2e-3],
            rows: vec![vec![0.0; columns], vec![1.0; columns], vec![-1.0; columns]],
        }
    }

    #[test]
    fn one_polyline_per_probe() {
        let s = svg_string(&tran(3));
        assert_eq!(s.matches("<polyline").count(), 3);
        let first = s.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(first.split(' ').count(), 3);
    }

    #[test]
    fn empty_probe_list_still_renders() {
        let s = svg_string(&tran(0));
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<polyline").count(), 0);
        assert!(s.contains(r#"<g class="legend">"#));
    }

    #[test]
    fn flat_trace_gets_a_visible_range() {
        let t = Table {
            axis: Axis::Freq,
            columns: vec!["a.mag_db".into(), "a.phase_deg".into()],
            xs: vec![1.0, 10.0, 100.0],
            rows: vec![vec![0.0, 0.0]; 3],
        };
        let s = svg_string(&t);
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(!s.contains("NaN") && !s.contains("inf"));
    }

    #[test]
    fn operating_point_gets_markers() {
        let t = Table {
            axis: Axis::Op,
            columns: vec!["V(a)".into(), "V(b)".into()],
            xs: vec![0.0],
            rows: vec![vec![1.0, 2.0]],
        };
        let s = svg_string(&t);
        assert_eq!(s.matches("<circle").count(), 2);
    }

    #[test]
    fn deterministic() {
        assert_eq!(svg_string(&tran(2)), svg_string(&tran(2)));
    }
}
