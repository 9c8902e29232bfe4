// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! CSV and SVG renderings of estimate sweeps.

use std::fmt::Write as _;

use super::EstimateRow;

pub const CSV_HEADER: &str = "p,d_l,r_swap,wer_hier,wer_basic,d_M,qubits_hier,qubits_basic";

/// Rates use Rust's shortest round-trip scientific formatting.
pub fn rows_to_csv(rows: &[EstimateRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{:e},{},{},{:e},{:e},{},{},{}",
            r.p, r.d_l, r.r_swap, r.wer_hier, r.wer_basic, r.d_m, r.qubits_hier, r.qubits_basic
        );
    }
    s
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Log-log plot of both WER columns against `p`, one color per
/// `(d_l, r_swap)` series; solid lines are hierarchical, dashed basic.
pub fn sweep_svg(rows: &[EstimateRow], title: &str) -> String {
    let mut series: Vec<((usize, f64), Vec<&EstimateRow>)> = Vec::new();
    for r in rows {
        match series.iter_mut().find(|(k, _)| *k == (r.d_l, r.r_swap)) {
            Some((_, v)) => v.push(r),
            None => series.push(((r.d_l, r.r_swap), vec![r])),
        }
    }
    let floor = 1e-30f64;
    let lg = |v: f64| v.max(floor).log10();
    let xs: Vec<f64> = rows.iter().map(|r| lg(r.p)).collect();
    let ys: Vec<f64> = rows.iter().flat_map(|r| [lg(r.wer_hier), lg(r.wer_basic)]).collect();
    let span = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min).floor();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
        if lo.is_finite() && hi > lo { (lo, hi) } else { (-1.0, 0.0) }
    };
    let (x0, x1) = span(&xs);
    let (y0, y1) = span(&ys);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for e in x0 as i64..=x1 as i64 {
        let x = px(e as f64);
        let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="silver"/>"#, MARGIN, H - MARGIN);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{e}</text>"#, H - MARGIN + 16.0);
    }
    let ystep = (((y1 - y0) / 10.0).ceil() as i64).max(1);
    let mut e = y0 as i64;
    while e <= y1 as i64 {
        let y = py(e as f64);
        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="silver"/>"#, W - MARGIN);
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"#, MARGIN - 4.0, y + 4.0);
        e += ystep;
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">gate error rate p</text>"#, W / 2.0, H - 16.0);
    let _ = writeln!(s, r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">WER</text>"#, H / 2.0, H / 2.0);
    for (i, ((d_l, r_swap), pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for (dash, get) in [("", 0), (r#" stroke-dasharray="6 4""#, 1)] {
            let path: Vec<String> = pts
                .iter()
                .map(|r| {
                    let w = if get == 0 { r.wer_hier } else { r.wer_basic };
                    format!("{:.1},{:.1}", px(lg(r.p)), py(lg(w)))
                })
                .collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#, path.join(" "));
        }
        let ly = MARGIN + 16.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">d_l={d_l} r_swap={r_swap}</text>"#,
            MARGIN + 8.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: f64) -> EstimateRow {
        EstimateRow { p, d_l: 3, r_swap: 0.1, wer_hier: p, wer_basic: p * p, d_m: 5, qubits_hier: 10, qubits_basic: 20 }
    }

    #[test]
    fn csv_format() {
        let csv = rows_to_csv(&[row(0.001)]);
        assert_eq!(csv, format!("{CSV_HEADER}\n1e-3,3,0.1,1e-3,1e-6,5,10,20\n"));
    }

    #[test]
    fn svg_is_closed() {
        let svg = sweep_svg(&[row(1e-4), row(1e-3)], "a < b");
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(sweep_svg(&[], "empty").ends_with("</svg>\n"));
    }
}
