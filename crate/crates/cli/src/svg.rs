//! Newton polygon drawings: support points, the lower hull and labelled axes.

use std::fmt::Write;

use puiseux::polynomial::NewtonPolygon;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

pub fn newton_polygon(polygon: &NewtonPolygon, max_convention: bool) -> String {
    let sign = if max_convention { -1.0 } else { 1.0 };
    let pts: Vec<(f64, f64, String)> = polygon
        .support
        .iter()
        .map(|(i, v)| {
            let label = if max_convention { (-v).to_string() } else { v.to_string() };
            (*i as f64, sign * v.to_f64(), label)
        })
        .collect();
    let x_max = pts.iter().map(|p| p.0).fold(1.0, f64::max);
    let y_lo = pts.iter().map(|p| p.1).fold(0.0, f64::min).floor();
    let mut y_hi = pts.iter().map(|p| p.1).fold(1.0, f64::max).ceil();
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let sx = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    // axes through i = 0 and val = 0 when visible
    let y0 = sy(0.0f64.clamp(y_lo, y_hi));
    writeln!(
        out,
        r#"<line x1="{:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}" stroke="black"/>"#,
        sx(0.0),
        WIDTH - MARGIN / 2.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        sx(0.0),
        HEIGHT - MARGIN,
        sx(0.0),
        MARGIN / 2.0
    )
    .unwrap();
    writeln!(out, r#"<text x="{:.1}" y="{:.1}">i</text>"#, WIDTH - MARGIN / 2.0 + 4.0, y0 + 4.0).unwrap();
    let axis = if max_convention { "-val" } else { "val" };
    writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{axis}</text>"#, sx(0.0), MARGIN / 2.0 - 6.0).unwrap();
    for i in 0..=x_max as usize {
        let x = sx(i as f64);
        writeln!(out, r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#, y0 - 3.0, y0 + 3.0).unwrap();
        writeln!(out, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{i}</text>"#, y0 + 15.0).unwrap();
    }
    let mut k = y_lo as i64;
    while k as f64 <= y_hi {
        let y = sy(k as f64);
        writeln!(out, r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/>"#, sx(0.0) - 3.0, sx(0.0) + 3.0).unwrap();
        writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{k}</text>"#, sx(0.0) - 6.0, y + 4.0).unwrap();
        k += 1;
    }
    // lower hull
    if polygon.vertices.len() >= 2 {
        let path: Vec<String> = polygon
            .vertices
            .iter()
            .map(|(i, v)| format!("{:.1},{:.1}", sx(*i as f64), sy(sign * v.to_f64())))
            .collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
            path.join(" ")
        )
        .unwrap();
    }
    for (x, y, label) in &pts {
        writeln!(out, r#"<circle cx="{:.1}" cy="{:.1}" r="3.5" fill="black"><title>({x}, {label})</title></circle>"#, sx(*x), sy(*y)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}
