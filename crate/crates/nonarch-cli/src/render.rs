//! SVG for the `polygon`, `series-polygon` and `polytope` reports.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::Value;

use nonarch::valuation::{ceil, floor, int, Rational};

use crate::parse;

const MARGIN: i64 = 48;
const TARGET_SPAN: i64 = 720;

#[derive(Debug, Clone, PartialEq)]
enum Figure {
    /// Open lower hull with its slopes.
    Polygon(Vec<(Rational, Rational)>),
    /// Closed lattice polygon.
    Polytope(Vec<(Rational, Rational)>),
}

fn number(v: &Value) -> Result<Rational, String> {
    match v {
        Value::Number(n) => n.as_i64().map(int).ok_or_else(|| format!("not an integer: {n}")),
        Value::String(s) => parse::rational(s).map_err(|e| e.to_string()),
        other => Err(format!("not a number: {other}")),
    }
}

fn vertices(v: &Value) -> Result<Vec<(Rational, Rational)>, String> {
    let list = v.as_array().ok_or("result.vertices must be an array")?;
    if list.is_empty() {
        return Err("no vertices".into());
    }
    list.iter()
        .map(|pt| match pt.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok((number(x)?, number(y)?)),
            _ => Err(format!("vertex {pt} is not a pair")),
        })
        .collect()
}

fn figure(report: &Value) -> Result<Figure, String> {
    let module = report.pointer("/provenance/module").and_then(Value::as_str).ok_or("missing provenance.module")?;
    let verts = vertices(report.pointer("/result/vertices").ok_or("missing result.vertices")?)?;
    match module {
        "newton_polygon" | "tate_series" => Ok(Figure::Polygon(verts)),
        "newton_polytope" => Ok(Figure::Polytope(verts)),
        other => Err(format!("cannot render output of module {other:?}")),
    }
}

/// Exact fixed-point with two decimals.
fn coord(r: &Rational) -> String {
    let hundredths = (r * int(100)).round().to_integer();
    let (q, rem) = hundredths.abs().div_rem(&BigInt::from(100));
    let sign = if hundredths.is_negative() { "-" } else { "" };
    format!("{sign}{q}.{rem:02}")
}

fn slope_label(dx: &Rational, dy: &Rational) -> String {
    if dx.is_zero() {
        "vertical".to_string()
    } else {
        (dy / dx).to_string()
    }
}

/// Renders a `polygon`, `series-polygon` or `polytope` JSON report.
pub fn render(report: &Value) -> Result<String, String> {
    let fig = figure(report)?;
    let (pts, closed, title) = match &fig {
        Figure::Polygon(p) => (p, false, "Newton polygon"),
        Figure::Polytope(p) => (p, true, "Newton polytope"),
    };
    let xmin = floor(&pts.iter().map(|p| p.0.clone()).min().expect("nonempty"));
    let xmax = ceil(&pts.iter().map(|p| p.0.clone()).max().expect("nonempty"));
    let ymin = floor(&pts.iter().map(|p| p.1.clone()).min().expect("nonempty"));
    let ymax = ceil(&pts.iter().map(|p| p.1.clone()).max().expect("nonempty"));
    let span_x: i64 = (&xmax - &xmin).try_into().map_err(|_| "figure too large")?;
    let span_y: i64 = (&ymax - &ymin).try_into().map_err(|_| "figure too large")?;
    let unit = (TARGET_SPAN / span_x.max(span_y).max(1)).clamp(4, 80);
    let width = span_x * unit + 2 * MARGIN;
    let height = span_y * unit + 2 * MARGIN;
    let (x0, y1) = (Rational::from_integer(xmin.clone()), Rational::from_integer(ymax.clone()));
    let px = |x: &Rational| coord(&((x - &x0) * int(unit) + int(MARGIN)));
    let py = |y: &Rational| coord(&((&y1 - y) * int(unit) + int(MARGIN)));
    let every = (span_x.max(span_y) / 40).max(1);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<title>{title}</title>"#);
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(svg, r##"<g stroke="#dddddd" stroke-width="1">"##);
    for i in 0..=span_x {
        let x = Rational::from_integer(&xmin + i);
        let stroke = if x.is_zero() { r##" stroke="#888888""## } else { "" };
        if i % every == 0 || x.is_zero() {
            let _ = writeln!(svg, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"{stroke}/>"#, px(&x), py(&y1), py(&Rational::from_integer(ymin.clone())));
        }
    }
    for j in 0..=span_y {
        let y = Rational::from_integer(&ymin + j);
        let stroke = if y.is_zero() { r##" stroke="#888888""## } else { "" };
        if j % every == 0 || y.is_zero() {
            let _ = writeln!(svg, r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"{stroke}/>"#, py(&y), px(&x0), px(&Rational::from_integer(xmax.clone())));
        }
    }
    let _ = writeln!(svg, "</g>");

    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", px(x), py(y))).collect();
    let shape = if closed { "polygon" } else { "polyline" };
    let fill = if closed { "#e8f0ff" } else { "none" };
    let _ = writeln!(svg, r##"<{shape} points="{}" fill="{fill}" stroke="#1f4e9c" stroke-width="2"/>"##, path.join(" "));

    let n = pts.len();
    let edges = if closed && n > 2 { n } else { n.saturating_sub(1) };
    for i in 0..edges {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        let mid = ((&a.0 + &b.0) / int(2), (&a.1 + &b.1) / int(2));
        let label = slope_label(&(&b.0 - &a.0), &(&b.1 - &a.1));
        let _ = writeln!(svg, r##"<text x="{}" y="{}" fill="#9c1f1f" text-anchor="middle" dy="-6">slope {label}</text>"##, px(&mid.0), py(&mid.1));
    }
    for (x, y) in pts {
        let _ = writeln!(svg, r##"<circle cx="{}" cy="{}" r="3" fill="#1f4e9c"/>"##, px(x), py(y));
        let _ = writeln!(svg, r#"<text x="{}" y="{}" dx="5" dy="14">({x}, {y})</text>"#, px(x), py(y));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
