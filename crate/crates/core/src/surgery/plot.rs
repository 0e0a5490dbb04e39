//! Region plots.
//!
//! `P1` lives in the `(x, y) = (rp, rq)` plane, split by the lines
//! `L: x + 6y = +-6` and `U: x + 6y = +-6/5`. `P2` lives on the `(m, n)`
//! lattice of the symbols `S(m, n)`, split by the vertical lines `x = 6`
//! and `x = 6/5`. Both render to CSV and SVG with byte-stable output.

use std::fmt::Write as _;

use num_integer::Integer;

use crate::format::g17;

/// Distance to the line `x + 6y = 6` below which a point counts as on it.
pub const LINE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionClass {
    Sl2r,
    Nil,
    Spherical,
    Unknown,
    /// `S(1, n)`: inside the spherical band, but the
    /// exceptional fibre is not a geodesic.
    NonGeodesic,
}

impl RegionClass {
    pub fn name(&self) -> &'static str {
        match self {
            RegionClass::Sl2r => "sl2r",
            RegionClass::Nil => "nil",
            RegionClass::Spherical => "spherical",
            RegionClass::Unknown => "unknown",
            RegionClass::NonGeodesic => "nongeodesic",
        }
    }

    fn colour(&self) -> &'static str {
        match self {
            RegionClass::Sl2r => "#f2b179",
            RegionClass::Nil => "#6a3d9a",
            RegionClass::Spherical => "#8ecae6",
            RegionClass::Unknown => "#e0e0e0",
            RegionClass::NonGeodesic => "#b0b0b0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    P1,
    P2,
}

/// Closed rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Option<Self> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0;
        ok.then_some(Self { x0, x1, y0, y1 })
    }

    pub fn default_for(which: Which) -> Self {
        match which {
            Which::P1 => Self {
                x0: -12.0,
                x1: 12.0,
                y0: 0.0,
                y1: 6.0,
            },
            Which::P2 => Self {
                x0: 0.0,
                x1: 12.0,
                y0: 0.0,
                y1: 6.0,
            },
        }
    }
}

/// Class of `(x, y) = (rp, rq)` by `|x + 6y|`.
pub fn classify_p1(x: f64, y: f64) -> RegionClass {
    let v = (x + 6.0 * y).abs();
    if (v - 6.0).abs() <= LINE_TOL {
        RegionClass::Nil
    } else if v > 6.0 {
        RegionClass::Sl2r
    } else if v > 1.2 + LINE_TOL {
        RegionClass::Spherical
    } else {
        RegionClass::Unknown
    }
}

/// Class of the lattice point `S(m, n)` by `m`.
pub fn classify_p2(m: i64, _n: i64) -> RegionClass {
    match m {
        m if m > 6 => RegionClass::Sl2r,
        6 => RegionClass::Nil,
        2..=5 => RegionClass::Spherical,
        1 => RegionClass::NonGeodesic,
        _ => RegionClass::Unknown,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct P1Cell {
    pub x: f64,
    pub y: f64,
    pub class: RegionClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2Point {
    pub m: i64,
    pub n: i64,
    pub class: RegionClass,
    /// `gcd(m, n) = 1`: a manifold, no singular fibre.
    pub marked: bool,
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

/// Rasterises `P1` at spacing `step`, rows by increasing `y`.
pub fn raster_p1(window: &Window, step: f64) -> Vec<P1Cell> {
    let xs = axis(window.x0, window.x1, step);
    axis(window.y0, window.y1, step)
        .into_iter()
        .flat_map(|y| {
            xs.iter().map(move |&x| P1Cell {
                x,
                y,
                class: classify_p1(x, y),
            })
        })
        .collect()
}

/// Integer lattice points of the window, rows by increasing `n`.
pub fn lattice_p2(window: &Window) -> Vec<P2Point> {
    let (m0, m1) = (window.x0.ceil() as i64, window.x1.floor() as i64);
    let (n0, n1) = (window.y0.ceil() as i64, window.y1.floor() as i64);
    (n0..=n1)
        .flat_map(|n| {
            (m0..=m1).map(move |m| P2Point {
                m,
                n,
                class: classify_p2(m, n),
                marked: m.gcd(&n) == 1,
            })
        })
        .collect()
}

pub fn p1_csv(window: &Window, step: f64) -> String {
    let mut out = String::from("x,y,class\n");
    for c in raster_p1(window, step) {
        let _ = writeln!(out, "{},{},{}", g17(c.x), g17(c.y), c.class.name());
    }
    out
}

pub fn p2_csv(window: &Window) -> String {
    let mut out = String::from("m,n,class,marked\n");
    for pt in lattice_p2(window) {
        let _ = writeln!(out, "{},{},{},{}", pt.m, pt.n, pt.class.name(), pt.marked);
    }
    out
}

/// Segment of the line `a x + b y = c` inside the window, if any.
fn clip_line(w: &Window, a: f64, b: f64, c: f64) -> Option<[(f64, f64); 2]> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    if b != 0.0 {
        for x in [w.x0, w.x1] {
            let y = (c - a * x) / b;
            if y >= w.y0 - 1e-12 && y <= w.y1 + 1e-12 {
                pts.push((x, y.clamp(w.y0, w.y1)));
            }
        }
    }
    if a != 0.0 {
        for y in [w.y0, w.y1] {
            let x = (c - b * y) / a;
            if x >= w.x0 - 1e-12 && x <= w.x1 + 1e-12 {
                pts.push((x.clamp(w.x0, w.x1), y));
            }
        }
    }
    pts.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
    match pts.as_slice() {
        [first, .., last] => Some([*first, *last]),
        _ => None,
    }
}

fn svg_header(w: &Window) -> String {
    let (width, height) = (w.x1 - w.x0, w.y1 - w.y0);
    let px = 40.0;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">\n",
        g17((width * px).round()),
        g17((height * px).round()),
        g17(w.x0),
        g17(-w.y1),
        g17(width),
        g17(height)
    )
}

fn svg_line(out: &mut String, seg: [(f64, f64); 2], colour: &str, id: &str) {
    let _ = writeln!(
        out,
        "  <line id=\"{id}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{colour}\" stroke-width=\"0.05\"/>",
        g17(seg[0].0),
        g17(-seg[0].1),
        g17(seg[1].0),
        g17(-seg[1].1)
    );
}

fn svg_markers(out: &mut String, w: &Window) {
    let (m0, m1) = (w.x0.ceil() as i64, w.x1.floor() as i64);
    let (n0, n1) = (w.y0.ceil() as i64, w.y1.floor() as i64);
    out.push_str("  <g id=\"lattice\" fill=\"#000000\">\n");
    for n in n0..=n1 {
        for m in m0..=m1 {
            if m.gcd(&n) == 1 {
                let _ = writeln!(out, "    <circle cx=\"{m}\" cy=\"{}\" r=\"0.06\"/>", -n);
            }
        }
    }
    out.push_str("  </g>\n");
}

/// Region fills, then the lines `L` (solid) and `U` (dashed colour), then
/// markers at the `gcd = 1` lattice points.
pub fn p1_svg(window: &Window, step: f64) -> String {
    let mut out = svg_header(window);
    out.push_str("  <g id=\"regions\" stroke=\"none\">\n");
    for c in raster_p1(window, step) {
        let _ = writeln!(
            out,
            "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
            g17(c.x - step / 2.0),
            g17(-c.y - step / 2.0),
            g17(step),
            g17(step),
            c.class.colour()
        );
    }
    out.push_str("  </g>\n");
    for (c, colour, id) in [
        (6.0, "#000000", "L+"),
        (-6.0, "#000000", "L-"),
        (1.2, "#1f5fbf", "U+"),
        (-1.2, "#1f5fbf", "U-"),
    ] {
        if let Some(seg) = clip_line(window, 1.0, 6.0, c) {
            svg_line(&mut out, seg, colour, id);
        }
    }
    svg_markers(&mut out, window);
    out.push_str("</svg>\n");
    out
}

pub fn p2_svg(window: &Window) -> String {
    let mut out = svg_header(window);
    out.push_str("  <g id=\"regions\" stroke=\"none\">\n");
    for pt in lattice_p2(window) {
        let _ = writeln!(
            out,
            "    <rect x=\"{}\" y=\"{}\" width=\"1\" height=\"1\" fill=\"{}\"/>",
            pt.m as f64 - 0.5,
            -pt.n as f64 - 0.5,
            pt.class.colour()
        );
    }
    out.push_str("  </g>\n");
    for (x, colour, id) in [(6.0, "#000000", "L"), (1.2, "#1f5fbf", "U")] {
        if let Some(seg) = clip_line(window, 1.0, 0.0, x) {
            svg_line(&mut out, seg, colour, id);
        }
    }
    svg_markers(&mut out, window);
    out.push_str("</svg>\n");
    out
}
