//! Deterministic SVG drawings of configurations, pairs with shift arrows, and
//! torus diagrams.

use std::fmt::Write;

use crate::boundary::CurveMap;
use crate::config::{eyes, DiskConfiguration};
use crate::geom::Point;
use crate::torus::{TorusParametrization, TorusPath};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 0.06;
const SOLID: &str = "#1f3a93";
const DASHED: &str = "#b03a2e";
const EYE_FILL: &str = "#f4d03f";
const ARROW: &str = "#117a65";
const STROKE: f64 = 1.5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overlays {
    pub labels: bool,
    pub eyes: bool,
}

/// World-to-pixel mapping with y pointing up.
struct View {
    lo: Point,
    scale: f64,
    height: f64,
}

impl View {
    fn fit(configs: &[&DiskConfiguration]) -> View {
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for c in configs {
            let (a, b) = c.bounding_box();
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
        }
        if !(lo.x.is_finite() && hi.x.is_finite()) {
            lo = Point::new(-1.0, -1.0);
            hi = Point::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let pad = span * MARGIN;
        let lo = Point::new(lo.x - pad, lo.y - pad);
        let w = hi.x - lo.x + pad;
        let h = hi.y - lo.y + pad;
        let scale = WIDTH / w;
        View { lo, scale, height: (h * scale).ceil() }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.lo.x) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        self.height - (y - self.lo.y) * self.scale
    }

    fn len(&self, l: f64) -> f64 {
        l * self.scale
    }
}

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">
<defs><marker id="head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="8" markerHeight="8" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{ARROW}"/></marker></defs>
<rect width="100%" height="100%" fill="white"/>"#
    );
}

fn circles(out: &mut String, v: &View, c: &DiskConfiguration, dashed: bool, labels: bool) {
    let (color, extra, class) = if dashed {
        (DASHED, r#" stroke-dasharray="6,4""#, "dashed")
    } else {
        (SOLID, "", "solid")
    };
    for (id, d) in c.iter() {
        let _ = writeln!(
            out,
            r#"<circle class="{class}" data-id="{id}" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{color}" stroke-width="{STROKE}"{extra}/>"#,
            v.x(d.center.x),
            v.y(d.center.y),
            v.len(d.radius)
        );
        if labels {
            let _ = writeln!(
                out,
                r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="14" fill="{color}" text-anchor="middle">{id}</text>"#,
                v.x(d.center.x),
                v.y(d.center.y)
            );
        }
    }
}

fn eye_paths(out: &mut String, v: &View, c: &DiskConfiguration) {
    for e in eyes(c) {
        let (a, b) = (&e.arc_on_first, &e.arc_on_second);
        let p = |q: Point| (v.x(q.x), v.y(q.y));
        let (u, w) = (p(a.start_point()), p(a.end_point()));
        // y is flipped, so counterclockwise arcs draw with sweep flag 0
        let large = |s: f64| u8::from(s.abs() > std::f64::consts::PI);
        let _ = writeln!(
            out,
            r#"<path class="eye" data-pair="{}-{}" d="M{:.3},{:.3} A{:.3},{:.3} 0 {} 0 {:.3},{:.3} A{:.3},{:.3} 0 {} 0 {:.3},{:.3} Z" fill="{EYE_FILL}" fill-opacity="0.5" stroke="none"/>"#,
            e.pair.0,
            e.pair.1,
            u.0,
            u.1,
            v.len(a.disk.radius),
            v.len(a.disk.radius),
            large(a.sweep),
            w.0,
            w.1,
            v.len(b.disk.radius),
            v.len(b.disk.radius),
            large(b.sweep),
            u.0,
            u.1
        );
    }
}

/// One configuration, solid circles.
pub fn render_configuration(c: &DiskConfiguration, ov: Overlays) -> String {
    let v = View::fit(&[c]);
    let mut out = String::new();
    header(&mut out, WIDTH, v.height);
    if ov.eyes {
        eye_paths(&mut out, &v, c);
    }
    circles(&mut out, &v, c, false, ov.labels);
    out.push_str("</svg>\n");
    out
}

/// A pair: the first solid, the second dashed, and optional shift arrows between first-configuration centers.
pub fn render_pair(c: &DiskConfiguration, ct: &DiskConfiguration, ov: Overlays, arrows: &[(u32, u32)]) -> String {
    let v = View::fit(&[c, ct]);
    let mut out = String::new();
    header(&mut out, WIDTH, v.height);
    if ov.eyes {
        eye_paths(&mut out, &v, c);
    }
    circles(&mut out, &v, c, false, ov.labels);
    circles(&mut out, &v, ct, true, false);
    for &(i, j) in arrows {
        let (Some(a), Some(b)) = (c.get(i), c.get(j)) else { continue };
        // stop short of the centers so heads stay visible
        let d = b.center - a.center;
        let (p, q) = (a.center + d * 0.15, a.center + d * 0.85);
        let _ = writeln!(
            out,
            r#"<line class="arrow" data-edge="{i}-{j}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{ARROW}" stroke-width="2" marker-end="url(#head)"/>"#,
            v.x(p.x),
            v.y(p.y),
            v.x(q.x),
            v.y(q.y)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Unit torus square around base point `base`, with crossing points and an optional monotone path.
pub fn render_torus(param: &TorusParametrization, base: (f64, f64), path: Option<&TorusPath>) -> String {
    let size = 480.0;
    let pad = 40.0;
    let total = size + 2.0 * pad;
    let px = |x: f64| pad + x * size;
    let py = |y: f64| pad + (1.0 - y) * size;
    let mut out = String::new();
    header(&mut out, total, total);
    let _ = writeln!(
        out,
        r#"<rect class="torus" x="{pad:.3}" y="{pad:.3}" width="{size:.3}" height="{size:.3}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line class="diagonal" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="gray" stroke-dasharray="4,4"/>"#,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );
    let wrap = |t: f64| (t - t.floor()).clamp(0.0, 1.0);
    let mut pts = param.torus_points();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (x, y, is_p) in pts {
        let (x, y) = (wrap(x - base.0), wrap(y - base.1));
        let (class, fill) = if is_p { ("p", "black") } else { ("ptilde", "white") };
        let _ = writeln!(
            out,
            r#"<circle class="{class}" cx="{:.3}" cy="{:.3}" r="5" fill="{fill}" stroke="black" stroke-width="1.5"/>"#,
            px(x),
            py(y)
        );
    }
    if let Some(path) = path {
        let d: Vec<String> = path.waypoints.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="path" points="{}" fill="none" stroke="{ARROW}" stroke-width="2"/>"#,
            d.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Graph of `map` in torus coordinates relative to the source parameter `s_u`.
pub fn graph_path(map: &CurveMap, s_u: f64) -> TorusPath {
    let n = 512;
    let t_u = map.eval(s_u);
    let mut waypoints = vec![(0.0, 0.0)];
    for k in 1..n {
        let x = k as f64 / n as f64;
        let y = map.eval(s_u + x) - t_u;
        if y > waypoints.last().unwrap().1 && y < 1.0 {
            waypoints.push((x, y));
        }
    }
    waypoints.push((1.0, 1.0));
    TorusPath { waypoints }
}
