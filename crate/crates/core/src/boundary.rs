//! Boundary curves of disk unions and eyes, boundary maps between them, and
//! the fixed-point index of such maps.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::config::{Arc, ConfigError, DiskConfiguration, Eye};
use crate::geom::{
    ccw_sweep, circle_intersections, disk_relation, tangency_point, wrap_angle, Disk,
    DiskRelation, Point,
};
use crate::EPS_GEOM;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("point lies on the curve")]
    PointOnCurve,
    #[error("corner {0} is not on the circle")]
    CornerOffBoundary(Point),
    #[error("degenerate contact: {0}")]
    DegenerateContact(String),
    #[error("boundary combinatorics differ: {0}")]
    CombinatoricsMismatch(String),
    #[error("corresponding corners coincide at {0}")]
    CoincidentCorner(Point),
    #[error("map is not certifiably fixed-point free (min displacement {min_displacement:e})")]
    NearFixedPoint { min_displacement: f64 },
    #[error("maps cannot be glued: {0}")]
    GluingMismatch(String),
    #[error("configurations have different labels")]
    LabelMismatch,
    #[error("knots are not monotone: {0}")]
    NonMonotone(String),
    #[error("point {0} is not on the curve")]
    NotOnCurve(Point),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Where an arc of a boundary curve begins or ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    /// Closed arc with no corner at all.
    Free,
    /// Point where the circle of the first label runs into the disk of the second.
    Crossing(u32, u32),
    /// Tangency of two disks, smaller label first.
    Tangency(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledArc {
    pub arc: Arc,
    pub label: u32,
    pub start: Corner,
    pub end: Corner,
}

/// A closed curve made of circular arcs, parametrized by normalized arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcCurve {
    arcs: Vec<LabeledArc>,
    cum: Vec<f64>,
    total: f64,
}

impl ArcCurve {
    pub fn new(arcs: Vec<LabeledArc>) -> ArcCurve {
        let mut cum = Vec::with_capacity(arcs.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for a in &arcs {
            acc += a.arc.length();
            cum.push(acc);
        }
        let total = acc;
        for c in cum.iter_mut() {
            *c /= total;
        }
        *cum.last_mut().unwrap() = 1.0;
        ArcCurve { arcs, cum, total }
    }

    /// Full circle, counterclockwise from `start`.
    pub fn circle(disk: Disk, label: u32, start: f64) -> ArcCurve {
        ArcCurve::new(vec![LabeledArc {
            arc: Arc { disk, start, sweep: TAU },
            label,
            start: Corner::Free,
            end: Corner::Free,
        }])
    }

    /// Lens boundary starting at `u`: the first circle's arc, then the second's.
    pub fn eye(eye: &Eye) -> ArcCurve {
        let (i, j) = eye.pair;
        ArcCurve::new(vec![
            LabeledArc {
                arc: eye.arc_on_first,
                label: i,
                start: Corner::Crossing(i, j),
                end: Corner::Crossing(j, i),
            },
            LabeledArc {
                arc: eye.arc_on_second,
                label: j,
                start: Corner::Crossing(j, i),
                end: Corner::Crossing(i, j),
            },
        ])
    }

    pub fn arcs(&self) -> &[LabeledArc] {
        &self.arcs
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Parameter where arc `k` starts; `arc_start(len)` is 1.
    pub fn arc_start(&self, k: usize) -> f64 {
        self.cum[k]
    }

    /// Arc index and fraction along it for a parameter (taken mod 1).
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(1.0);
        let k = match self.cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(k) => k.min(self.arcs.len() - 1),
            Err(k) => k.saturating_sub(1),
        };
        let span = self.cum[k + 1] - self.cum[k];
        let f = if span > 0.0 { ((s - self.cum[k]) / span).clamp(0.0, 1.0) } else { 0.0 };
        (k, f)
    }

    pub fn point_at(&self, s: f64) -> Point {
        let (k, f) = self.locate(s);
        self.arcs[k].arc.point_at(f)
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_at(&self, s: f64) -> Point {
        let (k, f) = self.locate(s);
        let a = &self.arcs[k].arc;
        let radial = Point::polar(1.0, a.start + f * a.sweep);
        if a.sweep >= 0.0 {
            radial.perp()
        } else {
            -radial.perp()
        }
    }

    /// Radius of the arc carrying parameter `s`.
    pub fn radius_at(&self, s: f64) -> f64 {
        self.arcs[self.locate(s).0].arc.disk.radius
    }

    pub fn signed_area(&self) -> f64 {
        let mut acc = 0.0;
        for a in &self.arcs {
            let Arc { disk, start, sweep } = a.arc;
            let (c, r) = (disk.center, disk.radius);
            let (t0, t1) = (start, start + sweep);
            acc += r * c.x * (t1.sin() - t0.sin()) - r * c.y * (t1.cos() - t0.cos()) + r * r * sweep;
        }
        acc / 2.0
    }

    pub fn is_positive(&self) -> bool {
        self.signed_area() > 0.0
    }

    /// Distance from `p` to the curve.
    pub fn distance(&self, p: Point) -> f64 {
        self.arcs
            .iter()
            .map(|a| arc_distance(&a.arc, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the curve about `p`.
    pub fn winding(&self, p: Point) -> Result<i32, IndexError> {
        let dmin = self.distance(p);
        if dmin <= EPS_GEOM {
            return Err(IndexError::PointOnCurve);
        }
        let mut total = 0.0;
        for a in &self.arcs {
            let r = a.arc.disk.radius;
            // sagitta of each chord stays well below the clearance
            let ratio = (1.0 - (dmin / (4.0 * r)).min(1.0)).clamp(-1.0, 1.0);
            let max_step = (2.0 * ratio.acos()).clamp(1e-6, PI / 8.0);
            let n = (a.arc.sweep.abs() / max_step).ceil().max(1.0) as usize;
            let mut prev = a.arc.point_at(0.0) - p;
            for k in 1..=n {
                let cur = a.arc.point_at(k as f64 / n as f64) - p;
                total += prev.cross(cur).atan2(prev.dot(cur));
                prev = cur;
            }
        }
        Ok((total / TAU).round() as i32)
    }

    /// Parameter of a point lying on the curve (within `tol`).
    pub fn param_of(&self, p: Point, tol: f64) -> Option<f64> {
        let mut best: Option<(f64, f64)> = None;
        for (k, a) in self.arcs.iter().enumerate() {
            let t = a.arc.disk.angle_of(p);
            let off = if a.arc.sweep >= 0.0 {
                ccw_sweep(a.arc.start, t)
            } else {
                ccw_sweep(t, a.arc.start)
            };
            let f = if off <= a.arc.sweep.abs() {
                off / a.arc.sweep.abs()
            } else if off - a.arc.sweep.abs() < TAU - off {
                1.0
            } else {
                0.0
            };
            let q = a.arc.point_at(f);
            let d = q.dist(p);
            if d <= tol && best.map(|(bd, _)| d < bd).unwrap_or(true) {
                let s = self.cum[k] + f * (self.cum[k + 1] - self.cum[k]);
                best = Some((d, s.rem_euclid(1.0)));
            }
        }
        best.map(|(_, s)| s)
    }

    /// Same curve with parametrization starting at arc `k`.
    pub fn rotated(&self, k: usize) -> ArcCurve {
        let n = self.arcs.len();
        ArcCurve::new((0..n).map(|i| self.arcs[(k + i) % n]).collect())
    }

    /// Dense samples with labels.
    pub fn to_oriented(&self, sampling: &Sampling) -> OrientedCurve {
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        let mut corners = Vec::new();
        let step = TAU / sampling.base_divisions as f64;
        for a in &self.arcs {
            corners.push(samples.len());
            let n = (a.arc.sweep.abs() / step).ceil().max(1.0) as usize;
            for k in 0..n {
                samples.push(a.arc.point_at(k as f64 / n as f64));
                labels.push(a.label);
            }
        }
        let orientation = if self.is_positive() { Orientation::Positive } else { Orientation::Negative };
        OrientedCurve { samples, labels, corners, orientation }
    }
}

fn arc_distance(a: &Arc, p: Point) -> f64 {
    let t = a.disk.angle_of(p);
    if a.covers_angle(t, 0.0) {
        (p.dist(a.disk.center) - a.disk.radius).abs()
    } else {
        p.dist(a.start_point()).min(p.dist(a.end_point()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

/// A sampled closed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedCurve {
    pub samples: Vec<Point>,
    /// Owning disk label of each sample.
    pub labels: Vec<u32>,
    /// Sample indices where an arc begins.
    pub corners: Vec<usize>,
    pub orientation: Orientation,
}

/// Winding number of a sampled closed curve about `z`.
pub fn winding_number(curve: &OrientedCurve, z: Point) -> Result<i32, IndexError> {
    let n = curve.samples.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = curve.samples[k] - z;
        let b = curve.samples[(k + 1) % n] - z;
        if a.norm() <= EPS_GEOM {
            return Err(IndexError::PointOnCurve);
        }
        total += a.cross(b).atan2(a.dot(b));
    }
    let w = total / TAU;
    let r = w.round();
    if (w - r).abs() >= 0.01 {
        return Err(IndexError::PointOnCurve);
    }
    Ok(r as i32)
}

/// Counterclockwise samples of a circle with the given corners inserted exactly.
pub fn sample_disk_boundary(d: &Disk, corners: &[Point]) -> Result<OrientedCurve, IndexError> {
    let mut marks: Vec<(f64, Point)> = Vec::new();
    for &c in corners {
        if d.signed_dist(c).abs() > EPS_GEOM {
            return Err(IndexError::CornerOffBoundary(c));
        }
        marks.push((wrap_angle(d.angle_of(c)), c));
    }
    let base = 512;
    let mut pts: Vec<(f64, Point, bool)> = (0..base)
        .map(|k| {
            let t = TAU * k as f64 / base as f64;
            (t, d.point_at(t), false)
        })
        .collect();
    for (t, c) in marks {
        pts.push((t, c, true));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)));
    // a corner replaces a grid sample at the same angle
    pts.dedup_by(|b, a| (b.0 - a.0).abs() < 1e-15);
    let corners_idx = pts.iter().enumerate().filter(|(_, p)| p.2).map(|(i, _)| i).collect();
    let samples: Vec<Point> = pts.into_iter().map(|p| p.1).collect();
    Ok(OrientedCurve {
        labels: vec![0; samples.len()],
        samples,
        corners: corners_idx,
        orientation: Orientation::Positive,
    })
}

/// The union boundary of a configuration as closed arc curves.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryComplex {
    pub curves: Vec<ArcCurve>,
}

impl BoundaryComplex {
    pub fn sampled(&self, sampling: &Sampling) -> Vec<OrientedCurve> {
        self.curves.iter().map(|c| c.to_oriented(sampling)).collect()
    }
}

struct CircleEvents {
    /// Covered intervals: (start angle, sweep, start corner, end corner).
    covered: Vec<(f64, f64, Corner, Corner)>,
    tangencies: Vec<(f64, Corner)>,
}

fn circle_events(c: &DiskConfiguration, i: usize) -> Result<CircleEvents, IndexError> {
    let d = c.disks()[i];
    let li = c.labels()[i];
    let mut covered = Vec::new();
    let mut tangencies = Vec::new();
    for (j, e) in c.disks().iter().enumerate() {
        if j == i {
            continue;
        }
        let lj = c.labels()[j];
        match disk_relation(&d, e) {
            DiskRelation::Overlapping => {
                let (u, v) = circle_intersections(&d, e).expect("overlapping");
                let (tu, tv) = (d.angle_of(u), d.angle_of(v));
                covered.push((wrap_angle(tu), ccw_sweep(tu, tv), Corner::Crossing(li, lj), Corner::Crossing(lj, li)));
            }
            DiskRelation::ExternallyTangent => {
                let p = tangency_point(&d, e).expect("tangent");
                let key = Corner::Tangency(li.min(lj), li.max(lj));
                tangencies.push((wrap_angle(d.angle_of(p)), key));
            }
            DiskRelation::Disjoint => {}
            _ => return Err(ConfigError::ContainmentViolation(li, lj).into()),
        }
    }
    Ok(CircleEvents { covered, tangencies })
}

/// Exposed arcs of circle `i`, each split at tangency points.
fn exposed_arcs(c: &DiskConfiguration, i: usize) -> Result<Vec<LabeledArc>, IndexError> {
    let d = c.disks()[i];
    let label = c.labels()[i];
    let ev = circle_events(c, i)?;
    // gaps between merged covered intervals: (start, sweep, start corner, end corner)
    let mut gaps: Vec<(f64, f64, Corner, Corner)> = Vec::new();
    if ev.covered.is_empty() {
        gaps.push((0.0, TAU, Corner::Free, Corner::Free));
    } else {
        let iv = &ev.covered;
        // an interval start not strictly covered by another interval
        let uncovered = |k: usize| {
            !iv.iter().enumerate().any(|(m, o)| {
                let off = ccw_sweep(o.0, iv[k].0);
                m != k && off > 0.0 && off < o.1
            })
        };
        let Some(first) = (0..iv.len()).find(|&k| uncovered(k)) else {
            return Ok(Vec::new());
        };
        let origin = iv[first].0;
        let mut order: Vec<(f64, f64, Corner, Corner)> = iv
            .iter()
            .enumerate()
            .map(|(k, x)| (if k == first { 0.0 } else { ccw_sweep(origin, x.0) }, x.1, x.2, x.3))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64, Corner, Corner)> = Vec::new();
        for (s, w, cs, ce) in order {
            if let Some(last) = merged.last_mut() {
                if s <= last.1 {
                    if s + w > last.1 {
                        last.1 = s + w;
                        last.3 = ce;
                    }
                    continue;
                }
            }
            merged.push((s, s + w, cs, ce));
        }
        for k in 0..merged.len() {
            let (_, end, _, ce) = merged[k];
            let (next, ncs) = match merged.get(k + 1) {
                Some(m) => (m.0, m.2),
                None => (TAU, merged[0].2),
            };
            if next > end {
                gaps.push((wrap_angle(origin + end), next - end, ce, ncs));
            }
        }
    }
    let mut out = Vec::new();
    for (start, sweep, cs, ce) in gaps {
        let mut cuts: Vec<(f64, Corner)> = ev
            .tangencies
            .iter()
            .filter_map(|&(t, key)| {
                let off = ccw_sweep(start, t);
                let whole = cs == Corner::Free;
                (whole || (off > 1e-12 && off < sweep - 1e-12)).then_some((off, key))
            })
            .collect();
        if sweep >= TAU && cuts.is_empty() {
            out.push(LabeledArc { arc: Arc { disk: d, start, sweep }, label, start: cs, end: ce });
            continue;
        }
        cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if sweep >= TAU {
            // closed circle split only at tangencies: start at the first one
            let base = start + cuts[0].0;
            let firstkey = cuts[0].1;
            let rel: Vec<(f64, Corner)> = cuts.iter().map(|&(o, k)| (o - cuts[0].0, k)).collect();
            for k in 0..rel.len() {
                let (o, key) = rel[k];
                let (next, nkey) = if k + 1 < rel.len() { rel[k + 1] } else { (TAU, firstkey) };
                out.push(LabeledArc {
                    arc: Arc { disk: d, start: wrap_angle(base + o), sweep: next - o },
                    label,
                    start: key,
                    end: nkey,
                });
            }
            continue;
        }
        let mut prev = (0.0, cs);
        for &(o, key) in &cuts {
            out.push(LabeledArc {
                arc: Arc { disk: d, start: wrap_angle(start + prev.0), sweep: o - prev.0 },
                label,
                start: prev.1,
                end: key,
            });
            prev = (o, key);
        }
        out.push(LabeledArc {
            arc: Arc { disk: d, start: wrap_angle(start + prev.0), sweep: sweep - prev.0 },
            label,
            start: prev.1,
            end: ce,
        });
    }
    Ok(out)
}

/// Trace the boundary of the union of the disks.
pub fn boundary_complex(c: &DiskConfiguration) -> Result<BoundaryComplex, IndexError> {
    let mut arcs: Vec<LabeledArc> = Vec::new();
    for i in 0..c.len() {
        arcs.extend(exposed_arcs(c, i)?);
    }
    // successor lookup: crossings hand over to the other disk, tangencies stay on the circle
    let mut by_start: HashMap<(u32, Corner), usize> = HashMap::new();
    for (k, a) in arcs.iter().enumerate() {
        let key = match a.start {
            Corner::Crossing(x, y) => (y, Corner::Crossing(x, y)),
            other => (a.label, other),
        };
        if by_start.insert(key, k).is_some() && a.start != Corner::Free {
            return Err(IndexError::DegenerateContact(format!(
                "two arcs start at {:?}",
                a.start
            )));
        }
    }
    let mut used = vec![false; arcs.len()];
    let mut curves = Vec::new();
    for k0 in 0..arcs.len() {
        if used[k0] {
            continue;
        }
        let mut seq = Vec::new();
        let mut k = k0;
        loop {
            if used[k] {
                if k != k0 {
                    return Err(IndexError::DegenerateContact("arc reached twice".into()));
                }
                break;
            }
            used[k] = true;
            seq.push(arcs[k]);
            let a = &arcs[k];
            if a.end == Corner::Free {
                break;
            }
            let key = match a.end {
                Corner::Crossing(x, y) => (y, Corner::Crossing(x, y)),
                other => (a.label, other),
            };
            k = *by_start.get(&key).ok_or_else(|| {
                IndexError::DegenerateContact(format!("no arc continues at {:?}", a.end))
            })?;
        }
        curves.push(ArcCurve::new(seq));
    }
    Ok(BoundaryComplex { curves })
}

/// Sampling density for index computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub base_divisions: usize,
    pub refine_factor: usize,
    pub refine_radius: f64,
    pub min_divisions: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { base_divisions: 512, refine_factor: 8, refine_radius: 0.05, min_divisions: 8192 }
    }
}

impl Sampling {
    pub fn doubled(&self) -> Sampling {
        Sampling {
            base_divisions: self.base_divisions * 2,
            min_divisions: self.min_divisions * 2,
            ..*self
        }
    }
}

/// Orientation-preserving map between two closed arc curves, piecewise linear in
/// normalized arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMap {
    pub source: ArcCurve,
    pub target: ArcCurve,
    knots: Vec<(f64, f64)>,
}

impl CurveMap {
    /// Knots `(s, t)`: `s` strictly increasing over less than one turn, same for `t`.
    pub fn new(source: ArcCurve, target: ArcCurve, mut knots: Vec<(f64, f64)>) -> Result<CurveMap, IndexError> {
        if knots.is_empty() {
            return Err(IndexError::NonMonotone("no knots".into()));
        }
        let (s0, t0) = knots[0];
        let s0n = s0.rem_euclid(1.0);
        let shift_t = t0 - (s0 - s0n);
        let _ = shift_t;
        // normalize so the first knot has s in [0,1)
        let ds = s0 - s0n;
        for k in knots.iter_mut() {
            k.0 -= ds;
            k.1 -= ds;
        }
        let (s0, t0) = knots[0];
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(IndexError::NonMonotone(format!("{:?} then {:?}", w[0], w[1])));
            }
        }
        let (sl, tl) = *knots.last().unwrap();
        if !(sl < s0 + 1.0 && tl < t0 + 1.0) {
            return Err(IndexError::NonMonotone("knots exceed one turn".into()));
        }
        Ok(CurveMap { source, target, knots })
    }

    /// Arcs map to arcs of the same index, proportionally.
    pub fn arc_proportional(source: ArcCurve, target: ArcCurve) -> Result<CurveMap, IndexError> {
        if source.arcs.len() != target.arcs.len() {
            return Err(IndexError::CombinatoricsMismatch("arc counts differ".into()));
        }
        let knots = (0..source.arcs.len())
            .map(|k| (source.arc_start(k), target.arc_start(k)))
            .collect();
        CurveMap::new(source, target, knots)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Target parameter (unwrapped) of a source parameter.
    pub fn eval(&self, s: f64) -> f64 {
        let (s0, t0) = self.knots[0];
        let turns = ((s - s0) / 1.0).floor();
        let x = s - turns;
        let n = self.knots.len();
        let mut k = match self.knots.binary_search_by(|kn| kn.0.total_cmp(&x)) {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        if k >= n {
            k = n - 1;
        }
        let (a, b) = (self.knots[k], if k + 1 < n { self.knots[k + 1] } else { (s0 + 1.0, t0 + 1.0) });
        let f = (x - a.0) / (b.0 - a.0);
        a.1 + f * (b.1 - a.1) + turns
    }

    pub fn inverse(&self) -> CurveMap {
        let knots = self.knots.iter().map(|&(s, t)| (t, s)).collect();
        CurveMap::new(self.target.clone(), self.source.clone(), knots).expect("inverse of monotone map")
    }

    /// Insert a knot at `(s, t)`; must keep the map monotone.
    pub fn with_knot(&self, s: f64, t: f64) -> Result<CurveMap, IndexError> {
        let (s0, t0) = self.knots[0];
        let s = s0 + (s - s0).rem_euclid(1.0);
        let t = t0 + (t - t0).rem_euclid(1.0);
        let mut knots = self.knots.clone();
        knots.push((s, t));
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        CurveMap::new(self.source.clone(), self.target.clone(), knots)
    }

    pub fn displacement(&self, s: f64) -> Point {
        self.target.point_at(self.eval(s)) - self.source.point_at(s)
    }

    /// Winding of the displacement curve, certified between samples.
    pub fn winding(&self, sampling: &Sampling) -> Result<(i32, f64), IndexError> {
        let params = self.sample_params(sampling);
        let ls = self.source.total;
        let lt = self.target.total;
        let mut total = 0.0;
        let mut min_d = f64::INFINITY;
        let min_ang = TAU / sampling.min_divisions as f64;
        let mut stack: Vec<(f64, f64, Point, Point, u32)> = Vec::new();
        for w in params.windows(2) {
            let (sa, sb) = (w[0], w[1]);
            let da = self.displacement(sa);
            let db = self.displacement(sb);
            stack.push((sa, sb, da, db, 0));
            while let Some((sa, sb, da, db, depth)) = stack.pop() {
                min_d = min_d.min(da.norm()).min(db.norm());
                let ta = self.eval(sa);
                let tb = self.eval(sb);
                let bound = (sb - sa) * ls + (tb - ta) * lt;
                if da.norm() + db.norm() > bound * (1.0 + 1e-9) + 1e-15 {
                    total += da.cross(db).atan2(da.dot(db));
                    continue;
                }
                let ang_s = (sb - sa) * ls / self.source.radius_at(sa);
                let ang_t = (tb - ta) * lt / self.target.radius_at(ta);
                if (ang_s < min_ang && ang_t < min_ang) || depth > 40 {
                    return Err(IndexError::NearFixedPoint { min_displacement: min_d });
                }
                let sm = 0.5 * (sa + sb);
                let dm = self.displacement(sm);
                // process the left half first
                stack.push((sm, sb, dm, db, depth + 1));
                stack.push((sa, sm, da, dm, depth + 1));
            }
        }
        if min_d <= 10.0 * EPS_GEOM {
            return Err(IndexError::NearFixedPoint { min_displacement: min_d });
        }
        let w = total / TAU;
        let r = w.round();
        if (w - r).abs() > 1e-6 {
            return Err(IndexError::NearFixedPoint { min_displacement: min_d });
        }
        Ok((r as i32, min_d))
    }

    fn sample_params(&self, sampling: &Sampling) -> Vec<f64> {
        let (s0, _) = self.knots[0];
        let mut v: Vec<f64> = Vec::new();
        let step = TAU / sampling.base_divisions as f64;
        let fine = step / sampling.refine_factor as f64;
        let push_curve = |curve: &ArcCurve, out: &mut Vec<f64>| {
            for (k, a) in curve.arcs.iter().enumerate() {
                let sw = a.arc.sweep.abs();
                let (p0, p1) = (curve.cum[k], curve.cum[k + 1]);
                let n = (sw / step).ceil().max(1.0) as usize;
                for m in 0..n {
                    out.push(p0 + (p1 - p0) * m as f64 / n as f64);
                }
                let zone = sampling.refine_radius.min(sw / 2.0);
                let nf = (zone / fine).ceil() as usize;
                for m in 1..nf {
                    let f = m as f64 * fine / sw;
                    if f < 0.5 {
                        out.push(p0 + (p1 - p0) * f);
                        out.push(p1 - (p1 - p0) * f);
                    }
                }
            }
        };
        let mut src = Vec::new();
        push_curve(&self.source, &mut src);
        let mut tgt = Vec::new();
        push_curve(&self.target, &mut tgt);
        let inv = self.inverse();
        for s in src {
            v.push(s0 + (s - s0).rem_euclid(1.0));
        }
        for t in tgt {
            let s = inv.eval(t);
            v.push(s0 + (s - s0).rem_euclid(1.0));
        }
        for &(s, _) in &self.knots {
            v.push(s);
        }
        v.push(s0 + 1.0);
        v.sort_by(f64::total_cmp);
        v.dedup_by(|b, a| (*b - *a).abs() < 1e-14);
        if let Some(l) = v.last_mut() {
            *l = s0 + 1.0;
        }
        v
    }
}

/// A boundary map for a possibly multiply connected region: one map per curve pair.
#[derive(Debug, Clone, PartialEq)]
pub struct FaithfulMap {
    pub pairs: Vec<CurveMap>,
}

impl FaithfulMap {
    pub fn inverse(&self) -> FaithfulMap {
        FaithfulMap { pairs: self.pairs.iter().map(CurveMap::inverse).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub eta: i32,
    pub per_curve: Vec<i32>,
    pub min_displacement: f64,
}

pub fn fixed_point_index(map: &FaithfulMap) -> Result<IndexReport, IndexError> {
    fixed_point_index_with(map, &Sampling::default())
}

pub fn fixed_point_index_with(map: &FaithfulMap, sampling: &Sampling) -> Result<IndexReport, IndexError> {
    let mut per_curve = Vec::new();
    let mut min_d = f64::INFINITY;
    for m in &map.pairs {
        let (w, d) = m.winding(sampling)?;
        per_curve.push(w);
        min_d = min_d.min(d);
    }
    Ok(IndexReport { eta: per_curve.iter().sum(), per_curve, min_displacement: min_d })
}

/// As `fixed_point_index`, refining the certification floor by factors of 16
/// up to 2π/2²² before giving up on a near fixed point.
pub fn fixed_point_index_refined(map: &FaithfulMap) -> Result<IndexReport, IndexError> {
    let mut sampling = Sampling::default();
    loop {
        match fixed_point_index_with(map, &sampling) {
            Err(IndexError::NearFixedPoint { .. }) if sampling.min_divisions < 1 << 22 => sampling.min_divisions *= 16,
            r => return r,
        }
    }
}

/// Index of a single curve map.
pub fn curve_index(map: &CurveMap) -> Result<i32, IndexError> {
    map.winding(&Sampling::default()).map(|(w, _)| w)
}

fn arc_key(a: &LabeledArc) -> (u32, Corner, Corner) {
    (a.label, a.start, a.end)
}

/// Match each source curve to the target curve with the same arc sequence.
pub fn pair_curves(
    src: &BoundaryComplex,
    tgt: &BoundaryComplex,
) -> Result<Vec<(ArcCurve, ArcCurve)>, IndexError> {
    if src.curves.len() != tgt.curves.len() {
        return Err(IndexError::CombinatoricsMismatch(format!(
            "{} curves against {}",
            src.curves.len(),
            tgt.curves.len()
        )));
    }
    let mut index: HashMap<(u32, Corner, Corner), (usize, usize)> = HashMap::new();
    for (ci, c) in tgt.curves.iter().enumerate() {
        for (ai, a) in c.arcs.iter().enumerate() {
            index.insert(arc_key(a), (ci, ai));
        }
    }
    let mut used = vec![false; tgt.curves.len()];
    let mut out = Vec::new();
    for c in &src.curves {
        let first = arc_key(&c.arcs[0]);
        let &(ci, ai) = index
            .get(&first)
            .ok_or_else(|| IndexError::CombinatoricsMismatch(format!("no arc {first:?} in target")))?;
        let t = &tgt.curves[ci];
        if used[ci] || t.arcs.len() != c.arcs.len() {
            return Err(IndexError::CombinatoricsMismatch("curve arc counts differ".into()));
        }
        let n = c.arcs.len();
        for k in 0..n {
            if arc_key(&c.arcs[k]) != arc_key(&t.arcs[(ai + k) % n]) {
                return Err(IndexError::CombinatoricsMismatch(format!(
                    "arc sequence differs at {:?}",
                    arc_key(&c.arcs[k])
                )));
            }
        }
        used[ci] = true;
        out.push((c.clone(), t.rotated(ai)));
    }
    Ok(out)
}

fn check_corners(pairs: &[(ArcCurve, ArcCurve)]) -> Result<(), IndexError> {
    for (s, t) in pairs {
        for (a, b) in s.arcs.iter().zip(&t.arcs) {
            if a.start == Corner::Free {
                continue;
            }
            let p = a.arc.start_point();
            if p.dist(b.arc.start_point()) <= 10.0 * EPS_GEOM {
                return Err(IndexError::CoincidentCorner(p));
            }
        }
    }
    Ok(())
}

/// The arc-proportional faithful map between two configuration boundaries.
pub fn build_faithful_map(c: &DiskConfiguration, ct: &DiskConfiguration) -> Result<FaithfulMap, IndexError> {
    build_faithful_map_with(c, ct, &[])
}

/// Faithful map that is arc-proportional between corners and the given
/// identifications; each anchor pair is projected onto its arcs by angle.
pub fn build_faithful_map_with(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
    anchors: &[(Point, Point)],
) -> Result<FaithfulMap, IndexError> {
    if c.labels() != ct.labels() {
        return Err(IndexError::LabelMismatch);
    }
    let pairs = pair_curves(&boundary_complex(c)?, &boundary_complex(ct)?)?;
    check_corners(&pairs)?;
    let mut maps = Vec::new();
    for (s, t) in pairs {
        let mut m = CurveMap::arc_proportional(s, t)?;
        for &(p, q) in anchors {
            let Some((k, fs)) = project_to_curve(&m.source, p) else { continue };
            let (_, ft) = match project_to_arc(&m.target.arcs[k].arc, q) {
                Some(f) => (k, f),
                None => return Err(IndexError::NotOnCurve(q)),
            };
            let sp = m.source.cum[k] + fs * (m.source.cum[k + 1] - m.source.cum[k]);
            let tp = m.target.cum[k] + ft * (m.target.cum[k + 1] - m.target.cum[k]);
            m = m.with_knot(sp, tp)?;
        }
        maps.push(m);
    }
    Ok(FaithfulMap { pairs: maps })
}

/// Arc index and fraction of the arc nearest to `p` whose angular range covers it.
fn project_to_curve(curve: &ArcCurve, p: Point) -> Option<(usize, f64)> {
    let mut best: Option<(f64, usize, f64)> = None;
    for (k, a) in curve.arcs.iter().enumerate() {
        if let Some(f) = project_to_arc(&a.arc, p) {
            let d = (p.dist(a.arc.disk.center) - a.arc.disk.radius).abs();
            if best.map(|b| d < b.0).unwrap_or(true) {
                best = Some((d, k, f));
            }
        }
    }
    best.filter(|b| b.0 < 0.25).map(|b| (b.1, b.2))
}

fn project_to_arc(a: &Arc, p: Point) -> Option<f64> {
    let t = a.disk.angle_of(p);
    let off = if a.sweep >= 0.0 { ccw_sweep(a.start, t) } else { ccw_sweep(t, a.start) };
    (off > 0.0 && off < a.sweep.abs()).then(|| off / a.sweep.abs())
}

/// Monotone angle map of one circle onto another.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMap {
    pub source: Disk,
    pub target: Disk,
    /// `(θ, θ̃)` with `θ` increasing over less than a turn and `θ̃` unwrapped.
    knots: Vec<(f64, f64)>,
}

impl CircleMap {
    fn new(source: Disk, target: Disk, knots: Vec<(f64, f64)>) -> CircleMap {
        CircleMap { source, target, knots }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (a0, b0) = self.knots[0];
        let turns = ((theta - a0) / TAU).floor();
        let x = theta - turns * TAU;
        let n = self.knots.len();
        let k = match self.knots.binary_search_by(|kn| kn.0.total_cmp(&x)) {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        }
        .min(n - 1);
        let a = self.knots[k];
        let b = if k + 1 < n { self.knots[k + 1] } else { (a0 + TAU, b0 + TAU) };
        a.1 + (x - a.0) / (b.0 - a.0) * (b.1 - a.1) + turns * TAU
    }

    /// Knots with source angle strictly inside `(from, from + sweep)`.
    fn knots_within(&self, from: f64, sweep: f64) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self
            .knots
            .iter()
            .filter_map(|&(a, _)| {
                let off = ccw_sweep(from, a);
                (off > 1e-12 && off < sweep - 1e-12).then(|| (off, self.eval(from + off)))
            })
            .collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        v
    }

    /// As a curve map between the two full circles.
    pub fn to_curve_map(&self, label: u32) -> CurveMap {
        let (a0, b0) = self.knots[0];
        let s = ArcCurve::circle(self.source, label, a0);
        let t = ArcCurve::circle(self.target, label, b0);
        let knots = self.knots.iter().map(|&(a, b)| ((a - a0) / TAU, (b - b0) / TAU)).collect();
        CurveMap::new(s, t, knots).expect("monotone circle map")
    }
}

/// One circle map per disk; every boundary map of the pair is read off from these.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskMaps {
    pub source: DiskConfiguration,
    pub target: DiskConfiguration,
    maps: Vec<CircleMap>,
}

fn corner_list(c: &DiskConfiguration, i: usize) -> Result<Vec<(f64, Corner)>, IndexError> {
    let ev = circle_events(c, i)?;
    let d = c.disks()[i];
    let mut v: Vec<(f64, Corner)> = Vec::new();
    for (s, w, cs, ce) in ev.covered {
        v.push((s, cs));
        v.push((wrap_angle(s + w), ce));
    }
    v.extend(ev.tangencies);
    let _ = d;
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(v)
}

impl DiskMaps {
    /// Arc-proportional maps between all corners on each circle.
    pub fn arc_proportional(c: &DiskConfiguration, ct: &DiskConfiguration) -> Result<DiskMaps, IndexError> {
        if c.labels() != ct.labels() {
            return Err(IndexError::LabelMismatch);
        }
        let mut maps = Vec::new();
        for i in 0..c.len() {
            let a = corner_list(c, i)?;
            let b = corner_list(ct, i)?;
            if a.len() != b.len() {
                return Err(IndexError::CombinatoricsMismatch(format!(
                    "disk {} has {} corners against {}",
                    c.labels()[i],
                    a.len(),
                    b.len()
                )));
            }
            let (d, dt) = (c.disks()[i], ct.disks()[i]);
            if a.is_empty() {
                maps.push(CircleMap::new(d, dt, vec![(0.0, 0.0)]));
                continue;
            }
            let off = b
                .iter()
                .position(|x| x.1 == a[0].1)
                .ok_or_else(|| IndexError::CombinatoricsMismatch(format!("corner {:?} missing", a[0].1)))?;
            let n = a.len();
            let mut knots = Vec::with_capacity(n);
            let base = b[off].0;
            for k in 0..n {
                let (ta, ka) = a[k];
                let (tb, kb) = b[(off + k) % n];
                if ka != kb {
                    return Err(IndexError::CombinatoricsMismatch(format!(
                        "corner order differs on disk {}",
                        c.labels()[i]
                    )));
                }
                knots.push((ta, base + ccw_sweep(base, tb)));
            }
            for k in 1..n {
                if knots[k].1 <= knots[k - 1].1 {
                    knots[k].1 += TAU;
                }
            }
            maps.push(CircleMap::new(d, dt, knots));
        }
        Ok(DiskMaps { source: c.clone(), target: ct.clone(), maps })
    }

    pub fn circle_map(&self, label: u32) -> Option<&CircleMap> {
        self.source.index_of(label).map(|i| &self.maps[i])
    }

    /// Full-circle map for one disk.
    pub fn disk_map(&self, label: u32) -> Result<CurveMap, IndexError> {
        let i = self.source.index_of(label).ok_or(IndexError::LabelMismatch)?;
        Ok(self.maps[i].to_curve_map(label))
    }

    fn curve_map_on(&self, s: ArcCurve, t: ArcCurve) -> Result<CurveMap, IndexError> {
        let mut knots = Vec::new();
        let mut t_arcs = t.arcs.clone();
        for (k, a) in s.arcs.iter().enumerate() {
            let i = self.source.index_of(a.label).ok_or(IndexError::LabelMismatch)?;
            let cm = &self.maps[i];
            if a.start == Corner::Free {
                // closed arc: the target circle starts where the source start lands
                t_arcs[k].arc.start = wrap_angle(cm.eval(a.arc.start));
            }
        }
        let t = ArcCurve::new(t_arcs);
        for (k, a) in s.arcs.iter().enumerate() {
            let i = self.source.index_of(a.label).ok_or(IndexError::LabelMismatch)?;
            let cm = &self.maps[i];
            let b = &t.arcs[k];
            let image = cm.eval(a.arc.start);
            if ccw_sweep(b.arc.start, image).min(ccw_sweep(image, b.arc.start)) > 1e-7 {
                return Err(IndexError::CombinatoricsMismatch(format!(
                    "corner of disk {} does not map to its partner",
                    a.label
                )));
            }
            let (p0, p1) = (s.cum[k], s.cum[k + 1]);
            let (q0, q1) = (t.cum[k], t.cum[k + 1]);
            knots.push((p0, q0));
            for (off, img) in cm.knots_within(a.arc.start, a.arc.sweep) {
                let toff = ccw_sweep(b.arc.start, img);
                knots.push((
                    p0 + (p1 - p0) * off / a.arc.sweep,
                    q0 + (q1 - q0) * toff / b.arc.sweep,
                ));
            }
        }
        CurveMap::new(s, t, knots)
    }

    /// The induced faithful map on the boundary of the sub-configuration `keep`.
    pub fn restrict(&self, keep: &[u32]) -> Result<FaithfulMap, IndexError> {
        let cs = self.source.restrict(keep);
        let ct = self.target.restrict(keep);
        let pairs = pair_curves(&boundary_complex(&cs)?, &boundary_complex(&ct)?)?;
        let maps = pairs
            .into_iter()
            .map(|(s, t)| self.curve_map_on(s, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FaithfulMap { pairs: maps })
    }

    pub fn full(&self) -> Result<FaithfulMap, IndexError> {
        self.restrict(self.source.labels())
    }

    fn eye_pair(&self, i: u32, j: u32) -> Result<(Eye, Eye), IndexError> {
        let (i, j) = (i.min(j), i.max(j));
        let (a, b) = (
            *self.source.get(i).ok_or(IndexError::LabelMismatch)?,
            *self.source.get(j).ok_or(IndexError::LabelMismatch)?,
        );
        let (at, bt) = (
            *self.target.get(i).ok_or(IndexError::LabelMismatch)?,
            *self.target.get(j).ok_or(IndexError::LabelMismatch)?,
        );
        let e = Eye::labeled((i, j), a, b).map_err(ConfigError::from)?;
        let et = Eye::labeled((i, j), at, bt).map_err(ConfigError::from)?;
        Ok((e, et))
    }

    /// The eye map read off from the two circle maps.
    pub fn eye_map(&self, i: u32, j: u32) -> Result<CurveMap, IndexError> {
        let (e, et) = self.eye_pair(i, j)?;
        self.curve_map_on(ArcCurve::eye(&e), ArcCurve::eye(&et))
    }

    /// Replace the circle maps along the eye of `(i, j)` by a given faithful eye map.
    pub fn set_eye_map(&mut self, i: u32, j: u32, eps: &CurveMap) -> Result<(), IndexError> {
        let (i, j) = (i.min(j), i.max(j));
        let (e, et) = self.eye_pair(i, j)?;
        let s = ArcCurve::eye(&e);
        let t = ArcCurve::eye(&et);
        let corner_ok = (eps.eval(0.0) - 0.0).rem_euclid(1.0).min((0.0 - eps.eval(0.0)).rem_euclid(1.0)) < 1e-9
            && {
                let tv = eps.eval(s.cum[1]) - t.cum[1];
                tv.rem_euclid(1.0).min((-tv).rem_euclid(1.0)) < 1e-9
            };
        if !corner_ok {
            return Err(IndexError::GluingMismatch("eye map does not fix the corners".into()));
        }
        for (k, label) in [(0usize, i), (1usize, j)] {
            let idx = self.source.index_of(label).unwrap();
            let sa = &s.arcs[k].arc;
            let ta = &t.arcs[k].arc;
            let (p0, p1) = (s.cum[k], s.cum[k + 1]);
            let (q0, q1) = (t.cum[k], t.cum[k + 1]);
            let inner: Vec<(f64, f64)> = eps
                .knots
                .iter()
                .filter_map(|&(x, _)| {
                    let x = x.rem_euclid(1.0);
                    (x > p0 + 1e-12 && x < p1 - 1e-12).then(|| {
                        let y = eps.eval(x).rem_euclid(1.0);
                        let th = sa.start + (x - p0) / (p1 - p0) * sa.sweep;
                        let tht = ta.start + (y - q0) / (q1 - q0) * ta.sweep;
                        (th, tht)
                    })
                })
                .collect();
            let cm = &self.maps[idx];
            let mut kept: Vec<(f64, f64)> = cm
                .knots
                .iter()
                .filter(|&&(a, _)| {
                    let off = ccw_sweep(sa.start, a);
                    !(off > 1e-12 && off < sa.sweep - 1e-12)
                })
                .map(|&(a, _)| (a, cm.eval(a)))
                .collect();
            for (th, tht) in inner {
                // unwrap relative to the image of the arc start
                let base = cm.eval(sa.start);
                kept.push((th, base + ccw_sweep(base, tht)));
            }
            kept.sort_by(|x, y| wrap_angle(x.0).total_cmp(&wrap_angle(y.0)));
            let a0 = wrap_angle(kept[0].0);
            let mut knots: Vec<(f64, f64)> = Vec::new();
            for (a, b) in kept {
                let a = a0 + ccw_sweep(a0, a);
                let b = match knots.last() {
                    Some(&(_, pb)) => pb + ccw_sweep(pb, b).max(0.0),
                    None => b,
                };
                knots.push((a, b));
            }
            for w in knots.windows(2) {
                if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                    return Err(IndexError::NonMonotone("eye map knots".into()));
                }
            }
            self.maps[idx] = CircleMap::new(cm.source, cm.target, knots);
        }
        Ok(())
    }
}

/// Glue two maps along their common arc and return `(η(glued), η(K) + η(L))`.
pub fn index_additivity(map_k: &CurveMap, map_l: &CurveMap) -> Result<(i32, i32), IndexError> {
    let glued = glue(map_k, map_l)?;
    let lhs = curve_index(&glued)?;
    let rhs = curve_index(map_k)? + curve_index(map_l)?;
    Ok((lhs, rhs))
}

fn same_reversed(a: &Arc, b: &Arc) -> bool {
    a.disk.center.dist(b.disk.center) < 1e-9
        && (a.disk.radius - b.disk.radius).abs() < 1e-9
        && a.start_point().dist(b.end_point()) < 1e-9
        && a.end_point().dist(b.start_point()) < 1e-9
        && a.sweep.signum() != b.sweep.signum()
}

fn shared_arc(k: &ArcCurve, l: &ArcCurve) -> Option<(usize, usize)> {
    for (i, a) in k.arcs.iter().enumerate() {
        for (j, b) in l.arcs.iter().enumerate() {
            if same_reversed(&a.arc, &b.arc) {
                return Some((i, j));
            }
        }
    }
    None
}

type Remainder = (Vec<LabeledArc>, Vec<LabeledArc>, Vec<(f64, f64)>);

/// The part of `m` outside source arc `ks`, as knots in `[0,1]` of the remaining length.
fn remainder_knots(m: &CurveMap, ks: usize, kt: usize) -> Result<Remainder, IndexError> {
    let s = &m.source;
    let t = &m.target;
    let s_from = s.cum[ks + 1];
    let s_len = 1.0 - (s.cum[ks + 1] - s.cum[ks]);
    let t_from = t.cum[kt + 1];
    let t_len = 1.0 - (t.cum[kt + 1] - t.cum[kt]);
    let image = m.eval(s_from);
    let gap = (image - t_from).rem_euclid(1.0);
    if gap.min(1.0 - gap) > 1e-9 {
        return Err(IndexError::GluingMismatch("shared arc end does not map to shared arc end".into()));
    }
    let base_t = image;
    let mut knots = vec![(0.0, 0.0)];
    let mut inner: Vec<(f64, f64)> = m
        .knots
        .iter()
        .map(|&(x, _)| (x - s_from).rem_euclid(1.0))
        .filter(|&off| off > 1e-12 && off < s_len - 1e-12)
        .map(|off| (off / s_len, (m.eval(s_from + off) - base_t) / t_len))
        .collect();
    inner.sort_by(|a, b| a.0.total_cmp(&b.0));
    knots.extend(inner);
    let end_t = (m.eval(s_from + s_len) - base_t) / t_len;
    if (end_t - 1.0).abs() > 1e-9 {
        return Err(IndexError::GluingMismatch("shared arc start does not map to shared arc start".into()));
    }
    let ns = s.arcs.len();
    let nt = t.arcs.len();
    let sa = (1..ns).map(|i| s.arcs[(ks + i) % ns]).collect();
    let ta = (1..nt).map(|i| t.arcs[(kt + i) % nt]).collect();
    Ok((sa, ta, knots))
}

fn glue(map_k: &CurveMap, map_l: &CurveMap) -> Result<CurveMap, IndexError> {
    let (ks, ls) = shared_arc(&map_k.source, &map_l.source)
        .ok_or_else(|| IndexError::GluingMismatch("sources share no arc".into()))?;
    let (kt, lt) = shared_arc(&map_k.target, &map_l.target)
        .ok_or_else(|| IndexError::GluingMismatch("targets share no arc".into()))?;
    // both maps must agree on the shared arc
    let arc = map_k.source.arcs[ks].arc;
    for m in 1..16 {
        let f = m as f64 / 16.0;
        let p = arc.point_at(f);
        let sk = map_k.source.param_of(p, 1e-9).unwrap();
        let sl = map_l.source.param_of(p, 1e-9).unwrap();
        let qk = map_k.target.point_at(map_k.eval(sk));
        let ql = map_l.target.point_at(map_l.eval(sl));
        if qk.dist(ql) > 1e-7 {
            return Err(IndexError::GluingMismatch("maps differ on the shared arc".into()));
        }
    }
    let (ksa, kta, kkn) = remainder_knots(map_k, ks, kt)?;
    let (lsa, lta, lkn) = remainder_knots(map_l, ls, lt)?;
    let len = |v: &[LabeledArc]| v.iter().map(|a| a.arc.length()).sum::<f64>();
    let (lks, lls) = (len(&ksa), len(&lsa));
    let (lkt, llt) = (len(&kta), len(&lta));
    let fs = lks / (lks + lls);
    let ft = lkt / (lkt + llt);
    let mut knots: Vec<(f64, f64)> = kkn.iter().map(|&(x, y)| (x * fs, y * ft)).collect();
    knots.extend(lkn.iter().map(|&(x, y)| (fs + x * (1.0 - fs), ft + y * (1.0 - ft))));
    knots.dedup_by(|b, a| (b.0 - a.0).abs() < 1e-15);
    let src = ArcCurve::new(ksa.into_iter().chain(lsa).collect());
    let tgt = ArcCurve::new(kta.into_iter().chain(lta).collect());
    CurveMap::new(src, tgt, knots)
}
