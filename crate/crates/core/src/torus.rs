//! Torus parametrization of a pair of transverse closed curves, the index
//! formula in terms of crossing counts, and boundary maps built from monotone
//! paths on the torus.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::boundary::{fixed_point_index_refined, ArcCurve, CurveMap, FaithfulMap, IndexError};
use crate::boundary::Corner;
use crate::config::{eye_inside, region_nonempty, Eye};
use crate::geom::{circle_intersections, disk_relation, tangency_point, DiskRelation, Point};
use crate::{EPS_GEOM, EPS_TORUS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("curves are not transverse: {0}")]
    NotTransverse(String),
    #[error("crossing types do not alternate along a curve")]
    AlternationViolated,
    #[error("base point lies on the other curve")]
    BasePointOnBoundary,
    #[error("path passes within {margin:e} of a torus point")]
    PathThroughTorusPoint { margin: f64 },
    #[error("path is not strictly monotone from (0,0) to (1,1)")]
    NonMonotonePath,
    #[error("no zero-index eye map found")]
    NoZeroIndexMap,
    #[error("no route with nonnegative index found")]
    NoNonnegativeRoute,
    #[error("hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error("prescribed points are not in positive order")]
    PrescriptionOrder,
    #[error("formula gives {formula} but direct winding gives {direct}")]
    FormulaMismatch { formula: i32, direct: i32 },
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// A crossing of the two curves with its coordinates on each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub point: Point,
    /// Parameter on the first curve.
    pub kappa: f64,
    /// Parameter on the second curve.
    pub kappa_tilde: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusParametrization {
    pub source: ArcCurve,
    pub target: ArcCurve,
    /// Crossings where the first curve runs into the second region.
    pub p: Vec<Crossing>,
    /// Crossings where the second curve runs into the first region.
    pub p_tilde: Vec<Crossing>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DiagonalCount {
    pub p_down: usize,
    pub p_up: usize,
    pub ptilde_down: usize,
    pub ptilde_up: usize,
}

/// Strictly increasing path from (0,0) to (1,1), relative to a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPath {
    pub waypoints: Vec<(f64, f64)>,
}

impl TorusPath {
    pub fn diagonal() -> TorusPath {
        TorusPath { waypoints: vec![(0.0, 0.0), (1.0, 1.0)] }
    }

    fn check(&self) -> Result<(), TorusError> {
        let w = &self.waypoints;
        if w.len() < 2 || w[0] != (0.0, 0.0) || *w.last().unwrap() != (1.0, 1.0) {
            return Err(TorusError::NonMonotonePath);
        }
        if w.windows(2).any(|p| !(p[1].0 > p[0].0 && p[1].1 > p[0].1)) {
            return Err(TorusError::NonMonotonePath);
        }
        Ok(())
    }

    /// Height of the path over `x` in `[0,1]`.
    pub fn height(&self, x: f64) -> f64 {
        interp(&self.waypoints, x, false)
    }

    /// Abscissa where the path reaches height `y`.
    pub fn abscissa(&self, y: f64) -> f64 {
        interp(&self.waypoints, y, true)
    }
}

fn interp(w: &[(f64, f64)], x: f64, swap: bool) -> f64 {
    let get = |p: &(f64, f64)| if swap { (p.1, p.0) } else { (p.0, p.1) };
    for k in 1..w.len() {
        let (a, b) = (get(&w[k - 1]), get(&w[k]));
        if x <= b.0 {
            return a.1 + (x - a.0) / (b.0 - a.0) * (b.1 - a.1);
        }
    }
    get(w.last().unwrap()).1
}

/// The two evaluations of the index formula and their ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusIndex {
    pub down: i32,
    pub up: i32,
    pub counts: DiagonalCount,
    pub winding_source: i32,
    pub winding_target: i32,
}

impl TorusParametrization {
    pub fn m(&self) -> usize {
        self.p.len()
    }

    /// Torus points `(κ, κ̃, is_p)`.
    pub fn torus_points(&self) -> Vec<(f64, f64, bool)> {
        self.p
            .iter()
            .map(|c| (c.kappa, c.kappa_tilde, true))
            .chain(self.p_tilde.iter().map(|c| (c.kappa, c.kappa_tilde, false)))
            .collect()
    }
}

fn on_arc_angle(arc: &crate::config::Arc, p: Point) -> Option<f64> {
    let t = arc.disk.angle_of(p);
    let off = if arc.sweep >= 0.0 {
        crate::geom::ccw_sweep(arc.start, t)
    } else {
        crate::geom::ccw_sweep(t, arc.start)
    };
    let off = if off > TAU - 1e-12 { 0.0 } else { off };
    (off <= arc.sweep.abs() + 1e-12).then_some(off)
}

/// Find and classify all crossings of the two curves.
pub fn build_parametrization(k: &ArcCurve, kt: &ArcCurve) -> Result<TorusParametrization, TorusError> {
    let mut points: Vec<Point> = Vec::new();
    for a in k.arcs() {
        for b in kt.arcs() {
            let (da, db) = (a.arc.disk, b.arc.disk);
            let rel = disk_relation(&da, &db);
            let candidates: Vec<Point> = match rel {
                DiskRelation::Overlapping => {
                    let (u, v) = circle_intersections(&da, &db).expect("overlapping");
                    vec![u, v]
                }
                DiskRelation::ExternallyTangent | DiskRelation::InternallyTangent => {
                    let p = tangency_point(&da, &db).expect("tangent");
                    if on_arc_angle(&a.arc, p).is_some() && on_arc_angle(&b.arc, p).is_some() {
                        return Err(TorusError::NotTransverse(format!("tangent at {p}")));
                    }
                    vec![]
                }
                DiskRelation::Equal => {
                    let share = [a.arc.start_point(), a.arc.end_point(), a.arc.point_at(0.5)]
                        .iter()
                        .any(|&p| on_arc_angle(&b.arc, p).is_some())
                        || on_arc_angle(&a.arc, b.arc.point_at(0.5)).is_some();
                    if share {
                        return Err(TorusError::NotTransverse("curves share an arc".into()));
                    }
                    vec![]
                }
                _ => vec![],
            };
            for p in candidates {
                let (Some(oa), Some(ob)) = (on_arc_angle(&a.arc, p), on_arc_angle(&b.arc, p)) else {
                    continue;
                };
                let near_end = |off: f64, la: &crate::boundary::LabeledArc| {
                    let arc = &la.arc;
                    la.start != Corner::Free
                        && (off * arc.disk.radius < 1e-9 || (arc.sweep.abs() - off) * arc.disk.radius < 1e-9)
                };
                if near_end(oa, a) || near_end(ob, b) {
                    return Err(TorusError::NotTransverse(format!("crossing at a corner {p}")));
                }
                if !points.iter().any(|q| q.dist(p) < 1e-9) {
                    points.push(p);
                }
            }
        }
    }
    let mut p = Vec::new();
    let mut p_tilde = Vec::new();
    for pt in points {
        let kappa = k.param_of(pt, 1e-7).ok_or(IndexError::NotOnCurve(pt))?;
        let kappa_tilde = kt.param_of(pt, 1e-7).ok_or(IndexError::NotOnCurve(pt))?;
        let t = k.tangent_at(kappa);
        let tt = kt.tangent_at(kappa_tilde);
        let c = Crossing { point: pt, kappa, kappa_tilde };
        if tt.cross(t) > 0.0 {
            p.push(c);
        } else {
            p_tilde.push(c);
        }
    }
    p.sort_by(|a, b| a.kappa.total_cmp(&b.kappa));
    p_tilde.sort_by(|a, b| a.kappa.total_cmp(&b.kappa));
    let param = TorusParametrization { source: k.clone(), target: kt.clone(), p, p_tilde };
    if param.p.len() != param.p_tilde.len() || !alternates(&param) {
        return Err(TorusError::AlternationViolated);
    }
    Ok(param)
}

fn alternates(param: &TorusParametrization) -> bool {
    let mut pts = param.torus_points();
    let check = |v: &[(f64, f64, bool)]| v.windows(2).all(|w| w[0].2 != w[1].2);
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let first = check(&pts);
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    first && check(&pts)
}

fn rel(x: f64, base: f64) -> f64 {
    (x - base).rem_euclid(1.0)
}

/// A source parameter halfway between crossings, away from crossings on both curves.
pub fn default_base_point(map: &CurveMap, param: &TorusParametrization) -> f64 {
    let pts = param.torus_points();
    let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    let mut candidates: Vec<f64> = Vec::new();
    if xs.is_empty() {
        candidates.push(map.knots()[0].0 + 0.5 * (map.knots().get(1).map(|k| k.0).unwrap_or(map.knots()[0].0 + 1.0) - map.knots()[0].0));
    } else {
        for k in 0..xs.len() {
            let a = xs[k];
            let b = if k + 1 < xs.len() { xs[k + 1] } else { xs[0] + 1.0 };
            candidates.push(((a + b) / 2.0).rem_euclid(1.0));
        }
    }
    let clearance = |s: f64| {
        let t = map.eval(s);
        pts.iter()
            .map(|p| {
                let dx = rel(p.0, s).min(rel(s, p.0));
                let dy = rel(p.1, t).min(rel(t, p.1));
                dx.min(dy)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = candidates[0];
    let mut best_c = clearance(best);
    for &c in &candidates[1..] {
        let v = clearance(c);
        if v > best_c + 1e-12 || ((v - best_c).abs() <= 1e-12 && c < best) {
            best = c;
            best_c = v;
        }
    }
    best
}

/// Evaluate the index formula for the graph of `map` with base point at
/// source parameter `s_u`.
pub fn index_via_torus(map: &CurveMap, param: &TorusParametrization, s_u: f64) -> Result<TorusIndex, TorusError> {
    let base_t = map.eval(s_u);
    let counts = count_diagonal(param, s_u, base_t, |x| map.eval(s_u + x) - base_t)?;
    let (ws, wt) = base_windings(param, s_u, base_t)?;
    Ok(formula(counts, ws, wt))
}

fn base_windings(param: &TorusParametrization, s_u: f64, t_u: f64) -> Result<(i32, i32), TorusError> {
    let u = param.source.point_at(s_u);
    let ut = param.target.point_at(t_u);
    if param.target.distance(u) <= EPS_GEOM || param.source.distance(ut) <= EPS_GEOM {
        return Err(TorusError::BasePointOnBoundary);
    }
    Ok((param.source.winding(ut)?, param.target.winding(u)?))
}

fn formula(counts: DiagonalCount, ws: i32, wt: i32) -> TorusIndex {
    let c = counts;
    TorusIndex {
        down: ws + wt - c.p_down as i32 + c.ptilde_down as i32,
        up: ws + wt + c.p_up as i32 - c.ptilde_up as i32,
        counts,
        winding_source: ws,
        winding_target: wt,
    }
}

fn count_diagonal(
    param: &TorusParametrization,
    bx: f64,
    by: f64,
    height: impl Fn(f64) -> f64,
) -> Result<DiagonalCount, TorusError> {
    let mut c = DiagonalCount::default();
    for (x, y, is_p) in param.torus_points() {
        let (x, y) = (rel(x, bx), rel(y, by));
        let h = height(x);
        if (y - h).abs() < 1e-12 {
            return Err(TorusError::PathThroughTorusPoint { margin: (y - h).abs() });
        }
        let below = y < h;
        match (is_p, below) {
            (true, true) => c.p_down += 1,
            (true, false) => c.p_up += 1,
            (false, true) => c.ptilde_down += 1,
            (false, false) => c.ptilde_up += 1,
        }
    }
    Ok(c)
}

/// Winding of the displacement around a small square about each torus point,
/// in the order of `torus_points`.
pub fn local_windings(param: &TorusParametrization) -> Vec<i32> {
    let pts = param.torus_points();
    let mut out = Vec::new();
    for &(x, y, _) in &pts {
        let mut h: f64 = 1e-3;
        for &(x2, y2, _) in &pts {
            if (x2, y2) != (x, y) {
                let dx = rel(x2, x).min(rel(x, x2));
                let dy = rel(y2, y).min(rel(y, y2));
                h = h.min(dx.max(dy) / 3.0);
            }
        }
        let corners = [(x - h, y - h), (x + h, y - h), (x + h, y + h), (x - h, y + h)];
        let n = 64;
        let disp = |s: f64, t: f64| param.target.point_at(t) - param.source.point_at(s);
        let mut total = 0.0;
        let mut prev = disp(corners[0].0, corners[0].1);
        for side in 0..4 {
            let (a, b) = (corners[side], corners[(side + 1) % 4]);
            for k in 1..=n {
                let f = k as f64 / n as f64;
                let cur = disp(a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1));
                total += prev.cross(cur).atan2(prev.dot(cur));
                prev = cur;
            }
        }
        out.push((total / TAU).round() as i32);
    }
    out
}

/// True when every `p` has local winding +1 and every `p̃` has −1.
pub fn verify_local_windings(param: &TorusParametrization) -> bool {
    let pts = param.torus_points();
    local_windings(param)
        .iter()
        .zip(&pts)
        .all(|(&w, p)| w == if p.2 { 1 } else { -1 })
}

/// The boundary homeomorphism whose graph is `path`, based at `(bx, by)`.
pub fn path_to_homeomorphism(
    param: &TorusParametrization,
    base: (f64, f64),
    path: &TorusPath,
) -> Result<CurveMap, TorusError> {
    homeomorphism_with_margin(param, base, path, EPS_TORUS)
}

fn homeomorphism_with_margin(
    param: &TorusParametrization,
    base: (f64, f64),
    path: &TorusPath,
    min_margin: f64,
) -> Result<CurveMap, TorusError> {
    path.check()?;
    let mut margin = f64::INFINITY;
    for (x, y, _) in param.torus_points() {
        let (x, y) = (rel(x, base.0), rel(y, base.1));
        margin = margin.min((y - path.height(x)).abs()).min((x - path.abscissa(y)).abs());
    }
    if margin <= min_margin {
        return Err(TorusError::PathThroughTorusPoint { margin });
    }
    let w = &path.waypoints;
    let knots = w[..w.len() - 1].iter().map(|&(x, y)| (base.0 + x, base.1 + y)).collect();
    Ok(CurveMap::new(param.source.clone(), param.target.clone(), knots)?)
}

/// Monotone waypoints from `start` (exclusive) to `end` keeping the points
/// flagged `true` below and the rest above. The path climbs midway between
/// neighbouring point coordinates, so its clearance is about half the
/// smallest gap.
fn staircase(start: (f64, f64), end: (f64, f64), pts: &[(f64, f64, bool)]) -> Vec<(f64, f64)> {
    let ((x0, y0), (x1, y1)) = (start, end);
    let mut below: Vec<(f64, f64)> = pts.iter().filter(|p| p.2).map(|p| (p.0, p.1)).collect();
    below.sort_by(|a, b| a.0.total_cmp(&b.0));
    // slope of the near-horizontal runs: a small fraction of the room above `level`
    let rise = |level: f64| {
        let room = pts.iter().map(|p| p.1).filter(|&q| q > level).fold(y1, f64::min) - level;
        1e-3 * room
    };
    let mut out = Vec::new();
    let mut level = y0;
    for (x, y) in below {
        if y <= level {
            continue;
        }
        let r = match pts.iter().map(|p| p.0).filter(|&q| q < x).max_by(f64::total_cmp) {
            Some(l) => 0.5 * (l + x),
            None => x0 + 0.25 * (x - x0),
        };
        let next = match pts.iter().map(|p| p.1).filter(|&q| q > y).min_by(f64::total_cmp) {
            Some(u) => 0.5 * (y + u),
            None => y + 0.75 * (y1 - y),
        };
        out.push((r, level + rise(level)));
        out.push((r + 1e-3 * (x - r), next));
        level = next;
    }
    let r_end = match pts.iter().map(|p| p.0).max_by(f64::total_cmp) {
        Some(l) => l + 0.75 * (x1 - l),
        None => 0.5 * (x0 + x1),
    };
    out.push((r_end, level + rise(level)));
    out.push(end);
    out
}

/// Search all diagonal assignments of monotone paths through the prescribed
/// torus points; return the first whose index is accepted.
fn search_paths(
    param: &TorusParametrization,
    prescribed: &[(f64, f64)],
    accept: impl Fn(i32) -> bool,
) -> Result<Option<(CurveMap, i32)>, TorusError> {
    let (bx, by) = prescribed[0];
    let mut corners: Vec<(f64, f64)> = prescribed.iter().map(|&(x, y)| (rel(x, bx), rel(y, by))).collect();
    corners.push((1.0, 1.0));
    if corners.windows(2).any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1)) {
        return Err(TorusError::PrescriptionOrder);
    }
    let (ws, wt) = base_windings(param, bx, by)?;
    // assign torus points to the rectangle they sit in, or fix their side
    let nrect = corners.len() - 1;
    let mut free: Vec<(usize, f64, f64, bool)> = Vec::new();
    let mut fixed = DiagonalCount::default();
    for (x, y, is_p) in param.torus_points() {
        let (x, y) = (rel(x, bx), rel(y, by));
        let r = (0..nrect).find(|&r| x > corners[r].0 && x < corners[r + 1].0).ok_or_else(|| {
            TorusError::HypothesesViolated("crossing shares a coordinate with a prescribed point".into())
        })?;
        let (lo, hi) = (corners[r].1, corners[r + 1].1);
        if y > lo && y < hi {
            free.push((r, x, y, is_p));
        } else {
            let below = y <= lo;
            match (is_p, below) {
                (true, true) => fixed.p_down += 1,
                (true, false) => fixed.p_up += 1,
                (false, true) => fixed.ptilde_down += 1,
                (false, false) => fixed.ptilde_up += 1,
            }
        }
    }
    let nf = free.len();
    for mask in 0u32..(1u32 << nf) {
        let below = |i: usize| mask & (1 << i) != 0;
        // points below the path must be closed under moving down and right
        let closed = (0..nf).all(|i| {
            !below(i)
                || (0..nf).all(|j| {
                    below(j) || free[j].0 != free[i].0 || !(free[j].1 > free[i].1 && free[j].2 < free[i].2)
                })
        });
        if !closed {
            continue;
        }
        let mut counts = fixed;
        for (i, f) in free.iter().enumerate() {
            match (f.3, below(i)) {
                (true, true) => counts.p_down += 1,
                (true, false) => counts.p_up += 1,
                (false, true) => counts.ptilde_down += 1,
                (false, false) => counts.ptilde_up += 1,
            }
        }
        let eta = formula(counts, ws, wt).down;
        if !accept(eta) {
            continue;
        }
        let mut waypoints = vec![(0.0, 0.0)];
        for r in 0..nrect {
            let pts: Vec<(f64, f64, bool)> =
                free.iter().enumerate().filter(|(_, f)| f.0 == r).map(|(i, f)| (f.1, f.2, below(i))).collect();
            waypoints.extend(staircase(corners[r], corners[r + 1], &pts));
        }
        let path = TorusPath { waypoints };
        // the direct index below certifies the map, so the path may pass
        // closer to a torus point than the drawing margin
        let map = match homeomorphism_with_margin(param, (bx, by), &path, 1e-3 * EPS_TORUS) {
            Ok(m) => m,
            Err(TorusError::PathThroughTorusPoint { .. }) => continue,
            Err(e) => return Err(e),
        };
        let direct = fixed_point_index_refined(&FaithfulMap { pairs: vec![map.clone()] })?.eta;
        if direct != eta {
            return Err(TorusError::FormulaMismatch { formula: eta, direct });
        }
        return Ok(Some((map, eta)));
    }
    Ok(None)
}

/// A corner-respecting eye map of index zero.
pub fn find_zero_index_eye_map(e: &Eye, et: &Eye) -> Result<CurveMap, TorusError> {
    let (a, b) = (e.first, e.second);
    let (at, bt) = (et.first, et.second);
    if eye_inside(&a, &b, &at, &bt) || eye_inside(&at, &bt, &a, &b) {
        return Err(TorusError::HypothesesViolated("one eye contains the other".into()));
    }
    if !region_nonempty(&[a, at], &[b, bt]) || !region_nonempty(&[b, bt], &[a, at]) {
        return Err(TorusError::HypothesesViolated("difference regions do not meet".into()));
    }
    if e.corner_u.dist(et.corner_u) <= 10.0 * EPS_GEOM || e.corner_v.dist(et.corner_v) <= 10.0 * EPS_GEOM {
        return Err(IndexError::CoincidentCorner(e.corner_u).into());
    }
    let k = ArcCurve::eye(e);
    let kt = ArcCurve::eye(et);
    let param = build_parametrization(&k, &kt)?;
    let prescribed = [(0.0, 0.0), (k.arc_start(1), kt.arc_start(1))];
    match search_paths(&param, &prescribed, |eta| eta == 0)? {
        Some((m, _)) => Ok(m),
        None => Err(TorusError::NoZeroIndexMap),
    }
}

/// A boundary map with nonnegative index sending each `z_i` to `z̃_i`.
pub fn three_point_map(
    k: &ArcCurve,
    kt: &ArcCurve,
    z: [Point; 3],
    zt: [Point; 3],
) -> Result<CurveMap, TorusError> {
    let param = build_parametrization(k, kt)?;
    let mut prescribed = Vec::new();
    for i in 0..3 {
        let s = k.param_of(z[i], 1e-7).ok_or(IndexError::NotOnCurve(z[i]))?;
        let t = kt.param_of(zt[i], 1e-7).ok_or(IndexError::NotOnCurve(zt[i]))?;
        if kt.distance(z[i]) <= EPS_GEOM || k.distance(zt[i]) <= EPS_GEOM {
            return Err(TorusError::HypothesesViolated("prescribed point on the other curve".into()));
        }
        prescribed.push((s, t));
    }
    match search_paths(&param, &prescribed, |eta| eta >= 0)? {
        Some((m, _)) => Ok(m),
        None => Err(TorusError::NoNonnegativeRoute),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Disk;

    #[test]
    fn unit_disks_cross_once_each_way() {
        let k = ArcCurve::circle(Disk::at(0.0, 0.0, 1.0), 0, 0.0);
        let kt = ArcCurve::circle(Disk::at(1.0, 0.0, 1.0), 0, 0.0);
        let p = build_parametrization(&k, &kt).unwrap();
        assert_eq!(p.m(), 1);
        // the first circle runs into the second at its lower crossing
        assert!(p.p[0].point.y < 0.0);
        assert!(verify_local_windings(&p));
    }

    #[test]
    fn path_heights() {
        let path = TorusPath { waypoints: vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)] };
        assert!((path.height(0.25) - 0.125).abs() < 1e-15);
        assert!((path.abscissa(0.625) - 0.75).abs() < 1e-15);
    }
}
