//! Randomized instances of the angle inequalities and eye lemmas, each with an
//! explicit hypothesis check that is separate from the inequality itself.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boundary::{boundary_complex, ArcCurve};
use crate::config::{
    classify_triple, is_thin, region_nonempty, DiskConfiguration, Eye, TripleRole,
};
use crate::geom::{
    center_distance_for_angle, circle_intersections, disk_relation, overlap_angle,
    triple_intersection_nonempty, Disk, DiskRelation, Point,
};
use crate::moebius::{to_c, MoebiusMap};
use crate::subsumption::disk_inside;
use crate::torus::build_parametrization;
use crate::EPS_ANGLE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("unknown lemma {0:?}")]
    UnknownLemma(String),
    #[error("no valid instance after {0} attempts")]
    GenerationFailed(usize),
}

fn unmet<T>(why: impl Into<String>) -> Result<T, LemmaError> {
    Err(LemmaError::HypothesisUnmet(why.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// Angle sum around a four-sided gap is below 2π.
    QuadGap,
    /// Shrinking a disk between two neighbors lowers its angle sum.
    ShrinkBetween,
    /// Nested pairs with equal angles: cross angles exceed the common angle.
    NestedCross,
    /// A disk covering the lens of two others meets the first at a larger angle.
    LensCover,
    /// A ring of disks shrunk inside itself loses total angle.
    RingShrink,
    /// A disk straddling the lens of two others.
    LensStraddle,
    /// A disk covering one corner of the lens of two others.
    CornerCover,
    /// Middle disk angles exceed the outer pair's angle.
    MiddleAngle,
    /// Two eye boundaries cross 0, 2, 4 or 6 times.
    EyeCrossings,
    /// Six crossings keep every corner out of the other eye.
    EyeSix,
    /// An eye arc inside a disk whose other arc crosses it separates the differences.
    EyeArc,
    /// Eyes crossing like a plus sign have disjoint differences.
    EyePlus,
    /// Swapped corners force one pair of differences apart.
    EyeCorners,
}

impl LemmaId {
    pub const ALL: [LemmaId; 13] = [
        LemmaId::QuadGap,
        LemmaId::ShrinkBetween,
        LemmaId::NestedCross,
        LemmaId::LensCover,
        LemmaId::RingShrink,
        LemmaId::LensStraddle,
        LemmaId::CornerCover,
        LemmaId::MiddleAngle,
        LemmaId::EyeCrossings,
        LemmaId::EyeSix,
        LemmaId::EyeArc,
        LemmaId::EyePlus,
        LemmaId::EyeCorners,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::QuadGap => "quad-gap",
            LemmaId::ShrinkBetween => "shrink-between",
            LemmaId::NestedCross => "nested-cross",
            LemmaId::LensCover => "lens-cover",
            LemmaId::RingShrink => "ring-shrink",
            LemmaId::LensStraddle => "lens-straddle",
            LemmaId::CornerCover => "corner-cover",
            LemmaId::MiddleAngle => "middle-angle",
            LemmaId::EyeCrossings => "eye-crossings",
            LemmaId::EyeSix => "eye-six",
            LemmaId::EyeArc => "eye-arc",
            LemmaId::EyePlus => "eye-plus",
            LemmaId::EyeCorners => "eye-corners",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = LemmaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| LemmaError::UnknownLemma(s.to_string()))
    }
}

/// A hypothesis-valid instance with its named disks and inequality slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaInstance {
    pub lemma: LemmaId,
    pub disks: Vec<(String, Disk)>,
    /// Slack of the inequality in radians; boolean conclusions report ±1.
    pub margin: f64,
}

fn angle(a: &Disk, b: &Disk) -> Result<f64, LemmaError> {
    match disk_relation(a, b) {
        DiskRelation::Overlapping => Ok(overlap_angle(a, b).unwrap()),
        rel => unmet(format!("pair not overlapping ({rel:?})")),
    }
}

fn overlap(a: &Disk, b: &Disk) -> bool {
    disk_relation(a, b) == DiskRelation::Overlapping
}

fn nested(a: &Disk, b: &Disk) -> bool {
    disk_relation(a, b).is_containment()
}

/// Strict containment in the interior.
fn strictly_inside(inner: &Disk, outer: &Disk) -> bool {
    inner.center.dist(outer.center) + inner.radius < outer.radius - 1e-12
}

// ---- four disks around a gap ----

/// Four disks whose complement has a four-sided bounded piece met in the order given.
pub fn check_four_disk(d: [Disk; 4]) -> Result<f64, LemmaError> {
    let c = DiskConfiguration::from_disks(d.to_vec()).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    let b = boundary_complex(&c).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    // traversing the gap with the gap on the left is the union's inner curve reversed
    let found = b.curves.iter().any(|curve| {
        let labels: Vec<u32> = curve.arcs().iter().map(|a| a.label).collect();
        curve.signed_area() < 0.0
            && labels.len() == 4
            && (0..4).any(|r| (0..4).all(|k| labels[(r + k) % 4] == 3 - k as u32))
    });
    if !found {
        return unmet("no four-sided gap in the stated order");
    }
    let mut sum = 0.0;
    for i in 0..4 {
        sum += angle(&d[i], &d[(i + 1) % 4])?;
    }
    Ok(TAU - sum)
}

fn gen_four_disk(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    let s = rng.gen_range(1.2..2.4);
    let mut out = Vec::new();
    for k in 0..4 {
        let t = PI / 4.0 + k as f64 * PI / 2.0;
        let c = Point::polar(s / 2f64.sqrt(), t) + Point::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25));
        out.push((format!("d{}", k + 1), Disk::at(c.x, c.y, rng.gen_range(0.6..1.2) * s / 2f64.sqrt())));
    }
    out
}

// ---- shrinking a disk between two neighbors ----

/// `small` inside `big`, both meeting both neighbors, neighbors and `big` with empty triple intersection.
pub fn check_meat(d_minus: &Disk, d_plus: &Disk, big: &Disk, small: &Disk) -> Result<f64, LemmaError> {
    if !strictly_inside(small, big) {
        return unmet("small disk not inside the big one");
    }
    for d in [d_minus, d_plus] {
        if disk_inside(d, big) {
            return unmet("neighbor inside the big disk");
        }
    }
    if triple_intersection_nonempty(d_minus, d_plus, big).unwrap_or(true) {
        return unmet("neighbors meet inside the big disk");
    }
    let before = angle(big, d_minus)? + angle(big, d_plus)?;
    let after = angle(small, d_minus)? + angle(small, d_plus)?;
    Ok(before - after)
}

fn gen_meat(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    let big = Disk::at(0.0, 0.0, 1.0);
    let mut n = || {
        let t: f64 = rng.gen_range(0.0..TAU);
        let r = rng.gen_range(0.3..1.8);
        let d = rng.gen_range(0.6..1.0 + r);
        let c = Point::polar(d, t);
        Disk::at(c.x, c.y, r)
    };
    let (dm, dp) = (n(), n());
    let rs = rng.gen_range(0.2..0.95);
    let off = Point::polar(rng.gen_range(0.0..(1.0 - rs)), rng.gen_range(0.0..TAU));
    vec![
        ("d-".into(), dm),
        ("d+".into(), dp),
        ("D".into(), big),
        ("D~".into(), Disk::at(off.x, off.y, rs)),
    ]
}

// ---- nested pairs with matching angles ----

pub fn check_finlandia(a: &Disk, b: &Disk, at: &Disk, bt: &Disk) -> Result<f64, LemmaError> {
    let theta = angle(a, b)?;
    let theta_t = angle(at, bt)?;
    if (theta - theta_t).abs() > 1e-9 {
        return unmet("angles differ");
    }
    if !strictly_inside(at, a) || !strictly_inside(bt, b) {
        return unmet("inner disks not inside");
    }
    if disk_inside(at, b) || disk_inside(bt, a) {
        return unmet("an inner disk lies in the other outer disk");
    }
    Ok(angle(at, b)? + angle(a, bt)? - 2.0 * theta)
}

fn gen_finlandia(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    let a = Disk::at(0.0, 0.0, 1.0);
    let rb = rng.gen_range(0.5..1.8);
    let theta = rng.gen_range(0.1..2.8);
    let d = center_distance_for_angle(1.0, rb, theta);
    let b = Disk::at(d, 0.0, rb);
    let ra = rng.gen_range(0.3..0.98);
    let ca = Point::polar(rng.gen_range(0.0..(1.0 - ra)), rng.gen_range(0.0..TAU));
    let at = Disk::at(ca.x, ca.y, ra);
    let rbt = rng.gen_range(0.3..0.98) * rb;
    let dt = center_distance_for_angle(ra, rbt, theta);
    let dir: f64 = rng.gen_range(-0.6..0.6);
    let cb = ca + Point::polar(dt, dir);
    vec![("A".into(), a), ("B".into(), b), ("A~".into(), at), ("B~".into(), Disk::at(cb.x, cb.y, rbt))]
}

// ---- lens covered by a third disk ----

pub fn check_mogwai(a: &Disk, b: &Disk, c: &Disk) -> Result<f64, LemmaError> {
    if nested(a, b) || nested(a, c) || nested(b, c) {
        return unmet("one disk contains another");
    }
    if !overlap(a, c) {
        return unmet("first and third disks do not overlap");
    }
    if !lens_within(a, c, b) {
        return unmet("lens not inside the second disk");
    }
    Ok(angle(a, b)? - angle(a, c)?)
}

/// Lens containment decided by region meeting: nothing of `a ∩ c` outside `b`.
fn lens_within(a: &Disk, c: &Disk, b: &Disk) -> bool {
    let Ok((u, v)) = circle_intersections(a, c) else { return false };
    b.contains(u) && b.contains(v) && !region_nonempty(&[*a, *c], &[*b])
}

fn gen_mogwai(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    // left half-plane for A; C crosses its edge; B covers the part of C on the left
    let cy = rng.gen_range(-1.0..1.0);
    let rc = rng.gen_range(0.5..1.5);
    let cx = rng.gen_range(-0.8 * rc..0.8 * rc);
    let c = Disk::at(cx, cy, rc);
    let h = (rc * rc - cx * cx).sqrt();
    let top = Point::new(0.0, cy + h);
    let bot = Point::new(0.0, cy - h);
    // B through points just beyond the chord ends, bulging far enough left
    let left = Point::new(cx - rc - rng.gen_range(0.01..0.5), cy + rng.gen_range(-0.3..0.3));
    let ext = rng.gen_range(0.01..0.4);
    let (cb, rb) = crate::geom::circumcircle(top + Point::new(0.0, ext), bot - Point::new(0.0, ext), left)
        .unwrap_or((Point::new(0.0, cy), h + ext));
    let b = Disk::at(cb.x, cb.y, rb);
    // map back with a pole on the right, away from B and C
    let pole = loop {
        let p = Point::new(rng.gen_range(0.2..6.0), rng.gen_range(-4.0..4.0));
        if !b.contains(p) && !c.contains(p) {
            break p;
        }
    };
    let m = MoebiusMap::new(
        num_complex::Complex64::new(0.0, 0.0),
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(1.0, 0.0),
        -to_c(pole),
        false,
    )
    .expect("pole gives an invertible map");
    let line = [Point::new(0.0, -1.0), Point::new(0.0, 0.0), Point::new(0.0, 2.0)];
    let img: Vec<Point> = line.iter().map(|&p| m.apply_point(p).unwrap()).collect();
    let (ca, ra) = crate::geom::circumcircle(img[0], img[1], img[2]).unwrap_or((Point::new(0.0, 0.0), 1.0));
    let a = Disk::at(ca.x, ca.y, ra);
    let map = |d: &Disk| m.apply_disk(d).unwrap_or(*d);
    vec![("A".into(), a), ("B".into(), map(&b)), ("C".into(), map(&c))]
}

// ---- ring shrink ----

pub fn check_contained_loops(outer: &[Disk], inner: &[Disk]) -> Result<f64, LemmaError> {
    let n = outer.len();
    if n < 3 || inner.len() != n {
        return unmet("need matching rings of at least three disks");
    }
    for i in 0..n {
        if !strictly_inside(&inner[i], &outer[i]) {
            return unmet(format!("inner disk {i} not inside"));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            let meets = disk_relation(&outer[i], &outer[j]).meets() || nested(&outer[i], &outer[j]);
            if adjacent && (!overlap(&outer[i], &outer[j]) || !overlap(&inner[i], &inner[j])) {
                return unmet(format!("ring pair {i},{j} does not overlap"));
            }
            if !adjacent && meets {
                return unmet(format!("non-adjacent {i},{j} meet"));
            }
        }
    }
    for ring in [outer, inner] {
        let c = DiskConfiguration::from_disks(ring.to_vec()).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
        if !is_thin(&c).thin {
            return unmet("ring not thin");
        }
    }
    let mut margin = 0.0;
    for i in 0..n {
        margin += angle(&outer[i], &outer[(i + 1) % n])? - angle(&inner[i], &inner[(i + 1) % n])?;
    }
    Ok(margin)
}

fn gen_ring(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    let n = rng.gen_range(3..=8usize);
    let big_r = 3.0;
    let chord = 2.0 * big_r * (PI / n as f64).sin();
    let far = if n > 3 { 2.0 * big_r * (TAU / n as f64).sin().abs().min(2.0 * big_r) } else { f64::INFINITY };
    let mut out = Vec::new();
    let mut outer = Vec::new();
    for i in 0..n {
        let t = TAU * i as f64 / n as f64 + rng.gen_range(-0.05..0.05);
        let c = Point::polar(big_r + rng.gen_range(-0.2..0.2), t);
        let lo = chord / 2.0 * 1.05;
        let hi = if far.is_finite() { (far / 2.0 * 0.95).max(lo * 1.01) } else { chord };
        outer.push(Disk::at(c.x, c.y, rng.gen_range(lo..hi)));
    }
    for (i, d) in outer.iter().enumerate() {
        out.push((format!("D{i}"), *d));
    }
    for (i, d) in outer.iter().enumerate() {
        let shrink = rng.gen_range(0.85..0.99);
        let r = d.radius * shrink;
        let slack = d.radius - r;
        let off = Point::polar(rng.gen_range(0.0..slack), rng.gen_range(0.0..TAU));
        out.push((format!("D~{i}"), Disk::at(d.center.x + off.x, d.center.y + off.y, r)));
    }
    out
}

// ---- three-disk lens configurations ----

fn codes(dm: &Disk, dp: &Disk, d: &Disk) -> Result<(char, char), LemmaError> {
    if !overlap(dm, dp) || nested(dm, d) || nested(dp, d) {
        return unmet("outer pair not overlapping or a disk is nested");
    }
    let a = classify_triple(dm, dp, d, TripleRole::Atilde).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    let b = classify_triple(dm, dp, d, TripleRole::Btilde).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    Ok((a.letter, b.letter))
}

/// `d` straddles the lens of `dm` and `dp`: it holds both corners and its circle avoids the lens.
fn is_straddle(c: (char, char)) -> bool {
    c == ('c', 'c')
}

/// `d` lies inside the union and crosses the lens band, missing both corners.
fn is_band(c: (char, char)) -> bool {
    c == ('g', 'g')
}

/// `d`'s circle meets all four pieces and `d` holds exactly one corner.
fn is_corner_cover(c: (char, char)) -> bool {
    c == ('e', 'd') || c == ('d', 'e')
}

pub fn check_hat(dm: &Disk, dp: &Disk, d: &Disk) -> Result<f64, LemmaError> {
    if !is_straddle(codes(dm, dp, d)?) {
        return unmet("not straddling the lens");
    }
    Ok(angle(dm, d)? + angle(dp, d)? - PI - angle(dm, dp)?)
}

pub fn check_shoes(dm: &Disk, dp: &Disk, d: &Disk) -> Result<f64, LemmaError> {
    if !is_corner_cover(codes(dm, dp, d)?) {
        return unmet("not covering exactly one corner");
    }
    Ok(PI + angle(dm, dp)? - angle(dm, d)? - angle(dp, d)?)
}

pub fn check_pop(dm: &Disk, dp: &Disk, d: &Disk) -> Result<f64, LemmaError> {
    let c = codes(dm, dp, d)?;
    if !is_straddle(c) && !is_band(c) {
        return unmet("neither straddling nor in the band");
    }
    let base = angle(dm, dp)?;
    Ok((angle(dm, d)? - base).min(angle(dp, d)? - base))
}

fn jitter(rng: &mut ChaCha8Rng, d: (f64, f64, f64), s: f64) -> Disk {
    Disk::at(
        d.0 + rng.gen_range(-s..s),
        d.1 + rng.gen_range(-s..s),
        d.2 * (1.0 + rng.gen_range(-s..s)),
    )
}

fn gen_triple(rng: &mut ChaCha8Rng, layout: [(f64, f64, f64); 3]) -> Vec<(String, Disk)> {
    let s = 0.15;
    vec![
        ("d-".into(), jitter(rng, layout[0], s)),
        ("d+".into(), jitter(rng, layout[1], s)),
        ("D".into(), jitter(rng, layout[2], s)),
    ]
}

const STRADDLE: [(f64, f64, f64); 3] = [(1.67, -0.237, 0.8), (2.97, -0.237, 0.8), (2.32, -0.187, 0.95)];
const BAND: [(f64, f64, f64); 3] = [(1.54, 0.0425, 0.95), (2.74, 0.0425, 0.95), (2.14, 0.0425, 0.55)];
const CORNER: [(f64, f64, f64); 3] = [(1.79, -0.32, 1.1), (2.79, -0.32, 1.1), (2.29, -1.12, 0.7)];

// ---- eye lemmas ----

/// Findings about two eyes; `None` where a statement's hypotheses do not apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EyeReport {
    pub crossings: usize,
    pub count_ok: bool,
    /// Corners outside the other eye when the boundaries cross six times.
    pub six_corners_ok: Option<bool>,
    /// The four arc-containment implications.
    pub arc_statements: [Option<bool>; 4],
    pub plus_ok: Option<bool>,
    pub corners_ok: Option<bool>,
}

impl EyeReport {
    pub fn all_hold(&self) -> bool {
        self.count_ok
            && self.six_corners_ok != Some(false)
            && self.arc_statements.iter().all(|s| *s != Some(false))
            && self.plus_ok != Some(false)
            && self.corners_ok != Some(false)
    }
}

/// Where the circle of `x` crosses the arc, excluding its ends.
fn arc_crossings(arc: &crate::config::Arc, x: &Disk) -> usize {
    if disk_relation(&arc.disk, x) != DiskRelation::Overlapping {
        return 0;
    }
    let (p, q) = circle_intersections(&arc.disk, x).unwrap();
    [p, q]
        .iter()
        .filter(|&&w| {
            let off = crate::geom::ccw_sweep(arc.start, arc.disk.angle_of(w));
            off > 1e-12 && off < arc.sweep - 1e-12
        })
        .count()
}

fn arc_inside(arc: &crate::config::Arc, x: &Disk) -> bool {
    x.contains(arc.start_point()) && x.contains(arc.end_point()) && arc_crossings(arc, x) == 0 && x.contains(arc.point_at(0.5))
}

pub fn check_eye_lemmas(a: &Disk, b: &Disk, at: &Disk, bt: &Disk) -> Result<EyeReport, LemmaError> {
    let e = Eye::new(*a, *b).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    let et = Eye::new(*at, *bt).map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    let param = build_parametrization(&ArcCurve::eye(&e), &ArcCurve::eye(&et))
        .map_err(|e| LemmaError::HypothesisUnmet(e.to_string()))?;
    let crossings = 2 * param.m();
    let count_ok = matches!(crossings, 0 | 2 | 4 | 6);
    let a_minus_b = |x: &Disk, y: &Disk, xt: &Disk, yt: &Disk| region_nonempty(&[*x, *xt], &[*y, *yt]);
    let diff_a_meet = a_minus_b(a, b, at, bt);
    let diff_b_meet = a_minus_b(b, a, bt, at);
    let six_corners_ok = (crossings == 6 && diff_a_meet && diff_b_meet).then(|| {
        !e.contains(et.corner_u) && !e.contains(et.corner_v) && !et.contains(e.corner_u) && !et.contains(e.corner_v)
    });
    // arcs: [u→v] lies on the first circle, [v→u] on the second
    let (eu_v, ev_u) = (&e.arc_on_first, &e.arc_on_second);
    let (tu_v, tv_u) = (&et.arc_on_first, &et.arc_on_second);
    let arc_statements = [
        (arc_inside(tu_v, a) && arc_crossings(tv_u, a) > 0).then_some(!diff_b_meet),
        (arc_inside(tv_u, b) && arc_crossings(tu_v, b) > 0).then_some(!diff_a_meet),
        (arc_inside(eu_v, at) && arc_crossings(ev_u, at) > 0).then_some(!diff_b_meet),
        (arc_inside(ev_u, bt) && arc_crossings(eu_v, bt) > 0).then_some(!diff_a_meet),
    ];
    let plus_ok = is_plus(&e, &et, crossings).then_some(!diff_a_meet && !diff_b_meet);
    let corners_ok = (et.contains_strictly(e.corner_u) && e.contains_strictly(et.corner_u))
        .then_some(!diff_a_meet || !diff_b_meet);
    Ok(EyeReport { crossings, count_ok, six_corners_ok, arc_statements, plus_ok, corners_ok })
}

/// Four crossings with both corners of the second eye inside the first, both
/// corners of the first outside the second, the second eye's arcs each cutting
/// across the opposite arc of the first, and `ṽ` on the side of `u`.
fn is_plus(e: &Eye, et: &Eye, crossings: usize) -> bool {
    if crossings != 4 {
        return false;
    }
    let inside = e.contains_strictly(et.corner_u) && e.contains_strictly(et.corner_v);
    let outside = !et.contains(e.corner_u) && !et.contains(e.corner_v);
    let across = arcs_meet(&et.arc_on_first, &e.arc_on_second) == 2 && arcs_meet(&et.arc_on_second, &e.arc_on_first) == 2;
    let axis = e.corner_v - e.corner_u;
    let t = |p: Point| (p - e.corner_u).dot(axis) / axis.norm_sq();
    inside && outside && across && t(et.corner_v) < t(et.corner_u)
}

/// Points where two arcs cross, excluding their ends.
fn arcs_meet(p: &crate::config::Arc, q: &crate::config::Arc) -> usize {
    if disk_relation(&p.disk, &q.disk) != DiskRelation::Overlapping {
        return 0;
    }
    let (x, y) = circle_intersections(&p.disk, &q.disk).unwrap();
    let on = |a: &crate::config::Arc, w: Point| {
        let off = crate::geom::ccw_sweep(a.start, a.disk.angle_of(w));
        off > 1e-12 && off < a.sweep - 1e-12
    };
    [x, y].iter().filter(|&&w| on(p, w) && on(q, w)).count()
}

fn random_overlapping_pair(rng: &mut ChaCha8Rng) -> (Disk, Disk) {
    loop {
        let a = Disk::at(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.4..1.6));
        let b = Disk::at(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.4..1.6));
        if overlap(&a, &b) {
            return (a, b);
        }
    }
}

fn gen_eye_random(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    let (a, b) = random_overlapping_pair(rng);
    let (at, bt) = random_overlapping_pair(rng);
    vec![("A".into(), a), ("B".into(), b), ("A~".into(), at), ("B~".into(), bt)]
}

/// Plus-shaped eyes: a short wide lens crossed by a tall narrow one.
pub fn plus_instance(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    let big = rng.gen_range(3.0..5.0);
    let c = (big * big - rng.gen_range(1.3f64..2.0).powi(2)).sqrt();
    let s = 0.03;
    let j = |rng: &mut ChaCha8Rng| rng.gen_range(-s..s);
    let a = Disk::at(j(rng), c + j(rng), big);
    let b = Disk::at(j(rng), -c + j(rng), big);
    // a shared sideways shift keeps the narrow lens upright
    let off = rng.gen_range(0.05..0.2);
    let x = j(rng);
    let at = Disk::at(x, -off + j(rng), 1.0);
    let bt = Disk::at(x, off + j(rng), 1.0);
    // pick the labeling that puts ṽ toward u
    let (e, et) = (Eye::new(a, b).unwrap(), Eye::new(at, bt).unwrap());
    let axis = e.corner_v - e.corner_u;
    let t = |p: Point| (p - e.corner_u).dot(axis);
    if t(et.corner_v) < t(et.corner_u) {
        vec![("A".into(), a), ("B".into(), b), ("A~".into(), at), ("B~".into(), bt)]
    } else {
        vec![("A".into(), a), ("B".into(), b), ("A~".into(), bt), ("B~".into(), at)]
    }
}

fn gen_eye_corners(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    // perturb one pair until each eye holds the other's u
    let s = 0.3;
    loop {
        let (a, b) = random_overlapping_pair(rng);
        let at = Disk::at(a.center.x + rng.gen_range(-s..s), a.center.y + rng.gen_range(-s..s), a.radius * rng.gen_range(0.8..1.25));
        let bt = Disk::at(b.center.x + rng.gen_range(-s..s), b.center.y + rng.gen_range(-s..s), b.radius * rng.gen_range(0.8..1.25));
        let (Ok(e), Ok(et)) = (Eye::new(a, b), Eye::new(at, bt)) else { continue };
        if et.contains_strictly(e.corner_u) && e.contains_strictly(et.corner_u) {
            return vec![("A".into(), a), ("B".into(), b), ("A~".into(), at), ("B~".into(), bt)];
        }
    }
}

/// Jittered copies of a pair whose boundaries cross six times.
fn gen_eye_six(rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    const SIX: [(f64, f64, f64); 4] = [
        (-0.0098, -0.5251, 1.2039),
        (-0.8902, 0.6269, 2.1637),
        (0.5850, -0.8909, 1.8563),
        (-0.3207, -0.2306, 1.2315),
    ];
    let s = 0.03;
    ["A", "B", "A~", "B~"].iter().zip(SIX).map(|(n, d)| (n.to_string(), jitter(rng, d, s))).collect()
}

fn eye_margin(id: LemmaId, r: &EyeReport) -> f64 {
    let holds = match id {
        LemmaId::EyeCrossings => r.count_ok,
        LemmaId::EyeSix => r.six_corners_ok == Some(true),
        LemmaId::EyeArc => r.arc_statements.iter().all(|s| *s != Some(false)),
        LemmaId::EyePlus => r.plus_ok == Some(true),
        _ => r.corners_ok == Some(true),
    };
    if holds {
        1.0
    } else {
        -1.0
    }
}

fn eye_applies(id: LemmaId, r: &EyeReport) -> bool {
    match id {
        LemmaId::EyeCrossings => true,
        LemmaId::EyeSix => r.six_corners_ok.is_some(),
        LemmaId::EyeArc => r.arc_statements.iter().any(Option::is_some),
        LemmaId::EyePlus => r.plus_ok.is_some(),
        LemmaId::EyeCorners => r.corners_ok.is_some(),
        _ => false,
    }
}

// ---- dispatch ----

fn get<'a>(disks: &'a [(String, Disk)], name: &str) -> &'a Disk {
    &disks.iter().find(|(n, _)| n == name).expect("named disk").1
}

/// Check the hypotheses and evaluate the conclusion on a named cast.
pub fn check(id: LemmaId, disks: &[(String, Disk)]) -> Result<f64, LemmaError> {
    let g = |n: &str| get(disks, n);
    match id {
        LemmaId::QuadGap => check_four_disk([*g("d1"), *g("d2"), *g("d3"), *g("d4")]),
        LemmaId::ShrinkBetween => check_meat(g("d-"), g("d+"), g("D"), g("D~")),
        LemmaId::NestedCross => check_finlandia(g("A"), g("B"), g("A~"), g("B~")),
        LemmaId::LensCover => check_mogwai(g("A"), g("B"), g("C")),
        LemmaId::RingShrink => {
            let n = disks.len() / 2;
            let outer: Vec<Disk> = (0..n).map(|i| *g(&format!("D{i}"))).collect();
            let inner: Vec<Disk> = (0..n).map(|i| *g(&format!("D~{i}"))).collect();
            check_contained_loops(&outer, &inner)
        }
        LemmaId::LensStraddle => check_hat(g("d-"), g("d+"), g("D")),
        LemmaId::CornerCover => check_shoes(g("d-"), g("d+"), g("D")),
        LemmaId::MiddleAngle => check_pop(g("d-"), g("d+"), g("D")),
        _ => {
            let r = check_eye_lemmas(g("A"), g("B"), g("A~"), g("B~"))?;
            if !eye_applies(id, &r) {
                return unmet("statement does not apply");
            }
            Ok(eye_margin(id, &r))
        }
    }
}

fn propose(id: LemmaId, rng: &mut ChaCha8Rng) -> Vec<(String, Disk)> {
    match id {
        LemmaId::QuadGap => gen_four_disk(rng),
        LemmaId::ShrinkBetween => gen_meat(rng),
        LemmaId::NestedCross => gen_finlandia(rng),
        LemmaId::LensCover => gen_mogwai(rng),
        LemmaId::RingShrink => gen_ring(rng),
        LemmaId::LensStraddle => gen_triple(rng, STRADDLE),
        LemmaId::CornerCover => gen_triple(rng, CORNER),
        LemmaId::MiddleAngle => {
            if rng.gen_bool(0.5) {
                gen_triple(rng, STRADDLE)
            } else {
                gen_triple(rng, BAND)
            }
        }
        LemmaId::EyePlus => plus_instance(rng),
        LemmaId::EyeCorners => gen_eye_corners(rng),
        LemmaId::EyeSix => gen_eye_six(rng),
        _ => gen_eye_random(rng),
    }
}

/// Draw a hypothesis-valid instance by rejection.
pub fn generate(id: LemmaId, rng: &mut ChaCha8Rng) -> Result<LemmaInstance, LemmaError> {
    const TRIES: usize = 20_000;
    for _ in 0..TRIES {
        let disks = propose(id, rng);
        match check(id, &disks) {
            Ok(margin) => return Ok(LemmaInstance { lemma: id, disks, margin }),
            Err(LemmaError::HypothesisUnmet(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(LemmaError::GenerationFailed(TRIES))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub lemma: LemmaId,
    pub count: usize,
    pub min_margin: f64,
    pub failures: Vec<LemmaInstance>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run `count` seeded instances; an instance fails when its margin is not above `EPS_ANGLE`.
pub fn run_suite(id: LemmaId, seed: u64, count: usize) -> Result<SuiteReport, LemmaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    for _ in 0..count {
        let inst = generate(id, &mut rng)?;
        min_margin = min_margin.min(inst.margin);
        if inst.margin <= EPS_ANGLE {
            failures.push(inst);
        }
    }
    Ok(SuiteReport { lemma: id, count, min_margin, failures })
}
