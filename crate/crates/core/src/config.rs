//! Labeled disk configurations, incidence data, eyes and the triple classifier.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    ccw_sweep, circle_intersections, disk_relation, overlap_angle, tangency_point,
    triple_intersection_nonempty, triple_interior_nonempty, Disk, DiskRelation, GeomError, Point,
};
use crate::moebius::{MoebiusError, MoebiusMap};
use crate::EPS_GEOM;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("disk {0} and disk {1} are nested or equal")]
    ContainmentViolation(u32, u32),
    #[error("duplicate label {0}")]
    DuplicateLabel(u32),
    #[error("configuration hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// Labeled disks, sorted by label, none containing another.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskConfiguration {
    labels: Vec<u32>,
    disks: Vec<Disk>,
}

impl DiskConfiguration {
    pub fn new(mut items: Vec<(u32, Disk)>) -> Result<Self, ConfigError> {
        items.sort_by_key(|(l, _)| *l);
        for w in items.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ConfigError::DuplicateLabel(w[0].0));
            }
        }
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if disk_relation(&items[i].1, &items[j].1).is_containment() {
                    return Err(ConfigError::ContainmentViolation(items[i].0, items[j].0));
                }
            }
        }
        let (labels, disks) = items.into_iter().unzip();
        Ok(DiskConfiguration { labels, disks })
    }

    /// Labels `0..n` in the given order.
    pub fn from_disks(disks: Vec<Disk>) -> Result<Self, ConfigError> {
        DiskConfiguration::new(disks.into_iter().enumerate().map(|(i, d)| (i as u32, d)).collect())
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn get(&self, label: u32) -> Option<&Disk> {
        self.index_of(label).map(|i| &self.disks[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Disk)> {
        self.labels.iter().copied().zip(self.disks.iter())
    }

    pub fn with_disk(&self, label: u32, disk: Disk) -> Result<Self, ConfigError> {
        let mut items: Vec<(u32, Disk)> = self.iter().map(|(l, d)| (l, *d)).collect();
        items.push((label, disk));
        DiskConfiguration::new(items)
    }

    /// Sub-configuration on the given labels.
    pub fn restrict(&self, keep: &[u32]) -> DiskConfiguration {
        let (labels, disks) = self
            .iter()
            .filter(|(l, _)| keep.contains(l))
            .map(|(l, d)| (l, *d))
            .unzip();
        DiskConfiguration { labels, disks }
    }

    /// Apply a map to every disk; fails if some image is unbounded or nesting appears.
    pub fn map_disks(&self, m: &MoebiusMap) -> Result<Self, ConfigError> {
        let items = self
            .iter()
            .map(|(l, d)| m.apply_disk(d).map(|e| (l, e)))
            .collect::<Result<Vec<_>, _>>()?;
        DiskConfiguration::new(items)
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for d in &self.disks {
            lo.x = lo.x.min(d.center.x - d.radius);
            lo.y = lo.y.min(d.center.y - d.radius);
            hi.x = hi.x.max(d.center.x + d.radius);
            hi.y = hi.y.max(d.center.y + d.radius);
        }
        (lo, hi)
    }
}

/// Contact graph with overlap angles, edges keyed by `(smaller, larger)` label.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IncidenceData {
    pub vertices: Vec<u32>,
    pub edges: BTreeMap<(u32, u32), f64>,
}

impl IncidenceData {
    pub fn key(i: u32, j: u32) -> (u32, u32) {
        if i < j {
            (i, j)
        } else {
            (j, i)
        }
    }

    pub fn theta(&self, i: u32, j: u32) -> Option<f64> {
        self.edges.get(&IncidenceData::key(i, j)).copied()
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Same vertices and edges, angles equal within `tol`.
    pub fn agrees_with(&self, other: &IncidenceData, tol: f64) -> bool {
        self.vertices == other.vertices
            && self.edges.len() == other.edges.len()
            && self
                .edges
                .iter()
                .all(|(k, t)| other.edges.get(k).map(|s| (s - t).abs() <= tol).unwrap_or(false))
    }
}

pub fn contact_graph(c: &DiskConfiguration) -> Result<IncidenceData, ConfigError> {
    let mut edges = BTreeMap::new();
    let n = c.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&c.disks[i], &c.disks[j]);
            let rel = disk_relation(a, b);
            if rel.is_containment() {
                return Err(ConfigError::ContainmentViolation(c.labels[i], c.labels[j]));
            }
            if rel.meets() {
                edges.insert((c.labels[i], c.labels[j]), overlap_angle(a, b)?);
            }
        }
    }
    Ok(IncidenceData { vertices: c.labels.clone(), edges })
}

/// Which common points count against thinness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Thinness {
    /// No three closed disks share a point.
    #[default]
    ClosedDisks,
    /// No three open disks share a point.
    Interiors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThinReport {
    pub thin: bool,
    pub witness: Option<(u32, u32, u32)>,
}

pub fn is_thin(c: &DiskConfiguration) -> ThinReport {
    is_thin_with(c, Thinness::ClosedDisks)
}

pub fn is_thin_with(c: &DiskConfiguration, mode: Thinness) -> ThinReport {
    let n = c.len();
    let d = &c.disks;
    let meets: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && disk_relation(&d[i], &d[j]).meets()).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if !meets[i][j] {
                continue;
            }
            for k in j + 1..n {
                if !(meets[i][k] && meets[j][k]) {
                    continue;
                }
                let hit = match mode {
                    Thinness::ClosedDisks => triple_intersection_nonempty(&d[i], &d[j], &d[k]),
                    Thinness::Interiors => triple_interior_nonempty(&d[i], &d[j], &d[k]),
                }
                .unwrap_or(true);
                if hit {
                    return ThinReport {
                        thin: false,
                        witness: Some((c.labels[i], c.labels[j], c.labels[k])),
                    };
                }
            }
        }
    }
    ThinReport { thin: true, witness: None }
}

/// Points where two circles meet, including internal tangency.
pub fn circle_contact_points(a: &Disk, b: &Disk) -> Vec<Point> {
    match disk_relation(a, b) {
        DiskRelation::Overlapping => {
            let (u, v) = circle_intersections(a, b).expect("overlapping");
            vec![u, v]
        }
        DiskRelation::ExternallyTangent => tangency_point(a, b).into_iter().collect(),
        DiskRelation::InternallyTangent => {
            let (big, small) = if a.radius >= b.radius { (a, b) } else { (b, a) };
            let dir = small.center - big.center;
            let n = dir.norm();
            if n <= 0.0 {
                Vec::new()
            } else {
                vec![big.center + dir * (big.radius / n)]
            }
        }
        _ => Vec::new(),
    }
}

/// General-position violations between two families of circles.
pub fn circle_general_position(left: &[Disk], right: &[Disk]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, p) in left.iter().enumerate() {
        for (j, q) in right.iter().enumerate() {
            let rel = disk_relation(p, q);
            if matches!(
                rel,
                DiskRelation::ExternallyTangent | DiskRelation::InternallyTangent | DiskRelation::Equal
            ) {
                out.push(format!("circles {i} and ~{j} are {rel:?}"));
            }
        }
    }
    let special = |fam: &[Disk]| {
        let mut pts = Vec::new();
        for i in 0..fam.len() {
            for j in i + 1..fam.len() {
                for p in circle_contact_points(&fam[i], &fam[j]) {
                    pts.push((i, j, p));
                }
            }
        }
        pts
    };
    for (i, j, p) in special(left) {
        for (k, q) in right.iter().enumerate() {
            if q.signed_dist(p).abs() <= EPS_GEOM {
                out.push(format!("contact point of {i},{j} lies on circle ~{k}"));
            }
        }
    }
    for (i, j, p) in special(right) {
        for (k, q) in left.iter().enumerate() {
            if q.signed_dist(p).abs() <= EPS_GEOM {
                out.push(format!("contact point of ~{i},~{j} lies on circle {k}"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralPositionReport {
    pub general: bool,
    pub violations: Vec<String>,
}

pub fn is_general_position(c: &DiskConfiguration, ct: &DiskConfiguration) -> GeneralPositionReport {
    let violations = circle_general_position(&c.disks, &ct.disks);
    GeneralPositionReport { general: violations.is_empty(), violations }
}

/// A circular arc traversed from `start` through `sweep` radians (negative is clockwise).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub disk: Disk,
    pub start: f64,
    pub sweep: f64,
}

impl Arc {
    pub fn point_at(&self, t: f64) -> Point {
        self.disk.point_at(self.start + t * self.sweep)
    }

    pub fn start_point(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point {
        self.point_at(1.0)
    }

    pub fn length(&self) -> f64 {
        self.sweep.abs() * self.disk.radius
    }

    pub fn reversed(&self) -> Arc {
        Arc { disk: self.disk, start: self.start + self.sweep, sweep: -self.sweep }
    }

    /// Whether the angle lies on the arc, with angular tolerance `tol`.
    pub fn covers_angle(&self, angle: f64, tol: f64) -> bool {
        let off = if self.sweep >= 0.0 {
            ccw_sweep(self.start, angle)
        } else {
            ccw_sweep(angle, self.start)
        };
        off <= self.sweep.abs() + tol || off >= 2.0 * std::f64::consts::PI - tol
    }
}

/// The lens of two overlapping disks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eye {
    pub pair: (u32, u32),
    pub first: Disk,
    pub second: Disk,
    pub corner_u: Point,
    pub corner_v: Point,
    /// Part of the first circle inside the second disk, from `u` to `v`.
    pub arc_on_first: Arc,
    /// Part of the second circle inside the first disk, from `v` to `u`.
    pub arc_on_second: Arc,
}

impl Eye {
    pub fn new(a: Disk, b: Disk) -> Result<Eye, GeomError> {
        Eye::labeled((0, 1), a, b)
    }

    pub fn labeled(pair: (u32, u32), a: Disk, b: Disk) -> Result<Eye, GeomError> {
        let (u, v) = circle_intersections(&a, &b)?;
        let (au, av) = (a.angle_of(u), a.angle_of(v));
        let (bu, bv) = (b.angle_of(u), b.angle_of(v));
        Ok(Eye {
            pair,
            first: a,
            second: b,
            corner_u: u,
            corner_v: v,
            arc_on_first: Arc { disk: a, start: au, sweep: ccw_sweep(au, av) },
            arc_on_second: Arc { disk: b, start: bv, sweep: ccw_sweep(bv, bu) },
        })
    }

    pub fn contains(&self, p: Point) -> bool {
        self.first.contains(p) && self.second.contains(p)
    }

    pub fn contains_strictly(&self, p: Point) -> bool {
        self.first.contains_strictly(p) && self.second.contains_strictly(p)
    }

    /// Signed distance to the lens boundary, negative inside.
    pub fn signed_dist(&self, p: Point) -> f64 {
        self.first.signed_dist(p).max(self.second.signed_dist(p))
    }
}

pub fn eyes(c: &DiskConfiguration) -> Vec<Eye> {
    let mut out = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if let Ok(e) = Eye::labeled((c.labels[i], c.labels[j]), c.disks[i], c.disks[j]) {
                out.push(e);
            }
        }
    }
    out
}

/// Whether the lens `a ∩ b` lies inside `x` (all three overlapping or nested generically).
pub fn lens_inside(a: &Disk, b: &Disk, x: &Disk) -> bool {
    let Ok((u, v)) = circle_intersections(a, b) else {
        return false;
    };
    if !(x.contains(u) && x.contains(v)) {
        return false;
    }
    // the boundary of x must not cross either lens arc
    let Ok(eye) = Eye::new(*a, *b) else {
        return false;
    };
    for arc in [eye.arc_on_first, eye.arc_on_second] {
        if disk_relation(&arc.disk, x) == DiskRelation::Overlapping {
            let (p, q) = circle_intersections(&arc.disk, x).unwrap();
            for w in [p, q] {
                let t = arc.disk.angle_of(w);
                let off = ccw_sweep(arc.start, t);
                if off > 1e-12 && off < arc.sweep - 1e-12 {
                    return false;
                }
            }
        } else if disk_relation(&arc.disk, x) == DiskRelation::Disjoint {
            return false;
        }
    }
    true
}

/// Whether the lens of `(a, b)` lies in the lens of `(c, d)`.
pub fn eye_inside(a: &Disk, b: &Disk, c: &Disk, d: &Disk) -> bool {
    lens_inside(a, b, c) && lens_inside(a, b, d)
}

/// One of the four pieces cut out by two overlapping disks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    Both,
    FirstOnly,
    SecondOnly,
    Neither,
}

impl Quadrant {
    pub fn of(a: &Disk, b: &Disk, p: Point) -> Quadrant {
        match (a.contains(p), b.contains(p)) {
            (true, true) => Quadrant::Both,
            (true, false) => Quadrant::FirstOnly,
            (false, true) => Quadrant::SecondOnly,
            (false, false) => Quadrant::Neither,
        }
    }
}

/// Quadrants met by the boundary circle of `x`, relative to the pair `(a, b)`.
pub fn quadrant_signature(a: &Disk, b: &Disk, x: &Disk) -> Result<Vec<Quadrant>, ConfigError> {
    let mut cuts = Vec::new();
    for other in [a, b] {
        match disk_relation(x, other) {
            DiskRelation::Overlapping => {
                let (p, q) = circle_intersections(x, other)?;
                cuts.push(x.angle_of(p));
                cuts.push(x.angle_of(q));
            }
            DiskRelation::Disjoint
            | DiskRelation::FirstContainsSecond
            | DiskRelation::SecondContainsFirst => {}
            rel => {
                return Err(ConfigError::HypothesesViolated(format!(
                    "third circle not transverse ({rel:?})"
                )))
            }
        }
    }
    let mut sig = Vec::new();
    if cuts.is_empty() {
        sig.push(Quadrant::of(a, b, x.point_at(0.0)));
    } else {
        cuts.sort_by(f64::total_cmp);
        for k in 0..cuts.len() {
            let from = cuts[k];
            let span = if k + 1 < cuts.len() {
                cuts[k + 1] - from
            } else {
                cuts[0] + 2.0 * std::f64::consts::PI - from
            };
            sig.push(Quadrant::of(a, b, x.point_at(from + span / 2.0)));
        }
    }
    sig.sort();
    sig.dedup();
    Ok(sig)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripleFamily {
    /// Ã against (A, B).
    Diamond,
    /// B̃ against (A, B).
    Heart,
    /// A against (Ã, B̃).
    Spade,
    /// B against (Ã, B̃).
    Club,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripleRole {
    Atilde,
    Btilde,
    Aplain,
    Bplain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TripleConfigCode {
    pub family: TripleFamily,
    pub letter: char,
}

impl fmt::Display for TripleConfigCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.family {
            TripleFamily::Diamond => "diamond",
            TripleFamily::Heart => "heart",
            TripleFamily::Spade => "spade",
            TripleFamily::Club => "club",
        };
        write!(f, "{sym}-{}", self.letter)
    }
}

/// Topological position of `x` relative to the overlapping pair `(a, b)`.
///
/// Roles `Btilde` and `Bplain` read the pair in swapped order, so the tested
/// corner becomes the other one.
pub fn classify_triple(
    a: &Disk,
    b: &Disk,
    x: &Disk,
    role: TripleRole,
) -> Result<TripleConfigCode, ConfigError> {
    let (p, q, family) = match role {
        TripleRole::Atilde => (a, b, TripleFamily::Diamond),
        TripleRole::Btilde => (b, a, TripleFamily::Heart),
        TripleRole::Aplain => (a, b, TripleFamily::Spade),
        TripleRole::Bplain => (b, a, TripleFamily::Club),
    };
    let (_, v) = circle_intersections(p, q)?;
    if x.signed_dist(v).abs() <= EPS_GEOM {
        return Err(ConfigError::HypothesesViolated("corner on third circle".into()));
    }
    let inside = x.contains_strictly(v);
    let sig = quadrant_signature(p, q, x)?;
    use Quadrant::*;
    let all = sig.len() == 4;
    let letter = if inside {
        if all {
            Some('d')
        } else if sig == [SecondOnly, Neither] {
            Some('b')
        } else if sig == [Both, SecondOnly, Neither] {
            Some('a')
        } else if sig == [FirstOnly, SecondOnly, Neither] {
            Some('c')
        } else {
            None
        }
    } else if all {
        Some('e')
    } else if sig == [Both, FirstOnly] {
        Some('f')
    } else if sig == [Both, FirstOnly, SecondOnly] {
        Some('g')
    } else if sig == [Both, FirstOnly, Neither] {
        Some('h')
    } else {
        None
    };
    letter
        .map(|letter| TripleConfigCode { family, letter })
        .ok_or_else(|| {
            ConfigError::HypothesesViolated(format!(
                "signature {sig:?} with corner {} the third disk",
                if inside { "inside" } else { "outside" }
            ))
        })
}

/// Points near every crossing and just off every circle; used to decide whether
/// regions bounded by these circles meet.
pub fn probe_points(circles: &[Disk]) -> Vec<Point> {
    let scale = circles.iter().map(|d| d.radius).fold(0.0, f64::max);
    let delta = 1e-6 * scale;
    let mut out = Vec::new();
    for i in 0..circles.len() {
        let c = &circles[i];
        for k in 0..8 {
            let t = 0.37 + k as f64 * std::f64::consts::PI / 4.0;
            out.push(c.center + Point::polar(c.radius - delta, t));
            out.push(c.center + Point::polar(c.radius + delta, t));
        }
        for d in circles.iter().skip(i + 1) {
            if disk_relation(c, d) != DiskRelation::Overlapping {
                continue;
            }
            let (u, v) = circle_intersections(c, d).unwrap();
            for p in [u, v] {
                let t1 = (p - c.center).perp() * (1.0 / c.radius);
                let t2 = (p - d.center).perp() * (1.0 / d.radius);
                for dir in [t1 + t2, t1 - t2, -(t1 + t2), t2 - t1] {
                    let n = dir.norm();
                    if n > 1e-12 {
                        out.push(p + dir * (delta / n));
                    }
                }
            }
        }
    }
    out
}

/// Region membership: every disk in `inside` contains `p`, no disk in `outside` does.
pub fn in_region(p: Point, inside: &[Disk], outside: &[Disk]) -> bool {
    inside.iter().all(|d| d.contains_strictly(p)) && outside.iter().all(|d| !d.contains(p))
}

/// Whether the open region cut out by `inside`/`outside` is nonempty, for circles in general position.
pub fn region_nonempty(inside: &[Disk], outside: &[Disk]) -> bool {
    let all: Vec<Disk> = inside.iter().chain(outside).copied().collect();
    probe_points(&all).into_iter().any(|p| in_region(p, inside, outside))
}
