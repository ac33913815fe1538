//! Möbius and anti-Möbius maps on points and disks, pair normalization and alignment.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{circle_general_position, DiskConfiguration};
use crate::geom::{circumcircle, contact_points, disk_relation, Disk, DiskRelation, Point};
use crate::EPS_GEOM;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoebiusError {
    #[error("map sends the point to infinity")]
    MapsToInfinity,
    #[error("image of the disk is unbounded")]
    UnboundedImage,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("no anchor vertex found: {0}")]
    NoAnchorFound(String),
    #[error("normalization conditions fail at epsilon {epsilon}: {reason}")]
    ConditionFailed { epsilon: f64, reason: String },
    #[error("fewer than three usable anchor points")]
    InsufficientAnchors,
    #[error("configurations have different labels")]
    LabelMismatch,
}

pub fn to_c(p: Point) -> Complex64 {
    Complex64::new(p.x, p.y)
}

pub fn to_p(z: Complex64) -> Point {
    Point::new(z.re, z.im)
}

/// `z ↦ (a z + b) / (c z + d)`, with `z` conjugated first when `conjugate_first` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub conjugate_first: bool,
}

/// Image of a closed disk: a bounded disk or the closed exterior of an open disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskImage {
    Disk(Disk),
    Exterior(Disk),
}

impl DiskImage {
    pub fn circle(&self) -> Disk {
        match *self {
            DiskImage::Disk(d) | DiskImage::Exterior(d) => d,
        }
    }
}

impl MoebiusMap {
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        conjugate_first: bool,
    ) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() <= EPS_GEOM {
            return Err(MoebiusError::DegenerateInput("zero determinant"));
        }
        let s = det.sqrt();
        Ok(MoebiusMap { a: a / s, b: b / s, c: c / s, d: d / s, conjugate_first })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MoebiusMap { a: one, b: zero, c: zero, d: one, conjugate_first: false }
    }

    /// `z ↦ scale_rot·z + shift`.
    pub fn similarity(scale_rot: Complex64, shift: Complex64) -> Self {
        MoebiusMap::new(scale_rot, shift, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), false)
            .expect("similarity with zero scale")
    }

    pub fn translation(by: Point) -> Self {
        MoebiusMap::similarity(Complex64::new(1.0, 0.0), to_c(by))
    }

    pub fn dilation(center: Point, factor: f64) -> Self {
        let c = to_c(center);
        MoebiusMap::similarity(Complex64::new(factor, 0.0), c * (1.0 - factor))
    }

    pub fn rotation(angle: f64) -> Self {
        MoebiusMap::similarity(Complex64::from_polar(1.0, angle), Complex64::new(0.0, 0.0))
    }

    /// `z ↦ 1/z`.
    pub fn inversion() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        MoebiusMap::new(zero, one, one, zero, false).unwrap()
    }

    /// `z ↦ z̄`.
    pub fn conjugation() -> Self {
        MoebiusMap { conjugate_first: true, ..MoebiusMap::identity() }
    }

    /// Point sent to infinity, if any.
    pub fn pole(&self) -> Option<Point> {
        if self.c.norm() <= EPS_GEOM * self.d.norm().max(1.0) * 1e-6 {
            return None;
        }
        let w = -self.d / self.c;
        Some(to_p(if self.conjugate_first { w.conj() } else { w }))
    }

    pub fn apply_complex(&self, z: Complex64) -> Result<Complex64, MoebiusError> {
        let w = if self.conjugate_first { z.conj() } else { z };
        let den = self.c * w + self.d;
        if den.norm() <= EPS_GEOM {
            return Err(MoebiusError::MapsToInfinity);
        }
        Ok((self.a * w + self.b) / den)
    }

    pub fn apply_point(&self, z: Point) -> Result<Point, MoebiusError> {
        self.apply_complex(to_c(z)).map(to_p)
    }

    /// Image of a closed disk as a disk or an exterior region.
    pub fn apply_disk_region(&self, disk: &Disk) -> Result<DiskImage, MoebiusError> {
        let pole_inside = match self.pole() {
            Some(p) => {
                let s = disk.signed_dist(p);
                if s.abs() <= EPS_GEOM {
                    return Err(MoebiusError::UnboundedImage);
                }
                s < 0.0
            }
            None => false,
        };
        let pts: Vec<Point> = [0.3, 2.4, 4.5]
            .iter()
            .map(|&t| self.apply_point(disk.point_at(t)))
            .collect::<Result<_, _>>()?;
        let (center, radius) =
            circumcircle(pts[0], pts[1], pts[2]).ok_or(MoebiusError::UnboundedImage)?;
        let circle = Disk::new(center.x, center.y, radius).map_err(|_| MoebiusError::UnboundedImage)?;
        if pole_inside {
            return Ok(DiskImage::Exterior(circle));
        }
        // the image of the center must land inside the image circle
        let witness = self.apply_point(disk.center)?;
        if circle.signed_dist(witness) >= 0.0 {
            return Err(MoebiusError::UnboundedImage);
        }
        Ok(DiskImage::Disk(circle))
    }

    pub fn apply_disk(&self, disk: &Disk) -> Result<Disk, MoebiusError> {
        match self.apply_disk_region(disk)? {
            DiskImage::Disk(d) => Ok(d),
            DiskImage::Exterior(_) => Err(MoebiusError::UnboundedImage),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MoebiusMap) -> MoebiusMap {
        let f = if self.conjugate_first {
            [first.a.conj(), first.b.conj(), first.c.conj(), first.d.conj()]
        } else {
            [first.a, first.b, first.c, first.d]
        };
        MoebiusMap::new(
            self.a * f[0] + self.b * f[2],
            self.a * f[1] + self.b * f[3],
            self.c * f[0] + self.d * f[2],
            self.c * f[1] + self.d * f[3],
            self.conjugate_first ^ first.conjugate_first,
        )
        .expect("composition of invertible maps")
    }

    pub fn inverse(&self) -> MoebiusMap {
        let (a, b, c, d) = (self.d, -self.b, -self.c, self.a);
        if self.conjugate_first {
            MoebiusMap { a: a.conj(), b: b.conj(), c: c.conj(), d: d.conj(), conjugate_first: true }
        } else {
            MoebiusMap { a, b, c, d, conjugate_first: false }
        }
    }

    pub fn is_similarity(&self) -> bool {
        self.c.norm() <= 1e-12 * self.d.norm()
    }

    /// Whether the map preserves the open unit disk.
    pub fn preserves_unit_disk(&self) -> bool {
        let probes = [0.0, 1.3, 2.9, 4.4];
        probes.iter().all(|&t| match self.apply_point(Point::polar(1.0, t)) {
            Ok(p) => (p.norm() - 1.0).abs() < 1e-9,
            Err(_) => false,
        }) && self.apply_point(Point::new(0.0, 0.0)).map(|p| p.norm() < 1.0).unwrap_or(false)
    }

    /// The unique map with `z_i ↦ w_i`.
    pub fn from_three_points(z: [Point; 3], w: [Point; 3]) -> Result<MoebiusMap, MoebiusError> {
        let sz = cross_ratio_map(z)?;
        let sw = cross_ratio_map(w)?;
        Ok(sw.inverse().compose(&sz))
    }
}

/// Map with `z1 ↦ 0`, `z2 ↦ 1`, `z3 ↦ ∞`.
fn cross_ratio_map(z: [Point; 3]) -> Result<MoebiusMap, MoebiusError> {
    let scale = z.iter().map(|p| p.norm()).fold(1.0, f64::max);
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        if z[i].dist(z[j]) <= EPS_GEOM * scale {
            return Err(MoebiusError::DegenerateInput("coincident points"));
        }
    }
    let [z1, z2, z3] = z.map(to_c);
    MoebiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1), false)
}

/// Which construction the normalization follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremMode {
    /// Both configurations on the sphere, charted in the plane.
    Sphere,
    /// Both configurations in the plane.
    PlanePlane,
    /// Both configurations in the unit disk.
    HypHyp,
    /// First in the plane, second in the unit disk.
    PlaneVsHyp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationResult {
    pub map_for_c: MoebiusMap,
    pub map_for_ctilde: MoebiusMap,
    pub epsilon: f64,
    pub anchor_vertices: Vec<u32>,
    /// The pair the maps act on; an inscribed disk may have been added to both.
    pub augmented: Option<(DiskConfiguration, DiskConfiguration)>,
}

impl NormalizationResult {
    /// Images of every disk under the two maps.
    pub fn images(
        &self,
        c: &DiskConfiguration,
        ct: &DiskConfiguration,
    ) -> Result<(Vec<DiskImage>, Vec<DiskImage>), MoebiusError> {
        let (c, ct) = match &self.augmented {
            Some((a, b)) => (a, b),
            None => (c, ct),
        };
        let left = c
            .disks()
            .iter()
            .map(|d| self.map_for_c.apply_disk_region(d))
            .collect::<Result<Vec<_>, _>>()?;
        let right = ct
            .disks()
            .iter()
            .map(|d| self.map_for_ctilde.apply_disk_region(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((left, right))
    }
}

/// The two limit points of a pair of disjoint circles: `(inside first, inside second)`.
fn limit_points(a: &Disk, b: &Disk) -> Option<(Point, Point)> {
    let delta = b.center - a.center;
    let d = delta.norm();
    if d <= a.radius + b.radius {
        return None;
    }
    let e = delta * (1.0 / d);
    let s = (a.radius * a.radius - b.radius * b.radius + d * d) / d;
    let disc = (s * s - 4.0 * a.radius * a.radius).sqrt();
    let t_near = (s - disc) / 2.0;
    let t_far = (s + disc) / 2.0;
    Some((a.center + e * t_near, a.center + e * t_far))
}

/// Map making two disjoint circles concentric about 0, with `outer`'s disk sent around ∞.
fn concentric_map(outer: &Disk, inner: &Disk) -> Option<MoebiusMap> {
    let (q, p) = limit_points(outer, inner)?;
    let one = Complex64::new(1.0, 0.0);
    MoebiusMap::new(one, -to_c(p), one, -to_c(q), false).ok()
}

fn image_disk(m: &MoebiusMap, d: &Disk) -> Result<Disk, MoebiusError> {
    m.apply_disk(d)
}

/// Isometry of the unit disk sending the hyperbolic center of `d` to 0, and the hyperbolic radius.
fn hyperbolic_centering(d: &Disk) -> Result<(MoebiusMap, f64), MoebiusError> {
    let dist = d.center.norm();
    if dist + d.radius >= 1.0 - EPS_GEOM {
        return Err(MoebiusError::NoAnchorFound("disk not inside the unit disk".into()));
    }
    let dir = if dist > 0.0 { d.center.angle() } else { 0.0 };
    let (x1, x2) = (dist - d.radius, dist + d.radius);
    let (t1, t2) = (x1.atanh(), x2.atanh());
    let p = Complex64::from_polar(((t1 + t2) / 2.0).tanh(), dir);
    let one = Complex64::new(1.0, 0.0);
    let m = MoebiusMap::new(one, -p, -p.conj(), one, false)?;
    Ok((m, (t2 - t1) / 2.0))
}

fn differs(d1: &Disk, d2: &Disk) -> bool {
    let scale = d1.radius.max(d2.radius);
    (d1.radius - d2.radius).abs() > 1e-9 * scale
        || (d1.center.norm() - d2.center.norm()).abs() > 1e-9 * scale.max(d1.center.norm())
}

/// Largest disk in the gap between three pairwise meeting disks, if the gap is bounded.
pub fn inscribed_disk(d: [&Disk; 3]) -> Option<Disk> {
    // externally tangent to all three: |x - c_i| = r + r_i
    let [a, b, c] = d;
    let lin = |p: &Disk, q: &Disk| {
        // difference of the two tangency equations: ax·x + ay·y = c0 + c1·r
        let ax = 2.0 * (q.center.x - p.center.x);
        let ay = 2.0 * (q.center.y - p.center.y);
        let c0 = q.center.norm_sq() - p.center.norm_sq() - q.radius * q.radius + p.radius * p.radius;
        let c1 = -2.0 * (q.radius - p.radius);
        (ax, ay, c0, c1)
    };
    let (a1, b1, c01, c11) = lin(a, b);
    let (a2, b2, c02, c12) = lin(a, c);
    let det = a1 * b2 - a2 * b1;
    if det.abs() < 1e-14 {
        return None;
    }
    // x = x0 + x1 r, y = y0 + y1 r
    let x0 = (c01 * b2 - c02 * b1) / det;
    let x1 = (c11 * b2 - c12 * b1) / det;
    let y0 = (a1 * c02 - a2 * c01) / det;
    let y1 = (a1 * c12 - a2 * c11) / det;
    // (x0 + x1 r - ax)² + (y0 + y1 r - ay)² = (r + ra)²
    let dx = x0 - a.center.x;
    let dy = y0 - a.center.y;
    let qa = x1 * x1 + y1 * y1 - 1.0;
    let qb = 2.0 * (dx * x1 + dy * y1 - a.radius);
    let qc = dx * dx + dy * dy - a.radius * a.radius;
    let mut roots = Vec::new();
    if qa.abs() < 1e-14 {
        if qb.abs() > 1e-14 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        roots.push((-qb - s) / (2.0 * qa));
        roots.push((-qb + s) / (2.0 * qa));
    }
    let inside_triangle = |p: Point| {
        let s1 = (b.center - a.center).cross(p - a.center);
        let s2 = (c.center - b.center).cross(p - b.center);
        let s3 = (a.center - c.center).cross(p - c.center);
        (s1 > 0.0 && s2 > 0.0 && s3 > 0.0) || (s1 < 0.0 && s2 < 0.0 && s3 < 0.0)
    };
    let mut best: Option<Disk> = None;
    for r in roots {
        if !r.is_finite() || r <= EPS_GEOM {
            continue;
        }
        let p = Point::new(x0 + x1 * r, y0 + y1 * r);
        if !inside_triangle(p) || [a, b, c].iter().any(|q| q.contains(p)) {
            continue;
        }
        let cand = Disk { center: p, radius: r };
        if best.map(|b| cand.radius < b.radius).unwrap_or(true) {
            best = Some(cand);
        }
    }
    best
}

fn only_tangencies(cfg: &DiskConfiguration, i: usize) -> bool {
    let d = &cfg.disks()[i];
    cfg.disks()
        .iter()
        .enumerate()
        .all(|(j, e)| j == i || disk_relation(d, e) != DiskRelation::Overlapping)
}

fn disjoint_partner(cfg: &DiskConfiguration, i: usize) -> Option<usize> {
    let d = &cfg.disks()[i];
    (0..cfg.len()).find(|&j| j != i && disk_relation(d, &cfg.disks()[j]) == DiskRelation::Disjoint)
}

/// Add the inscribed disk of the first triangular gap (sorted by labels) to both configurations.
fn augment(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
) -> Option<(DiskConfiguration, DiskConfiguration)> {
    let n = c.len();
    let meets = |cfg: &DiskConfiguration, i: usize, j: usize| {
        disk_relation(&cfg.disks()[i], &cfg.disks()[j]).meets()
    };
    let mut faces = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if meets(c, i, j) && meets(c, j, k) && meets(c, i, k) {
                    let mut l = [c.labels()[i], c.labels()[j], c.labels()[k]];
                    l.sort();
                    faces.insert((l, [i, j, k]));
                }
            }
        }
    }
    let new_label = c.labels().iter().max().map(|m| m + 1).unwrap_or(0);
    for (_, [i, j, k]) in faces {
        let pick = |cfg: &DiskConfiguration| {
            let ds = cfg.disks();
            let ins = inscribed_disk([&ds[i], &ds[j], &ds[k]])?;
            let clear = ds.iter().enumerate().all(|(m, d)| {
                let rel = disk_relation(&ins, d);
                if m == i || m == j || m == k {
                    rel == DiskRelation::ExternallyTangent
                } else {
                    rel == DiskRelation::Disjoint
                }
            });
            clear.then_some(ins)
        };
        if let (Some(x), Some(y)) = (pick(c), pick(ct)) {
            return Some((c.with_disk(new_label, x).ok()?, ct.with_disk(new_label, y).ok()?));
        }
    }
    None
}

/// Whether one of the two regions contains the other in its interior.
fn anchor_nested(x: &DiskImage, y: &DiskImage) -> bool {
    match (x, y) {
        (DiskImage::Disk(p), DiskImage::Disk(q)) | (DiskImage::Exterior(p), DiskImage::Exterior(q)) => {
            matches!(
                disk_relation(p, q),
                DiskRelation::FirstContainsSecond | DiskRelation::SecondContainsFirst
            )
        }
        _ => false,
    }
}

/// Run the normalization for `mode` at the given ε and check its conditions.
pub fn normalize_pair(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
    mode: TheoremMode,
    epsilon: f64,
) -> Result<NormalizationResult, MoebiusError> {
    if c.labels() != ct.labels() {
        return Err(MoebiusError::LabelMismatch);
    }
    let (mut res, work_c, work_ct) = match mode {
        TheoremMode::Sphere | TheoremMode::PlanePlane => normalize_spherical(c, ct, epsilon)?,
        TheoremMode::PlaneVsHyp | TheoremMode::HypHyp => normalize_hyperbolic(c, ct, mode, epsilon)?,
    };
    let left: Vec<DiskImage> = work_c
        .disks()
        .iter()
        .map(|d| res.map_for_c.apply_disk_region(d))
        .collect::<Result<_, _>>()?;
    let right: Vec<DiskImage> = work_ct
        .disks()
        .iter()
        .map(|d| res.map_for_ctilde.apply_disk_region(d))
        .collect::<Result<_, _>>()?;
    for &v in &res.anchor_vertices {
        let i = work_c.index_of(v).expect("anchor label");
        if !anchor_nested(&left[i], &right[i]) {
            return Err(MoebiusError::ConditionFailed {
                epsilon,
                reason: format!("anchor {v} not nested"),
            });
        }
    }
    let lc: Vec<Disk> = left.iter().map(DiskImage::circle).collect();
    let rc: Vec<Disk> = right.iter().map(DiskImage::circle).collect();
    let violations = circle_general_position(&lc, &rc);
    if !violations.is_empty() {
        return Err(MoebiusError::ConditionFailed {
            epsilon,
            reason: format!("not in general position: {}", violations[0]),
        });
    }
    res.epsilon = epsilon;
    Ok(res)
}

type Staged = (NormalizationResult, DiskConfiguration, DiskConfiguration);

fn normalize_spherical(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
    epsilon: f64,
) -> Result<Staged, MoebiusError> {
    let mut work = None;
    for i in 0..c.len() {
        if only_tangencies(c, i) {
            if let Some(j) = disjoint_partner(c, i) {
                work = Some((c.clone(), ct.clone(), i, j, false));
                break;
            }
        }
    }
    if work.is_none() {
        if let Some((ac, act)) = augment(c, ct) {
            let i = ac.len() - 1;
            if let Some(j) = disjoint_partner(&ac, i) {
                work = Some((ac, act, i, j, true));
            }
        }
    }
    let (wc, wct, ia, ib, augmented) = work.ok_or_else(|| {
        MoebiusError::NoAnchorFound("no tangency-only vertex with a disjoint partner".into())
    })?;
    if disk_relation(&wct.disks()[ia], &wct.disks()[ib]) != DiskRelation::Disjoint {
        return Err(MoebiusError::NoAnchorFound("anchor pair not disjoint in second configuration".into()));
    }
    let mut m = concentric_map(&wc.disks()[ia], &wc.disks()[ib])
        .ok_or_else(|| MoebiusError::NoAnchorFound("anchor pair not disjoint".into()))?;
    let mut mt = concentric_map(&wct.disks()[ia], &wct.disks()[ib])
        .ok_or_else(|| MoebiusError::NoAnchorFound("anchor pair not disjoint".into()))?;
    let rb = image_disk(&m, &wc.disks()[ib])?.radius;
    let rbt = image_disk(&mt, &wct.disks()[ib])?.radius;
    m = MoebiusMap::dilation(Point::default(), 1.0 / rb).compose(&m);
    mt = MoebiusMap::dilation(Point::default(), 1.0 / rbt).compose(&mt);

    let mut ic = None;
    for k in 0..wc.len() {
        if k == ia || k == ib {
            continue;
        }
        let x = image_disk(&m, &wc.disks()[k])?;
        let y = image_disk(&mt, &wct.disks()[k])?;
        if differs(&x, &y) {
            ic = Some((k, x, y));
            break;
        }
    }
    let (ic, x, y) = ic.ok_or_else(|| {
        MoebiusError::NoAnchorFound("all disks agree after normalization; the pair is Möbius equivalent".into())
    })?;
    m = MoebiusMap::rotation(-x.center.angle()).compose(&m);
    mt = MoebiusMap::rotation(-y.center.angle()).compose(&mt);
    let factor = y.center.norm() / x.center.norm();
    m = MoebiusMap::dilation(Point::default(), factor).compose(&m);
    let common = Point::new(y.center.norm(), 0.0);
    m = MoebiusMap::dilation(common, 1.0 + epsilon).compose(&m);
    let labels = wc.labels();
    let res = NormalizationResult {
        map_for_c: m,
        map_for_ctilde: mt,
        epsilon,
        anchor_vertices: vec![labels[ia], labels[ib], labels[ic]],
        augmented: augmented.then(|| (wc.clone(), wct.clone())),
    };
    Ok((res, wc, wct))
}

fn normalize_hyperbolic(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
    mode: TheoremMode,
    epsilon: f64,
) -> Result<Staged, MoebiusError> {
    let n = c.len();
    if n < 2 {
        return Err(MoebiusError::NoAnchorFound("need two disks".into()));
    }
    let (ia, mut m, mut mt) = if mode == TheoremMode::HypHyp {
        let mut found = None;
        for i in 0..n {
            let (m, rho) = hyperbolic_centering(&c.disks()[i])?;
            let (mt, rhot) = hyperbolic_centering(&ct.disks()[i])?;
            if (rho - rhot).abs() > 1e-9 * rho.max(rhot) {
                found = Some((i, m, mt));
                break;
            }
        }
        found.ok_or_else(|| MoebiusError::NoAnchorFound("all hyperbolic radii agree".into()))?
    } else {
        for d in ct.disks() {
            hyperbolic_centering(d)?;
        }
        let (mt, _) = hyperbolic_centering(&ct.disks()[0])?;
        let m = MoebiusMap::translation(-c.disks()[0].center);
        (0, m, mt)
    };
    let ra = image_disk(&m, &c.disks()[ia])?.radius;
    let rat = image_disk(&mt, &ct.disks()[ia])?.radius;
    m = MoebiusMap::dilation(Point::default(), rat / ra).compose(&m);

    let mut ib = None;
    for k in 0..n {
        if k == ia {
            continue;
        }
        let x = image_disk(&m, &c.disks()[k])?;
        let y = image_disk(&mt, &ct.disks()[k])?;
        if differs(&x, &y) && x.center.norm() > EPS_GEOM && y.center.norm() > EPS_GEOM {
            ib = Some((k, x, y));
            break;
        }
    }
    let (ib, x, y) = ib.ok_or_else(|| {
        MoebiusError::NoAnchorFound("no second anchor with differing disks".into())
    })?;
    m = MoebiusMap::rotation(-x.center.angle()).compose(&m);
    mt = MoebiusMap::rotation(-y.center.angle()).compose(&mt);
    m = MoebiusMap::dilation(Point::default(), y.center.norm() / x.center.norm()).compose(&m);
    let common = Point::new(y.center.norm(), 0.0);
    m = MoebiusMap::dilation(common, 1.0 + epsilon).compose(&m);
    let labels = c.labels();
    let res = NormalizationResult {
        map_for_c: m,
        map_for_ctilde: mt,
        epsilon,
        anchor_vertices: vec![labels[ia], labels[ib]],
        augmented: None,
    };
    Ok((res, c.clone(), ct.clone()))
}

fn anchor_points(c: &DiskConfiguration, ct: &DiskConfiguration) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    let n = c.len();
    for i in 0..n {
        for j in i + 1..n {
            let p = contact_points(&c.disks()[i], &c.disks()[j]);
            let q = contact_points(&ct.disks()[i], &ct.disks()[j]);
            if p.len() == q.len() {
                out.extend(p.into_iter().zip(q));
            }
        }
    }
    out
}

fn residual_under(
    m: &MoebiusMap,
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
) -> f64 {
    c.disks()
        .iter()
        .zip(ct.disks())
        .map(|(d, t)| match m.apply_disk(d) {
            Ok(img) => (img.center.dist(t.center) + (img.radius - t.radius).abs()) / t.radius,
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Möbius map through three corresponding contact points, and the worst disk mismatch after it.
pub fn align(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
) -> Result<(MoebiusMap, f64), MoebiusError> {
    if c.labels() != ct.labels() {
        return Err(MoebiusError::LabelMismatch);
    }
    let anchors = anchor_points(c, ct);
    let scale = c.disks().iter().map(|d| d.radius).fold(0.0, f64::max);
    let scale_t = ct.disks().iter().map(|d| d.radius).fold(0.0, f64::max);
    let mut chosen: Vec<(Point, Point)> = Vec::new();
    for (p, q) in anchors {
        let fresh = chosen
            .iter()
            .all(|(a, b)| a.dist(p) > 1e-6 * scale && b.dist(q) > 1e-6 * scale_t);
        if fresh {
            chosen.push((p, q));
            if chosen.len() == 3 {
                break;
            }
        }
    }
    if chosen.len() < 3 {
        return Err(MoebiusError::InsufficientAnchors);
    }
    let m = MoebiusMap::from_three_points(
        [chosen[0].0, chosen[1].0, chosen[2].0],
        [chosen[0].1, chosen[1].1, chosen[2].1],
    )?;
    Ok((m, residual_under(&m, c, ct)))
}

/// Best orientation-preserving similarity by least squares on centers, and its residual.
pub fn align_similarity(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
) -> Result<(MoebiusMap, f64), MoebiusError> {
    if c.labels() != ct.labels() {
        return Err(MoebiusError::LabelMismatch);
    }
    let n = c.len() as f64;
    if c.len() < 2 {
        return Err(MoebiusError::InsufficientAnchors);
    }
    let zs: Vec<Complex64> = c.disks().iter().map(|d| to_c(d.center)).collect();
    let ws: Vec<Complex64> = ct.disks().iter().map(|d| to_c(d.center)).collect();
    let zm = zs.iter().sum::<Complex64>() / n;
    let wm = ws.iter().sum::<Complex64>() / n;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (z, w) in zs.iter().zip(&ws) {
        num += (w - wm) * (z - zm).conj();
        den += (z - zm).norm_sqr();
    }
    if den <= EPS_GEOM {
        return Err(MoebiusError::InsufficientAnchors);
    }
    let alpha = num / den;
    let m = MoebiusMap::similarity(alpha, wm - alpha * zm);
    Ok((m, residual_under(&m, c, ct)))
}
