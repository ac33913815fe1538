//! Points, disks and the pairwise predicates everything else is built on.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::EPS_GEOM;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid disk: center ({x}, {y}), radius {r}")]
    InvalidDisk { x: f64, y: f64, r: f64 },
    #[error("overlap angle undefined for relation {0:?}")]
    AngleUndefined(DiskRelation),
    #[error("circles are not transverse ({0:?})")]
    NotTransverse(DiskRelation),
    #[error("triple contains a containment relation")]
    DegenerateTriple,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn polar(r: f64, angle: f64) -> Self {
        Point::new(r * angle.cos(), r * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(cx: f64, cy: f64, r: f64) -> Result<Self, GeomError> {
        if !(cx.is_finite() && cy.is_finite() && r.is_finite()) || r <= EPS_GEOM {
            return Err(GeomError::InvalidDisk { x: cx, y: cy, r });
        }
        Ok(Disk { center: Point::new(cx, cy), radius: r })
    }

    /// Panicking constructor for literals in tests and fixtures.
    pub fn at(cx: f64, cy: f64, r: f64) -> Self {
        Disk::new(cx, cy, r).expect("invalid disk literal")
    }

    pub fn point_at(&self, angle: f64) -> Point {
        self.center + Point::polar(self.radius, angle)
    }

    pub fn angle_of(&self, p: Point) -> f64 {
        (p - self.center).angle()
    }

    /// Signed distance from the boundary circle, negative inside.
    pub fn signed_dist(&self, p: Point) -> f64 {
        p.dist(self.center) - self.radius
    }

    /// Closed-disk membership with tolerance.
    pub fn contains(&self, p: Point) -> bool {
        self.signed_dist(p) <= EPS_GEOM
    }

    pub fn contains_strictly(&self, p: Point) -> bool {
        self.signed_dist(p) < -EPS_GEOM
    }

    pub fn translated(&self, by: Point) -> Disk {
        Disk { center: self.center + by, radius: self.radius }
    }

    pub fn scaled_about(&self, origin: Point, factor: f64) -> Disk {
        Disk {
            center: origin + (self.center - origin) * factor,
            radius: self.radius * factor,
        }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiskRelation {
    Disjoint,
    ExternallyTangent,
    Overlapping,
    InternallyTangent,
    FirstContainsSecond,
    SecondContainsFirst,
    Equal,
}

impl DiskRelation {
    /// Overlapping or externally tangent: the relations with a defined angle.
    pub fn meets(self) -> bool {
        matches!(self, DiskRelation::Overlapping | DiskRelation::ExternallyTangent)
    }

    pub fn is_containment(self) -> bool {
        matches!(
            self,
            DiskRelation::InternallyTangent
                | DiskRelation::FirstContainsSecond
                | DiskRelation::SecondContainsFirst
                | DiskRelation::Equal
        )
    }
}

pub fn disk_relation(a: &Disk, b: &Disk) -> DiskRelation {
    let d = a.center.dist(b.center);
    let sum = a.radius + b.radius;
    let diff = (a.radius - b.radius).abs();
    if d <= EPS_GEOM && diff <= EPS_GEOM {
        DiskRelation::Equal
    } else if (d - sum).abs() <= EPS_GEOM {
        DiskRelation::ExternallyTangent
    } else if d > sum {
        DiskRelation::Disjoint
    } else if (d - diff).abs() <= EPS_GEOM {
        DiskRelation::InternallyTangent
    } else if d < diff {
        if a.radius > b.radius {
            DiskRelation::FirstContainsSecond
        } else {
            DiskRelation::SecondContainsFirst
        }
    } else {
        DiskRelation::Overlapping
    }
}

/// Cosine of the overlap angle, unclamped.
fn overlap_cos(a: &Disk, b: &Disk) -> f64 {
    let d2 = (a.center - b.center).norm_sq();
    (d2 - a.radius * a.radius - b.radius * b.radius) / (2.0 * a.radius * b.radius)
}

/// External intersection angle of two meeting disks; 0 for tangency.
pub fn overlap_angle(a: &Disk, b: &Disk) -> Result<f64, GeomError> {
    match disk_relation(a, b) {
        DiskRelation::ExternallyTangent => Ok(0.0),
        DiskRelation::Overlapping => Ok(overlap_cos(a, b).clamp(-1.0, 1.0).acos()),
        rel => Err(GeomError::AngleUndefined(rel)),
    }
}

/// Center distance at which disks of radii `r1`, `r2` meet at angle `theta`.
pub fn center_distance_for_angle(r1: f64, r2: f64, theta: f64) -> f64 {
    (r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * theta.cos()).max(0.0).sqrt()
}

/// The two boundary crossings `(u, v)`: ∂A runs into B at `u`, ∂B runs into A at `v`.
pub fn circle_intersections(a: &Disk, b: &Disk) -> Result<(Point, Point), GeomError> {
    let rel = disk_relation(a, b);
    if rel != DiskRelation::Overlapping {
        return Err(GeomError::NotTransverse(rel));
    }
    Ok(raw_intersections(a, b))
}

fn raw_intersections(a: &Disk, b: &Disk) -> (Point, Point) {
    let delta = b.center - a.center;
    let d = delta.norm();
    let e = delta * (1.0 / d);
    let along = (a.radius * a.radius - b.radius * b.radius + d * d) / (2.0 * d);
    let h = (a.radius * a.radius - along * along).max(0.0).sqrt();
    let base = a.center + e * along;
    let right = Point::new(e.y, -e.x);
    (base + right * h, base - right * h)
}

/// Single contact point of an externally tangent pair.
pub fn tangency_point(a: &Disk, b: &Disk) -> Option<Point> {
    if disk_relation(a, b) != DiskRelation::ExternallyTangent {
        return None;
    }
    let delta = b.center - a.center;
    let d = delta.norm();
    // split the slack so the point sits between both circles
    let t = (a.radius + 0.5 * (d - a.radius - b.radius)) / d;
    Some(a.center + delta * t)
}

/// Points where the two boundary circles meet: crossings or the tangency point.
pub fn contact_points(a: &Disk, b: &Disk) -> Vec<Point> {
    match disk_relation(a, b) {
        DiskRelation::Overlapping => {
            let (u, v) = raw_intersections(a, b);
            vec![u, v]
        }
        DiskRelation::ExternallyTangent => tangency_point(a, b).into_iter().collect(),
        _ => Vec::new(),
    }
}

/// Whether the three closed disks share a point.
pub fn triple_intersection_nonempty(a: &Disk, b: &Disk, c: &Disk) -> Result<bool, GeomError> {
    triple_test(a, b, c, false)
}

/// Whether the three open disks share a point.
pub fn triple_interior_nonempty(a: &Disk, b: &Disk, c: &Disk) -> Result<bool, GeomError> {
    triple_test(a, b, c, true)
}

fn triple_test(a: &Disk, b: &Disk, c: &Disk, interior: bool) -> Result<bool, GeomError> {
    let pairs = [(a, b, c), (b, c, a), (c, a, b)];
    if pairs.iter().any(|(x, y, _)| disk_relation(x, y).is_containment()) {
        return Err(GeomError::DegenerateTriple);
    }
    for (x, y, z) in pairs {
        let rel = disk_relation(x, y);
        if interior && rel != DiskRelation::Overlapping {
            continue;
        }
        for p in contact_points(x, y) {
            let hit = if interior { z.contains_strictly(p) } else { z.contains(p) };
            if hit {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Counterclockwise sweep from `from` to `to`, in `[0, 2π)`.
pub fn ccw_sweep(from: f64, to: f64) -> f64 {
    wrap_angle(to - from)
}

/// Circle through three points, `None` when they are collinear.
pub fn circumcircle(p1: Point, p2: Point, p3: Point) -> Option<(Point, f64)> {
    let a = p2 - p1;
    let b = p3 - p1;
    let det = 2.0 * a.cross(b);
    let scale = a.norm_sq().max(b.norm_sq());
    if det.abs() <= 1e-14 * scale {
        return None;
    }
    let ux = (b.y * a.norm_sq() - a.y * b.norm_sq()) / det;
    let uy = (a.x * b.norm_sq() - b.x * a.norm_sq()) / det;
    let off = Point::new(ux, uy);
    Some((p1 + off, off.norm()))
}
