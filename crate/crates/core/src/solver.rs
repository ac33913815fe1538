//! Radii for disk patterns on a triangulated disk with prescribed overlap
//! angles, by per-vertex bisection sweeps, and breadth-first layout.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{contact_graph, ConfigError, DiskConfiguration, IncidenceData};
use crate::geom::{center_distance_for_angle, Disk, Point};
use crate::moebius::{align_similarity, MoebiusError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("overlap angle {0} is outside [0, π/2]")]
    UnsupportedAngle(f64),
    #[error("face {0:?} violates the triangle inequality")]
    TriangleViolation([u32; 3]),
    #[error("no convergence after {0} sweeps")]
    Nonconvergence(usize),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("edge {0}-{1} has no angle")]
    MissingAngle(u32, u32),
    #[error("vertex {0} placed twice, {1} apart")]
    InconsistentPlacement(u32, f64),
    #[error("disks {0} and {1} meet but share no edge")]
    ExtraneousContact(u32, u32),
    #[error("edge {0}-{1} not realized")]
    MissingContact(u32, u32),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// Oriented faces on vertices `0..n`, with the boundary cycle marked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangulation {
    pub vertex_count: usize,
    pub faces: Vec<[u32; 3]>,
    pub boundary: Vec<u32>,
}

impl Triangulation {
    /// Checks edge multiplicities, orientation and interior links; derives the boundary.
    pub fn new(vertex_count: usize, faces: Vec<[u32; 3]>) -> Result<Self, SolverError> {
        let bad = |m: String| Err(SolverError::InvalidTriangulation(m));
        if faces.is_empty() {
            return bad("no faces".into());
        }
        let mut directed: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for f in &faces {
            if f.iter().any(|&v| v as usize >= vertex_count) || f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return bad(format!("bad face {f:?}"));
            }
            for k in 0..3 {
                *directed.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
            }
        }
        if let Some((e, _)) = directed.iter().find(|(_, &c)| c > 1) {
            return bad(format!("directed edge {e:?} used twice"));
        }
        let boundary_edges: Vec<(u32, u32)> =
            directed.keys().filter(|(a, b)| !directed.contains_key(&(*b, *a))).copied().collect();
        let used: BTreeSet<u32> = faces.iter().flatten().copied().collect();
        if used.len() != vertex_count {
            return bad("unused vertex".into());
        }
        // boundary edges run one way around a single cycle
        let next: BTreeMap<u32, u32> = boundary_edges.iter().copied().collect();
        if next.len() != boundary_edges.len() || boundary_edges.is_empty() {
            return bad("boundary is not a simple cycle".into());
        }
        let start = *next.keys().next().unwrap();
        let mut boundary = vec![start];
        let mut v = next[&start];
        while v != start {
            if boundary.len() > next.len() {
                return bad("boundary is not a simple cycle".into());
            }
            boundary.push(v);
            v = *next.get(&v).ok_or_else(|| SolverError::InvalidTriangulation("open boundary".into()))?;
        }
        if boundary.len() != next.len() {
            return bad("boundary has several components".into());
        }
        let t = Triangulation { vertex_count, faces, boundary };
        for v in 0..vertex_count as u32 {
            if !t.is_boundary(v) && !t.link_is_cycle(v) {
                return bad(format!("link of {v} is not a cycle"));
            }
        }
        Ok(t)
    }

    pub fn is_boundary(&self, v: u32) -> bool {
        self.boundary.contains(&v)
    }

    pub fn interior(&self) -> Vec<u32> {
        (0..self.vertex_count as u32).filter(|&v| !self.is_boundary(v)).collect()
    }

    pub fn edges(&self) -> BTreeSet<(u32, u32)> {
        let mut out = BTreeSet::new();
        for f in &self.faces {
            for k in 0..3 {
                out.insert(IncidenceData::key(f[k], f[(k + 1) % 3]));
            }
        }
        out
    }

    pub fn faces_at(&self, v: u32) -> impl Iterator<Item = &[u32; 3]> {
        self.faces.iter().filter(move |f| f.contains(&v))
    }

    fn link_is_cycle(&self, v: u32) -> bool {
        // each face at v contributes the arc (next, prev) of its link
        let arcs: BTreeMap<u32, u32> = self
            .faces_at(v)
            .map(|f| {
                let k = f.iter().position(|&x| x == v).unwrap();
                (f[(k + 1) % 3], f[(k + 2) % 3])
            })
            .collect();
        let Some(&start) = arcs.keys().next() else { return false };
        let mut w = start;
        for _ in 0..arcs.len() {
            match arcs.get(&w) {
                Some(&n) => w = n,
                None => return false,
            }
        }
        w == start && arcs.len() >= 3
    }

    /// The same triangulation with vertex `v` renamed `perm[v]`.
    pub fn relabeled(&self, perm: &[u32]) -> Result<Triangulation, SolverError> {
        let faces = self.faces.iter().map(|f| [perm[f[0] as usize], perm[f[1] as usize], perm[f[2] as usize]]).collect();
        Triangulation::new(self.vertex_count, faces)
    }
}

/// The same overlap angle on every edge.
pub fn uniform_angles(t: &Triangulation, theta: f64) -> IncidenceData {
    IncidenceData {
        vertices: (0..t.vertex_count as u32).collect(),
        edges: t.edges().into_iter().map(|e| (e, theta)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// Radii of boundary vertices, in boundary-cycle order.
    FixedBoundaryRadii(Vec<f64>),
    /// Angle sums of boundary vertices, in boundary-cycle order; scale is fixed by the first radius.
    PrescribedBoundaryAngleSums(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iters: usize,
    /// Starting radii; all ones when absent.
    pub initial: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tolerance: 1e-10, max_iters: 20_000, initial: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub radii: Vec<f64>,
    /// Target angle sum per vertex; `None` where the radius is held fixed.
    pub target_angle_sums: Vec<Option<f64>>,
    pub tolerance: f64,
    pub max_iters: usize,
    /// Largest angle-sum error after each sweep.
    pub iteration_log: Vec<f64>,
}

/// Center distance realizing overlap angle `theta` between radii `ri` and `rj`.
pub fn edge_length(ri: f64, rj: f64, theta: f64) -> Result<f64, SolverError> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(SolverError::UnsupportedAngle(theta));
    }
    Ok(center_distance_for_angle(ri, rj, theta))
}

fn theta_of(theta: &IncidenceData, i: u32, j: u32) -> Result<f64, SolverError> {
    theta.theta(i, j).ok_or(SolverError::MissingAngle(i.min(j), i.max(j)))
}

/// Interior angle at `at` in the triangle of centers of `face`.
pub fn face_angle(face: &[u32; 3], at: u32, radii: &[f64], theta: &IncidenceData) -> Result<f64, SolverError> {
    let k = face.iter().position(|&v| v == at).expect("vertex on face");
    let (j, l) = (face[(k + 1) % 3], face[(k + 2) % 3]);
    let r = |v: u32| radii[v as usize];
    let b = edge_length(r(at), r(j), theta_of(theta, at, j)?)?;
    let c = edge_length(r(at), r(l), theta_of(theta, at, l)?)?;
    let a = edge_length(r(j), r(l), theta_of(theta, j, l)?)?;
    if a >= b + c || b >= a + c || c >= a + b {
        return Err(SolverError::TriangleViolation(*face));
    }
    Ok(((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0).acos())
}

pub fn angle_sum(t: &Triangulation, v: u32, radii: &[f64], theta: &IncidenceData) -> Result<f64, SolverError> {
    t.faces_at(v).map(|f| face_angle(f, v, radii, theta)).sum()
}

/// Radius at `v` whose angle sum hits `target`, others held fixed.
fn solve_vertex(t: &Triangulation, v: u32, radii: &mut [f64], theta: &IncidenceData, target: f64) -> Result<f64, SolverError> {
    let old = radii[v as usize];
    let sum_at = |r: f64, radii: &mut [f64]| {
        radii[v as usize] = r;
        angle_sum(t, v, radii, theta)
    };
    let (mut lo, mut hi) = (old, old);
    // sums fall as the radius grows
    for _ in 0..200 {
        if sum_at(lo, radii)? > target {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..200 {
        if sum_at(hi, radii)? < target {
            break;
        }
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum_at(mid, radii)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    radii[v as usize] = old;
    Ok(0.5 * (lo + hi))
}

/// Sweep vertices in id order, each set by bisection, until every angle sum is within tolerance.
pub fn solve_radii(
    t: &Triangulation,
    theta: &IncidenceData,
    bc: &BoundaryCondition,
    opts: &SolverOptions,
) -> Result<SolverState, SolverError> {
    for (&(i, j), &th) in &theta.edges {
        if !(0.0..=FRAC_PI_2).contains(&th) {
            log::warn!("edge {i}-{j} angle {th} outside the solver regime");
            return Err(SolverError::UnsupportedAngle(th));
        }
    }
    for (i, j) in t.edges() {
        theta_of(theta, i, j)?;
    }
    let n = t.vertex_count;
    let mut radii = opts.initial.clone().unwrap_or_else(|| vec![1.0; n]);
    let mut targets: Vec<Option<f64>> = (0..n).map(|_| Some(TAU)).collect();
    let mut anchor = None;
    match bc {
        BoundaryCondition::FixedBoundaryRadii(vals) => {
            if vals.len() != t.boundary.len() {
                return Err(SolverError::InvalidTriangulation("boundary value count".into()));
            }
            for (&v, &r) in t.boundary.iter().zip(vals) {
                radii[v as usize] = r;
                targets[v as usize] = None;
            }
        }
        BoundaryCondition::PrescribedBoundaryAngleSums(vals) => {
            if vals.len() != t.boundary.len() {
                return Err(SolverError::InvalidTriangulation("boundary value count".into()));
            }
            for (&v, &s) in t.boundary.iter().zip(vals) {
                targets[v as usize] = Some(s);
            }
            anchor = Some(t.boundary[0]);
        }
    }
    let mut log_ = Vec::new();
    for sweep in 0..opts.max_iters {
        for v in 0..n as u32 {
            let Some(target) = targets[v as usize] else { continue };
            let old = radii[v as usize];
            let mut new = solve_vertex(t, v, &mut radii, theta, target)?;
            // halve the step until every face at v is a triangle again
            let mut tries = 0;
            loop {
                radii[v as usize] = new;
                if t.faces_at(v).all(|f| f.iter().all(|&w| face_angle(f, w, &radii, theta).is_ok())) {
                    break;
                }
                tries += 1;
                if tries > 40 {
                    let f = *t.faces_at(v).next().unwrap();
                    return Err(SolverError::TriangleViolation(f));
                }
                new = 0.5 * (old + new);
            }
        }
        if let Some(a) = anchor {
            let s = 1.0 / radii[a as usize];
            radii.iter_mut().for_each(|r| *r *= s);
        }
        let mut worst: f64 = 0.0;
        for v in 0..n as u32 {
            if let Some(target) = targets[v as usize] {
                worst = worst.max((angle_sum(t, v, &radii, theta)? - target).abs());
            }
        }
        let prev = log_.last().copied().unwrap_or(f64::INFINITY);
        log_.push(worst);
        log::debug!("sweep {sweep}: residual {worst:e}");
        // past the tolerance, keep polishing while sweeps still help so that
        // tangencies survive layout at any scale
        let stalled = worst > 0.5 * prev || worst < 1e-14;
        if worst < opts.tolerance && stalled {
            return Ok(SolverState {
                radii,
                target_angle_sums: targets,
                tolerance: opts.tolerance,
                max_iters: opts.max_iters,
                iteration_log: log_,
            });
        }
    }
    Err(SolverError::Nonconvergence(opts.max_iters))
}

/// Place centers face by face and verify the realized contact graph.
pub fn layout(t: &Triangulation, radii: &[f64], theta: &IncidenceData) -> Result<DiskConfiguration, SolverError> {
    let n = t.vertex_count;
    let len = |i: u32, j: u32| edge_length(radii[i as usize], radii[j as usize], theta_of(theta, i, j)?);
    let mut pos: Vec<Option<Point>> = vec![None; n];
    let first = t.faces[0];
    pos[first[0] as usize] = Some(Point::new(0.0, 0.0));
    pos[first[1] as usize] = Some(Point::new(len(first[0], first[1])?, 0.0));
    let mut placed_faces = vec![false; t.faces.len()];
    let mut queue = VecDeque::from([0usize]);
    let scale = radii.iter().copied().fold(0.0, f64::max);
    while let Some(fi) = queue.pop_front() {
        if placed_faces[fi] {
            continue;
        }
        let f = t.faces[fi];
        // rotate so the first two vertices are placed
        let Some(k) = (0..3).find(|&k| pos[f[k] as usize].is_some() && pos[f[(k + 1) % 3] as usize].is_some()) else {
            continue;
        };
        let (a, b, c) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
        let (pa, pb) = (pos[a as usize].unwrap(), pos[b as usize].unwrap());
        let alpha = face_angle(&f, a, radii, theta)?;
        let dir = (pb - pa) * (1.0 / pa.dist(pb));
        let rot = Point::new(dir.x * alpha.cos() - dir.y * alpha.sin(), dir.x * alpha.sin() + dir.y * alpha.cos());
        let pc = pa + rot * len(a, c)?;
        match pos[c as usize] {
            Some(q) if q.dist(pc) > 1e-6 * scale => return Err(SolverError::InconsistentPlacement(c, q.dist(pc))),
            Some(_) => {}
            None => pos[c as usize] = Some(pc),
        }
        placed_faces[fi] = true;
        for (gi, g) in t.faces.iter().enumerate() {
            if !placed_faces[gi] && g.iter().filter(|v| f.contains(v)).count() == 2 {
                queue.push_back(gi);
            }
        }
    }
    if placed_faces.iter().any(|p| !p) {
        return Err(SolverError::InvalidTriangulation("faces not connected".into()));
    }
    let disks: Vec<Disk> = (0..n).map(|v| {
        let p = pos[v].unwrap();
        Disk::at(p.x, p.y, radii[v])
    }).collect();
    for (i, j) in t.edges() {
        let gap = (disks[i as usize].center.dist(disks[j as usize].center) - len(i, j)?).abs();
        if gap > 1e-8 * scale.max(1.0) {
            return Err(SolverError::InconsistentPlacement(j, gap));
        }
    }
    let c = DiskConfiguration::from_disks(disks)?;
    let realized = contact_graph(&c)?;
    for (&(i, j), &th) in &realized.edges {
        match theta.theta(i, j) {
            Some(want) if (want - th).abs() <= 1e-7 => {}
            Some(_) => return Err(SolverError::InconsistentPlacement(j, (theta.theta(i, j).unwrap() - th).abs())),
            None => return Err(SolverError::ExtraneousContact(i, j)),
        }
    }
    if let Some((i, j)) = t.edges().into_iter().find(|e| !realized.edges.contains_key(e)) {
        return Err(SolverError::MissingContact(i, j));
    }
    Ok(c)
}

/// Re-solve from random starting radii and from scaled boundary data; the
/// worst similarity-aligned residual against the reference layout.
pub fn rigidity_experiment(
    t: &Triangulation,
    theta: &IncidenceData,
    trials: usize,
    seed: u64,
) -> Result<f64, SolverError> {
    let bc = BoundaryCondition::FixedBoundaryRadii(vec![1.0; t.boundary.len()]);
    let opts = SolverOptions::default();
    let reference = solve_radii(t, theta, &bc, &opts)?;
    let base = layout(t, &reference.radii, theta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let scale = if trial % 2 == 0 { 1.0 } else { rng.gen_range(0.2..8.0) };
        let initial: Vec<f64> = (0..t.vertex_count).map(|_| rng.gen_range(0.3..3.0)).collect();
        let bc = BoundaryCondition::FixedBoundaryRadii(vec![scale; t.boundary.len()]);
        let s = solve_radii(t, theta, &bc, &SolverOptions { initial: Some(initial), ..opts.clone() })?;
        let c = layout(t, &s.radii, theta)?;
        let (_, res) = align_similarity(&c, &base)?;
        worst = worst.max(res);
    }
    Ok(worst)
}

// ---- standard triangulations ----

/// A center with `petals` boundary neighbors.
pub fn flower(petals: u32) -> Triangulation {
    let faces = (0..petals).map(|k| [petals, k, (k + 1) % petals]).collect();
    Triangulation::new(petals as usize + 1, faces).expect("flower")
}

/// Two adjacent interior vertices sharing two petals.
pub fn double_flower() -> Triangulation {
    // centers 0 and 1; boundary 2..=9 around them
    let faces = vec![
        [0, 1, 2],
        [1, 0, 6],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 6],
        [1, 6, 7],
        [1, 7, 8],
        [1, 8, 9],
        [1, 9, 2],
    ];
    Triangulation::new(10, faces).expect("double flower")
}

/// A parallelogram of the triangular lattice with `m × n` vertices.
pub fn lattice_patch(m: u32, n: u32) -> Triangulation {
    let id = |i: u32, j: u32| j * m + i;
    let mut faces = Vec::new();
    for j in 0..n - 1 {
        for i in 0..m - 1 {
            faces.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
            faces.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Triangulation::new((m * n) as usize, faces).expect("lattice patch")
}

/// Lattice points within hexagonal distance `r` of the origin.
pub fn hex_patch(r: i32) -> Triangulation {
    let mut ids = BTreeMap::new();
    for q in -r..=r {
        for s in -r..=r {
            if (q + s).abs() <= r {
                let k = ids.len() as u32;
                ids.insert((q, s), k);
            }
        }
    }
    let mut faces = Vec::new();
    for (&(q, s), &a) in &ids {
        if let (Some(&b), Some(&c)) = (ids.get(&(q + 1, s)), ids.get(&(q, s + 1))) {
            faces.push([a, b, c]);
        }
        if let (Some(&b), Some(&c)) = (ids.get(&(q + 1, s)), ids.get(&(q + 1, s - 1))) {
            faces.push([a, c, b]);
        }
    }
    Triangulation::new(ids.len(), faces).expect("hex patch")
}

/// Angle at the center of a symmetric flower, as a function of the center radius.
pub fn symmetric_flower_angle(center: f64, petal: f64, spoke: f64, rim: f64) -> f64 {
    let b = center_distance_for_angle(center, petal, spoke);
    let a = center_distance_for_angle(petal, petal, rim);
    ((2.0 * b * b - a * a) / (2.0 * b * b)).clamp(-1.0, 1.0).acos()
}
