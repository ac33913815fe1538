//! Subsumptive subsets of a configuration pair, the shift graph on each of
//! them, sinks, and the resulting lower bound on the fixed-point index.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::config::{eye_inside, DiskConfiguration};
use crate::geom::{disk_relation, overlap_angle, Disk, DiskRelation};
use crate::{EPS_ANGLE, EPS_GEOM};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubsumptionError {
    #[error("observation violated: {0}")]
    ObservationViolated(String),
    #[error("angle comparison for {0} and {1} is within tolerance")]
    AngleTie(u32, u32),
    #[error("configurations have different labels")]
    LabelMismatch,
}

/// Which side of each pair sits inside the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Every second-configuration disk lies in its first-configuration partner.
    TargetInside,
    /// Every first-configuration disk lies in its partner.
    SourceInside,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsumptiveSubset {
    pub members: Vec<u32>,
    pub direction: Direction,
    pub isolated: bool,
    /// Overlapping pairs inside the subset.
    pub tree_edges: Vec<(u32, u32)>,
    /// Shift arrows `i → j`.
    pub arrows: Vec<(u32, u32)>,
    pub sink: Option<u32>,
    /// Pairs `(i, j)`, `i` inside and `j` outside, whose eyes are nested.
    pub cross_containments: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsumptionReport {
    pub subsets: Vec<SubsumptiveSubset>,
    pub lower_bound: usize,
}

/// Closed containment of `inner` in `outer`.
pub fn disk_inside(inner: &Disk, outer: &Disk) -> bool {
    inner.center.dist(outer.center) + inner.radius <= outer.radius + EPS_GEOM
}

fn overlapping(a: &Disk, b: &Disk) -> bool {
    disk_relation(a, b) == DiskRelation::Overlapping
}

fn direction_of(d: &Disk, dt: &Disk) -> Option<Direction> {
    if disk_inside(dt, d) {
        Some(Direction::TargetInside)
    } else if disk_inside(d, dt) {
        Some(Direction::SourceInside)
    } else {
        None
    }
}

/// The pair with roles arranged so the second configuration sits inside.
fn oriented<'a>(
    c: &'a DiskConfiguration,
    ct: &'a DiskConfiguration,
    dir: Direction,
) -> (&'a DiskConfiguration, &'a DiskConfiguration) {
    match dir {
        Direction::TargetInside => (c, ct),
        Direction::SourceInside => (ct, c),
    }
}

fn eyes_nested(c: &DiskConfiguration, ct: &DiskConfiguration, i: u32, j: u32) -> bool {
    let (a, b) = (c.get(i).unwrap(), c.get(j).unwrap());
    let (at, bt) = (ct.get(i).unwrap(), ct.get(j).unwrap());
    overlapping(a, b) && (eye_inside(a, b, at, bt) || eye_inside(at, bt, a, b))
}

/// Maximal subsumptive subsets with their isolation flags and shift graphs.
pub fn subsumptive_subsets(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
) -> Result<SubsumptionReport, SubsumptionError> {
    if c.labels() != ct.labels() {
        return Err(SubsumptionError::LabelMismatch);
    }
    let labels = c.labels();
    let dirs: Vec<Option<Direction>> = c.disks().iter().zip(ct.disks()).map(|(d, dt)| direction_of(d, dt)).collect();
    let mut seen = vec![false; labels.len()];
    let mut subsets = Vec::new();
    for start in 0..labels.len() {
        let Some(dir) = dirs[start] else { continue };
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut members = Vec::new();
        while let Some(i) = stack.pop() {
            members.push(labels[i]);
            for j in 0..labels.len() {
                if !seen[j] && dirs[j] == Some(dir) && disk_relation(&c.disks()[i], &c.disks()[j]).meets() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        members.sort_unstable();
        let inside: BTreeSet<u32> = members.iter().copied().collect();
        let mut cross = Vec::new();
        for &i in &members {
            for &j in labels {
                if !inside.contains(&j) && eyes_nested(c, ct, i, j) {
                    cross.push((i, j));
                }
            }
        }
        let tree_edges = tree_edges(c, &members);
        let arrows = build_h(c, ct, &members, dir)?;
        let sink = sink_of(&members, &arrows);
        subsets.push(SubsumptiveSubset {
            members,
            direction: dir,
            isolated: cross.is_empty(),
            tree_edges,
            arrows,
            sink,
            cross_containments: cross,
        });
    }
    let lower_bound = subsets.iter().filter(|s| s.isolated).count();
    Ok(SubsumptionReport { subsets, lower_bound })
}

fn tree_edges(c: &DiskConfiguration, members: &[u32]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for (k, &i) in members.iter().enumerate() {
        for &j in &members[k + 1..] {
            if overlapping(c.get(i).unwrap(), c.get(j).unwrap()) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Arrows `i → j` between overlapping members: the inner disk of `i` is shifted toward `j`.
pub fn build_h(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
    members: &[u32],
    dir: Direction,
) -> Result<Vec<(u32, u32)>, SubsumptionError> {
    let (outer, inner) = oriented(c, ct, dir);
    let mut arrows = Vec::new();
    for (i, j) in tree_edges(outer, members) {
        for (a, b) in [(i, j), (j, i)] {
            let (da, db) = (outer.get(a).unwrap(), outer.get(b).unwrap());
            let ia = inner.get(a).unwrap();
            if disk_inside(ia, db) {
                arrows.push((a, b));
                continue;
            }
            let Ok(mixed) = overlap_angle(ia, db) else { continue };
            let base = overlap_angle(da, db).expect("overlapping pair");
            if (mixed - base).abs() <= EPS_ANGLE {
                return Err(SubsumptionError::AngleTie(a, b));
            }
            if mixed > base {
                arrows.push((a, b));
            }
        }
    }
    arrows.sort_unstable();
    Ok(arrows)
}

fn sink_of(members: &[u32], arrows: &[(u32, u32)]) -> Option<u32> {
    let sources: BTreeSet<u32> = arrows.iter().map(|a| a.0).collect();
    let sinks: Vec<u32> = members.iter().copied().filter(|m| !sources.contains(m)).collect();
    (sinks.len() == 1).then(|| sinks[0])
}

/// The member with no outgoing arrow, if there is exactly one.
pub fn find_sink(
    c: &DiskConfiguration,
    ct: &DiskConfiguration,
    members: &[u32],
) -> Result<Option<u32>, SubsumptionError> {
    let i = members[0];
    let dir = direction_of(c.get(i).unwrap(), ct.get(i).unwrap())
        .ok_or_else(|| SubsumptionError::ObservationViolated("not a subsumptive subset".into()))?;
    Ok(sink_of(members, &build_h(c, ct, members, dir)?))
}

/// Number of maximal isolated subsumptive subsets.
pub fn index_lower_bound(c: &DiskConfiguration, ct: &DiskConfiguration) -> Result<usize, SubsumptionError> {
    Ok(subsumptive_subsets(c, ct)?.lower_bound)
}

/// Check the structural facts about one subset: the overlap graph is a tree,
/// every tree edge carries an arrow, no member has two outgoing arrows,
/// arrows propagate along paths, there is at most one sink, and at most one
/// nested eye pair leaves the subset.
pub fn check_observations(s: &SubsumptiveSubset) -> Result<(), SubsumptionError> {
    let n = s.members.len();
    if s.tree_edges.len() + 1 != n {
        return Err(SubsumptionError::ObservationViolated(format!(
            "{} overlap edges on {} members",
            s.tree_edges.len(),
            n
        )));
    }
    let arrows: BTreeSet<(u32, u32)> = s.arrows.iter().copied().collect();
    for &(i, j) in &s.tree_edges {
        if !arrows.contains(&(i, j)) && !arrows.contains(&(j, i)) {
            return Err(SubsumptionError::ObservationViolated(format!("edge {i}-{j} has no arrow")));
        }
    }
    let mut out: BTreeMap<u32, usize> = BTreeMap::new();
    for &(i, _) in &arrows {
        *out.entry(i).or_default() += 1;
    }
    if let Some((i, _)) = out.iter().find(|(_, &k)| k > 1) {
        return Err(SubsumptionError::ObservationViolated(format!("{i} has two outgoing arrows")));
    }
    if n <= 6 {
        let adj = |i: u32| -> Vec<u32> {
            s.tree_edges
                .iter()
                .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
                .collect()
        };
        // every simple path ending in an arrow is an arrow path
        for &start in &s.members {
            let mut stack = vec![vec![start]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                for nb in adj(last) {
                    if path.contains(&nb) {
                        continue;
                    }
                    let mut p = path.clone();
                    p.push(nb);
                    if arrows.contains(&(last, nb)) && !p.windows(2).all(|w| arrows.contains(&(w[0], w[1]))) {
                        return Err(SubsumptionError::ObservationViolated(format!("arrows break along {p:?}")));
                    }
                    stack.push(p);
                }
            }
        }
    }
    let sinkless = s.members.iter().filter(|m| !out.contains_key(m)).count();
    if sinkless > 1 {
        return Err(SubsumptionError::ObservationViolated("more than one sink".into()));
    }
    if s.cross_containments.len() > 1 {
        return Err(SubsumptionError::ObservationViolated(format!(
            "{} nested eye pairs leave the subset",
            s.cross_containments.len()
        )));
    }
    if let Some(&(i, _)) = s.cross_containments.first() {
        if s.sink != Some(i) {
            return Err(SubsumptionError::ObservationViolated(format!(
                "nested eye leaves from {i}, which is not the sink"
            )));
        }
    }
    Ok(())
}
