//! Disk configurations, their boundary maps and fixed-point indices, and the
//! rigidity of disk patterns with prescribed overlap angles.

pub mod boundary;
pub mod cli;
pub mod config;
pub mod geom;
pub mod io;
pub mod lemmas;
pub mod moebius;
pub mod render;
pub mod solver;
pub mod subsumption;
pub mod torus;

/// Tolerance for point and distance comparisons.
pub const EPS_GEOM: f64 = 1e-9;
/// Tolerance for overlap angles.
pub const EPS_ANGLE: f64 = 1e-7;
/// Minimum clearance of torus paths from crossing points.
pub const EPS_TORUS: f64 = 1e-4;
