#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::PathBuf;
use std::process::{Command, Output};

use diskrig::config::{contact_graph, is_general_position, is_thin, DiskConfiguration};
use diskrig::geom::Disk;
use diskrig::io::ConfigDocument;
use diskrig::moebius::MoebiusMap;
use diskrig::solver::{
    double_flower, flower, hex_patch, lattice_patch, layout, solve_radii, uniform_angles, BoundaryCondition,
    SolverOptions, Triangulation,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskrig")).args(args).output().unwrap()
}

pub const FIG18_ANCHORS: [&str; 4] =
    ["3.75,1.32:1.75,0.88", "3.89,-1.36:1.71,-0.9", "4.45,1.34:6.79,0.98", "4.45,-1.24:6.73,-0.94"];

/// Commands with golden outputs, shared with the acceptance target.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let mut fig18 = vec!["index".to_string(), path("fig18_solid.json"), path("fig18_dashed.json"), "--force".into()];
    for a in FIG18_ANCHORS {
        fig18.push("--anchor".into());
        fig18.push(a.into());
    }
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        ("single_disk.svg", s(&["render", &path("single_disk.json")])),
        ("fig6_pair.svg", s(&["render", &path("fig6_solid.json"), &path("fig6_dashed.json"), "--overlay", "labels"])),
        ("fig8_h.svg", s(&["render", &path("fig8_solid.json"), &path("fig8_dashed.json"), "--overlay", "H"])),
        ("fig8_eyes.svg", s(&["render", &path("fig8_solid.json"), &path("fig8_dashed.json"), "--overlay", "eyes"])),
        ("fig8_torus.svg", s(&["render", &path("fig8_solid.json"), &path("fig8_dashed.json"), "--overlay", "torus"])),
        ("tangent_triple_check.json", s(&["check", &path("tangent_triple.json")])),
        ("fig18_index.json", fig18),
        ("k4_solve.json", s(&["solve", &path("k4.json")])),
        ("fig8_analyze.json", s(&["analyze", &path("fig8_solid.json"), &path("fig8_dashed.json")])),
        ("lemmas_shrink_between.json", s(&["lemmas", "--seed", "7", "--count", "20", "--lemma", "shrink-between"])),
    ]
}

pub fn load(name: &str) -> DiskConfiguration {
    let text = std::fs::read_to_string(data(name)).unwrap();
    ConfigDocument::from_json(&text).unwrap().configuration().unwrap()
}

pub fn cfg(d: &[(f64, f64, f64)]) -> DiskConfiguration {
    DiskConfiguration::from_disks(d.iter().map(|&(x, y, r)| Disk::at(x, y, r)).collect()).unwrap()
}

/// Layout of `t` with uniform angle `theta` and the given boundary radii.
pub fn packing(t: &Triangulation, theta: f64, boundary: &[f64]) -> Option<DiskConfiguration> {
    let th = uniform_angles(t, theta);
    let bc = BoundaryCondition::FixedBoundaryRadii(boundary.to_vec());
    let s = solve_radii(t, &th, &bc, &SolverOptions::default()).ok()?;
    layout(t, &s.radii, &th).ok()
}

pub fn small_triangulation(rng: &mut ChaCha8Rng) -> Triangulation {
    match rng.gen_range(0..4) {
        0 => flower(rng.gen_range(4..8)),
        1 => double_flower(),
        2 => hex_patch(1),
        _ => lattice_patch(3, 3),
    }
}

/// Similarity within `size` of the identity.
pub fn near_identity(rng: &mut ChaCha8Rng, size: f64) -> MoebiusMap {
    MoebiusMap::similarity(
        Complex64::from_polar(1.0 + rng.gen_range(-size..size), rng.gen_range(-size..size) * 0.3),
        Complex64::new(rng.gen_range(-size..size), rng.gen_range(-size..size)),
    )
}

/// Möbius map within `size` of the identity with its pole far away.
pub fn near_identity_moebius(rng: &mut ChaCha8Rng, size: f64) -> MoebiusMap {
    let pole = Complex64::from_polar(rng.gen_range(40.0..80.0), rng.gen_range(0.0..TAU));
    let bend = MoebiusMap::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        -Complex64::new(1.0, 0.0) / pole,
        Complex64::new(1.0, 0.0),
        false,
    )
    .unwrap();
    near_identity(rng, size).compose(&bend)
}

/// A thin pair sharing incidence data and in general position: one
/// triangulation solved with two sets of boundary radii, the second moved
/// by a near-identity map.
pub fn same_incidence_pair(rng: &mut ChaCha8Rng) -> (DiskConfiguration, DiskConfiguration) {
    loop {
        let t = small_triangulation(rng);
        let theta = rng.gen_range(0.0..1.2);
        let nb = t.boundary.len();
        let base: Vec<f64> = (0..nb).map(|_| rng.gen_range(0.8..1.2)).collect();
        let other: Vec<f64> = base.iter().map(|r| r * rng.gen_range(0.85..1.15)).collect();
        let (Some(c), Some(ct0)) = (packing(&t, theta, &base), packing(&t, theta, &other)) else { continue };
        let m = near_identity_moebius(rng, 0.15);
        let Ok(ct) = ct0.map_disks(&m) else { continue };
        if !is_thin(&c).thin || !is_thin(&ct).thin || !is_general_position(&c, &ct).general {
            continue;
        }
        let (Ok(g), Ok(gt)) = (contact_graph(&c), contact_graph(&ct)) else { continue };
        if !g.agrees_with(&gt, 1e-7) {
            continue;
        }
        return (c, ct);
    }
}
