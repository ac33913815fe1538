//! Command-line front end. `run` does the work and returns the text for
//! stdout together with the pass/fail verdict; `main` maps that to exit codes.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::boundary::{build_faithful_map_with, fixed_point_index, IndexError};
use crate::config::{contact_graph, is_general_position, is_thin_with, ConfigError, DiskConfiguration, IncidenceData, Thinness};
use crate::geom::Point;
use crate::io::{ConfigDocument, DocError, IncidenceRecord};
use crate::lemmas::{run_suite, LemmaError, LemmaId};
use crate::moebius::{align, align_similarity, normalize_pair, MoebiusError, MoebiusMap, TheoremMode};
use crate::render::{graph_path, render_configuration, render_pair, render_torus, Overlays};
use crate::solver::{layout, solve_radii, BoundaryCondition, SolverError, SolverOptions};
use crate::subsumption::{check_observations, subsumptive_subsets, SubsumptionError};
use crate::torus::{build_parametrization, default_base_point, index_via_torus, TorusError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Doc(PathBuf, DocError),
    #[error("incidence data differ; pass --force to compute anyway")]
    IncidenceMismatch,
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Subsumption(#[from] SubsumptionError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
}

#[derive(Debug, Parser)]
#[command(name = "diskrig", version, about = "Disk configurations: fixed-point indices, lemma checks and a radius solver")]
pub struct Cli {
    /// Tolerance for distances in command-level comparisons.
    #[arg(long, global = true, default_value_t = crate::EPS_GEOM)]
    pub eps_geom: f64,
    /// Tolerance for overlap angles when comparing incidence data.
    #[arg(long, global = true, default_value_t = crate::EPS_ANGLE)]
    pub eps_angle: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Thinness, general position and incidence data of one or two documents.
    Check {
        file: PathBuf,
        file2: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Closed)]
        mode: Mode,
    },
    /// Fixed-point index of the boundary map and the subsumption lower bound.
    Index {
        file: PathBuf,
        file2: PathBuf,
        /// Compute even when the incidence data differ.
        #[arg(long)]
        force: bool,
        /// Extra identification `x,y:x2,y2` of a boundary point with its image.
        #[arg(long = "anchor")]
        anchors: Vec<String>,
    },
    /// Solve for radii from a triangulation and angles, then lay out the disks.
    Solve {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        boundary_radius: f64,
    },
    /// Align two configurations by a Möbius map and by a similarity.
    Compare {
        file: PathBuf,
        file2: PathBuf,
        /// Also run the normalization for this setting.
        #[arg(long, value_enum)]
        mode: Option<NormMode>,
        #[arg(long, default_value_t = 1e-2)]
        epsilon: f64,
        /// Residual below which the pair counts as equivalent.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Draw a configuration or a pair as SVG.
    Render {
        file: PathBuf,
        file2: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        overlay: Vec<Overlay>,
    },
    /// Run the seeded lemma suites.
    Lemmas(LemmaArgs),
    /// Subsumptive subsets and shift arrows of a pair.
    Analyze { file: PathBuf, file2: PathBuf },
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    #[arg(long)]
    pub lemma: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Closed,
    Interiors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormMode {
    Sphere,
    PlanePlane,
    HypHyp,
    PlaneVsHyp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Overlay {
    Eyes,
    #[value(name = "H", alias = "h")]
    H,
    Labels,
    Torus,
}

/// Result of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub summary: String,
    pub ok: bool,
}

impl Outcome {
    fn json(v: Value, summary: String, ok: bool) -> Outcome {
        let mut stdout = serde_json::to_string_pretty(&v).expect("serializable report");
        stdout.push('\n');
        Outcome { stdout, summary, ok }
    }
}

pub fn load(path: &Path) -> Result<ConfigDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))?;
    ConfigDocument::from_json(&text).map_err(|e| CliError::Doc(path.into(), e))
}

fn load_config(path: &Path) -> Result<DiskConfiguration, CliError> {
    load(path)?.configuration().map_err(|e| CliError::Doc(path.into(), e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.into(), e))
}

fn edges_json(g: &IncidenceData) -> Value {
    json!(IncidenceRecord::from_data(g).edges.iter().map(|e| json!([e.0, e.1, e.2])).collect::<Vec<_>>())
}

fn moebius_json(m: &MoebiusMap) -> Value {
    let z = |c: num_complex::Complex64| json!([c.re, c.im]);
    json!({"a": z(m.a), "b": z(m.b), "c": z(m.c), "d": z(m.d), "conjugate_first": m.conjugate_first})
}

fn parse_anchor(s: &str) -> Result<(Point, Point), CliError> {
    let bad = || CliError::Usage(format!("anchor `{s}` is not of the form x,y:x2,y2"));
    let pt = |t: &str| -> Result<Point, CliError> {
        let (x, y) = t.split_once(',').ok_or_else(bad)?;
        Ok(Point::new(x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
    };
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((pt(a)?, pt(b)?))
}

fn same_incidence(a: &IncidenceData, b: &IncidenceData, tol: f64) -> bool {
    a.edges.keys().eq(b.edges.keys()) && a.agrees_with(b, tol)
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { file, file2, mode } => cmd_check(cli, file, file2.as_deref(), *mode),
        Command::Index { file, file2, force, anchors } => cmd_index(cli, file, file2, *force, anchors),
        Command::Solve { file, out, svg, boundary_radius } => cmd_solve(file, out.as_deref(), svg.as_deref(), *boundary_radius),
        Command::Compare { file, file2, mode, epsilon, tolerance } => cmd_compare(file, file2, *mode, *epsilon, *tolerance),
        Command::Render { file, file2, out, overlay } => cmd_render(file, file2.as_deref(), out.as_deref(), overlay),
        Command::Lemmas(args) => cmd_lemmas(args),
        Command::Analyze { file, file2 } => cmd_analyze(file, file2),
    }
}

fn cmd_check(cli: &Cli, file: &Path, file2: Option<&Path>, mode: Mode) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let c = doc.configuration().map_err(|e| CliError::Doc(file.into(), e))?;
    let mode = match mode {
        Mode::Closed => Thinness::ClosedDisks,
        Mode::Interiors => Thinness::Interiors,
    };
    let thin = is_thin_with(&c, mode);
    let g = contact_graph(&c)?;
    let declared = doc.incidence_data().map(|d| same_incidence(&d, &g, cli.eps_angle));
    let mut ok = thin.thin && declared != Some(false);
    let mut report = json!({
        "thin": thin.thin,
        "witness": thin.witness.map(|(i, j, k)| vec![i, j, k]),
        "incidence": edges_json(&g),
        "incidence_matches_document": declared,
    });
    let mut summary = format!("thin: {}", thin.thin);
    if let Some(f2) = file2 {
        let ct = load_config(f2)?;
        let gp = is_general_position(&c, &ct);
        let gt = contact_graph(&ct)?;
        let shared = c.labels() == ct.labels() && same_incidence(&g, &gt, cli.eps_angle);
        ok &= gp.general;
        report["general_position"] = json!(gp.general);
        report["violations"] = json!(gp.violations);
        report["same_incidence"] = json!(shared);
        summary += &format!(", general position: {}, same incidence: {shared}", gp.general);
    }
    Ok(Outcome::json(report, summary, ok))
}

fn cmd_index(cli: &Cli, file: &Path, file2: &Path, force: bool, anchors: &[String]) -> Result<Outcome, CliError> {
    let (c, ct) = (load_config(file)?, load_config(file2)?);
    if c.labels() != ct.labels() {
        return Err(CliError::Usage("the two documents have different disk ids".into()));
    }
    let shared = same_incidence(&contact_graph(&c)?, &contact_graph(&ct)?, cli.eps_angle);
    if !shared && !force {
        return Err(CliError::IncidenceMismatch);
    }
    let anchors: Vec<(Point, Point)> = anchors.iter().map(|a| parse_anchor(a)).collect::<Result<_, _>>()?;
    let map = build_faithful_map_with(&c, &ct, &anchors)?;
    let idx = fixed_point_index(&map)?;
    let subs = subsumptive_subsets(&c, &ct);
    let bound = subs.as_ref().ok().map(|s| s.lower_bound);
    // the bound is a theorem only under shared incidence data
    let violation = shared && bound.is_some_and(|b| (idx.eta as i64) < b as i64);
    let report = json!({
        "eta": idx.eta,
        "per_curve": idx.per_curve,
        "lower_bound": bound,
        "lower_bound_error": subs.as_ref().err().map(|e| e.to_string()),
        "same_incidence": shared,
        "violation": violation,
    });
    let summary = format!("eta = {}, lower bound = {}", idx.eta, bound.map_or("n/a".to_string(), |b| b.to_string()));
    Ok(Outcome::json(report, summary, !violation))
}

fn cmd_solve(file: &Path, out: Option<&Path>, svg: Option<&Path>, boundary_radius: f64) -> Result<Outcome, CliError> {
    let doc = load(file)?;
    let doc_err = |e| CliError::Doc(file.into(), e);
    let t = doc.triangulation().map_err(doc_err)?.ok_or_else(|| CliError::Usage("document has no triangulation".into()))?;
    let theta = doc.incidence_data().ok_or_else(|| CliError::Usage("document has no incidence angles".into()))?;
    let bc = BoundaryCondition::FixedBoundaryRadii(vec![boundary_radius; t.boundary.len()]);
    let state = solve_radii(&t, &theta, &bc, &SolverOptions::default())?;
    let c = layout(&t, &state.radii, &theta)?;
    let mut result = ConfigDocument::with_incidence(&c).map_err(doc_err)?;
    result.triangulation = doc.triangulation.clone();
    let text = result.to_json();
    if let Some(p) = svg {
        write(p, &render_configuration(&c, Overlays::default()))?;
    }
    let summary = format!("solved {} radii in {} sweeps", state.radii.len(), state.iteration_log.len());
    match out {
        Some(p) => {
            write(p, &text)?;
            Ok(Outcome { stdout: String::new(), summary, ok: true })
        }
        None => Ok(Outcome { stdout: text, summary, ok: true }),
    }
}

fn cmd_compare(file: &Path, file2: &Path, mode: Option<NormMode>, epsilon: f64, tolerance: f64) -> Result<Outcome, CliError> {
    let (c, ct) = (load_config(file)?, load_config(file2)?);
    let moebius = align(&c, &ct);
    let (sim, sim_res) = align_similarity(&c, &ct)?;
    let mut report = json!({
        "moebius": moebius.as_ref().ok().map(|m| moebius_json(&m.0)),
        "residual": moebius.as_ref().ok().map(|m| m.1),
        "moebius_error": moebius.as_ref().err().map(|e| e.to_string()),
        "similarity": moebius_json(&sim),
        "similarity_residual": sim_res,
    });
    if let Some(m) = mode {
        let m = match m {
            NormMode::Sphere => TheoremMode::Sphere,
            NormMode::PlanePlane => TheoremMode::PlanePlane,
            NormMode::HypHyp => TheoremMode::HypHyp,
            NormMode::PlaneVsHyp => TheoremMode::PlaneVsHyp,
        };
        report["normalization"] = match normalize_pair(&c, &ct, m, epsilon) {
            Ok(n) => json!({
                "map_for_first": moebius_json(&n.map_for_c),
                "map_for_second": moebius_json(&n.map_for_ctilde),
                "anchor_vertices": n.anchor_vertices,
            }),
            Err(e) => json!({"error": e.to_string()}),
        };
    }
    let best = moebius.as_ref().map(|m| m.1).unwrap_or(f64::INFINITY).min(sim_res);
    let ok = best <= tolerance;
    Ok(Outcome::json(report, format!("best residual {best:.3e}"), ok))
}

fn cmd_render(file: &Path, file2: Option<&Path>, out: Option<&Path>, overlay: &[Overlay]) -> Result<Outcome, CliError> {
    let c = load_config(file)?;
    let ov = Overlays { labels: overlay.contains(&Overlay::Labels), eyes: overlay.contains(&Overlay::Eyes) };
    let svg = match file2 {
        None => {
            if overlay.iter().any(|o| matches!(o, Overlay::H | Overlay::Torus)) {
                return Err(CliError::Usage("H and torus overlays need two documents".into()));
            }
            render_configuration(&c, ov)
        }
        Some(f2) => {
            let ct = load_config(f2)?;
            if overlay.contains(&Overlay::Torus) {
                let map = build_faithful_map_with(&c, &ct, &[])?;
                let m = map.pairs.first().ok_or_else(|| CliError::Usage("no boundary curves".into()))?;
                let param = build_parametrization(&m.source, &m.target)?;
                let s_u = default_base_point(m, &param);
                index_via_torus(m, &param, s_u)?;
                render_torus(&param, (s_u, m.eval(s_u)), Some(&graph_path(m, s_u)))
            } else {
                let arrows: Vec<(u32, u32)> = if overlay.contains(&Overlay::H) {
                    subsumptive_subsets(&c, &ct)?.subsets.iter().flat_map(|s| s.arrows.clone()).collect()
                } else {
                    Vec::new()
                };
                render_pair(&c, &ct, ov, &arrows)
            }
        }
    };
    let summary = format!("{} circle elements", svg.matches("<circle").count());
    match out {
        Some(p) => {
            write(p, &svg)?;
            Ok(Outcome { stdout: String::new(), summary, ok: true })
        }
        None => Ok(Outcome { stdout: svg, summary, ok: true }),
    }
}

fn cmd_lemmas(args: &LemmaArgs) -> Result<Outcome, CliError> {
    let ids: Vec<LemmaId> = match &args.lemma {
        Some(name) => vec![name.parse()?],
        None => LemmaId::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    let mut ok = true;
    let mut lines = Vec::new();
    for id in ids {
        let r = run_suite(id, args.seed, args.count)?;
        ok &= r.passed();
        lines.push(format!("{id}: {} instances, {} failures", r.count, r.failures.len()));
        reports.push(r);
    }
    Ok(Outcome::json(json!(reports), lines.join("\n"), ok))
}

fn cmd_analyze(file: &Path, file2: &Path) -> Result<Outcome, CliError> {
    let (c, ct) = (load_config(file)?, load_config(file2)?);
    let report = subsumptive_subsets(&c, &ct)?;
    let problems: Vec<String> = report.subsets.iter().filter_map(|s| check_observations(s).err().map(|e| e.to_string())).collect();
    let ok = problems.is_empty();
    let summary = format!("{} subsumptive subsets, lower bound {}", report.subsets.len(), report.lower_bound);
    Ok(Outcome::json(json!({"subsumption": report, "observation_failures": problems}), summary, ok))
}
