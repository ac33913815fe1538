//! End-to-end runs of the `diskrig` binary. Golden files live in
//! tests/golden; set DISKRIG_BLESS=1 to rewrite them.

mod common;

use std::process::Output;

use serde_json::Value;

use common::{golden, golden_cases, path, run};

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn check_golden(name: &str, text: &str) {
    let p = golden(name);
    if std::env::var_os("DISKRIG_BLESS").is_some() {
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(&p, text).unwrap();
    }
    let want = std::fs::read_to_string(&p).unwrap_or_else(|_| panic!("missing golden file {name}"));
    assert!(want == text, "{name} differs from its golden file");
}

#[test]
fn golden_outputs() {
    for (name, args) in golden_cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = run(&args);
        assert!(o.status.code().is_some_and(|c| c < 2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        check_golden(name, &stdout(&o));
    }
}

#[test]
fn outputs_are_deterministic() {
    for (name, args) in golden_cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&args).stdout, run(&args).stdout, "{name}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", &path("tangent_triple.json")]).status.code(), Some(0));
    let o = run(&["check", &path("equilateral_triple.json")]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["thin"], false);
    assert_eq!(r["witness"].as_array().unwrap().len(), 3);
    let o = run(&["check", &path("fig6_solid.json"), &path("fig6_solid.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["general_position"], false);
    assert_eq!(run(&["check", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["index", &path("single_disk.json"), &path("fig6_solid.json")]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn render_counts() {
    let svg = stdout(&run(&["render", &path("single_disk.json")]));
    assert_eq!(svg.matches("<circle").count(), 1);
    let svg = stdout(&run(&["render", &path("fig6_solid.json"), &path("fig6_dashed.json")]));
    assert_eq!(svg.matches("<circle").count(), 12);
    assert_eq!(svg.matches("class=\"solid\"").count(), 6);
    assert_eq!(svg.matches("class=\"dashed\"").count(), 6);
}

#[test]
fn h_overlay_matches_computed_arrows() {
    let (c, ct) = (common::load("fig8_solid.json"), common::load("fig8_dashed.json"));
    let arrows: Vec<String> = diskrig::subsumption::subsumptive_subsets(&c, &ct)
        .unwrap()
        .subsets
        .iter()
        .flat_map(|s| s.arrows.iter().map(|(i, j)| format!("data-edge=\"{i}-{j}\"")))
        .collect();
    let svg = stdout(&run(&["render", &path("fig8_solid.json"), &path("fig8_dashed.json"), "--overlay", "H"]));
    assert_eq!(svg.matches("class=\"arrow\"").count(), arrows.len());
    assert_eq!(arrows.len(), 4);
    for a in arrows {
        assert!(svg.contains(&a), "{a}");
    }
}

#[test]
fn solve_examples() {
    let radius = |file: &str, id: u64| -> f64 {
        let o = run(&["solve", &path(file)]);
        assert_eq!(o.status.code(), Some(0));
        let doc = json(&o);
        let d = doc["disks"].as_array().unwrap().iter().find(|d| d["id"].as_u64() == Some(id)).unwrap().clone();
        d["r"].as_f64().unwrap()
    };
    assert!((radius("k4.json", 3) - 1.0 / (3.0 + 2.0 * 3f64.sqrt())).abs() < 1e-8);
    assert!((radius("hex_flower.json", 6) - 1.0).abs() < 1e-10);
    assert!((radius("mixed_flower.json", 6) - (13f64.sqrt() - 1.0) / 2.0).abs() < 1e-9);

    let dir = std::env::temp_dir().join(format!("diskrig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (out, svg) = (dir.join("k4.json"), dir.join("k4.svg"));
    let o = run(&["solve", &path("k4.json"), "--out", out.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<circle").count(), 4);
    // the solved document checks as thin with matching incidence data
    let o = run(&["check", out.to_str().unwrap()]);
    assert_eq!(json(&o)["incidence_matches_document"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn index_examples() {
    let o = run(&["index", &path("fig18_solid.json"), &path("fig18_dashed.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));

    let cases = golden_cases();
    let args: Vec<&str> = cases.iter().find(|c| c.0 == "fig18_index.json").unwrap().1.iter().map(String::as_str).collect();
    let r = json(&run(&args));
    assert_eq!(r["eta"], -1);
    assert_eq!(r["same_incidence"], false);
    assert_eq!(r["violation"], false);

    let r = json(&run(&["index", &path("fig8_solid.json"), &path("fig8_dashed.json"), "--force"]));
    assert!(r["eta"].as_i64().unwrap() >= 1);
    assert_eq!(r["lower_bound"], 1);

    // a translated copy: no containments, so the bound is 0
    let c = common::load("fig6_solid.json");
    let moved = c.map_disks(&diskrig::moebius::MoebiusMap::similarity(
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.37, 0.21),
    ));
    let doc = diskrig::io::ConfigDocument::from_configuration(&moved.unwrap());
    let tmp = std::env::temp_dir().join(format!("diskrig-moved-{}.json", std::process::id()));
    std::fs::write(&tmp, doc.to_json()).unwrap();
    let o = run(&["index", &path("fig6_solid.json"), tmp.to_str().unwrap()]);
    std::fs::remove_file(&tmp).unwrap();
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["lower_bound"], 0);
    assert!(r["eta"].as_i64().unwrap() >= 0);
    let per: i64 = r["per_curve"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).sum();
    assert_eq!(r["eta"].as_i64().unwrap(), per);
}

#[test]
fn compare_and_torus() {
    let o = run(&["compare", &path("fig6_solid.json"), &path("fig6_solid.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["compare", &path("fig6_solid.json"), &path("fig6_dashed.json")]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["render", &path("tangent_triple.json"), "--overlay", "torus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lemma_command_reports_each_suite() {
    let o = run(&["lemmas", "--seed", "3", "--count", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 13);
    assert_eq!(run(&["lemmas", "--lemma", "no-such-lemma"]).status.code(), Some(2));
}
