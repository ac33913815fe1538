use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diskrig::boundary::{fixed_point_index, ArcCurve, CurveMap, FaithfulMap};
use diskrig::config::{eye_inside, Eye};
use diskrig::geom::{disk_relation, Disk, DiskRelation, Point};
use diskrig::torus::*;

fn circle(x: f64, y: f64, r: f64) -> ArcCurve {
    ArcCurve::circle(Disk::at(x, y, r), 0, 0.0)
}

fn random_path(rng: &mut ChaCha8Rng) -> TorusPath {
    let n = rng.gen_range(0..5);
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..0.98)).collect();
    let mut ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0.02..0.98)).collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let mut w = vec![(0.0, 0.0)];
    w.extend(xs.into_iter().zip(ys));
    w.push((1.0, 1.0));
    TorusPath { waypoints: w }
}

fn random_disk(rng: &mut ChaCha8Rng) -> Disk {
    Disk::at(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.3..1.5))
}

fn random_eye(rng: &mut ChaCha8Rng) -> Eye {
    loop {
        let a = random_disk(rng);
        let b = random_disk(rng);
        if disk_relation(&a, &b) == DiskRelation::Overlapping {
            return Eye::new(a, b).unwrap();
        }
    }
}

fn direct(m: &CurveMap) -> Option<i32> {
    fixed_point_index(&FaithfulMap { pairs: vec![m.clone()] }).ok().map(|r| r.eta)
}

#[test]
fn crossing_counts() {
    let p = build_parametrization(&circle(0.0, 0.0, 1.0), &circle(1.0, 0.0, 1.0)).unwrap();
    assert_eq!((p.p.len(), p.p_tilde.len()), (1, 1));
    assert_eq!(local_windings(&p), vec![1, -1]);
    let p = build_parametrization(&circle(0.0, 0.0, 1.0), &circle(0.0, 0.0, 2.0)).unwrap();
    assert_eq!(p.m(), 0);
    assert!(verify_local_windings(&p));
    assert!(matches!(
        build_parametrization(&circle(0.0, 0.0, 1.0), &circle(2.0, 0.0, 1.0)),
        Err(TorusError::NotTransverse(_))
    ));
}

#[test]
fn nested_radial_map() {
    let k = circle(0.0, 0.0, 3.0);
    let kt = circle(0.2, 0.1, 1.0);
    let p = build_parametrization(&k, &kt).unwrap();
    let m = CurveMap::arc_proportional(k, kt).unwrap();
    let s = default_base_point(&m, &p);
    let t = index_via_torus(&m, &p, s).unwrap();
    assert_eq!((t.winding_source, t.winding_target), (1, 0));
    assert_eq!((t.down, t.up), (1, 1));
    assert_eq!(direct(&m), Some(1));
}

#[test]
fn diagonal_on_disjoint_disks() {
    let p = build_parametrization(&circle(0.0, 0.0, 1.0), &circle(4.0, 0.0, 1.0)).unwrap();
    let m = path_to_homeomorphism(&p, (0.0, 0.3), &TorusPath::diagonal()).unwrap();
    assert_eq!(direct(&m), Some(0));
    let t = index_via_torus(&m, &p, 0.1).unwrap();
    assert_eq!((t.down, t.up), (0, 0));
}

#[test]
fn path_through_point_rejected() {
    let p = build_parametrization(&circle(0.0, 0.0, 1.0), &circle(1.0, 0.0, 1.0)).unwrap();
    let c = p.p[0];
    let path = TorusPath { waypoints: vec![(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)] };
    let base = (c.kappa - 0.5, c.kappa_tilde - 0.5);
    assert!(matches!(
        path_to_homeomorphism(&p, base, &path),
        Err(TorusError::PathThroughTorusPoint { .. })
    ));
}

#[test]
fn formula_matches_direct_index_on_circles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 150 {
        let a = random_disk(&mut rng);
        let b = random_disk(&mut rng);
        if matches!(disk_relation(&a, &b), DiskRelation::Equal | DiskRelation::ExternallyTangent | DiskRelation::InternallyTangent) {
            continue;
        }
        let k = ArcCurve::circle(a, 0, rng.gen_range(0.0..6.0));
        let kt = ArcCurve::circle(b, 0, rng.gen_range(0.0..6.0));
        let p = build_parametrization(&k, &kt).unwrap();
        assert!(verify_local_windings(&p));
        let base = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let Ok(m) = path_to_homeomorphism(&p, base, &random_path(&mut rng)) else { continue };
        let Some(eta) = direct(&m) else { continue };
        let s = default_base_point(&m, &p);
        let Ok(t) = index_via_torus(&m, &p, s) else { continue };
        assert_eq!((t.down, t.up), (eta, eta));
        assert!(eta >= 0);
        checked += 1;
    }
}

#[test]
fn formula_matches_direct_index_on_eyes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    let mut seen_m = [false; 4];
    while checked < 150 {
        let (e, et) = (random_eye(&mut rng), random_eye(&mut rng));
        let Ok(p) = build_parametrization(&ArcCurve::eye(&e), &ArcCurve::eye(&et)) else { continue };
        assert!(p.m() <= 3);
        seen_m[p.m()] = true;
        assert!(verify_local_windings(&p));
        let base = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let Ok(m) = path_to_homeomorphism(&p, base, &random_path(&mut rng)) else { continue };
        let Some(eta) = direct(&m) else { continue };
        let s = default_base_point(&m, &p);
        let Ok(t) = index_via_torus(&m, &p, s) else { continue };
        assert_eq!((t.down, t.up), (eta, eta));
        checked += 1;
    }
    assert!(seen_m[0] && seen_m[1] && seen_m[2]);
}

#[test]
fn zero_index_eye_maps_exist() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut found = 0;
    let mut tries = 0;
    while found < 100 {
        tries += 1;
        assert!(tries < 100_000);
        let (e, et) = (random_eye(&mut rng), random_eye(&mut rng));
        if eye_inside(&e.first, &e.second, &et.first, &et.second)
            || eye_inside(&et.first, &et.second, &e.first, &e.second)
        {
            continue;
        }
        match find_zero_index_eye_map(&e, &et) {
            Ok(m) => {
                assert_eq!(direct(&m), Some(0));
                // corners go to corners
                let s_v = m.source.arc_start(1);
                let t_v = m.target.arc_start(1);
                assert!(m.target.point_at(m.eval(0.0)).dist(et.corner_u) < 1e-9);
                assert!(m.target.point_at(m.eval(s_v)).dist(m.target.point_at(t_v)) < 1e-9);
                found += 1;
            }
            Err(TorusError::NotTransverse(_)) | Err(TorusError::HypothesesViolated(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn three_point_maps_are_nonnegative() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut found = 0;
    while found < 60 {
        let a = random_disk(&mut rng);
        let b = random_disk(&mut rng);
        if matches!(disk_relation(&a, &b), DiskRelation::Equal | DiskRelation::ExternallyTangent | DiskRelation::InternallyTangent) {
            continue;
        }
        let k = ArcCurve::circle(a, 0, 0.0);
        let kt = ArcCurve::circle(b, 0, 0.0);
        let mut zs: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
        let mut zts: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
        zs.sort_by(f64::total_cmp);
        zts.sort_by(f64::total_cmp);
        let z: Vec<Point> = zs.iter().map(|&s| k.point_at(s)).collect();
        let zt: Vec<Point> = zts.iter().map(|&s| kt.point_at(s)).collect();
        match three_point_map(&k, &kt, [z[0], z[1], z[2]], [zt[0], zt[1], zt[2]]) {
            Ok(m) => {
                let eta = direct(&m).unwrap();
                assert!(eta >= 0);
                if b.center.dist(a.center) + b.radius < a.radius {
                    assert_eq!(eta, 1);
                }
                for i in 0..3 {
                    let s = k.param_of(z[i], 1e-9).unwrap();
                    assert!(kt.point_at(m.eval(s)).dist(zt[i]) < 1e-9);
                }
                found += 1;
            }
            Err(TorusError::HypothesesViolated(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
