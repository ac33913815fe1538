use diskrig::config::{contact_graph, DiskConfiguration};
use diskrig::geom::{center_distance_for_angle, disk_relation, overlap_angle, Disk, DiskRelation, Point};
use diskrig::moebius::*;
use diskrig::solver::{flower, layout, solve_radii, uniform_angles, BoundaryCondition, SolverOptions};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_map(rng: &mut ChaCha8Rng, anti: bool) -> MoebiusMap {
    let mut z = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    loop {
        if let Ok(m) = MoebiusMap::new(z(), z(), z() * 0.3, z() + 1.5, anti) {
            return m;
        }
    }
}

fn random_disk(rng: &mut ChaCha8Rng) -> Disk {
    Disk::at(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..0.8))
}

fn samples(d: &Disk, n: usize) -> Vec<Point> {
    (0..n).map(|k| d.point_at(k as f64 / n as f64 * std::f64::consts::TAU)).collect()
}

fn signed_area(pts: &[Point]) -> f64 {
    (0..pts.len()).map(|k| pts[k].cross(pts[(k + 1) % pts.len()])).sum::<f64>() / 2.0
}

fn close_disks(a: &Disk, b: &Disk, tol: f64) -> bool {
    a.center.dist(b.center) < tol && (a.radius - b.radius).abs() < tol
}

#[test]
fn inversion_image_matches_mapped_samples() {
    let d = Disk::at(3.0, 0.0, 1.0);
    let img = MoebiusMap::inversion().apply_disk(&d).unwrap();
    assert!(close_disks(&img, &Disk::at(3.0 / 8.0, 0.0, 1.0 / 8.0), 1e-12));
    for p in samples(&d, 64) {
        let q = MoebiusMap::inversion().apply_point(p).unwrap();
        assert!(img.signed_dist(q).abs() < 1e-12);
    }
    // the center of d is inside and maps inside
    assert!(img.contains(MoebiusMap::inversion().apply_point(d.center).unwrap()));
}

#[test]
fn three_points_match_cross_ratio() {
    let z = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
    let w = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 0.0)];
    let m = MoebiusMap::from_three_points(z, w).unwrap();
    assert!(m.apply_point(z[2]).unwrap().dist(w[2]) < 1e-15);
    let cr = |p: Complex64, q: [Point; 3]| {
        let [a, b, cc] = q.map(to_c);
        (p - a) * (b - cc) / ((p - cc) * (b - a))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let p = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let q = m.apply_point(p).unwrap();
        assert!((cr(to_c(p), z) - cr(to_c(q), w)).norm() < 1e-9);
    }
}

#[test]
fn three_point_maps_reproduce_their_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pt = || Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    for _ in 0..200 {
        let (z, w) = ([pt(), pt(), pt()], [pt(), pt(), pt()]);
        let m = MoebiusMap::from_three_points(z, w).unwrap();
        for k in 0..3 {
            assert!(m.apply_point(z[k]).unwrap().dist(w[k]) < 1e-10);
        }
    }
}

#[test]
fn disk_images_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut n = 0;
    while n < 300 {
        let (f1, f2) = (rng.gen(), rng.gen());
        let (m1, m2) = (random_map(&mut rng, f1), random_map(&mut rng, f2));
        let d = random_disk(&mut rng);
        let (Ok(a), Ok(b)) = (m1.apply_disk(&d), m2.compose(&m1).apply_disk(&d)) else { continue };
        let Ok(a2) = m2.apply_disk(&a) else { continue };
        if a2.radius > 1e3 {
            continue;
        }
        assert!(close_disks(&a2, &b, 1e-9 * b.radius.max(1.0)), "{a2:?} {b:?}");
        n += 1;
    }
}

#[test]
fn angles_are_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    while n < 1000 {
        let (a, b) = (random_disk(&mut rng), random_disk(&mut rng));
        if disk_relation(&a, &b) != DiskRelation::Overlapping {
            continue;
        }
        let anti = rng.gen();
        let m = random_map(&mut rng, anti);
        let (Ok(ia), Ok(ib)) = (m.apply_disk(&a), m.apply_disk(&b)) else { continue };
        let want = overlap_angle(&a, &b).unwrap();
        let got = overlap_angle(&ia, &ib).unwrap();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        n += 1;
    }
}

#[test]
fn anti_maps_reverse_orientation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut n = 0;
    while n < 100 {
        let d = random_disk(&mut rng);
        let anti = n % 2 == 1;
        let m = random_map(&mut rng, anti);
        if m.apply_disk(&d).is_err() {
            continue;
        }
        let img: Vec<Point> = samples(&d, 256).into_iter().map(|p| m.apply_point(p).unwrap()).collect();
        assert_eq!(signed_area(&img) < 0.0, anti);
        n += 1;
    }
}

/// Three pairwise overlapping disks with the given radii and angles, first at the origin.
fn three_cycle(r: [f64; 3], th: [f64; 3]) -> DiskConfiguration {
    let d01 = center_distance_for_angle(r[0], r[1], th[0]);
    let d12 = center_distance_for_angle(r[1], r[2], th[1]);
    let d02 = center_distance_for_angle(r[0], r[2], th[2]);
    let x = (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01);
    let y = (d02 * d02 - x * x).sqrt();
    DiskConfiguration::from_disks(vec![Disk::at(0.0, 0.0, r[0]), Disk::at(d01, 0.0, r[1]), Disk::at(x, y, r[2])]).unwrap()
}

fn packing(boundary: &[f64]) -> DiskConfiguration {
    let t = flower(6);
    let th = uniform_angles(&t, 0.0);
    let s = solve_radii(&t, &th, &BoundaryCondition::FixedBoundaryRadii(boundary.to_vec()), &SolverOptions::default()).unwrap();
    layout(&t, &s.radii, &th).unwrap()
}

#[test]
fn align_examples() {
    let base = three_cycle([1.0, 0.8, 1.2], [0.5, 0.9, 0.7]);
    let sim = MoebiusMap::similarity(c(0.6, 1.1), c(3.0, -2.0));
    let moved = base.map_disks(&sim).unwrap();
    assert!(align(&base, &moved).unwrap().1 <= 1e-9);

    let p = packing(&[1.0, 1.2, 0.9, 1.1, 1.0, 0.8]);
    let mut bent = p.disks().to_vec();
    bent[2].radius *= 1.01;
    let bent = DiskConfiguration::from_disks(bent).unwrap();
    assert!(align(&p, &bent).unwrap().1 >= 1e-3);

    // same angles on a three-cycle, different radii
    let other = three_cycle([0.4, 1.7, 0.9], [0.5, 0.9, 0.7]);
    assert!(contact_graph(&base).unwrap().agrees_with(&contact_graph(&other).unwrap(), 1e-12));
    assert!(align(&base, &other).unwrap().1 <= 1e-9);
}

/// First ε = 2^-k, k = 1..20, at which the normalization conditions hold.
fn scan(p: &DiskConfiguration, q: &DiskConfiguration) -> Option<NormalizationResult> {
    (1..=20).map(|k| 2f64.powi(-k)).find_map(|eps| normalize_pair(p, q, TheoremMode::PlanePlane, eps).ok())
}

#[test]
fn normalization_examples() {
    let p = packing(&[1.0; 6]);
    assert!(matches!(normalize_pair(&p, &p, TheoremMode::PlanePlane, 0.1), Err(MoebiusError::NoAnchorFound(_))));
    // shrink one non-anchor disk about its center in the normalized frame,
    // so at ε = 0 the anchor disks coincide
    let q0 = packing(&[1.0, 1.3, 0.8, 1.1, 0.9, 1.2]);
    let frame = scan(&p, &q0).unwrap();
    let m = frame.map_for_c;
    let k = *frame.anchor_vertices.last().unwrap() as usize;
    let mut img = m.apply_disk(&p.disks()[k]).unwrap();
    img.radius *= 0.98;
    let mut ds = p.disks().to_vec();
    ds[k] = m.inverse().apply_disk(&img).unwrap();
    let q = DiskConfiguration::from_disks(ds).unwrap();
    assert!(matches!(
        normalize_pair(&p, &q, TheoremMode::PlanePlane, 0.0),
        Err(MoebiusError::ConditionFailed { .. })
    ));
}

#[test]
fn normalization_scan_finds_epsilon() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let radii: Vec<f64> = (0..6).map(|_| rng.gen_range(0.7..1.4)).collect();
        let (p, q) = (packing(&[1.0; 6]), packing(&radii));
        let res = scan(&p, &q).expect("some ε in the scan satisfies the conditions");
        assert_eq!(res.anchor_vertices.len(), 3);
    }
}
