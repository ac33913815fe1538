use std::f64::consts::{PI, TAU};

use diskrig::boundary::*;
use diskrig::config::DiskConfiguration;
use diskrig::geom::{circle_intersections, Disk, Point};

fn cfg(d: &[(f64, f64, f64)]) -> DiskConfiguration {
    DiskConfiguration::from_disks(d.iter().map(|&(x, y, r)| Disk::at(x, y, r)).collect()).unwrap()
}

fn fig18() -> (DiskConfiguration, DiskConfiguration, Vec<(Point, Point)>) {
    let c = cfg(&[(3.18, -0.05, 1.51), (5.02, 0.05, 1.43)]);
    let ct = cfg(&[(2.85, -0.02, 1.46), (5.54, 0.05, 1.57)]);
    let anchors = vec![
        (Point::new(3.75, 1.32), Point::new(1.75, 0.88)),
        (Point::new(3.89, -1.36), Point::new(1.71, -0.9)),
        (Point::new(4.45, 1.34), Point::new(6.79, 0.98)),
        (Point::new(4.45, -1.24), Point::new(6.73, -0.94)),
    ];
    (c, ct, anchors)
}

fn fig6_solid() -> DiskConfiguration {
    cfg(&[
        (1.56, 1.01, 1.56),
        (3.06, 2.21, 1.38),
        (4.83, 1.66, 1.21),
        (6.16, 0.55, 0.94),
        (5.68, -1.41, 1.62),
        (2.92, -1.59, 2.0),
    ])
}

fn fig6_dashed() -> DiskConfiguration {
    cfg(&[
        (1.53, 0.92, 1.41),
        (3.03, 2.28, 1.25),
        (4.87, 1.62, 1.07),
        (6.12, 0.57, 0.82),
        (5.72, -1.37, 1.44),
        (2.99, -1.5, 1.77),
    ])
}

/// Brute-force winding by a fine polygon, independent of the arc code.
fn polygon_winding(curve: &ArcCurve, z: Point) -> i32 {
    let n = 20000;
    let mut total = 0.0;
    let mut prev = curve.point_at(0.0) - z;
    for k in 1..=n {
        let cur = curve.point_at(k as f64 / n as f64) - z;
        total += prev.cross(cur).atan2(prev.dot(cur));
        prev = cur;
    }
    (total / TAU).round() as i32
}

/// Brute-force index of a curve map by dense sampling of the displacement.
fn dense_index(m: &CurveMap) -> i32 {
    let n = 200_000;
    let (s0, _) = m.knots()[0];
    let mut total = 0.0;
    let mut prev = m.displacement(s0);
    for k in 1..=n {
        let cur = m.displacement(s0 + k as f64 / n as f64);
        total += prev.cross(cur).atan2(prev.dot(cur));
        prev = cur;
    }
    (total / TAU).round() as i32
}

#[test]
fn sampled_circle_windings() {
    let d = Disk::at(0.0, 0.0, 1.0);
    let c = sample_disk_boundary(&d, &[]).unwrap();
    assert_eq!(c.samples.len(), 512);
    assert_eq!(winding_number(&c, Point::new(0.0, 0.0)).unwrap(), 1);
    assert_eq!(winding_number(&c, Point::new(3.0, 0.0)).unwrap(), 0);
    let mut cw = c.clone();
    cw.samples.reverse();
    assert_eq!(winding_number(&cw, Point::new(0.0, 0.0)).unwrap(), -1);
    assert_eq!(winding_number(&c, Point::new(1.0, 0.0)), Err(IndexError::PointOnCurve));
}

#[test]
fn corners_are_exact_samples() {
    let d = Disk::at(0.0, 0.0, 1.0);
    let corners = [Point::new(1.0, 0.0), Point::new(-1.0, 0.0)];
    let c = sample_disk_boundary(&d, &corners).unwrap();
    for p in corners {
        assert!(c.samples.contains(&p));
    }
    assert!(matches!(
        sample_disk_boundary(&d, &[Point::new(0.5, 0.0)]),
        Err(IndexError::CornerOffBoundary(_))
    ));
}

#[test]
fn single_disk_boundary() {
    let b = boundary_complex(&cfg(&[(1.0, 1.0, 2.0)])).unwrap();
    assert_eq!(b.curves.len(), 1);
    let arcs = b.curves[0].arcs();
    assert_eq!(arcs.len(), 1);
    assert_eq!(arcs[0].start, Corner::Free);
    assert!((b.curves[0].signed_area() - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn two_disk_boundary_uses_major_arcs() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]);
    let b = boundary_complex(&c).unwrap();
    assert_eq!(b.curves.len(), 1);
    let arcs = b.curves[0].arcs();
    assert_eq!(arcs.len(), 2);
    let (u, v) = circle_intersections(&c.disks()[0], &c.disks()[1]).unwrap();
    let corners: Vec<Point> = arcs.iter().map(|a| a.arc.start_point()).collect();
    for p in [u, v] {
        assert!(corners.iter().any(|q| q.dist(p) < 1e-9));
    }
    for a in arcs {
        assert!((a.arc.sweep - 4.0 * PI / 3.0).abs() < 1e-9);
    }
    // union area = 2π − lens area
    let lens = 2.0 * (PI / 3.0 - (3f64).sqrt() / 4.0);
    assert!((b.curves[0].signed_area() - (2.0 * PI - lens)).abs() < 1e-9);
}

#[test]
fn ring_chain_has_inner_curve() {
    for c in [fig6_solid(), fig6_dashed()] {
        let b = boundary_complex(&c).unwrap();
        assert_eq!(b.curves.len(), 2);
        let areas: Vec<f64> = b.curves.iter().map(|c| c.signed_area()).collect();
        assert_eq!(areas.iter().filter(|a| **a > 0.0).count(), 1);
        assert_eq!(areas.iter().filter(|a| **a < 0.0).count(), 1);
        let hole = Point::new(4.0, 0.3);
        for curve in &b.curves {
            let expect = if curve.signed_area() > 0.0 { 1 } else { -1 };
            assert_eq!(curve.winding(hole).unwrap(), expect);
            assert_eq!(polygon_winding(curve, hole), expect);
        }
    }
}

#[test]
fn tangency_splits_arcs() {
    let c = cfg(&[(0.0, 0.0, 1.0), (2.0, 0.0, 1.0)]);
    let b = boundary_complex(&c).unwrap();
    assert_eq!(b.curves.len(), 2);
    for curve in &b.curves {
        assert_eq!(curve.arcs().len(), 1);
        assert_eq!(curve.arcs()[0].start, Corner::Tangency(0, 1));
    }
}

#[test]
fn translated_pair_has_index_zero() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.2, 0.0, 1.0)]);
    let ct = cfg(&[(5.0, 0.0, 1.0), (6.2, 0.0, 1.0)]);
    let m = build_faithful_map(&c, &ct).unwrap();
    let r = fixed_point_index(&m).unwrap();
    assert_eq!(r.eta, 0);
    assert!((r.min_displacement - 5.0).abs() < 1e-6);
    assert_eq!(build_faithful_map(&c, &c), Err(IndexError::CoincidentCorner(
        m.pairs[0].source.arcs()[0].arc.start_point()
    )));
}

#[test]
fn circle_index_values() {
    let s = ArcCurve::circle(Disk::at(0.0, 0.0, 1.0), 0, 0.3);
    let big = ArcCurve::circle(Disk::at(0.2, -0.1, 3.0), 0, 1.0);
    let far = ArcCurve::circle(Disk::at(5.0, 0.0, 1.0), 0, 2.0);
    let nested = CurveMap::arc_proportional(s.clone(), big).unwrap();
    assert_eq!(curve_index(&nested).unwrap(), 1);
    let apart = CurveMap::arc_proportional(s, far).unwrap();
    assert_eq!(curve_index(&apart).unwrap(), 0);
}

#[test]
fn fig18_anchored_map_has_negative_index() {
    let (c, ct, anchors) = fig18();
    let plain = build_faithful_map(&c, &ct).unwrap();
    assert_eq!(fixed_point_index(&plain).unwrap().eta, 1);
    assert_eq!(dense_index(&plain.pairs[0]), 1);
    let m = build_faithful_map_with(&c, &ct, &anchors).unwrap();
    assert_eq!(m.pairs.len(), 1);
    assert_eq!(m.pairs[0].knots().len(), 6);
    let r = fixed_point_index(&m).unwrap();
    assert_eq!(r.eta, -1);
    assert_eq!(dense_index(&m.pairs[0]), -1);
}

#[test]
fn index_of_inverse_matches() {
    let (c, ct, anchors) = fig18();
    let m = build_faithful_map_with(&c, &ct, &anchors).unwrap();
    assert_eq!(fixed_point_index(&m.inverse()).unwrap().eta, -1);
}

#[test]
fn doubled_sampling_agrees() {
    let (c, ct, anchors) = fig18();
    let m = build_faithful_map_with(&c, &ct, &anchors).unwrap();
    let a = fixed_point_index_with(&m, &Sampling::default()).unwrap().eta;
    let b = fixed_point_index_with(&m, &Sampling::default().doubled()).unwrap().eta;
    assert_eq!(a, b);
}

#[test]
fn ring_chains_pair_up() {
    let m = build_faithful_map(&fig6_solid(), &fig6_dashed()).unwrap();
    assert_eq!(m.pairs.len(), 2);
    let r = fixed_point_index(&m).unwrap();
    for p in &m.pairs {
        assert_eq!(dense_index(p), r.per_curve[m.pairs.iter().position(|q| q == p).unwrap()]);
    }
}

#[test]
fn disk_maps_decompose_the_index() {
    let (c, ct) = (fig6_solid(), fig6_dashed());
    let dm = DiskMaps::arc_proportional(&c, &ct).unwrap();
    let phi = fixed_point_index(&dm.full().unwrap()).unwrap().eta;
    let mut sum = 0;
    for &l in c.labels() {
        sum += curve_index(&dm.disk_map(l).unwrap()).unwrap();
    }
    let n = c.len() as u32;
    for i in 0..n {
        let j = (i + 1) % n;
        sum -= curve_index(&dm.eye_map(i, j).unwrap()).unwrap();
    }
    assert_eq!(phi, sum);
}

#[test]
fn glued_halves_add_up() {
    // split a disk by a chord into two pieces; map both pieces by a translation
    let d = Disk::at(0.0, 0.0, 1.0);
    let cut = Disk::at(0.0, 2.0, 1.8);
    let pieces = |scale: f64, shift: Point| {
        let o = Point::new(0.0, 0.0);
        let d = d.scaled_about(o, scale).translated(shift);
        let cut = cut.scaled_about(o, scale).translated(shift);
        let (u, v) = circle_intersections(&d, &cut).unwrap();
        let (tu, tv) = (d.angle_of(u), d.angle_of(v));
        let (cu, cv) = (cut.angle_of(u), cut.angle_of(v));
        let sweep = |a: f64, b: f64| (b - a).rem_euclid(TAU);
        // lower piece: d from u to v, then cut backwards from v to u
        let lower = ArcCurve::new(vec![
            LabeledArc { arc: diskrig::config::Arc { disk: d, start: tu, sweep: sweep(tu, tv) }, label: 0, start: Corner::Crossing(0, 1), end: Corner::Crossing(1, 0) },
            LabeledArc { arc: diskrig::config::Arc { disk: cut, start: cv, sweep: -sweep(cu, cv) }, label: 1, start: Corner::Crossing(1, 0), end: Corner::Crossing(0, 1) },
        ]);
        let upper = ArcCurve::new(vec![
            LabeledArc { arc: diskrig::config::Arc { disk: d, start: tv, sweep: sweep(tv, tu) }, label: 0, start: Corner::Crossing(1, 0), end: Corner::Crossing(0, 1) },
            LabeledArc { arc: diskrig::config::Arc { disk: cut, start: cu, sweep: sweep(cu, cv) }, label: 1, start: Corner::Crossing(0, 1), end: Corner::Crossing(1, 0) },
        ]);
        (lower, upper)
    };
    for (scale, shift, expect) in [(1.0, Point::new(5.0, 0.0), 0), (2.0, Point::new(0.1, 0.05), 1)] {
        let (lk, uk) = pieces(1.0, Point::new(0.0, 0.0));
        let (lt, ut) = pieces(scale, shift);
        let mk = CurveMap::arc_proportional(lk, lt).unwrap();
        let ml = CurveMap::arc_proportional(uk, ut).unwrap();
        let (lhs, rhs) = index_additivity(&mk, &ml).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, expect);
    }
}
