mod common;

use common::*;
use diskrig::config::DiskConfiguration;
use diskrig::geom::Disk;
use diskrig::subsumption::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shrunk(c: &DiskConfiguration, factor: f64) -> DiskConfiguration {
    DiskConfiguration::from_disks(c.disks().iter().map(|d| Disk::at(d.center.x, d.center.y, d.radius * factor)).collect()).unwrap()
}

#[test]
fn figure_eight_pair() {
    let (c, ct) = (load("fig8_solid.json"), load("fig8_dashed.json"));
    let r = subsumptive_subsets(&c, &ct).unwrap();
    assert_eq!(r.subsets.len(), 1);
    let s = &r.subsets[0];
    assert_eq!(s.members, vec![0, 1, 2, 3, 4]);
    assert!(s.isolated);
    assert_eq!(s.arrows, vec![(1, 2), (2, 3), (3, 2), (4, 1)]);
    assert_eq!(s.sink, Some(0));
    assert_eq!(r.lower_bound, 1);
    // the drawn pair has no arrow on edge 0-1
    assert!(check_observations(s).is_err());
}

#[test]
fn concentric_shrink_gives_one_subset() {
    let c = load("fig6_solid.json");
    let r = subsumptive_subsets(&c, &shrunk(&c, 0.9)).unwrap();
    assert_eq!(r.subsets.len(), 1);
    assert_eq!(r.subsets[0].members, c.labels().to_vec());
    assert_eq!(r.lower_bound, 1);
}

#[test]
fn no_containment_gives_zero() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.5, 0.0, 1.0)]);
    let ct = cfg(&[(0.3, 0.2, 1.0), (1.2, -0.2, 1.0)]);
    let r = subsumptive_subsets(&c, &ct).unwrap();
    assert!(r.subsets.is_empty());
    assert_eq!(index_lower_bound(&c, &ct).unwrap(), 0);
}

#[test]
fn shift_toward_neighbor_is_one_arrow() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.5, 0.0, 1.0)]);
    let ct = cfg(&[(0.05, 0.0, 0.94), (1.5, 0.0, 0.9)]);
    assert_eq!(build_h(&c, &ct, &[0, 1], Direction::TargetInside).unwrap(), vec![(0, 1)]);
    // symmetric nested pair with the same angle: at least one arrow
    let ct = cfg(&[(0.075, 0.0, 0.9), (1.425, 0.0, 0.9)]);
    assert!(!build_h(&c, &ct, &[0, 1], Direction::TargetInside).unwrap().is_empty());
}

#[test]
fn sink_examples() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.5, 0.0, 1.0), (3.0, 0.0, 1.0)]);
    // every inner disk shifted right: the rightmost one is the sink
    let ct = cfg(&[(0.05, 0.0, 0.94), (1.55, 0.0, 0.94), (3.05, 0.0, 0.94)]);
    assert_eq!(find_sink(&c, &ct, &[0, 1, 2]).unwrap(), Some(2));
    // the middle disk shrunk in place, the others pushed toward it
    let ct = cfg(&[(0.05, 0.0, 0.94), (1.5, 0.0, 0.9), (2.95, 0.0, 0.94)]);
    assert_eq!(find_sink(&c, &ct, &[0, 1, 2]).unwrap(), Some(1));
    // one disk shrunk in place while its neighbours grow
    let ct = cfg(&[(0.0, 0.0, 1.05), (1.5, 0.0, 0.8), (3.0, 0.0, 1.05)]);
    let r = subsumptive_subsets(&c, &ct).unwrap();
    let s = r.subsets.iter().find(|s| s.direction == Direction::TargetInside).unwrap();
    assert_eq!(s.members, vec![1]);
    assert_eq!(s.sink, Some(1));
}

#[test]
fn far_clusters_count_separately() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.5, 0.0, 1.0), (20.0, 0.0, 1.0), (21.5, 0.0, 1.0)]);
    let r = subsumptive_subsets(&c, &shrunk(&c, 0.9)).unwrap();
    assert_eq!(r.subsets.len(), 2);
    assert_eq!(r.lower_bound, 2);
}

#[test]
fn outward_subsets_are_found() {
    let c = cfg(&[(0.0, 0.0, 1.0), (1.5, 0.0, 1.0)]);
    let r = subsumptive_subsets(&shrunk(&c, 0.9), &c).unwrap();
    assert_eq!(r.subsets[0].direction, Direction::SourceInside);
    assert_eq!(r.lower_bound, 1);
}

#[test]
fn label_mismatch_is_rejected() {
    let c = cfg(&[(0.0, 0.0, 1.0)]);
    let ct = DiskConfiguration::new(vec![(7, Disk::at(0.0, 0.0, 0.5))]).unwrap();
    assert_eq!(subsumptive_subsets(&c, &ct), Err(SubsumptionError::LabelMismatch));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn observations_hold_under_shared_incidence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, ct) = same_incidence_pair(&mut rng);
        let r = subsumptive_subsets(&c, &ct).unwrap();
        for s in &r.subsets {
            prop_assert!(check_observations(s).is_ok(), "{:?}", s);
            prop_assert!(s.cross_containments.len() <= 1);
        }
        prop_assert_eq!(r.lower_bound, r.subsets.iter().filter(|s| s.isolated).count());
    }
}
