mod common;

use diskrig::io::*;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, -1.0f64..1.0, Just(0.0), Just(1.0 / 3.0)]
}

fn document() -> impl Strategy<Value = ConfigDocument> {
    let disks = prop::collection::btree_map(0u32..1000, (finite(), finite(), 1e-6f64..1e3), 0..12);
    let edges = prop::collection::btree_map((0u32..50, 0u32..50), 0.0f64..3.1, 0..12);
    (disks, prop::option::of(edges), any::<bool>()).prop_map(|(disks, edges, tri)| ConfigDocument {
        schema_version: SCHEMA_VERSION,
        disks: disks.into_iter().map(|(id, (cx, cy, r))| DiskRecord { id, cx, cy, r }).collect(),
        incidence: edges.map(|e| IncidenceRecord {
            edges: e.into_iter().filter(|((i, j), _)| i < j).map(|((i, j), t)| EdgeRecord(i, j, t)).collect(),
        }),
        triangulation: tri.then(|| TriangulationRecord { faces: vec![[0, 1, 2], [0, 2, 3]], boundary: vec![] }),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn write_read_write_is_stable(doc in document()) {
        let doc = doc.canonicalized();
        let text = doc.to_json();
        let back = ConfigDocument::from_json(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn numbers_round_trip_bitwise(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let y: f64 = format_f64(x).parse().unwrap();
        prop_assert!(y == x);
    }
}

#[test]
fn corpus_files_are_stable_after_one_write() {
    for entry in std::fs::read_dir(common::data("")).unwrap() {
        let path = entry.unwrap().path();
        let doc = ConfigDocument::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap().canonicalized();
        let once = doc.to_json();
        let twice = ConfigDocument::from_json(&once).unwrap().to_json();
        assert_eq!(once, twice, "{}", path.display());
    }
}

#[test]
fn malformed_documents_are_rejected() {
    let bad = [
        r#"{"schema_version":2,"disks":[]}"#,
        r#"{"schema_version":1,"disks":[],"extra":1}"#,
        r#"{"schema_version":1,"disks":[{"id":0,"cx":0,"cy":0,"r":0}]}"#,
        r#"{"schema_version":1,"disks":[],"incidence":{"edges":[[0,1,3.5]]}}"#,
        r#"{"schema_version":1,"disks":[],"incidence":{"edges":[[0,1,0.1],[1,0,0.2]]}}"#,
        r#"{"schema_version":1,"disks":[],"incidence":{"edges":[[0,-1,0.1]]}}"#,
        r#"{"schema_version":1,"disks":[{"id":0,"cx":0,"cy":0}]}"#,
    ];
    for text in bad {
        assert!(ConfigDocument::from_json(text).is_err(), "{text}");
    }
}

#[test]
fn canonical_form_orders_disks_and_edges() {
    let text = r#"{"schema_version":1,"disks":[{"id":2,"cx":0,"cy":0,"r":1},{"id":1,"cx":5,"cy":0,"r":1}],
        "incidence":{"edges":[[2,1,0.5],[0,1,0.25]]}}"#;
    let doc = ConfigDocument::from_json(text).unwrap().canonicalized();
    assert_eq!(doc.disks.iter().map(|d| d.id).collect::<Vec<_>>(), vec![1, 2]);
    let edges = &doc.incidence.unwrap().edges;
    assert_eq!((edges[0].0, edges[0].1), (0, 1));
    assert_eq!((edges[1].0, edges[1].1), (1, 2));
}
