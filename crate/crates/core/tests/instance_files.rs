use cqg_core::element::AnyElement;
use cqg_core::fusion_data::{validate, IrrepInfo, INV_POSITIVITY, INV_TRACE_BALANCE};
use cqg_core::instances::{
    load_instance, load_instance_unchecked, on_plus_truncated, s3_function_algebra, save_instance, suq2_truncated,
    Builtin,
};
use cqg_core::random::{random_element, rng_for};
use cqg_core::{Error, IrrepLabel, L1Element, L2Vector, QuantumGroupData};
use tempfile::tempdir;

fn round_trip(g: &QuantumGroupData) {
    let dir = tempdir().unwrap();
    let path = dir.path().join("instance.json");
    save_instance(g, &path).unwrap();
    let back = load_instance(&path).unwrap();
    assert_eq!(&back, g);
    for ((la, a), (lb, b)) in g.irreps().zip(back.irreps()) {
        assert_eq!(la, lb);
        for (x, y) in a.f_eigenvalues.iter().zip(&b.f_eigenvalues) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    let again = dir.path().join("again.json");
    save_instance(&back, &again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn instances_round_trip_exactly() {
    round_trip(&s3_function_algebra().data);
    for q in [0.3, 0.5, 0.7, 1.0] {
        round_trip(&suq2_truncated(q, 4).unwrap());
    }
    round_trip(&on_plus_truncated(3, 3).unwrap());
    round_trip(&Builtin::Dual("s3".into()).build().unwrap().data);
}

#[test]
fn empty_irrep_list_is_rejected() {
    let json = r#"{"name":"empty","irreps":[],"fusion":[],"tolerance":1e-9}"#;
    assert!(matches!(
        QuantumGroupData::from_json_str(json),
        Err(Error::Malformed(_))
    ));
}

#[test]
fn malformed_files_are_rejected() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert!(matches!(load_instance(&path), Err(Error::Json(_))));
    assert!(matches!(
        load_instance(dir.path().join("missing.json")),
        Err(Error::Io(_))
    ));
}

#[test]
fn unbalanced_trace_names_the_irrep() {
    let g = suq2_truncated(0.5, 2).unwrap();
    let bad = g
        .with_irrep(
            &IrrepLabel::from("1"),
            IrrepInfo {
                dim: 2,
                f_eigenvalues: vec![2.0, 1.0],
                conjugate: "1".into(),
                conj_index_map: vec![1, 0],
            },
        )
        .unwrap();
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.json");
    save_instance(&bad, &path).unwrap();
    match load_instance(&path) {
        Err(Error::Validation(report)) => {
            let hits = report.of(INV_TRACE_BALANCE);
            assert_eq!(hits.len(), 1);
            assert_eq!(hits[0].labels, vec!["1".to_string()]);
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
    // structural loading still succeeds
    assert!(load_instance_unchecked(&path).is_ok());
}

#[test]
fn negated_eigenvalue_is_flagged() {
    let g = suq2_truncated(0.5, 3).unwrap();
    let mut info = g.irrep(&"2".into()).unwrap().clone();
    info.f_eigenvalues[0] = -info.f_eigenvalues[0];
    let bad = g.with_irrep(&"2".into(), info).unwrap();
    let report = validate(&bad);
    assert!(!report.of(INV_POSITIVITY).is_empty(), "{report}");
    assert_eq!(report.of(INV_POSITIVITY)[0].labels, vec!["2".to_string()]);
}

#[test]
fn element_files_round_trip() {
    let g = suq2_truncated(0.3, 3).unwrap();
    let dir = tempdir().unwrap();
    let mut rng = rng_for(5, 0);
    let f: L1Element = random_element(&g, &mut rng);
    let xi: L2Vector = random_element(&g, &mut rng);
    for (name, e) in [("f.json", AnyElement::L1(f)), ("xi.json", AnyElement::L2(xi))] {
        let path = dir.path().join(name);
        e.write(&path).unwrap();
        let back = AnyElement::read(&path).unwrap();
        assert_eq!(back, e);
        back.check(&g).unwrap();
    }
}

#[test]
fn element_space_tags_are_enforced() {
    let json = L2Vector::basis("1", 0, 0).to_json_string().unwrap();
    assert!(L1Element::from_json_str(&json).is_err());
    assert!(matches!(AnyElement::from_json_str(&json).unwrap(), AnyElement::L2(_)));
    let g = suq2_truncated(0.5, 1).unwrap();
    assert!(matches!(
        L1Element::basis("1", 2, 0).check(&g),
        Err(Error::IndexOutOfRange { .. })
    ));
    assert!(matches!(
        L1Element::basis("9", 0, 0).check(&g),
        Err(Error::UnknownLabel(_))
    ));
}
