use cqg_core::fusion_data::{FusionEntry, FusionTable};
use cqg_core::instances::{s3_function_algebra, suq2_truncated, Builtin};
use cqg_core::verify::{check_ids, run_suite, CheckStatus};
use cqg_core::{Instance, IrrepLabel};

const TOL: f64 = 1e-9;

fn builtins() -> Vec<Builtin> {
    vec![
        Builtin::S3,
        Builtin::Dual("s3".into()),
        Builtin::Dual("z2".into()),
        Builtin::Dual("z3".into()),
        Builtin::SuQ2 { q: 0.3, level: 4 },
        Builtin::SuQ2 { q: 0.5, level: 4 },
        Builtin::SuQ2 { q: 1.0, level: 4 },
        Builtin::OnPlus { n: 3, level: 2 },
    ]
}

#[test]
fn every_builtin_passes() {
    for b in builtins() {
        let inst = b.build().unwrap();
        let report = run_suite(&inst, 42, TOL).unwrap();
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.checks.len(), check_ids().len());
        for c in &report.checks {
            if c.status == CheckStatus::Skipped {
                assert!(c.reason.as_deref().is_some_and(|r| !r.is_empty()));
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let inst = Builtin::SuQ2 { q: 0.5, level: 3 }.build().unwrap();
    let a = run_suite(&inst, 9, TOL).unwrap();
    let b = run_suite(&inst, 9, TOL).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json_string().unwrap(), b.to_json_string().unwrap());
    let sorted = {
        let mut ids: Vec<_> = a.checks.iter().map(|c| c.id.clone()).collect();
        ids.sort();
        ids
    };
    assert_eq!(a.checks.iter().map(|c| c.id.clone()).collect::<Vec<_>>(), sorted);
}

#[test]
fn non_kac_separation_is_recorded() {
    let inst = Instance::bare(suq2_truncated(0.5, 4).unwrap());
    let report = run_suite(&inst, 42, TOL).unwrap();
    for id in ["l1.plain_character_centrality", "l2.plain_character_centrality"] {
        let c = report.check(id).unwrap();
        assert_eq!(c.status, CheckStatus::Pass);
        assert!(c.expected_failure);
        let w = c.witness.as_deref().unwrap();
        for k in 1..=4 {
            assert!(w.contains(&format!("{k}[0,1]")), "{w}");
        }
    }
    assert_eq!(
        report.check("l1.beta1_idempotent").unwrap().status,
        CheckStatus::Skipped
    );
    assert!(report
        .check("l1.beta1_idempotent")
        .unwrap()
        .reason
        .as_deref()
        .unwrap()
        .contains("NonKacInstance"));
}

#[test]
fn missing_norm_oracle_is_a_reason() {
    let inst = Builtin::OnPlus { n: 3, level: 1 }.build().unwrap();
    let report = run_suite(&inst, 42, TOL).unwrap();
    let c = report.check("l1.beta1_contractivity").unwrap();
    assert_eq!(c.status, CheckStatus::Skipped);
    assert!(c.reason.as_deref().unwrap().contains("NoNormOracle"));
    // dual groups carry a norm oracle
    let dual = Builtin::Dual("s3".into()).build().unwrap();
    let report = run_suite(&dual, 42, TOL).unwrap();
    assert_eq!(
        report.check("l1.beta1_contractivity").unwrap().status,
        CheckStatus::Pass
    );
}

#[test]
fn corrupted_fusion_entry_names_the_triple() {
    let fa = s3_function_algebra();
    let g = fa.data.clone();
    let mut fusion = FusionTable::new();
    for (a, b, e) in g.fusion().entries() {
        fusion.insert(a.clone(), b.clone(), e.clone());
    }
    let v = IrrepLabel::from("v");
    fusion.insert(
        v.clone(),
        v.clone(),
        FusionEntry {
            decomp: [(IrrepLabel::from("t"), 1), (v.clone(), 1)].into(),
            complete: true,
        },
    );
    let mut inst: Instance = fa.into();
    inst.data = g.with_fusion(fusion).unwrap();
    let report = run_suite(&inst, 42, TOL).unwrap();
    assert!(!report.all_passed());
    let c = report.check("fusion.consistency").unwrap();
    assert_eq!(c.status, CheckStatus::Fail);
    assert!(c.witness.as_deref().unwrap().contains("v, v"), "{:?}", c.witness);
    // the rest of the algebra does not read the fusion table
    assert_eq!(report.check("l1.associativity").unwrap().status, CheckStatus::Pass);
}

#[test]
fn corrupted_eigenvalues_fail_downstream_checks() {
    let g = suq2_truncated(0.5, 2).unwrap();
    let mut info = g.irrep(&"1".into()).unwrap().clone();
    info.f_eigenvalues = vec![2.0, 0.6];
    let inst = Instance::bare(g.with_irrep(&"1".into(), info).unwrap());
    let report = run_suite(&inst, 42, TOL).unwrap();
    assert_eq!(report.check("instance.irrep_data").unwrap().status, CheckStatus::Fail);
    assert!(!report.all_passed());
}

#[test]
fn tolerance_must_be_positive() {
    let inst = Builtin::S3.build().unwrap();
    assert!(run_suite(&inst, 0, 0.0).is_err());
    assert!(run_suite(&inst, 0, f64::NAN).is_err());
}
