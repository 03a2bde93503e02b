//! End-to-end pipeline runs over the gallery and synthetic scenarios.

use cr_warp_core::chen::synthetic::SyntheticScenario;
use cr_warp_core::gallery::{expected_invariants, GalleryKey};
use cr_warp_core::pipeline::{run_scenario, CheckStatus, Scenario, ScenarioMode};

fn gallery_doc(key: GalleryKey, seed: u64) -> cr_warp_core::pipeline::ReportDocument {
    run_scenario(&Scenario::gallery(key, seed)).unwrap()
}

#[test]
fn chen_c2_grid_passes_all_checks() {
    let doc = gallery_doc(GalleryKey::ChenC2, 42);
    assert_eq!(doc.records.len(), 12);
    assert_eq!(doc.summary.failed, 0, "failures: {:?}", doc.summary.failing_checks);
    for rec in &doc.records {
        let inv = rec.invariants.as_ref().unwrap();
        let exp = expected_invariants(GalleryKey::ChenC2, &rec.point);
        approx::assert_abs_diff_eq!(inv.h_norm_sq, exp.h_norm_sq.unwrap(), epsilon = 1e-10);
        approx::assert_abs_diff_eq!(inv.tau_m, exp.tau_m.unwrap(), epsilon = 1e-10);
        approx::assert_abs_diff_eq!(inv.warp_term, exp.warp_term.unwrap(), epsilon = 1e-10);
        approx::assert_abs_diff_eq!(
            inv.inequality_i.slack,
            exp.slack_i.unwrap(),
            epsilon = 1e-9
        );
        assert!(inv.h_mean_norm_sq < 1e-16);
        assert!(rec.residuals.fundamental_identity.unwrap() < 1e-8);
        assert!(rec.residuals.warp_identity.unwrap() < 1e-8);
        // n2 = 1: no fiber planes, no second inequality.
        assert!(inv.inequality_ii.is_none());
        // Mixed entries are genuinely nonzero, so no equality.
        assert!(!rec.equality_i.as_ref().unwrap().equality);
    }
}

#[test]
fn chen_c3_grid_passes_all_checks() {
    let doc = gallery_doc(GalleryKey::ChenC3, 42);
    assert_eq!(doc.records.len(), 12);
    assert_eq!(doc.summary.failed, 0, "failures: {:?}", doc.summary.failing_checks);
    for rec in &doc.records {
        let inv = rec.invariants.as_ref().unwrap();
        let exp = expected_invariants(GalleryKey::ChenC3, &rec.point);
        approx::assert_abs_diff_eq!(inv.h_norm_sq, exp.h_norm_sq.unwrap(), epsilon = 1e-10);
        approx::assert_abs_diff_eq!(inv.tau_m, exp.tau_m.unwrap(), epsilon = 1e-10);
        approx::assert_abs_diff_eq!(
            inv.inequality_i.slack,
            exp.slack_i.unwrap(),
            epsilon = 1e-9
        );
        let ii = inv.inequality_ii.as_ref().unwrap();
        approx::assert_abs_diff_eq!(ii.leafwise.slack, exp.slack_ii.unwrap(), epsilon = 1e-9);
        assert!(rec.residuals.bo_fiber.unwrap() < 1e-8);
        assert!(rec.residuals.delta_transfer.unwrap() < 1e-8);
        assert!(rec.chain_i.as_ref().unwrap().residual < 1e-7);
        assert!(rec.chain_ii.as_ref().unwrap().residual < 1e-7);
    }
}

#[test]
fn product_gallery_is_an_equality_case() {
    let doc = gallery_doc(GalleryKey::Product, 7);
    assert_eq!(doc.summary.failed, 0, "failures: {:?}", doc.summary.failing_checks);
    for rec in &doc.records {
        let inv = rec.invariants.as_ref().unwrap();
        assert_eq!(inv.h_norm_sq, 0.0);
        assert!(inv.inequality_i.slack.abs() < 1e-10);
        assert!(inv.inequality_ii.as_ref().unwrap().leafwise.slack.abs() < 1e-10);
        assert!(rec.equality_i.as_ref().unwrap().equality);
        assert!(rec.equality_ii.as_ref().unwrap().equality);
        let cor = rec.corollaries.as_ref().unwrap();
        assert!(cor.check.minimal);
        assert!(cor.ricci_max_eig.unwrap() <= 1e-8);
    }
}

#[test]
fn cone_control_case_checks_metric_identities_only() {
    let doc = gallery_doc(GalleryKey::Cone, 0);
    assert_eq!(doc.summary.failed, 0, "failures: {:?}", doc.summary.failing_checks);
    for rec in &doc.records {
        assert!(!rec.cr);
        assert!(rec.cr_violation.is_some());
        assert!(rec.invariants.is_none());
        assert!(rec.residuals.warp_identity.unwrap() < 1e-8);
        assert!(rec.residuals.bo_fiber.unwrap() < 1e-8);
    }
}

#[test]
fn gallery_runs_are_deterministic() {
    let a = gallery_doc(GalleryKey::ChenC3, 99).to_json();
    let b = gallery_doc(GalleryKey::ChenC3, 99).to_json();
    assert_eq!(a, b);
}

fn equality_synthetic(c: f64, j_pairs: Option<Vec<(usize, usize)>>) -> Scenario {
    // Canonical equality-form h for n1 = 4, n2 = 2, three normals.
    let h = cr_warp_core::chen::equality::canonical_equality_h(
        4,
        2,
        4,
        0.7,
        cr_warp_core::chen::IneqVersion::I,
    );
    let n = 6;
    let payload: Vec<Vec<Vec<f64>>> = (0..h.normal_dim())
        .map(|r| {
            (0..n)
                .map(|i| (0..n).map(|j| h.get(r, i, j)).collect())
                .collect()
        })
        .collect();
    Scenario {
        mode: ScenarioMode::Synthetic {
            synthetic: SyntheticScenario {
                n1: 4,
                n2: 2,
                c,
                h: payload,
                warp: None,
                j_pairs,
            },
        },
        tolerances: None,
        budget: None,
        seed: Some(11),
    }
}

#[test]
fn synthetic_equality_flat_ambient() {
    let doc = run_scenario(&equality_synthetic(0.0, None)).unwrap();
    assert_eq!(doc.summary.failed, 0, "failures: {:?}", doc.summary.failing_checks);
    let rec = &doc.records[0];
    let inv = rec.invariants.as_ref().unwrap();
    assert!(
        inv.inequality_i.slack.abs() < 1e-8,
        "slack_i = {}",
        inv.inequality_i.slack
    );
    assert!(rec.equality_i.as_ref().unwrap().equality);
}

#[test]
fn synthetic_equality_curved_ambient_with_offset_pairing() {
    // c = 4 with the J-pairing chosen off the distinguished plane, so the
    // ambient minimum is attained there (E1) and equality holds.
    let doc = run_scenario(&equality_synthetic(4.0, Some(vec![(0, 2), (1, 3)]))).unwrap();
    assert_eq!(doc.summary.failed, 0, "failures: {:?}", doc.summary.failing_checks);
    let rec = &doc.records[0];
    let inv = rec.invariants.as_ref().unwrap();
    assert!(
        inv.inequality_i.slack.abs() < 1e-7,
        "slack_i = {}",
        inv.inequality_i.slack
    );
    assert!(
        inv.inequality_ii.as_ref().unwrap().leafwise.slack.abs() < 1e-7,
        "slack_ii = {}",
        inv.inequality_ii.as_ref().unwrap().leafwise.slack
    );
    let eq = rec.equality_i.as_ref().unwrap();
    assert!(eq.e1_attained);
    assert!(eq.equality, "violations: {:?}", eq.classification.violations);
}

#[test]
fn synthetic_equality_curved_ambient_holomorphic_pistar_fails_e1() {
    // Default interleaved pairing: the distinguished plane is holomorphic,
    // K̃(π*) = c > min(c/4, c), so E1 fails and the slack is positive.
    let doc = run_scenario(&equality_synthetic(4.0, None)).unwrap();
    let rec = &doc.records[0];
    let inv = rec.invariants.as_ref().unwrap();
    assert!(inv.inequality_i.slack > 0.5);
    let eq = rec.equality_i.as_ref().unwrap();
    assert!(!eq.equality);
}

#[test]
fn lemma_mode_runs_clean() {
    let doc = run_scenario(&Scenario {
        mode: ScenarioMode::Lemmas { count: 1000 },
        tolerances: None,
        budget: None,
        seed: Some(5),
    })
    .unwrap();
    let lem = doc.lemmas.as_ref().unwrap();
    assert_eq!(lem.violations, 0);
    assert!(!doc.has_hard_failure());
}

#[test]
fn table_rendering_is_total() {
    let doc = gallery_doc(GalleryKey::ChenC2, 3);
    let table = doc.to_table();
    assert!(table.contains("slack_i"));
    assert!(table.contains("summary:"));
    for rec in &doc.records {
        assert_eq!(rec.worst_status(), CheckStatus::Pass);
    }
}
