//! Flow certificates, file formats and the catalog runner on the cheap entries.

use krlab_core::bounds::{complexity_bounds, fingerprint, Axioms, Evidence};
use krlab_core::catalog::{catalog_build, omega_i4, t4, NAMES};
use krlab_core::engine::{Engine, EngineConfig, SearchBounds};
use krlab_core::format::{flow_to_toml, parse_flow, parse_semigroup, semigroup_to_toml};
use krlab_core::manifest::{anchor_known, catalog_run, RunOptions, ANCHORS, TFA1_FLOW};
use krlab_core::semigroup::rlm;
use krlab_core::verify::{one_point_flow_test, search_flow, verify_flow, FlowSearch, Violation};
use krlab_core::{Error, FiniteGroup};

fn engine(name: &str) -> (krlab_core::catalog::Built, Engine) {
    let b = catalog_build(name).unwrap();
    let e = Engine::new(&b.ctx, &b.table, EngineConfig::default());
    (b, e)
}

#[test]
fn swapped_values_fail() {
    let (_, e) = engine("TFA1");
    let mut flow = parse_flow(TFA1_FLOW, &e).unwrap();
    assert!(verify_flow(&e, &flow).unwrap().passed());
    flow.assignment.swap(0, 1);
    let rep = verify_flow(&e, &flow).unwrap();
    assert!(!rep.passed());
    assert!(rep.violations.iter().any(|v| matches!(v, Violation::NotBelow { .. })));
}

#[test]
fn missing_cover_is_reported() {
    let (_, e) = engine("TFA1");
    let mut flow = parse_flow(TFA1_FLOW, &e).unwrap();
    flow.covering.retain(|(_, p)| p != "r");
    let rep = verify_flow(&e, &flow).unwrap();
    assert!(rep.violations.contains(&Violation::Uncovered { generator: "r".into() }));
}

#[test]
fn same_certificate_fails_on_the_tall_fork() {
    // TF admits a contradiction, so no certificate can pass there.
    let (_, e) = engine("TF");
    let flow = parse_flow(TFA1_FLOW, &e).unwrap();
    assert!(!verify_flow(&e, &flow).unwrap().passed());
}

#[test]
fn flow_files_round_trip() {
    let (_, e) = engine("TFA1");
    let flow = parse_flow(TFA1_FLOW, &e).unwrap();
    let again = parse_flow(&flow_to_toml(&flow, &e).unwrap(), &e).unwrap();
    assert_eq!(again.assignment, flow.assignment);
    assert_eq!(verify_flow(&e, &again).unwrap(), verify_flow(&e, &flow).unwrap());
}

#[test]
fn malformed_certificates_are_format_errors() {
    let (_, e) = engine("TFA1");
    let unknown = TFA1_FLOW.replace("q = \"{1 2 3 4}", "z = \"{1 2 3 4}");
    assert!(matches!(parse_flow(&unknown, &e), Err(Error::Format(_))));
    let bad_spc = TFA1_FLOW.replace("<1 -1>", "<1 y>");
    assert!(parse_flow(&bad_spc, &e).is_err());
    let clash = TFA1_FLOW.replace("\"p --id--> p\"", "\"p --id--> p\", \"p --id--> q\"");
    assert!(parse_flow(&clash, &e).is_err());
}

#[test]
fn semigroup_files_round_trip() {
    for name in ["TF", "CBIRIP", "S2"] {
        let b = catalog_build(name).unwrap();
        let again = parse_semigroup(&semigroup_to_toml(&b).unwrap()).unwrap();
        assert_eq!(again.table.len(), b.table.len(), "{name}");
        assert_eq!(fingerprint(&again.table), fingerprint(&b.table), "{name}");
    }
}

#[test]
fn one_point_flows() {
    for (name, expected) in [("TFA1", true), ("RG1", true), ("TF", false), ("S2", false)] {
        let b = catalog_build(name).unwrap();
        assert_eq!(one_point_flow_test(&b.ctx, &b.table), expected, "{name}");
    }
    let (_, e) = engine("TFA1");
    let found = search_flow(&e, &FlowSearch { max_states: 1, ..FlowSearch::default() }, &SearchBounds::default())
        .unwrap()
        .expect("TFA1 has a one-point flow");
    assert!(verify_flow(&e, &found).unwrap().passed());
}

#[test]
fn no_flow_for_the_tall_fork() {
    let (_, e) = engine("TF");
    let found = search_flow(&e, &FlowSearch::default(), &SearchBounds::default()).unwrap();
    assert!(found.is_none());
}

#[test]
fn axiom_fingerprint_matches_both_images() {
    let omega = fingerprint(&omega_i4().unwrap().table);
    let z2 = FiniteGroup::cyclic(2).unwrap();
    assert_eq!(fingerprint(&rlm(&t4(&z2).unwrap().table).table), omega);
    assert_eq!(fingerprint(&rlm(&catalog_build("S4").unwrap().table).table), omega);
    let bundled = RunOptions::default().axioms;
    assert_eq!(bundled.axioms[0].fingerprint, omega);
}

#[test]
fn without_the_axiom_t4_is_indeterminate() {
    let (b, e) = engine("T4");
    match complexity_bounds(&b.ctx, &b.table, &e, &Evidence::default(), &Axioms::default()) {
        Err(Error::IndeterminateBounds(i)) => assert_eq!((i.lower, i.upper), (1, 2)),
        other => panic!("expected an indeterminate interval, got {other:?}"),
    }
}

#[test]
fn unknown_entries_are_rejected() {
    assert!(matches!(catalog_build("NoEntry"), Err(Error::UnknownEntry(_))));
    assert!(matches!(catalog_run("NoEntry", &RunOptions::default()), Err(Error::UnknownEntry(_))));
}

#[test]
fn anchors_are_registered_and_distinct() {
    let mut ids: Vec<&str> = ANCHORS.iter().map(|(a, _)| *a).collect();
    ids.sort_unstable();
    let n = ids.len();
    ids.dedup();
    assert_eq!(ids.len(), n);
    for name in ["TF", "TFA1", "UTV", "RG1", "RG2", "S4", "S2"] {
        let rep = catalog_run(name, &RunOptions::default()).unwrap();
        for c in &rep.checks {
            assert!(anchor_known(c.anchor), "{name}: {}", c.anchor);
            assert!(c.anchor.starts_with(name), "{name}: {}", c.anchor);
        }
    }
    assert!(NAMES.iter().all(|n| ANCHORS.iter().any(|(a, _)| a.starts_with(&format!("{n}.")))));
}

#[test]
fn reports_are_reproducible() {
    let opts = RunOptions::default();
    for name in ["TF", "UTV", "RG2"] {
        let a = catalog_run(name, &opts).unwrap();
        let b = catalog_run(name, &opts).unwrap();
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(a.render_machine(), b.render_machine());
    }
}
