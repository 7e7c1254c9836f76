//! One pass/fail line per acceptance criterion. Every line is an exact check;
//! timings are measured here and compared against the stated limits.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::{closure_idempotent, lattice_laws, tilson_agrees, tilson_instance};
use krlab_core::catalog::{catalog_build, make_character_table, t4, verify_linkage_identity, NAMES};
use krlab_core::engine::{Engine, EngineConfig, SearchBounds};
use krlab_core::format::parse_flow;
use krlab_core::green::is_aperiodic;
use krlab_core::hull::{link_solution_counts, link_solve, verify_link, RowMonomial};
use krlab_core::manifest::{catalog_run, RunOptions, RunReport, RG1_FLOW, T4_FLOW};
use krlab_core::verify::{one_point_flow_test, search_flow, ts_of, verify_flow, FlowSearch};
use krlab_core::FiniteGroup;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }
}

struct Runs {
    opts: RunOptions,
    reports: BTreeMap<String, (RunReport, Duration)>,
}

impl Runs {
    fn get(&mut self, name: &str) -> (RunReport, Duration) {
        if !self.reports.contains_key(name) {
            let t0 = Instant::now();
            let rep = catalog_run(name, &self.opts).unwrap_or_else(|e| panic!("{name}: {e}"));
            self.reports.insert(name.to_string(), (rep, t0.elapsed()));
        }
        self.reports[name].clone()
    }
}

fn check_ok(out: &mut Outcome, rep: &RunReport, anchor: &str) {
    let hits: Vec<_> = rep.checks.iter().filter(|c| c.anchor == anchor).collect();
    out.require(!hits.is_empty(), format!("{anchor} was not checked"));
    for c in hits.iter().filter(|c| !c.ok) {
        out.require(false, format!("{anchor}: {} ({})", c.claim, c.detail.join("; ")));
    }
}

fn interval(out: &mut Outcome, rep: &RunReport, lo: u32, hi: u32) {
    let got = rep.interval.as_ref().map(|i| (i.lower, i.upper));
    out.require(got == Some((lo, hi)), format!("{}: interval {got:?}, expected [{lo},{hi}]", rep.name));
}

fn within(out: &mut Outcome, took: Duration, limit: u64) {
    out.require(took < Duration::from_secs(limit), format!("took {took:.1?}, limit {limit} s"));
}

fn engine_for(name: &str) -> (krlab_core::catalog::Built, Engine) {
    let b = catalog_build(name).unwrap();
    let e = Engine::new(&b.ctx, &b.table, EngineConfig::default());
    (b, e)
}

fn c1(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let (rep, took) = runs.get("TF");
    for a in ["TF.gm", "TF.green", "TF.rlm-depth", "TF.chain", "TF.bounds"] {
        check_ok(&mut out, &rep, a);
    }
    interval(&mut out, &rep, 2, 2);
    // The chain once more, straight from the engine.
    let (_, e) = engine_for("TF");
    let d = e.find_contradiction(&SearchBounds::default()).unwrap();
    let chain: Option<Vec<String>> = d.as_ref().map(|d| d.chain().into_iter().map(|p| e.show(p)).collect());
    let want = ["{1'}/<1>", "{1' 3'}/<1 1>", "{1 3}/<1 -1>", "=><="].map(String::from).to_vec();
    out.require(chain.as_ref() == Some(&want), format!("chain {chain:?}"));
    within(&mut out, took, 60);
    out
}

fn c2(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let (rep, took) = runs.get("TFA1");
    check_ok(&mut out, &rep, "TFA1.flow");
    interval(&mut out, &rep, 1, 1);
    let flow = rep.checks.iter().find(|c| c.anchor == "TFA1.flow").expect("flow check");
    let groups: Vec<&String> = flow.detail.iter().filter(|d| d.starts_with("check group (")).collect();
    out.require(groups.len() == 5, format!("{} check groups", groups.len()));
    for (g, label) in groups.iter().zip(["(a)", "(b)", "(c)", "(d)", "(e)"]) {
        let counts = g.rsplit(": ").next().and_then(|s| s.split(' ').next()).and_then(|s| s.split_once('/'));
        let full = counts.is_some_and(|(a, b)| a == b && a != "0");
        out.require(g.starts_with(&format!("check group {label}")) && full, format!("group line `{g}`"));
    }
    within(&mut out, took, 10);
    out
}

fn c3(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let (rep, took) = runs.get("UTV");
    for a in ["UTV.loop", "UTV.vacuum", "UTV.contradiction"] {
        check_ok(&mut out, &rep, a);
    }
    let (_, e) = engine_for("UTV");
    let split = e.parse_spc("{1 | 3}/<1 | 1>").unwrap();
    let merged = e.parse_spc("{1 3}/<1 1>").unwrap();
    let uses_merge = rep.contradiction.as_ref().is_some_and(|d| {
        d.reaches_contradiction()
            && d.steps.iter().any(|s| s.vacuum.as_ref().and_then(|v| v.inner.as_ref()) == Some(&(split.clone(), merged.clone())))
    });
    out.require(uses_merge, "no vacuum step merging {1 | 3} into {1 3}");
    within(&mut out, took, 60);
    out
}

fn c4() -> Outcome {
    let mut out = Outcome::new();
    for (name, k) in [("BIRIP", 3), ("CBIRIP", 2)] {
        let t0 = Instant::now();
        let (_, e) = engine_for(name);
        let search = FlowSearch { max_states: k, require_aperiodic: true, ..FlowSearch::default() };
        match search_flow(&e, &search, &SearchBounds::default()).unwrap() {
            Some(f) => {
                out.require(verify_flow(&e, &f).unwrap().passed(), format!("{name}: found flow does not verify"));
                out.require(f.automaton.states.len() <= k, format!("{name}: {} states", f.automaton.states.len()));
                out.require(is_aperiodic(&ts_of(&f.automaton).unwrap()), format!("{name}: covering is not aperiodic"));
                out.notes.push(format!("{name}: {}-state flow", f.automaton.states.len()));
            }
            None => out.require(false, format!("{name}: no flow found")),
        }
        within(&mut out, t0.elapsed(), 300);
    }
    out
}

fn c5(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let (rg1, t1) = runs.get("RG1");
    let (rg2, t2) = runs.get("RG2");
    check_ok(&mut out, &rg1, "RG1.flow");
    interval(&mut out, &rg1, 1, 1);
    let (_, e) = engine_for("RG1");
    let states = parse_flow(RG1_FLOW, &e).map(|f| f.automaton.states.len()).unwrap_or(0);
    out.require(states == 3, format!("RG1 certificate has {states} states"));
    check_ok(&mut out, &rg2, "RG2.switch");
    check_ok(&mut out, &rg2, "RG2.contradiction");
    out.require(rg2.contradiction.as_ref().is_some_and(|d| d.reaches_contradiction()), "RG2: no contradiction");
    interval(&mut out, &rg2, 2, 2);
    within(&mut out, t1 + t2, 60);
    out
}

fn c6() -> Outcome {
    let mut out = Outcome::new();
    let t0 = Instant::now();
    let b = t4(&FiniteGroup::cyclic(2).unwrap()).unwrap();
    out.require(one_point_flow_test(&b.ctx, &b.table), "one_point_flow_test is false");
    let e = Engine::new(&b.ctx, &b.table, EngineConfig::default());
    let flow = parse_flow(T4_FLOW, &e).unwrap();
    out.require(flow.automaton.states.len() == 1, "certificate is not over the trivial automaton");
    out.require(is_aperiodic(&ts_of(&flow.automaton).unwrap()), "covering is not aperiodic");
    out.require(verify_flow(&e, &flow).unwrap().passed(), "trivial certificate fails");
    within(&mut out, t0.elapsed(), 60);
    out
}

fn c7(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let (rep, took) = runs.get("S4");
    for a in ["S4.degree", "S4.fibers", "S4.chain", "S4.one-point", "S4.bounds"] {
        check_ok(&mut out, &rep, a);
    }
    interval(&mut out, &rep, 2, 2);
    within(&mut out, took, 120);
    out
}

fn c8(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let (rep, took) = runs.get("S2");
    for a in ["S2.character", "S2.linkage", "S2.type-ii", "S2.script", "S2.flow", "S2.bounds"] {
        check_ok(&mut out, &rep, a);
    }
    interval(&mut out, &rep, 1, 1);
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let c4: Vec<Vec<&str>> = make_character_table(4).iter().map(|r| r.iter().map(|&g| z4.name(g)).collect()).collect();
    out.require(
        c4 == [["1", "1", "1", "1"], ["1", "x", "x^2", "x^3"], ["1", "x^2", "1", "x^2"], ["1", "x^3", "x^2", "x"]],
        format!("C4 = {c4:?}"),
    );
    out.require(verify_linkage_identity(4), "linkage identity fails for n = 4");
    within(&mut out, took, 300);
    out
}

fn c9() -> Outcome {
    let mut out = Outcome::new();
    let t0 = Instant::now();
    for group in [FiniteGroup::trivial(), FiniteGroup::cyclic(2).unwrap()] {
        for nb in 1..=3 {
            if let Err(e) = lattice_laws(&group, nb) {
                out.require(false, format!("lattice |G|={} |B|={nb}: {e}", group.order()));
            }
        }
    }
    let mut runner = TestRunner::deterministic();
    let mut tested = 0;
    for _ in 0..256 {
        let inst = tilson_instance().new_tree(&mut runner).unwrap().current();
        match tilson_agrees(&inst) {
            Ok(Some(_)) => tested += 1,
            Ok(None) => {}
            Err(e) => out.require(false, format!("tilson: {e}")),
        }
    }
    out.require(tested >= 64, format!("only {tested} regular Tilson instances"));
    for name in NAMES {
        let b = catalog_build(name).unwrap();
        for i in (0..b.table.len()).filter(|&i| !b.table.in_ideal(i)) {
            let x = RowMonomial::from_lpf(b.table.element(i));
            let unique = link_solution_counts(&b.ctx, &x).iter().all(|&c| c == 1);
            let verified = link_solve(&b.ctx, &x).is_some_and(|y| verify_link(&b.ctx, &x, &y));
            out.require(unique && verified, format!("{name}: element {i} has no unique verified partner"));
        }
    }
    for name in ["TF", "UTV", "S2"] {
        match closure_idempotent(name) {
            Ok(n) => out.notes.push(format!("{name}: {n} states")),
            Err(e) => out.require(false, e),
        }
    }
    out.notes.push(format!("{tested} Tilson instances"));
    within(&mut out, t0.elapsed(), 600);
    out
}

fn c10(runs: &mut Runs) -> Outcome {
    let mut out = Outcome::new();
    let mut total = Duration::ZERO;
    for name in NAMES {
        let (rep, took) = runs.get(name);
        total += took;
        out.require(rep.passed(), format!("{name}: {} mismatches", rep.failures().len()));
        out.require(!(rep.flow_pass && rep.contradiction.is_some()), format!("{name}: both a flow and a contradiction"));
    }
    out.notes.push(format!("full catalog {total:.1?}"));
    within(&mut out, total, 900);
    out
}

#[test]
fn acceptance() {
    let mut runs = Runs { opts: RunOptions::default(), reports: BTreeMap::new() };
    type Criterion = Box<dyn Fn(&mut Runs) -> Outcome>;
    let criteria: Vec<(&str, Criterion)> = vec![
        ("TF contradiction chain, depth(RLM)=1, [2,2]", Box::new(c1)),
        ("TFA1 certificate with check groups (a)-(e), [1,1]", Box::new(c2)),
        ("UTV contradiction through the vacuum merge", Box::new(c3)),
        ("BIRIP and CBIRIP flows found by search", Box::new(|_| c4())),
        ("RG1 certificate, RG2 contradiction", Box::new(c5)),
        ("T4(Z2) one-point test and trivial certificate", Box::new(|_| c6())),
        ("S4(Z2) degree, fibers, chain, one-point test", Box::new(c7)),
        ("S2 character table, linkage, type II, certificate, [1,1]", Box::new(c8)),
        ("property suites", Box::new(|_| c9())),
        ("mutual exclusion across the catalog", Box::new(c10)),
    ];
    let mut failed = Vec::new();
    for (k, (title, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = f(&mut runs);
        let status = if out.ok { "PASS" } else { "FAIL" };
        let notes = if out.notes.is_empty() { String::new() } else { format!(" ({})", out.notes.join("; ")) };
        println!("criterion {:>2}: {status} {title} [{:.2?}]{notes}", k + 1, t0.elapsed());
        if !out.ok {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
