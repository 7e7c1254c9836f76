//! Expected results for the catalog entries and the runner that checks them.
//!
//! Every check carries an anchor id from [`ANCHORS`]; the ids name the
//! example and the fact being checked, and the registry entry says in a few
//! words where that fact comes from.

use std::fmt::Write as _;

use crate::bounds::{assess, fingerprint, Axioms, ComplexityInterval, Evidence};
use crate::catalog::{catalog_build, make_character_table, omega_i4, s4, t4, verify_linkage_identity, Built};
use crate::engine::{Derivation, Engine, EngineConfig, SearchBounds};
use crate::error::{Error, Result};
use crate::format::parse_flow;
use crate::green::{depth, green};
use crate::group::FiniteGroup;
use crate::hull::{degree, fiber_graph};
use crate::rees::IdealElement;
use crate::rhodes::Spc;
use crate::semigroup::{rlm, type_ii};
use crate::verify::{one_point_flow_test, search_flow, verify_flow, FlowAssignment, FlowReport, FlowSearch};
use crate::wff::Wff;

pub const AXIOMS: &str = include_str!("../fixtures/axioms.toml");
pub const TFA1_FLOW: &str = include_str!("../fixtures/tfa1_flow.toml");
pub const RG1_FLOW: &str = include_str!("../fixtures/rg1_flow.toml");
pub const S2_FLOW: &str = include_str!("../fixtures/s2_flow.toml");
pub const T4_FLOW: &str = include_str!("../fixtures/t4_flow.toml");
pub const BIRIP_FLOW: &str = include_str!("../fixtures/birip_flow.toml");
pub const CBIRIP_FLOW: &str = include_str!("../fixtures/cbirip_flow.toml");

/// Anchor ids and where each asserted fact is stated.
pub const ANCHORS: &[(&str, &str)] = &[
    ("TF.gm", "Tall Fork: structure matrix is regular with no proportional rows or columns"),
    ("TF.green", "Tall Fork: J-class poset figure (two group classes, null class, ideal, zero)"),
    ("TF.rlm-depth", "Tall Fork: longest non-aperiodic chain of RLM(TF) has length 1"),
    ("TF.chain", "Tall Fork: sigma loop, then r, then tau loop reaches the contradiction"),
    ("TF.bounds", "Tall Fork: complexity 2"),
    ("TFA1.flow", "TFA1: the two-state flow over the flip-flop and its five checks"),
    ("TFA1.bounds", "TFA1: complexity 1"),
    ("UTV.loop", "UTV: the sigma loop from 1' has two classes before the vacuum"),
    ("UTV.vacuum", "UTV: the vacuum forces 1 and 3 into one class"),
    ("UTV.contradiction", "UTV: complexity rises to 2 again"),
    ("UTV.bounds", "UTV: complexity 2"),
    ("BIRIP.flow", "BIRIP: a flow over RZ(3)^1 exists"),
    ("BIRIP.bounds", "BIRIP: complexity 1"),
    ("CBIRIP.flow", "CBIRIP: a flow over RZ(2)^1 exists"),
    ("CBIRIP.bounds", "CBIRIP: complexity 1"),
    ("RG1.flow", "RG1: the three listed states (a), (b), (c) form a flow"),
    ("RG1.bounds", "RG1: complexity 1"),
    ("RG2.switch", "RG2: same build as RG1 with r1 replaced by r2"),
    ("RG2.contradiction", "RG2: the join of the two 1R 2R cross-sections is the contradiction"),
    ("RG2.bounds", "RG2: the switch kicks complexity up to 2"),
    ("T4.one-point", "T4(G): type II of the ideal is aperiodic, one-point flow"),
    ("T4.flow", "T4(G): flow over the trivial transformation semigroup"),
    ("T4.rlm", "T4(G): RLM image is the continuous partial functions on the 4-cycle"),
    ("T4.bounds", "T4(G): complexity 2, using the external value for the 4-cycle monoid"),
    ("S4.degree", "S4(G): every fiber has at most two points"),
    ("S4.fibers", "S4(G): fiber graph is |G| disjoint 4-cycles"),
    ("S4.chain", "S4(G): (13) loop, f, (1234) loop reaches the contradiction"),
    ("S4.one-point", "S4(G): no one-point flow, in line with no aperiodic flow"),
    ("S4.bounds", "S4(G): complexity 2"),
    ("S2.character", "S2: the printed character table C4"),
    ("S2.linkage", "S2: X C4 = C4 Y with Y diagonal"),
    ("S2.type-ii", "S2: (4, x^3, 4) lies in the type II subsemigroup"),
    ("S2.script", "S2: a loop, b, a loop, b cycles through {2} back to {1}"),
    ("S2.flow", "S2: flow over RZ(4)^1 with sigma_1 .. sigma_4"),
    ("S2.one-point", "S2: no one-point flow"),
    ("S2.bounds", "S2: complexity 1"),
];

pub fn anchor_known(id: &str) -> bool {
    ANCHORS.iter().any(|(a, _)| *a == id)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub anchor: &'static str,
    pub claim: String,
    pub ok: bool,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub interval: Option<ComplexityInterval>,
    pub contradiction: Option<Derivation>,
    pub flow_pass: bool,
    /// Rendered derivation and flow lines, for display.
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} ==", self.name);
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {} ({})", if c.ok { "ok" } else { "MISMATCH" }, c.claim, c.anchor);
            for d in &c.detail {
                let _ = writeln!(s, "      {d}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "  {n}");
        }
        if let Some(i) = &self.interval {
            let (lo, hi) = i.deciding_rules();
            let _ = writeln!(s, "complexity {i} (lower: {}; upper: {})", lo.join(", "), hi.join(", "));
        }
        let _ = writeln!(s, "result {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }

    pub fn render_machine(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "entry={}", self.name);
        for c in &self.checks {
            let _ = writeln!(s, "check.{}={}", c.anchor, if c.ok { "ok" } else { "mismatch" });
        }
        if let Some(i) = &self.interval {
            let _ = writeln!(s, "complexity.lower={}", i.lower);
            let _ = writeln!(s, "complexity.upper={}", i.upper);
        }
        let _ = writeln!(s, "contradiction={}", self.contradiction.is_some());
        let _ = writeln!(s, "flow={}", self.flow_pass);
        let _ = writeln!(s, "result={}", if self.passed() { "pass" } else { "fail" });
        s
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub engine: EngineConfig,
    pub bounds: SearchBounds,
    pub search: FlowSearch,
    pub axioms: Axioms,
    /// Group for T4 and S4; `Z2` when absent.
    pub group: Option<FiniteGroup>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            engine: EngineConfig::default(),
            bounds: SearchBounds::default(),
            search: FlowSearch::default(),
            axioms: Axioms::parse(AXIOMS).expect("bundled axioms parse"),
            group: None,
        }
    }
}

struct Run<'a> {
    built: Built,
    engine: Engine,
    opts: &'a RunOptions,
    report: RunReport,
    evidence: Evidence,
}

impl<'a> Run<'a> {
    fn new(built: Built, opts: &'a RunOptions) -> Run<'a> {
        let engine = Engine::new(&built.ctx, &built.table, opts.engine);
        let report = RunReport {
            name: built.name.clone(),
            checks: Vec::new(),
            interval: None,
            contradiction: None,
            flow_pass: false,
            notes: Vec::new(),
        };
        Run { built, engine, opts, report, evidence: Evidence::default() }
    }

    fn check(&mut self, anchor: &'static str, claim: impl Into<String>, ok: bool, detail: Vec<String>) {
        debug_assert!(anchor_known(anchor), "unregistered anchor {anchor}");
        self.report.checks.push(Check { anchor, claim: claim.into(), ok, detail });
    }

    fn spc(&self, text: &str) -> Spc {
        self.engine.parse_spc(text).expect("manifest SPC parses")
    }

    fn show_chain(&self, d: &Derivation) -> Vec<String> {
        d.chain().into_iter().map(|p| self.engine.show(p)).collect()
    }

    /// Verifies a certificate; the check lines are grouped by `group_of`.
    fn flow(
        &mut self,
        anchor: &'static str,
        text: &str,
        group_of: &dyn Fn(&str) -> Option<&'static str>,
    ) -> Result<Option<FlowAssignment>> {
        let flow = parse_flow(text, &self.engine)?;
        let rep = verify_flow(&self.engine, &flow)?;
        let detail = self.flow_lines(&flow, &rep, group_of);
        self.check(anchor, "bundled flow certificate passes verification", rep.passed(), detail);
        if rep.passed() {
            self.report.flow_pass = true;
            self.evidence.flow = Some(flow.clone());
            Ok(Some(flow))
        } else {
            Ok(None)
        }
    }

    fn flow_lines(&self, flow: &FlowAssignment, rep: &FlowReport, group_of: &dyn Fn(&str) -> Option<&'static str>) -> Vec<String> {
        let mut out: Vec<String> = rep.violations.iter().map(|v| format!("violation: {v}")).collect();
        let mut groups: Vec<(&'static str, usize, usize)> = Vec::new();
        for c in &rep.checks {
            if let Some(g) = group_of(&c.generator) {
                match groups.iter_mut().find(|(n, _, _)| *n == g) {
                    Some(e) => {
                        e.1 += 1;
                        e.2 += usize::from(c.ok);
                    }
                    None => groups.push((g, 1, usize::from(c.ok))),
                }
            }
        }
        for (g, n, ok) in groups {
            out.push(format!("check group {g}: {ok}/{n} inequalities hold"));
        }
        for c in rep.checks.iter().filter(|c| !c.generator.starts_with('(') && c.generator != "0") {
            let target = c.target_state.map_or_else(|| "{}".to_string(), |t| self.engine.show(&flow.assignment[t]));
            out.push(format!(
                "({})F {} = {} <= {}",
                flow.automaton.states[c.state],
                c.generator,
                self.engine.show(&c.image),
                target
            ));
        }
        out
    }

    fn contradiction_search(&mut self) -> Result<Option<Derivation>> {
        let d = self.engine.find_contradiction(&self.opts.bounds)?;
        if let Some(d) = &d {
            self.report.notes.push(format!("breadth-first derivation: {}", d.script()));
            for l in d.render(&self.engine) {
                self.report.notes.push(format!("  {l}"));
            }
            if self.evidence.contradiction.is_none() {
                self.evidence.contradiction = Some(d.clone());
            }
            self.report.contradiction = Some(d.clone());
        }
        Ok(d)
    }

    fn no_contradiction(&mut self, anchor: &'static str) -> Result<()> {
        let d = self.contradiction_search()?;
        self.check(anchor, "no contradiction derivation within the search bounds", d.is_none(), Vec::new());
        Ok(())
    }

    fn script(&mut self, start: &str, script: &str) -> Result<Derivation> {
        let w = Wff::parse(script)?;
        let d = self.engine.run_script(&w, &self.spc(start))?;
        Ok(d)
    }

    fn bounds(&mut self, anchor: &'static str, lower: u32, upper: u32) -> Result<()> {
        let (s, r) = assess(&self.built.ctx, &self.built.table, &self.engine, &self.evidence, &self.opts.axioms)?;
        let (lo, hi) = s.deciding_rules();
        let detail = vec![
            format!("RLM(S) interval {r}"),
            format!("lower by {}", lo.join(", ")),
            format!("upper by {}", hi.join(", ")),
        ];
        self.check(anchor, format!("complexity interval is [{lower},{upper}]"), (s.lower, s.upper) == (lower, upper), detail);
        self.report.interval = Some(s);
        Ok(())
    }

    fn finish(self) -> RunReport {
        self.report
    }
}

fn ideal_group<'g>(b_sets: &'g [(&'static str, &'g [&'g str])]) -> impl Fn(&str) -> Option<&'static str> + 'g {
    move |name: &str| {
        let inner = name.strip_prefix('(')?.strip_suffix(')')?;
        let b = inner.rsplit(',').next()?;
        b_sets.iter().find(|(_, set)| set.contains(&b)).map(|(g, _)| *g)
    }
}

fn run_tf(opts: &RunOptions) -> Result<RunReport> {
    let mut run = Run::new(catalog_build("TF")?, opts);
    run.check("TF.gm", "GM=true", run.built.ctx.is_gm(), Vec::new());

    let gd = green(&run.built.table);
    let maximal = gd.maximal_j_classes();
    let mut orders: Vec<Option<usize>> = maximal.iter().map(|&j| gd.max_subgroup[j]).collect();
    orders.sort();
    let null = (0..gd.j_classes.len()).filter(|&j| !gd.regular[j]).count();
    let zero = run.built.table.zero().map(|z| gd.j_classes[gd.j_of[z]].len());
    run.check(
        "TF.green",
        "two maximal J-classes with groups Z2 and Z4, a null class, the ideal and zero",
        orders == [Some(2), Some(4)] && null >= 1 && zero == Some(1),
        vec![format!("{} J-classes, maximal subgroup orders {orders:?}, {null} null", gd.j_classes.len())],
    );

    let rd = depth(&rlm(&run.built.table).table);
    run.check("TF.rlm-depth", "depth(RLM)=1", rd == 1, vec![format!("depth(RLM) = {rd}")]);

    let d = run.contradiction_search()?;
    let expected = ["{1'}/<1>", "{1' 3'}/<1 1>", "{1 3}/<1 -1>", "=><="];
    let (chain, replay) = match &d {
        Some(d) => (run.show_chain(d), d.replay(&run.engine)?),
        None => (Vec::new(), false),
    };
    run.check(
        "TF.chain",
        "contradiction derivation {1'} -> {1' 3'}/<1 1> -> {1 3}/<1 -1> -> =><=",
        chain == expected && replay,
        vec![format!("chain {}", chain.join(" -> ")), format!("replays {replay}")],
    );
    run.bounds("TF.bounds", 2, 2)?;
    Ok(run.finish())
}

fn run_tfa1(opts: &RunOptions) -> Result<RunReport> {
    let mut run = Run::new(catalog_build("TFA1")?, opts);
    let sets: [(&'static str, &[&str]); 2] = [("(a) ideal, b in {1',3'}", &["1'", "3'"]), ("(b) ideal, b in {1..4}", &["1", "2", "3", "4"])];
    let ideal = ideal_group(&sets);
    let group_of = |g: &str| -> Option<&'static str> {
        match g {
            "sigma" => Some("(c) sigma"),
            "tau" => Some("(d) tau"),
            "r" => Some("(e) r"),
            other => ideal(other),
        }
    };
    run.flow("TFA1.flow", TFA1_FLOW, &group_of)?;
    run.no_contradiction("TFA1.flow")?;
    run.bounds("TFA1.bounds", 1, 1)?;
    Ok(run.finish())
}

fn run_utv(opts: &RunOptions) -> Result<RunReport> {
    let mut run = Run::new(catalog_build("UTV")?, opts);
    let start = run.spc("{1'}/<1>");
    let raw = run.engine.eval_at(&Wff::parse("sigma^(w+*)")?, &start, 0)?;
    let two = run.spc("{1' | 3'}/<1 | 1>");
    run.check(
        "UTV.loop",
        "sigma^(w+*) from {1'} without vacuum is {1' | 3'}/<1 | 1>",
        raw == two,
        vec![format!("value {}", run.engine.show(&raw))],
    );
    let split = run.spc("{1 | 3}/<1 | 1>");
    let merged = run.engine.vacuum(&split)?;
    let want = run.spc("{1 3}/<1 1>");
    let d = run.contradiction_search()?;
    let inner = d.as_ref().and_then(|d| d.steps.iter().find_map(|s| s.vacuum.as_ref().and_then(|v| v.inner.clone())));
    let inner_ok = inner.as_ref().is_some_and(|(a, b)| *a == split && *b == want);
    run.check(
        "UTV.vacuum",
        "vacuum merges {1 | 3}/<1 | 1> into {1 3}/<1 1>, and the derivation uses that merge",
        merged == want && inner_ok,
        vec![
            format!("V({}) = {}", run.engine.show(&split), run.engine.show(&merged)),
            format!("derivation merge: {}", inner.map_or("none".into(), |(a, b)| format!("{} => {}", run.engine.show(&a), run.engine.show(&b)))),
        ],
    );
    let ok = d.as_ref().is_some_and(|d| d.reaches_contradiction() && d.replay(&run.engine).unwrap_or(false));
    run.check("UTV.contradiction", "contradiction derivation found and replays", ok, Vec::new());
    run.bounds("UTV.bounds", 2, 2)?;
    Ok(run.finish())
}

fn run_searched(name: &str, max_states: usize, cached: &str, opts: &RunOptions) -> Result<RunReport> {
    let (flow_anchor, bounds_anchor) = match name {
        "BIRIP" => ("BIRIP.flow", "BIRIP.bounds"),
        _ => ("CBIRIP.flow", "CBIRIP.bounds"),
    };
    let mut run = Run::new(catalog_build(name)?, opts);
    let search = FlowSearch { max_states, require_aperiodic: true, ..opts.search };
    let found = search_flow(&run.engine, &search, &opts.bounds)?;
    let (ok, detail) = match &found {
        Some(f) => {
            let pass = verify_flow(&run.engine, f)?.passed();
            let values: Vec<String> = f.assignment.iter().map(|v| run.engine.show(v)).collect();
            (pass, vec![format!("{} states: {}", f.automaton.states.len(), values.join(", ")), format!("re-verifies {pass}")])
        }
        None => (false, vec!["no flow within the search limits".into()]),
    };
    run.check(flow_anchor, format!("search_flow(maxStates={max_states}, aperiodic) finds a verified flow"), ok, detail);
    if ok {
        run.report.flow_pass = true;
        run.evidence.flow = found;
    }
    run.flow(flow_anchor, cached, &|_| None)?;
    run.no_contradiction(flow_anchor)?;
    run.bounds(bounds_anchor, 1, 1)?;
    Ok(run.finish())
}

fn run_rg1(opts: &RunOptions) -> Result<RunReport> {
    let mut run = Run::new(catalog_build("RG1")?, opts);
    run.flow("RG1.flow", RG1_FLOW, &|_| None)?;
    run.no_contradiction("RG1.flow")?;
    run.bounds("RG1.bounds", 1, 1)?;
    Ok(run.finish())
}

fn run_rg2(opts: &RunOptions) -> Result<RunReport> {
    let rg1 = catalog_build("RG1")?;
    let mut run = Run::new(catalog_build("RG2")?, opts);
    let names = |b: &Built| b.extras.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>();
    let (n1, n2) = (names(&rg1), names(&run.built));
    let differ: Vec<(String, String)> = n1.iter().zip(&n2).filter(|(a, b)| a != b).map(|(a, b)| (a.clone(), b.clone())).collect();
    let same_ideal = rg1.ctx.a_labels() == run.built.ctx.a_labels() && rg1.ctx.b_labels() == run.built.ctx.b_labels();
    run.check(
        "RG2.switch",
        "RG1 and RG2 differ only in r1 versus r2",
        same_ideal && differ == [("r1".to_string(), "r2".to_string())],
        vec![format!("differences {differ:?}")],
    );
    let d = run.contradiction_search()?;
    let ok = d.as_ref().is_some_and(|d| {
        let s = d.script();
        s.contains("r2") && s.contains("xR^(w+*)") && d.reaches_contradiction() && d.replay(&run.engine).unwrap_or(false)
    });
    run.check(
        "RG2.contradiction",
        "contradiction derivation through r2 and the xR loop",
        ok,
        d.iter().map(|d| format!("chain {}", run.show_chain(d).join(" -> "))).collect(),
    );
    run.bounds("RG2.bounds", 2, 2)?;
    Ok(run.finish())
}

fn default_group(opts: &RunOptions) -> Result<FiniteGroup> {
    match &opts.group {
        Some(g) => Ok(g.clone()),
        None => FiniteGroup::cyclic(2),
    }
}

fn run_t4(opts: &RunOptions) -> Result<RunReport> {
    let g = default_group(opts)?;
    let mut run = Run::new(t4(&g)?, opts);
    let op = one_point_flow_test(&run.built.ctx, &run.built.table);
    run.check("T4.one-point", "one_point_flow_test = true", op, Vec::new());
    run.flow("T4.flow", T4_FLOW, &|_| None)?;
    run.no_contradiction("T4.flow")?;
    let omega = omega_i4()?;
    let same = fingerprint(&rlm(&run.built.table).table) == fingerprint(&omega.table);
    run.check("T4.rlm", "RLM(T4) has the fingerprint of Omega(I4)", same, vec![format!("fingerprint {}", fingerprint(&omega.table))]);
    run.bounds("T4.bounds", 2, 2)?;
    Ok(run.finish())
}

fn run_s4(opts: &RunOptions) -> Result<RunReport> {
    let g = default_group(opts)?;
    let mut run = Run::new(s4(&g)?, opts);
    let deg = degree(&run.built.table);
    run.check("S4.degree", "degree = 2", deg == 2, vec![format!("degree {deg}")]);

    let fg = fiber_graph(&run.built.table);
    let comps = fg.components();
    let levels_ok = comps.iter().all(|c| {
        let g0 = fg.vertices[c[0]].0;
        c.iter().all(|&v| fg.vertices[v].0 == g0)
    });
    run.check(
        "S4.fibers",
        format!("fiber graph = {} disjoint 4-cycles, one per group element", g.order()),
        comps.len() == g.order() && comps.iter().all(|c| c.len() == 4 && fg.is_cycle(c)) && levels_ok,
        vec![format!("{} components of sizes {:?}", comps.len(), comps.iter().map(Vec::len).collect::<Vec<_>>())],
    );

    let d = run.script("{1}/<1>", "s13^(w+*) f t1234^(w+*)")?;
    let chain = run.show_chain(&d);
    let expected = ["{1}/<1>", "{1 3}/<1 1>", "{1 3}/<1 -1>", "=><="];
    let replay = d.replay(&run.engine)?;
    let mut detail = vec![format!("chain {}", chain.join(" -> "))];
    detail.extend(d.render(&run.engine));
    let ok = (g.order() != 2 || chain == expected) && d.reaches_contradiction() && replay;
    run.check("S4.chain", "(13) loop, f, (1234) loop from {1} reaches =><=", ok, detail);
    if ok {
        run.evidence.contradiction = Some(d.clone());
        run.report.contradiction = Some(d);
    }
    run.contradiction_search()?;

    let op = one_point_flow_test(&run.built.ctx, &run.built.table);
    run.check("S4.one-point", "one_point_flow_test = false", !op, Vec::new());
    run.bounds("S4.bounds", 2, 2)?;
    Ok(run.finish())
}

fn run_s2(opts: &RunOptions) -> Result<RunReport> {
    let mut run = Run::new(catalog_build("S2")?, opts);
    let z4 = FiniteGroup::cyclic(4)?;
    let printed = [["1", "1", "1", "1"], ["1", "x", "x^2", "x^3"], ["1", "x^2", "1", "x^2"], ["1", "x^3", "x^2", "x"]];
    let c4 = make_character_table(4);
    let names: Vec<Vec<String>> = c4.iter().map(|r| r.iter().map(|&e| z4.name(e).to_string()).collect()).collect();
    run.check(
        "S2.character",
        "make_character_table(4) equals the printed C4",
        names.iter().zip(printed).all(|(r, p)| r.iter().map(String::as_str).eq(p)),
        names.iter().map(|r| r.join(" ")).collect(),
    );
    run.check("S2.linkage", "verify_linkage_identity(4) = true", verify_linkage_identity(4), Vec::new());

    let ctx = &run.built.ctx;
    let x3 = ctx.group().parse_elem("x^3").expect("Z4 has x^3");
    let e = IdealElement::Triple { a: ctx.a_index("a4").expect("row a4"), g: x3, b: ctx.b_index("4").expect("column 4") };
    let t2 = type_ii(&run.built.table);
    let inside = run.built.table.ideal_index(e, ctx).is_some_and(|i| t2.contains(i));
    run.check("S2.type-ii", "(a4, x^3, 4) lies in type_ii", inside, vec![format!("|S_II| = {}", t2.len())]);

    let d = run.script("{1}/<1>", "a^(w+*) b a^(w+*) b")?;
    let chain = run.show_chain(&d);
    let expected = ["{1}/<1>", "{1 | 3 | 5 | 7}/<1 | 1 | 1 | 1>", "{2}/<1>", "{2 | 4 | 6 | 8}/<1 | 1 | 1 | 1>", "{1}/<1>"];
    run.check("S2.script", "script returns to {1}/<1>", chain == expected, vec![format!("chain {}", chain.join(" -> "))]);

    let flow = run.flow("S2.flow", S2_FLOW, &|_| None)?;
    if let Some(flow) = flow {
        let a = run.engine.letter("a")?.map.clone();
        let image = run.engine.forward(&a, &flow.assignment[0]);
        let rotated = run.spc("{2 4 6 8}/<x^3 1 x x^2>");
        run.check(
            "S2.flow",
            "sigma_1 a = <x^3 1 x x^2> is projectively <1 x x^2 x^3>",
            image == flow.assignment[0] && rotated == flow.assignment[0],
            vec![format!("sigma_1 a = {}", run.engine.show(&image))],
        );
    }
    run.no_contradiction("S2.flow")?;
    let op = one_point_flow_test(&run.built.ctx, &run.built.table);
    run.check("S2.one-point", "one_point_flow_test = false", !op, Vec::new());
    run.bounds("S2.bounds", 1, 1)?;
    Ok(run.finish())
}

/// Builds an entry and checks every manifest assertion.
pub fn catalog_run(name: &str, opts: &RunOptions) -> Result<RunReport> {
    match name {
        "TF" => run_tf(opts),
        "TFA1" => run_tfa1(opts),
        "UTV" => run_utv(opts),
        "BIRIP" => run_searched("BIRIP", 3, BIRIP_FLOW, opts),
        "CBIRIP" => run_searched("CBIRIP", 2, CBIRIP_FLOW, opts),
        "RG1" => run_rg1(opts),
        "RG2" => run_rg2(opts),
        "T4" => run_t4(opts),
        "S4" => run_s4(opts),
        "S2" => run_s2(opts),
        other => Err(Error::UnknownEntry(other.to_string())),
    }
}
