use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use krlab_core::bounds::{assess, fingerprint, table_bounds, Axioms, Evidence};
use krlab_core::catalog::{catalog_build, mk_context, s4, t4, Built, NAMES};
use krlab_core::engine::{Engine, EngineConfig, SearchBounds};
use krlab_core::format::{flow_to_toml, parse_flow, parse_semigroup, semigroup_to_toml};
use krlab_core::green::green;
use krlab_core::hull::{degree, in_hull, link_solve, RowMonomial};
use krlab_core::manifest::{catalog_run, RunOptions, AXIOMS};
use krlab_core::rees::IdealElement;
use krlab_core::semigroup::{generate, rlm, type_ii, DEFAULT_BUDGET};
use krlab_core::verify::{search_flow, verify_flow, FlowSearch};
use krlab_core::wff::Wff;
use krlab_core::{Error, FiniteGroup, GroupSpec, Lpf};

#[derive(Parser)]
#[command(name = "krlab", version, about = "Rees matrix semigroups, Rhodes lattices and flows")]
struct Cli {
    /// State budget for contradiction and flow searches.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Longest back-flow word tried by the vacuum.
    #[arg(long, global = true)]
    word_bound: Option<usize>,
    /// Axioms file used instead of the bundled one.
    #[arg(long, global = true)]
    axioms: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Group for the T4 and S4 catalog entries.
    #[arg(long, global = true)]
    group: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// FILE is a semigroup description, a catalog name or `Mk:<k>`.
#[derive(Subcommand)]
enum Cmd {
    /// Generate the semigroup and summarize it; `--emit` prints its description.
    Build {
        file: String,
        #[arg(long)]
        emit: bool,
    },
    Green { file: String },
    Rlm { file: String },
    Type2 { file: String },
    Depth { file: String },
    /// Decide membership of an element in the translational hull.
    Hull {
        file: String,
        /// Edges such as `1'->1, 3'->-3` or cycles `(1 2 3 4)`.
        #[arg(long)]
        element: String,
    },
    /// Evaluate one formula per line of the script, starting from an SPC.
    Eval {
        file: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        script: PathBuf,
    },
    /// Exit 0 on PASS, 1 on FAIL, 2 on a format error.
    VerifyFlow { file: String, flow: PathBuf },
    SearchFlow {
        file: String,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long)]
        aperiodic: bool,
    },
    Contradict {
        file: String,
        /// Maximum number of states explored.
        #[arg(long)]
        bounds: Option<usize>,
        /// Also loop two-letter words.
        #[arg(long)]
        pair_loops: bool,
    },
    Bounds {
        file: String,
        /// Flow certificate offered as evidence.
        #[arg(long)]
        flow: Option<PathBuf>,
        /// Search for a flow with up to this many states when none is given.
        #[arg(long)]
        search: Option<usize>,
    },
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Run {
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

struct Ctx {
    format: Format,
    engine: EngineConfig,
    bounds: SearchBounds,
    axioms: Axioms,
    group: Option<FiniteGroup>,
    out: String,
}

impl Ctx {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key}={value}");
    }

    fn line(&mut self, text: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{text}");
    }

    fn text(&self) -> bool {
        self.format == Format::Text
    }

    fn load(&self, file: &str) -> Result<Built> {
        if let Some(k) = file.strip_prefix("Mk:") {
            let k: usize = k.parse().context("`Mk:<k>` needs a number")?;
            let ctx = mk_context(FiniteGroup::cyclic(2)?, k)?;
            let table = generate(&ctx, &[], true, DEFAULT_BUDGET)?;
            return Ok(Built { name: format!("M{k}"), ctx, extras: Vec::new(), table });
        }
        if NAMES.contains(&file) {
            return Ok(match (file, &self.group) {
                ("T4", Some(g)) => t4(g)?,
                ("S4", Some(g)) => s4(g)?,
                _ => catalog_build(file)?,
            });
        }
        let text = std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
        Ok(parse_semigroup(&text)?)
    }

    fn engine(&self, b: &Built) -> Engine {
        Engine::new(&b.ctx, &b.table, self.engine)
    }
}

fn triple_name(b: &Built, e: IdealElement) -> String {
    match e {
        IdealElement::Zero => "0".into(),
        IdealElement::Triple { a, g, b: col } => {
            format!("({},{},{})", b.ctx.a_labels()[a], b.ctx.group().name(g), b.ctx.b_labels()[col])
        }
    }
}

fn cmd_build(c: &mut Ctx, file: &str, emit: bool) -> Result<ExitCode> {
    let b = c.load(file)?;
    if emit {
        c.line(semigroup_to_toml(&b)?.trim_end());
        return Ok(ExitCode::SUCCESS);
    }
    let t = &b.table;
    if c.text() {
        c.line(format!("{}: {} elements over {} points, group of order {}", b.name, t.len(), t.points(), t.group().order()));
        c.line(format!("ideal {}x{} matrix, GM={}", b.ctx.na(), b.ctx.nb(), b.ctx.is_gm()));
        if let Some(w) = b.ctx.proportionality_witness() {
            c.line(format!("not GM: {w}"));
        }
        let names: Vec<&str> = b.extras.iter().map(|(n, _)| n.as_str()).collect();
        c.line(format!("generators {}{}", names.join(" "), if t.has_ideal() { " + ideal" } else { "" }));
        for (n, f) in &b.extras {
            c.line(format!("  {n}: {}", f.display(b.ctx.group(), b.ctx.b_labels())));
        }
    } else {
        c.kv("name", &b.name);
        c.kv("elements", t.len());
        c.kv("points", t.points());
        c.kv("group_order", t.group().order());
        c.kv("gm", b.ctx.is_gm());
        c.kv("generators", b.extras.len());
        c.kv("ideal", t.has_ideal());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_green(c: &mut Ctx, file: &str) -> Result<ExitCode> {
    let b = c.load(file)?;
    let gd = green(&b.table);
    let maximal = gd.maximal_j_classes();
    for (j, class) in gd.j_classes.iter().enumerate() {
        let kind = match gd.max_subgroup[j] {
            _ if !gd.regular[j] => "null".to_string(),
            Some(1) | None => "aperiodic".to_string(),
            Some(n) => format!("group {n}"),
        };
        let top = if maximal.contains(&j) { " maximal" } else { "" };
        let below: Vec<String> = (0..gd.j_classes.len())
            .filter(|&k| k != j && gd.j_leq[k][j] && !(0..gd.j_classes.len()).any(|m| m != j && m != k && gd.j_leq[k][m] && gd.j_leq[m][j]))
            .map(|k| format!("J{k}"))
            .collect();
        if c.text() {
            c.line(format!("J{j}: {} elements, {kind}{top}; covers {}", class.len(), if below.is_empty() { "-".into() } else { below.join(" ") }));
        } else {
            c.kv(&format!("j{j}.size"), class.len());
            c.kv(&format!("j{j}.kind"), kind.replace(' ', ":"));
            c.kv(&format!("j{j}.maximal"), !top.is_empty());
        }
    }
    if c.text() {
        c.line(format!("{} J-classes, {} idempotents, depth {}", gd.j_classes.len(), gd.idempotents.len(), gd.depth()));
    } else {
        c.kv("j_classes", gd.j_classes.len());
        c.kv("idempotents", gd.idempotents.len());
        c.kv("depth", gd.depth());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rlm(c: &mut Ctx, file: &str) -> Result<ExitCode> {
    let b = c.load(file)?;
    let r = rlm(&b.table);
    let gd = green(&r.table);
    let bounds = table_bounds(&r.table, &c.axioms);
    if c.text() {
        c.line(format!("RLM: {} elements (from {})", r.table.len(), b.table.len()));
        c.line(format!("aperiodic {}, depth {}, degree {}", gd.is_aperiodic(), gd.depth(), degree(&r.table)));
        c.line(format!("fingerprint {}", fingerprint(&r.table)));
        c.line(format!("complexity {bounds}"));
    } else {
        c.kv("elements", r.table.len());
        c.kv("aperiodic", gd.is_aperiodic());
        c.kv("depth", gd.depth());
        c.kv("fingerprint", fingerprint(&r.table));
        c.kv("complexity.lower", bounds.lower);
        c.kv("complexity.upper", bounds.upper);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_type2(c: &mut Ctx, file: &str) -> Result<ExitCode> {
    let b = c.load(file)?;
    let t2 = type_ii(&b.table);
    let ideal: Vec<String> = t2.members.iter().filter_map(|&i| b.table.ideal_triple(i)).map(|e| triple_name(&b, e)).collect();
    if c.text() {
        c.line(format!("type II: {} of {} elements, {} in the ideal", t2.len(), b.table.len(), ideal.len()));
        for chunk in ideal.chunks(8) {
            c.line(format!("  {}", chunk.join(" ")));
        }
    } else {
        c.kv("size", t2.len());
        c.kv("ideal_members", ideal.len());
        for e in ideal {
            c.kv("member", e);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_depth(c: &mut Ctx, file: &str) -> Result<ExitCode> {
    let b = c.load(file)?;
    let d = green(&b.table).depth();
    let r = green(&rlm(&b.table).table).depth();
    if c.text() {
        c.line(format!("depth {d}, depth(RLM) {r}"));
    } else {
        c.kv("depth", d);
        c.kv("rlm_depth", r);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hull(c: &mut Ctx, file: &str, element: &str) -> Result<ExitCode> {
    let b = c.load(file)?;
    let items: Vec<String> = element.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    let f = Lpf::parse(&items, b.ctx.group(), b.ctx.b_labels())?;
    let inside = in_hull(&b.ctx, &f);
    let partner = link_solve(&b.ctx, &RowMonomial::from_lpf(&f));
    if c.text() {
        c.line(format!("{} {} the translational hull", f.display(b.ctx.group(), b.ctx.b_labels()), if inside { "is in" } else { "is not in" }));
        if let Some(y) = partner {
            let a = b.ctx.a_labels();
            let entries: Vec<String> = y
                .cols
                .iter()
                .enumerate()
                .filter_map(|(j, e)| e.map(|(r, g)| format!("Y({},{})={}", a[r], a[j], b.ctx.group().name(g))))
                .collect();
            c.line(format!("linked partner: {}", if entries.is_empty() { "0".into() } else { entries.join(" ") }));
        }
    } else {
        c.kv("in_hull", inside);
    }
    Ok(if inside { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_eval(c: &mut Ctx, file: &str, start: &str, script: &PathBuf) -> Result<ExitCode> {
    let b = c.load(file)?;
    let e = c.engine(&b);
    let mut p = e.parse_spc(start)?;
    let text = std::fs::read_to_string(script).with_context(|| format!("reading {}", script.display()))?;
    let machine = !c.text();
    if machine {
        c.kv("start", e.show(&p));
    } else {
        c.line(format!("start {}", e.show(&p)));
    }
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let d = e.run_script(&Wff::parse(line)?, &p)?;
        for (s, l) in d.steps.iter().zip(d.render(&e).into_iter().skip(1)) {
            if machine {
                c.kv("step", format!("{} => {}", s.wff, e.show(&s.result)));
            } else {
                c.line(l);
            }
        }
        p = d.chain().last().map(|v| (*v).clone()).unwrap_or(p);
    }
    if machine {
        c.kv("result", e.show(&p));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_flow(c: &mut Ctx, file: &str, flow: &PathBuf) -> Result<ExitCode> {
    let b = c.load(file)?;
    let e = c.engine(&b);
    let text = std::fs::read_to_string(flow).with_context(|| format!("reading {}", flow.display()))?;
    let f = parse_flow(&text, &e)?;
    let rep = verify_flow(&e, &f)?;
    if c.text() {
        for ch in rep.checks.iter().filter(|ch| !ch.ok) {
            let target = ch.target_state.map_or("{}".to_string(), |t| e.show(&f.assignment[t]));
            c.line(format!("fails: ({})F {} = {} is not below {}", f.automaton.states[ch.state], ch.generator, e.show(&ch.image), target));
        }
        for v in &rep.violations {
            c.line(format!("violation: {v}"));
        }
        c.line(format!("{} checks, {}", rep.checks.len(), if rep.passed() { "PASS" } else { "FAIL" }));
    } else {
        c.kv("checks", rep.checks.len());
        c.kv("violations", rep.violations.len());
        c.kv("result", if rep.passed() { "pass" } else { "fail" });
    }
    Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_search_flow(c: &mut Ctx, file: &str, max_states: usize, aperiodic: bool, budget: Option<usize>) -> Result<ExitCode> {
    let b = c.load(file)?;
    let e = c.engine(&b);
    let mut search = FlowSearch { max_states, require_aperiodic: aperiodic, ..FlowSearch::default() };
    if let Some(n) = budget {
        search.combination_budget = n;
    }
    match search_flow(&e, &search, &c.bounds)? {
        Some(f) => {
            if c.text() {
                c.line(flow_to_toml(&f, &e)?.trim_end());
            } else {
                c.kv("found", true);
                c.kv("states", f.automaton.states.len());
                for v in &f.assignment {
                    c.kv("value", e.show(v));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            if c.text() {
                c.line(format!("no flow with at most {max_states} states found (the search is incomplete)"));
            } else {
                c.kv("found", false);
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_contradict(c: &mut Ctx, file: &str) -> Result<ExitCode> {
    let b = c.load(file)?;
    let e = c.engine(&b);
    let d = e.find_contradiction(&c.bounds)?;
    let Some(d) = d else {
        if c.text() {
            c.line(format!("no contradiction within {} states", c.bounds.max_states));
        } else {
            c.kv("contradiction", false);
        }
        return Ok(ExitCode::from(1));
    };
    if c.text() {
        for l in d.render(&e) {
            c.line(l);
        }
        c.line(format!("script: {}", d.script()));
    } else {
        c.kv("contradiction", true);
        c.kv("start", e.show(&d.start));
        c.kv("script", d.script());
        c.kv("replays", d.replay(&e)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(c: &mut Ctx, file: &str, flow: Option<&PathBuf>, search: Option<usize>) -> Result<ExitCode> {
    let b = c.load(file)?;
    let e = c.engine(&b);
    let (quick, _) = assess(&b.ctx, &b.table, &e, &Evidence::default(), &c.axioms)?;
    let mut evidence = Evidence::default();
    if !quick.is_exact() {
        evidence.contradiction = e.find_contradiction(&c.bounds)?;
    }
    if let Some(path) = flow {
        evidence.flow = Some(parse_flow(&std::fs::read_to_string(path)?, &e)?);
    } else if let Some(n) = search {
        if evidence.contradiction.is_none() && !quick.is_exact() {
            evidence.flow = search_flow(&e, &FlowSearch { max_states: n, require_aperiodic: true, ..FlowSearch::default() }, &c.bounds)?;
        }
    }
    let (s, r) = assess(&b.ctx, &b.table, &e, &evidence, &c.axioms)?;
    if c.text() {
        c.line(format!("complexity {s}{}", if s.is_exact() { "" } else { " (indeterminate)" }));
        c.line(format!("RLM complexity {r}"));
        for j in &s.justifications {
            c.line(format!("  {:?} {} by {}: {}", j.side, j.value, j.rule, j.detail));
        }
    } else {
        c.kv("lower", s.lower);
        c.kv("upper", s.upper);
        c.kv("exact", s.is_exact());
        let (lo, hi) = s.deciding_rules();
        c.kv("lower.rules", lo.join(","));
        c.kv("upper.rules", hi.join(","));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_catalog(c: &mut Ctx, action: &CatalogCmd) -> Result<ExitCode> {
    let names: Vec<String> = match action {
        CatalogCmd::List => {
            for n in NAMES {
                c.line(n);
            }
            return Ok(ExitCode::SUCCESS);
        }
        CatalogCmd::Run { all: true, .. } => NAMES.iter().map(|s| s.to_string()).collect(),
        CatalogCmd::Run { name: Some(n), .. } => vec![n.clone()],
        CatalogCmd::Run { .. } => bail!("give an entry name or --all"),
    };
    let opts = RunOptions {
        engine: c.engine,
        bounds: c.bounds.clone(),
        axioms: c.axioms.clone(),
        group: c.group.clone(),
        ..RunOptions::default()
    };
    let mut failed = false;
    for n in names {
        let rep = catalog_run(&n, &opts)?;
        failed |= !rep.passed();
        let text = if c.text() { rep.render_text() } else { rep.render_machine() };
        c.out.push_str(&text);
    }
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> Result<(ExitCode, String)> {
    let axioms = match &cli.axioms {
        Some(path) => Axioms::load(path)?,
        None => Axioms::parse(AXIOMS)?,
    };
    let group = cli.group.as_deref().map(|g| GroupSpec::parse(g).and_then(|s| FiniteGroup::make(&s))).transpose()?;
    let mut engine = EngineConfig::default();
    if let Some(w) = cli.word_bound {
        engine.word_bound = w;
    }
    let mut bounds = SearchBounds::default();
    if let Some(n) = cli.budget {
        bounds.max_states = n;
    }
    let mut c = Ctx { format: cli.format, engine, bounds, axioms, group, out: String::new() };
    let code = match &cli.cmd {
        Cmd::Build { file, emit } => cmd_build(&mut c, file, *emit)?,
        Cmd::Green { file } => cmd_green(&mut c, file)?,
        Cmd::Rlm { file } => cmd_rlm(&mut c, file)?,
        Cmd::Type2 { file } => cmd_type2(&mut c, file)?,
        Cmd::Depth { file } => cmd_depth(&mut c, file)?,
        Cmd::Hull { file, element } => cmd_hull(&mut c, file, element)?,
        Cmd::Eval { file, start, script } => cmd_eval(&mut c, file, start, script)?,
        Cmd::VerifyFlow { file, flow } => cmd_verify_flow(&mut c, file, flow)?,
        Cmd::SearchFlow { file, max_states, aperiodic } => cmd_search_flow(&mut c, file, *max_states, *aperiodic, cli.budget)?,
        Cmd::Contradict { file, bounds, pair_loops } => {
            if let Some(n) = bounds {
                c.bounds.max_states = *n;
            }
            c.bounds.pair_loops |= *pair_loops;
            cmd_contradict(&mut c, file)?
        }
        Cmd::Bounds { file, flow, search } => cmd_bounds(&mut c, file, flow.as_ref(), *search)?,
        Cmd::Catalog { action } => cmd_catalog(&mut c, action)?,
    };
    Ok((code, c.out))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((code, out)) => {
            print!("{out}");
            code
        }
        Err(e) => {
            eprintln!("krlab: {e:#}");
            let format = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Format(_) | Error::Parse { .. })));
            ExitCode::from(if format { 2 } else { 3 })
        }
    }
}
