//! Flow operators as closure operators on pairs of SPCs, evaluated only on the
//! states actually reached.
//!
//! A pair `(l, r)` is stable under a letter `x` when `l·x ≤ r` and `l` is no finer
//! than the pullback of `r` along `x` (on the domain of `l`). Every operator is
//! given by the least stable pair above a starting pair; composite operators close
//! their factors in turn until nothing moves.

use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lpf::Lpf;
use crate::rees::{IdealElement, ReesContext};
use crate::rhodes::{Joiner, Spc};
use crate::semigroup::SemigroupTable;
use crate::wff::Wff;

#[derive(Clone, Debug)]
pub enum Op {
    Identity,
    Map(Rc<Lpf>),
    Concat(Vec<Op>),
    /// Back flow: identity on the left domain of the operator.
    Back(Box<Op>),
    Star(Box<Op>),
    /// `V_k`; level 0 is the identity.
    Vacuum(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Levels of vacuum nesting used when interpreting letters.
    pub vacuum_depth: usize,
    /// Longest word of back flows tried at each vacuum level.
    pub word_bound: usize,
    /// Cap on the rounds of any single fixpoint iteration.
    pub iteration_budget: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { vacuum_depth: 2, word_bound: 2, iteration_budget: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct Letter {
    pub name: String,
    pub map: Rc<Lpf>,
    pub ideal: bool,
}

#[derive(Clone)]
struct Term {
    name: String,
    op: Op,
    ideal: bool,
}

/// Named back-flow words of one vacuum level.
type Words = Rc<Vec<(String, Op)>>;

pub struct Engine {
    group: FiniteGroup,
    labels: Vec<String>,
    nb: usize,
    letters: Vec<Letter>,
    ideal_reps: Vec<Letter>,
    cfg: EngineConfig,
    vac_memo: RefCell<HashMap<(usize, Spc), Spc>>,
    vac_witness: RefCell<HashMap<(usize, Spc), String>>,
    terms: RefCell<Vec<Rc<Vec<Term>>>>,
    words: RefCell<HashMap<usize, Words>>,
}

impl Engine {
    pub fn new(ctx: &ReesContext, table: &SemigroupTable, cfg: EngineConfig) -> Engine {
        let letters = table
            .generators()
            .iter()
            .zip(table.generator_names())
            .map(|(&i, name)| Letter {
                name: name.clone(),
                map: Rc::new(table.element(i).clone()),
                ideal: table.in_ideal(i),
            })
            .collect();
        let ideal_reps = (0..ctx.na())
            .map(|a| {
                let e = IdealElement::Triple { a, g: ctx.group().identity(), b: 0 };
                Letter {
                    name: format!("({},1,{})", ctx.a_labels()[a], ctx.b_labels()[0]),
                    map: Rc::new(ctx.ideal_action(e)),
                    ideal: true,
                }
            })
            .collect();
        Engine {
            group: ctx.group().clone(),
            labels: ctx.b_labels().to_vec(),
            nb: ctx.nb(),
            letters,
            ideal_reps,
            cfg,
            vac_memo: RefCell::new(HashMap::new()),
            vac_witness: RefCell::new(HashMap::new()),
            terms: RefCell::new(Vec::new()),
            words: RefCell::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> EngineConfig {
        self.cfg
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, name: &str) -> Result<&Letter> {
        self.letters.iter().find(|l| l.name == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn show(&self, p: &Spc) -> String {
        p.to_text(&self.group, &self.labels)
    }

    pub fn parse_spc(&self, text: &str) -> Result<Spc> {
        Spc::parse(text, &self.group, &self.labels)
    }

    pub fn point(&self, b: usize) -> Spc {
        Spc::point(b, &self.group)
    }

    // ---- free flow --------------------------------------------------------

    /// Image of `p` along `f`: weights pick up the edge labels, and points that
    /// land together are fused (or contradict).
    pub fn forward(&self, f: &Lpf, p: &Spc) -> Spc {
        let g = &self.group;
        if p.is_contradiction() {
            return Spc::Contradiction;
        }
        let mut j = Joiner::new(g, self.nb);
        for blk in p.blocks() {
            let img: Vec<_> = blk.iter().filter_map(|(b, w)| f.get(b).map(|(h, t)| (t, g.mul(w, h)))).collect();
            j.add_weighted(&img);
        }
        j.finish()
    }

    /// The coarsest SPC on `dom` whose image along `f` lies below `r`.
    fn pullback(&self, f: &Lpf, r: &Spc, dom: &[bool]) -> Spc {
        let g = &self.group;
        let ra = r.assignment(self.nb);
        let mut by_block: Vec<Vec<(usize, crate::group::GroupElem)>> = vec![Vec::new(); r.blocks().len()];
        for b in 0..self.nb {
            if !dom[b] {
                continue;
            }
            if let Some((h, t)) = f.get(b) {
                if let Some((k, v)) = ra[t] {
                    by_block[k].push((b, g.mul(v, g.inv(h))));
                }
            }
        }
        let mut j = Joiner::new(g, self.nb);
        for v in &by_block {
            j.add_weighted(v);
        }
        j.finish()
    }

    /// Plain free flow of a named generator, no vacuum.
    pub fn free_flow(&self, name: &str, p: &Spc) -> Result<Spc> {
        Ok(self.forward(&self.letter(name)?.map, p))
    }

    fn mask(&self, p: &Spc) -> Vec<bool> {
        let mut m = vec![false; self.nb];
        for b in p.domain() {
            m[b] = true;
        }
        m
    }

    fn budget(&self, rounds: &mut usize) -> Result<()> {
        *rounds += 1;
        if *rounds > self.cfg.iteration_budget {
            Err(Error::IterationBudgetExceeded(self.cfg.iteration_budget))
        } else {
            Ok(())
        }
    }

    // ---- closures on pairs ------------------------------------------------

    /// Least pair above `(l, r)` stable under `op`.
    pub fn close(&self, op: &Op, l: Spc, r: Spc) -> Result<(Spc, Spc)> {
        let g = &self.group;
        if l.is_contradiction() || r.is_contradiction() {
            return Ok((Spc::Contradiction, Spc::Contradiction));
        }
        match op {
            Op::Identity => {
                let x = l.join(&r, g);
                Ok((x.clone(), x))
            }
            Op::Vacuum(k) => {
                let x = self.vacuum_at(*k, &l.join(&r, g))?;
                Ok((x.clone(), x))
            }
            Op::Map(f) => {
                let (mut l, mut r) = (l, r);
                let mut rounds = 0;
                loop {
                    self.budget(&mut rounds)?;
                    let r2 = r.join(&self.forward(f, &l), g);
                    if r2.is_contradiction() {
                        return Ok((Spc::Contradiction, Spc::Contradiction));
                    }
                    let l2 = l.join(&self.pullback(f, &r2, &self.mask(&l)), g);
                    if l2.is_contradiction() {
                        return Ok((Spc::Contradiction, Spc::Contradiction));
                    }
                    if l2 == l && r2 == r {
                        return Ok((l, r));
                    }
                    l = l2;
                    r = r2;
                }
            }
            Op::Concat(ops) => {
                if ops.is_empty() {
                    return self.close(&Op::Identity, l, r);
                }
                let mut xs = vec![Spc::bottom(); ops.len() + 1];
                xs[0] = l;
                xs[ops.len()] = r;
                let mut rounds = 0;
                loop {
                    self.budget(&mut rounds)?;
                    let mut changed = false;
                    for (i, op) in ops.iter().enumerate() {
                        let (a, b) = self.close(op, xs[i].clone(), xs[i + 1].clone())?;
                        if a.is_contradiction() {
                            return Ok((Spc::Contradiction, Spc::Contradiction));
                        }
                        if a != xs[i] || b != xs[i + 1] {
                            changed = true;
                            xs[i] = a;
                            xs[i + 1] = b;
                        }
                    }
                    if !changed {
                        let r = xs.pop().unwrap();
                        return Ok((xs.swap_remove(0), r));
                    }
                }
            }
            Op::Back(inner) => {
                let x = self.back(inner, &l.join(&r, g))?;
                Ok((x.clone(), x))
            }
            Op::Star(inner) => {
                let mut x = l.join(&r, g);
                let mut rounds = 0;
                loop {
                    self.budget(&mut rounds)?;
                    let (a, b) = self.close(inner, x.clone(), x.clone())?;
                    let nx = a.join(&b, g);
                    if nx == x || nx.is_contradiction() {
                        return Ok((nx.clone(), nx));
                    }
                    x = nx;
                }
            }
        }
    }

    /// Back flow along `op`: the least left coordinate of a stable pair above `z`.
    pub fn back(&self, op: &Op, z: &Spc) -> Result<Spc> {
        Ok(self.close(op, z.clone(), Spc::bottom())?.0)
    }

    /// Forward flow: right coordinate of the least stable pair above `(p, ⊥)`.
    pub fn apply(&self, op: &Op, p: &Spc) -> Result<Spc> {
        Ok(self.close(op, p.clone(), Spc::bottom())?.1)
    }

    /// The underlying semigroup element of an operator built from letters.
    fn underlying(&self, op: &Op) -> Lpf {
        let g = &self.group;
        match op {
            Op::Map(f) => (**f).clone(),
            Op::Concat(ops) => ops.iter().fold(Lpf::identity(self.nb, g), |acc, o| acc.then(&self.underlying(o), g)),
            _ => Lpf::identity(self.nb, g),
        }
    }

    /// `F^(w+*)`: the idempotent power of the underlying element followed by the
    /// Kleene closure of `F`.
    pub fn loop_op(&self, f: Op) -> Op {
        let e = idempotent_power(&self.underlying(&f), &self.group);
        Op::Concat(vec![Op::Map(Rc::new(e)), Op::Star(Box::new(f))])
    }

    // ---- vacuum -----------------------------------------------------------

    fn conj(&self, k: usize, x: &Letter) -> Op {
        if k == 0 {
            Op::Map(x.map.clone())
        } else {
            Op::Concat(vec![Op::Vacuum(k), Op::Map(x.map.clone()), Op::Vacuum(k)])
        }
    }

    fn level_terms(&self, k: usize) -> Rc<Vec<Term>> {
        if let Some(t) = self.terms.borrow().get(k) {
            return t.clone();
        }
        let have = self.terms.borrow().len();
        for level in have..=k {
            let mut out = Vec::new();
            let plain: Vec<&Letter> = self.letters.iter().filter(|l| !l.ideal).collect();
            for x in &plain {
                out.push(Term { name: x.name.clone(), op: self.conj(level, x), ideal: false });
            }
            for x in &plain {
                let op = self.loop_op(self.conj(level, x));
                out.push(Term { name: format!("{}^(w+*)", x.name), op, ideal: false });
            }
            for x in &self.ideal_reps {
                out.push(Term { name: x.name.clone(), op: Op::Map(x.map.clone()), ideal: true });
            }
            self.terms.borrow_mut().push(Rc::new(out));
        }
        self.terms.borrow()[k].clone()
    }

    /// Words of back flows used by `V_{k+1}`; ideal letters only in last position.
    fn words(&self, k: usize) -> Words {
        if let Some(w) = self.words.borrow().get(&k) {
            return w.clone();
        }
        let terms = self.level_terms(k);
        let mut out: Vec<(String, Vec<usize>)> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..self.cfg.word_bound {
            let mut next = Vec::new();
            for w in &frontier {
                for (i, t) in terms.iter().enumerate() {
                    let mut v = w.clone();
                    v.push(i);
                    if t.ideal {
                        out.push((String::new(), v));
                    } else {
                        out.push((String::new(), v.clone()));
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        let out: Vec<(String, Op)> = out
            .into_iter()
            .map(|(_, v)| {
                let name = v.iter().map(|&i| terms[i].name.as_str()).collect::<Vec<_>>().join(" ");
                let op = if v.len() == 1 {
                    terms[v[0]].op.clone()
                } else {
                    Op::Concat(v.iter().map(|&i| terms[i].op.clone()).collect())
                };
                (name, op)
            })
            .collect();
        let out = Rc::new(out);
        self.words.borrow_mut().insert(k, out.clone());
        out
    }

    /// `V_k(z)`: `z` saturated by back flows along words of `V_{k-1}`-conjugated
    /// letters and their loops. This is a lower approximation of the vacuum.
    pub fn vacuum_at(&self, k: usize, z: &Spc) -> Result<Spc> {
        if k == 0 || z.is_contradiction() {
            return Ok(z.clone());
        }
        if let Some(v) = self.vac_memo.borrow().get(&(k, z.clone())) {
            return Ok(v.clone());
        }
        let words = self.words(k - 1);
        let mut cur = z.clone();
        let mut witness = None;
        let mut rounds = 0;
        loop {
            self.budget(&mut rounds)?;
            let mut changed = false;
            for (name, op) in words.iter() {
                let next = self.back(op, &cur)?;
                // A back flow ending in the contradiction is not used: contradictions
                // are only ever reached by forward evaluation.
                if next != cur && !next.is_contradiction() {
                    witness.get_or_insert_with(|| name.clone());
                    cur = next;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut memo = self.vac_memo.borrow_mut();
        memo.insert((k, z.clone()), cur.clone());
        memo.insert((k, cur.clone()), cur.clone());
        if let Some(w) = witness {
            self.vac_witness.borrow_mut().insert((k, z.clone()), w);
        }
        Ok(cur)
    }

    /// Vacuum at the configured depth.
    pub fn vacuum(&self, z: &Spc) -> Result<Spc> {
        self.vacuum_at(self.cfg.vacuum_depth, z)
    }

    /// The first back-flow word that moved `z` when `V_k(z)` was computed.
    pub fn vacuum_witness(&self, k: usize, z: &Spc) -> Option<String> {
        self.vac_witness.borrow().get(&(k, z.clone())).cloned()
    }

    // ---- formulas ---------------------------------------------------------

    /// The interpretation with vacuum level `d`: letters become `V x V`.
    pub fn interpret(&self, w: &Wff, d: usize) -> Result<Op> {
        Ok(match w {
            Wff::Empty => Op::Vacuum(d),
            Wff::Letter(x) => self.conj(d, self.letter(x)?),
            Wff::Concat(v) => Op::Concat(v.iter().map(|x| self.interpret(x, d)).collect::<Result<_>>()?),
            Wff::Loop(b) => self.loop_op(self.interpret(b, d)?),
        })
    }

    pub fn eval_at(&self, w: &Wff, p: &Spc, d: usize) -> Result<Spc> {
        let op = self.interpret(w, d)?;
        self.apply(&op, p)
    }

    pub fn eval(&self, w: &Wff, p: &Spc) -> Result<Spc> {
        self.eval_at(w, p, self.cfg.vacuum_depth)
    }

    /// Evaluates each factor in turn, logging the intermediate values.
    pub fn run_script(&self, w: &Wff, start: &Spc) -> Result<Derivation> {
        let mut steps = Vec::new();
        let mut cur = start.clone();
        for f in w.factors() {
            let step = self.step(&f, &cur)?;
            cur = step.result.clone();
            steps.push(step);
            if cur.is_contradiction() {
                break;
            }
        }
        Ok(Derivation { start: start.clone(), steps })
    }

    pub fn step(&self, w: &Wff, p: &Spc) -> Result<Step> {
        let raw = self.eval_at(w, p, 0)?;
        let result = self.eval(w, p)?;
        let vacuum = if raw != result && !raw.is_contradiction() {
            let d = self.cfg.vacuum_depth;
            let after = self.vacuum(&raw)?;
            let word = self.vacuum_witness(d, &raw);
            let inner = match word.as_deref().and_then(|w| w.split(' ').next()).map(|x| self.letter(x)) {
                Some(Ok(x)) if !x.ideal && d > 1 => {
                    let image = self.forward(&x.map, &raw);
                    let forced = self.vacuum_at(d - 1, &image)?;
                    (forced != image).then_some((image, forced))
                }
                _ => None,
            };
            (after != raw).then_some(VacuumMerge { before: raw.clone(), after, word, inner })
        } else {
            None
        };
        Ok(Step { wff: w.clone(), raw, result, vacuum })
    }

    // ---- states -----------------------------------------------------------

    /// Formulas tried from every state, in search order.
    pub fn expansions(&self, bounds: &SearchBounds) -> Vec<Wff> {
        let plain: Vec<&Letter> = self.letters.iter().filter(|l| !l.ideal).collect();
        let mut out: Vec<Wff> = plain.iter().map(|l| Wff::letter(&l.name)).collect();
        out.extend(plain.iter().map(|l| Wff::looped(Wff::letter(&l.name))));
        if bounds.pair_loops {
            for x in &plain {
                for y in &plain {
                    if x.name != y.name {
                        out.push(Wff::looped(Wff::concat([Wff::letter(&x.name), Wff::letter(&y.name)])));
                    }
                }
            }
        }
        out
    }

    fn explore(&self, bounds: &SearchBounds, stop_at_contradiction: bool) -> Result<StateSet> {
        let mut set = StateSet { states: Vec::new(), origin: Vec::new(), index: HashMap::new() };
        let mut queue = VecDeque::new();
        for b in 0..self.nb {
            let p = self.point(b);
            if set.insert(p, None) {
                queue.push_back(set.states.len() - 1);
            }
        }
        let exps = self.expansions(bounds);
        while let Some(i) = queue.pop_front() {
            let p = set.states[i].clone();
            if p.is_contradiction() {
                continue;
            }
            for w in &exps {
                let q = self.eval(w, &p)?;
                let is_c = q.is_contradiction();
                if set.insert(q, Some((i, w.clone()))) {
                    if is_c && stop_at_contradiction {
                        return Ok(set);
                    }
                    if set.states.len() > bounds.max_states {
                        return Err(Error::BudgetExceeded(format!("more than {} states", bounds.max_states)));
                    }
                    queue.push_back(set.states.len() - 1);
                }
            }
        }
        Ok(set)
    }

    /// Breadth-first closure of the points under the expansion formulas.
    pub fn states(&self, bounds: &SearchBounds) -> Result<StateSet> {
        self.explore(bounds, false)
    }

    /// The first derivation (in breadth-first order) reaching the contradiction.
    pub fn find_contradiction(&self, bounds: &SearchBounds) -> Result<Option<Derivation>> {
        let set = self.explore(bounds, true)?;
        let Some(&ci) = set.index.get(&Spc::Contradiction) else {
            return Ok(None);
        };
        let mut path = Vec::new();
        let mut cur = ci;
        while let Some((pred, w)) = set.origin[cur].clone() {
            path.push(w);
            cur = pred;
        }
        path.reverse();
        let start = set.states[cur].clone();
        let mut steps = Vec::new();
        let mut p = start.clone();
        for w in path {
            let s = self.step(&w, &p)?;
            p = s.result.clone();
            steps.push(s);
        }
        Ok(Some(Derivation { start, steps }))
    }
}

fn idempotent_power(f: &Lpf, g: &FiniteGroup) -> Lpf {
    let mut p = f.clone();
    loop {
        let sq = p.then(&p, g);
        if sq == p {
            return p;
        }
        // Powers f^(2^k) reach the idempotent power in finitely many squarings.
        p = sq;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_states: usize,
    /// Also try loops of two-letter words.
    pub pair_loops: bool,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_states: 10_000, pair_loops: false }
    }
}

#[derive(Clone, Debug)]
pub struct StateSet {
    pub states: Vec<Spc>,
    /// Predecessor and formula that first produced each state; `None` for points.
    pub origin: Vec<Option<(usize, Wff)>>,
    index: HashMap<Spc, usize>,
}

impl StateSet {
    fn insert(&mut self, p: Spc, origin: Option<(usize, Wff)>) -> bool {
        if self.index.contains_key(&p) {
            return false;
        }
        self.index.insert(p.clone(), self.states.len());
        self.states.push(p);
        self.origin.push(origin);
        true
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, p: &Spc) -> bool {
        self.index.contains_key(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VacuumMerge {
    pub before: Spc,
    pub after: Spc,
    /// Back-flow word that first moved `before`.
    pub word: Option<String>,
    /// When the word starts with a letter: its image of `before` and the vacuum
    /// one level down of that image, which the back flow pulled back.
    pub inner: Option<(Spc, Spc)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub wff: Wff,
    /// Value without any vacuum.
    pub raw: Spc,
    pub result: Spc,
    pub vacuum: Option<VacuumMerge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Spc,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn reaches_contradiction(&self) -> bool {
        self.steps.last().is_some_and(|s| s.result.is_contradiction())
    }

    /// The chain of values: start, then every step result.
    pub fn chain(&self) -> Vec<&Spc> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result)).collect()
    }

    /// The steps as one formula, `;`-separated.
    pub fn script(&self) -> String {
        self.steps.iter().map(|s| s.wff.to_string()).collect::<Vec<_>>().join(" ; ")
    }

    /// Re-evaluates every step and compares with the logged values.
    pub fn replay(&self, engine: &Engine) -> Result<bool> {
        let mut p = self.start.clone();
        for s in &self.steps {
            let again = engine.step(&s.wff, &p)?;
            if again != *s {
                return Ok(false);
            }
            p = again.result;
        }
        Ok(true)
    }

    pub fn render(&self, engine: &Engine) -> Vec<String> {
        let mut out = vec![format!("start {}", engine.show(&self.start))];
        for s in &self.steps {
            let mut line = format!("{} -> {}", s.wff, engine.show(&s.result));
            if let Some(v) = &s.vacuum {
                line.push_str(&format!(
                    "  [vacuum {} => {}{}]",
                    engine.show(&v.before),
                    engine.show(&v.after),
                    v.word.as_ref().map(|w| format!(" by back flow along {w}")).unwrap_or_default()
                ));
                if let Some((a, b)) = &v.inner {
                    line.push_str(&format!(" [since {} => {}]", engine.show(a), engine.show(b)));
                }
            }
            out.push(line);
        }
        out
    }
}
