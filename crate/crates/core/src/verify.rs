//! Automata, flow certificates and their verification, and a bounded search for
//! flows over `RZ(n)¹`.

use std::collections::{HashMap, HashSet};

use crate::engine::{Engine, SearchBounds};
use crate::error::{Error, Result};
use crate::green::is_aperiodic;
use crate::group::FiniteGroup;
use crate::lpf::Lpf;
use crate::rees::ReesContext;
use crate::rhodes::Spc;
use crate::semigroup::{type_ii, SemigroupTable};

/// A deterministic partial automaton; `delta[letter][state]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub states: Vec<String>,
    pub letters: Vec<String>,
    pub delta: Vec<Vec<Option<usize>>>,
}

impl Automaton {
    pub fn new(states: Vec<String>, letters: Vec<String>) -> Automaton {
        let delta = vec![vec![None; states.len()]; letters.len()];
        Automaton { states, letters, delta }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|s| s == name)
    }

    /// Records `q --x--> q'`; a second, different target is an error.
    pub fn set(&mut self, q: usize, x: usize, t: usize) -> Result<()> {
        match self.delta[x][q] {
            Some(old) if old != t => Err(Error::Format(format!(
                "two transitions for ({}, {})",
                self.states[q], self.letters[x]
            ))),
            _ => {
                self.delta[x][q] = Some(t);
                Ok(())
            }
        }
    }

    pub fn step(&self, q: usize, x: usize) -> Option<usize> {
        self.delta[x][q]
    }

    /// Transitions in the `q --x--> q'` syntax.
    pub fn transitions(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (x, row) in self.delta.iter().enumerate() {
            for (q, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    out.push(format!("{} --{}--> {}", self.states[q], self.letters[x], self.states[*t]));
                }
            }
        }
        out
    }
}

/// `RZ(n)¹` on states `1..n`: letter `id` and the constants `c1..cn`.
pub fn rz(n: usize) -> Automaton {
    let states: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut letters = vec!["id".to_string()];
    letters.extend((1..=n).map(|i| format!("c{i}")));
    let mut a = Automaton::new(states, letters);
    for q in 0..n {
        a.delta[0][q] = Some(q);
        for c in 0..n {
            a.delta[c + 1][q] = Some(c);
        }
    }
    a
}

/// The transformation semigroup generated by the letters of `a`.
pub fn ts_of(a: &Automaton) -> Result<SemigroupTable> {
    let g = FiniteGroup::trivial();
    let gens = a.letters.iter().zip(&a.delta).map(|(x, row)| (x.clone(), Lpf::from_map(row, &g))).collect();
    SemigroupTable::generate(g, a.states.len(), gens, 100_000)
}

/// An automaton, a covering of the generators by its letters and a state
/// assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowAssignment {
    pub automaton: Automaton,
    /// `(letter, pattern)` pairs, tried in order. A pattern is a generator name,
    /// a glob such as `(*,*,1')` over ideal generators, `ideal` or `*`.
    pub covering: Vec<(String, String)>,
    pub assignment: Vec<Spc>,
}

fn glob(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti, mut star, mut mark) = (0, 0, None, 0);
    while ti < t.len() {
        if pi < p.len() && (p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some(pi);
            mark = ti;
            pi += 1;
        } else if let Some(s) = star {
            pi = s + 1;
            mark += 1;
            ti = mark;
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

impl FlowAssignment {
    /// Letter covering a generator: exact names first, then globs, then
    /// `ideal`, then `*`.
    pub fn cover_of(&self, name: &str, ideal: bool) -> Option<usize> {
        let find = |pred: &dyn Fn(&str) -> bool| {
            self.covering.iter().find(|(_, p)| pred(p)).and_then(|(l, _)| self.automaton.letter_index(l))
        };
        find(&|p| p == name)
            .or_else(|| find(&|p| p.contains('*') && p != "*" && glob(p, name)))
            .or_else(|| if ideal { find(&|p| p == "ideal") } else { None })
            .or_else(|| find(&|p| p == "*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Uncovered { generator: String },
    Coverage { point: String },
    NotBelow { state: String, generator: String, image: String, target: String },
    Contradiction { state: String, generator: String },
    NotInjective { state: String, generator: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Uncovered { generator } => write!(f, "generator {generator} is not covered"),
            Violation::Coverage { point } => write!(f, "point {point} lies below no state value"),
            Violation::NotBelow { state, generator, image, target } => {
                write!(f, "({state}, {generator}): image {image} is not below {target}")
            }
            Violation::Contradiction { state, generator } => write!(f, "({state}, {generator}): image is the contradiction"),
            Violation::NotInjective { state, generator } => {
                write!(f, "({state}, {generator}): two blocks land in one block")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub state: usize,
    pub generator: String,
    pub image: Spc,
    pub target_state: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowReport {
    pub checks: Vec<CheckLine>,
    pub violations: Vec<Violation>,
}

impl FlowReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Why `image -> target` fails, if it does: contradiction, order, or two source
/// blocks sharing a target block.
fn edge_problem(engine: &Engine, f: &Lpf, source: &Spc, target: &Spc) -> Option<EdgeFault> {
    let image = engine.forward(f, source);
    if image.is_contradiction() {
        return Some(EdgeFault::Contradiction);
    }
    if !image.leq(target, engine.group()) {
        return Some(EdgeFault::NotBelow(image));
    }
    let n = engine.labels().len();
    let ta = target.assignment(n);
    let mut seen: Vec<Option<usize>> = vec![None; target.blocks().len()];
    for (k, blk) in source.blocks().iter().enumerate() {
        if let Some((b, _)) = blk.iter().find(|(b, _)| f.get(*b).is_some()) {
            let t = f.get(b).unwrap().1;
            let tb = ta[t].expect("image lies below target").0;
            match seen[tb] {
                Some(other) if other != k => return Some(EdgeFault::NotInjective),
                _ => seen[tb] = Some(k),
            }
        }
    }
    None
}

enum EdgeFault {
    Contradiction,
    NotBelow(Spc),
    NotInjective,
}

/// Checks coverage of points, `(qF)x ≤ (qx)F` with plain free flows (undefined
/// transitions go to a sink valued at the bottom), that no image is the
/// contradiction, and that distinct blocks of `qF` land in distinct blocks.
pub fn verify_flow(engine: &Engine, flow: &FlowAssignment) -> Result<FlowReport> {
    let a = &flow.automaton;
    if flow.assignment.len() != a.states.len() {
        return Err(Error::Format("assignment does not cover every state".into()));
    }
    if let Some(q) = flow.assignment.iter().position(Spc::is_contradiction) {
        return Err(Error::Format(format!("state {} is assigned the contradiction", a.states[q])));
    }
    let mut violations = Vec::new();
    let mut checks = Vec::new();
    let g = engine.group();
    for b in 0..engine.labels().len() {
        let p = engine.point(b);
        if !flow.assignment.iter().any(|v| p.leq(v, g)) {
            violations.push(Violation::Coverage { point: engine.labels()[b].clone() });
        }
    }
    let bottom = Spc::bottom();
    for letter in engine.letters() {
        let Some(x) = flow.cover_of(&letter.name, letter.ideal) else {
            violations.push(Violation::Uncovered { generator: letter.name.clone() });
            continue;
        };
        for (q, value) in flow.assignment.iter().enumerate() {
            let tq = a.step(q, x);
            let target = tq.map_or(&bottom, |t| &flow.assignment[t]);
            let fault = edge_problem(engine, &letter.map, value, target);
            let image = engine.forward(&letter.map, value);
            checks.push(CheckLine {
                state: q,
                generator: letter.name.clone(),
                image: image.clone(),
                target_state: tq,
                ok: fault.is_none(),
            });
            let state = a.states[q].clone();
            let generator = letter.name.clone();
            match fault {
                None => {}
                Some(EdgeFault::Contradiction) => violations.push(Violation::Contradiction { state, generator }),
                Some(EdgeFault::NotBelow(img)) => violations.push(Violation::NotBelow {
                    state,
                    generator,
                    image: engine.show(&img),
                    target: engine.show(target),
                }),
                Some(EdgeFault::NotInjective) => violations.push(Violation::NotInjective { state, generator }),
            }
        }
    }
    Ok(FlowReport { checks, violations })
}

/// Candidate values for flow search: the non-trivial reachable states, closed
/// under forward images by non-ideal letters and under joins, each result
/// normalized by the vacuum. Values whose normalization is the contradiction
/// are dropped. Closure stops once `cap` values are known.
pub fn candidate_values(engine: &Engine, bounds: &SearchBounds, cap: usize) -> Result<Vec<Spc>> {
    let set = engine.states(bounds)?;
    let mut pool: Vec<Spc> = Vec::new();
    let mut seen: HashSet<Spc> = HashSet::new();
    let mut admit = |v: Spc, pool: &mut Vec<Spc>| {
        if !v.is_contradiction() && !v.is_bottom() && seen.insert(v.clone()) {
            pool.push(v);
        }
    };
    for s in set.states {
        admit(s, &mut pool);
    }
    let g = engine.group();
    let all = (0..engine.labels().len()).fold(Spc::bottom(), |acc, b| acc.join(&engine.point(b), g));
    admit(engine.vacuum(&all)?, &mut pool);
    let mut done = 0;
    while done < pool.len() && pool.len() < cap {
        let u = pool[done].clone();
        for letter in engine.letters().iter().filter(|l| !l.ideal) {
            let img = engine.forward(&letter.map, &u);
            if !img.is_contradiction() {
                admit(engine.vacuum(&img)?, &mut pool);
            }
        }
        for k in 0..=done {
            let j = u.join(&pool[k], g);
            if !j.is_contradiction() {
                admit(engine.vacuum(&j)?, &mut pool);
            }
        }
        done += 1;
    }
    pool.truncate(cap);
    // Large, coarse values first: they are the likeliest absorbing states.
    pool.sort_by_key(|v| (std::cmp::Reverse(v.domain().len()), v.blocks().len()));
    Ok(pool)
}

/// Limits for [`search_flow`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowSearch {
    pub max_states: usize,
    pub require_aperiodic: bool,
    /// Size limit of the candidate value pool.
    pub pool_cap: usize,
    /// Number of value combinations tried before giving up with an error.
    pub combination_budget: usize,
}

impl Default for FlowSearch {
    fn default() -> Self {
        FlowSearch { max_states: 3, require_aperiodic: true, pool_cap: 200, combination_budget: 5_000_000 }
    }
}

/// Looks for a flow over `RZ(n)¹`, `n ≤ max_states`, with values among
/// [`candidate_values`]. Once values are fixed every generator is covered
/// independently, by the identity if possible and otherwise by a constant.
pub fn search_flow(engine: &Engine, opts: &FlowSearch, bounds: &SearchBounds) -> Result<Option<FlowAssignment>> {
    let FlowSearch { max_states, require_aperiodic, pool_cap, combination_budget } = *opts;
    let values = candidate_values(engine, bounds, pool_cap)?;
    let g = engine.group();
    let nb = engine.labels().len();
    let letters = engine.letters();
    let mut cache: HashMap<(usize, usize, usize), bool> = HashMap::new();
    let mut ok = |x: usize, u: usize, v: usize| -> bool {
        *cache
            .entry((x, u, v))
            .or_insert_with(|| edge_problem(engine, &letters[x].map, &values[u], &values[v]).is_none())
    };
    let mut tried = 0usize;
    for n in 1..=max_states.min(values.len()) {
        let automaton = rz(n);
        if require_aperiodic && !is_aperiodic(&ts_of(&automaton)?) {
            continue;
        }
        let mut combo: Vec<usize> = (0..n).collect();
        loop {
            tried += 1;
            if tried > combination_budget {
                return Err(Error::BudgetExceeded(format!("more than {combination_budget} candidate assignments")));
            }
            let covered = (0..nb).all(|b| {
                let p = Spc::point(b, g);
                combo.iter().any(|&c| p.leq(&values[c], g))
            });
            if covered {
                let mut covering = Vec::new();
                let mut all = true;
                for (x, letter) in letters.iter().enumerate() {
                    let choice = if combo.iter().all(|&u| ok(x, u, u)) {
                        Some("id".to_string())
                    } else {
                        (0..n).find(|&j| combo.iter().all(|&u| ok(x, u, combo[j]))).map(|j| format!("c{}", j + 1))
                    };
                    match choice {
                        Some(l) => covering.push((l, letter.name.clone())),
                        None => {
                            all = false;
                            break;
                        }
                    }
                }
                if all {
                    let flow = FlowAssignment {
                        automaton: automaton.clone(),
                        covering,
                        assignment: combo.iter().map(|&c| values[c].clone()).collect(),
                    };
                    debug_assert!(verify_flow(engine, &flow)?.passed());
                    return Ok(Some(flow));
                }
            }
            if !next_combination(&mut combo, values.len()) {
                break;
            }
        }
    }
    Ok(None)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A one-point flow exists iff `S_II ∩ I(S)` is aperiodic; for a Rees ideal this
/// means every member `(a, g, b)` with `C(b, a) ≠ 0` is idempotent.
pub fn one_point_flow_test(ctx: &ReesContext, table: &SemigroupTable) -> bool {
    let t2 = type_ii(table);
    let g = ctx.group();
    t2.members.iter().all(|&i| match table.ideal_triple(i) {
        Some(crate::rees::IdealElement::Triple { a, g: h, b }) => match ctx.c(b, a) {
            Some(c) => g.mul(h, c) == g.identity(),
            None => true,
        },
        _ => true,
    })
}

/// The trivial automaton: one state, one letter acting as the identity.
pub fn trivial_automaton() -> Automaton {
    let mut a = Automaton::new(vec!["1".into()], vec!["id".into()]);
    a.delta[0][0] = Some(0);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rz_shapes() {
        let t = ts_of(&rz(2)).unwrap();
        assert_eq!(t.len(), 3);
        assert!(is_aperiodic(&t));
        assert_eq!(ts_of(&rz(1)).unwrap().len(), 1);
    }

    #[test]
    fn permutation_automaton_is_cyclic() {
        let mut a = Automaton::new((0..4).map(|i| i.to_string()).collect(), vec!["t".into()]);
        for q in 0..4 {
            a.set(q, 0, (q + 1) % 4).unwrap();
        }
        let t = ts_of(&a).unwrap();
        assert_eq!(t.len(), 4);
        assert!(!is_aperiodic(&t));
    }

    #[test]
    fn globs() {
        assert!(glob("(*,*,1')", "(a2,-1,1')"));
        assert!(!glob("(*,*,1')", "(a2,-1,1)"));
        assert!(glob("*", "anything"));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![2, 3]);
    }
}
