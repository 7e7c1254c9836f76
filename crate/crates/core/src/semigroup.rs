//! Semigroups of labeled partial functions generated by a finite set of elements.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem};
use crate::lpf::Lpf;
use crate::rees::{IdealElement, ReesContext};

pub const DEFAULT_BUDGET: usize = 200_000;

/// A closed, enumerated semigroup acting on `G × {0..points}` on the right.
#[derive(Clone, Debug)]
pub struct SemigroupTable {
    group: FiniteGroup,
    points: usize,
    elements: Vec<Lpf>,
    index: HashMap<Lpf, usize>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    // right[i * ngens + k] = elements[i] * generator k
    right: Vec<u32>,
    parent: Vec<Option<(u32, u32)>>,
    ideal: Option<Vec<Option<IdealElement>>>,
}

impl SemigroupTable {
    /// Closes `gens` under composition. Element order: generators first (duplicates
    /// collapse onto their first occurrence), then breadth-first discovery order.
    pub fn generate(group: FiniteGroup, points: usize, gens: Vec<(String, Lpf)>, budget: usize) -> Result<Self> {
        let mut elements: Vec<Lpf> = Vec::new();
        let mut index: HashMap<Lpf, usize> = HashMap::new();
        let mut parent = Vec::new();
        let mut generators = Vec::with_capacity(gens.len());
        let mut generator_names = Vec::with_capacity(gens.len());
        for (name, g) in gens {
            if g.size() != points {
                return Err(Error::Format(format!("generator {name} acts on {} points, expected {points}", g.size())));
            }
            let i = *index.entry(g.clone()).or_insert_with(|| {
                elements.push(g);
                parent.push(None);
                elements.len() - 1
            });
            generators.push(i);
            generator_names.push(name);
        }
        if elements.len() > budget {
            return Err(Error::ElementBudgetExceeded(budget));
        }
        let ngens = generators.len();
        let gen_elems: Vec<Lpf> = generators.iter().map(|&i| elements[i].clone()).collect();
        let mut right: Vec<u32> = Vec::new();
        let mut queue: VecDeque<usize> = (0..elements.len()).collect();
        while let Some(i) = queue.pop_front() {
            if right.len() < (i + 1) * ngens {
                right.resize((i + 1) * ngens, u32::MAX);
            }
            for (k, g) in gen_elems.iter().enumerate() {
                let p = elements[i].then(g, &group);
                let j = match index.get(&p) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= budget {
                            return Err(Error::ElementBudgetExceeded(budget));
                        }
                        let j = elements.len();
                        index.insert(p.clone(), j);
                        elements.push(p);
                        parent.push(Some((i as u32, k as u32)));
                        queue.push_back(j);
                        j
                    }
                };
                right[i * ngens + k] = j as u32;
            }
        }
        right.resize(elements.len() * ngens, u32::MAX);
        Ok(SemigroupTable { group, points, elements, index, generators, generator_names, right, parent, ideal: None })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Lpf {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Lpf] {
        &self.elements
    }

    pub fn index_of(&self, f: &Lpf) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name).map(|k| self.generators[k])
    }

    /// `elements[i] * generator k`.
    #[inline]
    pub fn right_by_generator(&self, i: usize, k: usize) -> usize {
        self.right[i * self.generators.len() + k] as usize
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i].then(&self.elements[j], &self.group);
        self.index[&p]
    }

    /// A shortest-discovery word for element `i`, as generator positions.
    pub fn word(&self, i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        let mut cur = i;
        loop {
            match self.parent[cur] {
                Some((p, k)) => {
                    w.push(k as usize);
                    cur = p as usize;
                }
                None => {
                    let k = self.generators.iter().position(|&g| g == cur).expect("root is a generator");
                    w.push(k);
                    break;
                }
            }
        }
        w.reverse();
        w
    }

    pub fn is_idempotent(&self, i: usize) -> bool {
        self.mul(i, i) == i
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_idempotent(i)).collect()
    }

    /// Marks which elements belong to the 0-minimal ideal `M⁰(G,A,B,C)`.
    pub fn attach_ideal(&mut self, ctx: &ReesContext) {
        let mut marks = vec![None; self.len()];
        if let Some(z) = self.index_of(&Lpf::empty(self.points)) {
            marks[z] = Some(IdealElement::Zero);
        }
        for t in ctx.triples() {
            if let Some(i) = self.index_of(&ctx.ideal_action(t)) {
                marks[i] = Some(t);
            }
        }
        self.ideal = Some(marks);
    }

    pub(crate) fn set_ideal_marks(&mut self, marks: Vec<Option<IdealElement>>) {
        self.ideal = Some(marks);
    }

    pub fn has_ideal(&self) -> bool {
        self.ideal.is_some()
    }

    pub fn in_ideal(&self, i: usize) -> bool {
        self.ideal.as_ref().is_some_and(|m| m[i].is_some())
    }

    pub fn ideal_triple(&self, i: usize) -> Option<IdealElement> {
        self.ideal.as_ref().and_then(|m| m[i])
    }

    pub fn ideal_index(&self, e: IdealElement, ctx: &ReesContext) -> Option<usize> {
        self.index_of(&ctx.ideal_action(e))
    }

    pub fn ideal_members(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.in_ideal(i)).collect()
    }

    /// The zero (empty function), if present.
    pub fn zero(&self) -> Option<usize> {
        self.index_of(&Lpf::empty(self.points))
    }

    /// Closure of `seed` under multiplication inside this table.
    pub fn closure_of(&self, seed: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut member = vec![false; self.len()];
        let mut list = Vec::new();
        let mut queue = VecDeque::new();
        for s in seed {
            if !member[s] {
                member[s] = true;
                list.push(s);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let snapshot = list.len();
            for k in 0..snapshot {
                let y = list[k];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if !member[p] {
                        member[p] = true;
                        list.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        list.sort_unstable();
        list
    }

    /// Builds a standalone table from a subset that is closed under multiplication.
    pub fn restrict(&self, members: &[usize]) -> SemigroupTable {
        let gens = members
            .iter()
            .map(|&i| (format!("e{i}"), self.elements[i].clone()))
            .collect();
        let mut t = SemigroupTable::generate(self.group.clone(), self.points, gens, usize::MAX)
            .expect("closed subset");
        if let Some(m) = &self.ideal {
            let marks = (0..t.len()).map(|j| m[self.index[t.element(j)]]).collect();
            t.ideal = Some(marks);
        }
        t
    }
}

/// Generators of `S ⊆ Ω(I(S))`: the ideal (if requested) then the extra elements.
pub fn generate(
    ctx: &ReesContext,
    extras: &[(String, Lpf)],
    include_ideal: bool,
    budget: usize,
) -> Result<SemigroupTable> {
    let mut gens = Vec::new();
    if include_ideal {
        let (ga, gb) = (ctx.a_labels(), ctx.b_labels());
        for t in ctx.triples() {
            if let IdealElement::Triple { a, g, b } = t {
                let name = format!("({},{},{})", ga[a], ctx.group().name(g), gb[b]);
                gens.push((name, ctx.ideal_action(t)));
            }
        }
        gens.push(("0".to_string(), Lpf::empty(ctx.nb())));
    }
    gens.extend(extras.iter().cloned());
    let mut t = SemigroupTable::generate(ctx.group().clone(), ctx.nb(), gens, budget)?;
    t.attach_ideal(ctx);
    Ok(t)
}

/// Right letter mapping image: forget weights, keep the faithful action on `B`.
pub struct Rlm {
    pub table: SemigroupTable,
    /// quotient[i] is the image of element i.
    pub quotient: Vec<usize>,
}

pub fn rlm(table: &SemigroupTable) -> Rlm {
    let trivial = FiniteGroup::trivial();
    let id = trivial.identity();
    let forget = |f: &Lpf| f.map_weights(|_| id);
    let gens = table
        .generators()
        .iter()
        .zip(table.generator_names())
        .map(|(&i, n)| (n.clone(), forget(table.element(i))))
        .collect();
    let mut image = SemigroupTable::generate(trivial, table.points(), gens, usize::MAX)
        .expect("image of a finite semigroup is finite");
    let quotient: Vec<usize> = table
        .elements()
        .iter()
        .map(|f| image.index_of(&forget(f)).expect("image element"))
        .collect();
    if table.has_ideal() {
        let mut marks = vec![None; image.len()];
        for (i, &q) in quotient.iter().enumerate() {
            if let Some(t) = table.ideal_triple(i) {
                marks[q] = Some(match t {
                    IdealElement::Triple { a, b, .. } => IdealElement::Triple { a, g: id, b },
                    IdealElement::Zero => IdealElement::Zero,
                });
            }
        }
        image.set_ideal_marks(marks);
    }
    Rlm { table: image, quotient }
}

/// A subset of a table's elements that is closed under multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsemigroup {
    pub members: Vec<usize>,
}

impl Subsemigroup {
    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn idempotent_generated(table: &SemigroupTable) -> Subsemigroup {
    Subsemigroup { members: table.closure_of(table.idempotents()) }
}

/// Least subsemigroup containing the idempotents and closed under weak
/// conjugation: `xyx = x` implies `x t y, y t x ∈ T` for all `t ∈ T`.
pub fn type_ii(table: &SemigroupTable) -> Subsemigroup {
    let n = table.len();
    // Weak-conjugation pairs are fixed by the table; collect them once, grouped by x.
    let mut pairs: Vec<(usize, Vec<usize>)> = Vec::new();
    for x in 0..n {
        let mut ys = Vec::new();
        for y in 0..n {
            let xy = table.mul(x, y);
            if table.mul(xy, x) == x {
                ys.push(y);
            }
        }
        if !ys.is_empty() {
            pairs.push((x, ys));
        }
    }
    let mut member = vec![false; n];
    let mut list: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    let push = |p: usize, member: &mut Vec<bool>, list: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
        if !member[p] {
            member[p] = true;
            list.push(p);
            queue.push_back(p);
        }
    };
    for e in table.idempotents() {
        push(e, &mut member, &mut list, &mut queue);
    }
    while let Some(t) = queue.pop_front() {
        let snapshot = list.len();
        for k in 0..snapshot {
            let u = list[k];
            push(table.mul(t, u), &mut member, &mut list, &mut queue);
            push(table.mul(u, t), &mut member, &mut list, &mut queue);
        }
        for (x, ys) in &pairs {
            let xt = table.mul(*x, t);
            for &y in ys {
                push(table.mul(xt, y), &mut member, &mut list, &mut queue);
                let yt = table.mul(y, t);
                push(table.mul(yt, *x), &mut member, &mut list, &mut queue);
            }
        }
    }
    list.sort_unstable();
    Subsemigroup { members: list }
}

/// `H ×ᵣ S`: the group becomes `H × G`, elements `(h, s)` act by `b → (h, g) b'`
/// for each edge `b → g b'` of `s`, and all `(h, 0)` collapse to one zero.
pub fn reduced_product(h: &FiniteGroup, ctx: &ReesContext, table: &SemigroupTable) -> Result<(ReesContext, SemigroupTable)> {
    let g = ctx.group();
    let (hg, lift): (FiniteGroup, Box<dyn Fn(GroupElem, GroupElem) -> GroupElem>) = if g.is_trivial() {
        (h.clone(), Box::new(|hh: GroupElem, _| hh))
    } else {
        let prod = h.direct_product(g);
        let m = g.order();
        (prod, Box::new(move |hh: GroupElem, gg: GroupElem| GroupElem((hh.index() * m + gg.index()) as u16)))
    };
    let one_h = h.identity();
    let new_ctx = ctx.relift(hg.clone(), |x| lift(one_h, x));
    let mut gens: Vec<(String, Lpf)> = Vec::new();
    for (&i, name) in table.generators().iter().zip(table.generator_names()) {
        let f = table.element(i);
        for hh in h.elements() {
            let lifted = f.map_weights(|w| lift(hh, w));
            let label = if hh == one_h { name.clone() } else { format!("({},{})", h.name(hh), name) };
            gens.push((label, lifted));
        }
    }
    let mut t = SemigroupTable::generate(hg, table.points(), gens, DEFAULT_BUDGET.max(table.len() * h.order() + 1))?;
    t.attach_ideal(&new_ctx);
    Ok((new_ctx, t))
}
