//! Row/column-monomial matrices, linked pairs `CY = XC`, and fiber graphs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem, ZeroOrElement};
use crate::lpf::Lpf;
use crate::rees::ReesContext;
use crate::semigroup::SemigroupTable;

/// `|B| × |B|` matrix with at most one non-zero entry per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RowMonomial {
    pub rows: Vec<Option<(usize, GroupElem)>>,
}

/// `|A| × |A|` matrix with at most one non-zero entry per column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColMonomial {
    pub cols: Vec<Option<(usize, GroupElem)>>,
}

impl RowMonomial {
    pub fn from_lpf(f: &Lpf) -> RowMonomial {
        RowMonomial { rows: (0..f.size()).map(|b| f.get(b).map(|(g, t)| (t, g))).collect() }
    }

    pub fn to_lpf(&self) -> Lpf {
        let mut f = Lpf::empty(self.rows.len());
        for (b, e) in self.rows.iter().enumerate() {
            f.set(b, e.map(|(t, g)| (g, t)));
        }
        f
    }

    pub fn entry(&self, i: usize, j: usize) -> ZeroOrElement {
        match self.rows[i] {
            Some((c, g)) if c == j => Some(g),
            _ => None,
        }
    }

    pub fn mul(&self, other: &RowMonomial, group: &FiniteGroup) -> RowMonomial {
        RowMonomial {
            rows: self
                .rows
                .iter()
                .map(|e| {
                    let (j, g) = (*e)?;
                    let (k, h) = other.rows[j]?;
                    Some((k, group.mul(g, h)))
                })
                .collect(),
        }
    }
}

impl ColMonomial {
    pub fn entry(&self, i: usize, j: usize) -> ZeroOrElement {
        match self.cols[j] {
            Some((r, g)) if r == i => Some(g),
            _ => None,
        }
    }
}

/// `(XC)(b, a)`.
fn xc(ctx: &ReesContext, x: &RowMonomial, b: usize, a: usize) -> ZeroOrElement {
    let (t, g) = x.rows[b]?;
    ctx.group().mul0(Some(g), ctx.c(t, a))
}

/// All candidate entries for column `a` of `Y` that satisfy the column equation.
fn column_solutions(ctx: &ReesContext, x: &RowMonomial, a: usize) -> Vec<Option<(usize, GroupElem)>> {
    let nb = ctx.nb();
    let target: Vec<ZeroOrElement> = (0..nb).map(|b| xc(ctx, x, b, a)).collect();
    let mut out = Vec::new();
    if target.iter().all(Option::is_none) {
        out.push(None);
    }
    let group = ctx.group();
    // The first non-zero target row pins the weight for each candidate row a'.
    let Some(pivot) = target.iter().position(Option::is_some) else { return out };
    for ap in 0..ctx.na() {
        let Some(c) = ctx.c(pivot, ap) else { continue };
        let y = group.mul(group.inv(c), target[pivot].unwrap());
        if (0..nb).all(|b| group.mul0(ctx.c(b, ap), Some(y)) == target[b]) {
            out.push(Some((ap, y)));
        }
    }
    out
}

/// The unique `Y` with `CY = XC`, if any.
pub fn link_solve(ctx: &ReesContext, x: &RowMonomial) -> Option<ColMonomial> {
    let mut cols = Vec::with_capacity(ctx.na());
    for a in 0..ctx.na() {
        let sols = column_solutions(ctx, x, a);
        cols.push(*sols.first()?);
    }
    let y = ColMonomial { cols };
    debug_assert!(verify_link(ctx, x, &y));
    Some(y)
}

/// Every `Y` solving `CY = XC`, counted column by column (the product of the
/// returned lengths is the number of solutions).
pub fn link_solution_counts(ctx: &ReesContext, x: &RowMonomial) -> Vec<usize> {
    (0..ctx.na()).map(|a| column_solutions(ctx, x, a).len()).collect()
}

/// Entry-by-entry check of `CY = XC`.
pub fn verify_link(ctx: &ReesContext, x: &RowMonomial, y: &ColMonomial) -> bool {
    let group = ctx.group();
    (0..ctx.nb()).all(|b| {
        (0..ctx.na()).all(|a| {
            let cy = y.cols[a].and_then(|(ap, g)| group.mul0(ctx.c(b, ap), Some(g)));
            cy == xc(ctx, x, b, a)
        })
    })
}

pub fn in_hull(ctx: &ReesContext, f: &Lpf) -> bool {
    link_solve(ctx, &RowMonomial::from_lpf(f)).is_some()
}

/// Continuity on the `n`-cycle: preimages of vertices and edges are empty,
/// a vertex, or an edge.
pub fn cycle_continuity(n: usize, f: &[Option<usize>]) -> bool {
    assert!(n >= 3 && f.len() == n);
    let is_edge = |u: usize, v: usize| (u + 1) % n == v || (v + 1) % n == u;
    let ok = |pre: &[usize]| match pre {
        [] | [_] => true,
        [u, v] => is_edge(*u, *v),
        _ => false,
    };
    for v in 0..n {
        let w = (v + 1) % n;
        let pv: Vec<usize> = (0..n).filter(|&i| f[i] == Some(v)).collect();
        let pe: Vec<usize> = (0..n).filter(|&i| f[i] == Some(v) || f[i] == Some(w)).collect();
        if !ok(&pv) || !ok(&pe) {
            return false;
        }
    }
    true
}

/// The `2k × k` matrix `M_k` (rows `a_1..a_k` cycled pairs, then `I_k`), printed
/// orientation `A × B`.
pub fn make_mk(k: usize) -> Vec<Vec<bool>> {
    let mut m = Vec::with_capacity(2 * k);
    for i in 0..k {
        let mut row = vec![false; k];
        row[i] = true;
        row[(i + 1) % k] = true;
        m.push(row);
    }
    for i in 0..k {
        let mut row = vec![false; k];
        row[i] = true;
        m.push(row);
    }
    m
}

/// Row labels `a1..ak, a1'..ak'` of `M_k`.
pub fn mk_row_labels(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("a{i}")).chain((1..=k).map(|i| format!("a{i}'"))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberGraph {
    /// Points `(g, b)` indexed as `b * |G| + g`.
    pub vertices: Vec<(GroupElem, usize)>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl FiberGraph {
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Connected components, each sorted, in order of least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                for w in self.neighbours(comp[k]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True iff the component is a simple cycle of the given length.
    pub fn is_cycle(&self, comp: &[usize]) -> bool {
        comp.len() >= 3
            && comp.iter().all(|&v| self.neighbours(v).len() == 2)
            && self.edges.iter().filter(|(a, _)| comp.contains(a)).count() == comp.len()
    }
}

fn point_id(group: &FiniteGroup, g: GroupElem, b: usize) -> usize {
    b * group.order() + g.index()
}

/// For each element and point, preimage sizes; returns (max fiber, 2-fibers).
fn fibers(table: &SemigroupTable) -> (usize, BTreeSet<(usize, usize)>) {
    let group = table.group();
    let npts = group.order() * table.points();
    let mut max = 0;
    let mut edges = BTreeSet::new();
    let mut pre: Vec<Vec<usize>> = vec![Vec::new(); npts];
    for f in table.elements() {
        pre.iter_mut().for_each(Vec::clear);
        for b in 0..table.points() {
            for g in group.elements() {
                if let Some((h, t)) = f.act(group, g, b) {
                    pre[point_id(group, h, t)].push(point_id(group, g, b));
                }
            }
        }
        for p in &pre {
            max = max.max(p.len());
            if let [u, v] = p[..] {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    (max, edges)
}

pub fn fiber_graph(table: &SemigroupTable) -> FiberGraph {
    let group = table.group();
    let mut vertices = Vec::new();
    for b in 0..table.points() {
        for g in group.elements() {
            vertices.push((g, b));
        }
    }
    FiberGraph { vertices, edges: fibers(table).1 }
}

/// Largest fiber over all elements and points of `G × B`.
pub fn degree(table: &SemigroupTable) -> usize {
    fibers(table).0
}

/// All independent sets, lexicographic order on sorted vertex lists.
pub fn anticliques(graph: &FiberGraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = graph.vertices.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| graph.edges.contains(&(u.min(v), u.max(v)))).collect())
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        start: usize,
        n: usize,
        adj: &[Vec<bool>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::CapExceeded(cap));
        }
        out.push(cur.clone());
        for v in start..n {
            if cur.iter().all(|&u| !adj[u][v]) {
                cur.push(v);
                rec(v + 1, n, adj, cur, out, cap)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(0, n, &adj, &mut cur, &mut out, cap)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rees::make_rees;

    fn mk_ctx(k: usize, group: FiniteGroup) -> ReesContext {
        let one = group.identity();
        let m = make_mk(k)
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.then_some(one)).collect())
            .collect();
        let b = (1..=k).map(|i| i.to_string()).collect();
        make_rees(group, mk_row_labels(k), b, m, true).unwrap()
    }

    fn all_partial_maps(n: usize) -> Vec<Vec<Option<usize>>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Option<usize>>| {
                    (0..=n).map(move |t| {
                        let mut w = v.clone();
                        w.push((t < n).then_some(t));
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn identity_links_with_identity() {
        let ctx = mk_ctx(4, FiniteGroup::cyclic(2).unwrap());
        let id = Lpf::identity(4, ctx.group());
        let y = link_solve(&ctx, &RowMonomial::from_lpf(&id)).unwrap();
        for (a, e) in y.cols.iter().enumerate() {
            assert_eq!(*e, Some((a, ctx.group().identity())));
        }
    }

    #[test]
    fn continuity_agrees_with_solver_on_cycles() {
        for n in [4, 5] {
            let ctx = mk_ctx(n, FiniteGroup::trivial());
            for f in all_partial_maps(n) {
                let lpf = Lpf::from_map(&f, ctx.group());
                assert_eq!(cycle_continuity(n, &f), in_hull(&ctx, &lpf), "n={n} f={f:?}");
            }
        }
    }

    #[test]
    fn folding_non_adjacent_vertices_is_not_in_hull() {
        let ctx = mk_ctx(4, FiniteGroup::trivial());
        let f = [Some(0), None, Some(0), None];
        assert!(!cycle_continuity(4, &f));
        assert!(!in_hull(&ctx, &Lpf::from_map(&f, ctx.group())));
        assert!(in_hull(&ctx, &Lpf::empty(4)));
    }

    #[test]
    fn anticliques_of_small_graphs() {
        let cycle = FiberGraph {
            vertices: (0..4).map(|b| (GroupElem(0), b)).collect(),
            edges: [(0, 1), (1, 2), (2, 3), (0, 3)].into_iter().collect(),
        };
        let sets = anticliques(&cycle, 100).unwrap();
        assert_eq!(sets.len(), 7);
        assert_eq!(sets[0], Vec::<usize>::new());
        assert!(sets.contains(&vec![0, 2]) && sets.contains(&vec![1, 3]));
        assert!(matches!(anticliques(&cycle, 5), Err(Error::CapExceeded(5))));

        let edgeless = FiberGraph { vertices: cycle.vertices.clone(), edges: BTreeSet::new() };
        assert_eq!(anticliques(&edgeless, 100).unwrap().len(), 16);
        let complete = FiberGraph {
            vertices: cycle.vertices.clone(),
            edges: (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect(),
        };
        assert_eq!(anticliques(&complete, 100).unwrap().len(), 5);
    }
}
