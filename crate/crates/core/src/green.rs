//! Green's relations from strongly connected components of the Cayley graphs.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::semigroup::SemigroupTable;

#[derive(Clone, Debug)]
pub struct GreenData {
    pub r_classes: Vec<Vec<usize>>,
    pub l_classes: Vec<Vec<usize>>,
    pub h_classes: Vec<Vec<usize>>,
    /// Ordered so that every class comes after all classes below it.
    pub j_classes: Vec<Vec<usize>>,
    pub r_of: Vec<usize>,
    pub l_of: Vec<usize>,
    pub h_of: Vec<usize>,
    pub j_of: Vec<usize>,
    /// `j_leq[a][b]`: class `a` lies below (or equals) class `b`.
    pub j_leq: Vec<Vec<bool>>,
    pub idempotents: Vec<usize>,
    pub regular: Vec<bool>,
    /// Order of the maximal subgroup of each regular J-class.
    pub max_subgroup: Vec<Option<usize>>,
}

fn sccs(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    for (a, b) in edges {
        g.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
    }
    // Reverse topological order: sinks (lowest classes) first.
    let comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut of = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for &x in c {
            of[x] = k;
        }
    }
    (comps, of)
}

pub fn green(table: &SemigroupTable) -> GreenData {
    let n = table.len();
    let gens = table.generators();
    let right = |i: usize| (0..gens.len()).map(move |k| (i, table.right_by_generator(i, k)));
    let left = |i: usize| gens.iter().map(move |&g| (i, table.mul(g, i)));
    let (r_classes, r_of) = sccs(n, (0..n).flat_map(right));
    let (l_classes, l_of) = sccs(n, (0..n).flat_map(left));
    let (j_classes, j_of) = sccs(n, (0..n).flat_map(right).chain((0..n).flat_map(left)));

    let nj = j_classes.len();
    let mut j_leq = vec![vec![false; nj]; nj];
    for k in 0..nj {
        j_leq[k][k] = true;
        // Classes directly below: targets of edges out of class k.
        let mut below = Vec::new();
        for &i in &j_classes[k] {
            for (_, t) in right(i).chain(left(i)) {
                if j_of[t] != k {
                    below.push(j_of[t]);
                }
            }
        }
        for b in below {
            // Lower classes come earlier and are already complete.
            for c in 0..nj {
                if j_leq[c][b] {
                    j_leq[c][k] = true;
                }
            }
        }
    }

    let mut h_map = std::collections::HashMap::new();
    let mut h_classes: Vec<Vec<usize>> = Vec::new();
    let mut h_of = vec![0; n];
    for i in 0..n {
        let k = *h_map.entry((r_of[i], l_of[i])).or_insert_with(|| {
            h_classes.push(Vec::new());
            h_classes.len() - 1
        });
        h_classes[k].push(i);
        h_of[i] = k;
    }

    let idempotents = table.idempotents();
    let mut regular = vec![false; nj];
    let mut max_subgroup = vec![None; nj];
    for &e in &idempotents {
        regular[j_of[e]] = true;
        max_subgroup[j_of[e]] = Some(h_classes[h_of[e]].len());
    }
    GreenData { r_classes, l_classes, h_classes, j_classes, r_of, l_of, h_of, j_of, j_leq, idempotents, regular, max_subgroup }
}

impl GreenData {
    pub fn non_aperiodic(&self, j: usize) -> bool {
        self.max_subgroup[j].is_some_and(|m| m > 1)
    }

    pub fn is_aperiodic(&self) -> bool {
        (0..self.j_classes.len()).all(|j| !self.non_aperiodic(j))
    }

    /// Longest chain of non-aperiodic J-classes.
    pub fn depth(&self) -> usize {
        let nj = self.j_classes.len();
        let mut best = vec![0usize; nj];
        for k in 0..nj {
            let below = (0..k).filter(|&c| self.j_leq[c][k]).map(|c| best[c]).max().unwrap_or(0);
            best[k] = below + usize::from(self.non_aperiodic(k));
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// J-classes not below any other class.
    pub fn maximal_j_classes(&self) -> Vec<usize> {
        let nj = self.j_classes.len();
        (0..nj).filter(|&k| (0..nj).all(|c| c == k || !self.j_leq[k][c])).collect()
    }
}

pub fn is_aperiodic(table: &SemigroupTable) -> bool {
    green(table).is_aperiodic()
}

pub fn depth(table: &SemigroupTable) -> usize {
    green(table).depth()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::lpf::Lpf;

    fn perm_table(cycle: &[usize]) -> SemigroupTable {
        let g = FiniteGroup::trivial();
        let n = cycle.len();
        let map: Vec<Option<usize>> = cycle.iter().map(|&c| Some(c)).collect();
        SemigroupTable::generate(g.clone(), n, vec![("t".into(), Lpf::from_map(&map, &g))], 1000).unwrap()
    }

    #[test]
    fn cyclic_group_is_not_aperiodic() {
        let t = perm_table(&[1, 2, 3, 0]);
        let gd = green(&t);
        assert_eq!(t.len(), 4);
        assert!(!gd.is_aperiodic());
        assert_eq!(gd.depth(), 1);
        assert_eq!(gd.j_classes.len(), 1);
    }

    #[test]
    fn flip_flop_is_aperiodic() {
        let g = FiniteGroup::trivial();
        let c = |v: usize| Lpf::from_map(&[Some(v), Some(v)], &g);
        let t = SemigroupTable::generate(
            g.clone(),
            2,
            vec![("id".into(), Lpf::identity(2, &g)), ("c0".into(), c(0)), ("c1".into(), c(1))],
            100,
        )
        .unwrap();
        assert_eq!(t.len(), 3);
        assert!(is_aperiodic(&t));
        assert_eq!(depth(&t), 0);
    }
}
