//! The Rhodes lattice `Rh_B(G)`: SPCs (subset, partition, projective cross-section)
//! with the contradiction on top, and the set-partition lattice `SP(G × B)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem};

/// One partition class with its cross-section, normalized so the least point
/// carries the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Block {
    pub points: Vec<u16>,
    pub weights: Vec<GroupElem>,
}

/// An element of `Rh_B(G)`. `Sections(vec![])` is the bottom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Spc {
    Sections(Vec<Block>),
    Contradiction,
}

const ABSENT: usize = usize::MAX;

/// Union-find with group-valued potentials. Each point `b` carries an unknown
/// `φ(b)`; constraints fix ratios `φ(b)⁻¹ φ(b')`, and the first inconsistent
/// constraint turns the result into the contradiction.
pub(crate) struct Joiner<'g> {
    group: &'g FiniteGroup,
    parent: Vec<usize>,
    // φ(parent)⁻¹ φ(b)
    rel: Vec<GroupElem>,
    failed: bool,
}

impl<'g> Joiner<'g> {
    pub(crate) fn new(group: &'g FiniteGroup, n: usize) -> Self {
        Joiner { group, parent: vec![ABSENT; n], rel: vec![group.identity(); n], failed: false }
    }

    pub(crate) fn add_point(&mut self, b: usize) {
        if self.parent[b] == ABSENT {
            self.parent[b] = b;
            self.rel[b] = self.group.identity();
        }
    }

    /// Root of `b` and `φ(root)⁻¹ φ(b)`.
    fn find(&mut self, b: usize) -> (usize, GroupElem) {
        let g = self.group;
        let mut chain = Vec::new();
        let mut cur = b;
        while self.parent[cur] != cur {
            chain.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // Path compression from the top down.
        let mut acc = g.identity();
        for &v in chain.iter().rev() {
            acc = g.mul(acc, self.rel[v]);
            self.rel[v] = acc;
            self.parent[v] = root;
        }
        (root, if b == root { g.identity() } else { self.rel[b] })
    }

    /// Requires `φ(b1)⁻¹ φ(b2) = d`.
    pub(crate) fn relate(&mut self, b1: usize, b2: usize, d: GroupElem) {
        self.add_point(b1);
        self.add_point(b2);
        let g = self.group;
        let (r1, x1) = self.find(b1);
        let (r2, x2) = self.find(b2);
        if r1 == r2 {
            if g.mul(g.inv(x1), x2) != d {
                self.failed = true;
            }
        } else {
            self.parent[r2] = r1;
            self.rel[r2] = g.mul(g.mul(x1, d), g.inv(x2));
        }
    }

    /// Adds a block given by points and (projective) weights.
    pub(crate) fn add_weighted(&mut self, pts: &[(usize, GroupElem)]) {
        let g = self.group;
        if let Some(&(b0, w0)) = pts.first() {
            self.add_point(b0);
            let inv0 = g.inv(w0);
            for &(b, w) in &pts[1..] {
                self.relate(b0, b, g.mul(inv0, w));
            }
        }
    }

    pub(crate) fn add_block(&mut self, blk: &Block) {
        let g = self.group;
        let b0 = blk.points[0] as usize;
        self.add_point(b0);
        let inv0 = g.inv(blk.weights[0]);
        for (&b, &w) in blk.points.iter().zip(&blk.weights).skip(1) {
            self.relate(b0, b as usize, g.mul(inv0, w));
        }
    }

    pub(crate) fn add_spc(&mut self, p: &Spc) {
        match p {
            Spc::Contradiction => self.failed = true,
            Spc::Sections(blocks) => blocks.iter().for_each(|b| self.add_block(b)),
        }
    }

    pub(crate) fn finish(mut self) -> Spc {
        if self.failed {
            return Spc::Contradiction;
        }
        let n = self.parent.len();
        let mut by_root: Vec<Vec<(usize, GroupElem)>> = vec![Vec::new(); n];
        for b in 0..n {
            if self.parent[b] != ABSENT {
                let (r, x) = self.find(b);
                by_root[r].push((b, x));
            }
        }
        let blocks = by_root.into_iter().filter(|v| !v.is_empty()).map(|pts| Block::normalized(self.group, pts)).collect();
        Spc::from_sorted_blocks(blocks)
    }
}

impl Block {
    /// `pts` sorted by point; weights rescaled on the left to start at 1.
    pub(crate) fn normalized(group: &FiniteGroup, mut pts: Vec<(usize, GroupElem)>) -> Block {
        pts.sort_by_key(|p| p.0);
        let inv0 = group.inv(pts[0].1);
        Block {
            points: pts.iter().map(|p| p.0 as u16).collect(),
            weights: pts.iter().map(|p| group.mul(inv0, p.1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, GroupElem)> + '_ {
        self.points.iter().map(|&b| b as usize).zip(self.weights.iter().copied())
    }
}

impl Spc {
    pub fn bottom() -> Spc {
        Spc::Sections(Vec::new())
    }

    /// The point `{b}/⟨1⟩`.
    pub fn point(b: usize, group: &FiniteGroup) -> Spc {
        Spc::Sections(vec![Block { points: vec![b as u16], weights: vec![group.identity()] }])
    }

    /// Builds an SPC from arbitrary blocks; overlapping blocks are joined.
    pub fn from_blocks(group: &FiniteGroup, n: usize, blocks: &[Vec<(usize, GroupElem)>]) -> Spc {
        let mut j = Joiner::new(group, n);
        for b in blocks {
            j.add_weighted(b);
        }
        j.finish()
    }

    fn from_sorted_blocks(mut blocks: Vec<Block>) -> Spc {
        blocks.sort_by_key(|b| b.points[0]);
        Spc::Sections(blocks)
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self, Spc::Contradiction)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Spc::Sections(b) if b.is_empty())
    }

    pub fn blocks(&self) -> &[Block] {
        match self {
            Spc::Sections(b) => b,
            Spc::Contradiction => &[],
        }
    }

    pub fn domain(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.blocks().iter().flat_map(|b| b.points.iter().map(|&p| p as usize)).collect();
        d.sort_unstable();
        d
    }

    /// Per point: block index and weight.
    pub fn assignment(&self, n: usize) -> Vec<Option<(usize, GroupElem)>> {
        let mut out = vec![None; n];
        for (k, blk) in self.blocks().iter().enumerate() {
            for (b, w) in blk.iter() {
                out[b] = Some((k, w));
            }
        }
        out
    }

    fn width(&self) -> usize {
        self.blocks().iter().flat_map(|b| b.points.iter()).map(|&p| p as usize + 1).max().unwrap_or(0)
    }

    pub fn leq(&self, other: &Spc, group: &FiniteGroup) -> bool {
        match (self, other) {
            (_, Spc::Contradiction) => true,
            (Spc::Contradiction, _) => false,
            (Spc::Sections(ps), Spc::Sections(_)) => {
                let n = self.width().max(other.width());
                let q = other.assignment(n);
                ps.iter().all(|blk| {
                    let mut target: Option<(usize, GroupElem)> = None;
                    blk.iter().all(|(b, w)| match q[b] {
                        None => false,
                        Some((k, qw)) => {
                            // q(b) = g p(b) for one g across the block.
                            let ratio = group.mul(qw, group.inv(w));
                            match target {
                                None => {
                                    target = Some((k, ratio));
                                    true
                                }
                                Some(t) => t == (k, ratio),
                            }
                        }
                    })
                })
            }
        }
    }

    pub fn join(&self, other: &Spc, group: &FiniteGroup) -> Spc {
        if self.is_contradiction() || other.is_contradiction() {
            return Spc::Contradiction;
        }
        let n = self.width().max(other.width());
        let mut j = Joiner::new(group, n);
        j.add_spc(self);
        j.add_spc(other);
        j.finish()
    }

    pub fn meet(&self, other: &Spc, group: &FiniteGroup) -> Spc {
        match (self, other) {
            (Spc::Contradiction, x) | (x, Spc::Contradiction) => x.clone(),
            _ => {
                let n = self.width().max(other.width());
                let p = self.assignment(n);
                let q = other.assignment(n);
                // Points agree iff they share both blocks and the key q(b) p(b)⁻¹.
                type Key = (usize, usize, GroupElem);
                let mut groups: Vec<(Key, Vec<(usize, GroupElem)>)> = Vec::new();
                for b in 0..n {
                    if let (Some((kp, wp)), Some((kq, wq))) = (p[b], q[b]) {
                        let key = (kp, kq, group.mul(wq, group.inv(wp)));
                        match groups.iter_mut().find(|(k, _)| *k == key) {
                            Some((_, v)) => v.push((b, wp)),
                            None => groups.push((key, vec![(b, wp)])),
                        }
                    }
                }
                Spc::from_sorted_blocks(groups.into_iter().map(|(_, v)| Block::normalized(group, v)).collect())
            }
        }
    }

    pub fn display<'a>(&'a self, group: &'a FiniteGroup, labels: &'a [String]) -> SpcDisplay<'a> {
        SpcDisplay { spc: self, group, labels }
    }

    pub fn to_text(&self, group: &FiniteGroup, labels: &[String]) -> String {
        self.display(group, labels).to_string()
    }

    /// Parses `{1 3 | 2 4}/<1 -1 | 1 -1>`, `=><=`, `{}`. Weights are matched to
    /// points in the order written; over the trivial group they may be omitted.
    pub fn parse(text: &str, group: &FiniteGroup, labels: &[String]) -> Result<Spc> {
        let s = text.trim();
        let offset = text.len() - text.trim_start().len();
        if matches!(s, "=><=" | "⇒⇐" | "=>⇐" | "contradiction") {
            return Ok(Spc::Contradiction);
        }
        if matches!(s, "{}" | "∅" | "{}/<>" | "{}/⟨⟩") {
            return Ok(Spc::bottom());
        }
        let open = s.find('{').ok_or_else(|| Error::parse(offset, "expected `{`"))?;
        let close = s.find('}').ok_or_else(|| Error::parse(offset + s.len(), "expected `}`"))?;
        let blocks_txt = &s[open + 1..close];
        let rest = s[close + 1..].trim();
        let point_blocks: Vec<Vec<&str>> =
            blocks_txt.split(['|', '∣']).map(|b| b.split_whitespace().collect()).collect();
        let weight_blocks: Option<Vec<Vec<&str>>> = if rest.is_empty() {
            None
        } else {
            let rest = rest
                .strip_prefix('/')
                .ok_or_else(|| Error::parse(offset + close + 1, "expected `/` before weights"))?
                .trim();
            let inner = rest
                .strip_prefix('<')
                .or_else(|| rest.strip_prefix('⟨'))
                .and_then(|r| r.strip_suffix('>').or_else(|| r.strip_suffix('⟩')))
                .ok_or_else(|| Error::parse(offset + close + 1, "weights must be enclosed in `<` `>`"))?;
            Some(inner.split(['|', '∣']).map(|b| b.split_whitespace().collect()).collect())
        };
        if let Some(w) = &weight_blocks {
            if w.len() != point_blocks.len() {
                return Err(Error::parse(offset + close + 1, "number of weight blocks differs from point blocks"));
            }
        } else if !group.is_trivial() {
            return Err(Error::parse(offset + close + 1, "weights are required over a non-trivial group"));
        }
        let mut blocks = Vec::new();
        let mut seen = vec![false; labels.len()];
        for (k, pts) in point_blocks.iter().enumerate() {
            if pts.is_empty() {
                return Err(Error::parse(offset + open, "empty block"));
            }
            let mut blk = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                let b = labels
                    .iter()
                    .position(|l| l == p)
                    .ok_or_else(|| Error::parse(offset + open, format!("unknown point `{p}`")))?;
                if std::mem::replace(&mut seen[b], true) {
                    return Err(Error::parse(offset + open, format!("point `{p}` occurs twice")));
                }
                let w = match &weight_blocks {
                    None => group.identity(),
                    Some(wb) => {
                        let name = wb[k].get(i).ok_or_else(|| {
                            Error::parse(offset + close + 1, format!("missing weight for `{p}`"))
                        })?;
                        group
                            .parse_elem(name)
                            .ok_or_else(|| Error::parse(offset + close + 1, format!("unknown group element `{name}`")))?
                    }
                };
                blk.push((b, w));
            }
            if let Some(wb) = &weight_blocks {
                if wb[k].len() != pts.len() {
                    return Err(Error::parse(offset + close + 1, "weight count differs from block size"));
                }
            }
            blocks.push(Block::normalized(group, blk));
        }
        Ok(Spc::from_sorted_blocks(blocks))
    }
}

pub struct SpcDisplay<'a> {
    spc: &'a Spc,
    group: &'a FiniteGroup,
    labels: &'a [String],
}

impl fmt::Display for SpcDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks = match self.spc {
            Spc::Contradiction => return f.write_str("=><="),
            Spc::Sections(b) if b.is_empty() => return f.write_str("{}"),
            Spc::Sections(b) => b,
        };
        let pts: Vec<String> = blocks
            .iter()
            .map(|b| b.points.iter().map(|&p| self.labels[p as usize].as_str()).collect::<Vec<_>>().join(" "))
            .collect();
        let ws: Vec<String> = blocks
            .iter()
            .map(|b| b.weights.iter().map(|&w| self.group.name(w)).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{{{}}}/<{}>", pts.join(" | "), ws.join(" | "))
    }
}

/// An element `(Y, Π)` of `SP(G × B)`; points are indexed `b * |G| + g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartitionPair {
    pub points: usize,
    /// Classes, each sorted, ordered by least element. `Y` is their union.
    pub classes: Vec<Vec<usize>>,
}

impl SetPartitionPair {
    pub fn new(points: usize, mut classes: Vec<Vec<usize>>) -> Self {
        classes.retain(|c| !c.is_empty());
        classes.iter_mut().for_each(|c| c.sort_unstable());
        classes.sort();
        SetPartitionPair { points, classes }
    }

    pub fn subset(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.classes.iter().flatten().copied().collect();
        s.sort_unstable();
        s
    }

    /// `(Y, Π) ≤ (Y', Π')`: `Y ⊆ Y'` and each class lies inside one class.
    pub fn leq(&self, other: &SetPartitionPair) -> bool {
        let mut cls = vec![usize::MAX; self.points.max(other.points)];
        for (k, c) in other.classes.iter().enumerate() {
            for &p in c {
                cls[p] = k;
            }
        }
        self.classes.iter().all(|c| {
            let k = cls[c[0]];
            k != usize::MAX && c.iter().all(|&p| cls[p] == k)
        })
    }

    pub fn is_cross_section(&self, group_order: usize) -> bool {
        self.classes.iter().all(|c| {
            let mut bs: Vec<usize> = c.iter().map(|p| p / group_order).collect();
            bs.sort_unstable();
            bs.windows(2).all(|w| w[0] != w[1])
        })
    }
}

/// Every block becomes its `|G|` left translates `{(g w(b), b)}`. The
/// contradiction maps to the top of `SP(G × B)`.
pub fn rh_to_sp(p: &Spc, group: &FiniteGroup, nb: usize) -> SetPartitionPair {
    let ng = group.order();
    let points = ng * nb;
    match p {
        Spc::Contradiction => SetPartitionPair::new(points, vec![(0..points).collect()]),
        Spc::Sections(blocks) => {
            let mut classes = Vec::new();
            for blk in blocks {
                for g in group.elements() {
                    classes.push(blk.iter().map(|(b, w)| b * ng + group.mul(g, w).index()).collect());
                }
            }
            SetPartitionPair::new(points, classes)
        }
    }
}

/// Inverse of [`rh_to_sp`] on invariant cross-sections; `None` otherwise.
pub fn sp_to_rh(s: &SetPartitionPair, group: &FiniteGroup, nb: usize) -> Option<Spc> {
    let ng = group.order();
    if s.points != ng * nb || !s.is_cross_section(ng) {
        return None;
    }
    let mut blocks: Vec<Vec<(usize, GroupElem)>> = Vec::new();
    let mut covered = vec![false; nb];
    for c in &s.classes {
        let b0 = c[0] / ng;
        if covered[b0] {
            continue;
        }
        let pts: Vec<(usize, GroupElem)> = c.iter().map(|&p| (p / ng, GroupElem((p % ng) as u16))).collect();
        for &(b, _) in &pts {
            covered[b] = true;
        }
        blocks.push(pts);
    }
    let spc = Spc::from_sorted_blocks(blocks.into_iter().map(|v| Block::normalized(group, v)).collect());
    (rh_to_sp(&spc, group, nb) == *s).then_some(spc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (FiniteGroup, Vec<String>) {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let l = ["1'", "3'", "1", "2", "3", "4"].iter().map(|s| s.to_string()).collect();
        (z2, l)
    }

    #[test]
    fn parse_print_round_trip() {
        let (g, l) = setup();
        for s in ["{1 3 | 2 4}/<1 -1 | 1 -1>", "=><=", "{}", "{1' 3'}/<1 1>", "{1'}/<1>"] {
            assert_eq!(Spc::parse(s, &g, &l).unwrap().to_text(&g, &l), s);
        }
        // Weights follow the written order and are normalized at the least point.
        let p = Spc::parse("{3 1}/<1 -1>", &g, &l).unwrap();
        assert_eq!(p.to_text(&g, &l), "{1 3}/<1 -1>");
        assert!(matches!(Spc::parse("{1 9}/<1 1>", &g, &l), Err(Error::Parse { .. })));
    }

    #[test]
    fn order_examples() {
        let (g, l) = setup();
        let p = |s: &str| Spc::parse(s, &g, &l).unwrap();
        assert!(p("{1 3}/<1 -1>").leq(&p("{1 2 3 4}/<1 1 -1 -1>"), &g));
        assert!(!p("{1' 3'}/<1 1>").leq(&p("{1' 3'}/<1 -1>"), &g));
        assert!(Spc::bottom().leq(&p("{1}/<1>"), &g));
    }

    #[test]
    fn join_and_meet_examples() {
        let (g, l) = setup();
        let p = |s: &str| Spc::parse(s, &g, &l).unwrap();
        assert_eq!(p("{1'}/<1>").join(&p("{3'}/<1>"), &g), p("{1' | 3'}/<1 | 1>"));
        assert_eq!(p("{1 2 3 4}/<1 1 -1 -1>").join(&p("{1 2 3 4}/<-1 1 1 -1>"), &g), Spc::Contradiction);
        assert_eq!(p("{1 3}/<1 1>").meet(&p("{1 3}/<1 -1>"), &g), p("{1 | 3}/<1 | 1>"));
    }

    #[test]
    fn sp_conversion() {
        let (g, _) = setup();
        let sp = rh_to_sp(&Spc::point(2, &g), &g, 6);
        assert_eq!(sp.classes, vec![vec![4], vec![5]]);
        let bad = SetPartitionPair::new(12, vec![vec![4, 5]]);
        assert_eq!(sp_to_rh(&bad, &g, 6), None);
    }
}
