//! Labeled partial functions: row-monomial `B × B` matrices over `G⁰`.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem};

const UNDEFINED: u32 = u32::MAX;

/// A `G`-weighted partial map on `B`. The edge `b → g b'` sends the point
/// `(h, b)` of `G × B` to `(h g, b')`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Lpf {
    // (g << 16) | b' per source, or UNDEFINED.
    map: Vec<u32>,
}

pub type LabeledPartialFunction = Lpf;

#[inline]
fn pack(g: GroupElem, b: usize) -> u32 {
    ((g.0 as u32) << 16) | b as u32
}

impl Lpf {
    pub fn empty(n: usize) -> Lpf {
        Lpf { map: vec![UNDEFINED; n] }
    }

    pub fn identity(n: usize, group: &FiniteGroup) -> Lpf {
        Lpf { map: (0..n).map(|b| pack(group.identity(), b)).collect() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, GroupElem, usize)]) -> Result<Lpf> {
        let mut f = Lpf::empty(n);
        for &(b, g, t) in edges {
            if b >= n || t >= n {
                return Err(Error::Format(format!("edge {b} -> {t} leaves the point set of size {n}")));
            }
            if f.map[b] != UNDEFINED {
                return Err(Error::Format(format!("two edges leave point {b}")));
            }
            f.map[b] = pack(g, t);
        }
        Ok(f)
    }

    /// Builds an unweighted partial map (identity weights).
    pub fn from_map(map: &[Option<usize>], group: &FiniteGroup) -> Lpf {
        Lpf {
            map: map.iter().map(|t| t.map_or(UNDEFINED, |t| pack(group.identity(), t))).collect(),
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn get(&self, b: usize) -> Option<(GroupElem, usize)> {
        let v = self.map[b];
        (v != UNDEFINED).then_some((GroupElem((v >> 16) as u16), (v & 0xffff) as usize))
    }

    #[inline]
    pub fn target(&self, b: usize) -> Option<usize> {
        self.get(b).map(|(_, t)| t)
    }

    pub fn set(&mut self, b: usize, edge: Option<(GroupElem, usize)>) {
        self.map[b] = edge.map_or(UNDEFINED, |(g, t)| pack(g, t));
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, GroupElem, usize)> + '_ {
        (0..self.map.len()).filter_map(move |b| self.get(b).map(|(g, t)| (b, g, t)))
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(|&v| v == UNDEFINED)
    }

    pub fn domain(&self) -> Vec<usize> {
        self.edges().map(|(b, _, _)| b).collect()
    }

    /// `self` followed by `other` (right action convention).
    pub fn then(&self, other: &Lpf, group: &FiniteGroup) -> Lpf {
        let map = self
            .map
            .iter()
            .map(|&v| {
                if v == UNDEFINED {
                    return UNDEFINED;
                }
                let mid = (v & 0xffff) as usize;
                let w = other.map[mid];
                if w == UNDEFINED {
                    return UNDEFINED;
                }
                let g = group.mul(GroupElem((v >> 16) as u16), GroupElem((w >> 16) as u16));
                pack(g, (w & 0xffff) as usize)
            })
            .collect();
        Lpf { map }
    }

    /// Right action on a point of `G × B`.
    #[inline]
    pub fn act(&self, group: &FiniteGroup, g: GroupElem, b: usize) -> Option<(GroupElem, usize)> {
        self.get(b).map(|(h, t)| (group.mul(g, h), t))
    }

    /// Forgets the weights: the induced partial map on `B`.
    pub fn underlying(&self) -> Vec<Option<usize>> {
        (0..self.map.len()).map(|b| self.target(b)).collect()
    }

    /// True iff the induced map on `B` is injective on its domain.
    pub fn is_partial_injection(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        for (_, _, t) in self.edges() {
            if std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        true
    }

    /// Same map with every weight replaced by the image under `phi`.
    pub fn map_weights(&self, phi: impl Fn(GroupElem) -> GroupElem) -> Lpf {
        Lpf {
            map: self
                .map
                .iter()
                .map(|&v| {
                    if v == UNDEFINED {
                        v
                    } else {
                        pack(phi(GroupElem((v >> 16) as u16)), (v & 0xffff) as usize)
                    }
                })
                .collect(),
        }
    }

    /// Parses a list of edges in arrow notation, e.g. `["1'->1", "3'->-3"]`,
    /// `"2 -> x4"`, `"2->x^2*6"`. A leading `-` on the target is the element `-1`.
    /// Cycle notation `(1 3)(2 4)` is accepted for permutations.
    pub fn parse(items: &[String], group: &FiniteGroup, labels: &[String]) -> Result<Lpf> {
        let mut edges = Vec::new();
        for item in items {
            let item = item.trim();
            if item.starts_with('(') {
                edges.extend(parse_cycles(item, group, labels)?);
                continue;
            }
            let (src, dst) = item
                .split_once("->")
                .or_else(|| item.split_once('→'))
                .or_else(|| item.split_once("|->"))
                .or_else(|| item.split_once('↦'))
                .ok_or_else(|| Error::Format(format!("edge `{item}` has no arrow")))?;
            let src = src.trim().trim_end_matches('|').trim();
            let b = label_index(labels, src)
                .ok_or_else(|| Error::Format(format!("unknown point `{src}` in `{item}`")))?;
            let (g, t) = parse_weighted_target(dst.trim(), group, labels)
                .ok_or_else(|| Error::Format(format!("cannot read target of `{item}`")))?;
            edges.push((b, g, t));
        }
        Lpf::from_edges(labels.len(), &edges)
    }

    pub fn display<'a>(&'a self, group: &'a FiniteGroup, labels: &'a [String]) -> LpfDisplay<'a> {
        LpfDisplay { f: self, group, labels }
    }
}

fn label_index(labels: &[String], text: &str) -> Option<usize> {
    labels.iter().position(|l| l == text)
}

/// Splits `x^2 6` / `-3` / `x*4` / `4` into weight and point.
fn parse_weighted_target(text: &str, group: &FiniteGroup, labels: &[String]) -> Option<(GroupElem, usize)> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(labels[i].len()));
    for i in order {
        let Some(prefix) = text.strip_suffix(labels[i].as_str()) else { continue };
        let prefix = prefix.trim().trim_end_matches('*').trim();
        let g = match prefix {
            "" | "+" => Some(group.identity()),
            "-" => group.parse_elem("-1"),
            p => group.parse_elem(p),
        };
        if let Some(g) = g {
            return Some((g, i));
        }
    }
    None
}

fn parse_cycles(text: &str, group: &FiniteGroup, labels: &[String]) -> Result<Vec<(usize, GroupElem, usize)>> {
    let mut edges = Vec::new();
    for chunk in text.split('(').map(str::trim).filter(|c| !c.is_empty()) {
        let body = chunk
            .strip_suffix(')')
            .ok_or_else(|| Error::Format(format!("unbalanced cycle in `{text}`")))?;
        let pts = body
            .split([' ', ','])
            .filter(|s| !s.is_empty())
            .map(|s| label_index(labels, s).ok_or_else(|| Error::Format(format!("unknown point `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        for (k, &p) in pts.iter().enumerate() {
            edges.push((p, group.identity(), pts[(k + 1) % pts.len()]));
        }
    }
    Ok(edges)
}

pub struct LpfDisplay<'a> {
    f: &'a Lpf,
    group: &'a FiniteGroup,
    labels: &'a [String],
}

impl fmt::Display for LpfDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (b, g, t) in self.f.edges() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            let w = self.group.name(g);
            let w = match w {
                "1" => "",
                "-1" => "-",
                other => other,
            };
            write!(f, "{}->{}{}", self.labels[b], w, self.labels[t])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_sign_and_power_prefixes() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let l = labels(&["1'", "3'", "1", "2", "3", "4"]);
        let r = Lpf::parse(&["1'->1".into(), "3'->-3".into()], &z2, &l).unwrap();
        assert_eq!(r.get(0), Some((z2.identity(), 2)));
        assert_eq!(r.get(1), Some((GroupElem(1), 4)));
        assert_eq!(r.display(&z2, &l).to_string(), "1'->1, 3'->-3");

        let z4 = FiniteGroup::cyclic(4).unwrap();
        let l8: Vec<String> = (1..=8).map(|i| i.to_string()).collect();
        let s = Lpf::parse(&["1->2".into(), "3->x4".into(), "5 -> x^2 6".into()], &z4, &l8).unwrap();
        assert_eq!(s.get(2), Some((GroupElem(1), 3)));
        assert_eq!(s.get(4), Some((GroupElem(2), 5)));
    }

    #[test]
    fn cycle_notation() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let l = labels(&["1", "2", "3", "4"]);
        let a = Lpf::parse(&["(1 4)(2 3)".into()], &z2, &l).unwrap();
        assert_eq!(a.underlying(), vec![Some(3), Some(2), Some(1), Some(0)]);
        assert!(a.then(&a, &z2) == Lpf::identity(4, &z2));
    }

    #[test]
    fn composition_multiplies_weights() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let x = GroupElem(1);
        let f = Lpf::from_edges(2, &[(0, x, 1)]).unwrap();
        let g = Lpf::from_edges(2, &[(1, x, 0)]).unwrap();
        assert_eq!(f.then(&g, &z4).get(0), Some((GroupElem(2), 0)));
        assert_eq!(g.then(&f, &z4).get(0), None);
    }
}
