//! Finite groups given by multiplication tables, and the zero-adjoined monoid `G⁰`.

use std::fmt;

use crate::error::{Error, Result};

/// Index of an element inside a [`FiniteGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElem(pub u16);

impl GroupElem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An entry of `G⁰`: `None` is the adjoined zero.
pub type ZeroOrElement = Option<GroupElem>;

/// Constructor descriptions for the groups used by the catalog and by input files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Vec<GroupSpec>),
    Table { table: Vec<Vec<usize>>, names: Vec<String> },
}

impl GroupSpec {
    /// Parses `Z4`, `Z2xZ2`, `1` (trivial group).
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let text = text.trim();
        if text == "1" || text == "trivial" {
            return Ok(GroupSpec::Cyclic(1));
        }
        let factors: Vec<&str> = text.split(['x', '×']).map(str::trim).collect();
        let mut specs = Vec::with_capacity(factors.len());
        for f in &factors {
            let digits = f
                .strip_prefix('Z')
                .or_else(|| f.strip_prefix('ℤ'))
                .ok_or_else(|| Error::Format(format!("unrecognised group `{text}`")))?;
            let n: usize = digits
                .parse()
                .map_err(|_| Error::Format(format!("unrecognised group `{text}`")))?;
            if n == 0 {
                return Err(Error::Format("cyclic group order must be positive".into()));
            }
            specs.push(GroupSpec::Cyclic(n));
        }
        Ok(if specs.len() == 1 { specs.pop().unwrap() } else { GroupSpec::Product(specs) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Naming {
    /// `1, x, x^2, ...` with powers reduced modulo the order.
    Cyclic(usize),
    /// `1, -1`.
    Sign,
    Plain,
}

/// A finite group stored as a validated multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<GroupElem>,
    inverses: Vec<GroupElem>,
    identity: GroupElem,
    names: Vec<String>,
    naming: Naming,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table && self.names == other.names
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    pub fn make(spec: &GroupSpec) -> Result<FiniteGroup> {
        match spec {
            GroupSpec::Cyclic(n) => Self::cyclic(*n),
            GroupSpec::Product(parts) => {
                let mut groups = parts.iter().map(Self::make).collect::<Result<Vec<_>>>()?;
                match groups.len() {
                    0 => Self::cyclic(1),
                    1 => Ok(groups.pop().unwrap()),
                    _ => {
                        let mut acc = groups.remove(0);
                        for g in &groups {
                            acc = acc.direct_product(g);
                        }
                        Ok(acc)
                    }
                }
            }
            GroupSpec::Table { table, names } => Self::from_table(table.clone(), names.clone()),
        }
    }

    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Validation("cyclic group of order 0".into()));
        }
        let table = (0..n).flat_map(|i| (0..n).map(move |j| (i + j) % n)).collect::<Vec<_>>();
        let (names, naming) = match n {
            1 => (vec!["1".to_string()], Naming::Cyclic(1)),
            2 => (vec!["1".to_string(), "-1".to_string()], Naming::Sign),
            _ => (
                (0..n)
                    .map(|i| match i {
                        0 => "1".to_string(),
                        1 => "x".to_string(),
                        _ => format!("x^{i}"),
                    })
                    .collect(),
                Naming::Cyclic(n),
            ),
        };
        let mut g = Self::from_flat(n, table, names)?;
        g.naming = naming;
        Ok(g)
    }

    pub fn trivial() -> FiniteGroup {
        Self::cyclic(1).expect("trivial group")
    }

    /// Builds a group from a raw table; validation reports the failing triple.
    pub fn from_table(rows: Vec<Vec<usize>>, names: Vec<String>) -> Result<FiniteGroup> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("table is not square".into()));
        }
        let names = if names.is_empty() { (0..n).map(|i| format!("g{i}")).collect() } else { names };
        Self::from_flat(n, rows.into_iter().flatten().collect(), names)
    }

    fn from_flat(n: usize, flat: Vec<usize>, names: Vec<String>) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Validation("empty group".into()));
        }
        if names.len() != n {
            return Err(Error::Validation(format!("{} names for {n} elements", names.len())));
        }
        if let Some(bad) = flat.iter().find(|&&v| v >= n) {
            return Err(Error::Validation(format!("entry {bad} out of range")));
        }
        for i in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                row[flat[i * n + j]] = true;
                col[flat[j * n + i]] = true;
            }
            if row.iter().chain(col.iter()).any(|seen| !seen) {
                return Err(Error::Validation(format!("not a Latin square at row/column {i}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = flat[flat[a * n + b] * n + c];
                    let right = flat[a * n + flat[b * n + c]];
                    if left != right {
                        return Err(Error::Validation(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] == x && flat[x * n + e] == x))
            .ok_or_else(|| Error::Validation("no identity element".into()))?;
        // A Latin square with an identity is a group once associativity holds.
        let inverses = (0..n)
            .map(|x| {
                let y = (0..n).find(|&y| flat[x * n + y] == identity).unwrap();
                GroupElem(y as u16)
            })
            .collect();
        Ok(FiniteGroup {
            order: n,
            table: flat.into_iter().map(|v| GroupElem(v as u16)).collect(),
            inverses,
            identity: GroupElem(identity as u16),
            names,
            naming: Naming::Plain,
        })
    }

    /// Direct product `self × other`; element `(g, h)` has index `g * |other| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let mut flat = Vec::with_capacity(n * m * n * m);
        for x in 0..n * m {
            for y in 0..n * m {
                let g = self.mul(GroupElem((x / m) as u16), GroupElem((y / m) as u16));
                let h = other.mul(GroupElem((x % m) as u16), GroupElem((y % m) as u16));
                flat.push(g.index() * m + h.index());
            }
        }
        let names = (0..n * m)
            .map(|x| format!("({},{})", self.names[x / m], other.names[x % m]))
            .collect();
        Self::from_flat(n * m, flat, names).expect("direct product of groups is a group")
    }

    /// Embeds `g ∈ self` into the first factor of `self × other`.
    pub fn pair(&self, other: &FiniteGroup, g: GroupElem, h: GroupElem) -> GroupElem {
        let _ = self;
        GroupElem((g.index() * other.order + h.index()) as u16)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> GroupElem {
        self.identity
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    #[inline]
    pub fn mul(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        self.table[a.index() * self.order + b.index()]
    }

    #[inline]
    pub fn inv(&self, a: GroupElem) -> GroupElem {
        self.inverses[a.index()]
    }

    /// Multiplication in `G⁰`.
    #[inline]
    pub fn mul0(&self, a: ZeroOrElement, b: ZeroOrElement) -> ZeroOrElement {
        Some(self.mul(a?, b?))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElem> {
        (0..self.order as u16).map(GroupElem)
    }

    pub fn name(&self, g: GroupElem) -> &str {
        &self.names[g.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The element `x^k` of a cyclic group named by powers of `x`.
    pub fn power_of_generator(&self, k: usize) -> Option<GroupElem> {
        match self.naming {
            Naming::Cyclic(n) => Some(GroupElem((k % n) as u16)),
            Naming::Sign => Some(GroupElem((k % 2) as u16)),
            Naming::Plain if self.order == 1 => Some(self.identity),
            Naming::Plain => None,
        }
    }

    /// Looks an element up by display name; cyclic groups also accept `x^k`,
    /// `x²`-style superscripts and, for `Z2`, the power names.
    pub fn parse_elem(&self, text: &str) -> Option<GroupElem> {
        let text = text.trim();
        if let Some(i) = self.names.iter().position(|n| n == text) {
            return Some(GroupElem(i as u16));
        }
        if matches!(self.naming, Naming::Plain) {
            return None;
        }
        if text == "x" {
            return self.power_of_generator(1);
        }
        let exp = text.strip_prefix('x')?;
        let exp = exp.strip_prefix('^').unwrap_or(exp);
        let k = if let Ok(k) = exp.parse::<usize>() {
            k
        } else {
            superscript_value(exp)?
        };
        self.power_of_generator(k)
    }

    pub fn elem_display(&self, g: GroupElem) -> ElemDisplay<'_> {
        ElemDisplay { group: self, elem: g }
    }
}

fn superscript_value(s: &str) -> Option<usize> {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    if s.is_empty() {
        return None;
    }
    s.chars().try_fold(0usize, |acc, c| {
        DIGITS.iter().position(|&d| d == c).map(|d| acc * 10 + d)
    })
}

pub struct ElemDisplay<'a> {
    group: &'a FiniteGroup,
    elem: GroupElem,
}

impl fmt::Display for ElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.group.name(self.elem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_matches_sign_table() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let one = g.parse_elem("1").unwrap();
        let minus = g.parse_elem("-1").unwrap();
        assert_eq!(g.mul(one, minus), minus);
        assert_eq!(g.mul(minus, minus), one);
        assert_eq!(g.mul0(None, Some(minus)), None);
    }

    #[test]
    fn trivial_group() {
        let g = FiniteGroup::make(&GroupSpec::Cyclic(1)).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.is_trivial());
    }

    #[test]
    fn klein_group_is_self_inverse() {
        let g = FiniteGroup::make(&GroupSpec::parse("Z2xZ2").unwrap()).unwrap();
        assert_eq!(g.order(), 4);
        for x in g.elements() {
            assert_eq!(g.mul(x, x), g.identity());
        }
    }

    #[test]
    fn cyclic_powers_parse() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(g.parse_elem("x^3"), Some(GroupElem(3)));
        assert_eq!(g.parse_elem("x³"), Some(GroupElem(3)));
        assert_eq!(g.parse_elem("x^5"), Some(GroupElem(1)));
        assert_eq!(g.mul(GroupElem(3), GroupElem(2)), GroupElem(1));
    }

    #[test]
    fn bad_tables_are_rejected() {
        let not_latin = FiniteGroup::from_table(vec![vec![0, 0], vec![0, 1]], vec![]);
        assert!(matches!(not_latin, Err(Error::Validation(_))));
        // Latin square without associativity (a quasigroup of order 3 with identity 0).
        let nonassoc = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(nonassoc, vec![]).unwrap_err();
        assert!(err.to_string().contains("associative"), "{err}");
    }
}
