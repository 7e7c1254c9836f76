//! Rees matrix semigroups `M⁰(G, A, B, C)` with `C: B × A → G⁰`.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem, ZeroOrElement};
use crate::lpf::Lpf;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReesContext {
    group: FiniteGroup,
    a_labels: Vec<String>,
    b_labels: Vec<String>,
    // Row-major over B: c[b * |A| + a].
    c: Vec<ZeroOrElement>,
    gm: bool,
}

/// An element of `M⁰(G, A, B, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealElement {
    Zero,
    Triple { a: usize, g: GroupElem, b: usize },
}

/// Builds a context. `matrix` is `B × A` unless `transposed`, in which case it is
/// the `A × B` matrix `Cᵀ` as printed in the examples.
pub fn make_rees(
    group: FiniteGroup,
    a_labels: Vec<String>,
    b_labels: Vec<String>,
    matrix: Vec<Vec<ZeroOrElement>>,
    transposed: bool,
) -> Result<ReesContext> {
    let (na, nb) = (a_labels.len(), b_labels.len());
    if na == 0 || nb == 0 {
        return Err(Error::Format("A and B must be non-empty".into()));
    }
    let (rows, cols) = if transposed { (na, nb) } else { (nb, na) };
    if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::Format(format!(
            "structure matrix must be {rows}×{cols} ({})",
            if transposed { "A×B" } else { "B×A" }
        )));
    }
    let mut c = vec![None; nb * na];
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let (b, a) = if transposed { (j, i) } else { (i, j) };
            if let Some(g) = v {
                if g.index() >= group.order() {
                    return Err(Error::Format(format!("entry {} out of range", g.0)));
                }
            }
            c[b * na + a] = v;
        }
    }
    for b in 0..nb {
        if (0..na).all(|a| c[b * na + a].is_none()) {
            return Err(Error::Regularity(format!("row {} of C is zero", b_labels[b])));
        }
    }
    for a in 0..na {
        if (0..nb).all(|b| c[b * na + a].is_none()) {
            return Err(Error::Regularity(format!("column {} of C is zero", a_labels[a])));
        }
    }
    let mut ctx = ReesContext { group, a_labels, b_labels, c, gm: false };
    ctx.gm = ctx.proportionality_witness().is_none();
    Ok(ctx)
}

impl ReesContext {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn a_labels(&self) -> &[String] {
        &self.a_labels
    }

    pub fn b_labels(&self) -> &[String] {
        &self.b_labels
    }

    pub fn na(&self) -> usize {
        self.a_labels.len()
    }

    pub fn nb(&self) -> usize {
        self.b_labels.len()
    }

    #[inline]
    pub fn c(&self, b: usize, a: usize) -> ZeroOrElement {
        self.c[b * self.a_labels.len() + a]
    }

    /// No proportional rows and no proportional columns.
    pub fn is_gm(&self) -> bool {
        self.gm
    }

    pub fn a_index(&self, label: &str) -> Option<usize> {
        self.a_labels.iter().position(|l| l == label)
    }

    pub fn b_index(&self, label: &str) -> Option<usize> {
        self.b_labels.iter().position(|l| l == label)
    }

    /// A description of the first pair of proportional rows or columns, if any.
    pub fn proportionality_witness(&self) -> Option<String> {
        let (na, nb) = (self.na(), self.nb());
        let g = &self.group;
        for b1 in 0..nb {
            for b2 in b1 + 1..nb {
                for h in g.elements() {
                    if (0..na).all(|a| self.c(b2, a) == g.mul0(Some(h), self.c(b1, a))) {
                        return Some(format!(
                            "rows {} and {} are proportional",
                            self.b_labels[b1], self.b_labels[b2]
                        ));
                    }
                }
            }
        }
        for a1 in 0..na {
            for a2 in a1 + 1..na {
                for h in g.elements() {
                    if (0..nb).all(|b| self.c(b, a2) == g.mul0(self.c(b, a1), Some(h))) {
                        return Some(format!(
                            "columns {} and {} are proportional",
                            self.a_labels[a1], self.a_labels[a2]
                        ));
                    }
                }
            }
        }
        None
    }

    /// Right translation of `G × B` by an ideal element:
    /// `b' ↦ C(b', a) g · b` wherever `C(b', a) ≠ 0`.
    pub fn ideal_action(&self, e: IdealElement) -> Lpf {
        let mut f = Lpf::empty(self.nb());
        if let IdealElement::Triple { a, g, b } = e {
            for bp in 0..self.nb() {
                if let Some(c) = self.c(bp, a) {
                    f.set(bp, Some((self.group.mul(c, g), b)));
                }
            }
        }
        f
    }

    /// `(a,g,b)(a',g',b') = (a, g C(b,a') g', b')`, zero when `C(b,a') = 0`.
    pub fn ideal_product(&self, x: IdealElement, y: IdealElement) -> IdealElement {
        match (x, y) {
            (IdealElement::Triple { a, g, b }, IdealElement::Triple { a: a2, g: g2, b: b2 }) => {
                match self.c(b, a2) {
                    Some(c) => IdealElement::Triple { a, g: self.group.mul(self.group.mul(g, c), g2), b: b2 },
                    None => IdealElement::Zero,
                }
            }
            _ => IdealElement::Zero,
        }
    }

    /// All non-zero triples in `(a, g, b)` lexicographic order.
    pub fn triples(&self) -> impl Iterator<Item = IdealElement> + '_ {
        let (na, ng, nb) = (self.na(), self.group.order(), self.nb());
        (0..na).flat_map(move |a| {
            (0..ng).flat_map(move |g| (0..nb).map(move |b| IdealElement::Triple { a, g: GroupElem(g as u16), b }))
        })
    }

    /// The same matrix over a bigger group, entries pushed through `lift`.
    pub fn relift(&self, group: FiniteGroup, lift: impl Fn(GroupElem) -> GroupElem) -> ReesContext {
        let c = self.c.iter().map(|v| v.map(&lift)).collect();
        let mut ctx = ReesContext {
            group,
            a_labels: self.a_labels.clone(),
            b_labels: self.b_labels.clone(),
            c,
            gm: false,
        };
        ctx.gm = ctx.proportionality_witness().is_none();
        ctx
    }

    /// The context over the trivial group with the same zero pattern.
    pub fn support_context(&self) -> ReesContext {
        let trivial = FiniteGroup::trivial();
        let id = trivial.identity();
        self.relift(trivial, |_| id)
    }

    /// Drops duplicate `A`-columns of `C`; this leaves the right action on `G × B`
    /// of the ideal unchanged up to relabeling of triples.
    pub fn dedup_columns(&self) -> ReesContext {
        let mut keep: Vec<usize> = Vec::new();
        for a in 0..self.na() {
            if !keep.iter().any(|&k| (0..self.nb()).all(|b| self.c(b, k) == self.c(b, a))) {
                keep.push(a);
            }
        }
        let nb = self.nb();
        let mut c = Vec::with_capacity(nb * keep.len());
        for b in 0..nb {
            for &a in &keep {
                c.push(self.c(b, a));
            }
        }
        let mut ctx = ReesContext {
            group: self.group.clone(),
            a_labels: keep.iter().map(|&a| self.a_labels[a].clone()).collect(),
            b_labels: self.b_labels.clone(),
            c,
            gm: false,
        };
        ctx.gm = ctx.proportionality_witness().is_none();
        ctx
    }

    pub fn parse_entry(&self, text: &str) -> Option<ZeroOrElement> {
        parse_entry(&self.group, text)
    }
}

/// `0` is the zero of `G⁰`; anything else is a group element name.
pub fn parse_entry(group: &FiniteGroup, text: &str) -> Option<ZeroOrElement> {
    let t = text.trim();
    if t == "0" {
        Some(None)
    } else {
        group.parse_elem(t).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn identical_rows_are_not_gm() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let one = Some(z2.identity());
        let ctx = make_rees(z2, labels("a", 2), labels("", 2), vec![vec![one, one], vec![one, one]], false).unwrap();
        assert!(!ctx.is_gm());
    }

    #[test]
    fn zero_column_is_rejected() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let one = Some(z2.identity());
        let err = make_rees(z2, labels("a", 2), labels("", 2), vec![vec![one, None], vec![one, None]], false)
            .unwrap_err();
        assert!(matches!(err, Error::Regularity(ref m) if m.contains("a2")), "{err}");
    }

    #[test]
    fn zero_acts_as_empty_function() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let one = Some(z2.identity());
        let ctx = make_rees(z2, labels("a", 1), labels("", 1), vec![vec![one]], false).unwrap();
        assert!(ctx.ideal_action(IdealElement::Zero).is_empty());
    }
}
