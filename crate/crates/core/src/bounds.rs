//! A small rule engine for complexity intervals. Every bound it reports names
//! the rule that produced it, and a rule fires only after its hypotheses have
//! been checked on the tables at hand.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{Derivation, Engine};
use crate::error::{Error, Result};
use crate::green::green;
use crate::hull::degree;
use crate::rees::ReesContext;
use crate::semigroup::{rlm, SemigroupTable};
use crate::verify::{ts_of, verify_flow, FlowAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub side: Side,
    pub value: u32,
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityInterval {
    pub lower: u32,
    pub upper: u32,
    pub justifications: Vec<Justification>,
}

impl ComplexityInterval {
    fn new() -> ComplexityInterval {
        ComplexityInterval { lower: 0, upper: u32::MAX, justifications: Vec::new() }
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    fn raise(&mut self, value: u32, rule: &'static str, detail: impl Into<String>) {
        self.justifications.push(Justification { side: Side::Lower, value, rule, detail: detail.into() });
        self.lower = self.lower.max(value);
    }

    fn cap(&mut self, value: u32, rule: &'static str, detail: impl Into<String>) {
        self.justifications.push(Justification { side: Side::Upper, value, rule, detail: detail.into() });
        self.upper = self.upper.min(value);
    }

    /// The rules behind the current lower and upper bounds.
    pub fn deciding_rules(&self) -> (Vec<&'static str>, Vec<&'static str>) {
        let pick = |side, v| {
            self.justifications.iter().filter(|j| j.side == side && j.value == v).map(|j| j.rule).collect()
        };
        (pick(Side::Lower, self.lower), pick(Side::Upper, self.upper))
    }
}

impl fmt::Display for ComplexityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lower, self.upper)
    }
}

/// A complexity value asserted from outside, matched by table fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom {
    pub name: String,
    pub fingerprint: String,
    pub complexity: u32,
    pub citation: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axioms {
    #[serde(default, rename = "axiom")]
    pub axioms: Vec<Axiom>,
}

impl Axioms {
    pub fn parse(text: &str) -> Result<Axioms> {
        toml::from_str(text).map_err(|e| Error::Format(format!("axioms: {e}")))
    }

    pub fn load(path: &Path) -> Result<Axioms> {
        Axioms::parse(&std::fs::read_to_string(path)?)
    }

    pub fn lookup(&self, table: &SemigroupTable) -> Option<&Axiom> {
        let fp = fingerprint(table);
        self.axioms.iter().find(|a| a.fingerprint == fp)
    }
}

/// FNV-1a over the sorted element list; independent of generator names and
/// enumeration order.
pub fn fingerprint(table: &SemigroupTable) -> String {
    let mut items: Vec<Vec<(usize, usize, usize)>> = table
        .elements()
        .iter()
        .map(|f| f.edges().map(|(b, g, t)| (b, g.index(), t)).collect())
        .collect();
    items.sort();
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |v: u64| {
        for byte in v.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    eat(table.group().order() as u64);
    eat(table.points() as u64);
    for f in &items {
        eat(u64::MAX);
        for &(b, g, t) in f {
            eat(b as u64);
            eat(g as u64);
            eat(t as u64);
        }
    }
    format!("{h:016x}")
}

/// Certificates offered to the rule engine. They are re-checked before use.
#[derive(Clone, Debug, Default)]
pub struct Evidence {
    pub flow: Option<FlowAssignment>,
    pub contradiction: Option<Derivation>,
}

/// Rules that need nothing but the table.
fn table_rules(table: &SemigroupTable, axioms: &Axioms, out: &mut ComplexityInterval) {
    let gd = green(table);
    if gd.is_aperiodic() {
        out.raise(0, "aperiodic", "all maximal subgroups are trivial");
        out.cap(0, "aperiodic", "all maximal subgroups are trivial");
        return;
    }
    out.raise(1, "non-aperiodic", "some maximal subgroup is non-trivial");
    let d = gd.depth() as u32;
    out.cap(d, "depth-decomposition", format!("longest chain of non-aperiodic J-classes has length {d}"));
    let deg = degree(table) as u32;
    out.cap(deg.max(1), "degree", format!("every element has degree at most {deg}"));
    if table.has_ideal() {
        let ideal = table.ideal_members();
        let ideal_aperiodic = ideal.iter().all(|&e| !table.is_idempotent(e) || gd.h_classes[gd.h_of[e]].len() == 1);
        let outside_injective =
            (0..table.len()).filter(|&i| !table.in_ideal(i)).all(|i| table.element(i).is_partial_injection());
        if ideal_aperiodic && outside_injective {
            out.cap(
                1,
                "inverse-embedding",
                "0-minimal ideal is aperiodic and every other element acts by a partial injection",
            );
        }
    }
    if let Some(ax) = axioms.lookup(table) {
        let detail = format!("{} has complexity {} ({})", ax.name, ax.complexity, ax.citation);
        out.raise(ax.complexity, "external-axiom", detail.clone());
        out.cap(ax.complexity, "external-axiom", detail);
    }
}

/// Bounds for a transformation semigroup without Rees structure, such as an
/// RLM image or the semigroup of a covering automaton.
pub fn table_bounds(table: &SemigroupTable, axioms: &Axioms) -> ComplexityInterval {
    let mut out = ComplexityInterval::new();
    table_rules(table, axioms, &mut out);
    out
}

/// Bounds for `S` over its distinguished ideal, never failing; see
/// [`complexity_bounds`] for the strict form.
pub fn assess(
    ctx: &ReesContext,
    table: &SemigroupTable,
    engine: &Engine,
    evidence: &Evidence,
    axioms: &Axioms,
) -> Result<(ComplexityInterval, ComplexityInterval)> {
    let mut out = ComplexityInterval::new();
    table_rules(table, axioms, &mut out);
    let image = rlm(table);
    let r = table_bounds(&image.table, axioms);
    if out.is_exact() {
        return Ok((out, r));
    }
    out.raise(r.lower, "rlm-image", format!("RLM(S) is a quotient of S with c >= {}", r.lower));
    let gm = ctx.is_gm() && !ctx.group().is_trivial();
    if gm {
        out.cap(r.upper.saturating_add(1), "gm-reduction", format!("Sc <= 1 + RLM(S)c <= {}", r.upper.saturating_add(1)));
    }
    if let Some(flow) = &evidence.flow {
        if verify_flow(engine, flow)?.passed() {
            let cover = table_bounds(&ts_of(&flow.automaton)?, axioms);
            if cover.upper != u32::MAX {
                let v = r.upper.max(cover.upper + 1);
                out.cap(
                    v,
                    "flow",
                    format!("verified flow over a covering of complexity <= {}, with RLM(S)c <= {}", cover.upper, r.upper),
                );
            }
        }
    }
    if let Some(d) = &evidence.contradiction {
        let from_point = d.start.blocks().len() == 1 && d.start.blocks()[0].len() == 1;
        if gm && r.lower == 1 && r.upper == 1 && from_point && d.reaches_contradiction() && d.replay(engine)? {
            out.raise(2, "no-aperiodic-flow", format!("replayed derivation `{}` reaches the contradiction", d.script()));
        }
    }
    Ok((out, r))
}

/// Like [`assess`] but fails with `IndeterminateBounds` unless the interval is
/// a single value.
pub fn complexity_bounds(
    ctx: &ReesContext,
    table: &SemigroupTable,
    engine: &Engine,
    evidence: &Evidence,
    axioms: &Axioms,
) -> Result<ComplexityInterval> {
    let (out, _) = assess(ctx, table, engine, evidence, axioms)?;
    if out.lower < out.upper {
        return Err(Error::IndeterminateBounds(Box::new(out)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::rz;

    #[test]
    fn flip_flop_is_zero() {
        let b = table_bounds(&ts_of(&rz(2)).unwrap(), &Axioms::default());
        assert_eq!((b.lower, b.upper), (0, 0));
    }

    #[test]
    fn axioms_parse() {
        let a = Axioms::parse("[[axiom]]\nname = \"X\"\nfingerprint = \"00\"\ncomplexity = 2\ncitation = \"c\"\n").unwrap();
        assert_eq!(a.axioms.len(), 1);
        assert!(Axioms::parse("[[axiom]]\nname = 3").is_err());
    }
}
