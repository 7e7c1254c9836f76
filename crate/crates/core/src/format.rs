//! TOML files: semigroup descriptions and flow certificates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::Built;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSpec};
use crate::hull::in_hull;
use crate::lpf::Lpf;
use crate::rees::{make_rees, parse_entry, IdealElement, ReesContext};
use crate::semigroup::{generate, DEFAULT_BUDGET};
use crate::verify::{Automaton, FlowAssignment};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupField {
    Name(String),
    Table { table: Vec<Vec<usize>>, names: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorField {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lpf: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupField,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    /// `B × A`.
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<String>>>,
    /// `A × B`, as the matrices are usually printed.
    #[serde(rename = "Ct", default, skip_serializing_if = "Option::is_none")]
    pub ct: Option<Vec<Vec<String>>>,
    #[serde(default = "yes")]
    pub include_ideal: bool,
    #[serde(default)]
    pub generators: Vec<GeneratorField>,
}

fn yes() -> bool {
    true
}

fn toml_err(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Format(format!("{what}: {e}"))
}

fn make_group(field: &GroupField) -> Result<FiniteGroup> {
    match field {
        GroupField::Name(n) => FiniteGroup::make(&GroupSpec::parse(n)?),
        GroupField::Table { table, names } => {
            FiniteGroup::make(&GroupSpec::Table { table: table.clone(), names: names.clone() })
        }
    }
}

/// Reads a semigroup description and generates its table.
pub fn parse_semigroup(text: &str) -> Result<Built> {
    let file: SemigroupFile = toml::from_str(text).map_err(|e| toml_err("semigroup file", e))?;
    build_semigroup(&file)
}

pub fn build_semigroup(file: &SemigroupFile) -> Result<Built> {
    let group = make_group(&file.group)?;
    let (rows, transposed) = match (&file.c, &file.ct) {
        (Some(c), None) => (c, false),
        (None, Some(ct)) => (ct, true),
        _ => return Err(Error::Format("give exactly one of `C` and `Ct`".into())),
    };
    let matrix = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| parse_entry(&group, e).ok_or_else(|| Error::Format(format!("bad matrix entry `{e}`"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let ctx = make_rees(group, file.a.clone(), file.b.clone(), matrix, transposed)?;
    let mut extras = Vec::new();
    for (k, gf) in file.generators.iter().enumerate() {
        let (default_name, f) = match (&gf.triple, &gf.lpf) {
            (Some([a, g, b]), None) => {
                let e = triple(&ctx, a, g, b)?;
                (format!("({a},{g},{b})"), ctx.ideal_action(e))
            }
            (None, Some(items)) => (format!("x{}", k + 1), Lpf::parse(items, ctx.group(), ctx.b_labels())?),
            _ => return Err(Error::Format(format!("generator {} needs exactly one of `triple` and `lpf`", k + 1))),
        };
        if !in_hull(&ctx, &f) {
            return Err(Error::Format(format!(
                "generator {} is not in the translational hull",
                gf.name.as_deref().unwrap_or(&default_name)
            )));
        }
        extras.push((gf.name.clone().unwrap_or(default_name), f));
    }
    let table = generate(&ctx, &extras, file.include_ideal, DEFAULT_BUDGET)?;
    Ok(Built { name: file.name.clone().unwrap_or_default(), ctx, extras, table })
}

fn triple(ctx: &ReesContext, a: &str, g: &str, b: &str) -> Result<IdealElement> {
    let ai = ctx.a_index(a).ok_or_else(|| Error::Format(format!("unknown row `{a}`")))?;
    let bi = ctx.b_index(b).ok_or_else(|| Error::Format(format!("unknown column `{b}`")))?;
    let gi = ctx.group().parse_elem(g).ok_or_else(|| Error::Format(format!("unknown group element `{g}`")))?;
    Ok(IdealElement::Triple { a: ai, g: gi, b: bi })
}

/// Edge list in arrow notation that [`Lpf::parse`] reads back.
pub fn lpf_items(f: &Lpf, group: &FiniteGroup, labels: &[String]) -> Vec<String> {
    f.edges()
        .map(|(b, g, t)| {
            let w = match group.name(g) {
                "1" => String::new(),
                "-1" => "-".into(),
                other => format!("{other}*"),
            };
            format!("{}->{}{}", labels[b], w, labels[t])
        })
        .collect()
}

/// The description file of a built semigroup, with `Ct` in printed orientation.
pub fn semigroup_file(built: &Built) -> SemigroupFile {
    let ctx = &built.ctx;
    let g = ctx.group();
    let ct = (0..ctx.na())
        .map(|a| {
            (0..ctx.nb())
                .map(|b| ctx.c(b, a).map_or_else(|| "0".to_string(), |e| g.name(e).to_string()))
                .collect()
        })
        .collect();
    let group = if g.is_trivial() {
        GroupField::Name("1".into())
    } else {
        GroupField::Table {
            table: g.elements().map(|x| g.elements().map(|y| g.mul(x, y).index()).collect()).collect(),
            names: g.names().to_vec(),
        }
    };
    SemigroupFile {
        name: Some(built.name.clone()),
        group,
        a: ctx.a_labels().to_vec(),
        b: ctx.b_labels().to_vec(),
        c: None,
        ct: Some(ct),
        include_ideal: built.table.has_ideal(),
        generators: built
            .extras
            .iter()
            .map(|(n, f)| GeneratorField { name: Some(n.clone()), triple: None, lpf: Some(lpf_items(f, g, ctx.b_labels())) })
            .collect(),
    }
}

pub fn semigroup_to_toml(built: &Built) -> Result<String> {
    toml::to_string(&semigroup_file(built)).map_err(|e| toml_err("semigroup file", e))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct AutomatonSection {
    states: Vec<String>,
    transitions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct FlowFile {
    automaton: AutomatonSection,
    /// Letter → generator names or patterns.
    covering: BTreeMap<String, Vec<String>>,
    /// State → SPC.
    assignment: BTreeMap<String, String>,
}

fn parse_transition(line: &str) -> Result<(String, String, String)> {
    let bad = || Error::Format(format!("transition `{line}` is not `p --x--> q`"));
    let (p, rest) = line.split_once("--").ok_or_else(bad)?;
    let (x, q) = rest.split_once("-->").ok_or_else(bad)?;
    let (p, x, q) = (p.trim(), x.trim(), q.trim());
    if p.is_empty() || x.is_empty() || q.is_empty() {
        return Err(bad());
    }
    Ok((p.into(), x.into(), q.into()))
}

/// Reads a flow certificate. Letters are those named in transitions or in the
/// covering; SPCs are read in the engine's label and group syntax.
pub fn parse_flow(text: &str, engine: &Engine) -> Result<FlowAssignment> {
    let file: FlowFile = toml::from_str(text).map_err(|e| toml_err("flow certificate", e))?;
    let mut letters: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for t in &file.automaton.transitions {
        let (p, x, q) = parse_transition(t)?;
        if !letters.contains(&x) {
            letters.push(x.clone());
        }
        edges.push((p, x, q));
    }
    for l in file.covering.keys() {
        if !letters.contains(l) {
            letters.push(l.clone());
        }
    }
    let mut automaton = Automaton::new(file.automaton.states.clone(), letters);
    for (p, x, q) in edges {
        let unknown = |s: &str| Error::Format(format!("unknown state `{s}`"));
        let pi = automaton.state_index(&p).ok_or_else(|| unknown(&p))?;
        let qi = automaton.state_index(&q).ok_or_else(|| unknown(&q))?;
        let xi = automaton.letter_index(&x).expect("letter registered above");
        automaton.set(pi, xi, qi)?;
    }
    let mut assignment = Vec::new();
    for s in &automaton.states {
        let text = file.assignment.get(s).ok_or_else(|| Error::Format(format!("state `{s}` has no value")))?;
        assignment.push(engine.parse_spc(text)?);
    }
    if let Some(extra) = file.assignment.keys().find(|k| automaton.state_index(k).is_none()) {
        return Err(Error::Format(format!("value given for unknown state `{extra}`")));
    }
    let mut covering = Vec::new();
    for (letter, pats) in &file.covering {
        for p in pats {
            covering.push((letter.clone(), p.clone()));
        }
    }
    Ok(FlowAssignment { automaton, covering, assignment })
}

pub fn flow_to_toml(flow: &FlowAssignment, engine: &Engine) -> Result<String> {
    let mut covering: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (l, p) in &flow.covering {
        covering.entry(l.clone()).or_default().push(p.clone());
    }
    let file = FlowFile {
        automaton: AutomatonSection { states: flow.automaton.states.clone(), transitions: flow.automaton.transitions() },
        covering,
        assignment: flow
            .automaton
            .states
            .iter()
            .zip(&flow.assignment)
            .map(|(s, v)| (s.clone(), engine.show(v)))
            .collect(),
    };
    toml::to_string(&file).map_err(|e| toml_err("flow certificate", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
group = "Z2"
A = ["a1", "a2"]
B = ["1", "2"]
Ct = [["1", "1"], ["1", "-1"]]
generators = [{ name = "s", lpf = ["(1 2)"] }, { triple = ["a1", "-1", "2"] }]
"#;

    #[test]
    fn reads_a_small_file() {
        let b = parse_semigroup(SMALL).unwrap();
        assert_eq!(b.extras.len(), 2);
        assert_eq!(b.extras[1].0, "(a1,-1,2)");
        assert!(b.ctx.is_gm());
    }

    #[test]
    fn round_trips_through_toml() {
        let b = parse_semigroup(SMALL).unwrap();
        let again = parse_semigroup(&semigroup_to_toml(&b).unwrap()).unwrap();
        assert_eq!(again.table.len(), b.table.len());
        assert_eq!(again.ctx.group(), b.ctx.group());
    }

    #[test]
    fn rejects_both_orientations_and_bad_entries() {
        let both = SMALL.replace("Ct =", "C = [[\"1\",\"1\"],[\"1\",\"1\"]]\nCt =");
        assert!(matches!(parse_semigroup(&both), Err(Error::Format(_))));
        let bad = SMALL.replace("\"-1\"]]", "\"y\"]]");
        assert!(matches!(parse_semigroup(&bad), Err(Error::Format(_))));
    }

    #[test]
    fn transitions_parse() {
        assert_eq!(parse_transition("p --c1--> q").unwrap(), ("p".into(), "c1".into(), "q".into()));
        assert!(parse_transition("p -> q").is_err());
    }
}
