//! Built-in constructions of the worked examples.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem, ZeroOrElement};
use crate::hull::{in_hull, make_mk, mk_row_labels};
use crate::lpf::Lpf;
use crate::rees::{make_rees, ReesContext};
use crate::semigroup::{generate, reduced_product, SemigroupTable, DEFAULT_BUDGET};

/// A constructed example: context, the extra (non-ideal) generators and the table.
#[derive(Clone, Debug)]
pub struct Built {
    pub name: String,
    pub ctx: ReesContext,
    pub extras: Vec<(String, Lpf)>,
    pub table: SemigroupTable,
}

pub const NAMES: [&str; 10] = ["TF", "TFA1", "UTV", "BIRIP", "CBIRIP", "RG1", "RG2", "T4", "S4", "S2"];

fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Reads a 0/1 pattern (or signed entries) into `G⁰` entries.
fn pattern(group: &FiniteGroup, rows: &[&[i8]]) -> Vec<Vec<ZeroOrElement>> {
    let minus = group.parse_elem("-1");
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&v| match v {
                    0 => None,
                    1 => Some(group.identity()),
                    _ => minus,
                })
                .collect()
        })
        .collect()
}

fn lpf(items: &[&str], ctx: &ReesContext) -> Lpf {
    let items: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    Lpf::parse(&items, ctx.group(), ctx.b_labels()).expect("catalog generator parses")
}

fn finish(name: &str, ctx: ReesContext, extras: Vec<(String, Lpf)>) -> Result<Built> {
    for (n, f) in &extras {
        debug_assert!(in_hull(&ctx, f), "{name}: generator {n} is not in the translational hull");
    }
    let table = generate(&ctx, &extras, true, DEFAULT_BUDGET)?;
    Ok(Built { name: name.to_string(), ctx, extras, table })
}

const TF_CT: [&[i8]; 7] = [
    &[1, 1, 0, 0, 0, 0],
    &[1, 0, 0, 0, 0, 0],
    &[0, 1, 0, 0, 0, 0],
    &[0, 0, 1, 1, 0, 0],
    &[0, 0, 0, 1, 1, 0],
    &[0, 0, 0, 0, 1, 1],
    &[0, 0, 1, 0, 0, 1],
];

const FORK_B: [&str; 6] = ["1'", "3'", "1", "2", "3", "4"];

fn fork_ctx(drop_a1: bool) -> Result<ReesContext> {
    let z2 = FiniteGroup::cyclic(2)?;
    let skip = usize::from(drop_a1);
    let rows: Vec<&[i8]> = TF_CT[skip..].to_vec();
    let m = pattern(&z2, &rows);
    make_rees(z2, numbered("a", 7)[skip..].to_vec(), labels(&FORK_B), m, true)
}

pub fn tall_fork() -> Result<Built> {
    let ctx = fork_ctx(false)?;
    let extras = vec![
        ("sigma".into(), lpf(&["(1' 3')"], &ctx)),
        ("tau".into(), lpf(&["(1 2 3 4)"], &ctx)),
        ("r".into(), lpf(&["1'->1", "3'->-3"], &ctx)),
    ];
    finish("TF", ctx, extras)
}

pub fn tfa1() -> Result<Built> {
    let ctx = fork_ctx(true)?;
    let extras = vec![
        ("sigma".into(), lpf(&["(1' 3')"], &ctx)),
        ("tau".into(), lpf(&["(1 2 3 4)"], &ctx)),
        ("r".into(), lpf(&["1'->1", "3'->-3"], &ctx)),
    ];
    finish("TFA1", ctx, extras)
}

pub fn utv() -> Result<Built> {
    let ctx = fork_ctx(true)?;
    let extras = vec![
        ("r".into(), lpf(&["1'->1", "3'->-3"], &ctx)),
        ("t".into(), lpf(&["1'->1", "3'->3"], &ctx)),
        ("sigma".into(), lpf(&["(1' 3')"], &ctx)),
        ("tau".into(), lpf(&["(1 2 3 4)"], &ctx)),
    ];
    finish("UTV", ctx, extras)
}

/// `M_k` over `G⁰` with identity entries, printed (`A × B`) orientation.
pub fn mk_matrix(group: &FiniteGroup, k: usize) -> Vec<Vec<ZeroOrElement>> {
    make_mk(k)
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.then_some(group.identity())).collect())
        .collect()
}

/// `M⁰(G, A, {1..k}, M_kᵀ)`, rows labeled `a1..ak, a1'..ak'`.
pub fn mk_context(group: FiniteGroup, k: usize) -> Result<ReesContext> {
    let m = mk_matrix(&group, k);
    make_rees(group, mk_row_labels(k), numbered("", k), m, true)
}

pub fn birip() -> Result<Built> {
    let z2 = FiniteGroup::cyclic(2)?;
    let m2 = make_mk(2);
    let m4 = make_mk(4);
    let mut rows: Vec<Vec<ZeroOrElement>> = Vec::new();
    let one = Some(z2.identity());
    for r in &m2 {
        rows.push(r.iter().map(|&v| if v { one } else { None }).chain([None; 4]).collect());
    }
    for r in &m4 {
        rows.push([None; 2].into_iter().chain(r.iter().map(|&v| if v { one } else { None })).collect());
    }
    let a = ["a1", "a2", "a1'", "a2'", "b1", "b2", "b3", "b4", "b1'", "b2'", "b3'", "b4'"];
    // M_2 as printed repeats the row (1 1); the copy is dropped so that C is GM.
    let ctx = make_rees(z2, labels(&a), labels(&FORK_B), rows, true)?.dedup_columns();
    let extras = vec![
        ("g2".into(), lpf(&["(1' 3')"], &ctx)),
        ("a".into(), lpf(&["1->4", "2->3"], &ctx)),
        ("s".into(), lpf(&["1'->1", "3'->-3"], &ctx)),
    ];
    finish("BIRIP", ctx, extras)
}

pub fn cbirip() -> Result<Built> {
    let ctx = mk_context(FiniteGroup::cyclic(2)?, 4)?;
    let extras = vec![
        ("a".into(), lpf(&["1->4", "2->3"], &ctx)),
        ("b".into(), lpf(&["(1 3)(2 4)"], &ctx)),
        ("s".into(), lpf(&["2->1", "4->-3"], &ctx)),
    ];
    finish("CBIRIP", ctx, extras)
}

fn rg_ctx() -> Result<ReesContext> {
    let z2 = FiniteGroup::cyclic(2)?;
    let rows: [&[i8]; 9] = [
        &[1, 1, 0, 0, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0, 0, 0],
        &[0, 1, 0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 0, 0, 1],
    ];
    let m = pattern(&z2, &rows);
    make_rees(z2, numbered("a", 9), labels(&["1'", "3'", "1", "2", "3", "4", "1R", "2R"]), m, true)
}

fn rube_goldberg(name: &str, switch: (&str, &[&str])) -> Result<Built> {
    let ctx = rg_ctx()?;
    let extras = vec![
        ("a".into(), lpf(&["(1 4)(2 3)"], &ctx)),
        ("b".into(), lpf(&["(1 3)(2 4)"], &ctx)),
        ("c".into(), lpf(&["(1' 3')"], &ctx)),
        ("s".into(), lpf(&["1'->1", "3'->-3"], &ctx)),
        (switch.0.into(), lpf(switch.1, &ctx)),
        ("xR".into(), lpf(&["1R->-2R", "2R->1R"], &ctx)),
    ];
    finish(name, ctx, extras)
}

pub fn rg1() -> Result<Built> {
    rube_goldberg("RG1", ("r1", &["1->1R", "2->2R"]))
}

pub fn rg2() -> Result<Built> {
    rube_goldberg("RG2", ("r2", &["1->1R", "3->-2R"]))
}

/// Every labeled partial function on `n` points over `group`.
fn all_lpfs(n: usize, group: &FiniteGroup) -> Vec<Lpf> {
    let choices: Vec<Option<(GroupElem, usize)>> = std::iter::once(None)
        .chain((0..n).flat_map(|t| group.elements().map(move |g| Some((g, t)))))
        .collect();
    let mut out = vec![Lpf::empty(n)];
    for b in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                choices.iter().map(move |&c| {
                    let mut f = f.clone();
                    f.set(b, c);
                    f
                })
            })
            .collect();
    }
    out
}

/// The full translational hull of `M⁰(G, 8 rows, 4, M_4ᵀ)`, with the given named
/// elements listed first among the non-ideal generators.
fn hull_of_i4(group: FiniteGroup, named: Vec<(String, Lpf)>) -> Result<Built> {
    let ctx = mk_context(group, 4)?;
    let mut extras = named;
    let mut table = generate(&ctx, &extras, true, DEFAULT_BUDGET)?;
    let mut k = 0;
    for f in all_lpfs(4, ctx.group()) {
        if table.index_of(&f).is_none() && in_hull(&ctx, &f) {
            k += 1;
            extras.push((format!("h{k}"), f));
            table = generate(&ctx, &extras, true, DEFAULT_BUDGET)?;
        }
    }
    Ok(Built { name: String::new(), ctx, extras, table })
}

/// `Ω(I_4)`: continuous partial functions on the 4-cycle plus the ideal.
pub fn omega_i4() -> Result<Built> {
    let mut b = hull_of_i4(FiniteGroup::trivial(), Vec::new())?;
    b.name = "Omega(I4)".into();
    Ok(b)
}

pub fn t4(group: &FiniteGroup) -> Result<Built> {
    let omega = omega_i4()?;
    let (ctx, table) = reduced_product(group, &omega.ctx, &omega.table)?;
    let extras = omega.extras.clone();
    Ok(Built { name: "T4".into(), ctx, extras, table })
}

pub fn s4(group: &FiniteGroup) -> Result<Built> {
    let g = group
        .elements()
        .find(|&g| g != group.identity())
        .ok_or_else(|| Error::Validation("S4 needs a non-trivial group".into()))?;
    let l: Vec<String> = numbered("", 4);
    let named = vec![
        ("s13".to_string(), Lpf::parse(&["(1 3)".into()], group, &l)?),
        ("t1234".to_string(), Lpf::parse(&["(1 2 3 4)".into()], group, &l)?),
        ("f".to_string(), Lpf::from_edges(4, &[(0, group.identity(), 2), (2, g, 0)])?),
    ];
    let mut b = hull_of_i4(group.clone(), named)?;
    b.name = "S4".into();
    Ok(b)
}

/// `C_n(k, l) = x^{kl}` over `Z_n`.
pub fn make_character_table(n: usize) -> Vec<Vec<GroupElem>> {
    (0..n).map(|k| (0..n).map(|l| GroupElem(((k * l) % n) as u16)).collect()).collect()
}

/// `X C_n = C_n Y` with `X` the cycle shift `X(i, i+1) = 1` and `Y(i,i) = x^i`.
pub fn verify_linkage_identity(n: usize) -> bool {
    let c = make_character_table(n);
    let zn = FiniteGroup::cyclic(n).expect("n >= 1");
    (0..n).all(|i| {
        (0..n).all(|j| {
            // (XC)(i, j) = C(i+1, j);  (CY)(i, j) = C(i, j) x^j.
            let xc = c[(i + 1) % n][j];
            let cy = zn.mul(c[i][j], GroupElem(j as u16));
            xc == cy
        })
    })
}

/// The odd-to-even map `2i-1 ↦ 2i` weighted by the character of `x^k`.
pub fn character_generator(k: usize, group: &FiniteGroup) -> Lpf {
    let edges: Vec<(usize, GroupElem, usize)> = (0..4)
        .map(|i| (2 * i, group.power_of_generator(k * i).expect("cyclic"), 2 * i + 1))
        .collect();
    Lpf::from_edges(8, &edges).expect("valid edges")
}

pub fn s2() -> Result<Built> {
    let z4 = FiniteGroup::cyclic(4)?;
    let ctx = mk_context(z4, 8)?;
    let mut extras = vec![
        ("a".into(), lpf(&["(1 3 5 7)(2 4 6 8)"], &ctx)),
        ("b".into(), lpf(&["8->1", "7->2"], &ctx)),
    ];
    for k in 1..=3 {
        let name = if k == 1 { "sx".to_string() } else { format!("sx{k}") };
        extras.push((name, character_generator(k, ctx.group())));
    }
    finish("S2", ctx, extras)
}

pub fn catalog_build(name: &str) -> Result<Built> {
    let z2 = || FiniteGroup::cyclic(2);
    match name {
        "TF" => tall_fork(),
        "TFA1" => tfa1(),
        "UTV" => utv(),
        "BIRIP" => birip(),
        "CBIRIP" => cbirip(),
        "RG1" => rg1(),
        "RG2" => rg2(),
        "T4" => t4(&z2()?),
        "S4" => s4(&z2()?),
        "S2" => s2(),
        other => Err(Error::UnknownEntry(other.to_string())),
    }
}
