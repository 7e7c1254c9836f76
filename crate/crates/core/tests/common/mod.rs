//! Brute-force oracles shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::HashMap;

use krlab_core::catalog::catalog_build;
use krlab_core::congruence::{point_action, tilson_congruence};
use krlab_core::hull::in_hull;
use krlab_core::rees::make_rees;
use krlab_core::semigroup::generate;
use krlab_core::engine::{Engine, EngineConfig, SearchBounds};
use krlab_core::rhodes::{rh_to_sp, sp_to_rh, SetPartitionPair, Spc};
use krlab_core::wff::Wff;
use krlab_core::{FiniteGroup, Lpf};
use proptest::prelude::*;

pub fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

/// Every element of Rh_B(G), found as the invariant cross-sections of
/// SP(G × B), with the contradiction first.
pub fn lattice(group: &FiniteGroup, nb: usize) -> Vec<Spc> {
    let n = group.order() * nb;
    let mut out = vec![Spc::Contradiction];
    for mask in 0u32..(1 << n) {
        let items: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        for p in partitions(&items) {
            if let Some(s) = sp_to_rh(&SetPartitionPair::new(n, p), group, nb) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

/// The order pulled back from SP(G × B). Over the trivial group the image of
/// the contradiction coincides with the one-block partition, so it is put on
/// top by hand.
fn order(elems: &[Spc], group: &FiniteGroup, nb: usize) -> Vec<Vec<bool>> {
    let sp: Vec<SetPartitionPair> = elems.iter().map(|e| rh_to_sp(e, group, nb)).collect();
    (0..sp.len())
        .map(|i| (0..sp.len()).map(|j| j == 0 || (i != 0 && sp[i].leq(&sp[j]))).collect())
        .collect()
}

fn extreme(below: &[Vec<bool>], cands: &[usize], up: bool) -> Result<usize, String> {
    let best: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&c| cands.iter().all(|&d| if up { below[c][d] } else { below[d][c] }))
        .collect();
    match best[..] {
        [b] => Ok(b),
        _ => Err(format!("{} candidates for an extreme bound", best.len())),
    }
}

/// Order, join and meet against the oracle, then the lattice laws on every
/// pair and triple. Returns the number of elements.
pub fn lattice_laws(group: &FiniteGroup, nb: usize) -> Result<usize, String> {
    let elems = lattice(group, nb);
    let below = order(&elems, group, nb);
    let n = elems.len();
    let idx = |s: &Spc| elems.iter().position(|e| e == s).ok_or_else(|| format!("{s:?} is outside the lattice"));
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (p, q) = (&elems[i], &elems[j]);
            if p.leq(q, group) != below[i][j] {
                return Err(format!("order disagrees on {p:?} <= {q:?}"));
            }
            join[i][j] = idx(&p.join(q, group))?;
            meet[i][j] = idx(&p.meet(q, group))?;
            let ub: Vec<usize> = (0..n).filter(|&k| below[i][k] && below[j][k]).collect();
            let lb: Vec<usize> = (0..n).filter(|&k| below[k][i] && below[k][j]).collect();
            if join[i][j] != extreme(&below, &ub, true)? {
                return Err(format!("join of {p:?} and {q:?} is not the least upper bound"));
            }
            if meet[i][j] != extreme(&below, &lb, false)? {
                return Err(format!("meet of {p:?} and {q:?} is not the greatest lower bound"));
            }
        }
    }
    let bottom = idx(&Spc::bottom())?;
    for i in 0..n {
        let laws = join[i][i] == i && meet[i][i] == i && join[i][bottom] == i && join[i][0] == 0;
        if !laws {
            return Err(format!("idempotence or bounds fail at {:?}", elems[i]));
        }
        for j in 0..n {
            if join[i][j] != join[j][i] || meet[i][j] != meet[j][i] {
                return Err("commutativity".into());
            }
            if join[i][meet[i][j]] != i || meet[i][join[i][j]] != i {
                return Err(format!("absorption fails on {:?}, {:?}", elems[i], elems[j]));
            }
            for k in 0..n {
                if join[join[i][j]][k] != join[i][join[j][k]] || meet[meet[i][j]][k] != meet[i][meet[j][k]] {
                    return Err("associativity".into());
                }
            }
        }
    }
    Ok(n)
}

/// Set partitions of `0..n` as restricted growth strings.
pub fn labelings(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max {
            cur[i] = c;
            rec(i + 1, max.max(c + 1), cur, out);
        }
    }
    let mut out = Vec::new();
    rec(1, 1, &mut vec![0; n], &mut out);
    out
}

/// Meet of all congruences that every action maps injectively on classes.
pub fn minimal_injective_congruence(actions: &[Vec<Option<usize>>], n: usize) -> Vec<Vec<usize>> {
    let mut meet: Vec<usize> = vec![0; n];
    for p in labelings(n) {
        let injective = actions.iter().all(|f| {
            (0..n).all(|x| {
                (0..n).all(|y| match (f[x], f[y]) {
                    (Some(u), Some(v)) => (p[x] == p[y]) == (p[u] == p[v]),
                    _ => true,
                })
            })
        });
        if injective {
            let mut ids = HashMap::new();
            meet = (0..n)
                .map(|x| {
                    let k = ids.len();
                    *ids.entry((meet[x], p[x])).or_insert(k)
                })
                .collect();
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen = HashMap::new();
    for (x, l) in meet.into_iter().enumerate() {
        let k = *seen.entry(l).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(x);
    }
    classes
}

/// Loop and vacuum idempotence on every reachable state of a catalog entry.
/// Returns the number of states checked.
pub fn closure_idempotent(name: &str) -> Result<usize, String> {
    let b = catalog_build(name).map_err(|e| e.to_string())?;
    let e = Engine::new(&b.ctx, &b.table, EngineConfig::default());
    let states = e.states(&SearchBounds::default()).map_err(|e| e.to_string())?;
    let loops: Vec<Wff> = e
        .letters()
        .iter()
        .filter(|l| !l.ideal)
        .map(|l| Wff::looped(Wff::letter(l.name.clone())))
        .collect();
    for p in &states.states {
        let v = e.vacuum(p).map_err(|e| e.to_string())?;
        if e.vacuum(&v).map_err(|e| e.to_string())? != v {
            return Err(format!("{name}: V is not idempotent at {}", e.show(p)));
        }
        for w in &loops {
            let once = e.eval(w, p).map_err(|e| e.to_string())?;
            let twice = e.eval(w, &once).map_err(|e| e.to_string())?;
            if twice != once {
                return Err(format!("{name}: {w} is not idempotent at {}", e.show(p)));
            }
        }
    }
    Ok(states.len())
}

pub type TilsonInstance = (usize, Vec<Vec<i8>>, Vec<Vec<Option<(bool, usize)>>>);

/// (group order, rows of the A × B matrix as 0 / 1 / -1 entries, extra maps).
pub fn tilson_instance() -> impl Strategy<Value = TilsonInstance> {
    (1usize..=2, 1usize..=4).prop_flat_map(|(ng, na)| (Just(ng), 1..=8 / ng, Just(na))).prop_flat_map(|(ng, nb, na)| {
        let entry = if ng == 2 { prop_oneof![Just(0i8), Just(1), Just(-1)].boxed() } else { prop_oneof![Just(0i8), Just(1)].boxed() };
        let rows = prop::collection::vec(prop::collection::vec(entry, nb), na);
        let map = prop::collection::vec(prop::option::of((any::<bool>(), 0..nb)), nb);
        (Just(ng), rows, prop::collection::vec(map, 0..=2))
    })
}

fn regular(rows: &[Vec<i8>]) -> bool {
    rows.iter().all(|r| r.iter().any(|&v| v != 0)) && (0..rows[0].len()).all(|b| rows.iter().any(|r| r[b] != 0))
}

/// Builds the instance and compares with the oracle; `Ok(None)` when the
/// matrix has a zero row or column.
pub fn tilson_agrees((ng, rows, maps): &TilsonInstance) -> Result<Option<usize>, String> {
    if !regular(rows) {
        return Ok(None);
    }
    let group = FiniteGroup::cyclic(*ng).map_err(|e| e.to_string())?;
    let minus = group.elements().last().unwrap();
    let nb = rows[0].len();
    let a: Vec<String> = (1..=rows.len()).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (1..=nb).map(|i| i.to_string()).collect();
    let m = rows
        .iter()
        .map(|r| r.iter().map(|&v| (v != 0).then(|| if v > 0 { group.identity() } else { minus })).collect())
        .collect();
    let ctx = make_rees(group.clone(), a, b, m, true).map_err(|e| e.to_string())?;
    let extras: Vec<(String, Lpf)> = maps
        .iter()
        .enumerate()
        .filter_map(|(k, map)| {
            let edges: Vec<_> = map
                .iter()
                .enumerate()
                .filter_map(|(s, e)| e.map(|(neg, t)| (s, if neg { minus } else { group.identity() }, t)))
                .collect();
            let f = Lpf::from_edges(nb, &edges).ok()?;
            in_hull(&ctx, &f).then(|| (format!("x{k}"), f))
        })
        .collect();
    let table = generate(&ctx, &extras, true, 20_000).map_err(|e| e.to_string())?;
    let actions: Vec<Vec<Option<usize>>> = (0..table.len()).map(|i| point_action(&table, i)).collect();
    let got = tilson_congruence(&ctx, &table);
    let want = minimal_injective_congruence(&actions, ng * nb);
    if got != want {
        return Err(format!("matrix {rows:?}, {} extras: {got:?} vs {want:?}", extras.len()));
    }
    Ok(Some(ng * nb))
}
