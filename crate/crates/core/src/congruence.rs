//! The Tilson congruence on `G × B`.

use crate::rees::ReesContext;
use crate::semigroup::{type_ii, SemigroupTable};

/// Point `(g, b)` has index `b·|G| + g`, as in [`crate::rhodes::rh_to_sp`].
pub fn point_index(order: usize, g: usize, b: usize) -> usize {
    b * order + g
}

/// Image of every point under element `i` of the table.
pub fn point_action(table: &SemigroupTable, i: usize) -> Vec<Option<usize>> {
    let group = table.group();
    let n = group.order();
    let f = table.element(i);
    let mut out = vec![None; n * table.points()];
    for b in 0..table.points() {
        for g in group.elements() {
            out[point_index(n, g.index(), b)] =
                f.act(group, g, b).map(|(h, t)| point_index(n, h.index(), t));
        }
    }
    out
}

/// Classes of mutual reachability under `S_II ∩ I(S)`, listed by least member.
pub fn tilson_congruence(_ctx: &ReesContext, table: &SemigroupTable) -> Vec<Vec<usize>> {
    let n = table.group().order() * table.points();
    let t2 = type_ii(table);
    let mut reach = vec![vec![false; n]; n];
    for x in 0..n {
        reach[x][x] = true;
    }
    for &i in t2.members.iter().filter(|&&i| table.in_ideal(i)) {
        for (x, y) in point_action(table, i).into_iter().enumerate() {
            if let Some(y) = y {
                reach[x][y] = true;
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (x..n).filter(|&y| reach[x][y] && reach[y][x]).collect();
        for &y in &members {
            class_of[y] = classes.len();
        }
        classes.push(members);
    }
    classes
}
