//! Linked partners: uniqueness and re-verification on every catalog matrix,
//! and the cycle continuity criterion against the solver.

use krlab_core::catalog::{catalog_build, mk_context, NAMES};
use krlab_core::hull::{cycle_continuity, in_hull, link_solution_counts, link_solve, verify_link, RowMonomial};
use std::sync::OnceLock;

use krlab_core::rees::ReesContext;
use krlab_core::{FiniteGroup, Lpf};
use proptest::prelude::*;

#[test]
fn every_non_ideal_element_has_exactly_one_partner() {
    for name in NAMES {
        let b = catalog_build(name).unwrap();
        for i in (0..b.table.len()).filter(|&i| !b.table.in_ideal(i)) {
            let x = RowMonomial::from_lpf(b.table.element(i));
            let counts = link_solution_counts(&b.ctx, &x);
            assert!(counts.iter().all(|&c| c == 1), "{name}: element {i} has partner counts {counts:?}");
            let y = link_solve(&b.ctx, &x).expect("element of the hull");
            assert!(verify_link(&b.ctx, &x, &y), "{name}: partner of element {i} fails CY = XC");
        }
    }
}

fn random_lpf(ng: usize, nb: usize) -> impl Strategy<Value = Vec<Option<(usize, usize)>>> {
    prop::collection::vec(prop::option::weighted(0.8, (0..ng, 0..nb)), nb)
}

fn to_lpf(group: &FiniteGroup, nb: usize, raw: &[Option<(usize, usize)>]) -> Lpf {
    let elems: Vec<_> = group.elements().collect();
    let edges: Vec<_> = raw.iter().enumerate().filter_map(|(s, e)| e.map(|(g, t)| (s, elems[g], t))).collect();
    Lpf::from_edges(nb, &edges).unwrap()
}

fn contexts() -> &'static [ReesContext] {
    static CTX: OnceLock<Vec<ReesContext>> = OnceLock::new();
    CTX.get_or_init(|| NAMES.iter().map(|n| catalog_build(n).unwrap().ctx).collect())
}

fn any_entry_map() -> impl Strategy<Value = (usize, Vec<Option<(usize, usize)>>)> {
    (0..NAMES.len()).prop_flat_map(|e| {
        let ctx = &contexts()[e];
        (Just(e), random_lpf(ctx.group().order(), ctx.nb()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn solutions_are_unique_and_verified((entry, raw) in any_entry_map()) {
        let ctx = &contexts()[entry];
        let f = to_lpf(ctx.group(), ctx.nb(), &raw);
        let x = RowMonomial::from_lpf(&f);
        let counts = link_solution_counts(ctx, &x);
        prop_assert!(counts.iter().all(|&c| c <= 1), "GM context admits at most one partner");
        match link_solve(ctx, &x) {
            Some(y) => {
                prop_assert!(verify_link(ctx, &x, &y));
                prop_assert!(counts.iter().all(|&c| c == 1));
            }
            None => prop_assert!(counts.contains(&0)),
        }
    }

    #[test]
    fn continuity_matches_solver(k in 3usize..=7, raw in prop::collection::vec(prop::option::of(0usize..7), 7)) {
        let map: Vec<Option<usize>> = raw[..k].iter().map(|t| t.map(|t| t % k)).collect();
        let ctx = mk_context(FiniteGroup::trivial(), k).unwrap();
        let f = Lpf::from_map(&map, ctx.group());
        prop_assert_eq!(cycle_continuity(k, &map), in_hull(&ctx, &f), "map {:?}", map);
    }
}
