//! Loop and vacuum are closure operators: applying either twice changes
//! nothing. Checked on every reachable state of TF, UTV and S2.

mod common;

use common::closure_idempotent;
use krlab_core::green::is_aperiodic;
use krlab_core::verify::{rz, ts_of};
use proptest::prelude::*;

#[test]
fn tall_fork() {
    closure_idempotent("TF").unwrap();
}

#[test]
fn using_the_vacuum() {
    closure_idempotent("UTV").unwrap();
}

#[test]
fn character_table_example() {
    closure_idempotent("S2").unwrap();
}
proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rz_is_aperiodic(n in 1usize..=8) {
        let ts = ts_of(&rz(n)).unwrap();
        prop_assert!(is_aperiodic(&ts));
        // On one state the constant is the identity.
        prop_assert_eq!(ts.len(), if n == 1 { 1 } else { n + 1 });
    }
}
