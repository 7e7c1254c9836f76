//! Tilson congruence against the meet of all injective congruences, on random
//! regular matrices with |G × B| <= 8 and random hull generators.

mod common;

use common::{tilson_agrees, tilson_instance};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn matches_brute_force(inst in tilson_instance()) {
        prop_assume!(tilson_agrees(&inst).map_err(TestCaseError::fail)?.is_some());
    }
}
