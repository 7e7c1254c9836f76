//! Finite semigroup machinery for Krohn-Rhodes complexity: Rees matrix
//! group-mapping semigroups, the Rhodes lattice of SPCs, closure-operator flows
//! and their certificates.

pub mod bounds;
pub mod catalog;
pub mod congruence;
pub mod engine;
pub mod error;
pub mod format;
pub mod green;
pub mod group;
pub mod hull;
pub mod lpf;
pub mod manifest;
pub mod rees;
pub mod rhodes;
pub mod semigroup;
pub mod verify;
pub mod wff;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupElem, GroupSpec, ZeroOrElement};
pub use lpf::{LabeledPartialFunction, Lpf};
pub use rees::{make_rees, IdealElement, ReesContext};
pub use semigroup::{SemigroupTable, Subsemigroup};
