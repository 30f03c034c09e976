//! Permutations, stabilizer chains and permutation groups.

mod chain;
mod elements;
mod group;
mod perm;

pub use chain::Chain;
pub use elements::{ConjugacyClasses, Elt, EnumeratedGroup};
pub(crate) use group::{derived_elements, CosetTable};
pub use group::{CosetActionResult, GroupJson, PermGroup, DEFAULT_ENUMERATION_LIMIT};
pub(crate) use perm::gcd;
pub use perm::{Permutation, Point};
