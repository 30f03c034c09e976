//! Abstract isomorphism and pair isomorphism.
//!
//! Two pairs `(G, G_sub)` and `(M, M_sub)` are pair-isomorphic when some
//! isomorphism `G -> M` maps `G_sub` onto `M_sub`. For transitive groups
//! with point stabilizers this is the same as being conjugate in the
//! symmetric group by a permutation fixing point 0.

mod invariants;
mod pair;
mod search;

pub use invariants::InvariantVector;
pub use pair::{
    find_isomorphism, pair_isomorphic, pair_isomorphic_data, pair_isomorphic_exhaustive,
    pair_prefilter, permutation_pair_of_quotient, witness_conjugator, PairData, PairWitness,
};
pub use search::{
    automorphism_group_enumerated, compose_maps, find_isomorphism_enumerated, generating_sequence,
    invert_map, is_isomorphism, signatures, AutomorphismData, ElementMap, HomSearch,
};

use crate::grouplib::AbstractGroup;

pub fn are_isomorphic_abstract(a: &AbstractGroup, b: &AbstractGroup) -> bool {
    a.order() == b.order()
        && find_isomorphism_enumerated(&a.regular_enumerated(), &b.regular_enumerated()).is_some()
}
