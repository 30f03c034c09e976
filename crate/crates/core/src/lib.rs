//! Group-theoretic enumeration of Hopf–Galois structure data.
//!
//! The crate builds holomorphs of every group of a supported order, lists
//! their transitive subgroups up to conjugacy, and checks which index-n
//! subgroups of those groups give a quotient pair that is realized in some
//! holomorph.

pub mod autohol;
pub mod error;
pub mod grouplib;
pub mod hgs;
pub mod isomorphism;
pub mod permgrp;
pub mod pqtheory;
pub mod subgroups;

pub use error::{Error, Result};
pub use grouplib::{AbstractGroup, GroupCatalogue};
pub use permgrp::{CosetActionResult, PermGroup, Permutation};
