use std::collections::BTreeMap;

use serde::Serialize;

use crate::permgrp::{derived_elements, EnumeratedGroup};

/// Isomorphism invariants used to reject non-isomorphic pairs cheaply.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantVector {
    pub order: u64,
    /// `(element order, count)`, sorted.
    pub element_orders: Vec<(u32, usize)>,
    /// Conjugacy class sizes, sorted.
    pub class_sizes: Vec<usize>,
    /// `((element order, class size), count)`, sorted.
    pub joint: Vec<((u32, usize), usize)>,
    pub derived_order: u64,
    pub center_order: u64,
}

impl InvariantVector {
    pub fn of(e: &EnumeratedGroup) -> Self {
        let mut orders: BTreeMap<u32, usize> = BTreeMap::new();
        for x in e.elements() {
            *orders.entry(e.elt_order(x)).or_default() += 1;
        }
        let cls = e.conjugacy_classes();
        let mut class_sizes: Vec<usize> = cls.classes.iter().map(|c| c.len()).collect();
        class_sizes.sort_unstable();
        let mut joint: BTreeMap<(u32, usize), usize> = BTreeMap::new();
        for c in &cls.classes {
            *joint.entry((e.elt_order(c[0]), c.len())).or_default() += c.len();
        }
        let all: Vec<_> = e.elements().collect();
        InvariantVector {
            order: e.order(),
            element_orders: orders.into_iter().collect(),
            class_sizes,
            joint: joint.into_iter().collect(),
            derived_order: derived_elements(e, &all).len() as u64,
            center_order: e.center().len() as u64,
        }
    }
}
