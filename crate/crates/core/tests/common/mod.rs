#![allow(dead_code)]

use std::collections::BTreeSet;

use hgs_core::autohol::{hall_decomposition, holomorph};
use hgs_core::grouplib::groups_of_order;
use hgs_core::hgs::build_catalogue;
use hgs_core::isomorphism::PairWitness;
use hgs_core::permgrp::Elt;
use hgs_core::subgroups::{index_n_lattice, subgroup_lattice};
use hgs_core::{PermGroup, Permutation};

/// All subgroups by brute force: closures of at most two elements, then
/// repeated extension by single elements until nothing new appears.
pub fn brute_subgroups(g: &PermGroup) -> BTreeSet<Vec<Elt>> {
    let e = g.enumerate().unwrap();
    let n = e.len() as Elt;
    let mut all: BTreeSet<Vec<Elt>> = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            all.insert(e.closure(&[a, b]));
        }
    }
    let mut frontier: Vec<Vec<Elt>> = all.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        let gens = e.generating_set(&h);
        for x in 0..n {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut gx = gens.clone();
            gx.push(x);
            let k = e.closure(&gx);
            if all.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    all
}

/// Every subgroup in the lattice, conjugates expanded.
pub fn lattice_subgroups(g: &PermGroup) -> BTreeSet<Vec<Elt>> {
    let lat = subgroup_lattice(g, None, 1_000_000).unwrap();
    let mut out = BTreeSet::new();
    for c in 0..lat.classes.len() {
        let conj: Vec<&Vec<Elt>> = lat.conjugates(c).collect();
        assert_eq!(conj.len(), lat.classes[c].class_size);
        out.extend(conj.into_iter().cloned());
    }
    out
}

/// Holomorphs of degree at most 8 and their transitive subgroups, limited
/// to order 100.
pub fn corpus() -> Vec<PermGroup> {
    let mut out = Vec::new();
    for n in 2..=8 {
        for g in &groups_of_order(n).unwrap().groups {
            let hol = holomorph(g).unwrap();
            if hol.group.order() <= 100 {
                out.push(hol.group.clone());
            }
        }
        for e in build_catalogue(n).unwrap().entries {
            if e.order <= 100 {
                out.push(e.group);
            }
        }
    }
    out
}

pub fn elements_in(h: &PermGroup, u: &PermGroup) -> PermGroup {
    let e = h.enumerate().unwrap();
    let inside: Vec<Elt> = e
        .elements()
        .filter(|&x| u.contains(&e.permutation(x)))
        .collect();
    e.subgroup_perm_group(&e.generating_set(&inside))
}

#[derive(Debug, Default)]
pub struct HallStats {
    /// Index-`n` subgroups examined, conjugates included.
    pub subgroups: usize,
    /// Subgroups with `Core_G(H) != Core_G(H ∩ U)`.
    pub core_mismatches: Vec<(String, PermGroup, PermGroup)>,
}

/// Checks, for every transitive `G ≤ Hol(N)` at squarefree degree `n`:
/// `G = U ⋊ V` with `U = G ∩ Q`; every index-`n` subgroup `H` satisfies
/// `|H ∩ U|·|V| = |H|` and contains a conjugate of `V`; and
/// `Core_G(H) ∩ U = Core_G(H ∩ U)`. Panics on any violation. Pairs with
/// `Core_G(H) != Core_G(H ∩ U)` are collected, not asserted.
pub fn hall_structure(n: u64) -> HallStats {
    let lib = groups_of_order(n).unwrap();
    let cat = build_catalogue(n).unwrap();
    let mut stats = HallStats::default();
    for label in &cat.types {
        let hol = holomorph(lib.by_name(label).unwrap()).unwrap();
        for entry in cat.entries_of_type(label) {
            let g = &entry.group;
            let (u, v) = hall_decomposition(&hol, g).unwrap();
            assert!(u.is_normal_in(g));
            assert_eq!(u.order() * v.order(), g.order());
            assert!(elements_in(&v, &u).is_trivial());
            let elems = g.elements().unwrap();
            let lat = index_n_lattice(g, n).unwrap();
            let e = &lat.elements;
            for (c, class) in lat.classes.iter().enumerate() {
                if class.order * n != g.order() {
                    continue;
                }
                for h_elts in lat.conjugates(c) {
                    let h = e.subgroup_perm_group(&e.generating_set(h_elts));
                    let hu = elements_in(&h, &u);
                    assert_eq!(hu.order() * v.order(), h.order());
                    let conj = elems.iter().any(|x| h.contains_group(&v.conjugate_by(x)));
                    assert!(conj, "no conjugate of V in H");
                    let core = g.normal_core(&h).unwrap();
                    let core_u = g.normal_core(&hu).unwrap();
                    assert!(elements_in(&core, &u).same_group(&core_u));
                    if !core.same_group(&core_u) {
                        stats.core_mismatches.push((label.clone(), g.clone(), h));
                    }
                    stats.subgroups += 1;
                }
            }
        }
    }
    assert!(stats.subgroups > 0);
    stats
}

/// `g ⊕ h` acting on `deg(g) + deg(h)` points.
fn sum(g: &Permutation, h: &Permutation) -> Permutation {
    let d = g.degree();
    let mut img = g.to_vec();
    img.extend(h.to_vec().into_iter().map(|x| x + d));
    Permutation::from_images(img).unwrap()
}

/// Rechecks a witness from scratch: the generator assignment extends to a
/// homomorphism iff the diagonal group `⟨g_i ⊕ φ(g_i)⟩` has order `|G|`; it
/// is then bijective iff the images generate `M` of the same order, and
/// the image of `G_sub` is read off the diagonal elements.
pub fn witness_is_sound(
    g: &PermGroup,
    gs: &PermGroup,
    m: &PermGroup,
    ms: &PermGroup,
    w: &PairWitness,
) -> bool {
    if w.generators.len() != w.images.len() || !w.verified {
        return false;
    }
    if !PermGroup::new(g.degree(), w.generators.clone())
        .unwrap()
        .same_group(g)
    {
        return false;
    }
    let diag: Vec<Permutation> = w
        .generators
        .iter()
        .zip(&w.images)
        .map(|(a, b)| sum(a, b))
        .collect();
    let diag = PermGroup::new(g.degree() + m.degree(), diag).unwrap();
    if diag.order() != g.order() || m.order() != g.order() {
        return false;
    }
    if !PermGroup::new(m.degree(), w.images.clone())
        .unwrap()
        .same_group(m)
    {
        return false;
    }
    let d = g.degree();
    let mut image_count = 0;
    for x in diag.elements().unwrap() {
        let v = x.to_vec();
        let left = Permutation::from_images(v[..d].to_vec()).unwrap();
        if gs.contains(&left) {
            let right = Permutation::from_images(v[d..].iter().map(|y| y - d).collect()).unwrap();
            if !ms.contains(&right) {
                return false;
            }
            image_count += 1;
        }
    }
    image_count as u64 == ms.order()
}

/// `Core_G(H)` is normal, lies in `H` and contains every normal subgroup of
/// `G` inside `H`, for every subgroup `H`.
pub fn core_characterization(g: &PermGroup) -> bool {
    let lat = subgroup_lattice(g, None, 1_000_000).unwrap();
    let e = &lat.elements;
    let normals: Vec<&Vec<Elt>> = lat
        .classes
        .iter()
        .filter(|c| c.class_size == 1)
        .map(|c| &c.elements)
        .collect();
    for i in 0..lat.classes.len() {
        for h_elts in lat.conjugates(i) {
            let h = e.subgroup_perm_group(&e.generating_set(h_elts));
            let core = g.normal_core(&h).unwrap();
            if !core.is_normal_in(g) || !h.contains_group(&core) {
                return false;
            }
            for n in &normals {
                let inside = n.iter().all(|x| h_elts.binary_search(x).is_ok());
                if inside && !n.iter().all(|&x| core.contains(&e.permutation(x))) {
                    return false;
                }
            }
        }
    }
    true
}
