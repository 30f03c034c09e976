//! Subgroups up to conjugacy.
//!
//! Subgroups are handled as sorted lists of element indices inside the
//! parent's enumeration. Every conjugate of every class found is stored, so
//! locating the class of an arbitrary subgroup is a hash lookup.
//!
//! Solvable groups are handled by cyclic extension: each nontrivial
//! subgroup `K` has a normal subgroup `H` of prime index, so `K = H<g>` for
//! some `g` in the normalizer of `H` with `g^p ∈ H`. Other groups fall back
//! to extending each class representative by single elements of prime-power
//! order, one per orbit of its normalizer.

use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::autohol::Holomorph;
use crate::error::{Error, Result};
use crate::isomorphism::{
    automorphism_group_enumerated, find_isomorphism_enumerated, InvariantVector,
};
use crate::permgrp::{Elt, EnumeratedGroup, PermGroup, Permutation};

mod affine;

pub use affine::{affine_subgroup_classes, AffineFilter, AffineFrame};

pub const DEFAULT_LATTICE_BOUND: u64 = 100_000;
const MAX_SUBGROUPS: u64 = 20_000_000;

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: PermGroup,
    pub class_size: usize,
    pub order: u64,
    /// sha256 of the sorted element images of the representative.
    pub key: String,
    /// Sorted element indices of the representative in the parent's enumeration.
    pub elements: Vec<Elt>,
}

/// Subgroup classes of a group together with the membership index of all
/// their conjugates.
pub struct SubgroupLattice {
    pub group: PermGroup,
    pub elements: Arc<EnumeratedGroup>,
    pub classes: Vec<SubgroupClass>,
    /// Every conjugate of every class, mapped to its class index.
    index: HashMap<Vec<Elt>, usize>,
}

impl SubgroupLattice {
    /// Class index of the subgroup with sorted element list `s`.
    pub fn class_of(&self, s: &[Elt]) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn conjugates(&self, class: usize) -> impl Iterator<Item = &Vec<Elt>> {
        self.index
            .iter()
            .filter(move |(_, &c)| c == class)
            .map(|(k, _)| k)
    }
}

/// Canonical key of a subgroup: hash of its sorted element permutations.
pub fn canonical_key(e: &EnumeratedGroup, elements: &[Elt]) -> String {
    let mut perms: Vec<&[u16]> = elements.iter().map(|&x| e.perm(x)).collect();
    hash_sorted_perms(e.degree(), &mut perms)
}

fn hash_sorted_perms(degree: usize, perms: &mut [&[u16]]) -> String {
    perms.sort_unstable();
    let mut h = Sha256::new();
    h.update((degree as u64).to_le_bytes());
    for p in perms.iter() {
        for &x in p.iter() {
            h.update(x.to_le_bytes());
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

struct Builder<'a> {
    e: &'a EnumeratedGroup,
    solvable: bool,
    target: Option<u64>,
    all: IndexMap<Vec<Elt>, usize>,
    reps: Vec<Vec<Elt>>,
    sizes: Vec<usize>,
    max_subgroups: u64,
}

impl<'a> Builder<'a> {
    fn admissible(&self, order: usize) -> bool {
        self.target.is_none_or(|t| t % order as u64 == 0)
    }

    fn normalizer(&self, h: &[Elt]) -> Vec<Elt> {
        let e = self.e;
        let mut mask = vec![false; e.len()];
        for &x in h {
            mask[x as usize] = true;
        }
        let gens = e.generating_set(h);
        e.elements()
            .filter(|&g| gens.iter().all(|&x| mask[e.conj(g, x) as usize]))
            .collect()
    }

    /// Candidate supergroups of the class representative `h`.
    fn extensions(&self, h: &[Elt]) -> Vec<Vec<Elt>> {
        if self.solvable {
            self.cyclic_extensions(h)
        } else {
            self.generic_extensions(h)
        }
    }

    fn cyclic_extensions(&self, h: &[Elt]) -> Vec<Vec<Elt>> {
        let e = self.e;
        let mut in_h = vec![false; e.len()];
        for &x in h {
            in_h[x as usize] = true;
        }
        let mut covered = in_h.clone();
        let mut out = Vec::new();
        for g in self.normalizer(h) {
            if covered[g as usize] {
                continue;
            }
            // least m with g^m in H
            let mut m = 1;
            let mut y = g;
            while !in_h[y as usize] {
                y = e.mult(y, g);
                m += 1;
            }
            if !is_prime(m) || !self.admissible(h.len() * m) {
                covered[g as usize] = true;
                continue;
            }
            let mut k: Vec<Elt> = Vec::with_capacity(h.len() * m);
            let mut gi = 0;
            for _ in 0..m {
                for &x in h {
                    k.push(e.mult(x, gi));
                }
                gi = e.mult(gi, g);
            }
            k.sort_unstable();
            for &x in &k {
                covered[x as usize] = true;
            }
            out.push(k);
        }
        out
    }

    fn generic_extensions(&self, h: &[Elt]) -> Vec<Vec<Elt>> {
        let e = self.e;
        let mut covered = vec![false; e.len()];
        for &x in h {
            covered[x as usize] = true;
        }
        let norm_gens = e.generating_set(&self.normalizer(h));
        let h_gens = e.generating_set(h);
        let mut seen = vec![false; e.len()];
        let mut out = Vec::new();
        for g in e.elements() {
            if covered[g as usize] {
                continue;
            }
            if !is_prime_power(e.elt_order(g) as usize) {
                covered[g as usize] = true;
                continue;
            }
            // skip the normalizer orbit of g and generators of the same cyclic group
            let mut stack = vec![g];
            covered[g as usize] = true;
            while let Some(y) = stack.pop() {
                let o = e.elt_order(y) as u64;
                let mut z = y;
                for j in 1..o {
                    if crate::permgrp::gcd(j, o) == 1 && !covered[z as usize] {
                        covered[z as usize] = true;
                        stack.push(z);
                    }
                    z = e.mult(z, y);
                }
                for &n in &norm_gens {
                    let c = e.conj(n, y);
                    if !covered[c as usize] {
                        covered[c as usize] = true;
                        stack.push(c);
                    }
                }
            }
            let mut gens = h_gens.clone();
            gens.push(g);
            let k = e.closure_with(&gens, &mut seen);
            if self.admissible(k.len()) {
                out.push(k);
            }
        }
        out
    }

    /// Adds the conjugacy class of `k` if it is new; returns its id.
    fn add_class(&mut self, k: Vec<Elt>) -> Option<usize> {
        if self.all.contains_key(&k) {
            return None;
        }
        let e = self.e;
        let id = self.reps.len();
        let mut members = vec![k.clone()];
        self.all.insert(k, id);
        let mut i = 0;
        while i < members.len() {
            for &s in e.generators() {
                let mut c: Vec<Elt> = members[i].iter().map(|&x| e.conj(s, x)).collect();
                c.sort_unstable();
                if !self.all.contains_key(&c) {
                    self.all.insert(c.clone(), id);
                    members.push(c);
                }
            }
            i += 1;
        }
        let rep = members.iter().min().unwrap().clone();
        self.sizes.push(members.len());
        self.reps.push(rep);
        Some(id)
    }

    fn run(&mut self) -> Result<()> {
        self.add_class(vec![0]);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            if self.all.len() as u64 > self.max_subgroups {
                return Err(Error::Resource {
                    what: "number of subgroups".into(),
                    limit: self.max_subgroups,
                    progress: self.reps.len() as u64,
                });
            }
            let reps: Vec<&Vec<Elt>> = frontier.iter().map(|&c| &self.reps[c]).collect();
            let found: Vec<Vec<Vec<Elt>>> = reps.par_iter().map(|h| self.extensions(h)).collect();
            let mut next = Vec::new();
            for k in found.into_iter().flatten() {
                if let Some(id) = self.add_class(k) {
                    next.push(id);
                }
            }
            frontier = next;
        }
        Ok(())
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|p| n % p == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Builds the lattice of subgroups whose order divides `target` (all
/// subgroups if `None`).
pub fn subgroup_lattice(g: &PermGroup, target: Option<u64>, bound: u64) -> Result<SubgroupLattice> {
    let order = g.order();
    if target.is_none() && order > bound {
        return Err(Error::Resource {
            what: "group order for full subgroup lattice".into(),
            limit: bound,
            progress: 0,
        });
    }
    let e = g.enumerate()?;
    let mut b = Builder {
        e: &e,
        solvable: g.is_solvable()?,
        target,
        all: IndexMap::new(),
        reps: Vec::new(),
        sizes: Vec::new(),
        max_subgroups: MAX_SUBGROUPS,
    };
    b.run()?;
    let mut order_idx: Vec<usize> = (0..b.reps.len()).collect();
    order_idx.sort_by(|&x, &y| (b.reps[x].len(), &b.reps[x]).cmp(&(b.reps[y].len(), &b.reps[y])));
    let mut renumber = vec![0; b.reps.len()];
    for (new, &old) in order_idx.iter().enumerate() {
        renumber[old] = new;
    }
    let classes: Vec<SubgroupClass> = order_idx
        .iter()
        .map(|&c| {
            let rep = &b.reps[c];
            SubgroupClass {
                representative: e.subgroup_perm_group(&e.generating_set(rep)),
                class_size: b.sizes[c],
                order: rep.len() as u64,
                key: canonical_key(&e, rep),
                elements: rep.clone(),
            }
        })
        .collect();
    let index = b.all.into_iter().map(|(k, c)| (k, renumber[c])).collect();
    drop(e);
    let elements = g.enumerate()?;
    Ok(SubgroupLattice {
        group: g.clone(),
        elements,
        classes,
        index,
    })
}

/// Every subgroup of `g` up to conjugacy, ordered by (order, representative).
pub fn all_subgroup_classes(g: &PermGroup) -> Result<Vec<SubgroupClass>> {
    Ok(subgroup_lattice(g, None, DEFAULT_LATTICE_BOUND)?.classes)
}

/// A transitive subgroup class of a holomorph with its point stabilizer.
#[derive(Clone, Debug)]
pub struct TransitiveClass {
    pub class: SubgroupClass,
    pub stabilizer: PermGroup,
}

/// Transitive subgroups of `Hol(N)` up to conjugacy in `Hol(N)`.
///
/// Holomorphs too large for the full lattice are handled by the affine
/// enumeration when `N` is elementary abelian.
pub fn transitive_subgroup_classes(hol: &Holomorph) -> Result<Vec<TransitiveClass>> {
    if hol.group.order() > DEFAULT_LATTICE_BOUND {
        if let Ok(frame) = AffineFrame::new(&hol.lambda_n) {
            let filter = AffineFilter {
                order: None,
                transitive: true,
            };
            return Ok(affine_subgroup_classes(&frame, &hol.group, filter)?
                .into_iter()
                .map(|c| {
                    let stabilizer = c.representative.point_stabilizer(0);
                    TransitiveClass {
                        class: c,
                        stabilizer,
                    }
                })
                .collect());
        }
    }
    transitive_subgroup_classes_of(&hol.group)
}

pub fn transitive_subgroup_classes_of(g: &PermGroup) -> Result<Vec<TransitiveClass>> {
    let lat = subgroup_lattice(g, None, DEFAULT_LATTICE_BOUND.max(g.order()))?;
    Ok(lat
        .classes
        .into_iter()
        .filter(|c| c.representative.is_transitive())
        .map(|c| {
            let stabilizer = c.representative.point_stabilizer(0);
            TransitiveClass {
                class: c,
                stabilizer,
            }
        })
        .collect())
}

/// Lattice of the subgroups of index `n` (and of the orders dividing `|G|/n`).
pub fn index_n_lattice(g: &PermGroup, n: u64) -> Result<SubgroupLattice> {
    let order = g.order();
    if n == 0 || order % n != 0 {
        return Err(Error::precondition(format!(
            "{n} does not divide |G| = {order}"
        )));
    }
    subgroup_lattice(g, Some(order / n), DEFAULT_LATTICE_BOUND.max(order))
}

/// Conjugacy classes of subgroups of order `|G|/n`.
pub fn index_n_subgroup_classes(g: &PermGroup, n: u64) -> Result<Vec<SubgroupClass>> {
    let order = g.order();
    let lat = index_n_lattice(g, n)?;
    Ok(lat
        .classes
        .into_iter()
        .filter(|c| c.order * n == order)
        .collect())
}

/// Linkage of one conjugacy class to its `Aut(G)`-orbit and isomorphism type.
#[derive(Clone, Debug, Serialize)]
pub struct ClassTag {
    pub class: usize,
    pub class_size: usize,
    pub aut_orbit: usize,
    pub iso_class: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub conjugacy_classes: usize,
    pub aut_orbits: usize,
    pub iso_classes: usize,
    pub details: Vec<ClassTag>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nxt = self.0[y];
            self.0[y] = r;
            y = nxt;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
    /// Dense labels in order of first appearance.
    fn labels(&mut self) -> Vec<usize> {
        let mut map = HashMap::new();
        (0..self.0.len())
            .map(|i| {
                let r = self.find(i);
                let next = map.len();
                *map.entry(r).or_insert(next)
            })
            .collect()
    }
}

/// Sorts the index-`n` subgroups into conjugacy classes, `Aut(G)`-orbits
/// and isomorphism types.
pub fn classify_index_n(g: &PermGroup, n: u64) -> Result<ClassificationReport> {
    let order = g.order();
    let lat = index_n_lattice(g, n)?;
    let ids: Vec<usize> = (0..lat.classes.len())
        .filter(|&i| lat.classes[i].order * n == order)
        .collect();
    let local: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let e = &lat.elements;
    let aut = automorphism_group_enumerated(e);
    let mut orbits = UnionFind::new(ids.len());
    for (i, &c) in ids.iter().enumerate() {
        for a in &aut.generators {
            let mut img: Vec<Elt> = lat.classes[c]
                .elements
                .iter()
                .map(|&x| a[x as usize])
                .collect();
            img.sort_unstable();
            let d = lat
                .class_of(&img)
                .expect("automorphic image is a subgroup of the same order");
            orbits.union(i, local[&d]);
        }
    }
    let orbit_labels = orbits.labels();
    // abstract isomorphism between one representative per orbit
    let mut iso = UnionFind::new(ids.len());
    let mut orbit_rep: Vec<usize> = Vec::new();
    for i in 0..ids.len() {
        if orbit_labels[i] == orbit_rep.len() {
            orbit_rep.push(i);
        } else {
            iso.union(i, orbit_rep[orbit_labels[i]]);
        }
    }
    let enumerated: Vec<Arc<EnumeratedGroup>> = orbit_rep
        .iter()
        .map(|&i| lat.classes[ids[i]].representative.enumerate())
        .collect::<Result<_>>()?;
    let invariants: Vec<InvariantVector> =
        enumerated.iter().map(|x| InvariantVector::of(x)).collect();
    for a in 0..orbit_rep.len() {
        for b in 0..a {
            if iso.find(orbit_rep[a]) == iso.find(orbit_rep[b]) || invariants[a] != invariants[b] {
                continue;
            }
            if find_isomorphism_enumerated(&enumerated[a], &enumerated[b]).is_some() {
                iso.union(orbit_rep[a], orbit_rep[b]);
            }
        }
    }
    let iso_labels = iso.labels();
    let details: Vec<ClassTag> = ids
        .iter()
        .enumerate()
        .map(|(i, &c)| ClassTag {
            class: i,
            class_size: lat.classes[c].class_size,
            aut_orbit: orbit_labels[i],
            iso_class: iso_labels[i],
        })
        .collect();
    Ok(ClassificationReport {
        conjugacy_classes: ids.len(),
        aut_orbits: orbit_rep.len(),
        iso_classes: iso_labels.iter().max().map_or(0, |m| m + 1),
        details,
    })
}

/// Elements of a subgroup as permutations, for callers outside the lattice.
pub fn class_elements(lat: &SubgroupLattice, class: usize) -> Vec<Permutation> {
    lat.classes[class]
        .elements
        .iter()
        .map(|&x| lat.elements.permutation(x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autohol::holomorph;
    use crate::grouplib::AbstractGroup;

    fn counts(g: &PermGroup) -> Vec<(u64, usize)> {
        all_subgroup_classes(g)
            .unwrap()
            .iter()
            .map(|c| (c.order, c.class_size))
            .collect()
    }

    #[test]
    fn small_lattices() {
        let s3 = PermGroup::from_cycles(3, &["(0,1,2)", "(0,1)"]).unwrap();
        assert_eq!(counts(&s3), vec![(1, 1), (2, 3), (3, 1), (6, 1)]);
        let c4 = PermGroup::from_cycles(4, &["(0,1,2,3)"]).unwrap();
        assert_eq!(counts(&c4).len(), 3);
        let d8 = PermGroup::from_cycles(4, &["(0,1,2,3)", "(0,2)"]).unwrap();
        assert_eq!(counts(&d8).len(), 8);
        let s4 = PermGroup::from_cycles(4, &["(0,1)", "(0,1,2,3)"]).unwrap();
        assert_eq!(counts(&s4).len(), 11);
        let a5 = PermGroup::from_cycles(5, &["(0,1,2)", "(0,1,2,3,4)"]).unwrap();
        assert_eq!(counts(&a5).len(), 9);
    }

    #[test]
    fn transitive_classes_of_small_holomorphs() {
        let h4 = holomorph(&AbstractGroup::cyclic(4)).unwrap();
        assert_eq!(transitive_subgroup_classes(&h4).unwrap().len(), 3);
        let h2 = holomorph(&AbstractGroup::cyclic(2)).unwrap();
        assert_eq!(transitive_subgroup_classes(&h2).unwrap().len(), 1);
    }

    #[test]
    fn index_n_of_hol_c5() {
        let h = holomorph(&AbstractGroup::cyclic(5)).unwrap();
        let cls = index_n_subgroup_classes(&h.group, 5).unwrap();
        assert!(cls.iter().all(|c| c.order == 4));
        let st = h.group.point_stabilizer(0);
        assert!(cls.iter().any(|c| h
            .group
            .are_conjugate_subgroups(&c.representative, &st)
            .unwrap()
            .is_some()));
    }

    #[test]
    fn classification_of_regular_cyclic() {
        let c = AbstractGroup::cyclic(7).regular_representation();
        let r = classify_index_n(&c, 7).unwrap();
        assert_eq!(
            (r.conjugacy_classes, r.aut_orbits, r.iso_classes),
            (1, 1, 1)
        );
    }
}
