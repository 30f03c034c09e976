//! Generator-image backtracking between explicitly enumerated groups.

use std::cmp::Reverse;
use std::collections::HashMap;

use crate::permgrp::{Elt, EnumeratedGroup};

/// A map between element indices, `map[x]` being the image of `x`.
pub type ElementMap = Vec<Elt>;

const UNSET: Elt = Elt::MAX;

/// Irredundant generating sequence, chosen greedily: higher element order
/// first, then rarer (order, class size) signature.
pub fn generating_sequence(e: &EnumeratedGroup) -> Vec<Elt> {
    let sig = signatures(e);
    let mut freq: HashMap<(u32, usize), usize> = HashMap::new();
    for s in &sig {
        *freq.entry(*s).or_default() += 1;
    }
    let mut cand: Vec<Elt> = e.elements().skip(1).collect();
    cand.sort_by_key(|&x| (Reverse(sig[x as usize].0), freq[&sig[x as usize]], x));
    let mut gens = Vec::new();
    let mut mask = vec![false; e.len()];
    mask[0] = true;
    let mut size = 1;
    let mut seen = vec![false; e.len()];
    for c in cand {
        if size == e.len() {
            break;
        }
        if mask[c as usize] {
            continue;
        }
        gens.push(c);
        let cl = e.closure_with(&gens, &mut seen);
        size = cl.len();
        for x in cl {
            mask[x as usize] = true;
        }
    }
    gens
}

/// `(element order, conjugacy class size)` for every element.
pub fn signatures(e: &EnumeratedGroup) -> Vec<(u32, usize)> {
    let cls = e.conjugacy_classes();
    e.elements()
        .map(|x| {
            (
                e.elt_order(x),
                cls.classes[cls.class_of[x as usize] as usize].len(),
            )
        })
        .collect()
}

/// Search state for homomorphisms from `src` (through a generating
/// sequence) into `dst`.
pub struct HomSearch<'a> {
    pub src: &'a EnumeratedGroup,
    pub dst: &'a EnumeratedGroup,
    pub gens: Vec<Elt>,
    src_sig: Vec<(u32, usize)>,
    dst_sig: Vec<(u32, usize)>,
    /// `ord(g_i g_j)` for `j < i`.
    prod_orders: Vec<Vec<u32>>,
    map: Vec<Elt>,
    used: Vec<Elt>,
    domain: Vec<Elt>,
    pub nodes: u64,
}

impl<'a> HomSearch<'a> {
    pub fn new(src: &'a EnumeratedGroup, dst: &'a EnumeratedGroup, gens: Vec<Elt>) -> Self {
        let prod_orders = gens
            .iter()
            .enumerate()
            .map(|(i, &gi)| {
                gens[..i]
                    .iter()
                    .map(|&gj| src.elt_order(src.mult(gj, gi)))
                    .collect()
            })
            .collect();
        HomSearch {
            src,
            dst,
            src_sig: signatures(src),
            dst_sig: signatures(dst),
            gens,
            prod_orders,
            map: vec![UNSET; src.len()],
            used: vec![UNSET; dst.len()],
            domain: Vec::new(),
            nodes: 0,
        }
    }

    /// Elements of `dst` that may be the image of `gens[level]` given the
    /// images already fixed for the earlier generators.
    pub fn candidates(&self, level: usize, images: &[Elt]) -> Vec<Elt> {
        let want = self.src_sig[self.gens[level] as usize];
        self.dst
            .elements()
            .filter(|&c| self.dst_sig[c as usize] == want)
            .filter(|&c| {
                images[..level]
                    .iter()
                    .zip(&self.prod_orders[level])
                    .all(|(&h, &o)| self.dst.elt_order(self.dst.mult(h, c)) == o)
            })
            .collect()
    }

    fn clear(&mut self) {
        for &x in &self.domain {
            let y = self.map[x as usize];
            if y != UNSET {
                self.used[y as usize] = UNSET;
            }
            self.map[x as usize] = UNSET;
        }
        self.domain.clear();
    }

    /// Checks that `gens[..images.len()] -> images` extends to an injective
    /// homomorphism on the subgroup they generate.
    pub fn consistent(&mut self, images: &[Elt]) -> bool {
        self.nodes += 1;
        self.clear();
        let k = images.len();
        self.map[0] = 0;
        self.used[0] = 0;
        self.domain.push(0);
        let mut i = 0;
        while i < self.domain.len() {
            let x = self.domain[i];
            let fx = self.map[x as usize];
            for l in 0..k {
                let y = self.src.mult(x, self.gens[l]);
                let fy = self.dst.mult(fx, images[l]);
                let cur = self.map[y as usize];
                if cur == UNSET {
                    if self.used[fy as usize] != UNSET {
                        return false;
                    }
                    self.map[y as usize] = fy;
                    self.used[fy as usize] = y;
                    self.domain.push(y);
                } else if cur != fy {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    /// The map computed by the last successful [`consistent`](Self::consistent) call.
    pub fn current_map(&self) -> ElementMap {
        self.map.clone()
    }

    /// Depth-first completion of `images` to a full isomorphism `src -> dst`.
    pub fn complete(&mut self, images: &mut Vec<Elt>) -> Option<ElementMap> {
        let level = images.len();
        if level == self.gens.len() {
            if self.consistent(images) && self.domain.len() == self.src.len() {
                return Some(self.current_map());
            }
            return None;
        }
        for c in self.candidates(level, images) {
            images.push(c);
            if self.consistent(images) {
                if let Some(m) = self.complete(images) {
                    return Some(m);
                }
            }
            images.pop();
        }
        None
    }

    /// Calls `f` on every isomorphism `src -> dst` (no symmetry reduction).
    pub fn for_each_isomorphism(&mut self, images: &mut Vec<Elt>, f: &mut dyn FnMut(&ElementMap)) {
        let level = images.len();
        if level == self.gens.len() {
            if self.consistent(images) && self.domain.len() == self.src.len() {
                let m = self.current_map();
                f(&m);
            }
            return;
        }
        for c in self.candidates(level, images) {
            images.push(c);
            if self.consistent(images) {
                self.for_each_isomorphism(images, f);
            }
            images.pop();
        }
    }
}

/// An isomorphism `src -> dst`, or `None` if there is none.
pub fn find_isomorphism_enumerated(
    src: &EnumeratedGroup,
    dst: &EnumeratedGroup,
) -> Option<ElementMap> {
    if src.len() != dst.len() {
        return None;
    }
    if super::invariants::InvariantVector::of(src) != super::invariants::InvariantVector::of(dst) {
        return None;
    }
    if src.len() == 1 {
        return Some(vec![0]);
    }
    let gens = generating_sequence(src);
    let mut s = HomSearch::new(src, dst, gens);
    // composing with inner automorphisms of dst, the first image can be
    // taken to be a class representative
    let cls = dst.conjugacy_classes();
    let firsts: Vec<Elt> = s
        .candidates(0, &[])
        .into_iter()
        .filter(|&c| cls.classes[cls.class_of[c as usize] as usize][0] == c)
        .collect();
    let mut images = Vec::new();
    for c in firsts {
        images.push(c);
        if s.consistent(&images) {
            if let Some(m) = s.complete(&mut images) {
                return Some(m);
            }
        }
        images.pop();
    }
    None
}

/// Automorphism group as a stabilizer chain over a generating sequence.
#[derive(Clone, Debug)]
pub struct AutomorphismData {
    /// Generating sequence `g_1..g_k` of the group.
    pub base: Vec<Elt>,
    /// Strong generators; each is an element map.
    pub generators: Vec<ElementMap>,
    /// `orbit_sizes[i]` is the size of the orbit of `g_i` under the
    /// automorphisms fixing `g_1..g_{i-1}`.
    pub orbit_sizes: Vec<usize>,
}

impl AutomorphismData {
    pub fn order(&self) -> u128 {
        self.orbit_sizes.iter().map(|&s| s as u128).product()
    }
}

pub fn compose_maps(f: &[Elt], g: &[Elt]) -> ElementMap {
    g.iter().map(|&x| f[x as usize]).collect()
}

pub fn invert_map(f: &[Elt]) -> ElementMap {
    let mut inv = vec![0; f.len()];
    for (i, &y) in f.iter().enumerate() {
        inv[y as usize] = i as Elt;
    }
    inv
}

fn inner(e: &EnumeratedGroup, x: Elt) -> ElementMap {
    e.elements().map(|y| e.conj(x, y)).collect()
}

/// Full automorphism group of an enumerated group.
pub fn automorphism_group_enumerated(e: &EnumeratedGroup) -> AutomorphismData {
    if e.len() == 1 {
        return AutomorphismData {
            base: vec![],
            generators: vec![],
            orbit_sizes: vec![],
        };
    }
    let base = generating_sequence(e);
    let k = base.len();
    let mut search = HomSearch::new(e, e, base.clone());
    let mut gens: Vec<ElementMap> = Vec::new();
    let mut orbit_sizes = vec![0; k];
    for level in (0..k).rev() {
        // inner automorphisms by the centralizer of g_1..g_{level-1}
        let cent: Vec<Elt> = e
            .elements()
            .filter(|&x| base[..level].iter().all(|&g| e.mult(x, g) == e.mult(g, x)))
            .collect();
        for x in e.generating_set(&cent) {
            let m = inner(e, x);
            if m[base[level] as usize] != base[level] && !gens.contains(&m) {
                gens.push(m);
            }
        }
        let target = base[level];
        let mut orbit = orbit_of(e.len(), target, &gens);
        let mut failed = vec![false; e.len()];
        let prefix: Vec<Elt> = base[..level].to_vec();
        for c in search.candidates(level, &prefix) {
            if orbit[c as usize] || failed[c as usize] {
                continue;
            }
            let mut images = prefix.clone();
            images.push(c);
            let found = if search.consistent(&images) {
                search.complete(&mut images)
            } else {
                None
            };
            match found {
                Some(m) => {
                    gens.push(m);
                    orbit = orbit_of(e.len(), target, &gens);
                }
                None => {
                    for (x, &inside) in orbit_of(e.len(), c, &gens).iter().enumerate() {
                        if inside {
                            failed[x] = true;
                        }
                    }
                }
            }
        }
        orbit_sizes[level] = orbit.iter().filter(|&&b| b).count();
    }
    AutomorphismData {
        base,
        generators: gens,
        orbit_sizes,
    }
}

fn orbit_of(n: usize, x: Elt, gens: &[ElementMap]) -> Vec<bool> {
    let mut mask = vec![false; n];
    mask[x as usize] = true;
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for g in gens {
            let z = g[y as usize];
            if !mask[z as usize] {
                mask[z as usize] = true;
                stack.push(z);
            }
        }
    }
    mask
}

/// True if `f` is a bijective homomorphism `src -> dst` (checked on all
/// products with generators of `src`).
pub fn is_isomorphism(src: &EnumeratedGroup, dst: &EnumeratedGroup, f: &[Elt]) -> bool {
    if f.len() != src.len() || src.len() != dst.len() {
        return false;
    }
    let mut seen = vec![false; dst.len()];
    for &y in f {
        if y as usize >= dst.len() || std::mem::replace(&mut seen[y as usize], true) {
            return false;
        }
    }
    let gens: Vec<Elt> = if src.generators().is_empty() {
        src.elements().collect()
    } else {
        src.generators().to_vec()
    };
    src.elements().all(|x| {
        gens.iter()
            .all(|&g| f[src.mult(x, g) as usize] == dst.mult(f[x as usize], f[g as usize]))
    })
}
