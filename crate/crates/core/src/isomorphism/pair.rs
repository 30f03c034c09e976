use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::invariants::InvariantVector;
use super::search::{
    automorphism_group_enumerated, compose_maps, find_isomorphism_enumerated, is_isomorphism,
    AutomorphismData, ElementMap, HomSearch,
};
use crate::error::{Error, Result};
use crate::permgrp::{CosetTable, Elt, EnumeratedGroup, PermGroup, Permutation};

/// An isomorphism given by the images of a generating list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairWitness {
    pub generators: Vec<Permutation>,
    pub images: Vec<Permutation>,
    pub verified: bool,
}

/// A group with a designated subgroup, with the data the pair test reuses.
pub struct PairData {
    pub group: PermGroup,
    pub sub: PermGroup,
    elements: Arc<EnumeratedGroup>,
    sub_elements: Vec<Elt>,
    invariants: OnceLock<InvariantVector>,
    signature: OnceLock<Vec<(Vec<usize>, usize)>>,
    automorphisms: OnceLock<AutomorphismData>,
}

impl PairData {
    pub fn new(group: PermGroup, sub: PermGroup) -> Result<Self> {
        let sub_elements = group.subgroup_elements(&sub)?;
        let elements = group.enumerate()?;
        Ok(PairData {
            group,
            sub,
            elements,
            sub_elements,
            invariants: OnceLock::new(),
            signature: OnceLock::new(),
            automorphisms: OnceLock::new(),
        })
    }

    pub fn order(&self) -> u64 {
        self.elements.order()
    }

    pub fn sub_order(&self) -> usize {
        self.sub_elements.len()
    }

    pub fn enumerated(&self) -> &EnumeratedGroup {
        &self.elements
    }

    pub fn sub_elements(&self) -> &[Elt] {
        &self.sub_elements
    }

    pub fn invariants(&self) -> &InvariantVector {
        self.invariants
            .get_or_init(|| InvariantVector::of(&self.elements))
    }

    /// Histogram of cycle types of the elements acting on the cosets of the
    /// subgroup. Equal for pair-isomorphic pairs.
    pub fn coset_signature(&self) -> &[(Vec<usize>, usize)] {
        self.signature.get_or_init(|| {
            let e = &self.elements;
            let table = CosetTable::new(e, &self.sub_elements);
            let mut hist: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for g in e.elements() {
                let p = Permutation::from_points_unchecked(table.action(e, g));
                *hist.entry(p.cycle_type()).or_default() += 1;
            }
            hist.into_iter().collect()
        })
    }

    pub fn automorphisms(&self) -> &AutomorphismData {
        self.automorphisms
            .get_or_init(|| automorphism_group_enumerated(&self.elements))
    }

    fn witness(&self, target: &PairData, map: &ElementMap) -> PairWitness {
        let e = &self.elements;
        let gens = e.generators().to_vec();
        let verified = is_isomorphism(e, &target.elements, map) && {
            let mut img: Vec<Elt> = self.sub_elements.iter().map(|&x| map[x as usize]).collect();
            img.sort_unstable();
            img == target.sub_elements
        };
        PairWitness {
            generators: gens.iter().map(|&g| e.permutation(g)).collect(),
            images: gens
                .iter()
                .map(|&g| target.elements.permutation(map[g as usize]))
                .collect(),
            verified,
        }
    }
}

/// Cheap necessary conditions for pair isomorphism.
pub fn pair_prefilter(a: &PairData, b: &PairData) -> bool {
    a.order() == b.order()
        && a.sub_order() == b.sub_order()
        && a.coset_signature() == b.coset_signature()
        && a.invariants() == b.invariants()
}

/// Finds an isomorphism `a.group -> b.group` carrying `a.sub` onto `b.sub`.
///
/// One isomorphism is found by backtracking; the others are its composites
/// with `Aut(b.group)`, searched as the orbit of the image subgroup.
pub fn pair_isomorphic_data(a: &PairData, b: &PairData) -> Option<PairWitness> {
    if !pair_prefilter(a, b) {
        return None;
    }
    let phi = find_isomorphism_enumerated(&a.elements, &b.elements)?;
    let mut start: Vec<Elt> = a.sub_elements.iter().map(|&x| phi[x as usize]).collect();
    start.sort_unstable();
    if start == b.sub_elements {
        return Some(a.witness(b, &phi));
    }
    let aut = b.automorphisms();
    let mut index: HashMap<Vec<Elt>, usize> = HashMap::new();
    let mut nodes: Vec<(Vec<Elt>, usize, usize)> = vec![(start.clone(), usize::MAX, usize::MAX)];
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (gi, g) in aut.generators.iter().enumerate() {
            let mut img: Vec<Elt> = nodes[i].0.iter().map(|&x| g[x as usize]).collect();
            img.sort_unstable();
            if index.contains_key(&img) {
                continue;
            }
            let j = nodes.len();
            let hit = img == b.sub_elements;
            index.insert(img.clone(), j);
            nodes.push((img, i, gi));
            if hit {
                let mut alpha: ElementMap = b.elements.elements().collect();
                let mut cur = j;
                while nodes[cur].1 != usize::MAX {
                    alpha = compose_maps(&alpha, &aut.generators[nodes[cur].2]);
                    cur = nodes[cur].1;
                }
                let psi = compose_maps(&alpha, &phi);
                return Some(a.witness(b, &psi));
            }
            queue.push_back(j);
        }
    }
    None
}

/// Builds pair data for both sides and tests them.
pub fn pair_isomorphic(
    g: &PermGroup,
    g_sub: &PermGroup,
    m: &PermGroup,
    m_sub: &PermGroup,
) -> Result<Option<PairWitness>> {
    let a = PairData::new(g.clone(), g_sub.clone())?;
    let b = PairData::new(m.clone(), m_sub.clone())?;
    Ok(pair_isomorphic_data(&a, &b))
}

/// Reference implementation: runs through every isomorphism.
pub fn pair_isomorphic_exhaustive(a: &PairData, b: &PairData) -> bool {
    if a.order() != b.order() || a.sub_order() != b.sub_order() {
        return false;
    }
    let gens = super::search::generating_sequence(&a.elements);
    let mut s = HomSearch::new(&a.elements, &b.elements, gens);
    let mut found = false;
    let mut images = Vec::new();
    s.for_each_isomorphism(&mut images, &mut |m| {
        if found {
            return;
        }
        let mut img: Vec<Elt> = a.sub_elements.iter().map(|&x| m[x as usize]).collect();
        img.sort_unstable();
        found = img == b.sub_elements;
    });
    found
}

/// Abstract isomorphism between two permutation groups.
pub fn find_isomorphism(g: &PermGroup, m: &PermGroup) -> Result<Option<PairWitness>> {
    let a = PairData::new(g.clone(), PermGroup::trivial(g.degree()))?;
    let b = PairData::new(m.clone(), PermGroup::trivial(m.degree()))?;
    Ok(find_isomorphism_enumerated(&a.elements, &b.elements).map(|phi| a.witness(&b, &phi)))
}

/// The action of `g` on the cosets of `h` together with the stabilizer of
/// the identity coset.
pub fn permutation_pair_of_quotient(
    g: &PermGroup,
    h: &PermGroup,
) -> Result<(PermGroup, PermGroup)> {
    let act = g.coset_action(h)?;
    let j_sub = act.image.point_stabilizer(act.point_of_identity_coset);
    Ok((act.image, j_sub))
}

/// Replays a witness between transitive groups whose subgroups are the
/// stabilizers of point 0: returns `s` with `s(0) = 0` and `s J s^-1 = M`.
pub fn witness_conjugator(j: &PermGroup, m: &PermGroup, w: &PairWitness) -> Result<Permutation> {
    let n = j.degree();
    if m.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: m.degree(),
        });
    }
    // s(x(0)) = psi(x)(0), propagated along generators
    let mut s = vec![usize::MAX; n];
    s[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for (g, h) in w.generators.iter().zip(&w.images) {
            let q = g.image(p);
            let t = h.image(s[p]);
            if s[q] == usize::MAX {
                s[q] = t;
                queue.push_back(q);
            } else if s[q] != t {
                return Err(Error::precondition(
                    "witness is not compatible with point stabilizers",
                ));
            }
        }
    }
    Permutation::from_images(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_pair() {
        let d8 = PermGroup::from_cycles(4, &["(0,1,2,3)", "(0,2)"]).unwrap();
        let st = d8.point_stabilizer(0);
        let w = pair_isomorphic(&d8, &st, &d8, &st).unwrap().unwrap();
        assert!(w.verified);
        assert_eq!(w.generators, w.images);
    }

    #[test]
    fn d8_pairs_distinguish_subgroups() {
        let d8 = PermGroup::from_cycles(4, &["(0,1,2,3)", "(0,2)"]).unwrap();
        let refl_vertex = PermGroup::from_cycles(4, &["(1,3)"]).unwrap();
        let refl_edge = PermGroup::from_cycles(4, &["(0,1)(2,3)"]).unwrap();
        let center = PermGroup::from_cycles(4, &["(0,2)(1,3)"]).unwrap();
        // the outer automorphism swaps the two classes of non-central reflections
        assert!(
            pair_isomorphic(&d8, &refl_vertex, &d8, &refl_edge)
                .unwrap()
                .unwrap()
                .verified
        );
        assert!(pair_isomorphic(&d8, &refl_vertex, &d8, &center)
            .unwrap()
            .is_none());
    }

    #[test]
    fn quotient_pair_of_central_subgroup() {
        let d8 = PermGroup::from_cycles(4, &["(0,1,2,3)", "(0,2)"]).unwrap();
        let center = PermGroup::from_cycles(4, &["(0,2)(1,3)"]).unwrap();
        let (j, js) = permutation_pair_of_quotient(&d8, &center).unwrap();
        assert_eq!(j.degree(), 4);
        assert_eq!(j.order(), 4);
        assert!(j.is_transitive());
        assert_eq!(js.order(), 1);
        let (t, ts) = permutation_pair_of_quotient(&d8, &d8).unwrap();
        assert_eq!((t.order(), ts.order()), (1, 1));
    }

    #[test]
    fn conjugator_from_witness() {
        let a = PermGroup::from_cycles(4, &["(0,1,2,3)"]).unwrap();
        let b = PermGroup::from_cycles(4, &["(0,2,1,3)"]).unwrap();
        let w = pair_isomorphic(&a, &a.point_stabilizer(0), &b, &b.point_stabilizer(0))
            .unwrap()
            .unwrap();
        let s = witness_conjugator(&a, &b, &w).unwrap();
        assert_eq!(s.image(0), 0);
        assert!(a.conjugate_by(&s).same_group(&b));
    }
}
