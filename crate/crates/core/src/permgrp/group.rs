use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::chain::Chain;
use super::elements::{Elt, EnumeratedGroup};
use super::perm::{Permutation, Point};
use crate::error::{Error, Result};

/// Element-count bound for enumerating a group explicitly.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 2_000_000;

/// A permutation group on `0..degree` given by generators.
///
/// The stabilizer chain and the explicit element list are built lazily and
/// cached, so a `PermGroup` can be shared freely between threads.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<Chain>,
    enumerated: OnceLock<Arc<EnumeratedGroup>>,
}

pub struct CosetActionResult {
    pub image: PermGroup,
    pub kernel: PermGroup,
    pub point_of_identity_coset: usize,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        let enumerated = OnceLock::new();
        if let Some(e) = self.enumerated.get() {
            let _ = enumerated.set(e.clone());
        }
        PermGroup {
            degree: self.degree,
            gens: self.gens.clone(),
            chain,
            enumerated,
        }
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(Self::new_unchecked(degree, gens))
    }

    pub(crate) fn new_unchecked(degree: usize, gens: Vec<Permutation>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        PermGroup {
            degree,
            gens,
            chain: OnceLock::new(),
            enumerated: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new_unchecked(degree, Vec::new())
    }

    /// Builds a group from 0-based cycle strings.
    pub fn from_cycles(degree: usize, gens: &[&str]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|s| Permutation::from_cycles(s, degree, false))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn chain(&self) -> &Chain {
        self.chain
            .get_or_init(|| Chain::new(self.degree, &self.gens, &[]))
    }

    pub fn order(&self) -> u64 {
        self.chain().order() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    /// True if every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &PermGroup) -> bool {
        other.degree == self.degree && other.gens.iter().all(|g| self.contains(g))
    }

    /// Equality as subgroups of a common symmetric group.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.contains_group(other)
    }

    pub fn is_normal_in(&self, parent: &PermGroup) -> bool {
        parent
            .gens
            .iter()
            .all(|s| self.gens.iter().all(|h| self.contains(&s.conjugate(h))))
    }

    pub fn orbit(&self, p: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![p];
        seen[p] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.gens {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let mut o = self.orbit(p);
                for &x in &o {
                    seen[x] = true;
                }
                o.sort_unstable();
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    pub fn point_stabilizer(&self, p: usize) -> PermGroup {
        let chain = Chain::new(self.degree, &self.gens, &[p]);
        let gens = chain.stabilizer_generators(1);
        let mut g = PermGroup::new_unchecked(self.degree, gens);
        let sub = Chain::new(self.degree, &g.gens, &[]);
        let _ = g.chain.set(sub);
        g.reduce_generators();
        g
    }

    /// Replaces the generator list by a shorter one generating the same group.
    fn reduce_generators(&mut self) {
        if self.gens.len() <= 2 {
            return;
        }
        let order = self.order();
        let mut kept: Vec<Permutation> = Vec::new();
        let mut cur = 1u64;
        for g in &self.gens {
            if cur == order {
                break;
            }
            let c = Chain::new(self.degree, &kept, &[]);
            if c.contains(g) {
                continue;
            }
            kept.push(g.clone());
            cur = Chain::new(self.degree, &kept, &[]).order() as u64;
        }
        self.gens = kept;
    }

    /// Explicit element list (cached).
    pub fn enumerate(&self) -> Result<Arc<EnumeratedGroup>> {
        self.enumerate_with_limit(DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn enumerate_with_limit(&self, limit: u64) -> Result<Arc<EnumeratedGroup>> {
        if let Some(e) = self.enumerated.get() {
            return Ok(e.clone());
        }
        let e = Arc::new(EnumeratedGroup::from_group(self, limit)?);
        Ok(self.enumerated.get_or_init(|| e).clone())
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        let e = self.enumerate()?;
        Ok(e.elements().map(|i| e.permutation(i)).collect())
    }

    fn require_subgroup(&self, h: &PermGroup) -> Result<()> {
        if h.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: h.degree,
            });
        }
        if !self.contains_group(h) {
            return Err(Error::NotSubgroup(
                "a generator of the subgroup lies outside the group".into(),
            ));
        }
        Ok(())
    }

    /// Sorted indices of the elements of `h` inside the enumeration of `self`.
    pub fn subgroup_elements(&self, h: &PermGroup) -> Result<Vec<Elt>> {
        self.require_subgroup(h)?;
        let e = self.enumerate()?;
        let gens: Vec<Elt> = h
            .gens
            .iter()
            .map(|g| e.index_of(g.images()).expect("member"))
            .collect();
        Ok(e.closure(&gens))
    }

    /// Largest normal subgroup of `self` contained in `h`.
    pub fn normal_core(&self, h: &PermGroup) -> Result<PermGroup> {
        let hs = self.subgroup_elements(h)?;
        let e = self.enumerate()?;
        let core = core_of(&e, &hs);
        Ok(e.subgroup_perm_group(&e.generating_set(&core)))
    }

    /// Action of `self` on the left cosets of `h`.
    ///
    /// Cosets are numbered by first discovery in a breadth-first sweep from
    /// the coset of the identity, applying the generators in sorted order.
    pub fn coset_action(&self, h: &PermGroup) -> Result<CosetActionResult> {
        let hs = self.subgroup_elements(h)?;
        let e = self.enumerate()?;
        let table = CosetTable::new(&e, &hs);
        let mut gens: Vec<Elt> = e.generators().to_vec();
        gens.sort_unstable_by(|&a, &b| e.perm(a).cmp(e.perm(b)));
        let images: Vec<Permutation> = gens
            .iter()
            .map(|&g| Permutation::from_points_unchecked(table.action(&e, g)))
            .collect();
        let image = PermGroup::new_unchecked(table.len(), images);
        let core = core_of(&e, &hs);
        let kernel = e.subgroup_perm_group(&e.generating_set(&core));
        Ok(CosetActionResult {
            image,
            kernel,
            point_of_identity_coset: 0,
        })
    }

    /// Finds `g` in `self` with `g h1 g^-1 = h2`.
    ///
    /// Elements are scanned in enumeration order and the first witness is
    /// returned.
    pub fn are_conjugate_subgroups(
        &self,
        h1: &PermGroup,
        h2: &PermGroup,
    ) -> Result<Option<Permutation>> {
        self.require_subgroup(h1)?;
        self.require_subgroup(h2)?;
        if h1.order() != h2.order() {
            return Ok(None);
        }
        if h1.same_group(h2) {
            return Ok(Some(Permutation::identity(self.degree)));
        }
        let e = self.enumerate()?;
        for g in e.elements() {
            let gp = e.permutation(g);
            if h1.gens.iter().all(|h| h2.contains(&gp.conjugate(h))) {
                return Ok(Some(gp));
            }
        }
        Ok(None)
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let e = self.enumerate()?;
        let d = derived_elements(&e, &e.elements().collect::<Vec<_>>());
        Ok(e.subgroup_perm_group(&e.generating_set(&d)))
    }

    pub fn is_solvable(&self) -> Result<bool> {
        let e = self.enumerate()?;
        let mut cur: Vec<Elt> = e.elements().collect();
        loop {
            if cur.len() == 1 {
                return Ok(true);
            }
            let next = derived_elements(&e, &cur);
            if next.len() == cur.len() {
                return Ok(false);
            }
            cur = next;
        }
    }

    /// Conjugates every generator by `s`.
    pub fn conjugate_by(&self, s: &Permutation) -> PermGroup {
        PermGroup::new_unchecked(
            self.degree,
            self.gens.iter().map(|g| s.conjugate(g)).collect(),
        )
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            version: 1,
            degree: self.degree,
            generators: self.gens.clone(),
        }
    }
}

/// Versioned serialized form of a [`PermGroup`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub version: u32,
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl TryFrom<GroupJson> for PermGroup {
    type Error = Error;
    fn try_from(j: GroupJson) -> Result<Self> {
        if j.version != 1 {
            return Err(Error::Parse(format!(
                "unknown group format version {}",
                j.version
            )));
        }
        PermGroup::new(j.degree, j.generators)
    }
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GroupJson::deserialize(d)?;
        PermGroup::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(deg {}, <", self.degree)?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g:?}")?;
        }
        write!(f, ">)")
    }
}

/// Intersection of all conjugates of the subgroup with sorted element list `h`.
pub(crate) fn core_of(e: &EnumeratedGroup, h: &[Elt]) -> Vec<Elt> {
    let mut cur: Vec<Elt> = h.to_vec();
    let mut mask = vec![false; e.len()];
    loop {
        for &x in &cur {
            mask[x as usize] = true;
        }
        let next: Vec<Elt> = cur
            .iter()
            .copied()
            .filter(|&x| {
                e.generators()
                    .iter()
                    .all(|&s| mask[e.conj(e.inv(s), x) as usize])
            })
            .collect();
        for &x in &cur {
            mask[x as usize] = false;
        }
        if next.len() == cur.len() {
            return next;
        }
        cur = next;
    }
}

/// Sorted element list of the derived subgroup of the subgroup `h`.
pub(crate) fn derived_elements(e: &EnumeratedGroup, h: &[Elt]) -> Vec<Elt> {
    let gens = e.generating_set(h);
    let mut comms = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let c = e.mult(e.mult(a, b), e.mult(e.inv(a), e.inv(b)));
            if c != 0 {
                comms.push(c);
            }
        }
    }
    comms.sort_unstable();
    comms.dedup();
    // normal closure in h of the generator commutators
    let mut cur = e.closure(&comms);
    loop {
        let mut extra = Vec::new();
        let mut mask = vec![false; e.len()];
        for &x in &cur {
            mask[x as usize] = true;
        }
        for &g in &gens {
            for &c in &comms {
                let y = e.conj(g, c);
                if !mask[y as usize] {
                    extra.push(y);
                }
            }
        }
        if extra.is_empty() {
            return cur;
        }
        comms.extend(extra);
        comms.sort_unstable();
        comms.dedup();
        cur = e.closure(&comms);
    }
}

/// Left cosets `xH` of a subgroup, numbered by breadth-first discovery.
pub(crate) struct CosetTable {
    label: Vec<u32>,
    reps: Vec<Elt>,
}

impl CosetTable {
    pub(crate) fn new(e: &EnumeratedGroup, h: &[Elt]) -> Self {
        let mut gens: Vec<Elt> = e.generators().to_vec();
        gens.sort_unstable_by(|&a, &b| e.perm(a).cmp(e.perm(b)));
        let mut label = vec![u32::MAX; e.len()];
        let mut reps = vec![0];
        for &x in h {
            label[x as usize] = 0;
        }
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            for &s in &gens {
                let y = e.mult(s, r);
                if label[y as usize] == u32::MAX {
                    let c = reps.len() as u32;
                    reps.push(y);
                    for &x in h {
                        label[e.mult(y, x) as usize] = c;
                    }
                }
            }
            i += 1;
        }
        CosetTable { label, reps }
    }

    pub(crate) fn len(&self) -> usize {
        self.reps.len()
    }

    /// Images of the cosets under left multiplication by `g`.
    pub(crate) fn action(&self, e: &EnumeratedGroup, g: Elt) -> Vec<Point> {
        self.reps
            .iter()
            .map(|&r| self.label[e.mult(g, r) as usize] as Point)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> PermGroup {
        PermGroup::from_cycles(3, &["(0,1,2)", "(0,1)"]).unwrap()
    }

    fn d8() -> PermGroup {
        PermGroup::from_cycles(4, &["(0,1,2,3)", "(0,2)"]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(s3().order(), 6);
        assert_eq!(PermGroup::trivial(4).order(), 1);
        assert_eq!(d8().order(), 8);
    }

    #[test]
    fn transitivity() {
        assert!(s3().is_transitive());
        assert!(!PermGroup::from_cycles(3, &["(0,1)"])
            .unwrap()
            .is_transitive());
        assert!(PermGroup::from_cycles(4, &["(0,1)(2,3)", "(0,2)(1,3)"])
            .unwrap()
            .is_transitive());
    }

    #[test]
    fn stabilizers() {
        let st = s3().point_stabilizer(0);
        assert_eq!(st.order(), 2);
        assert!(st.generators().iter().all(|g| g.image(0) == 0));
        let c4 = PermGroup::from_cycles(4, &["(0,1,2,3)"]).unwrap();
        assert_eq!(c4.point_stabilizer(0).order(), 1);
    }

    #[test]
    fn cores() {
        let g = s3();
        let a3 = PermGroup::from_cycles(3, &["(0,1,2)"]).unwrap();
        assert_eq!(g.normal_core(&a3).unwrap().order(), 3);
        let t = PermGroup::from_cycles(3, &["(0,1)"]).unwrap();
        assert_eq!(g.normal_core(&t).unwrap().order(), 1);
        let bad = PermGroup::from_cycles(3, &["(0,1)"]).unwrap();
        assert!(a3.normal_core(&bad).is_err());
    }

    #[test]
    fn coset_actions() {
        let g = s3();
        let t = PermGroup::from_cycles(3, &["(0,1)"]).unwrap();
        let r = g.coset_action(&t).unwrap();
        assert_eq!(r.image.degree(), 3);
        assert_eq!(r.image.order(), 6);
        assert_eq!(r.kernel.order(), 1);

        let d = d8();
        let z = PermGroup::from_cycles(4, &["(0,2)(1,3)"]).unwrap();
        let r = d.coset_action(&z).unwrap();
        assert_eq!(r.image.degree(), 4);
        assert_eq!(r.image.order(), 4);
        assert!(r.image.is_transitive());
        assert_eq!(r.kernel.order(), 2);

        let r = d.coset_action(&d).unwrap();
        assert_eq!(r.image.degree(), 1);
        assert_eq!(r.kernel.order(), 8);
    }

    #[test]
    fn conjugate_subgroups() {
        let g = s3();
        let a = PermGroup::from_cycles(3, &["(0,1)"]).unwrap();
        let b = PermGroup::from_cycles(3, &["(1,2)"]).unwrap();
        let w = g.are_conjugate_subgroups(&a, &b).unwrap().unwrap();
        assert!(a.conjugate_by(&w).same_group(&b));
        assert!(g
            .are_conjugate_subgroups(&a, &a)
            .unwrap()
            .unwrap()
            .is_identity());
        let c3 = PermGroup::from_cycles(3, &["(0,1,2)"]).unwrap();
        assert!(g.are_conjugate_subgroups(&a, &c3).unwrap().is_none());
    }

    #[test]
    fn json_roundtrip() {
        let g = d8();
        let s = serde_json::to_string(&g).unwrap();
        let h: PermGroup = serde_json::from_str(&s).unwrap();
        assert!(g.same_group(&h));
    }

    #[test]
    fn derived_and_solvable() {
        let s4 = PermGroup::from_cycles(4, &["(0,1)", "(0,1,2,3)"]).unwrap();
        assert_eq!(s4.derived_subgroup().unwrap().order(), 12);
        assert!(s4.is_solvable().unwrap());
        let a5 = PermGroup::from_cycles(5, &["(0,1,2)", "(0,1,2,3,4)"]).unwrap();
        assert!(!a5.is_solvable().unwrap());
    }
}
