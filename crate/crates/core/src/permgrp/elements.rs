//! Explicit element lists for groups small enough to enumerate.
//!
//! Every element is stored as its image array, and an element is located
//! from the images of a base (a set of points whose images determine the
//! element). Products therefore cost a handful of array reads and one table
//! or hash lookup.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::group::PermGroup;
use super::perm::{Permutation, Point};
use crate::error::{Error, Result};

/// Index of an element inside an [`EnumeratedGroup`]. The identity is always 0.
pub type Elt = u32;

const DENSE_LIMIT: usize = 1 << 24;

enum Lookup {
    Dense(Vec<Elt>),
    Packed(HashMap<u64, Elt>),
    Wide(HashMap<Vec<Point>, Elt>),
}

pub struct EnumeratedGroup {
    degree: usize,
    data: Vec<Point>,
    base: Vec<usize>,
    strides: Vec<usize>,
    lookup: Lookup,
    inverse: Vec<Elt>,
    orders: Vec<u32>,
    gens: Vec<Elt>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Conjugacy classes of elements.
pub struct ConjugacyClasses {
    pub class_of: Vec<u32>,
    pub classes: Vec<Vec<Elt>>,
}

impl EnumeratedGroup {
    /// Enumerates `group` breadth-first from the identity, multiplying on the
    /// right by the generators in sorted order.
    pub fn from_group(group: &PermGroup, limit: u64) -> Result<Self> {
        let order = group.order();
        if order > limit {
            return Err(Error::Resource {
                what: "element enumeration".into(),
                limit,
                progress: 0,
            });
        }
        let degree = group.degree();
        let base = group.chain().base();
        let mut gens: Vec<Permutation> = group
            .generators()
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        gens.sort();
        gens.dedup();
        let mut eg = EnumeratedGroup::empty(degree, base, order as usize);
        eg.push(&Permutation::identity(degree));
        let mut i = 0;
        let mut buf = vec![0 as Point; degree];
        while i < eg.len() {
            for s in &gens {
                {
                    let x = eg.perm(i as Elt);
                    for (p, b) in buf.iter_mut().enumerate() {
                        *b = x[s.image(p)];
                    }
                }
                if eg.index_of(&buf).is_none() {
                    eg.push_points(&buf);
                }
            }
            i += 1;
        }
        debug_assert_eq!(eg.len() as u64, order);
        eg.gens = gens
            .iter()
            .map(|g| eg.index_of(g.images()).unwrap())
            .collect();
        eg.finish();
        Ok(eg)
    }

    /// Wraps an explicit element list, keeping its order. `elements[0]` must
    /// be the identity and the list must be closed under products.
    pub fn from_elements(
        degree: usize,
        elements: Vec<Permutation>,
        gens: &[usize],
    ) -> Result<Self> {
        if elements.is_empty() || !elements[0].is_identity() {
            return Err(Error::precondition(
                "element list must start with the identity",
            ));
        }
        let base = distinguishing_base(degree, &elements);
        let mut eg = EnumeratedGroup::empty(degree, base, elements.len());
        for e in &elements {
            if eg.index_of(e.images()).is_some() {
                return Err(Error::precondition("repeated element in element list"));
            }
            eg.push(e);
        }
        eg.gens = gens.iter().map(|&g| g as Elt).collect();
        eg.finish();
        for &g in &eg.gens {
            for x in 0..eg.len() as Elt {
                if eg.try_mult(x, g).is_none() {
                    return Err(Error::precondition("element list is not closed"));
                }
            }
        }
        Ok(eg)
    }

    fn empty(degree: usize, base: Vec<usize>, capacity: usize) -> Self {
        let mut strides = Vec::with_capacity(base.len());
        let mut size: usize = 1;
        let mut dense_ok = true;
        for _ in &base {
            strides.push(size);
            match size.checked_mul(degree.max(1)) {
                Some(s) if s <= DENSE_LIMIT => size = s,
                _ => {
                    dense_ok = false;
                    break;
                }
            }
        }
        let lookup = if dense_ok {
            Lookup::Dense(vec![Elt::MAX; size])
        } else if base.len() <= 4 {
            Lookup::Packed(HashMap::with_capacity(capacity))
        } else {
            Lookup::Wide(HashMap::with_capacity(capacity))
        };
        EnumeratedGroup {
            degree,
            data: Vec::with_capacity(capacity * degree),
            base,
            strides,
            lookup,
            inverse: Vec::new(),
            orders: Vec::new(),
            gens: Vec::new(),
            classes: OnceLock::new(),
        }
    }

    fn push(&mut self, p: &Permutation) {
        self.push_points(p.images());
    }

    fn push_points(&mut self, pts: &[Point]) {
        let idx = self.len() as Elt;
        self.data.extend_from_slice(pts);
        match &mut self.lookup {
            Lookup::Dense(t) => {
                let mut k = 0;
                for (b, s) in self.base.iter().zip(&self.strides) {
                    k += pts[*b] as usize * s;
                }
                t[k] = idx;
            }
            Lookup::Packed(m) => {
                let mut k = 0u64;
                for b in &self.base {
                    k = (k << 16) | pts[*b] as u64;
                }
                m.insert(k, idx);
            }
            Lookup::Wide(m) => {
                m.insert(self.base.iter().map(|&b| pts[b]).collect(), idx);
            }
        }
    }

    fn finish(&mut self) {
        let n = self.len();
        let mut inverse = vec![0; n];
        let mut orders = vec![0; n];
        let mut buf = vec![0 as Point; self.degree];
        for i in 0..n {
            let p = self.perm(i as Elt);
            for (j, &x) in p.iter().enumerate() {
                buf[x as usize] = j as Point;
            }
            inverse[i] = self
                .index_of(&buf)
                .expect("group not closed under inverses");
            orders[i] = Permutation::from_slice_unchecked(p).order() as u32;
        }
        self.inverse = inverse;
        self.orders = orders;
    }

    #[inline]
    fn key_lookup(&self, img: impl Fn(usize) -> Point) -> Option<Elt> {
        match &self.lookup {
            Lookup::Dense(t) => {
                let mut k = 0;
                for (b, s) in self.base.iter().zip(&self.strides) {
                    k += img(*b) as usize * s;
                }
                let v = t[k];
                (v != Elt::MAX).then_some(v)
            }
            Lookup::Packed(m) => {
                let mut k = 0u64;
                for b in &self.base {
                    k = (k << 16) | img(*b) as u64;
                }
                m.get(&k).copied()
            }
            Lookup::Wide(m) => {
                let key: Vec<Point> = self.base.iter().map(|&b| img(b)).collect();
                m.get(&key).copied()
            }
        }
    }

    /// Locates a permutation given by its images. Only base images are read,
    /// so the caller must pass an actual member to get a meaningful answer
    /// (see [`EnumeratedGroup::index_of_checked`]).
    #[inline]
    pub fn index_of(&self, pts: &[Point]) -> Option<Elt> {
        self.key_lookup(|b| pts[b])
    }

    pub fn index_of_checked(&self, pts: &[Point]) -> Option<Elt> {
        if pts.len() != self.degree {
            return None;
        }
        let i = self.index_of(pts)?;
        (self.perm(i) == pts).then_some(i)
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.degree == 0 {
            1
        } else {
            self.data.len() / self.degree
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.len() as u64
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn generators(&self) -> &[Elt] {
        &self.gens
    }

    #[inline]
    pub fn perm(&self, i: Elt) -> &[Point] {
        let s = i as usize * self.degree;
        &self.data[s..s + self.degree]
    }

    pub fn permutation(&self, i: Elt) -> Permutation {
        Permutation::from_slice_unchecked(self.perm(i))
    }

    #[inline]
    fn try_mult(&self, a: Elt, b: Elt) -> Option<Elt> {
        let pa = self.perm(a);
        let pb = self.perm(b);
        self.key_lookup(|p| pa[pb[p] as usize])
    }

    /// Index of `a ∘ b`.
    #[inline]
    pub fn mult(&self, a: Elt, b: Elt) -> Elt {
        self.try_mult(a, b)
            .expect("product outside enumerated group")
    }

    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.inverse[a as usize]
    }

    /// `g a g^-1`.
    #[inline]
    pub fn conj(&self, g: Elt, a: Elt) -> Elt {
        self.mult(self.mult(g, a), self.inverse[g as usize])
    }

    #[inline]
    pub fn elt_order(&self, a: Elt) -> u32 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        let mut base = a;
        let mut acc = 0;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mult(acc, base);
            }
            base = self.mult(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.len() as Elt
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elt]) -> Vec<Elt> {
        let mut seen = vec![false; self.len()];
        self.closure_with(gens, &mut seen)
    }

    /// Like [`closure`](Self::closure) but reuses a caller-provided scratch
    /// mask, which is left cleared on return.
    pub fn closure_with(&self, gens: &[Elt], seen: &mut [bool]) -> Vec<Elt> {
        let gens: Vec<Elt> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut out = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in &gens {
                let y = self.mult(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        for &x in &out {
            seen[x as usize] = false;
        }
        out.sort_unstable();
        out
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.len();
            let mut class_of = vec![u32::MAX; n];
            let mut classes = Vec::new();
            for x in 0..n as Elt {
                if class_of[x as usize] != u32::MAX {
                    continue;
                }
                let id = classes.len() as u32;
                let mut cls = vec![x];
                class_of[x as usize] = id;
                let mut i = 0;
                while i < cls.len() {
                    let y = cls[i];
                    for &g in &self.gens {
                        let z = self.conj(g, y);
                        if class_of[z as usize] == u32::MAX {
                            class_of[z as usize] = id;
                            cls.push(z);
                        }
                    }
                    i += 1;
                }
                cls.sort_unstable();
                classes.push(cls);
            }
            ConjugacyClasses { class_of, classes }
        })
    }

    pub fn class_size(&self, a: Elt) -> usize {
        let c = self.conjugacy_classes();
        c.classes[c.class_of[a as usize] as usize].len()
    }

    pub fn center(&self) -> Vec<Elt> {
        let c = self.conjugacy_classes();
        let mut z: Vec<Elt> = c
            .classes
            .iter()
            .filter(|cl| cl.len() == 1)
            .map(|cl| cl[0])
            .collect();
        z.sort_unstable();
        z
    }

    pub fn to_perm_group(&self) -> PermGroup {
        let gens = self.gens.iter().map(|&g| self.permutation(g)).collect();
        PermGroup::new_unchecked(self.degree, gens)
    }

    /// Permutation group generated by the given elements.
    pub fn subgroup_perm_group(&self, gens: &[Elt]) -> PermGroup {
        let gens = gens.iter().map(|&g| self.permutation(g)).collect();
        PermGroup::new_unchecked(self.degree, gens)
    }

    /// Greedy small generating set for a subgroup given by its sorted
    /// element list: elements are tried in descending order of element order.
    pub fn generating_set(&self, subgroup: &[Elt]) -> Vec<Elt> {
        let mut cand: Vec<Elt> = subgroup.iter().copied().filter(|&x| x != 0).collect();
        cand.sort_by_key(|&x| (std::cmp::Reverse(self.elt_order(x)), x));
        let mut gens = Vec::new();
        let mut seen = vec![false; self.len()];
        let mut mask = vec![false; self.len()];
        mask[0] = true;
        let mut size = 1;
        for &c in &cand {
            if size == subgroup.len() {
                break;
            }
            if mask[c as usize] {
                continue;
            }
            gens.push(c);
            let cl = self.closure_with(&gens, &mut seen);
            size = cl.len();
            for x in cl {
                mask[x as usize] = true;
            }
        }
        gens
    }
}

/// Points whose images separate all the given permutations.
fn distinguishing_base(degree: usize, elements: &[Permutation]) -> Vec<usize> {
    let mut base: Vec<usize> = Vec::new();
    loop {
        let mut seen: HashMap<Vec<Point>, usize> = HashMap::with_capacity(elements.len());
        let mut clash = None;
        for (i, e) in elements.iter().enumerate() {
            let key: Vec<Point> = base.iter().map(|&b| e.images()[b]).collect();
            if let Some(&j) = seen.get(&key) {
                clash = Some((j, i));
                break;
            }
            seen.insert(key, i);
        }
        match clash {
            None => return base,
            Some((j, i)) => {
                let p = (0..degree)
                    .find(|&p| elements[i].image(p) != elements[j].image(p))
                    .expect("duplicate element");
                base.push(p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> PermGroup {
        PermGroup::from_cycles(4, &["(0,1)", "(0,1,2,3)"]).unwrap()
    }

    #[test]
    fn enumerates_all_elements_with_identity_first() {
        let g = s4();
        let e = EnumeratedGroup::from_group(&g, 1000).unwrap();
        assert_eq!(e.len(), 24);
        assert!(e.permutation(0).is_identity());
        for a in e.elements() {
            assert_eq!(e.mult(a, e.inv(a)), 0);
            for b in e.elements() {
                let ab = e.permutation(a).compose(&e.permutation(b));
                assert_eq!(e.permutation(e.mult(a, b)), ab);
            }
        }
    }

    #[test]
    fn classes_of_s4() {
        let e = EnumeratedGroup::from_group(&s4(), 1000).unwrap();
        let mut sizes: Vec<usize> = e
            .conjugacy_classes()
            .classes
            .iter()
            .map(|c| c.len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
        assert_eq!(e.center(), vec![0]);
    }

    #[test]
    fn generating_set_regenerates() {
        let e = EnumeratedGroup::from_group(&s4(), 1000).unwrap();
        let all: Vec<Elt> = e.elements().collect();
        let gens = e.generating_set(&all);
        assert!(gens.len() <= 3);
        assert_eq!(e.closure(&gens).len(), 24);
    }

    #[test]
    fn explicit_elements_keep_their_order() {
        // regular representation of C3
        let els: Vec<Permutation> = (0..3)
            .map(|i| Permutation::from_images((0..3).map(|j| (i + j) % 3).collect()).unwrap())
            .collect();
        let e = EnumeratedGroup::from_elements(3, els, &[1]).unwrap();
        assert_eq!(e.mult(1, 1), 2);
        assert_eq!(e.inv(1), 2);
        assert_eq!(e.base(), &[0]);
    }
}
