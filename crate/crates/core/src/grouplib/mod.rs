//! Abstract finite groups given by multiplication tables.
//!
//! Every supported order has a fixed list of representatives, one per
//! isomorphism type. Element 0 is always the identity, so in the regular
//! representation point 0 is the identity of the group.

mod catalogue;

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub(crate) use crate::permgrp::gcd as gcd_u64;
use crate::permgrp::{EnumeratedGroup, PermGroup, Permutation, Point};

pub use catalogue::{
    groups_of_order, holder_count, is_prime, is_squarefree, squarefree_groups, supported_order,
    GroupCatalogue, GROUPLIB_VERSION,
};

/// `(order, index)` in this crate's deterministic catalogue ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupLabel {
    pub order: u64,
    pub index: usize,
}

/// Parameters of `<σ, τ | σ^e = τ^d = 1, τστ^-1 = σ^k>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquarefreePresentation {
    pub e: u64,
    pub d: u64,
    pub k: u64,
}

impl SquarefreePresentation {
    /// Index of `σ^a τ^b`.
    pub fn element(&self, a: u64, b: u64) -> u32 {
        ((a % self.e) + self.e * (b % self.d)) as u32
    }

    /// `(a, b)` with `x = σ^a τ^b`.
    pub fn coords(&self, x: u32) -> (u64, u64) {
        (x as u64 % self.e, x as u64 / self.e)
    }
}

pub struct AbstractGroup {
    order: usize,
    table: Vec<u32>,
    gens: Vec<u32>,
    pub label: GroupLabel,
    pub name: String,
    pub presentation_tag: String,
    pub squarefree: Option<SquarefreePresentation>,
    inverse: Vec<u32>,
    regular: OnceLock<Arc<EnumeratedGroup>>,
}

impl Clone for AbstractGroup {
    fn clone(&self) -> Self {
        AbstractGroup {
            order: self.order,
            table: self.table.clone(),
            gens: self.gens.clone(),
            label: self.label,
            name: self.name.clone(),
            presentation_tag: self.presentation_tag.clone(),
            squarefree: self.squarefree,
            inverse: self.inverse.clone(),
            regular: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for AbstractGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (order {}, {})",
            self.name, self.order, self.presentation_tag
        )
    }
}

impl AbstractGroup {
    /// Builds a group from a product function on `0..order`. Element 0 must
    /// be the identity; `gens` must generate.
    pub fn from_fn(
        order: usize,
        gens: Vec<u32>,
        name: impl Into<String>,
        tag: impl Into<String>,
        mult: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mult(a, b) as u32;
            }
        }
        Self::from_table(order, table, gens, name, tag)
    }

    pub fn from_table(
        order: usize,
        table: Vec<u32>,
        gens: Vec<u32>,
        name: impl Into<String>,
        tag: impl Into<String>,
    ) -> Self {
        let mut inverse = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
        }
        AbstractGroup {
            order,
            table,
            gens: gens.into_iter().filter(|&g| g != 0).collect(),
            label: GroupLabel {
                order: order as u64,
                index: 0,
            },
            name: name.into(),
            presentation_tag: tag.into(),
            squarefree: None,
            inverse,
            regular: OnceLock::new(),
        }
    }

    /// Multiplication table of a permutation group, in enumeration order.
    pub fn from_perm_group(
        g: &PermGroup,
        name: impl Into<String>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        let e = g.enumerate()?;
        let n = e.len();
        let gens = e.generators().to_vec();
        Ok(Self::from_fn(n, gens, name, tag, |a, b| {
            e.mult(a as u32, b as u32) as usize
        }))
    }

    pub fn trivial() -> Self {
        Self::from_fn(1, vec![], "C1", "cyclic(1)", |_, _| 0)
    }

    pub fn cyclic(n: usize) -> Self {
        let gens = if n > 1 { vec![1] } else { vec![] };
        Self::from_fn(n, gens, format!("C{n}"), format!("cyclic({n})"), |a, b| {
            (a + b) % n
        })
    }

    /// `<a, x | a^m1 = 1, x^m2 = a^t, x a x^-1 = a^r>`, element `a^i x^j` at `i + m1*j`.
    pub fn metacyclic(m1: u64, m2: u64, t: u64, r: u64, name: impl Into<String>) -> Result<Self> {
        if pow_mod(r, m2, m1) != 1 % m1 || (r * t) % m1 != t % m1 {
            return Err(Error::precondition(format!(
                "invalid metacyclic parameters ({m1},{m2},{t},{r})"
            )));
        }
        let n = (m1 * m2) as usize;
        let rp: Vec<u64> = (0..m2).map(|j| pow_mod(r, j, m1)).collect();
        let tag = format!("metacyclic({m1},{m2},{t},{r})");
        let mut gens = Vec::new();
        if m1 > 1 {
            gens.push(1);
        }
        if m2 > 1 {
            gens.push(m1 as u32);
        }
        Ok(Self::from_fn(n, gens, name, tag, |x, y| {
            let (i, j) = (x as u64 % m1, x as u64 / m1);
            let (k, l) = (y as u64 % m1, y as u64 / m1);
            let mut a = i + rp[j as usize] * k;
            let mut b = j + l;
            if b >= m2 {
                b -= m2;
                a += t;
            }
            ((a % m1) + m1 * b) as usize
        }))
    }

    /// Squarefree-order group from `(e, d, k)`; `σ^a τ^b` sits at `a + e*b`.
    pub fn squarefree_presentation(e: u64, d: u64, k: u64) -> Result<Self> {
        if e == 0 || d == 0 || pow_mod(k, d, e) != 1 % e {
            return Err(Error::precondition(format!(
                "invalid parameters (e,d,k)=({e},{d},{k})"
            )));
        }
        let name = if d == 1 {
            format!("C{e}")
        } else {
            format!("C{e}:C{d}")
        };
        let mut g = Self::metacyclic(e, d, 0, k % e.max(1), name)?;
        g.presentation_tag = format!("squarefree({e},{d},{k})");
        g.squarefree = Some(SquarefreePresentation { e, d, k });
        Ok(g)
    }

    /// `N ⋊ K`, where generator `K.gens[i]` acts on `N` by the automorphism
    /// sending `N.gens[j]` to `actions[i][j]`. Element `(n, k)` sits at
    /// `n + |N| * k`.
    pub fn semidirect(
        n: &AbstractGroup,
        k: &AbstractGroup,
        actions: &[Vec<u32>],
        name: impl Into<String>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        if actions.len() != k.gens.len() {
            return Err(Error::precondition(
                "one action per generator of K required",
            ));
        }
        let gen_autos: Vec<Vec<u32>> = actions
            .iter()
            .map(|imgs| {
                n.extend_hom(&n.gens, n, imgs)
                    .filter(|m| is_bijection(m))
                    .ok_or_else(|| Error::precondition("action is not an automorphism"))
            })
            .collect::<Result<_>>()?;
        // φ_k for every k, by breadth-first search over K
        let mut phi: Vec<Option<Vec<u32>>> = vec![None; k.order];
        phi[0] = Some((0..n.order as u32).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in k.gens.iter().enumerate() {
                let y = k.mult(x as u32, g) as usize;
                let px = phi[x].as_ref().unwrap();
                let py: Vec<u32> = (0..n.order)
                    .map(|v| px[gen_autos[gi][v] as usize])
                    .collect();
                match &phi[y] {
                    None => {
                        phi[y] = Some(py);
                        queue.push_back(y);
                    }
                    Some(old) if *old != py => {
                        return Err(Error::precondition("action is not a homomorphism"));
                    }
                    _ => {}
                }
            }
        }
        let phi: Vec<Vec<u32>> = phi.into_iter().map(|p| p.unwrap()).collect();
        let no = n.order;
        let mut gens: Vec<u32> = n.gens.clone();
        gens.extend(k.gens.iter().map(|&g| g * no as u32));
        Ok(Self::from_fn(no * k.order, gens, name, tag, |x, y| {
            let (n1, k1) = (x % no, x / no);
            let (n2, k2) = (y % no, y / no);
            let nn = n.mult(n1 as u32, phi[k1][n2]) as usize;
            nn + no * k.mult(k1 as u32, k2 as u32) as usize
        }))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mult(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mult(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mult(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| {
            self.gens
                .iter()
                .all(|&b| self.mult(a, b) == self.mult(b, a))
        })
    }

    /// Checks identity, inverses, associativity (exhaustive up to order 64,
    /// on generator triples above) and that `gens` generate.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as u32 {
            if self.mult(0, a) != a || self.mult(a, 0) != a {
                return Err(Error::precondition("element 0 is not the identity"));
            }
            let mut row = vec![false; n];
            for b in 0..n as u32 {
                let c = self.mult(a, b) as usize;
                if c >= n || row[c] {
                    return Err(Error::precondition("table row is not a permutation"));
                }
                row[c] = true;
            }
            if self.mult(a, self.inv(a)) != 0 || self.mult(self.inv(a), a) != 0 {
                return Err(Error::precondition("missing inverse"));
            }
        }
        let triples: Box<dyn Iterator<Item = (u32, u32, u32)>> = if n <= 64 {
            Box::new((0..n as u32).flat_map(move |a| {
                (0..n as u32).flat_map(move |b| (0..n as u32).map(move |c| (a, b, c)))
            }))
        } else {
            let gens = self.gens.clone();
            Box::new((0..n as u32).flat_map(move |a| {
                let gens = gens.clone();
                gens.clone()
                    .into_iter()
                    .flat_map(move |b| gens.clone().into_iter().map(move |c| (a, b, c)))
            }))
        };
        for (a, b, c) in triples {
            if self.mult(self.mult(a, b), c) != self.mult(a, self.mult(b, c)) {
                return Err(Error::precondition(format!(
                    "associativity fails at ({a},{b},{c})"
                )));
            }
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0u32];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in &self.gens {
                let y = self.mult(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count != n {
            return Err(Error::precondition("generators do not generate"));
        }
        Ok(())
    }

    /// Extends `src_gens -> images` to a homomorphism into `dst`, if consistent.
    pub fn extend_hom(
        &self,
        src_gens: &[u32],
        dst: &AbstractGroup,
        images: &[u32],
    ) -> Option<Vec<u32>> {
        let mut map = vec![u32::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in src_gens.iter().zip(images) {
                let y = self.mult(x, g);
                let fy = dst.mult(map[x as usize], h);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = fy;
                    queue.push_back(y);
                } else if map[y as usize] != fy {
                    return None;
                }
            }
        }
        map.iter().all(|&v| v != u32::MAX).then_some(map)
    }

    /// `λ(a)`: the permutation `μ ↦ aμ`.
    pub fn left_translation(&self, a: u32) -> Permutation {
        let row = &self.table[a as usize * self.order..(a as usize + 1) * self.order];
        Permutation::from_points_unchecked(row.iter().map(|&x| x as Point).collect())
    }

    /// The left-regular representation as a permutation group on `order` points.
    pub fn regular_representation(&self) -> PermGroup {
        let gens = self
            .gens
            .iter()
            .map(|&g| self.left_translation(g))
            .collect();
        PermGroup::new(self.order, gens).expect("degree matches")
    }

    /// The regular representation with element `i` at index `i`.
    pub fn regular_enumerated(&self) -> Arc<EnumeratedGroup> {
        self.regular
            .get_or_init(|| {
                let els = (0..self.order as u32)
                    .map(|a| self.left_translation(a))
                    .collect();
                let gens: Vec<usize> = self.gens.iter().map(|&g| g as usize).collect();
                Arc::new(
                    EnumeratedGroup::from_elements(self.order, els, &gens)
                        .expect("table defines a group"),
                )
            })
            .clone()
    }

    pub fn direct_product(&self, other: &AbstractGroup) -> AbstractGroup {
        direct_product(self, other)
    }

    /// Serializable description: the full table up to order 64, generator
    /// images of the regular representation above that.
    pub fn to_json(&self) -> AbstractGroupJson {
        AbstractGroupJson {
            label: self.label,
            name: self.name.clone(),
            presentation_tag: self.presentation_tag.clone(),
            generators: self.gens.clone(),
            regular_generators: self
                .gens
                .iter()
                .map(|&g| self.left_translation(g))
                .collect(),
            table: (self.order <= 64)
                .then(|| self.table.chunks(self.order).map(|r| r.to_vec()).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbstractGroupJson {
    pub label: GroupLabel,
    pub name: String,
    pub presentation_tag: String,
    pub generators: Vec<u32>,
    pub regular_generators: Vec<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub table: Option<Vec<Vec<u32>>>,
}

/// `N × M` with `(a, b)` at `a * |M| + b`.
pub fn direct_product(n: &AbstractGroup, m: &AbstractGroup) -> AbstractGroup {
    let mo = m.order;
    let mut gens: Vec<u32> = n.gens.iter().map(|&a| a * mo as u32).collect();
    gens.extend(m.gens.iter().copied());
    let name = if n.order == 1 {
        m.name.clone()
    } else if m.order == 1 {
        n.name.clone()
    } else {
        format!("{}x{}", n.name, m.name)
    };
    let tag = format!("direct({},{})", n.presentation_tag, m.presentation_tag);
    AbstractGroup::from_fn(n.order * mo, gens, name, tag, |x, y| {
        let (a1, b1) = (x / mo, x % mo);
        let (a2, b2) = (y / mo, y % mo);
        n.mult(a1 as u32, a2 as u32) as usize * mo + m.mult(b1 as u32, b2 as u32) as usize
    })
}

pub(crate) fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    let mut base = b % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of `a` modulo `m` (`a` coprime to `m`).
pub(crate) fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
        if k > m {
            return 0;
        }
    }
    k
}

fn is_bijection(m: &[u32]) -> bool {
    let mut seen = vec![false; m.len()];
    m.iter()
        .all(|&x| !std::mem::replace(&mut seen[x as usize], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_builders_are_groups() {
        for g in [
            AbstractGroup::trivial(),
            AbstractGroup::cyclic(6),
            AbstractGroup::metacyclic(4, 2, 2, 3, "Q8").unwrap(),
            AbstractGroup::metacyclic(8, 2, 0, 3, "SD16").unwrap(),
            AbstractGroup::squarefree_presentation(7, 3, 2).unwrap(),
        ] {
            g.verify_axioms().unwrap();
        }
        assert!(AbstractGroup::metacyclic(4, 2, 1, 3, "bad").is_err());
    }

    #[test]
    fn regular_representation_is_regular() {
        let g = AbstractGroup::squarefree_presentation(7, 3, 2).unwrap();
        let r = g.regular_representation();
        assert_eq!(r.order(), 21);
        assert!(r.is_transitive());
        assert_eq!(r.point_stabilizer(0).order(), 1);
        let c3 = AbstractGroup::cyclic(3).regular_representation();
        assert_eq!(c3.generators()[0].to_cycle_string(false), "(0,1,2)");
        assert_eq!(AbstractGroup::trivial().regular_representation().order(), 1);
    }

    #[test]
    fn direct_products() {
        let c2 = AbstractGroup::cyclic(2);
        let k4 = direct_product(&c2, &c2);
        k4.verify_axioms().unwrap();
        assert!((1..4).all(|a| k4.element_order(a) == 2));
        let c2c4 = direct_product(&c2, &AbstractGroup::cyclic(4));
        assert_eq!(c2c4.order(), 8);
        assert!(c2c4.is_abelian());
        let t = direct_product(&c2c4, &AbstractGroup::trivial());
        assert_eq!(t.table(), c2c4.table());
    }

    #[test]
    fn semidirect_a4() {
        let c2 = AbstractGroup::cyclic(2);
        let k4 = direct_product(&c2, &c2);
        let c3 = AbstractGroup::cyclic(3);
        // generators of K4 are (1,0)=2 and (0,1)=1
        let a4 = AbstractGroup::semidirect(&k4, &c3, &[vec![1, 3]], "A4", "A4").unwrap();
        a4.verify_axioms().unwrap();
        assert!(!a4.is_abelian());
        let orders: Vec<u64> = (0..12).map(|a| a4.element_order(a)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 8);
    }
}
