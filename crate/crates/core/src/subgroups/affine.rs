//! Subgroups of affine groups `G ≤ V ⋊ GL(V)` without enumerating `G`.
//!
//! A subgroup `H` is determined by its linear part `K' = π(H)`, its
//! translations `W = H ∩ V` and a cocycle `K' → V/W`. Linear parts come from
//! the subgroup lattice of `π(G)` up to conjugacy; cocycles are enumerated
//! from the images of generators of `K'` and grouped into orbits under the
//! subgroup of `G` normalizing `K'`.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{hash_sorted_perms, subgroup_lattice, SubgroupClass};
use crate::error::{Error, Result};
use crate::permgrp::{Elt, EnumeratedGroup, PermGroup, Permutation, Point};

/// Coordinates on the points of a regular elementary abelian group `V`.
///
/// Point `x` gets the vector label `Σ c_i p^i` where `x = (b_1^c_1 ⋯ b_d^c_d)(0)`
/// for a fixed basis `b_i` of `V`; the origin is point 0.
#[derive(Clone, Debug)]
pub struct AffineFrame {
    p: usize,
    dim: usize,
    size: usize,
    to_vec: Vec<Point>,
    to_point: Vec<Point>,
    add: Vec<Point>,
    neg: Vec<Point>,
}

impl AffineFrame {
    /// Builds the frame of `translations`, which must be regular and
    /// elementary abelian.
    pub fn new(translations: &PermGroup) -> Result<Self> {
        let size = translations.degree();
        let not_affine =
            || Error::precondition("translation group is not regular elementary abelian");
        if size < 2 || translations.order() != size as u64 || !translations.is_transitive() {
            return Err(not_affine());
        }
        let gens = translations.generators();
        let p = gens
            .iter()
            .find(|g| !g.is_identity())
            .ok_or_else(not_affine)?
            .order() as usize;
        if (2..p).any(|d| p % d == 0) {
            return Err(not_affine());
        }
        for a in gens {
            if a.order() as usize != p && !a.is_identity() {
                return Err(not_affine());
            }
            if gens.iter().any(|b| a * b != b * a) {
                return Err(not_affine());
            }
        }
        let mut dim = 0;
        let mut m = 1;
        while m < size {
            m *= p;
            dim += 1;
        }
        if m != size {
            return Err(not_affine());
        }
        let elements = translations.elements()?;
        let mut in_span = vec![false; size];
        in_span[0] = true;
        let mut basis: Vec<&Permutation> = Vec::with_capacity(dim);
        for t in &elements {
            if in_span[t.image(0)] {
                continue;
            }
            let old: Vec<usize> = (0..size).filter(|&x| in_span[x]).collect();
            for x in old {
                let mut y = x;
                for _ in 1..p {
                    y = t.image(y);
                    in_span[y] = true;
                }
            }
            basis.push(t);
        }
        let mut to_point = vec![0 as Point; size];
        let mut stride = 1;
        for b in &basis {
            for v in stride..stride * p {
                to_point[v] = b.image(to_point[v - stride] as usize) as Point;
            }
            stride *= p;
        }
        let mut to_vec = vec![0 as Point; size];
        for (v, &x) in to_point.iter().enumerate() {
            to_vec[x as usize] = v as Point;
        }
        let digits = |mut v: usize| -> Vec<usize> {
            (0..dim)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let join = |ds: Vec<usize>| ds.iter().rev().fold(0, |acc, &d| acc * p + d) as Point;
        let mut add = vec![0; size * size];
        for a in 0..size {
            let da = digits(a);
            for b in 0..size {
                let db = digits(b);
                add[a * size + b] = join(da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect());
            }
        }
        let neg = (0..size)
            .map(|a| join(digits(a).iter().map(|d| (p - d) % p).collect()))
            .collect();
        Ok(AffineFrame {
            p,
            dim,
            size,
            to_vec,
            to_point,
            add,
            neg,
        })
    }

    pub fn degree(&self) -> usize {
        self.size
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    fn add(&self, a: Point, b: Point) -> Point {
        self.add[a as usize * self.size + b as usize]
    }

    fn sub(&self, a: Point, b: Point) -> Point {
        self.add(a, self.neg[b as usize])
    }

    fn to_points(&self, images: &[Point]) -> Vec<Point> {
        (0..self.size)
            .map(|x| self.to_point[images[self.to_vec[x] as usize] as usize])
            .collect()
    }

    /// `g = (v, A)` in vector labels: `g(x) = A(x) + v`.
    fn split(&self, g: &Permutation) -> Result<(Point, Vec<Point>)> {
        let gv: Vec<Point> = (0..self.size)
            .map(|x| self.to_vec[g.image(self.to_point[x] as usize)])
            .collect();
        let v = gv[0];
        let a: Vec<Point> = gv.iter().map(|&y| self.sub(y, v)).collect();
        let mut e = 1;
        for _ in 0..self.dim {
            let ae = a[e];
            if (0..self.size)
                .any(|x| a[self.add(x as Point, e as Point) as usize] != self.add(a[x], ae))
            {
                return Err(Error::precondition(
                    "group does not normalize the translation subgroup",
                ));
            }
            e *= self.p;
        }
        Ok((v, a))
    }

    /// Additive closure of `gens`, sorted.
    fn span(&self, gens: impl IntoIterator<Item = Point>) -> Vec<Point> {
        let mut mask = vec![false; self.size];
        mask[0] = true;
        let mut out = vec![0];
        for g in gens {
            if mask[g as usize] {
                continue;
            }
            let mut i = 0;
            while i < out.len() {
                let mut y = out[i];
                loop {
                    y = self.add(y, g);
                    if mask[y as usize] {
                        break;
                    }
                    mask[y as usize] = true;
                    out.push(y);
                }
                i += 1;
            }
        }
        out.sort_unstable();
        out
    }
}

/// Restrictions applied while enumerating.
#[derive(Clone, Copy, Debug, Default)]
pub struct AffineFilter {
    /// Only subgroups of this order.
    pub order: Option<u64>,
    /// Only transitive subgroups.
    pub transitive: bool,
}

/// A subspace with the smallest element of each of its cosets.
struct Subspace {
    elems: Vec<Point>,
    rep: Vec<Point>,
}

fn subspace(frame: &AffineFrame, elems: Vec<Point>) -> Subspace {
    let rep = (0..frame.size)
        .map(|x| {
            elems
                .iter()
                .map(|&w| frame.add(x as Point, w))
                .min()
                .unwrap()
        })
        .collect();
    Subspace { elems, rep }
}

/// Every subspace of the subspace `l`, ordered by size.
fn subspaces_of(frame: &AffineFrame, l: &[Point]) -> Vec<Vec<Point>> {
    let mut seen: HashSet<Vec<Point>> = HashSet::new();
    let mut out = vec![vec![0 as Point]];
    seen.insert(out[0].clone());
    let mut i = 0;
    while i < out.len() {
        for &v in l {
            if out[i].binary_search(&v).is_ok() {
                continue;
            }
            let s = frame.span(out[i].iter().copied().chain([v]));
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        i += 1;
    }
    out.sort();
    out.sort_by_key(|s| s.len());
    out
}

/// A point-independent basis of the subspace `s`.
fn basis_of(frame: &AffineFrame, s: &[Point]) -> Vec<Point> {
    let mut basis = Vec::new();
    let mut span = vec![0 as Point];
    for &v in s {
        if span.binary_search(&v).is_err() {
            basis.push(v);
            span = frame.span(basis.iter().copied());
        }
    }
    basis
}

/// A subgroup in cocycle form: translations `subs[w]` and, for the `i`-th
/// element `k` of `K'`, the coset `table[i] + W` of translation parts.
type Cocycle = (usize, Vec<Point>);

struct LinearPart<'a> {
    e: &'a EnumeratedGroup,
    elems: &'a [Elt],
    pos: Vec<u32>,
    gens: Vec<Elt>,
    /// Breadth-first edges `(from, generator, to, is_tree_edge)`.
    edges: Vec<(u32, usize, u32, bool)>,
}

impl<'a> LinearPart<'a> {
    fn new(e: &'a EnumeratedGroup, elems: &'a [Elt]) -> Self {
        let mut pos = vec![u32::MAX; e.len()];
        for (i, &k) in elems.iter().enumerate() {
            pos[k as usize] = i as u32;
        }
        let gens = e.generating_set(elems);
        let mut seen = vec![false; elems.len()];
        seen[pos[0] as usize] = true;
        let mut queue = VecDeque::from([0 as Elt]);
        let mut edges = Vec::new();
        while let Some(k) = queue.pop_front() {
            for (j, &a) in gens.iter().enumerate() {
                let t = e.mult(k, a);
                let tp = pos[t as usize];
                let tree = !seen[tp as usize];
                if tree {
                    seen[tp as usize] = true;
                    queue.push_back(t);
                }
                edges.push((pos[k as usize], j, tp, tree));
            }
        }
        LinearPart {
            e,
            elems,
            pos,
            gens,
            edges,
        }
    }

    /// The cocycle with the given generator values, if consistent.
    fn cocycle(&self, frame: &AffineFrame, w: &Subspace, values: &[Point]) -> Option<Vec<Point>> {
        let mut table = vec![Point::MAX; self.elems.len()];
        table[self.pos[0] as usize] = 0;
        for &(from, j, to, tree) in &self.edges {
            let k = self.elems[from as usize];
            let moved = self.e.perm(k)[values[j] as usize];
            let v = w.rep[frame.add(table[from as usize], moved) as usize];
            if tree {
                table[to as usize] = v;
            } else if table[to as usize] != v {
                return None;
            }
        }
        Some(table)
    }
}

/// Conjugation by `(u, B)` on cocycles of a fixed linear part normalized by `B`.
struct Mover {
    u: Point,
    b: Elt,
    conj: Vec<u32>,
    sub_image: Vec<usize>,
}

/// Subgroup classes of `g`, which must normalize the translation group of
/// `frame`, up to conjugacy in `g`.
///
/// The returned classes carry no element list (`elements` is empty) since
/// `g` is never enumerated; keys are computed from the representatives as
/// usual. Classes are ordered by order and key.
pub fn affine_subgroup_classes(
    frame: &AffineFrame,
    g: &PermGroup,
    filter: AffineFilter,
) -> Result<Vec<SubgroupClass>> {
    if g.degree() != frame.size {
        return Err(Error::DegreeMismatch {
            expected: frame.size,
            found: g.degree(),
        });
    }
    let mut lin = Vec::new();
    let mut trans = Vec::new();
    for x in g.generators().iter().filter(|x| !x.is_identity()) {
        let (v, a) = frame.split(x)?;
        trans.push(v);
        lin.push(a);
    }
    let k_group = PermGroup::new(
        frame.size,
        lin.iter()
            .map(|a| Permutation::from_images(a.iter().map(|&x| x as usize).collect()))
            .collect::<Result<_>>()?,
    )?;
    let lat = subgroup_lattice(&k_group, filter.order, k_group.order().max(1))?;
    let e = &*lat.elements;
    let lin_idx: Vec<Elt> = lin
        .iter()
        .map(|a| e.index_of(a).expect("generator lies in its group"))
        .collect();

    // lifts (s(k), k) ∈ g, and L = g ∩ V from the Schreier generators
    let mut lift = vec![Point::MAX; e.len()];
    lift[0] = 0;
    let mut queue = VecDeque::from([0 as Elt]);
    let mut schreier = Vec::new();
    while let Some(k) = queue.pop_front() {
        for (&a, &v) in lin_idx.iter().zip(&trans) {
            let t = e.mult(k, a);
            let s = frame.add(lift[k as usize], e.perm(k)[v as usize]);
            if lift[t as usize] == Point::MAX {
                lift[t as usize] = s;
                queue.push_back(t);
            } else {
                schreier.push(frame.sub(s, lift[t as usize]));
            }
        }
    }
    let l = frame.span(schreier);
    if e.order() * l.len() as u64 != g.order() {
        return Err(Error::precondition(
            "group does not normalize the translation subgroup",
        ));
    }
    let l_basis = basis_of(frame, &l);
    let subs: Vec<Subspace> = subspaces_of(frame, &l)
        .into_iter()
        .map(|s| subspace(frame, s))
        .collect();
    let sub_index: HashMap<&[Point], usize> = subs
        .iter()
        .enumerate()
        .map(|(i, s)| (&s.elems[..], i))
        .collect();
    let quotient_reps: Vec<Vec<Point>> = subs
        .iter()
        .map(|w| {
            let mut r: Vec<Point> = l.iter().map(|&x| w.rep[x as usize]).collect();
            r.sort_unstable();
            r.dedup();
            r
        })
        .collect();

    let mut out = Vec::new();
    for class in &lat.classes {
        let kp = &class.elements;
        let k_order = kp.len() as u64;
        if filter.transitive && k_order * (l.len() as u64) < frame.size as u64 {
            continue;
        }
        if let Some(t) = filter.order {
            if t % k_order != 0 || t / k_order > l.len() as u64 {
                continue;
            }
        }
        let part = LinearPart::new(e, kp);
        let invariant: Vec<usize> = (0..subs.len())
            .filter(|&i| {
                filter
                    .order
                    .is_none_or(|t| t / k_order == subs[i].elems.len() as u64)
                    && part.gens.iter().all(|&a| {
                        subs[i]
                            .elems
                            .iter()
                            .all(|&w| subs[i].rep[e.perm(a)[w as usize] as usize] == 0)
                    })
            })
            .collect();
        if invariant.is_empty() {
            continue;
        }

        let normalizer: Vec<Elt> = e
            .elements()
            .filter(|&x| {
                part.gens
                    .iter()
                    .all(|&a| part.pos[e.conj(x, a) as usize] != u32::MAX)
            })
            .collect();
        let factor = e.len() / normalizer.len();
        let movers: Vec<Mover> = e
            .generating_set(&normalizer)
            .into_iter()
            .map(|b| (lift[b as usize], b))
            .chain(l_basis.iter().map(|&u| (u, 0)))
            .map(|(u, b)| {
                let bi = e.inv(b);
                let conj = kp
                    .iter()
                    .map(|&k| part.pos[e.mult(e.mult(b, k), bi) as usize])
                    .collect();
                let sub_image = subs
                    .iter()
                    .map(|w| {
                        let mut img: Vec<Point> =
                            w.elems.iter().map(|&x| e.perm(b)[x as usize]).collect();
                        img.sort_unstable();
                        sub_index.get(&img[..]).copied().unwrap_or(usize::MAX)
                    })
                    .collect();
                Mover {
                    u,
                    b,
                    conj,
                    sub_image,
                }
            })
            .collect();
        let apply = |m: &Mover, (w, table): &Cocycle| -> Cocycle {
            let w2 = m.sub_image[*w];
            let rep = &subs[w2].rep;
            let bp = e.perm(m.b);
            let mut out = vec![0; table.len()];
            for (i, &h) in table.iter().enumerate() {
                let j = m.conj[i] as usize;
                let kj = e.perm(kp[j]);
                let v = frame.add(bp[h as usize], frame.sub(m.u, kj[m.u as usize]));
                out[j] = rep[v as usize];
            }
            (w2, out)
        };

        let mut seen: HashSet<Cocycle> = HashSet::new();
        for &wi in &invariant {
            let w = &subs[wi];
            let reps = &quotient_reps[wi];
            let transitive_cosets = frame.size / w.elems.len();
            let m = part.gens.len();
            let mut digits = vec![0usize; m];
            loop {
                let values: Vec<Point> = (0..m)
                    .map(|j| {
                        w.rep[frame.add(lift[part.gens[j] as usize], reps[digits[j]]) as usize]
                    })
                    .collect();
                if let Some(table) = part.cocycle(frame, w, &values) {
                    let ok = !filter.transitive || {
                        let mut t = table.clone();
                        t.sort_unstable();
                        t.dedup();
                        t.len() == transitive_cosets
                    };
                    let start: Cocycle = (wi, table);
                    if ok && !seen.contains(&start) {
                        let mut orbit = vec![start.clone()];
                        seen.insert(start);
                        let mut i = 0;
                        while i < orbit.len() {
                            for mv in &movers {
                                let next = apply(mv, &orbit[i]);
                                if seen.insert(next.clone()) {
                                    orbit.push(next);
                                }
                            }
                            i += 1;
                        }
                        out.push(build_class(
                            frame,
                            &part,
                            &subs[orbit[0].0],
                            &orbit[0].1,
                            factor * orbit.len(),
                        )?);
                    }
                }
                let mut j = 0;
                while j < m {
                    digits[j] += 1;
                    if digits[j] < reps.len() {
                        break;
                    }
                    digits[j] = 0;
                    j += 1;
                }
                if j == m {
                    break;
                }
            }
        }
    }
    out.sort_by(|a, b| (a.order, &a.key).cmp(&(b.order, &b.key)));
    Ok(out)
}

fn build_class(
    frame: &AffineFrame,
    part: &LinearPart,
    w: &Subspace,
    table: &[Point],
    class_size: usize,
) -> Result<SubgroupClass> {
    let e = part.e;
    let element = |k: Elt, v: Point| -> Vec<Point> {
        let kp = e.perm(k);
        let images: Vec<Point> = (0..frame.size).map(|x| frame.add(kp[x], v)).collect();
        frame.to_points(&images)
    };
    let mut gens: Vec<Permutation> = part
        .gens
        .iter()
        .map(|&a| element(a, table[part.pos[a as usize] as usize]))
        .chain(basis_of(frame, &w.elems).into_iter().map(|u| element(0, u)))
        .map(|x| Permutation::from_images(x.into_iter().map(usize::from).collect()))
        .collect::<Result<_>>()?;
    if gens.is_empty() {
        gens.push(Permutation::identity(frame.size));
    }
    let representative = PermGroup::new(frame.size, gens)?;
    let order = (part.elems.len() * w.elems.len()) as u64;
    if representative.order() != order {
        return Err(Error::precondition(
            "cocycle does not define a subgroup of the expected order",
        ));
    }
    let elements: Vec<Vec<Point>> = part
        .elems
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| w.elems.iter().map(move |&u| (k, i, u)))
        .map(|(k, i, u)| element(k, frame.add(table[i], u)))
        .collect();
    let mut refs: Vec<&[Point]> = elements.iter().map(|x| &x[..]).collect();
    Ok(SubgroupClass {
        representative,
        class_size,
        order,
        key: hash_sorted_perms(frame.size, &mut refs),
        elements: Vec::new(),
    })
}
