//! Automorphism groups and holomorphs, acting on the points of `N`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grouplib::{is_squarefree, AbstractGroup};
use crate::isomorphism::{automorphism_group_enumerated, AutomorphismData};
use crate::permgrp::{gcd, Elt, PermGroup, Permutation, Point};

pub const DEFAULT_AUT_BOUND: usize = 256;

/// `Aut(N)` as permutations of the elements of `N`.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub underlying: PermGroup,
    pub data: AutomorphismData,
}

impl AutomorphismGroup {
    pub fn order(&self) -> u64 {
        self.data.order() as u64
    }
}

pub fn automorphism_group(n: &AbstractGroup) -> Result<AutomorphismGroup> {
    automorphism_group_bounded(n, DEFAULT_AUT_BOUND)
}

pub fn automorphism_group_bounded(n: &AbstractGroup, bound: usize) -> Result<AutomorphismGroup> {
    if n.order() > bound {
        return Err(Error::Resource {
            what: "automorphism group order of N".into(),
            limit: bound as u64,
            progress: n.order() as u64,
        });
    }
    let data = automorphism_group_enumerated(&n.regular_enumerated());
    let mut gens: Vec<Permutation> = data
        .generators
        .iter()
        .map(|m| Permutation::from_points_unchecked(m.iter().map(|&x| x as Point).collect()))
        .collect();
    gens.sort();
    gens.dedup();
    let underlying = PermGroup::new(n.order(), gens)?;
    Ok(AutomorphismGroup { underlying, data })
}

/// `Hol(N) = λ(N) ⋊ Aut(N)` acting on `N` by `[η, α]·μ = η α(μ)`.
#[derive(Clone, Debug)]
pub struct Holomorph {
    pub group: PermGroup,
    pub lambda_n: PermGroup,
    pub aut_n: AutomorphismGroup,
    pub n_ref: Arc<AbstractGroup>,
}

#[derive(Serialize, Deserialize)]
pub struct HolomorphJson {
    pub degree: usize,
    pub lambda_generators: Vec<Permutation>,
    pub aut_generators: Vec<Permutation>,
}

impl Holomorph {
    pub fn degree(&self) -> usize {
        self.n_ref.order()
    }

    pub fn to_json(&self) -> HolomorphJson {
        HolomorphJson {
            degree: self.degree(),
            lambda_generators: self.lambda_n.generators().to_vec(),
            aut_generators: self.aut_n.underlying.generators().to_vec(),
        }
    }
}

pub fn holomorph(n: &AbstractGroup) -> Result<Holomorph> {
    let aut = automorphism_group(n)?;
    let lambda = n.regular_representation();
    let mut gens: Vec<Permutation> = lambda.generators().to_vec();
    gens.extend(aut.underlying.generators().iter().cloned());
    let group = PermGroup::new(n.order(), gens)?;
    debug_assert_eq!(group.order(), n.order() as u64 * aut.order());
    Ok(Holomorph {
        group,
        lambda_n: lambda,
        aut_n: aut,
        n_ref: Arc::new(n.clone()),
    })
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True if every prime factor of `m` divides `n`.
pub(crate) fn is_pi_number(m: u64, n: u64) -> bool {
    prime_divisors(m).iter().all(|p| n % p == 0)
}

/// The point permutation of an automorphism of a squarefree-presented `N`
/// given by the images of `σ` and `τ`.
fn presented_automorphism(n: &AbstractGroup, sigma_img: Elt, tau_img: Elt) -> Result<Permutation> {
    let p = n.squarefree.expect("squarefree presentation");
    let sigma = p.element(1, 0);
    let tau = p.element(0, 1);
    let (gens, imgs): (Vec<u32>, Vec<u32>) = if p.d == 1 {
        (vec![sigma], vec![sigma_img])
    } else if p.e == 1 {
        (vec![tau], vec![tau_img])
    } else {
        (vec![sigma, tau], vec![sigma_img, tau_img])
    };
    let map = n
        .extend_hom(&gens, n, &imgs)
        .ok_or_else(|| Error::precondition("images do not define an endomorphism"))?;
    Permutation::from_images(map.into_iter().map(|x| x as usize).collect())
}

/// `Q = N ⋊ (<θ> ⋊ Φ1)` for `N` of squarefree order: the unique Hall
/// π(n)-subgroup of `Hol(N)`.
pub fn hall_subgroup(hol: &Holomorph) -> Result<PermGroup> {
    let n = &hol.n_ref;
    let order = n.order() as u64;
    if !is_squarefree(order) {
        return Err(Error::NotSquarefree(order));
    }
    let p = n
        .squarefree
        .ok_or_else(|| Error::precondition("N must carry its (e, d, k) presentation"))?;
    let mut gens: Vec<Permutation> = hol.lambda_n.generators().to_vec();
    if p.e > 1 && p.d > 1 {
        let z = gcd(p.k + p.e - 1, p.e);
        gens.push(presented_automorphism(n, p.element(1, 0), p.element(z, 1))?);
    }
    // Φ ≅ (Z/e)^×; its Hall π(n)-part is generated by the π(n)-parts of
    // all of its elements.
    for s in 1..p.e {
        if gcd(s, p.e) != 1 {
            continue;
        }
        let ord = crate::grouplib::mult_order(s, p.e);
        if ord > 1 && is_pi_number(ord, order) {
            gens.push(presented_automorphism(n, p.element(s, 0), p.element(0, 1))?);
        }
    }
    gens.sort();
    gens.dedup();
    PermGroup::new(n.order(), gens)
}

/// `G = U ⋊ V` with `U = G ∩ Q` and `V` a Hall π'(n)-subgroup of `G`.
pub fn hall_decomposition(hol: &Holomorph, g: &PermGroup) -> Result<(PermGroup, PermGroup)> {
    let q = hall_subgroup(hol)?;
    let order = hol.degree() as u64;
    let e = g.enumerate()?;
    let u: Vec<Elt> = e
        .elements()
        .filter(|&x| q.contains(&e.permutation(x)))
        .collect();
    let m = e.len() / u.len();
    // One greedy pass builds a Hall π'-subgroup: in a solvable group every
    // π'-subgroup lies in one, so no element that could extend the current
    // subgroup is ever skipped.
    let mut v: Vec<Elt> = vec![0];
    let mut v_gens: Vec<Elt> = Vec::new();
    for x in e.elements() {
        if v.len() == m {
            break;
        }
        let ox = e.elt_order(x) as u64;
        if ox == 1 || gcd(ox, order) != 1 || v.binary_search(&x).is_ok() {
            continue;
        }
        let mut cand = v_gens.clone();
        cand.push(x);
        let cl = e.closure(&cand);
        if gcd(cl.len() as u64, order) == 1 {
            v = cl;
            v_gens = cand;
        }
    }
    if v.len() != m {
        return Err(Error::precondition(
            "no Hall complement found; group is not solvable",
        ));
    }
    Ok((
        e.subgroup_perm_group(&e.generating_set(&u)),
        e.subgroup_perm_group(&v_gens),
    ))
}

/// The map `Hol(N) -> Hol(N/M)` induced by the action on cosets of a
/// characteristic subgroup `M` of `N`.
#[derive(Clone, Debug)]
pub struct HolomorphProjection {
    pub quotient: AbstractGroup,
    /// `block_of[μ]` is the coset of `μ`, numbered by least element.
    pub block_of: Vec<usize>,
}

impl HolomorphProjection {
    pub fn apply(&self, x: &Permutation) -> Permutation {
        let k = self.quotient.order();
        let mut img = vec![0 as Point; k];
        let mut done = vec![false; k];
        for mu in 0..x.degree() {
            let b = self.block_of[mu];
            if !done[b] {
                done[b] = true;
                img[b] = self.block_of[x.image(mu)] as Point;
            }
        }
        Permutation::from_points_unchecked(img)
    }

    pub fn image(&self, g: &PermGroup) -> PermGroup {
        let gens = g.generators().iter().map(|x| self.apply(x)).collect();
        PermGroup::new(self.quotient.order(), gens).expect("degree matches")
    }
}

/// `m` is given as a subgroup of `λ(N)`; its elements are the points of
/// its orbit through 0.
pub fn holomorph_projection(n: &AbstractGroup, m: &PermGroup) -> Result<HolomorphProjection> {
    let lambda = n.regular_representation();
    if !lambda.contains_group(m) {
        return Err(Error::NotSubgroup(
            "M must lie in the regular subgroup".into(),
        ));
    }
    let mut m_elts: Vec<u32> = m.orbit(0).into_iter().map(|x| x as u32).collect();
    m_elts.sort_unstable();
    let aut = automorphism_group(n)?;
    for a in aut.underlying.generators() {
        if m_elts
            .iter()
            .any(|&x| m_elts.binary_search(&(a.image(x as usize) as u32)).is_err())
        {
            return Err(Error::precondition("M is not characteristic in N"));
        }
    }
    let order = n.order();
    let mut block_of = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for mu in 0..order as u32 {
        if block_of[mu as usize] == usize::MAX {
            let b = reps.len();
            reps.push(mu);
            for &x in &m_elts {
                block_of[n.mult(mu, x) as usize] = b;
            }
        }
    }
    let k = reps.len();
    let gens: Vec<u32> = n
        .generators()
        .iter()
        .map(|&g| block_of[g as usize] as u32)
        .collect();
    let quotient = AbstractGroup::from_fn(
        k,
        gens,
        format!("{}/M", n.name),
        format!("quotient({})", n.presentation_tag),
        |a, b| block_of[n.mult(reps[a], reps[b]) as usize],
    );
    Ok(HolomorphProjection { quotient, block_of })
}
