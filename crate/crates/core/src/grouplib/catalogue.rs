use serde::Serialize;

use super::{direct_product, gcd_u64, mult_order, AbstractGroup, AbstractGroupJson, GroupLabel};
use crate::error::{Error, Result};
use crate::isomorphism::are_isomorphic_abstract;
use crate::permgrp::PermGroup;

/// Bumped whenever the ordering or construction of catalogue groups changes.
pub const GROUPLIB_VERSION: u32 = 1;

/// All groups of one order, one per isomorphism type.
#[derive(Clone, Debug)]
pub struct GroupCatalogue {
    pub order: u64,
    pub groups: Vec<AbstractGroup>,
}

#[derive(Serialize)]
struct CatalogueJson {
    version: u32,
    order: u64,
    groups: Vec<AbstractGroupJson>,
}

impl GroupCatalogue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CatalogueJson {
            version: GROUPLIB_VERSION,
            order: self.order,
            groups: self.groups.iter().map(|g| g.to_json()).collect(),
        })
        .expect("serializable")
    }

    pub fn by_name(&self, name: &str) -> Option<&AbstractGroup> {
        self.groups.iter().find(|g| g.name == name)
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

pub fn supported_order(n: u64) -> bool {
    (1..=16).contains(&n) || [18, 20, 21, 24, 27].contains(&n) || (n <= 255 && is_squarefree(n))
}

/// One representative per isomorphism type of order `n`: abelian groups
/// first (by invariant factors), then the non-abelian ones.
pub fn groups_of_order(n: u64) -> Result<GroupCatalogue> {
    if !supported_order(n) {
        return Err(Error::UnsupportedOrder(n));
    }
    let mut groups = if is_squarefree(n) {
        squarefree_groups(n)?
    } else {
        hardcoded(n)?
    };
    for (i, g) in groups.iter_mut().enumerate() {
        g.label = GroupLabel {
            order: n,
            index: i + 1,
        };
    }
    Ok(GroupCatalogue { order: n, groups })
}

/// Groups `<σ, τ | σ^e = τ^d = 1, τστ^-1 = σ^k>` with `n = ed` and `k` of
/// multiplicative order `d` modulo `e`, up to isomorphism.
pub fn squarefree_groups(n: u64) -> Result<Vec<AbstractGroup>> {
    if !is_squarefree(n) {
        return Err(Error::NotSquarefree(n));
    }
    let mut params: Vec<(u64, u64, u64)> = Vec::new();
    for e in (1..=n).filter(|e| n % e == 0) {
        let d = n / e;
        let mut seen_subgroups: Vec<Vec<u64>> = Vec::new();
        for k in 0..e.max(1) {
            let k = if e == 1 { 1 } else { k };
            if e > 1 && gcd_u64(k, e) != 1 {
                continue;
            }
            if mult_order(k, e) != d {
                continue;
            }
            // k and k^j (gcd(j, d) = 1) give isomorphic groups
            let mut sub: Vec<u64> = (0..d).map(|j| super::pow_mod(k, j, e)).collect();
            sub.sort_unstable();
            if !seen_subgroups.contains(&sub) {
                seen_subgroups.push(sub);
                params.push((e, d, k));
            }
            if e == 1 {
                break;
            }
        }
    }
    params.sort_by_key(|&(e, d, k)| (d, e, k));
    let mut out: Vec<AbstractGroup> = Vec::new();
    for (e, d, k) in params {
        let g = AbstractGroup::squarefree_presentation(e, d, k)?;
        if out.iter().any(|h| are_isomorphic_abstract(h, &g)) {
            continue;
        }
        out.push(g);
    }
    let names: Vec<String> = out.iter().map(|g| g.name.clone()).collect();
    for g in out.iter_mut() {
        if names.iter().filter(|n| **n == g.name).count() > 1 {
            let p = g.squarefree.unwrap();
            g.name = format!("{}[k={}]", g.name, p.k);
        }
    }
    Ok(out)
}

/// Number of groups of squarefree order `n`, by Hölder's formula.
pub fn holder_count(n: u64) -> u64 {
    let primes_of =
        |m: u64| -> Vec<u64> { (2..=m).filter(|&p| m % p == 0 && is_prime(p)).collect() };
    let mut total = 0;
    for m in (1..=n).filter(|m| n % m == 0) {
        let rest = primes_of(n / m);
        let mut prod = 1u64;
        for p in primes_of(m) {
            let c = rest.iter().filter(|&&q| q % p == 1).count() as u32;
            prod *= (p.pow(c) - 1) / (p - 1);
        }
        total += prod;
    }
    total
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

fn named(mut g: AbstractGroup, name: &str) -> AbstractGroup {
    g.name = name.to_string();
    g
}

fn abelian(factors: &[usize]) -> AbstractGroup {
    let mut g = AbstractGroup::cyclic(factors[0]);
    for &f in &factors[1..] {
        g = direct_product(&g, &AbstractGroup::cyclic(f));
    }
    g
}

fn meta(m1: u64, m2: u64, t: u64, r: u64, name: &str) -> Result<AbstractGroup> {
    AbstractGroup::metacyclic(m1, m2, t, r, name)
}

fn s3() -> AbstractGroup {
    named(meta(3, 2, 0, 2, "S3").unwrap(), "S3")
}

fn d8() -> AbstractGroup {
    meta(4, 2, 0, 3, "D8").unwrap()
}

fn q8() -> AbstractGroup {
    meta(4, 2, 2, 3, "Q8").unwrap()
}

fn a4() -> Result<AbstractGroup> {
    let k4 = abelian(&[2, 2]);
    // generators (1,0) = 2 and (0,1) = 1 cycle through the three involutions
    AbstractGroup::semidirect(
        &k4,
        &AbstractGroup::cyclic(3),
        &[vec![1, 3]],
        "A4",
        "semidirect(C2xC2,C3)",
    )
}

fn dic12() -> Result<AbstractGroup> {
    meta(3, 4, 0, 2, "Dic12")
}

fn hardcoded(n: u64) -> Result<Vec<AbstractGroup>> {
    let ab: &[&[usize]] = match n {
        4 => &[&[4], &[2, 2]],
        8 => &[&[8], &[4, 2], &[2, 2, 2]],
        9 => &[&[9], &[3, 3]],
        12 => &[&[12], &[6, 2]],
        16 => &[&[16], &[4, 4], &[8, 2], &[4, 2, 2], &[2, 2, 2, 2]],
        18 => &[&[18], &[6, 3]],
        20 => &[&[20], &[10, 2]],
        24 => &[&[24], &[12, 2], &[6, 2, 2]],
        27 => &[&[27], &[9, 3], &[3, 3, 3]],
        _ => return Err(Error::UnsupportedOrder(n)),
    };
    let mut out: Vec<AbstractGroup> = ab.iter().map(|f| abelian(f)).collect();
    match n {
        8 => {
            out.push(d8());
            out.push(q8());
        }
        12 => {
            out.push(a4()?);
            out.push(meta(6, 2, 0, 5, "D12")?);
            out.push(dic12()?);
        }
        16 => {
            let c4c2 = abelian(&[4, 2]);
            // C4xC2 generators: a = (1,0) = 2, b = (0,1) = 1; ab = 3, a^2 b = 5
            out.push(AbstractGroup::semidirect(
                &c4c2,
                &AbstractGroup::cyclic(2),
                &[vec![3, 1]],
                "(C4xC2):C2",
                "semidirect(C4xC2,C2;a->ab)",
            )?);
            out.push(meta(4, 4, 0, 3, "C4:C4")?);
            out.push(meta(8, 2, 0, 5, "M16")?);
            out.push(meta(8, 2, 0, 7, "D16")?);
            out.push(meta(8, 2, 0, 3, "SD16")?);
            out.push(meta(8, 2, 4, 7, "Q16")?);
            out.push(direct_product(&AbstractGroup::cyclic(2), &d8()));
            out.push(direct_product(&AbstractGroup::cyclic(2), &q8()));
            out.push(AbstractGroup::semidirect(
                &c4c2,
                &AbstractGroup::cyclic(2),
                &[vec![2, 5]],
                "C4oD8",
                "semidirect(C4xC2,C2;b->a^2b)",
            )?);
        }
        18 => {
            out.push(meta(9, 2, 0, 8, "D18")?);
            out.push(direct_product(&AbstractGroup::cyclic(3), &s3()));
            let c3c3 = abelian(&[3, 3]);
            // generators a = 3, b = 1; inverses 6 and 2
            out.push(AbstractGroup::semidirect(
                &c3c3,
                &AbstractGroup::cyclic(2),
                &[vec![6, 2]],
                "(C3xC3):C2",
                "semidirect(C3xC3,C2;inversion)",
            )?);
        }
        20 => {
            out.push(meta(10, 2, 0, 9, "D20")?);
            out.push(meta(5, 4, 0, 4, "Dic20")?);
            out.push(meta(5, 4, 0, 2, "F20")?);
        }
        24 => {
            out.push(meta(3, 8, 0, 2, "C3:C8")?);
            // Q8 generators a = 1, x = 4; the order-3 automorphism a -> x -> ax
            out.push(AbstractGroup::semidirect(
                &q8(),
                &AbstractGroup::cyclic(3),
                &[vec![4, 5]],
                "SL(2,3)",
                "semidirect(Q8,C3)",
            )?);
            out.push(meta(12, 2, 6, 11, "Dic24")?);
            out.push(direct_product(&AbstractGroup::cyclic(4), &s3()));
            out.push(meta(12, 2, 0, 11, "D24")?);
            out.push(direct_product(&AbstractGroup::cyclic(2), &dic12()?));
            // D8 = <r, s>: r inverts C3, s centralizes it
            out.push(AbstractGroup::semidirect(
                &AbstractGroup::cyclic(3),
                &d8(),
                &[vec![2], vec![1]],
                "C3:D8",
                "semidirect(C3,D8;kernel C2xC2)",
            )?);
            out.push(direct_product(&AbstractGroup::cyclic(3), &d8()));
            out.push(direct_product(&AbstractGroup::cyclic(3), &q8()));
            let s4 = PermGroup::from_cycles(4, &["(0,1)", "(0,1,2,3)"])?;
            out.push(AbstractGroup::from_perm_group(&s4, "S4", "perm(S4)")?);
            out.push(direct_product(&AbstractGroup::cyclic(2), &a4()?));
            out.push(direct_product(&abelian(&[2, 2]), &s3()));
        }
        27 => {
            let c3c3 = abelian(&[3, 3]);
            // generators a = 3, b = 1; b -> ab = 4
            out.push(AbstractGroup::semidirect(
                &c3c3,
                &AbstractGroup::cyclic(3),
                &[vec![3, 4]],
                "He3",
                "semidirect(C3xC3,C3)",
            )?);
            out.push(meta(9, 3, 0, 4, "C9:C3")?);
        }
        _ => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let expected = [
            (1, 1),
            (2, 1),
            (4, 2),
            (6, 2),
            (8, 5),
            (9, 2),
            (12, 5),
            (15, 1),
            (16, 14),
            (18, 5),
            (20, 5),
            (21, 2),
            (24, 15),
            (27, 5),
        ];
        for (n, c) in expected {
            assert_eq!(groups_of_order(n).unwrap().groups.len(), c, "order {n}");
        }
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        for n in [17 * 2 * 2, 32, 36, 256] {
            let err = groups_of_order(n).unwrap_err();
            assert!(err.to_string().contains("supported orders"));
        }
        assert!(squarefree_groups(12).is_err());
    }

    #[test]
    fn holder_formula_small_values() {
        assert_eq!(holder_count(1), 1);
        assert_eq!(holder_count(6), 2);
        assert_eq!(holder_count(15), 1);
        assert_eq!(holder_count(30), 4);
        assert_eq!(holder_count(42), 6);
    }

    #[test]
    fn catalogue_members_are_groups_and_pairwise_non_isomorphic() {
        for n in [4u64, 8, 9, 12, 16, 18, 20, 24, 27, 30, 42] {
            let cat = groups_of_order(n).unwrap();
            for (i, a) in cat.groups.iter().enumerate() {
                a.verify_axioms().unwrap();
                for b in &cat.groups[..i] {
                    assert!(!are_isomorphic_abstract(a, b), "{} ~ {}", a.name, b.name);
                }
            }
            let mut names: Vec<&str> = cat.groups.iter().map(|g| g.name.as_str()).collect();
            names.sort();
            names.dedup();
            assert_eq!(names.len(), cat.groups.len());
        }
    }

    #[test]
    fn squarefree_counts_match_holder() {
        for n in (1..=255u64).filter(|&n| is_squarefree(n)) {
            assert_eq!(
                squarefree_groups(n).unwrap().len() as u64,
                holder_count(n),
                "order {n}"
            );
        }
    }

    #[test]
    fn squarefree_21() {
        let g = squarefree_groups(21).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].name, "C21");
        assert_eq!(g[1].name, "C7:C3");
    }
}
