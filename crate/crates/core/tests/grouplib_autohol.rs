use hgs_core::autohol::{automorphism_group, hall_subgroup, holomorph, holomorph_projection};
use hgs_core::grouplib::{
    direct_product, groups_of_order, holder_count, is_prime, is_squarefree, squarefree_groups,
};
use hgs_core::isomorphism::are_isomorphic_abstract;
use hgs_core::subgroups::subgroup_lattice;
use hgs_core::{AbstractGroup, PermGroup, Permutation};

fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

#[test]
fn library_members_are_groups_with_regular_representations() {
    for n in (1..=24).chain([27, 30, 33, 35, 42]) {
        let lib = match groups_of_order(n) {
            Ok(l) => l,
            Err(_) => continue,
        };
        for g in &lib.groups {
            g.verify_axioms()
                .unwrap_or_else(|e| panic!("{}: {e}", g.name));
            let reg = g.regular_representation();
            assert!(reg.is_transitive(), "{}", g.name);
            assert_eq!(reg.order(), n, "{}", g.name);
            assert!(reg.point_stabilizer(0).is_trivial(), "{}", g.name);
        }
    }
}

#[test]
fn direct_product_projections_are_homomorphisms() {
    let lib6 = groups_of_order(6).unwrap();
    let lib4 = groups_of_order(4).unwrap();
    for n in &lib6.groups {
        for m in &lib4.groups {
            let p = direct_product(n, m);
            p.verify_axioms().unwrap();
            assert_eq!(p.order(), n.order() * m.order());
            let mo = m.order() as u32;
            for x in 0..p.order() as u32 {
                for y in 0..p.order() as u32 {
                    let xy = p.mult(x, y);
                    assert_eq!(xy / mo, n.mult(x / mo, y / mo));
                    assert_eq!(xy % mo, m.mult(x % mo, y % mo));
                }
            }
        }
    }
}

/// Every `(e, d, k)` with `ed = n` and `k^d = 1 mod e` gives a group of
/// order `n`; up to isomorphism there are exactly Hölder's count of them.
#[test]
fn squarefree_presentations_dedup_to_holder_count() {
    for n in (2..=70u64).filter(|&n| is_squarefree(n)) {
        let mut reps: Vec<AbstractGroup> = Vec::new();
        for e in (1..=n).filter(|e| n % e == 0) {
            let d = n / e;
            for k in 0..e.max(1) {
                if pow_mod(k, d, e) != 1 % e {
                    continue;
                }
                let g = AbstractGroup::squarefree_presentation(e, d, k).unwrap();
                assert_eq!(g.order() as u64, n);
                if !reps.iter().any(|r| are_isomorphic_abstract(r, &g)) {
                    reps.push(g);
                }
            }
        }
        assert_eq!(reps.len() as u64, holder_count(n), "n = {n}");
        assert_eq!(
            squarefree_groups(n).unwrap().len() as u64,
            holder_count(n),
            "n = {n}"
        );
    }
}

#[test]
fn holomorph_order_is_n_times_aut() {
    for n in (1..=16).chain([18, 20, 21, 30, 39, 55]) {
        for g in &groups_of_order(n).unwrap().groups {
            let hol = holomorph(g).unwrap();
            let aut = automorphism_group(g).unwrap();
            assert_eq!(hol.group.order(), n * aut.order(), "{}", g.name);
            assert!(hol.lambda_n.is_normal_in(&hol.group));
            assert!(hol
                .group
                .point_stabilizer(0)
                .same_group(&hol.aut_n.underlying));
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `Hol(N)` is the full normalizer of `λ(N)` in `Sym(N)`.
#[test]
fn holomorph_is_the_normalizer_of_the_regular_subgroup() {
    for n in 1..=8 {
        for g in &groups_of_order(n).unwrap().groups {
            let hol = holomorph(g).unwrap();
            let lambda = g.regular_representation();
            let mut v: Vec<usize> = (0..n as usize).collect();
            let mut count = 0u64;
            loop {
                let s = Permutation::from_images(v.clone()).unwrap();
                let si = s.inverse();
                if lambda
                    .generators()
                    .iter()
                    .all(|x| lambda.contains(&(&(&s * x) * &si)))
                {
                    count += 1;
                    assert!(hol.group.contains(&s), "{}", g.name);
                }
                if !next_permutation(&mut v) {
                    break;
                }
            }
            assert_eq!(count, hol.group.order(), "{}", g.name);
        }
    }
}

fn pi_part(m: u64, n: u64) -> u64 {
    let mut part = 1;
    let mut rest = m;
    for p in (2..=n).filter(|&p| is_prime(p) && n % p == 0) {
        while rest % p == 0 {
            rest /= p;
            part *= p;
        }
    }
    part
}

/// For squarefree `n` the Hall π(n)-subgroup of `Hol(N)` is normal and the
/// only subgroup of its order.
#[test]
fn hall_subgroup_is_unique_and_normal() {
    for n in [6u64, 10, 14, 15, 21, 30] {
        for g in &groups_of_order(n).unwrap().groups {
            let hol = holomorph(g).unwrap();
            let q = hall_subgroup(&hol).unwrap();
            let part = pi_part(hol.group.order(), n);
            assert_eq!(q.order(), part, "{}", g.name);
            assert!(q.is_normal_in(&hol.group));
            let lat = subgroup_lattice(&hol.group, Some(part), 1_000_000).unwrap();
            let of_order: Vec<_> = lat.classes.iter().filter(|c| c.order == part).collect();
            assert_eq!(of_order.len(), 1, "{}", g.name);
            assert_eq!(of_order[0].class_size, 1);
        }
    }
}

fn center_subgroup(g: &AbstractGroup) -> PermGroup {
    let n = g.order() as u32;
    let z: Vec<Permutation> = (0..n)
        .filter(|&a| (0..n).all(|b| g.mult(a, b) == g.mult(b, a)))
        .map(|a| g.left_translation(a))
        .collect();
    PermGroup::new(g.order(), z).unwrap()
}

/// The projection `Hol(N) -> Hol(N/M)` respects products, checked on every
/// pair of elements.
#[test]
fn holomorph_projection_is_a_homomorphism() {
    let mut cases: Vec<(AbstractGroup, PermGroup)> = Vec::new();
    for (n, d) in [(4, 2), (8, 4), (8, 2), (6, 3), (6, 2), (12, 6), (12, 4)] {
        let g = AbstractGroup::cyclic(n);
        let m = PermGroup::new(n, vec![g.left_translation(d as u32)]).unwrap();
        cases.push((g, m));
    }
    for name in ["D8", "Q8"] {
        let g = groups_of_order(8).unwrap().by_name(name).unwrap().clone();
        let z = center_subgroup(&g);
        cases.push((g, z));
    }
    for (g, m) in cases {
        let hol = holomorph(&g).unwrap();
        assert!(hol.group.order() <= 500);
        let proj = holomorph_projection(&g, &m).unwrap();
        let elems = hol.group.elements().unwrap();
        let images: Vec<Permutation> = elems.iter().map(|x| proj.apply(x)).collect();
        for (x, fx) in elems.iter().zip(&images) {
            for (y, fy) in elems.iter().zip(&images) {
                assert_eq!(proj.apply(&(x * y)), fx * fy, "{}", g.name);
            }
        }
        let target = holomorph(&proj.quotient).unwrap();
        assert!(target.group.contains_group(&proj.image(&hol.group)));
    }
}
