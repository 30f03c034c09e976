mod common;

use common::witness_is_sound;
use hgs_core::hgs::{build_catalogue, quotient_pair};
use hgs_core::isomorphism::{
    find_isomorphism, pair_isomorphic, pair_isomorphic_data, pair_isomorphic_exhaustive, PairData,
};
use hgs_core::subgroups::index_n_lattice;
use hgs_core::{PermGroup, Permutation};

/// Every index-`n` subgroup class of every entry of degree `n`.
fn index_n_pairs(n: u64) -> Vec<(PermGroup, PermGroup)> {
    let mut out = Vec::new();
    for e in build_catalogue(n).unwrap().entries {
        let lat = index_n_lattice(&e.group, n).unwrap();
        for c in lat.classes.iter().filter(|c| c.order * n == e.order) {
            out.push((e.group.clone(), c.representative.clone()));
        }
    }
    out
}

#[test]
fn witnesses_are_sound() {
    let mut checked = 0;
    for n in [4u64, 6, 8, 10, 12] {
        let cat = build_catalogue(n).unwrap();
        for (g, h) in index_n_pairs(n) {
            let (j, js, _) = quotient_pair(&g, &h).unwrap();
            let pair = PairData::new(j.clone(), js.clone()).unwrap();
            let Some(m) = cat.find_match(&pair).unwrap().0 else {
                continue;
            };
            let e = &cat.entries[m.entry_id];
            assert_eq!(e.entry_id, m.entry_id);
            assert!(witness_is_sound(
                &j,
                &js,
                &e.group,
                &e.stabilizer,
                &m.witness
            ));
            checked += 1;
        }
        for e in cat.entries.iter().step_by(3) {
            let w = find_isomorphism(&e.group, &e.group).unwrap().unwrap();
            let triv = PermGroup::trivial(e.degree);
            assert!(witness_is_sound(&e.group, &triv, &e.group, &triv, &w));
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn pair_isomorphism_is_reflexive_and_symmetric() {
    for n in [6u64, 8] {
        let pairs = index_n_pairs(n);
        let data: Vec<PairData> = pairs
            .iter()
            .map(|(g, h)| PairData::new(g.clone(), h.clone()).unwrap())
            .collect();
        for a in data.iter().step_by(5) {
            assert!(pair_isomorphic_data(a, a).is_some());
        }
        for (i, a) in data.iter().enumerate().step_by(7) {
            for b in data.iter().skip(i + 1).filter(|b| b.order() == a.order()) {
                assert_eq!(
                    pair_isomorphic_data(a, b).is_some(),
                    pair_isomorphic_data(b, a).is_some()
                );
            }
        }
    }
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut v: Vec<usize> = (0..n).collect();
    loop {
        f(&v);
        let Some(i) = (1..n).rev().find(|&i| v[i - 1] < v[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
    }
}

/// Faithful transitive pairs are isomorphic exactly when some relabelling
/// of the points conjugates one group onto the other and carries the
/// distinguished point of one to that of the other.
fn conjugate_fixing_point(j: &PermGroup, jp: usize, m: &PermGroup) -> bool {
    let mut found = false;
    for_each_permutation(j.degree(), |v| {
        if found || v[jp] != 0 {
            return;
        }
        let s = Permutation::from_images(v.to_vec()).unwrap();
        let si = s.inverse();
        found = j
            .generators()
            .iter()
            .all(|x| m.contains(&(&(&s * x) * &si)));
    });
    found
}

/// Against a search over all relabellings at degrees 4 and 6, and against
/// the exhaustive isomorphism enumeration up to order 64.
#[test]
fn pair_isomorphism_is_complete_on_small_groups() {
    for n in [4u64, 6] {
        let cat = build_catalogue(n).unwrap();
        for (g, h) in index_n_pairs(n) {
            if !g.normal_core(&h).unwrap().is_trivial() {
                continue;
            }
            let act = g.coset_action(&h).unwrap();
            let jp = act.point_of_identity_coset;
            let js = act.image.point_stabilizer(jp);
            for e in cat.entries.iter().filter(|e| e.order == g.order()) {
                let fast = pair_isomorphic(&g, &h, &e.group, &e.stabilizer)
                    .unwrap()
                    .is_some();
                assert_eq!(fast, conjugate_fixing_point(&act.image, jp, &e.group));
                assert_eq!(
                    fast,
                    pair_isomorphic(&act.image, &js, &e.group, &e.stabilizer)
                        .unwrap()
                        .is_some()
                );
            }
        }
    }
    let mut compared = 0;
    for n in [4u64, 6, 8] {
        let data: Vec<PairData> = index_n_pairs(n)
            .into_iter()
            .filter(|(g, _)| g.order() <= 64)
            .map(|(g, h)| PairData::new(g, h).unwrap())
            .collect();
        for (i, a) in data.iter().enumerate() {
            for b in &data[i..] {
                if a.order() != b.order() || a.sub_order() != b.sub_order() {
                    continue;
                }
                assert_eq!(
                    pair_isomorphic_data(a, b).is_some(),
                    pair_isomorphic_exhaustive(a, b)
                );
                compared += 1;
            }
        }
    }
    assert!(compared > 1000, "{compared}");
}

/// At degree `pq` the point stabilizer is determined up to automorphism by
/// the abstract group, so catalogue entries are pair-isomorphic exactly
/// when they are isomorphic.
#[test]
fn degree_pq_pair_isomorphism_is_abstract_isomorphism() {
    for n in [21u64, 39, 55] {
        let cat = build_catalogue(n).unwrap();
        let mut iso_pairs = 0;
        for i in 0..cat.len() {
            for j in i + 1..cat.len() {
                let (a, b) = (&cat.entries[i], &cat.entries[j]);
                if a.order != b.order {
                    continue;
                }
                let abs = find_isomorphism(&a.group, &b.group).unwrap().is_some();
                let pair =
                    pair_isomorphic_data(cat.pair_data(i).unwrap(), cat.pair_data(j).unwrap())
                        .is_some();
                assert_eq!(abs, pair, "degree {n}: entries {i} and {j}");
                iso_pairs += abs as usize;
            }
        }
        assert!(iso_pairs > 0);
    }
}
