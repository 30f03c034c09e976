use hgs_core::hgs::{
    analyze_catalogue, analyze_parallel, build_catalogue, extend_family, find_extension_prime,
    iterate_family, parallel_type_sets, summarize, CatalogueOptions, NoHgsWitness,
};
use hgs_core::isomorphism::pair_isomorphic_data;
use hgs_core::pqtheory::{
    cyclic_realization, cyclic_type_transitive_subgroups, verify_pq_with, FamilyTag, PqParameters,
};
use hgs_core::subgroups::classify_index_n;
use hgs_core::PermGroup;

mod common;

#[test]
fn entry_stabilizers_are_core_free() {
    for n in [4u64, 6, 8, 9, 10, 12, 15, 21] {
        for e in build_catalogue(n).unwrap().entries {
            assert!(e.group.is_transitive());
            assert!(e.group.point_stabilizer(0).same_group(&e.stabilizer));
            assert!(e.group.normal_core(&e.stabilizer).unwrap().is_trivial());
        }
    }
}

/// A no-HGS report scanned every same-order entry and found nothing; a
/// matched report stopped at its match.
#[test]
fn no_hgs_reports_scan_every_candidate() {
    for n in [8u64, 12] {
        let cat = build_catalogue(n).unwrap();
        let analyses = analyze_catalogue(&cat, &CatalogueOptions::default()).unwrap();
        for a in &analyses {
            for r in &a.reports {
                let available = cat.entries_of_order(r.quotient_order).len();
                assert_eq!(r.candidates_available, available);
                if r.no_hgs {
                    assert!(r.matched.is_none());
                    assert_eq!(r.candidates_scanned, available);
                } else {
                    assert!(r.matched.is_some());
                    assert!(r.candidates_scanned <= available);
                }
            }
            assert_eq!(a.no_hgs(), a.reports.iter().any(|r| r.no_hgs));
        }
        let s = summarize(&cat, &analyses);
        assert!(s.is_consistent());
        assert_eq!(
            s.no_hgs_entries,
            analyses.iter().filter(|a| a.no_hgs()).count()
        );
    }
}

/// Every degree-8 no-HGS parallel subgroup has trivial core, so each such
/// parallel extension shares its Galois closure with the original.
#[test]
fn degree_eight_witnesses_have_trivial_core() {
    let cat = build_catalogue(8).unwrap();
    let mut found = 0;
    for e in &cat.entries {
        for r in analyze_parallel(e, &cat)
            .unwrap()
            .into_iter()
            .filter(|r| r.no_hgs)
        {
            assert_eq!(r.core_order, 1);
            let h = PermGroup::new(8, r.h_class.generators.clone()).unwrap();
            assert!(e.group.normal_core(&h).unwrap().is_trivial());
            found += 1;
        }
    }
    assert!(found >= 8);
}

fn params() -> Vec<PqParameters> {
    [(7, 3), (13, 3), (11, 5)]
        .map(|(p, q)| PqParameters::new(p, q).unwrap())
        .to_vec()
}

/// Every parallel pair at degree `pq` admits a Hopf–Galois structure of each
/// type its source pair admits; with trivial core the type sets agree.
#[test]
fn degree_pq_parallel_pairs_inherit_types() {
    for pq in params() {
        let cat = build_catalogue(pq.p * pq.q).unwrap();
        let mut both = 0;
        for e in &cat.entries {
            let sets = parallel_type_sets(e, &cat).unwrap();
            assert!(!sets.source.is_empty());
            for (types, &core) in sets.parallel.iter().zip(&sets.core_orders) {
                assert!(types.is_superset(&sets.source), "entry {}", e.entry_id);
                if core == 1 {
                    assert_eq!(types, &sets.source, "entry {}", e.entry_id);
                }
            }
            if sets.source.len() == 2 {
                both += 1;
                assert!(sets.parallel.iter().all(|t| t.len() == 2));
            }
        }
        assert!(both > 0);
    }
}

/// The structural checks of the degree-`pq` verification; the published
/// closed forms are compared separately.
#[test]
fn degree_pq_structure_checks_pass() {
    for pq in params() {
        let cat = build_catalogue(pq.p * pq.q).unwrap();
        let report = verify_pq_with(&pq, &cat).unwrap();
        // the tables list subgroups; `J_{t,c}` for different `t` may be conjugate
        let j_only = format!("C{}: J(", pq.p * pq.q);
        assert!(
            report.collisions.iter().all(|c| c.starts_with(&j_only)),
            "{:?}",
            report.collisions
        );
        for c in &report.checks {
            if c.name != "index-pq counts match the closed forms" {
                assert!(c.pass, "({}, {}) {}: {}", pq.p, pq.q, c.name, c.detail);
            }
        }
        assert!(report.entries.iter().all(|e| e.derived_pass));
        assert_eq!(report.entries.len(), cat.len());
    }
}

#[test]
fn burnside_degree_is_cyclic_only() {
    let pq = PqParameters::new(5, 3).unwrap();
    let cat = build_catalogue(15).unwrap();
    assert_eq!(cat.types, vec!["C15".to_string()]);
    let report = verify_pq_with(&pq, &cat).unwrap();
    assert!(report.pass, "{:?}", report.failures());
}

/// Whether `τ` is central decides between `q + 1` and `2` classes of
/// index-`pq` subgroups when `q² | |G|`.
#[test]
fn central_tau_dichotomy() {
    for pq in params() {
        let n = pq.p * pq.q;
        let tau = cyclic_realization(&pq).unwrap().tau;
        let mut seen = [false; 2];
        for m in cyclic_type_transitive_subgroups(&pq).unwrap() {
            let FamilyTag::CyclicSemidirect { tau_central, .. } = m.tag else {
                continue;
            };
            let central = m
                .group
                .elements()
                .unwrap()
                .iter()
                .all(|x| &(x * &tau) == &(&tau * x));
            assert_eq!(central, tau_central);
            if m.group.order() % (pq.q * pq.q) != 0 {
                continue;
            }
            let classes = classify_index_n(&m.group, n).unwrap().conjugacy_classes as u64;
            assert_eq!(classes, if central { pq.q + 1 } else { 2 });
            seen[central as usize] = true;
        }
        assert_eq!(seen, [true, true]);
    }
}

/// Metacyclic-type entries of order prime to `p²` also live in `Hol(C_pq)`.
#[test]
fn metacyclic_entries_without_p_squared_are_cyclic_type() {
    for pq in params() {
        let n = pq.p * pq.q;
        let cat = build_catalogue(n).unwrap();
        let cyclic = format!("C{n}");
        let mut checked = 0;
        for (i, e) in cat.entries.iter().enumerate() {
            if e.type_label == cyclic || e.order % (pq.p * pq.p) == 0 {
                continue;
            }
            let found = cat.entries_of_order(e.order).iter().any(|&j| {
                cat.entries[j].type_label == cyclic
                    && pair_isomorphic_data(cat.pair_data(i).unwrap(), cat.pair_data(j).unwrap())
                        .is_some()
            });
            assert!(found, "entry {i}");
            checked += 1;
        }
        assert!(checked > 0);
    }
}

#[test]
fn hall_decomposition_degree_39() {
    let stats = common::hall_structure(39);
    assert!(stats.subgroups > 0);
}

/// A transitive pair of odd degree used to exercise the extension step; its
/// parallel subgroup is the stabilizer, so it is matched by its own entry.
fn stand_in_witness(n: u64) -> NoHgsWitness {
    let cat = build_catalogue(n).unwrap();
    let e = cat.entries.last().unwrap();
    NoHgsWitness {
        degree: e.degree,
        type_label: e.type_label.clone(),
        group: e.group.clone(),
        stabilizer: e.stabilizer.clone(),
        parallel: e.stabilizer.clone(),
    }
}

#[test]
fn extension_preconditions() {
    let w = stand_in_witness(9);
    assert_eq!(find_extension_prime(9, 9, 100).unwrap(), 11);
    assert_eq!(find_extension_prime(15, 15, 100).unwrap(), 17);
    assert!(find_extension_prime(8, 8, 100).is_err());
    assert!(extend_family(&w, 7, None).is_err(), "q below n");
    assert!(extend_family(&w, 13, None).is_err(), "3 divides 12");
    assert!(extend_family(&w, 15, None).is_err(), "not prime");
    let mut even = w.clone();
    even.degree = 8;
    assert!(extend_family(&even, 11, None).is_err());
}

#[test]
fn extension_builds_the_direct_product() {
    let w = stand_in_witness(9);
    let ext = extend_family(&w, 11, None).unwrap();
    assert_eq!(ext.witness.degree, 99);
    assert_eq!(ext.witness.group.order(), w.group.order() * 11);
    assert!(ext.witness.group.is_transitive());
    assert!(ext
        .witness
        .group
        .point_stabilizer(0)
        .same_group(&ext.witness.stabilizer));
    assert_eq!(ext.witness.group.order(), ext.witness.parallel.order() * 99);
    assert!(ext.verified);

    // the stand-in parallel pair is matched, so it cannot be certified
    let cat = build_catalogue(9).unwrap();
    let certified = extend_family(&w, 11, Some(&cat)).unwrap();
    assert!(!certified.verified);

    assert!(iterate_family(&w, &[], Some(&cat)).unwrap().is_empty());
    let chain = iterate_family(&w, &[11, 13], None);
    // gcd(12, 99) = 3
    assert!(chain.is_err());
    let chain = iterate_family(&w, &[11], None).unwrap();
    assert_eq!(chain.len(), 1);
    assert_eq!(chain[0].witness.degree, 99);
}
