use std::collections::BTreeSet;

use hgs_core::autohol::holomorph;
use hgs_core::grouplib::groups_of_order;
use hgs_core::hgs::build_catalogue;
use hgs_core::subgroups::{
    affine_subgroup_classes, subgroup_lattice, AffineFilter, AffineFrame, SubgroupClass,
    SubgroupLattice,
};
use hgs_core::PermGroup;

/// Elementary abelian groups of order `n` with their translation groups.
fn elementary_types(n: u64) -> Vec<(String, PermGroup)> {
    groups_of_order(n)
        .unwrap()
        .groups
        .iter()
        .filter_map(|g| {
            let t = g.regular_representation();
            AffineFrame::new(&t).ok().map(|_| (g.name.clone(), t))
        })
        .collect()
}

/// Checks that `classes` are exactly the lattice classes selected by `keep`,
/// one each, with the same class sizes.
fn matches_lattice(
    classes: &[SubgroupClass],
    lat: &SubgroupLattice,
    keep: impl Fn(&SubgroupClass) -> bool,
) {
    let e = &lat.elements;
    let mut hit = BTreeSet::new();
    for c in classes {
        let mut els: Vec<u32> = c
            .representative
            .elements()
            .unwrap()
            .iter()
            .map(|x| e.index_of(x.images()).unwrap())
            .collect();
        els.sort_unstable();
        let i = lat.class_of(&els).expect("representative is a subgroup");
        assert!(hit.insert(i), "two affine classes are conjugate");
        assert_eq!(lat.classes[i].class_size, c.class_size);
        assert_eq!(lat.classes[i].order, c.order);
        assert_eq!(c.key, hgs_core::subgroups::canonical_key(e, &els));
    }
    let expected: BTreeSet<usize> = (0..lat.classes.len())
        .filter(|&i| keep(&lat.classes[i]))
        .collect();
    assert_eq!(hit, expected);
}

#[test]
fn frame_rejects_non_elementary_groups() {
    let lib = groups_of_order(8).unwrap();
    for g in &lib.groups {
        let ok = AffineFrame::new(&g.regular_representation()).is_ok();
        assert_eq!(ok, g.name == "C2xC2xC2", "{}", g.name);
    }
    let f = AffineFrame::new(&lib.by_name("C2xC2xC2").unwrap().regular_representation()).unwrap();
    assert_eq!((f.degree(), f.prime(), f.dimension()), (8, 2, 3));
}

#[test]
fn holomorph_lattices_agree() {
    for n in [4u64, 8, 9] {
        for (name, t) in elementary_types(n) {
            let hol = holomorph(groups_of_order(n).unwrap().by_name(&name).unwrap()).unwrap();
            let frame = AffineFrame::new(&t).unwrap();
            let lat = subgroup_lattice(&hol.group, None, u64::MAX).unwrap();
            let all = affine_subgroup_classes(&frame, &hol.group, AffineFilter::default()).unwrap();
            matches_lattice(&all, &lat, |_| true);
            let trans = affine_subgroup_classes(
                &frame,
                &hol.group,
                AffineFilter {
                    order: None,
                    transitive: true,
                },
            )
            .unwrap();
            matches_lattice(&trans, &lat, |c| c.representative.is_transitive());
        }
    }
}

/// Subgroups of every catalogue entry of elementary abelian type, with and
/// without the index-`n` restriction.
#[test]
fn entry_lattices_agree() {
    let mut checked = 0;
    for n in [4u64, 8, 9] {
        let types = elementary_types(n);
        let cat = build_catalogue(n).unwrap();
        for e in &cat.entries {
            let Some((_, t)) = types.iter().find(|(name, _)| name == &e.type_label) else {
                continue;
            };
            let frame = AffineFrame::new(t).unwrap();
            let lat = subgroup_lattice(&e.group, None, u64::MAX).unwrap();
            let all = affine_subgroup_classes(&frame, &e.group, AffineFilter::default()).unwrap();
            matches_lattice(&all, &lat, |_| true);
            let target = e.order / n;
            let index_n = affine_subgroup_classes(
                &frame,
                &e.group,
                AffineFilter {
                    order: Some(target),
                    transitive: false,
                },
            )
            .unwrap();
            matches_lattice(&index_n, &lat, |c| c.order == target);
            checked += 1;
        }
    }
    assert!(checked > 20, "{checked}");
}
