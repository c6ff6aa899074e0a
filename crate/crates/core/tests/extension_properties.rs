mod common;

use std::sync::Arc;

use proptest::prelude::*;
use towergroup::abelian::{exterior_square, AbelianGroup};
use towergroup::catalog::{dihedral, quaternion, symmetric};
use towergroup::extensions::{
    detect_central_extension, fc_model, is_isoclinic, pullback_cover, FcElement, FcGroup,
};
use towergroup::group::{center, derived_subgroup, is_isomorphic, quotient_group};
use towergroup::{GroupRef, Limits};

use common::{chains, heisenberg, small_catalog};

/// `a ∧ b` in the coordinates `e_i ∧ e_j`, `i < j`, each reduced mod `d_i`.
fn wedge_oracle(d: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let m = d[i] as i128;
            let v = a[i] as i128 * b[j] as i128 - a[j] as i128 * b[i] as i128;
            out.push(v.rem_euclid(m) as u64);
        }
    }
    out
}

fn check_commutator(fc: &FcGroup, x: &FcElement, y: &FcElement) {
    let d = fc.base().invariant_factors();
    let c = fc.commutator(x, y);
    assert!(c.a.iter().all(|&v| v == 0));
    assert_eq!(c.z, wedge_oracle(d, &x.a, &y.a), "A = {d:?}");
}

#[test]
fn fc_commutators_pairwise_up_to_256() {
    let mut checked = 0;
    for c in chains(256) {
        let fc = FcGroup::new(AbelianGroup::new(c).unwrap());
        if fc.order() > 256 {
            continue;
        }
        let elems: Vec<FcElement> = fc.elements().collect();
        for x in &elems {
            for y in &elems {
                check_commutator(&fc, x, y);
            }
        }
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn fc_derived_order_is_exterior_square_up_to_4096() {
    for c in chains(4096) {
        let a = AbelianGroup::new(c.clone()).unwrap();
        let w = exterior_square(&a)
            .invariant_factors()
            .iter()
            .try_fold(a.order(), |acc, &d| acc.checked_mul(d).filter(|&v| v <= 4096));
        let Some(total) = w else { continue };
        let w = total / a.order();
        let fc = FcGroup::new(a);
        assert_eq!(fc.order(), (fc.base().order() * w) as u128);
        assert_eq!(fc.derived_order() as u64, w, "A = {c:?}");
        fc.verify().unwrap();
    }
}

#[test]
fn fc_permutation_models_match_the_cocycle_group() {
    for c in chains(64) {
        let a = AbelianGroup::new(c.clone()).unwrap();
        let Ok((fc, g)) = fc_model(&a, 512) else {
            continue;
        };
        assert_eq!(g.order() as u128, fc.order());
        let der = derived_subgroup(&g);
        assert_eq!(der.order() as u64, exterior_square(&a).order(), "A = {c:?}");
        assert!(der.is_subset_of(&center(&g)));
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = fc.element_of_perm(g.element(g.mul(x, y)));
                let rhs = fc.mul(&fc.element_of_perm(g.element(x)), &fc.element_of_perm(g.element(y)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

fn invariants_strategy() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(1u64..=6, 1..=4).prop_map(|v| {
        let a = AbelianGroup::from_cyclic_orders(&v);
        a.invariant_factors().to_vec()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fc_commutator_is_wedge_on_random_pairs(
        d in invariants_strategy(),
        seeds in proptest::collection::vec(any::<u64>(), 64),
    ) {
        let fc = FcGroup::new(AbelianGroup::new(d.clone()).unwrap());
        let n = fc.order();
        for pair in seeds.chunks(2) {
            let x = fc.decode((pair[0] as u128 % n) as usize);
            let y = fc.decode((pair[1] as u128 % n) as usize);
            check_commutator(&fc, &x, &y);
            prop_assert_eq!(fc.encode(&fc.decode(fc.encode(&x))), fc.encode(&x));
            prop_assert_eq!(fc.mul(&x, &fc.inv(&x)), fc.identity());
        }
    }
}

fn check_pullback(name: &str, g: GroupRef) {
    let lim = Limits::default();
    let data = detect_central_extension(&g).unwrap_or_else(|| panic!("{name}"));
    let a = &data.abelian_quotient;
    let pb = pullback_cover(&data, &lim).unwrap();
    let e = &pb.cover;
    let w = exterior_square(a).order() as usize;
    assert_eq!(e.order() * a.order() as usize, pb.fc.order() as usize * g.order(), "{name}");
    assert_eq!(pb.kernel.order(), w, "{name}");
    let z = center(e);
    assert!(pb.kernel.is_subset_of(&z), "{name}");
    for x in 0..e.order() {
        let f = pb.fc_component(x);
        assert_eq!(&f.a[..], data.coordinates(pb.projection.apply(x)), "{name}");
    }
    // E / ker ≅ G
    let q = quotient_group(e, &pb.kernel).unwrap();
    assert!(is_isomorphic(&q.group, &g, &lim).unwrap().is_some(), "{name}");
}

#[test]
fn pullback_covers_are_exact() {
    let lim = Limits::default();
    let fc24 = fc_model(&AbelianGroup::new(vec![2, 4]).unwrap(), lim.max_order).unwrap().1;
    for (name, g) in [
        ("q8", Arc::new(quaternion())),
        ("d8", Arc::new(dihedral(4))),
        ("heis(3)", heisenberg(3)),
        ("fc(2,4)", fc24),
    ] {
        check_pullback(name, g);
    }
}

#[test]
fn non_class_two_groups_are_rejected() {
    assert!(detect_central_extension(&Arc::new(symmetric(3))).is_none());
    assert!(detect_central_extension(&Arc::new(dihedral(8))).is_none());
}

#[test]
fn isoclinism_is_reflexive_and_symmetric() {
    let lim = Limits::default();
    let cat: Vec<(String, GroupRef)> = small_catalog()
        .into_iter()
        .filter(|(_, g)| g.order() <= 24)
        .collect();
    for (name, g) in &cat {
        let w = is_isoclinic(g, g, &lim).unwrap();
        assert!(w.is_some(), "{name}");
    }
    for (i, (n1, g)) in cat.iter().enumerate() {
        for (n2, h) in &cat[i + 1..] {
            let ab = is_isoclinic(g, h, &lim).unwrap().is_some();
            let ba = is_isoclinic(h, g, &lim).unwrap().is_some();
            assert_eq!(ab, ba, "{n1} vs {n2}");
            if g.is_abelian() && h.is_abelian() {
                assert!(ab, "{n1} vs {n2}");
            }
            if g.is_abelian() != h.is_abelian() {
                assert!(!ab, "{n1} vs {n2}");
            }
        }
    }
}

#[test]
fn known_isoclinism_classes() {
    let lim = Limits::default();
    let q8: GroupRef = Arc::new(quaternion());
    let d8: GroupRef = Arc::new(dihedral(4));
    let fc22 = fc_model(&AbelianGroup::new(vec![2, 2]).unwrap(), lim.max_order).unwrap().1;
    let fc33 = fc_model(&AbelianGroup::new(vec![3, 3]).unwrap(), lim.max_order).unwrap().1;
    assert!(is_isoclinic(&q8, &d8, &lim).unwrap().is_some());
    assert!(is_isoclinic(&fc22, &d8, &lim).unwrap().is_some());
    assert!(is_isoclinic(&fc33, &heisenberg(3), &lim).unwrap().is_some());
    assert!(is_isoclinic(&q8, &heisenberg(3), &lim).unwrap().is_none());
    assert!(is_isoclinic(&d8, &Arc::new(dihedral(3)), &lim).unwrap().is_none());
    let w = derived_subgroup(&fc22);
    assert_eq!(w.order(), 2);
}
