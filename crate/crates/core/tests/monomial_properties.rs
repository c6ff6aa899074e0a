use num_rational::Rational64;
use proptest::prelude::*;
use towergroup::monomial::{
    action_from_q8_triple, mobius_evaluate, mobius_to_monomial, quaternion_matrix, type_descriptor,
    verify_action, GaussianRational, Mat2, MonomialMap,
};

fn gr(re: i64, im: i64) -> GaussianRational {
    GaussianRational::int(re, im)
}

fn maps() -> Vec<MonomialMap> {
    action_from_q8_triple().unwrap().assignment
}

#[test]
fn q8_triple_maps_form_a_group() {
    let ms = maps();
    assert_eq!(ms.len(), 8);
    let id = MonomialMap::identity(3);
    for f in &ms {
        assert!(f.has_sign_coefficients());
        assert!(ms.iter().any(|g| f.compose(g).unwrap() == id));
        for g in &ms {
            let fg = f.compose(g).unwrap();
            assert!(ms.contains(&fg));
            assert_eq!(fg, g.compose(f).unwrap());
            for h in &ms {
                assert_eq!(fg.compose(h).unwrap(), f.compose(&g.compose(h).unwrap()).unwrap());
            }
        }
        // (Z/2)^3: every element is an involution
        assert_eq!(f.compose(f).unwrap(), id);
    }
}

#[test]
fn q8_triple_action_is_verified_and_faithful() {
    let act = action_from_q8_triple().unwrap();
    assert!(verify_action(&act));
    assert!(act.is_faithful());
    assert_eq!(act.group.order(), 8);
    assert!(act.group.is_abelian() && act.group.exponent() == 2);
    let t = type_descriptor(&act);
    assert_eq!(t.per_element.iter().sum::<usize>(), t.multiset.iter().map(|(k, c)| k * c).sum());
    assert_eq!(t.multiset.get(&0), Some(&1));
}

fn point(v: &[i64]) -> Vec<GaussianRational> {
    v.iter().map(|&x| gr(x, 0)).collect()
}

#[test]
fn composition_matches_evaluation() {
    let ms = maps();
    for x in [[2, 3, 5], [-1, 7, 2], [3, -2, 11]] {
        let x = point(&x);
        for f in &ms {
            for g in &ms {
                let lhs = f.compose(g).unwrap().evaluate(&x).unwrap();
                let rhs = f.evaluate(&g.evaluate(&x).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn mobius_conversion_matches_pointwise_evaluation() {
    for code in 0..8 {
        let m = quaternion_matrix(code);
        let f = mobius_to_monomial(&m).unwrap();
        for x in [2, 3, 5] {
            let x = gr(x, 0);
            assert_eq!(f.evaluate(&[x]).unwrap()[0], mobius_evaluate(&m, x).unwrap(), "code {code}");
        }
    }
    let z = GaussianRational::zero();
    let general: Mat2 = [[gr(1, 0), gr(1, 0)], [z, gr(1, 0)]];
    assert!(mobius_to_monomial(&general).is_err());
}

fn small() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, -4i64..=4, 1i64..=3).prop_map(|(a, b, d)| {
        GaussianRational::new(Rational64::new(a, d), Rational64::new(b, d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_monomial_mobius_maps_agree(
        a in small(), b in small(), anti in any::<bool>(), x in small(),
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let z = GaussianRational::zero();
        let m: Mat2 = if anti { [[z, a], [b, z]] } else { [[a, z], [z, b]] };
        let f = mobius_to_monomial(&m).unwrap();
        prop_assume!(!x.is_zero());
        prop_assert_eq!(f.evaluate(&[x]).unwrap()[0], mobius_evaluate(&m, x).unwrap());
        prop_assert_eq!(f.compose(&f).unwrap().evaluate(&[x]).unwrap()[0],
            mobius_evaluate(&m, mobius_evaluate(&m, x).unwrap()).unwrap());
    }

    #[test]
    fn inverses_in_the_gaussian_rationals(a in small()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(a * a.inv().unwrap(), GaussianRational::one());
        prop_assert_eq!(a.pow(-2).unwrap() * a.pow(2).unwrap(), GaussianRational::one());
    }
}
