use std::sync::Arc;

use proptest::prelude::*;
use towergroup::arith::valuation;
use towergroup::catalog::{dihedral, symmetric};
use towergroup::fqlin::{analyze_sylow_linear, gl, pgl, psl, sl, unitriangular, FqField};
use towergroup::group::is_isomorphic;
use towergroup::{GroupRef, Limits};

/// `|GL_n(F_q)| = ∏_{i<n} (q^n - q^i)`.
fn gl_oracle(n: u32, q: u128) -> u128 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Invertible 2x2 matrices over a prime field, by enumeration.
fn count_gl2_prime(p: u64) -> u128 {
    let mut n = 0;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    n += ((a * d + p * p - b * c) % p != 0) as u128;
                }
            }
        }
    }
    n
}

#[test]
fn classical_orders_match_formulas() {
    let lim = Limits::default();
    for n in 1..=3usize {
        for q in [2u64, 3, 4, 5] {
            let g = gl_oracle(n as u32, q as u128);
            if g > lim.max_order as u128 {
                assert!(gl(n, q, &lim).unwrap_err().is_limit());
                continue;
            }
            let s = g / (q as u128 - 1);
            let ps = s / gcd(n as u128, q as u128 - 1);
            assert_eq!(gl(n, q, &lim).unwrap().group.order() as u128, g, "GL_{n}({q})");
            assert_eq!(sl(n, q, &lim).unwrap().group.order() as u128, s, "SL_{n}({q})");
            assert_eq!(pgl(n, q, &lim).unwrap().group.order() as u128, s, "PGL_{n}({q})");
            assert_eq!(psl(n, q, &lim).unwrap().group.order() as u128, ps, "PSL_{n}({q})");
        }
    }
    for p in [2u64, 3, 5] {
        assert_eq!(count_gl2_prime(p), gl_oracle(2, p as u128));
    }
}

#[test]
fn small_linear_groups_are_recognized() {
    let lim = Limits::default();
    let pgl23: GroupRef = pgl(2, 3, &lim).unwrap().group;
    assert!(is_isomorphic(&pgl23, &Arc::new(symmetric(4)), &lim).unwrap().is_some());
    let gl22: GroupRef = gl(2, 2, &lim).unwrap().group;
    assert!(is_isomorphic(&gl22, &Arc::new(symmetric(3)), &lim).unwrap().is_some());
    let r = analyze_sylow_linear(3, 2, 2, &lim).unwrap();
    assert_eq!(r.sylow_order, 8);
    assert!(is_isomorphic(&r.sylow, &Arc::new(dihedral(4)), &lim).unwrap().is_some());
    assert!(r.special.certificate().is_some());
    assert_eq!(r.unitriangular_match, Some(true));
}

#[test]
fn unitriangular_filtrations() {
    let lim = Limits::default();
    for n in 1..=4usize {
        for q in [2u64, 3] {
            let u = unitriangular(n, q, &lim).unwrap();
            let order = u.top().group.order() as u64;
            let p_part = q.pow(valuation(gl_oracle(n as u32, q as u128) as u64, q));
            assert_eq!(order, p_part, "U_{n}({q})");
            for (r, ((t, s), k)) in u.truncations.iter().zip(&u.sections).zip(&u.kernels).enumerate() {
                let big = &u.levels[r + 1].group;
                assert!(t.is_surjective());
                assert!(k.is_abelian(big) && k.is_normal_in(big));
                assert_eq!(k.order() as u64, q.pow(r as u32 + 1));
                s.validate_all_pairs().unwrap();
                for x in 0..s.domain().order() {
                    assert_eq!(t.apply(s.apply(x)), x);
                }
            }
            if n >= 2 {
                let cert = u.certificate().unwrap();
                assert_eq!(cert.length(), n - 1);
            }
        }
    }
}

#[test]
fn matrices_round_trip() {
    let lim = Limits::default();
    for g in [pgl(3, 2, &lim), gl(2, 3, &lim), pgl(2, 4, &lim), psl(2, 5, &lim)] {
        let g = g.unwrap();
        for x in 0..g.group.order() {
            let m = g.matrix(x);
            assert_ne!(m.determinant(&g.field), 0);
            assert_eq!(g.element_of_matrix(&m), Some(x));
        }
    }
}

#[test]
fn field_axioms() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = FqField::new(q).unwrap();
        let q8 = q as u8;
        for a in 0..q8 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            for b in 0..q8 {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        // the primitive element generates the multiplicative group
        let mut seen = std::collections::HashSet::new();
        let mut x = 1u8;
        for _ in 0..q - 1 {
            seen.insert(x);
            x = f.mul(x, f.primitive());
        }
        assert_eq!(seen.len() as u64, q - 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projective_canonicalization_ignores_scalars(
        which in 0usize..3,
        x in any::<usize>(),
        s in any::<u8>(),
    ) {
        let lim = Limits::default();
        let g = [pgl(2, 5, &lim), pgl(3, 3, &lim), pgl(2, 9, &lim)][which].clone().unwrap();
        let f = &g.field;
        let x = x % g.group.order();
        let m = g.matrix(x);
        let s = 1 + s % (f.order() as u8 - 1);
        let scaled = m.scale(f, s);
        prop_assert_eq!(scaled.projective_canonical(f), m.projective_canonical(f));
        prop_assert_eq!(g.element_of_matrix(&scaled), Some(x));
    }
}
