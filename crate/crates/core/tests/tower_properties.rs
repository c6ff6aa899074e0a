mod common;

use std::sync::Arc;

use num_bigint::BigUint;
use towergroup::catalog::{dihedral, symmetric};
use towergroup::fqlin::unitriangular;
use towergroup::special::is_special;
use towergroup::tower::{build_tower, verify_tower, TowerCertificate, TowerStep, VerificationMode};
use towergroup::{GroupRef, Limits, Subgroup};

use common::{heisenberg, small_catalog};

fn tower(g: &GroupRef) -> Option<TowerCertificate> {
    let lim = Limits::default();
    let cert = is_special(g, &lim).certificate().cloned()?;
    Some(build_tower(&cert, &lim).unwrap())
}

/// Test-side model of `K = B ⋊ G_(i)`: coordinates `k |Q| + q`, with
/// `g` sending coordinate `(k, q)` to `(k, g q)`.
struct Cover<'a> {
    step: &'a TowerStep,
    n: usize,
}

impl Cover<'_> {
    fn act(&self, g: usize, b: &[u64]) -> Vec<u64> {
        let q = &self.step.quotient_before;
        let mut out = vec![0; b.len()];
        for (j, &c) in b.iter().enumerate() {
            let (k, p) = (j / self.n, j % self.n);
            out[k * self.n + q.mul(g, p)] = c;
        }
        out
    }

    fn mul(&self, x: &(Vec<u64>, usize), y: &(Vec<u64>, usize)) -> (Vec<u64>, usize) {
        let m = self.step.exponent;
        let moved = self.act(x.1, &y.0);
        let b = x.0.iter().zip(&moved).map(|(u, v)| (u + v) % m).collect();
        (b, self.step.quotient_before.mul(x.1, y.1))
    }

    fn phi(&self, x: &(Vec<u64>, usize)) -> usize {
        let p = &self.step.quotient_after;
        let mut acc = p.identity();
        for (j, &c) in x.0.iter().enumerate() {
            acc = p.mul(acc, p.pow(self.step.basis_images[j], c as i64));
        }
        p.mul(acc, self.step.section.apply(x.1))
    }

    fn elements(&self) -> Vec<(Vec<u64>, usize)> {
        let rank = self.step.rank();
        let m = self.step.exponent;
        let mut out = Vec::new();
        let mut b = vec![0u64; rank];
        loop {
            for g in 0..self.n {
                out.push((b.clone(), g));
            }
            let mut i = 0;
            while i < rank {
                b[i] += 1;
                if b[i] < m {
                    break;
                }
                b[i] = 0;
                i += 1;
            }
            if i == rank {
                return out;
            }
        }
    }
}

/// Full preimage enumeration of `φ`: surjective, a homomorphism, kernel of
/// the stated order inside `B x {1}`. Returns false when `|K|` is too large.
fn brute_force_step(step: &TowerStep) -> bool {
    if step.cover_order > BigUint::from(50_000u32) {
        return false;
    }
    let c = Cover {
        step,
        n: step.quotient_before.order(),
    };
    let elems = c.elements();
    assert_eq!(BigUint::from(elems.len()), step.cover_order);
    let p = &step.quotient_after;
    let mut hit = vec![false; p.order()];
    let mut kernel = Vec::new();
    let gens: Vec<(Vec<u64>, usize)> = step
        .cover_generators()
        .into_iter()
        .map(|e| (e.b, e.g))
        .collect();
    for x in &elems {
        let fx = c.phi(x);
        assert_eq!(fx, step.phi(&towergroup::tower::CoverElement { b: x.0.clone(), g: x.1 }));
        hit[fx] = true;
        if fx == p.identity() {
            kernel.push(x.clone());
        }
        for s in &gens {
            assert_eq!(c.phi(&c.mul(x, s)), p.mul(fx, c.phi(s)));
        }
    }
    assert!(hit.iter().all(|&h| h), "φ is not surjective");
    assert_eq!(BigUint::from(kernel.len()), step.kernel_order);
    assert!(kernel.iter().all(|k| k.1 == step.quotient_before.identity()));
    for x in kernel.iter().take(64) {
        for y in &kernel {
            assert_eq!(c.mul(x, y), c.mul(y, x));
        }
    }
    true
}

#[test]
fn tower_steps_pass_the_brute_force_oracle() {
    let u33: GroupRef = unitriangular(3, 3, &Limits::default()).unwrap().top().group.clone();
    for (name, g) in [
        ("d8", Arc::new(dihedral(4)) as GroupRef),
        ("sym(4)", Arc::new(symmetric(4))),
        ("heis(3)", heisenberg(3)),
        ("u(3,3)", u33),
    ] {
        let t = tower(&g).unwrap();
        let mut enumerated = 0;
        for s in &t.steps {
            if brute_force_step(s) {
                enumerated += 1;
                assert_eq!(s.mode, VerificationMode::Exhaustive, "{name}");
            }
        }
        assert!(enumerated > 0, "{name}");
        verify_tower(&t).unwrap();
    }
}

#[test]
fn step_invariants_on_catalog() {
    for (name, g) in small_catalog() {
        let Some(t) = tower(&g) else { continue };
        assert_eq!(t.steps.len(), t.special.length(), "{name}");
        for s in &t.steps {
            let q = s.quotient_before.order();
            let p = &s.quotient_after;
            assert_eq!(s.exponent, s.kernel_structure.exponent());
            assert_eq!(s.rank(), s.generator_count() * q);
            assert_eq!(s.module_order, BigUint::from(s.exponent).pow(s.rank() as u32));
            assert_eq!(s.cover_order, &s.module_order * BigUint::from(q));
            assert_eq!(&s.kernel_order * BigUint::from(p.order()), s.cover_order);
            assert!(s.basis_images.iter().all(|&x| s.kernel_module.contains(x)));
            let span = Subgroup::generate(p, &s.basis_images);
            assert_eq!(span.order(), s.kernel_module.order(), "{name}: β not onto A");
            if s.mode == VerificationMode::Exhaustive {
                assert!(s.kernel_generators.is_some());
            }
        }
        verify_tower(&t).unwrap();
        for s in &t.steps {
            brute_force_step(s);
        }
    }
}
