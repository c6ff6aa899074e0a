//! Tower certificates: for every step of a special filtration, the free
//! permutation module `B_i = (Z/m_i)[G_(i)]^{r_i}`, the equivariant
//! surjection `β_i: B_i -> A_i`, the cover `K_i = B_i ⋊ G_(i)` and the
//! surjection `φ_i: K_i -> G_(i+1)` with abelian kernel `ker β_i x {1}`.
//!
//! Here `G_(i) = G/G_i` is the acting quotient and `G_(i+1) = G/G_{i+1}`.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abelian::{abelian_basis, AbelianBasis, AbelianGroup};
use crate::error::{GroupError, Result};
use crate::extensions::{detect_central_extension, pullback_cover, PullbackCover};
use crate::group::{GroupHom, GroupRef, Subgroup};
use crate::limits::Limits;
use crate::special::{is_special, verify_certificate, SpecialCertificate, SpecialOutcome};

pub const TOWER_SEMANTICS: &str = "group-theoretic skeleton of a toric rational tower; \
the conditions on generic fibers are geometric and not machine-checked";

pub const MODULE_CONVENTION: &str = "B_i = Z/m_i[G/G_i]^{r_i}, built over the acting quotient G/G_i \
rather than over G_i";

pub const GENERATOR_COUNT_LABEL: &str = "greedy";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerificationMode {
    Exhaustive,
    Sampled { pairs: usize, seed: u64 },
}

/// One step of a tower certificate.
#[derive(Clone, Debug)]
pub struct TowerStep {
    pub index: usize,
    /// `G_(i) = G/G_i`.
    pub quotient_before: GroupRef,
    /// `G_(i+1) = G/G_{i+1}`.
    pub quotient_after: GroupRef,
    /// `s_i: G_(i) -> G_(i+1)` from the special certificate.
    pub section: GroupHom,
    /// `A_i` inside `G_(i+1)`.
    pub kernel_module: Subgroup,
    pub kernel_structure: AbelianGroup,
    /// `m_i`, the exponent of `A_i`.
    pub exponent: u64,
    /// Module generators `a_1..a_r` (elements of `G_(i+1)`), chosen greedily.
    pub module_generators: Vec<usize>,
    /// `β(e_{k,q}) = s(q) a_k s(q)⁻¹` at coordinate `k |G_(i)| + q`.
    pub basis_images: Vec<usize>,
    pub module_order: BigUint,
    pub cover_order: BigUint,
    /// `|ker φ_i| = |B_i| |G_(i)| / |G_(i+1)|`.
    pub kernel_order: BigUint,
    /// Generators of `ker β_i`, present when the step was enumerated.
    pub kernel_generators: Option<Vec<Vec<u64>>>,
    pub mode: VerificationMode,
    basis: Arc<AbelianBasis>,
    a_lookup: Arc<Vec<usize>>,
}

/// An element `(b, g)` of `K_i = B_i ⋊ G_(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverElement {
    pub b: Vec<u64>,
    pub g: usize,
}

impl TowerStep {
    pub fn generator_count(&self) -> usize {
        self.module_generators.len()
    }

    /// Number of coordinates of `B_i`, `r |G_(i)|`.
    pub fn rank(&self) -> usize {
        self.basis_images.len()
    }

    fn q_order(&self) -> usize {
        self.quotient_before.order()
    }

    /// `(g·b)_{k,q} = b_{k, g⁻¹q}`.
    pub fn act(&self, g: usize, b: &[u64]) -> Vec<u64> {
        let q = &self.quotient_before;
        let n = self.q_order();
        let mut out = vec![0; b.len()];
        for k in 0..self.generator_count() {
            for p in 0..n {
                out[k * n + q.mul(g, p)] = b[k * n + p];
            }
        }
        out
    }

    /// `β(b) = ∏ β(e_j)^{b_j}` as an element of `G_(i+1)`.
    pub fn beta(&self, b: &[u64]) -> usize {
        let d = self.basis.structure.invariant_factors();
        let mut acc = vec![0u64; d.len()];
        for (j, &c) in b.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let img = &self.basis.coordinates[self.a_position(self.basis_images[j])];
            for t in 0..d.len() {
                acc[t] = (acc[t] + c % d[t] * img[t]) % d[t];
            }
        }
        self.a_lookup[self.basis.linear_index(&acc)]
    }

    fn a_position(&self, x: usize) -> usize {
        self.kernel_module.position(x).expect("image lies in A_i")
    }

    /// `(b, g)(b', g') = (b + g·b', g g')`.
    pub fn cover_mul(&self, x: &CoverElement, y: &CoverElement) -> CoverElement {
        let moved = self.act(x.g, &y.b);
        CoverElement {
            b: x.b
                .iter()
                .zip(&moved)
                .map(|(u, v)| (u + v) % self.exponent)
                .collect(),
            g: self.quotient_before.mul(x.g, y.g),
        }
    }

    /// `φ(b, g) = β(b) s(g)`.
    pub fn phi(&self, x: &CoverElement) -> usize {
        self.quotient_after.mul(self.beta(&x.b), self.section.apply(x.g))
    }

    fn conj(&self, g: usize, a: usize) -> usize {
        let p = &self.quotient_after;
        let s = self.section.apply(g);
        p.mul(p.mul(s, a), p.inv(s))
    }

    fn decode_b(&self, mut idx: u128) -> Vec<u64> {
        let m = self.exponent as u128;
        (0..self.rank())
            .map(|_| {
                let c = (idx % m) as u64;
                idx /= m;
                c
            })
            .collect()
    }

    /// Generators of `K_i`: `(e_{k,1}, 1)` and `(0, t)` for generators `t`.
    pub fn cover_generators(&self) -> Vec<CoverElement> {
        let n = self.q_order();
        let mut gens: Vec<CoverElement> = (0..self.generator_count())
            .map(|k| {
                let mut b = vec![0; self.rank()];
                b[k * n] = 1 % self.exponent;
                CoverElement { b, g: 0 }
            })
            .collect();
        gens.extend(self.quotient_before.generators().iter().map(|&t| CoverElement {
            b: vec![0; self.rank()],
            g: t,
        }));
        gens
    }
}

#[derive(Clone, Debug)]
pub struct TowerCertificate {
    pub group: GroupRef,
    pub special: SpecialCertificate,
    pub steps: Vec<TowerStep>,
    pub semantics: &'static str,
    pub module_convention: &'static str,
    pub generator_count_label: &'static str,
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

/// Greedy module generators: repeatedly add the element whose orbit grows
/// the generated subgroup most.
fn greedy_module_generators(
    p: &GroupRef,
    a: &Subgroup,
    orbit: impl Fn(usize) -> Vec<usize>,
) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut span = Subgroup::trivial(p);
    let mut seeds: Vec<usize> = Vec::new();
    while span.order() < a.order() {
        let mut best: Option<(usize, Subgroup)> = None;
        for x in a.members() {
            if span.contains(x) {
                continue;
            }
            let mut trial = seeds.clone();
            trial.extend(orbit(x));
            let s = Subgroup::generate(p, &trial);
            if best.as_ref().map_or(true, |(_, b)| s.order() > b.order()) {
                best = Some((x, s));
            }
        }
        let (x, s) = best.expect("A is not yet spanned");
        chosen.push(x);
        seeds.extend(orbit(x));
        span = s;
    }
    chosen
}

/// Builds the tower for a verified special certificate.
pub fn build_tower(cert: &SpecialCertificate, limits: &Limits) -> Result<TowerCertificate> {
    verify_certificate(cert).map_err(GroupError::InvalidInput)?;
    let mut steps = Vec::new();
    for st in &cert.steps {
        let q = st.quotient_before().clone();
        let p = st.quotient_after().clone();
        let a = st.kernel.clone();
        let section = st.section.clone();
        let conj = |g: usize, x: usize| {
            let s = section.apply(g);
            p.mul(p.mul(s, x), p.inv(s))
        };
        let orbit = |x: usize| (0..q.order()).map(|g| conj(g, x)).collect::<Vec<_>>();
        let gens = greedy_module_generators(&p, &a, orbit);
        let exponent = st.kernel_structure.exponent();
        let rank = gens.len() * q.order();
        if rank > limits.max_order {
            return Err(GroupError::limit(
                &format!("coordinates of B_{} (r·|G/G_i| = {rank})", st.index),
                limits.max_order as u128,
            ));
        }
        let basis_images: Vec<usize> = gens
            .iter()
            .flat_map(|&x| (0..q.order()).map(move |g| (x, g)))
            .map(|(x, g)| conj(g, x))
            .collect();
        let a_group = a.to_group(&p);
        let basis = abelian_basis(&a_group)?;
        let a_members: Vec<usize> = a.members().collect();
        let mut a_lookup = vec![0; a.order()];
        for (pos, coords) in basis.coordinates.iter().enumerate() {
            a_lookup[basis.linear_index(coords)] = a_members[pos];
        }
        let module_order = BigUint::from(exponent).pow(rank as u32);
        let cover_order = &module_order * big(q.order());
        let kernel_order = &cover_order / big(p.order());
        let mode = if cover_order <= BigUint::from(limits.exhaustive_cover_order) {
            VerificationMode::Exhaustive
        } else {
            VerificationMode::Sampled {
                pairs: limits.sample_pairs,
                seed: limits.sample_seed,
            }
        };
        let mut step = TowerStep {
            index: st.index,
            quotient_before: q,
            quotient_after: p,
            section,
            kernel_module: a,
            kernel_structure: st.kernel_structure.clone(),
            exponent,
            module_generators: gens,
            basis_images,
            module_order,
            cover_order,
            kernel_order,
            kernel_generators: None,
            mode,
            basis: Arc::new(basis),
            a_lookup: Arc::new(a_lookup),
        };
        if mode == VerificationMode::Exhaustive {
            step.kernel_generators = Some(kernel_generators(&step));
        }
        verify_step(&step).map_err(|e| GroupError::InvalidInput(format!("step {}: {e}", st.index)))?;
        steps.push(step);
    }
    Ok(TowerCertificate {
        group: cert.group.clone(),
        special: cert.clone(),
        steps,
        semantics: TOWER_SEMANTICS,
        module_convention: MODULE_CONVENTION,
        generator_count_label: GENERATOR_COUNT_LABEL,
    })
}

fn module_size(step: &TowerStep) -> u128 {
    (step.exponent as u128).pow(step.rank() as u32)
}

/// Greedy generators of `ker β` from a full enumeration of `B`.
fn kernel_generators(step: &TowerStep) -> Vec<Vec<u64>> {
    let m = step.exponent;
    let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; step.rank()]]);
    let mut gens = Vec::new();
    for idx in 0..module_size(step) {
        let b = step.decode_b(idx);
        if span.contains(&b) || step.beta(&b) != 0 {
            continue;
        }
        let mut next = HashSet::new();
        for s in &span {
            let mut cur = s.clone();
            loop {
                for (c, v) in cur.iter_mut().zip(&b) {
                    *c = (*c + v) % m;
                }
                if !next.insert(cur.clone()) || span.contains(&cur) {
                    break;
                }
            }
        }
        span.extend(next);
        gens.push(b);
    }
    gens
}

/// Re-checks one step; `Err` names the first failed property.
pub fn verify_step(step: &TowerStep) -> std::result::Result<(), String> {
    let p = &step.quotient_after;
    let q = &step.quotient_before;
    let a = &step.kernel_module;
    step.section
        .validate()
        .map_err(|e| format!("section is not a homomorphism: {e}"))?;
    if !a.is_normal_in(p) || !a.is_abelian(p) {
        return Err("A_i is not an abelian normal subgroup".into());
    }
    if a.members().fold(1, |e, x| num_integer::lcm(e, p.element_order(x))) != step.exponent {
        return Err("m_i differs from the exponent of A_i".into());
    }
    if step.section.image().intersection(a).order() != 1
        || step.section.image().order() * a.order() != p.order()
    {
        return Err("section image is not a complement to A_i".into());
    }
    let n = q.order();
    if step.rank() != step.generator_count() * n {
        return Err("B_i has the wrong number of coordinates".into());
    }
    for (k, &x) in step.module_generators.iter().enumerate() {
        for g in 0..n {
            if step.basis_images[k * n + g] != step.conj(g, x) {
                return Err(format!("β(e_{k},{g}) is not g·a_{k}"));
            }
        }
    }
    if Subgroup::generate(p, &step.basis_images) != *a {
        return Err("β_i is not surjective onto A_i".into());
    }
    let expected_b = BigUint::from(step.exponent).pow(step.rank() as u32);
    if step.module_order != expected_b
        || step.cover_order != &expected_b * big(n)
        || step.kernel_order != &step.cover_order / big(p.order())
    {
        return Err("recorded orders are inconsistent".into());
    }
    let gens = step.cover_generators();
    let check_pair = |x: &CoverElement, y: &CoverElement| -> std::result::Result<(), String> {
        if step.phi(&step.cover_mul(x, y)) != p.mul(step.phi(x), step.phi(y)) {
            return Err(format!("φ is not multiplicative at {x:?}, {y:?}"));
        }
        Ok(())
    };
    let check_equivariance = |g: usize, b: &[u64]| -> std::result::Result<(), String> {
        if step.beta(&step.act(g, b)) != step.conj(g, step.beta(b)) {
            return Err(format!("β is not equivariant at g = {g}, b = {b:?}"));
        }
        Ok(())
    };
    match step.mode {
        VerificationMode::Exhaustive => {
            let size = module_size(step);
            let mut brute_kernel = Vec::new();
            let mut phi_image = HashSet::new();
            for idx in 0..size {
                let b = step.decode_b(idx);
                for g in 0..n {
                    check_equivariance(g, &b)?;
                    let x = CoverElement { b: b.clone(), g };
                    for y in &gens {
                        check_pair(&x, y)?;
                    }
                    let f = step.phi(&x);
                    phi_image.insert(f);
                    if f == 0 {
                        brute_kernel.push(x);
                    }
                }
            }
            if phi_image.len() != p.order() {
                return Err("φ is not surjective".into());
            }
            if BigUint::from(brute_kernel.len()) != step.kernel_order {
                return Err("kernel of φ has the wrong order".into());
            }
            if brute_kernel.iter().any(|x| x.g != 0) {
                return Err("kernel of φ leaves the base B_i".into());
            }
            let Some(kgens) = &step.kernel_generators else {
                return Err("kernel generators missing".into());
            };
            let brute: HashSet<&Vec<u64>> = brute_kernel.iter().map(|x| &x.b).collect();
            if kgens.iter().any(|v| !brute.contains(v)) {
                return Err("a kernel generator is not in ker φ".into());
            }
            let mut span: HashSet<Vec<u64>> = HashSet::from([vec![0; step.rank()]]);
            let mut frontier: Vec<Vec<u64>> = vec![vec![0; step.rank()]];
            while let Some(v) = frontier.pop() {
                for gvec in kgens {
                    let w: Vec<u64> = v
                        .iter()
                        .zip(gvec)
                        .map(|(s, t)| (s + t) % step.exponent)
                        .collect();
                    if span.insert(w.clone()) {
                        frontier.push(w);
                    }
                }
            }
            if span.len() != brute_kernel.len() {
                return Err("kernel generators do not span ker φ".into());
            }
            let kernel_gen_elements: Vec<CoverElement> = kgens
                .iter()
                .map(|b| CoverElement { b: b.clone(), g: 0 })
                .collect();
            for x in &brute_kernel {
                for y in &kernel_gen_elements {
                    if step.cover_mul(x, y) != step.cover_mul(y, x) {
                        return Err("kernel of φ is not abelian".into());
                    }
                }
            }
        }
        VerificationMode::Sampled { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = step.exponent;
            let random = |rng: &mut ChaCha8Rng| CoverElement {
                b: (0..step.rank()).map(|_| rng.gen_range(0..m)).collect(),
                g: rng.gen_range(0..n),
            };
            for _ in 0..pairs {
                let x = random(&mut rng);
                let y = random(&mut rng);
                check_pair(&x, &y)?;
                check_equivariance(y.g, &x.b)?;
                if step.phi(&x) == 0 && x.g != 0 {
                    return Err("kernel of φ leaves the base B_i".into());
                }
            }
            // surjectivity: β onto A_i (checked above) and s onto a complement
        }
    }
    Ok(())
}

/// Re-checks a tower certificate from scratch.
pub fn verify_tower(tc: &TowerCertificate) -> std::result::Result<(), String> {
    verify_certificate(&tc.special).map_err(|e| format!("special certificate: {e}"))?;
    if tc.steps.len() != tc.special.steps.len() {
        return Err(format!(
            "{} tower steps for a filtration of length {}",
            tc.steps.len(),
            tc.special.steps.len()
        ));
    }
    for (i, (step, st)) in tc.steps.iter().zip(&tc.special.steps).enumerate() {
        if step.index != i {
            return Err(format!("step {i}: index out of sequence"));
        }
        if *step.quotient_before != **st.quotient_before()
            || *step.quotient_after != **st.quotient_after()
            || step.kernel_module != st.kernel
        {
            return Err(format!("step {i}: does not match the special certificate"));
        }
        if i + 1 < tc.steps.len() && *step.quotient_after != *tc.steps[i + 1].quotient_before {
            return Err(format!("step {i}: chain is broken"));
        }
        verify_step(step).map_err(|e| format!("step {i}: {e}"))?;
    }
    if let Some(last) = tc.steps.last() {
        if last.quotient_after.order() != tc.group.order() {
            return Err("last step does not reach G".into());
        }
    }
    Ok(())
}

/// The cover used by the untwisting pipeline.
#[derive(Clone, Debug)]
pub enum UntwistCover {
    /// Abelian input: `E = G`.
    Identity,
    Pullback(PullbackCover),
}

#[derive(Clone, Debug)]
pub struct UntwistReport {
    pub group: GroupRef,
    pub prime: u64,
    pub abelian_quotient: AbelianGroup,
    pub central_kernel_order: usize,
    pub cover: UntwistCover,
    pub cover_group: GroupRef,
    /// `E -> G`.
    pub projection: GroupHom,
    pub cover_kernel: Subgroup,
    pub special: SpecialOutcome,
    pub tower: Option<std::result::Result<TowerCertificate, String>>,
}

/// `G` an `ℓ`-group of class at most 2: build `E ->> G` with abelian central
/// kernel, decide whether `E` is special, and if so build its tower.
pub fn untwist_central(g: &GroupRef, limits: &Limits) -> Result<UntwistReport> {
    let factors = crate::arith::factorize(g.order() as u64);
    if factors.len() > 1 {
        return Err(GroupError::InvalidInput("G is not an ℓ-group".into()));
    }
    let prime = factors.first().map_or(1, |f| f.0);
    let data = detect_central_extension(g).ok_or(GroupError::NotClassTwo)?;
    let (cover, cover_group, projection) = if g.is_abelian() {
        (UntwistCover::Identity, g.clone(), GroupHom::identity(g.clone()))
    } else {
        let pc = pullback_cover(&data, limits)?;
        let (e, proj) = (pc.cover.clone(), pc.projection.clone());
        (UntwistCover::Pullback(pc), e, proj)
    };
    let cover_kernel = projection.kernel();
    let special = is_special(&cover_group, limits);
    let tower = special
        .certificate()
        .map(|c| build_tower(c, limits).map_err(|e| e.to_string()));
    Ok(UntwistReport {
        group: g.clone(),
        prime,
        abelian_quotient: data.abelian_quotient.clone(),
        central_kernel_order: data.central_kernel.order(),
        cover,
        cover_group,
        projection,
        cover_kernel,
        special,
        tower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{abelian, dihedral, quaternion, symmetric};
    use crate::extensions::fc_model;
    use crate::group::FiniteGroup;

    fn arc(g: FiniteGroup) -> GroupRef {
        Arc::new(g)
    }

    fn tower_of(g: &GroupRef) -> TowerCertificate {
        let lim = Limits::default();
        let cert = is_special(g, &lim).certificate().cloned().unwrap();
        build_tower(&cert, &lim).unwrap()
    }

    #[test]
    fn abelian_tower() {
        let g = arc(abelian(&[2, 4]));
        let t = tower_of(&g);
        assert_eq!(t.steps.len(), 1);
        let s = &t.steps[0];
        assert_eq!(s.exponent, 4);
        assert_eq!(s.generator_count(), 2);
        assert_eq!(s.cover_order, BigUint::from(16u32));
        verify_tower(&t).unwrap();
    }

    #[test]
    fn dihedral_tower() {
        let t = tower_of(&arc(dihedral(4)));
        let s = &t.steps[1];
        assert_eq!((s.exponent, s.generator_count()), (4, 1));
        assert_eq!(s.module_order, BigUint::from(16u32));
        assert_eq!(s.cover_order, BigUint::from(32u32));
        assert_eq!(s.kernel_order, BigUint::from(4u32));
        verify_tower(&t).unwrap();
    }

    #[test]
    fn symmetric_four_bottom_step() {
        let t = tower_of(&arc(symmetric(4)));
        let s = &t.steps[2];
        assert_eq!(s.quotient_before.order(), 6);
        assert_eq!((s.exponent, s.generator_count()), (2, 1));
        assert_eq!(s.module_order, BigUint::from(64u32));
        assert_eq!(s.cover_order, BigUint::from(384u32));
        assert_eq!(s.kernel_order, BigUint::from(16u32));
        verify_tower(&t).unwrap();
    }

    #[test]
    fn tampered_beta_is_rejected() {
        let mut t = tower_of(&arc(symmetric(4)));
        let s = &mut t.steps[2];
        // β(e_{0,1}) sent to the identity: no longer equivariant
        s.basis_images[1] = 0;
        assert!(verify_tower(&t).is_err());
    }

    #[test]
    fn truncated_tower_is_rejected() {
        let mut t = tower_of(&arc(symmetric(4)));
        t.steps.pop();
        assert!(verify_tower(&t).is_err());
    }

    #[test]
    fn sampled_mode_runs() {
        let lim = Limits {
            exhaustive_cover_order: 10,
            sample_pairs: 2000,
            ..Limits::default()
        };
        let g = arc(dihedral(4));
        let cert = is_special(&g, &lim).certificate().cloned().unwrap();
        let t = build_tower(&cert, &lim).unwrap();
        assert!(matches!(t.steps[1].mode, VerificationMode::Sampled { .. }));
        verify_tower(&t).unwrap();
    }

    #[test]
    fn untwist_examples() {
        let lim = Limits::default();
        let q8 = untwist_central(&arc(quaternion()), &lim).unwrap();
        assert_eq!(q8.cover_group.order(), 16);
        assert_eq!(q8.cover_kernel.order(), 2);

        let (_, h3) = fc_model(&AbelianGroup::new(vec![3, 3]).unwrap(), 1000).unwrap();
        let r = untwist_central(&h3, &lim).unwrap();
        assert_eq!(r.cover_group.order(), 81);
        if let Some(t) = &r.tower {
            verify_tower(t.as_ref().unwrap()).unwrap();
        }

        let c4 = untwist_central(&arc(abelian(&[2, 4])), &lim).unwrap();
        assert_eq!(c4.cover_group.order(), 8);
        assert!(c4.special.certificate().is_some());

        assert!(matches!(
            untwist_central(&arc(symmetric(3)), &lim),
            Err(GroupError::InvalidInput(_))
        ));
        let d16 = arc(dihedral(8));
        assert!(matches!(untwist_central(&d16, &lim), Err(GroupError::NotClassTwo)));
    }
}
