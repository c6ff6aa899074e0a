//! Special groups: a chain `G = G_0 ⊋ G_1 ⊋ ... ⊋ G_r = 1` of normal
//! subgroups of `G` such that every `G_i/G_{i+1}` is abelian and every
//! projection `p_i: G/G_{i+1} -> G/G_i` has a section.

use std::collections::{HashMap, HashSet};

use crate::abelian::{abelian_from_group, AbelianGroup};
use crate::error::{GroupError, Result};
use crate::group::{
    derived_subgroup, find_complement, is_solvable, normal_subgroups, quotient_group, GroupHom,
    GroupRef, Quotient, Subgroup,
};
use crate::limits::Limits;

/// One extension `1 -> A_i -> G/G_{i+1} -> G/G_i -> 1` of a certificate.
#[derive(Clone, Debug)]
pub struct SpecialStep {
    pub index: usize,
    /// `G -> G/G_i`.
    pub projection_before: GroupHom,
    /// `G -> G/G_{i+1}`.
    pub projection_after: GroupHom,
    /// `p_i: G/G_{i+1} -> G/G_i`.
    pub p: GroupHom,
    /// `A_i = G_i/G_{i+1}` inside `G/G_{i+1}`.
    pub kernel: Subgroup,
    pub kernel_structure: AbelianGroup,
    /// A complement to `A_i` in `G/G_{i+1}`.
    pub complement: Subgroup,
    /// `s_i: G/G_i -> G/G_{i+1}` with `p_i ∘ s_i = id`.
    pub section: GroupHom,
}

impl SpecialStep {
    pub fn quotient_before(&self) -> &GroupRef {
        self.projection_before.codomain()
    }

    pub fn quotient_after(&self) -> &GroupRef {
        self.projection_after.codomain()
    }
}

#[derive(Clone, Debug)]
pub struct SpecialCertificate {
    pub group: GroupRef,
    pub chain: Vec<Subgroup>,
    pub steps: Vec<SpecialStep>,
}

impl SpecialCertificate {
    pub fn length(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Clone, Debug)]
pub struct SpecialFailure {
    pub group: GroupRef,
    /// Number of chain extensions `G_i ⊋ G_{i+1}` examined.
    pub explored_chain_count: u64,
    /// Limits that cut the search short; empty for an exhaustive failure.
    pub limits_hit: Vec<String>,
    pub reason: String,
}

impl SpecialFailure {
    pub fn is_exhaustive(&self) -> bool {
        self.limits_hit.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum SpecialOutcome {
    Special(SpecialCertificate),
    NotSpecial(SpecialFailure),
}

impl SpecialOutcome {
    pub fn certificate(&self) -> Option<&SpecialCertificate> {
        match self {
            SpecialOutcome::Special(c) => Some(c),
            SpecialOutcome::NotSpecial(_) => None,
        }
    }
}

struct Search<'a> {
    g: &'a GroupRef,
    limits: &'a Limits,
    normals: Vec<Subgroup>,
    exponents: Vec<u64>,
    quotients: HashMap<usize, Quotient>,
    splits: HashMap<(usize, usize), Option<Subgroup>>,
    /// `(N, remaining steps)` pairs known to admit no chain.
    dead: HashSet<(usize, usize)>,
    explored: u64,
}

impl<'a> Search<'a> {
    fn quotient(&mut self, m: usize) -> Result<&Quotient> {
        if !self.quotients.contains_key(&m) {
            let q = quotient_group(self.g, &self.normals[m])?;
            self.quotients.insert(m, q);
        }
        Ok(&self.quotients[&m])
    }

    /// Complement to the image of `N` in `G/M`, if one exists.
    fn split(&mut self, n: usize, m: usize) -> Result<Option<Subgroup>> {
        if let Some(s) = self.splits.get(&(n, m)) {
            return Ok(s.clone());
        }
        self.explored += 1;
        let limits = self.limits;
        let members: Vec<usize> = self.normals[n].members().collect();
        let q = self.quotient(m)?;
        let image: Vec<usize> = members.iter().map(|&x| q.projection.apply(x)).collect();
        let image = Subgroup::from_elements(&q.group, &image).expect("image of a subgroup");
        let found = find_complement(&q.group, &image, limits)?.map(|c| c.subgroup);
        self.splits.insert((n, m), found.clone());
        Ok(found)
    }

    /// Candidates for `G_{i+1}` below `G_i = N`, in preference order:
    /// larger order, then larger exponent, then canonical order.
    fn candidates(&self, n: usize) -> Vec<usize> {
        let top = &self.normals[n];
        let derived = derived_subgroup(&top.to_group(self.g));
        let top_members: Vec<usize> = top.members().collect();
        let derived_in_g: Vec<usize> = derived.members().map(|k| top_members[k]).collect();
        let mut out: Vec<usize> = (0..self.normals.len())
            .filter(|&m| {
                let s = &self.normals[m];
                s.order() < top.order()
                    && s.is_subset_of(top)
                    && derived_in_g.iter().all(|&x| s.contains(x))
            })
            .collect();
        out.sort_by(|&a, &b| {
            let (sa, sb) = (&self.normals[a], &self.normals[b]);
            sb.order()
                .cmp(&sa.order())
                .then(self.exponents[b].cmp(&self.exponents[a]))
                .then(sa.cmp(sb))
        });
        out
    }

    /// Chain from `N` down to the trivial subgroup in at most `steps` steps.
    fn descend(&mut self, n: usize, steps: usize, trivial: usize) -> Result<Option<Vec<usize>>> {
        if n == trivial {
            return Ok(Some(vec![n]));
        }
        if steps == 0 || self.dead.contains(&(n, steps)) {
            return Ok(None);
        }
        for m in self.candidates(n) {
            if steps == 1 && m != trivial {
                continue;
            }
            if self.split(n, m)?.is_none() {
                continue;
            }
            if let Some(mut rest) = self.descend(m, steps - 1, trivial)? {
                rest.insert(0, n);
                return Ok(Some(rest));
            }
        }
        self.dead.insert((n, steps));
        Ok(None)
    }
}

fn omega(mut n: usize) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    count + usize::from(n > 1)
}

/// Decides whether `G` is special.
///
/// Chains of normal subgroups of `G` are searched by iterative deepening, so
/// the certificate returned has minimal length; among chains of that length
/// the first in preference order (larger `G_{i+1}` first, then larger
/// exponent, then canonical order) wins. A failure without recorded limits
/// means every chain was examined. Non-solvable groups fail immediately.
pub fn is_special(g: &GroupRef, limits: &Limits) -> SpecialOutcome {
    let failure = |explored: u64, limits_hit: Vec<String>, reason: &str| {
        SpecialOutcome::NotSpecial(SpecialFailure {
            group: g.clone(),
            explored_chain_count: explored,
            limits_hit,
            reason: reason.to_string(),
        })
    };
    if !is_solvable(g) {
        return failure(0, vec![], "not solvable");
    }
    let normals = match normal_subgroups(g, limits) {
        Ok(n) => n,
        Err(e) => return failure(0, vec![e.to_string()], "normal subgroups not enumerated"),
    };
    let exponents = normals
        .iter()
        .map(|s| {
            s.members()
                .fold(1, |acc, x| num_integer::lcm(acc, g.element_order(x)))
        })
        .collect();
    let whole = normals
        .iter()
        .position(|s| s.is_whole())
        .expect("G is normal");
    let trivial = normals
        .iter()
        .position(|s| s.is_trivial())
        .expect("1 is normal");
    let mut search = Search {
        g,
        limits,
        normals,
        exponents,
        quotients: HashMap::new(),
        splits: HashMap::new(),
        dead: HashSet::new(),
        explored: 0,
    };
    let mut found = None;
    for steps in 0..=omega(g.order()) {
        match search.descend(whole, steps, trivial) {
            Ok(Some(chain)) => {
                found = Some(chain);
                break;
            }
            Ok(None) => {}
            Err(e) => return failure(search.explored, vec![e.to_string()], "search truncated"),
        }
    }
    let Some(chain) = found else {
        return failure(
            search.explored,
            vec![],
            "no chain of normal subgroups splits",
        );
    };
    match assemble(&mut search, &chain) {
        Ok(cert) => SpecialOutcome::Special(cert),
        Err(e) => failure(
            search.explored,
            vec![e.to_string()],
            "certificate assembly failed",
        ),
    }
}

fn assemble(search: &mut Search, chain: &[usize]) -> Result<SpecialCertificate> {
    let g = search.g.clone();
    let mut steps = Vec::new();
    for i in 0..chain.len() - 1 {
        let (n, m) = (chain[i], chain[i + 1]);
        let complement = search.split(n, m)?.expect("chain edges split");
        let before = search.quotient(n)?.projection.clone();
        let after = search.quotient(m)?.projection.clone();
        steps.push(build_step(i, before, after, complement)?);
    }
    Ok(SpecialCertificate {
        chain: chain.iter().map(|&k| search.normals[k].clone()).collect(),
        group: g,
        steps,
    })
}

/// Derives `p_i`, `A_i` and `s_i` from the two projections and a complement.
pub fn build_step(
    index: usize,
    projection_before: GroupHom,
    projection_after: GroupHom,
    complement: Subgroup,
) -> Result<SpecialStep> {
    let qa = projection_after.codomain().clone();
    let qb = projection_before.codomain().clone();
    let mut p_table = vec![usize::MAX; qa.order()];
    for x in 0..projection_after.domain().order() {
        p_table[projection_after.apply(x)] = projection_before.apply(x);
    }
    let p = GroupHom::new(qa.clone(), qb.clone(), p_table)?;
    let kernel = p.kernel();
    let kernel_structure = abelian_from_group(&kernel.to_group(&qa))?;
    let mut s_table = vec![usize::MAX; qb.order()];
    for h in complement.members() {
        s_table[p.apply(h)] = h;
    }
    if s_table.contains(&usize::MAX) {
        return Err(GroupError::InvalidInput(
            "complement does not map onto G/G_i".into(),
        ));
    }
    let section = GroupHom::new(qb, qa, s_table)?;
    Ok(SpecialStep {
        index,
        projection_before,
        projection_after,
        p,
        kernel,
        kernel_structure,
        complement,
        section,
    })
}

/// Re-checks a certificate from scratch; `Err` carries the first failure.
pub fn verify_certificate(cert: &SpecialCertificate) -> std::result::Result<(), String> {
    let g = &cert.group;
    let chain = &cert.chain;
    if chain.first().map(|s| s.is_whole()) != Some(true) {
        return Err("chain does not start at G".into());
    }
    if chain.last().map(|s| s.is_trivial()) != Some(true) {
        return Err("chain does not end at the trivial subgroup".into());
    }
    if cert.steps.len() + 1 != chain.len() {
        return Err(format!(
            "{} steps for a chain of length {}",
            cert.steps.len(),
            chain.len() - 1
        ));
    }
    for (i, s) in chain.iter().enumerate() {
        if s.parent_order() != g.order() || !s.is_closed_in(g) {
            return Err(format!("G_{i} is not a subgroup of G"));
        }
        if !s.is_normal_in(g) {
            return Err(format!("G_{i} is not normal in G"));
        }
        if i > 0 && !(s.is_subset_of(&chain[i - 1]) && s.order() < chain[i - 1].order()) {
            return Err(format!("G_{i} is not a proper subgroup of G_{}", i - 1));
        }
    }
    for (i, st) in cert.steps.iter().enumerate() {
        let fail = |m: &str| Err(format!("step {i}: {m}"));
        if st.index != i {
            return fail("index out of sequence");
        }
        for (hom, name) in [
            (&st.projection_before, "projection to G/G_i"),
            (&st.projection_after, "projection to G/G_{i+1}"),
            (&st.p, "p_i"),
            (&st.section, "s_i"),
        ] {
            if let Err(e) = hom.validate() {
                return fail(&format!("{name} is not a homomorphism: {e}"));
            }
        }
        if **st.projection_before.domain() != **g || **st.projection_after.domain() != **g {
            return fail("projections are not defined on G");
        }
        if st.projection_before.kernel() != chain[i] || st.projection_after.kernel() != chain[i + 1]
        {
            return fail("projection kernels differ from the chain");
        }
        if !st.projection_after.is_surjective() || !st.projection_before.is_surjective() {
            return fail("projection not surjective");
        }
        for x in 0..g.order() {
            if st.p.apply(st.projection_after.apply(x)) != st.projection_before.apply(x) {
                return fail("p_i is not compatible with the projections");
            }
        }
        let ker = st.p.kernel();
        let image: Vec<usize> = chain[i]
            .members()
            .map(|x| st.projection_after.apply(x))
            .collect();
        if Subgroup::from_elements(st.quotient_after(), &image).as_ref() != Some(&ker) {
            return fail("kernel of p_i differs from G_i/G_{i+1}");
        }
        if !ker.is_abelian(st.quotient_after()) {
            return fail("kernel of p_i is not abelian");
        }
        let qb = st.quotient_before();
        for x in 0..qb.order() {
            if st.p.apply(st.section.apply(x)) != x {
                return fail("p_i ∘ s_i is not the identity");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{abelian, dihedral, quaternion, symmetric};
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    fn arc(g: FiniteGroup) -> GroupRef {
        Arc::new(g)
    }

    fn chain_orders(c: &SpecialCertificate) -> Vec<usize> {
        c.chain.iter().map(|s| s.order()).collect()
    }

    #[test]
    fn abelian_is_one_step() {
        let g = arc(abelian(&[2, 6]));
        let c = is_special(&g, &Limits::default())
            .certificate()
            .cloned()
            .unwrap();
        assert_eq!(chain_orders(&c), vec![12, 1]);
        verify_certificate(&c).unwrap();
    }

    #[test]
    fn trivial_group_has_empty_chain() {
        let g = arc(FiniteGroup::trivial(1));
        let c = is_special(&g, &Limits::default())
            .certificate()
            .cloned()
            .unwrap();
        assert_eq!(c.length(), 0);
        verify_certificate(&c).unwrap();
    }

    #[test]
    fn quaternion_is_not_special() {
        let g = arc(quaternion());
        match is_special(&g, &Limits::default()) {
            SpecialOutcome::NotSpecial(f) => assert!(f.is_exhaustive()),
            SpecialOutcome::Special(_) => panic!("Q8 has no split chain"),
        }
    }

    #[test]
    fn dihedral_chain_uses_cyclic_subgroup() {
        let g = arc(dihedral(4));
        let c = is_special(&g, &Limits::default())
            .certificate()
            .cloned()
            .unwrap();
        assert_eq!(chain_orders(&c), vec![8, 4, 1]);
        assert_eq!(
            c.steps[1].kernel_structure,
            AbelianGroup::new(vec![4]).unwrap()
        );
        verify_certificate(&c).unwrap();
    }

    #[test]
    fn symmetric_four() {
        let g = arc(symmetric(4));
        let c = is_special(&g, &Limits::default())
            .certificate()
            .cloned()
            .unwrap();
        assert_eq!(chain_orders(&c), vec![24, 12, 4, 1]);
        verify_certificate(&c).unwrap();
    }

    #[test]
    fn non_solvable_short_circuits() {
        let g = arc(crate::catalog::alternating(5));
        match is_special(&g, &Limits::default()) {
            SpecialOutcome::NotSpecial(f) => assert_eq!(f.explored_chain_count, 0),
            SpecialOutcome::Special(_) => panic!(),
        }
    }

    #[test]
    fn tampered_section_is_rejected() {
        let g = arc(dihedral(4));
        let mut c = is_special(&g, &Limits::default())
            .certificate()
            .cloned()
            .unwrap();
        let st = &mut c.steps[1];
        let d = st.section.domain().clone();
        let cd = st.section.codomain().clone();
        // send the nontrivial class to a rotation of order 4
        let r = (0..cd.order()).find(|&x| cd.element_order(x) == 4).unwrap();
        st.section = GroupHom::new_unchecked(d, cd, vec![0, r]).unwrap();
        assert!(verify_certificate(&c).is_err());
    }

    #[test]
    fn truncated_chain_is_rejected() {
        let g = arc(symmetric(4));
        let mut c = is_special(&g, &Limits::default())
            .certificate()
            .cloned()
            .unwrap();
        c.chain.pop();
        c.steps.pop();
        assert!(verify_certificate(&c).is_err());
    }
}
