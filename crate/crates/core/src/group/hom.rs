use std::collections::VecDeque;
use std::sync::Arc;

use super::{FiniteGroup, GroupRef, Subgroup};
use crate::error::{GroupError, Result};

/// A homomorphism between two enumerated groups, stored as a total image
/// table on domain element indices.
#[derive(Clone)]
pub struct GroupHom {
    domain: GroupRef,
    codomain: GroupRef,
    images: Vec<u32>,
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GroupHom(order {} -> order {})",
            self.domain.order(),
            self.codomain.order()
        )
    }
}

impl GroupHom {
    /// Validated constructor: checks totality, `phi(1) = 1`, and
    /// `phi(x s) = phi(x) phi(s)` for every element `x` and every generator
    /// `s` of the domain. The latter covers every edge of the Cayley graph and
    /// is equivalent to multiplicativity on all pairs.
    pub fn new(domain: GroupRef, codomain: GroupRef, images: Vec<usize>) -> Result<GroupHom> {
        let hom = GroupHom::new_unchecked(domain, codomain, images)?;
        hom.validate()?;
        Ok(hom)
    }

    /// Stores the table without the multiplicativity check. Only the shape
    /// (length and index range) is checked; used for deserialized or
    /// deliberately corrupted data that a verifier must reject.
    pub fn new_unchecked(
        domain: GroupRef,
        codomain: GroupRef,
        images: Vec<usize>,
    ) -> Result<GroupHom> {
        if images.len() != domain.order() {
            return Err(GroupError::NotAHomomorphism(format!(
                "image table has {} entries for a domain of order {}",
                images.len(),
                domain.order()
            )));
        }
        if images.iter().any(|&i| i >= codomain.order()) {
            return Err(GroupError::NotAHomomorphism(
                "image outside codomain".into(),
            ));
        }
        Ok(GroupHom {
            domain,
            codomain,
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Extends images of the domain's generators to the whole domain by
    /// breadth-first word reconstruction, rejecting any inconsistency.
    pub fn from_generator_images(
        domain: GroupRef,
        codomain: GroupRef,
        generator_images: &[usize],
    ) -> Result<GroupHom> {
        let images = extend_images(&domain, &codomain, domain.generators(), generator_images)?;
        Ok(GroupHom {
            domain,
            codomain,
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    pub fn identity(g: GroupRef) -> GroupHom {
        let images = (0..g.order() as u32).collect();
        GroupHom {
            domain: g.clone(),
            codomain: g,
            images,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = &self.domain;
        let c = &self.codomain;
        if self.images[0] != 0 {
            return Err(GroupError::NotAHomomorphism(
                "identity not preserved".into(),
            ));
        }
        for x in 0..d.order() {
            for &s in d.generators() {
                let lhs = self.apply(d.mul(x, s));
                let rhs = c.mul(self.apply(x), self.apply(s));
                if lhs != rhs {
                    return Err(GroupError::NotAHomomorphism(format!(
                        "phi({} * {}) != phi({}) * phi({})",
                        d.element(x),
                        d.element(s),
                        d.element(x),
                        d.element(s)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Multiplicativity on every pair; quadratic, used by tests and verifiers
    /// on small domains.
    pub fn validate_all_pairs(&self) -> Result<()> {
        let d = &self.domain;
        let c = &self.codomain;
        for x in 0..d.order() {
            for y in 0..d.order() {
                if self.apply(d.mul(x, y)) != c.mul(self.apply(x), self.apply(y)) {
                    return Err(GroupError::NotAHomomorphism(format!(
                        "pair ({}, {})",
                        d.element(x),
                        d.element(y)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &GroupRef {
        &self.domain
    }

    pub fn codomain(&self) -> &GroupRef {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_members(
            self.domain.order(),
            (0..self.domain.order() as u32)
                .filter(|&x| self.images[x as usize] == 0)
                .collect(),
        )
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_members(self.codomain.order(), self.images.clone())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.order() == self.codomain.order() && self.is_injective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !Arc::ptr_eq(&self.codomain, &other.domain) && *self.codomain != *other.domain {
            return Err(GroupError::InvalidInput(
                "composition of homomorphisms with mismatched groups".into(),
            ));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        })
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_bijective() {
            return Err(GroupError::InvalidInput(
                "homomorphism is not bijective".into(),
            ));
        }
        let mut inv = vec![0u32; self.codomain.order()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Ok(GroupHom {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            images: inv,
        })
    }
}

/// Homomorphism determined by images of an arbitrary generating set of the
/// domain; fails with `NotAHomomorphism` on an inconsistent relation or when
/// `gens` does not generate.
pub fn hom_from_images(
    domain: GroupRef,
    codomain: GroupRef,
    gens: &[usize],
    images: &[usize],
) -> Result<GroupHom> {
    let table = extend_images(&domain, &codomain, gens, images)?;
    if table.contains(&usize::MAX) {
        return Err(GroupError::NotAHomomorphism(
            "the given elements do not generate the domain".into(),
        ));
    }
    GroupHom::new(domain, codomain, table)
}

/// Extends `gens[k] -> images[k]` over the subgroup generated by `gens`.
/// Returns a table indexed by domain element (unreached elements map to
/// `usize::MAX`) or `NotAHomomorphism` on the first inconsistent edge.
pub(crate) fn extend_images(
    domain: &FiniteGroup,
    codomain: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Result<Vec<usize>> {
    if gens.len() != images.len() {
        return Err(GroupError::NotAHomomorphism(format!(
            "{} generator images given for {} generators",
            images.len(),
            gens.len()
        )));
    }
    if images.iter().any(|&i| i >= codomain.order()) {
        return Err(GroupError::NotAHomomorphism(
            "image outside codomain".into(),
        ));
    }
    let mut table = vec![usize::MAX; domain.order()];
    table[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = domain.mul(x, s);
            let img = codomain.mul(table[x], t);
            if table[y] == usize::MAX {
                table[y] = img;
                queue.push_back(y);
            } else if table[y] != img {
                return Err(GroupError::NotAHomomorphism(format!(
                    "relation violated at {}",
                    domain.element(y)
                )));
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn trivial_hom() {
        let q8 = Arc::new(catalog::quaternion());
        let d8 = Arc::new(catalog::dihedral(4));
        let imgs = vec![0; q8.generators().len()];
        let h = GroupHom::from_generator_images(q8.clone(), d8, &imgs).unwrap();
        assert_eq!(h.kernel().order(), 8);
        h.validate_all_pairs().unwrap();
    }

    #[test]
    fn quaternion_to_dihedral_rejected() {
        let q8 = Arc::new(catalog::quaternion());
        let d8 = Arc::new(catalog::dihedral(4));
        let (i, j) = catalog::quaternion_ij(&q8);
        let (r, s) = catalog::dihedral_rs(&d8);
        let q8 = Arc::new(q8.with_generators(&[i, j]).unwrap());
        let err = GroupHom::from_generator_images(q8, d8, &[r, s]).unwrap_err();
        assert!(matches!(err, GroupError::NotAHomomorphism(_)));
    }

    #[test]
    fn edge_check_agrees_with_pair_check() {
        let s3 = Arc::new(catalog::symmetric(3));
        let c2 = Arc::new(catalog::cyclic(2));
        // sign map
        let images: Vec<usize> = s3
            .elements()
            .iter()
            .map(|p| {
                let even = p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0;
                if even {
                    0
                } else {
                    1
                }
            })
            .collect();
        let h = GroupHom::new(s3.clone(), c2.clone(), images.clone()).unwrap();
        h.validate_all_pairs().unwrap();
        assert_eq!(h.kernel().order(), 3);
        // a non-hom: send a single transposition to 1
        let mut bad = vec![0; 6];
        bad[1] = 1;
        let bad = GroupHom::new_unchecked(s3, c2, bad).unwrap();
        assert!(bad.validate().is_err());
        assert!(bad.validate_all_pairs().is_err());
    }
}
