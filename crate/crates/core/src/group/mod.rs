//! Permutation groups with fully enumerated, canonically ordered elements.
//!
//! Every group in the crate is carried as a [`FiniteGroup`]: elements are
//! sorted lexicographically by image array, so element indices, subgroup
//! member lists and search orders are deterministic. Index `0` is always the
//! identity.

mod hom;
mod search;
mod structure;
mod subgroup;

use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

pub use hom::{hom_from_images, GroupHom};
pub use search::{
    find_complement, for_each_isomorphism, is_isomorphic, small_generating_set, Complement,
};
pub use structure::{
    center, centralizer, conjugacy_classes, derived_series, derived_subgroup, element_orders,
    is_solvable, normal_subgroups, normalizer, quotient_group, sylow_subgroup, Quotient,
};
pub use subgroup::Subgroup;

use crate::error::{GroupError, Result};
use crate::perm::Permutation;

/// Groups up to this order cache a full multiplication table on first use.
const TABLE_CACHE_ORDER: usize = 2048;

pub type GroupRef = Arc<FiniteGroup>;

pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<usize>,
    inverses: Vec<u32>,
    table: OnceLock<Option<Vec<u32>>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generator_perms())
            .finish()
    }
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            degree: self.degree,
            elements: self.elements.clone(),
            generators: self.generators.clone(),
            inverses: self.inverses.clone(),
            table: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteGroup {
    /// Equality as concrete permutation groups (same degree, same element set).
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

/// Closes `generators` under composition.
///
/// Fails with `LimitExceeded` as soon as more than `max_order` elements have
/// been produced.
pub fn close_group(generators: &[Permutation], max_order: usize) -> Result<FiniteGroup> {
    let degree = match generators.first() {
        Some(g) => g.degree(),
        None => return Err(GroupError::InvalidInput("no generators given".into())),
    };
    close_group_with_degree(degree, generators, max_order)
}

/// Like [`close_group`] but accepts an empty generator list (trivial group).
pub fn close_group_with_degree(
    degree: usize,
    generators: &[Permutation],
    max_order: usize,
) -> Result<FiniteGroup> {
    if max_order == 0 {
        return Err(GroupError::InvalidInput(
            "max_order must be at least 1".into(),
        ));
    }
    for g in generators {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose(g);
            if !seen.contains(&y) {
                if seen.len() >= max_order {
                    return Err(GroupError::limit("group order", max_order as u128));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(FiniteGroup::from_sorted(degree, elements, generators))
}

impl FiniteGroup {
    /// Builds from an already closed, sorted element list.
    pub(crate) fn from_sorted(
        degree: usize,
        elements: Vec<Permutation>,
        generators: &[Permutation],
    ) -> FiniteGroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements[0].is_identity());
        let index = |p: &Permutation| elements.binary_search(p).expect("closed set");
        let mut gens: Vec<usize> = generators.iter().map(index).filter(|&i| i != 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let inverses = elements
            .iter()
            .map(|p| index(&p.inverse()) as u32)
            .collect();
        FiniteGroup {
            degree,
            elements,
            generators: gens,
            inverses,
            table: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> FiniteGroup {
        FiniteGroup::from_sorted(degree, vec![Permutation::identity(degree)], &[])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    /// Indices of the (nontrivial, deduplicated) generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Permutation> {
        self.generators
            .iter()
            .map(|&g| self.elements[g].clone())
            .collect()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        if p.degree() != self.degree {
            return None;
        }
        self.elements.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index_of(p).is_some()
    }

    fn table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| {
                let n = self.order();
                if n > TABLE_CACHE_ORDER {
                    return None;
                }
                let mut t = Vec::with_capacity(n * n);
                for a in &self.elements {
                    for b in &self.elements {
                        t.push(self.elements.binary_search(&a.compose(b)).unwrap() as u32);
                    }
                }
                Some(t)
            })
            .as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = self.table() {
            return t[a * self.order() + b] as usize;
        }
        let p = self.elements[a].compose(&self.elements[b]);
        self.elements.binary_search(&p).expect("group is closed")
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let (mut base, mut e) = if k < 0 {
            (self.inv(a), k.unsigned_abs())
        } else {
            (a, k as u64)
        };
        let mut acc = 0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    /// `g x g^-1`.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.elements[a].order()
    }

    pub fn exponent(&self) -> u64 {
        (0..self.order()).fold(1, |acc, a| num_integer::lcm(acc, self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().enumerate().all(|(k, &a)| {
            gens[k + 1..]
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Same group with a different (nonempty) generating set drawn from its
    /// elements; used to shrink generator lists before searches.
    pub fn with_generators(&self, generators: &[usize]) -> Result<FiniteGroup> {
        let sub = Subgroup::generate(self, generators);
        if sub.order() != self.order() {
            return Err(GroupError::InvalidInput(
                "replacement generators do not generate the group".into(),
            ));
        }
        let perms: Vec<Permutation> = generators
            .iter()
            .map(|&g| self.elements[g].clone())
            .collect();
        Ok(FiniteGroup::from_sorted(
            self.degree,
            self.elements.clone(),
            &perms,
        ))
    }

    /// Left regular representation: element `i` acts on indices by `j -> i*j`.
    pub fn regular_representation(&self) -> FiniteGroup {
        let n = self.order();
        let perm_of = |a: usize| -> Permutation {
            Permutation::from_images_unchecked((0..n).map(|b| self.mul(a, b) as u32).collect())
        };
        let mut elements: Vec<Permutation> = (0..n).map(perm_of).collect();
        elements.sort_unstable();
        let gens: Vec<Permutation> = self.generators.iter().map(|&g| perm_of(g)).collect();
        FiniteGroup::from_sorted(n, elements, &gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(cycles: &[Vec<u32>], n: usize) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn cyclic_four() {
        let g = close_group(&[cyc(&[vec![0, 1, 2, 3]], 4)], 100).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 4);
    }

    #[test]
    fn symmetric_three() {
        let g = close_group(&[cyc(&[vec![0, 1]], 3), cyc(&[vec![0, 1, 2]], 3)], 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn limit_exceeded() {
        let err =
            close_group(&[cyc(&[vec![0, 1]], 4), cyc(&[vec![0, 1, 2, 3]], 4)], 10).unwrap_err();
        assert!(err.is_limit());
    }

    #[test]
    fn degree_mismatch() {
        let err = close_group(&[cyc(&[vec![0, 1]], 3), cyc(&[vec![0, 1]], 4)], 10).unwrap_err();
        assert_eq!(
            err,
            GroupError::DegreeMismatch {
                expected: 3,
                found: 4
            }
        );
    }

    #[test]
    fn inverses_and_powers() {
        let g = close_group(&[cyc(&[vec![0, 1, 2, 3, 4]], 5)], 100).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            assert_eq!(g.pow(a, 5), 0);
            assert_eq!(g.pow(a, -1), g.inv(a));
        }
    }

    #[test]
    fn regular_representation_preserves_order() {
        let g = close_group(&[cyc(&[vec![0, 1]], 3), cyc(&[vec![0, 1, 2]], 3)], 100).unwrap();
        let r = g.regular_representation();
        assert_eq!(r.order(), 6);
        assert_eq!(r.degree(), 6);
    }
}
