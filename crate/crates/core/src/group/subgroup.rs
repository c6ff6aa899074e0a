use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use super::FiniteGroup;
use crate::perm::Permutation;

/// A subgroup of a fixed parent [`FiniteGroup`], stored as sorted element
/// indices of the parent plus a membership bitmask.
///
/// The parent is not referenced; every method that needs arithmetic takes it
/// explicitly and checks that the orders line up.
#[derive(Clone)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<u32>,
    mask: Vec<u64>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent_order == other.parent_order && self.mask == other.mask
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mask.hash(state);
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subgroup(order {} of {})",
            self.order(),
            self.parent_order
        )
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    /// Canonical order: by size, then by sorted member indices.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl Subgroup {
    /// Builds from an arbitrary member list, which must already be a subgroup.
    pub(crate) fn from_members(parent_order: usize, mut members: Vec<u32>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![0u64; parent_order.div_ceil(64)];
        for &m in &members {
            mask[m as usize / 64] |= 1 << (m % 64);
        }
        Subgroup {
            parent_order,
            members,
            mask,
        }
    }

    /// Checked constructor for a member set that is claimed to be a subgroup.
    pub fn from_elements(g: &FiniteGroup, members: &[usize]) -> Option<Subgroup> {
        if members.iter().any(|&m| m >= g.order()) {
            return None;
        }
        let s = Subgroup::from_members(g.order(), members.iter().map(|&m| m as u32).collect());
        s.is_closed_in(g).then_some(s)
    }

    pub fn trivial(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_members(g.order(), vec![0])
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup::from_members(g.order(), (0..g.order() as u32).collect())
    }

    /// Subgroup generated by `gens` (closure under right multiplication).
    pub fn generate(g: &FiniteGroup, gens: &[usize]) -> Subgroup {
        let mut mask = vec![0u64; g.order().div_ceil(64)];
        let mut members = vec![0u32];
        mask[0] |= 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = g.mul(x, s);
                if mask[y / 64] & (1 << (y % 64)) == 0 {
                    mask[y / 64] |= 1 << (y % 64);
                    members.push(y as u32);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Subgroup {
            parent_order: g.order(),
            members,
            mask,
        }
    }

    /// Subgroup generated by this one together with `extra`.
    pub fn join_with(&self, g: &FiniteGroup, extra: &[usize]) -> Subgroup {
        let mut gens = small_generators(g, self);
        gens.extend_from_slice(extra);
        Subgroup::generate(g, &gens)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.members.len()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.parent_order && self.mask[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn members(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.members.iter().map(|&m| m as usize)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.parent_order
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent_order == other.parent_order
            && self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(self.parent_order, other.parent_order);
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| other.contains(m as usize))
            .collect();
        Subgroup::from_members(self.parent_order, members)
    }

    /// Full closure check: identity, products and inverses stay inside.
    pub fn is_closed_in(&self, g: &FiniteGroup) -> bool {
        if self.parent_order != g.order() || !self.contains(0) {
            return false;
        }
        let gens = small_generators(g, self);
        self.members()
            .all(|x| g.inv(x) < g.order() && self.contains(g.inv(x)))
            && self
                .members()
                .all(|x| gens.iter().all(|&s| self.contains(g.mul(x, s))))
            && g.order() % self.order() == 0
    }

    /// `x N x^-1 = N` for every `x` in `G`; checked on all members against all
    /// generators of `G`.
    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.generators()
            .iter()
            .all(|&s| self.members().all(|x| self.contains(g.conjugate(s, x))))
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        let gens = small_generators(g, self);
        gens.iter()
            .enumerate()
            .all(|(k, &a)| gens[k + 1..].iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }

    /// A small generating set, chosen greedily in canonical member order.
    pub fn generators(&self, g: &FiniteGroup) -> Vec<usize> {
        small_generators(g, self)
    }

    /// The subgroup as a standalone permutation group on the parent's points.
    /// Member indices are preserved in order: member `k` of `self` becomes
    /// element `k` of the result.
    pub fn to_group(&self, g: &FiniteGroup) -> FiniteGroup {
        let elements: Vec<Permutation> = self.members().map(|m| g.element(m).clone()).collect();
        let gens: Vec<Permutation> = small_generators(g, self)
            .into_iter()
            .map(|m| g.element(m).clone())
            .collect();
        FiniteGroup::from_sorted(g.degree(), elements, &gens)
    }

    /// Position of parent element `i` inside [`Subgroup::to_group`].
    pub fn position(&self, i: usize) -> Option<usize> {
        self.members.binary_search(&(i as u32)).ok()
    }
}

/// Greedy generating set: walk members from the largest element order down,
/// adding anything not yet generated.
fn small_generators(g: &FiniteGroup, sub: &Subgroup) -> Vec<usize> {
    if sub.is_whole() && !g.generators().is_empty() && g.generators().len() <= 4 {
        return g.generators().to_vec();
    }
    let mut candidates: Vec<usize> = sub.members().filter(|&m| m != 0).collect();
    candidates.sort_by_key(|&m| (std::cmp::Reverse(g.element_order(m)), m));
    let mut gens = Vec::new();
    let mut current = Subgroup::trivial(g);
    for c in candidates {
        if current.order() == sub.order() {
            break;
        }
        if !current.contains(c) {
            gens.push(c);
            current = Subgroup::generate(g, &gens);
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close_group;

    fn s4() -> FiniteGroup {
        let a = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let b = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        close_group(&[a, b], 100).unwrap()
    }

    #[test]
    fn generate_and_lagrange() {
        let g = s4();
        let x = g
            .index_of(&Permutation::from_cycles(4, &[vec![0, 1, 2]]).unwrap())
            .unwrap();
        let h = Subgroup::generate(&g, &[x]);
        assert_eq!(h.order(), 3);
        assert!(h.is_closed_in(&g));
        assert!(!h.is_normal_in(&g));
        assert_eq!(g.order() % h.order(), 0);
    }

    #[test]
    fn to_group_preserves_member_order() {
        let g = s4();
        let x = g
            .index_of(&Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap())
            .unwrap();
        let y = g
            .index_of(&Permutation::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap())
            .unwrap();
        let v = Subgroup::generate(&g, &[x, y]);
        let vg = v.to_group(&g);
        assert_eq!(vg.order(), 4);
        for (k, m) in v.members().enumerate() {
            assert_eq!(vg.element(k), g.element(m));
        }
        assert!(v.is_normal_in(&g));
    }

    #[test]
    fn from_elements_rejects_non_subgroup() {
        let g = s4();
        let three = g
            .index_of(&Permutation::from_cycles(4, &[vec![0, 1, 2]]).unwrap())
            .unwrap();
        assert!(Subgroup::from_elements(&g, &[0, three]).is_none());
        assert!(Subgroup::from_elements(&g, &[three]).is_none());
        let sub = Subgroup::generate(&g, &[three]);
        let members: Vec<usize> = sub.members().collect();
        assert_eq!(Subgroup::from_elements(&g, &members), Some(sub));
    }
}
