//! Backtracking searches: isomorphisms and complements.

use std::collections::{BTreeMap, VecDeque};

use super::{conjugacy_classes, FiniteGroup, GroupHom, GroupRef, Subgroup};
use crate::error::{GroupError, Result};
use crate::limits::Limits;

/// Greedy generating sequence: at each step add the element (canonical
/// order) that enlarges the generated subgroup the most.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = Subgroup::trivial(g);
    while current.order() < g.order() {
        let mut best: Option<(usize, Subgroup)> = None;
        for x in 0..g.order() {
            if current.contains(x) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let s = Subgroup::generate(g, &trial);
            if best.as_ref().map_or(true, |(_, b)| s.order() > b.order()) {
                let full = s.order() == g.order();
                best = Some((x, s));
                if full {
                    break;
                }
            }
        }
        let (x, s) = best.expect("some element lies outside a proper subgroup");
        gens.push(x);
        current = s;
    }
    gens
}

/// Per-element isomorphism invariant: (element order, class size).
fn element_invariants(g: &FiniteGroup) -> Vec<(u64, usize)> {
    let mut inv = vec![(0, 0); g.order()];
    for class in conjugacy_classes(g) {
        for &x in &class {
            inv[x] = (g.element_order(x), class.len());
        }
    }
    inv
}

struct Level {
    /// (element, parent, generator slot) in BFS order.
    tree: Vec<(usize, usize, usize)>,
    /// (element, generator slot, product) edges not in the tree.
    checks: Vec<(usize, usize, usize)>,
    members: Vec<usize>,
}

fn plan_levels(g: &FiniteGroup, gens: &[usize]) -> Vec<Level> {
    (1..=gens.len())
        .map(|j| {
            let mut seen = vec![false; g.order()];
            seen[0] = true;
            let mut tree = Vec::new();
            let mut checks = Vec::new();
            let mut members = vec![0];
            let mut queue = VecDeque::from([0usize]);
            while let Some(x) = queue.pop_front() {
                for (slot, &s) in gens[..j].iter().enumerate() {
                    let y = g.mul(x, s);
                    if !seen[y] {
                        seen[y] = true;
                        tree.push((y, x, slot));
                        members.push(y);
                        queue.push_back(y);
                    } else {
                        checks.push((x, slot, y));
                    }
                }
            }
            Level {
                tree,
                checks,
                members,
            }
        })
        .collect()
}

struct IsoSearch<'a, F> {
    g: &'a GroupRef,
    h: &'a GroupRef,
    gens: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    levels: Vec<Level>,
    images: Vec<usize>,
    chosen: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    nodes: u64,
    budget: u64,
    visit: F,
}

impl<F: FnMut(&GroupHom) -> bool> IsoSearch<'_, F> {
    /// Extends the map over level `j`; false on inconsistency or collision.
    fn fill_level(&mut self, j: usize) -> bool {
        let h = self.h;
        let level = &self.levels[j];
        self.images[0] = 0;
        for &(y, x, slot) in &level.tree {
            self.images[y] = h.mul(self.images[x], self.chosen[slot]);
        }
        for &(x, slot, y) in &level.checks {
            if self.images[y] != h.mul(self.images[x], self.chosen[slot]) {
                return false;
            }
        }
        self.epoch += 1;
        for &m in &level.members {
            let img = self.images[m];
            if self.stamp[img] == self.epoch {
                return false;
            }
            self.stamp[img] = self.epoch;
        }
        true
    }

    fn run(&mut self, j: usize) -> Result<Option<GroupHom>> {
        if j == self.gens.len() {
            let hom = GroupHom::new_unchecked(self.g.clone(), self.h.clone(), self.images.clone())?;
            debug_assert!(hom.validate().is_ok() && hom.is_bijective());
            return Ok((self.visit)(&hom).then_some(hom));
        }
        for k in 0..self.candidates[j].len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(GroupError::limit("isomorphism search nodes", self.budget));
            }
            let c = self.candidates[j][k];
            self.chosen.push(c);
            if self.fill_level(j) {
                if let Some(found) = self.run(j + 1)? {
                    return Ok(Some(found));
                }
            }
            self.chosen.pop();
        }
        Ok(None)
    }
}

/// Enumerates isomorphisms `G -> H` in a deterministic order, handing each
/// to `visit` until it returns `true`; that isomorphism is returned.
pub fn for_each_isomorphism<F>(
    g: &GroupRef,
    h: &GroupRef,
    limits: &Limits,
    visit: F,
) -> Result<Option<GroupHom>>
where
    F: FnMut(&GroupHom) -> bool,
{
    for grp in [g, h] {
        if grp.order() > limits.search_limit {
            return Err(GroupError::limit(
                "isomorphism search order",
                limits.search_limit as u128,
            ));
        }
    }
    if g.order() != h.order() {
        return Ok(None);
    }
    let inv_g = element_invariants(g);
    let inv_h = element_invariants(h);
    let census = |inv: &[(u64, usize)]| {
        let mut m: BTreeMap<(u64, usize), usize> = BTreeMap::new();
        for &k in inv {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    };
    if census(&inv_g) != census(&inv_h) {
        return Ok(None);
    }
    if g.is_trivial() {
        let hom = GroupHom::new(g.clone(), h.clone(), vec![0])?;
        let mut visit = visit;
        return Ok(visit(&hom).then_some(hom));
    }
    let gens = small_generating_set(g);
    let candidates = gens
        .iter()
        .map(|&x| (0..h.order()).filter(|&y| inv_h[y] == inv_g[x]).collect())
        .collect();
    let levels = plan_levels(g, &gens);
    let mut search = IsoSearch {
        g,
        h,
        gens,
        candidates,
        levels,
        images: vec![0; g.order()],
        chosen: Vec::new(),
        stamp: vec![0; h.order()],
        epoch: 0,
        nodes: 0,
        budget: limits.search_nodes,
        visit,
    };
    search.run(0)
}

/// First isomorphism `G -> H` found, fully validated, or `None`.
pub fn is_isomorphic(g: &GroupRef, h: &GroupRef, limits: &Limits) -> Result<Option<GroupHom>> {
    let found = for_each_isomorphism(g, h, limits, |_| true)?;
    if let Some(iso) = &found {
        iso.validate()?;
        assert!(iso.is_bijective());
    }
    Ok(found)
}

/// A complement to a normal subgroup, with the search statistics.
#[derive(Clone, Debug)]
pub struct Complement {
    pub subgroup: Subgroup,
    pub nodes: u64,
}

/// Finds `H ≤ G` with `H ∩ A = 1` and `|H||A| = |G|`, or proves none exists.
///
/// Every complement maps isomorphically onto `Q = G/A`, so it is generated by
/// lifts `t_j a_j` of a fixed generating sequence `t_j A` of `Q`. The search
/// runs over the choices `a_j ∈ A` in canonical order, pruning whenever the
/// lifts chosen so far generate more than their image in `Q`. Exhausting the
/// tree is a proof of absence.
pub fn find_complement(
    g: &FiniteGroup,
    a: &Subgroup,
    limits: &Limits,
) -> Result<Option<Complement>> {
    if g.order() > limits.search_limit {
        return Err(GroupError::limit(
            "complement search order",
            limits.search_limit as u128,
        ));
    }
    if !a.is_normal_in(g) {
        return Err(GroupError::NotNormal);
    }
    if a.is_trivial() {
        return Ok(Some(Complement {
            subgroup: Subgroup::whole(g),
            nodes: 0,
        }));
    }
    if a.is_whole() {
        return Ok(Some(Complement {
            subgroup: Subgroup::trivial(g),
            nodes: 0,
        }));
    }
    let a_gens = a.generators(g);
    // Generators of Q, chosen to grow <t_1..t_j>A as fast as possible.
    let mut lifts: Vec<usize> = Vec::new();
    let mut targets: Vec<usize> = Vec::new();
    let mut coset_orders: Vec<u64> = Vec::new();
    let mut covered = a.clone();
    while covered.order() < g.order() {
        let mut best: Option<(usize, Subgroup)> = None;
        for x in 0..g.order() {
            if covered.contains(x) {
                continue;
            }
            let mut trial = lifts.clone();
            trial.push(x);
            trial.extend_from_slice(&a_gens);
            let s = Subgroup::generate(g, &trial);
            if best.as_ref().map_or(true, |(_, b)| s.order() > b.order()) {
                best = Some((x, s));
            }
        }
        let (x, s) = best.unwrap();
        let mut e = 1u64;
        let mut y = x;
        while !a.contains(y) {
            y = g.mul(y, x);
            e += 1;
        }
        lifts.push(x);
        targets.push(s.order() / a.order());
        coset_orders.push(e);
        covered = s;
    }

    struct State<'a> {
        g: &'a FiniteGroup,
        a: &'a Subgroup,
        lifts: &'a [usize],
        targets: &'a [usize],
        coset_orders: &'a [u64],
        chosen: Vec<usize>,
        nodes: u64,
        budget: u64,
    }

    fn descend(st: &mut State, j: usize) -> Result<Option<Subgroup>> {
        if j == st.lifts.len() {
            return Ok(Some(Subgroup::generate(st.g, &st.chosen)));
        }
        let members: Vec<usize> = st.a.members().collect();
        for m in members {
            st.nodes += 1;
            if st.nodes > st.budget {
                return Err(GroupError::limit("complement search nodes", st.budget));
            }
            let h = st.g.mul(st.lifts[j], m);
            if st.g.element_order(h) != st.coset_orders[j] {
                continue;
            }
            st.chosen.push(h);
            let sub = Subgroup::generate(st.g, &st.chosen);
            if sub.order() == st.targets[j] {
                if let Some(found) = descend(st, j + 1)? {
                    return Ok(Some(found));
                }
            }
            st.chosen.pop();
        }
        Ok(None)
    }

    let mut st = State {
        g,
        a,
        lifts: &lifts,
        targets: &targets,
        coset_orders: &coset_orders,
        chosen: Vec::new(),
        nodes: 0,
        budget: limits.search_nodes,
    };
    let found = descend(&mut st, 0)?;
    Ok(found.map(|h| {
        assert!(h.intersection(a).is_trivial() && h.order() * a.order() == g.order());
        Complement {
            subgroup: h,
            nodes: st.nodes,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::{center, normal_subgroups};
    use std::sync::Arc;

    #[test]
    fn self_isomorphism() {
        let g = Arc::new(catalog::symmetric(4));
        let iso = is_isomorphic(&g, &g, &Limits::default()).unwrap().unwrap();
        assert!(iso.is_bijective());
        iso.validate_all_pairs().unwrap();
    }

    #[test]
    fn dihedral_vs_quaternion() {
        let d8 = Arc::new(catalog::dihedral(4));
        let q8 = Arc::new(catalog::quaternion());
        assert!(is_isomorphic(&d8, &q8, &Limits::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn isomorphism_across_representations() {
        let d8 = Arc::new(catalog::dihedral(4));
        let reg = Arc::new(d8.regular_representation());
        let iso = is_isomorphic(&d8, &reg, &Limits::default())
            .unwrap()
            .unwrap();
        iso.validate_all_pairs().unwrap();
    }

    #[test]
    fn counts_automorphisms_of_klein_four() {
        let v4 = Arc::new(catalog::abelian(&[2, 2]));
        let mut count = 0;
        for_each_isomorphism(&v4, &v4, &Limits::default(), |_| {
            count += 1;
            false
        })
        .unwrap();
        assert_eq!(count, 6);
    }

    #[test]
    fn complements() {
        let l = Limits::default();
        let d8 = catalog::dihedral(4);
        let (r, _) = catalog::dihedral_rs(&d8);
        let c4 = Subgroup::generate(&d8, &[r]);
        let h = find_complement(&d8, &c4, &l).unwrap().unwrap();
        assert_eq!(h.subgroup.order(), 2);

        let q8 = catalog::quaternion();
        for n in normal_subgroups(&q8, &l).unwrap() {
            if n.order() == 4 {
                assert!(find_complement(&q8, &n, &l).unwrap().is_none());
            }
        }
        assert!(find_complement(&q8, &center(&q8), &l).unwrap().is_none());
        let t = Subgroup::trivial(&q8);
        assert!(find_complement(&q8, &t, &l)
            .unwrap()
            .unwrap()
            .subgroup
            .is_whole());
    }

    #[test]
    fn complement_of_klein_in_s4() {
        let l = Limits::default();
        let s4 = catalog::symmetric(4);
        let v4 = normal_subgroups(&s4, &l).unwrap()[1].clone();
        let h = find_complement(&s4, &v4, &l).unwrap().unwrap();
        assert_eq!(h.subgroup.order(), 6);
        assert!(!h.subgroup.to_group(&s4).is_abelian());
    }
}
