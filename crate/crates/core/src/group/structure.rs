use std::collections::{BTreeMap, HashSet, VecDeque};
use std::sync::Arc;

use super::{close_group_with_degree, FiniteGroup, GroupHom, GroupRef, Subgroup};
use crate::error::{GroupError, Result};
use crate::limits::Limits;
use crate::perm::Permutation;

pub fn centralizer(g: &FiniteGroup, of: &[usize]) -> Subgroup {
    let members = (0..g.order())
        .filter(|&z| of.iter().all(|&s| g.mul(z, s) == g.mul(s, z)))
        .map(|z| z as u32)
        .collect();
    Subgroup::from_members(g.order(), members)
}

/// Elements commuting with every generator.
pub fn center(g: &FiniteGroup) -> Subgroup {
    centralizer(g, g.generators())
}

/// `{x : x H x^-1 = H}`.
pub fn normalizer(g: &FiniteGroup, h: &Subgroup) -> Subgroup {
    let gens = h.generators(g);
    let members = (0..g.order())
        .filter(|&x| gens.iter().all(|&s| h.contains(g.conjugate(x, s))))
        .map(|x| x as u32)
        .collect();
    Subgroup::from_members(g.order(), members)
}

/// Smallest normal subgroup containing `seed`: the subgroup generated by the
/// seed, enlarged by conjugates under the group generators until stable.
pub(crate) fn normal_closure(g: &FiniteGroup, seed: &[usize]) -> Subgroup {
    let mut gens: Vec<usize> = seed.iter().copied().filter(|&x| x != 0).collect();
    let mut sub = Subgroup::generate(g, &gens);
    loop {
        let mut added = false;
        for k in 0..gens.len() {
            for &s in g.generators() {
                let c = g.conjugate(s, gens[k]);
                if !sub.contains(c) {
                    gens.push(c);
                    sub = Subgroup::generate(g, &gens);
                    added = true;
                }
            }
        }
        if !added {
            return sub;
        }
    }
}

/// Normal closure of the commutators of generator pairs.
pub fn derived_subgroup(g: &FiniteGroup) -> Subgroup {
    let gens = g.generators();
    let mut seed = Vec::new();
    for (k, &a) in gens.iter().enumerate() {
        for &b in &gens[k + 1..] {
            seed.push(g.commutator(a, b));
        }
    }
    normal_closure(g, &seed)
}

/// Derived series `G ≥ G' ≥ G'' ≥ ...` down to the point where it
/// stabilises, each term as a subgroup of `G`.
pub fn derived_series(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().unwrap();
        let as_group = last.to_group(g);
        let d = derived_subgroup(&as_group);
        let members: Vec<u32> = d
            .members()
            .map(|k| g.index_of(as_group.element(k)).unwrap() as u32)
            .collect();
        let next = Subgroup::from_members(g.order(), members);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable(g: &FiniteGroup) -> bool {
    derived_series(g).last().unwrap().is_trivial()
}

/// Conjugacy classes as sorted index lists, ordered by smallest member.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut class_of = vec![usize::MAX; g.order()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..g.order() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut class = vec![start];
        class_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &s in g.generators() {
                let y = g.conjugate(s, x);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    class.push(y);
                    queue.push_back(y);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Element order -> count.
pub fn element_orders(g: &FiniteGroup) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for a in 0..g.order() {
        *out.entry(g.element_order(a)).or_insert(0) += 1;
    }
    out
}

/// All normal subgroups, sorted canonically (by order, then members).
///
/// Normal subgroups are exactly the class-closed subgroups; every one is a
/// join of normal closures of single classes, so joining outward from the
/// trivial subgroup reaches all of them.
pub fn normal_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    if g.order() > limits.search_limit {
        return Err(GroupError::limit(
            "normal subgroup enumeration order",
            limits.search_limit as u128,
        ));
    }
    let classes = conjugacy_classes(g);
    let class_closures: Vec<Subgroup> = classes.iter().map(|c| Subgroup::generate(g, c)).collect();
    let mut found: HashSet<Subgroup> = HashSet::new();
    let trivial = Subgroup::trivial(g);
    found.insert(trivial.clone());
    let mut queue = VecDeque::from([trivial]);
    while let Some(n) = queue.pop_front() {
        for (class, closure) in classes.iter().zip(&class_closures) {
            if n.contains(class[0]) {
                continue;
            }
            let joined = product_of_normal(g, &n, closure);
            if !found.contains(&joined) {
                if found.len() >= limits.max_normal_subgroups {
                    return Err(GroupError::limit(
                        "normal subgroup count",
                        limits.max_normal_subgroups as u128,
                    ));
                }
                found.insert(joined.clone());
                queue.push_back(joined);
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort();
    Ok(out)
}

/// `N M` for normal `N`, `M` (itself a subgroup).
fn product_of_normal(g: &FiniteGroup, n: &Subgroup, m: &Subgroup) -> Subgroup {
    let mut members = Vec::with_capacity(n.order() * m.order());
    let mut seen = vec![false; g.order()];
    for a in n.members() {
        for b in m.members() {
            let c = g.mul(a, b);
            if !seen[c] {
                seen[c] = true;
                members.push(c as u32);
            }
        }
    }
    Subgroup::from_members(g.order(), members)
}

/// A quotient `G/N` realized on the left cosets of `N`, with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: GroupRef,
    pub projection: GroupHom,
}

/// Builds `G/N` as the permutation group induced on left cosets of `N`
/// (degree = index). The projection is validated, surjective, and its kernel
/// is checked to be exactly `N`.
pub fn quotient_group(g: &GroupRef, n: &Subgroup) -> Result<Quotient> {
    if n.parent_order() != g.order() || !n.is_closed_in(g) {
        return Err(GroupError::InvalidInput(
            "not a subgroup of this group".into(),
        ));
    }
    if !n.is_normal_in(g) {
        return Err(GroupError::NotNormal);
    }
    let index = n.index();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::with_capacity(index);
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for m in n.members() {
            coset_of[g.mul(x, m)] = id;
        }
    }
    let action = |x: usize| -> Permutation {
        Permutation::from_images_unchecked(
            reps.iter().map(|&r| coset_of[g.mul(x, r)] as u32).collect(),
        )
    };
    let gen_perms: Vec<Permutation> = g.generators().iter().map(|&s| action(s)).collect();
    let q = Arc::new(close_group_with_degree(index, &gen_perms, index)?);
    let gen_images: Vec<usize> = gen_perms
        .iter()
        .map(|p| q.index_of(p).expect("generator in closure"))
        .collect();
    let projection = GroupHom::from_generator_images(g.clone(), q.clone(), &gen_images)?;
    if projection.kernel() != *n
        || !projection.is_surjective()
        || q.order() * n.order() != g.order()
    {
        return Err(GroupError::InvalidInput(
            "coset action did not produce the expected quotient".into(),
        ));
    }
    Ok(Quotient {
        group: q,
        projection,
    })
}

fn prime_part(mut n: usize, p: usize) -> usize {
    let mut part = 1;
    while n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}

/// A Sylow `p`-subgroup.
///
/// Grows a `p`-subgroup one prime factor at a time: if `P` is not yet Sylow,
/// its normalizer contains some `x ∉ P` with `x^p ∈ P`, and `<P, x>` is a
/// `p`-group of order `p|P|`. The first such `x` in canonical order is
/// taken, so no backtracking is needed and the result is deterministic.
pub fn sylow_subgroup(g: &FiniteGroup, p: usize, limits: &Limits) -> Result<Subgroup> {
    if !crate::arith::is_prime(p as u64) {
        return Err(GroupError::InvalidInput(format!("{p} is not prime")));
    }
    if g.order() > limits.max_order {
        return Err(GroupError::limit(
            "Sylow search order",
            limits.max_order as u128,
        ));
    }
    let target = prime_part(g.order(), p);
    let mut sylow = Subgroup::trivial(g);
    while sylow.order() < target {
        let norm = normalizer(g, &sylow);
        let x = norm
            .members()
            .find(|&x| !sylow.contains(x) && sylow.contains(g.pow(x, p as i64)))
            .expect("a proper p-subgroup grows inside its normalizer");
        sylow = sylow.join_with(g, &[x]);
        debug_assert_eq!(prime_part(sylow.order(), p), sylow.order());
    }
    Ok(sylow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn centers() {
        assert_eq!(center(&catalog::cyclic(6)).order(), 6);
        assert_eq!(center(&catalog::dihedral(4)).order(), 2);
        assert_eq!(center(&catalog::symmetric(3)).order(), 1);
    }

    #[test]
    fn derived_subgroups() {
        assert_eq!(derived_subgroup(&catalog::abelian(&[2, 4])).order(), 1);
        assert_eq!(derived_subgroup(&catalog::quaternion()).order(), 2);
        assert_eq!(derived_subgroup(&catalog::symmetric(4)).order(), 12);
        let series = derived_series(&catalog::symmetric(4));
        let orders: Vec<usize> = series.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![24, 12, 4, 1]);
        assert!(!is_solvable(&catalog::alternating(5)));
    }

    #[test]
    fn class_sizes_of_s4() {
        let mut sizes: Vec<usize> = conjugacy_classes(&catalog::symmetric(4))
            .iter()
            .map(|c| c.len())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 6, 6, 8]);
    }

    #[test]
    fn normal_subgroup_counts() {
        let l = Limits::default();
        let orders = |g: &FiniteGroup| -> Vec<usize> {
            normal_subgroups(g, &l)
                .unwrap()
                .iter()
                .map(|n| n.order())
                .collect()
        };
        assert_eq!(orders(&catalog::quaternion()), vec![1, 2, 4, 4, 4, 8]);
        assert_eq!(orders(&catalog::symmetric(4)), vec![1, 4, 12, 24]);
        assert_eq!(orders(&catalog::cyclic(7)), vec![1, 7]);
    }

    #[test]
    fn normal_subgroups_are_conjugation_stable() {
        let l = Limits::default();
        for g in [
            catalog::dihedral(6),
            catalog::symmetric(4),
            catalog::quaternion(),
        ] {
            for n in normal_subgroups(&g, &l).unwrap() {
                for x in 0..g.order() {
                    assert!(n.members().all(|m| n.contains(g.conjugate(x, m))));
                }
            }
        }
    }

    #[test]
    fn quotients() {
        let q8 = Arc::new(catalog::quaternion());
        let z = center(&q8);
        let q = quotient_group(&q8, &z).unwrap();
        assert_eq!(q.group.order(), 4);
        assert_eq!(q.group.exponent(), 2);
        assert_eq!(q.projection.kernel(), z);

        let s4 = Arc::new(catalog::symmetric(4));
        let v4 = normal_subgroups(&s4, &Limits::default()).unwrap()[1].clone();
        let q = quotient_group(&s4, &v4).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!q.group.is_abelian());

        let t = quotient_group(&s4, &Subgroup::trivial(&s4)).unwrap();
        assert_eq!(t.group.order(), 24);
    }

    #[test]
    fn quotient_by_non_normal_fails() {
        let s3 = Arc::new(catalog::symmetric(3));
        let h = Subgroup::generate(&s3, &[1]);
        assert_eq!(h.order(), 2);
        assert_eq!(quotient_group(&s3, &h).unwrap_err(), GroupError::NotNormal);
    }

    #[test]
    fn sylow_orders() {
        let l = Limits::default();
        let s4 = catalog::symmetric(4);
        assert_eq!(sylow_subgroup(&s4, 2, &l).unwrap().order(), 8);
        assert_eq!(sylow_subgroup(&s4, 3, &l).unwrap().order(), 3);
        assert_eq!(sylow_subgroup(&s4, 5, &l).unwrap().order(), 1);
        assert!(sylow_subgroup(&s4, 4, &l).is_err());
    }
}
