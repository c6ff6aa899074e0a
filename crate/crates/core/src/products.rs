//! Direct, semidirect and regular wreath products, and the iterated-wreath
//! Sylow subgroups of symmetric groups.

use std::sync::Arc;

use crate::arith::{factorize, legendre};
use crate::catalog::cyclic;
use crate::error::{GroupError, Result};
use crate::group::{
    close_group_with_degree, hom_from_images, FiniteGroup, GroupHom, GroupRef, Subgroup,
};
use crate::limits::Limits;
use crate::perm::Permutation;

/// Pairwise checks of the twisted product rule run up to this order.
const SEMIDIRECT_PAIRWISE_LIMIT: usize = 256;

fn shifted(p: &Permutation, offset: u32, degree: usize) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (i, &x) in p.images().iter().enumerate() {
        images[offset as usize + i] = x + offset;
    }
    Permutation::from_images_unchecked(images)
}

/// `G x H` acting on `deg G + deg H` points.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup, limits: &Limits) -> Result<FiniteGroup> {
    if g.order() as u128 * h.order() as u128 > limits.max_order as u128 {
        return Err(GroupError::limit(
            "direct product order",
            limits.max_order as u128,
        ));
    }
    let degree = g.degree() + h.degree();
    let mut gens: Vec<Permutation> = g
        .generator_perms()
        .iter()
        .map(|p| shifted(p, 0, degree))
        .collect();
    gens.extend(
        h.generator_perms()
            .iter()
            .map(|p| shifted(p, g.degree() as u32, degree)),
    );
    close_group_with_degree(degree, &gens, limits.max_order)
}

/// `N ⋊ H` with its two embeddings.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: GroupRef,
    pub normal_embedding: GroupHom,
    pub top_embedding: GroupHom,
}

/// `N ⋊_α H`, where `automorphisms[k]` is the element table of `α(h_gens[k])`
/// on `N`. Each table must be an automorphism and `h ↦ α(h)` must extend to a
/// homomorphism `H -> Aut(N)`; otherwise `NotAnAction`.
///
/// Realized on `|N| + |H|` points: `(n, h)` sends `x ∈ N` to `n α_h(x)` and
/// acts on `H` by left multiplication, so `(n, h)(n', h') = (n α_h(n'), h h')`.
pub fn semidirect_product(
    n: &GroupRef,
    h: &GroupRef,
    h_gens: &[usize],
    automorphisms: &[Vec<usize>],
    limits: &Limits,
) -> Result<SemidirectProduct> {
    if h_gens.len() != automorphisms.len() {
        return Err(GroupError::NotAnAction(
            "one automorphism is needed per generator".into(),
        ));
    }
    if n.order() as u128 * h.order() as u128 > limits.max_order as u128 {
        return Err(GroupError::limit(
            "semidirect product order",
            limits.max_order as u128,
        ));
    }
    let nn = n.order();
    for table in automorphisms {
        let aut = GroupHom::new(n.clone(), n.clone(), table.clone())
            .map_err(|e| GroupError::NotAnAction(format!("not an endomorphism: {e}")))?;
        if !aut.is_bijective() {
            return Err(GroupError::NotAnAction("not bijective".into()));
        }
    }
    let aut_perms: Vec<Permutation> = automorphisms
        .iter()
        .map(|t| Permutation::from_images_unchecked(t.iter().map(|&x| x as u32).collect()))
        .collect();
    let aut_group = Arc::new(close_group_with_degree(nn, &aut_perms, limits.max_order)?);
    let aut_images: Vec<usize> = aut_perms
        .iter()
        .map(|p| aut_group.index_of(p).expect("generator in closure"))
        .collect();
    let alpha = hom_from_images(h.clone(), aut_group.clone(), h_gens, &aut_images)
        .map_err(|e| GroupError::NotAnAction(format!("not a homomorphism into Aut(N): {e}")))?;

    let degree = nn + h.order();
    let element = |x: usize, y: usize| -> Permutation {
        let a = aut_group.element(alpha.apply(y));
        let mut images: Vec<u32> = (0..nn)
            .map(|p| n.mul(x, a.apply(p as u32) as usize) as u32)
            .collect();
        images.extend((0..h.order()).map(|q| (nn + h.mul(y, q)) as u32));
        Permutation::from_images_unchecked(images)
    };
    let mut gens: Vec<Permutation> = n.generators().iter().map(|&x| element(x, 0)).collect();
    gens.extend(h.generators().iter().map(|&y| element(0, y)));
    let group = Arc::new(close_group_with_degree(degree, &gens, limits.max_order)?);
    if group.order() != nn * h.order() {
        return Err(GroupError::NotAnAction(
            "product has the wrong order".into(),
        ));
    }
    let decode = |k: usize| -> (usize, usize) {
        let p = group.element(k);
        (p.apply(0) as usize, p.apply(nn as u32) as usize - nn)
    };
    let check = |k: usize, l: usize| -> bool {
        let (x, y) = decode(k);
        let (x2, y2) = decode(l);
        let twisted = n.mul(
            x,
            aut_group.element(alpha.apply(y)).apply(x2 as u32) as usize,
        );
        decode(group.mul(k, l)) == (twisted, h.mul(y, y2))
    };
    let pairwise = group.order() <= SEMIDIRECT_PAIRWISE_LIMIT;
    for k in 0..group.order() {
        let ok = if pairwise {
            (0..group.order()).all(|l| check(k, l))
        } else {
            group.generators().iter().all(|&l| check(k, l))
        };
        if !ok {
            return Err(GroupError::NotAnAction("twisted product rule fails".into()));
        }
    }
    let normal_embedding = GroupHom::new(
        n.clone(),
        group.clone(),
        (0..nn)
            .map(|x| group.index_of(&element(x, 0)).expect("in product"))
            .collect(),
    )?;
    let top_embedding = GroupHom::new(
        h.clone(),
        group.clone(),
        (0..h.order())
            .map(|y| group.index_of(&element(0, y)).expect("in product"))
            .collect(),
    )?;
    Ok(SemidirectProduct {
        group,
        normal_embedding,
        top_embedding,
    })
}

/// `N ≀ H = N^{|H|} ⋊ H` with `H` permuting the coordinates regularly:
/// `(h·b)_q = b_{h⁻¹q}`.
#[derive(Clone, Debug)]
pub struct WreathProduct {
    pub base: GroupRef,
    pub top: GroupRef,
    /// Acts on `|H|` blocks of `deg N` points; block `q` carries coordinate `q`.
    pub product: GroupRef,
    /// `N` into the coordinate of the identity of `H`.
    pub base_embedding: GroupHom,
    pub top_embedding: GroupHom,
    /// `N^{|H|}`: the elements preserving every block.
    pub base_subgroup: Subgroup,
    /// `K -> H` read off the permutation of blocks; its kernel is the base.
    pub block_projection: GroupHom,
}

pub fn wreath_regular(n: &GroupRef, h: &GroupRef, limits: &Limits) -> Result<WreathProduct> {
    let expected = (n.order() as f64).powi(h.order() as i32) * h.order() as f64;
    if expected > limits.max_order as f64 {
        return Err(GroupError::limit(
            "wreath product order",
            limits.max_order as u128,
        ));
    }
    let expected = n.order().pow(h.order() as u32) * h.order();
    let dn = n.degree();
    let degree = dn * h.order();
    let in_block = |x: usize| shifted(n.element(x), 0, degree);
    let top_perm = |y: usize| {
        let images = (0..degree)
            .map(|p| (h.mul(y, p / dn) * dn + p % dn) as u32)
            .collect();
        Permutation::from_images_unchecked(images)
    };
    let mut gens: Vec<Permutation> = n.generators().iter().map(|&x| in_block(x)).collect();
    gens.extend(h.generators().iter().map(|&y| top_perm(y)));
    let product = Arc::new(close_group_with_degree(degree, &gens, limits.max_order)?);
    if product.order() != expected {
        return Err(GroupError::InvalidInput(format!(
            "wreath product has order {}, expected {expected}",
            product.order()
        )));
    }
    let base_embedding = GroupHom::new(
        n.clone(),
        product.clone(),
        (0..n.order())
            .map(|x| product.index_of(&in_block(x)).expect("in product"))
            .collect(),
    )?;
    let top_embedding = GroupHom::new(
        h.clone(),
        product.clone(),
        (0..h.order())
            .map(|y| product.index_of(&top_perm(y)).expect("in product"))
            .collect(),
    )?;
    let block_projection = GroupHom::new(
        product.clone(),
        h.clone(),
        product
            .elements()
            .iter()
            .map(|p| p.apply(0) as usize / dn)
            .collect(),
    )?;
    let base_subgroup = block_projection.kernel();
    let top_image = top_embedding.image();
    if base_subgroup.order() != n.order().pow(h.order() as u32)
        || !block_projection.is_surjective()
        || !base_embedding.is_injective()
        || !top_image.intersection(&base_embedding.image()).is_trivial()
        || !top_image.intersection(&base_subgroup).is_trivial()
    {
        return Err(GroupError::InvalidInput(
            "wreath product structure check failed".into(),
        ));
    }
    Ok(WreathProduct {
        base: n.clone(),
        top: h.clone(),
        product,
        base_embedding,
        top_embedding,
        base_subgroup,
        block_projection,
    })
}

/// `C_ℓ ≀ ... ≀ C_ℓ` (`k` factors) on `ℓ^k` points; trivial on one point for `k = 0`.
pub fn iterated_wreath(l: usize, k: u32, limits: &Limits) -> Result<GroupRef> {
    let c = Arc::new(cyclic(l));
    let mut w = Arc::new(FiniteGroup::trivial(1));
    for _ in 0..k {
        w = wreath_regular(&w, &c, limits)?.product;
    }
    Ok(w)
}

/// A Sylow `ℓ`-subgroup of the symmetric group on `n` points: for
/// `n = Σ c_k ℓ^k`, the direct product of `c_k` copies of the `k`-fold
/// iterated wreath product of `C_ℓ`, acting on consecutive blocks of points.
/// The order is checked against `ℓ^{v_ℓ(n!)}`.
pub fn sylow_symmetric(n: usize, l: usize, limits: &Limits) -> Result<FiniteGroup> {
    if factorize(l as u64) != [(l as u64, 1)] {
        return Err(GroupError::InvalidInput(format!("{l} is not prime")));
    }
    if n == 0 {
        return Err(GroupError::InvalidInput("n must be positive".into()));
    }
    let v = legendre(n as u64, l as u64);
    if (v as f64) * (l as f64).log2() > (limits.max_order as f64).log2() + 1e-9 {
        return Err(GroupError::limit(
            "Sylow subgroup order",
            limits.max_order as u128,
        ));
    }
    let mut gens = Vec::new();
    let mut offset = 0u32;
    let (mut rest, mut k) = (n, 0u32);
    while rest > 0 {
        let digit = rest % l;
        let block = l.pow(k);
        if k > 0 {
            let w = iterated_wreath(l, k, limits)?;
            for _ in 0..digit {
                gens.extend(w.generator_perms().iter().map(|p| shifted(p, offset, n)));
                offset += block as u32;
            }
        } else {
            offset += digit as u32;
        }
        rest /= l;
        k += 1;
    }
    let g = close_group_with_degree(n, &gens, limits.max_order)?;
    if g.order() != l.pow(v) {
        return Err(GroupError::InvalidInput(format!(
            "constructed order {} differs from {l}^{v}",
            g.order()
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{abelian, dihedral, symmetric};
    use crate::group::{is_isomorphic, sylow_subgroup};

    fn arc(g: FiniteGroup) -> GroupRef {
        Arc::new(g)
    }

    #[test]
    fn direct_product_order() {
        let lim = Limits::default();
        let g = direct_product(&dihedral(4), &cyclic(3), &lim).unwrap();
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn dihedral_as_semidirect() {
        let lim = Limits::default();
        let c3 = arc(cyclic(3));
        let c2 = arc(cyclic(2));
        let inversion: Vec<usize> = (0..3).map(|x| c3.inv(x)).collect();
        let sd = semidirect_product(&c3, &c2, &[1], &[inversion], &lim).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        let trivial: Vec<usize> = (0..3).collect();
        let sd = semidirect_product(&c3, &c2, &[1], &[trivial], &lim).unwrap();
        assert!(sd.group.is_abelian());
    }

    #[test]
    fn bad_action_rejected() {
        let lim = Limits::default();
        let c3 = arc(cyclic(3));
        let c2 = arc(cyclic(2));
        // not a homomorphism
        assert!(matches!(
            semidirect_product(&c3, &c2, &[1], &[vec![0, 0, 1]], &lim),
            Err(GroupError::NotAnAction(_))
        ));
        // an automorphism of order 2 cannot be the image of a generator of C3
        let inversion: Vec<usize> = (0..3).map(|x| c3.inv(x)).collect();
        assert!(matches!(
            semidirect_product(&c3, &c3, &[1], &[inversion], &lim),
            Err(GroupError::NotAnAction(_))
        ));
    }

    #[test]
    fn wreath_examples() {
        let lim = Limits::default();
        let c2 = arc(cyclic(2));
        let c3 = arc(cyclic(3));
        let w = wreath_regular(&c2, &c2, &lim).unwrap();
        assert_eq!(w.product.order(), 8);
        assert!(is_isomorphic(&w.product, &arc(dihedral(4)), &lim)
            .unwrap()
            .is_some());
        assert_eq!(wreath_regular(&c2, &c3, &lim).unwrap().product.order(), 24);
        let t = wreath_regular(&arc(FiniteGroup::trivial(1)), &c3, &lim).unwrap();
        assert!(is_isomorphic(&t.product, &c3, &lim).unwrap().is_some());
    }

    #[test]
    fn sylow_symmetric_matches_search() {
        let lim = Limits::default();
        assert_eq!(sylow_symmetric(6, 3, &lim).unwrap().order(), 9);
        assert_eq!(sylow_symmetric(8, 2, &lim).unwrap().order(), 128);
        let s4 = symmetric(4);
        let p = sylow_subgroup(&s4, 2, &lim).unwrap();
        let built = arc(sylow_symmetric(4, 2, &lim).unwrap());
        assert!(is_isomorphic(&built, &arc(p.to_group(&s4)), &lim)
            .unwrap()
            .is_some());
        assert!(is_isomorphic(&built, &arc(dihedral(4)), &lim)
            .unwrap()
            .is_some());
        assert_eq!(sylow_symmetric(6, 3, &lim).unwrap(), abelian_on(6));
    }

    fn abelian_on(n: usize) -> FiniteGroup {
        // (0 1 2), (3 4 5) on 6 points
        let a = abelian(&[3, 3]);
        assert_eq!(a.degree(), n);
        a
    }
}
