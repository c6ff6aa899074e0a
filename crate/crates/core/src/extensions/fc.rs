use std::sync::Arc;

use crate::abelian::{exterior_square, AbelianGroup};
use crate::error::{GroupError, Result};
use crate::group::{close_group_with_degree, FiniteGroup, GroupRef};
use crate::perm::Permutation;

/// Exhaustive pairwise checks run up to this order; above it the commutator
/// identity is proved from the generators (see [`FcGroup::verify`]).
pub const FC_PAIRWISE_LIMIT: usize = 256;

/// An element `(a, z)` of `F^c(A)`: `a` in invariant-factor coordinates of
/// `A`, `z` in the coordinates `e_i ∧ e_j` (`i < j`) of `∧²A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FcElement {
    pub a: Vec<u64>,
    pub z: Vec<u64>,
}

/// The free central extension `1 -> ∧²A -> F^c(A) -> A -> 1` as an explicit
/// class-2 cocycle group: `(a, z)(a', z') = (a + a', z + z' + β(a, a'))` with
/// the bilinear cocycle `β(e_i, e_j) = e_i ∧ e_j` for `i < j` and `0`
/// otherwise. Commutators are `[(a, z), (a', z')] = (0, a ∧ a')`.
#[derive(Clone, Debug)]
pub struct FcGroup {
    base: AbelianGroup,
    commutator_part: AbelianGroup,
    /// Basis pairs `(i, j)`, `i < j`, one per `∧²` coordinate.
    pairs: Vec<(usize, usize)>,
    /// Modulus of each `∧²` coordinate: `gcd(d_i, d_j) = d_i`.
    pair_moduli: Vec<u64>,
}

impl FcGroup {
    pub fn new(base: AbelianGroup) -> FcGroup {
        let d = base.invariant_factors().to_vec();
        let mut pairs = Vec::new();
        let mut pair_moduli = Vec::new();
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                pairs.push((i, j));
                pair_moduli.push(d[i]);
            }
        }
        let commutator_part = exterior_square(&base);
        FcGroup {
            base,
            commutator_part,
            pairs,
            pair_moduli,
        }
    }

    pub fn base(&self) -> &AbelianGroup {
        &self.base
    }

    pub fn commutator_part(&self) -> &AbelianGroup {
        &self.commutator_part
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn order(&self) -> u128 {
        self.base.order() as u128 * self.commutator_part.order() as u128
    }

    fn moduli_a(&self) -> &[u64] {
        self.base.invariant_factors()
    }

    pub fn identity(&self) -> FcElement {
        FcElement {
            a: vec![0; self.moduli_a().len()],
            z: vec![0; self.pairs.len()],
        }
    }

    /// Lift `(e_k, 0)` of the `k`-th basis vector of `A`.
    pub fn basis_lift(&self, k: usize) -> FcElement {
        let mut e = self.identity();
        e.a[k] = 1 % self.moduli_a()[k];
        e
    }

    /// Central element `(0, e_i ∧ e_j)` for the `p`-th pair.
    pub fn central_basis(&self, p: usize) -> FcElement {
        let mut e = self.identity();
        e.z[p] = 1;
        e
    }

    pub fn lift(&self, a: &[u64]) -> FcElement {
        FcElement {
            a: a.to_vec(),
            z: vec![0; self.pairs.len()],
        }
    }

    /// `β(a, a')` in `∧²` coordinates.
    pub fn cocycle(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pairs
            .iter()
            .zip(&self.pair_moduli)
            .map(|(&(i, j), &m)| (a[i] % m) * (b[j] % m) % m)
            .collect()
    }

    /// `a ∧ a'` in `∧²` coordinates.
    pub fn wedge(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.pairs
            .iter()
            .zip(&self.pair_moduli)
            .map(|(&(i, j), &m)| {
                let plus = (a[i] % m) * (b[j] % m) % m;
                let minus = (a[j] % m) * (b[i] % m) % m;
                (plus + m - minus) % m
            })
            .collect()
    }

    pub fn mul(&self, x: &FcElement, y: &FcElement) -> FcElement {
        let beta = self.cocycle(&x.a, &y.a);
        FcElement {
            a: x.a
                .iter()
                .zip(&y.a)
                .zip(self.moduli_a())
                .map(|((u, v), d)| (u + v) % d)
                .collect(),
            z: (0..self.pairs.len())
                .map(|p| (x.z[p] + y.z[p] + beta[p]) % self.pair_moduli[p])
                .collect(),
        }
    }

    /// `(a, z)^-1 = (-a, -z + β(a, a))`.
    pub fn inv(&self, x: &FcElement) -> FcElement {
        let beta = self.cocycle(&x.a, &x.a);
        FcElement {
            a: x.a
                .iter()
                .zip(self.moduli_a())
                .map(|(u, d)| (d - u % d) % d)
                .collect(),
            z: (0..self.pairs.len())
                .map(|p| {
                    let m = self.pair_moduli[p];
                    (m - x.z[p] % m + beta[p]) % m
                })
                .collect(),
        }
    }

    /// `[x, y] = x^-1 y^-1 x y` through the group law.
    pub fn commutator(&self, x: &FcElement, y: &FcElement) -> FcElement {
        let yx = self.mul(y, x);
        let xy = self.mul(x, y);
        self.mul(&self.inv(&yx), &xy)
    }

    /// Mixed-radix index: `a` coordinates first (fastest), then `z`.
    pub fn encode(&self, x: &FcElement) -> usize {
        let mut idx = 0usize;
        for (c, m) in x.z.iter().zip(&self.pair_moduli).rev() {
            idx = idx * *m as usize + *c as usize;
        }
        for (c, d) in x.a.iter().zip(self.moduli_a()).rev() {
            idx = idx * *d as usize + *c as usize;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> FcElement {
        let mut a = Vec::with_capacity(self.moduli_a().len());
        for &d in self.moduli_a() {
            a.push((idx % d as usize) as u64);
            idx /= d as usize;
        }
        let mut z = Vec::with_capacity(self.pairs.len());
        for &m in &self.pair_moduli {
            z.push((idx % m as usize) as u64);
            idx /= m as usize;
        }
        FcElement { a, z }
    }

    pub fn elements(&self) -> impl Iterator<Item = FcElement> + '_ {
        (0..self.order() as usize).map(|i| self.decode(i))
    }

    /// Subgroup of `∧²` generated by the commutators of the basis lifts,
    /// enumerated in `z` coordinates. Equals the derived subgroup, since the
    /// lifts generate and the commutator pairing lands in the center.
    pub fn derived_order(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let id = self.identity();
        seen.insert(id.z.clone());
        let mut frontier = vec![id.z];
        let n = self.moduli_a().len();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = self.commutator(&self.basis_lift(i), &self.basis_lift(j));
                debug_assert!(c.a.iter().all(|&x| x == 0));
                gens.push(c.z);
            }
        }
        while let Some(z) = frontier.pop() {
            for g in &gens {
                let next: Vec<u64> = z
                    .iter()
                    .zip(g)
                    .zip(&self.pair_moduli)
                    .map(|((u, v), m)| (u + v) % m)
                    .collect();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }

    /// Checks the defining properties.
    ///
    /// Up to [`FC_PAIRWISE_LIMIT`] elements: associativity on all triples
    /// with a generator as third factor (which implies associativity, as the
    /// generators reach every element) and the commutator identity on all
    /// pairs. Above it: associativity and the commutator identity against
    /// every generator, plus centrality of `{0} x ∧²A`; in a class-2 group
    /// `[x, y y'] = [x, y][x, y']`, which extends the generator case to all
    /// pairs. In both modes the derived subgroup must have order `|∧²A|`.
    pub fn verify(&self) -> Result<()> {
        let n = self.moduli_a().len();
        let gens: Vec<FcElement> = (0..n)
            .map(|k| self.basis_lift(k))
            .chain((0..self.pairs.len()).map(|p| self.central_basis(p)))
            .collect();
        let fail = |msg: String| Err(GroupError::InvalidInput(format!("F^c model: {msg}")));
        let order = self.order() as usize;
        let elems: Vec<FcElement> = self.elements().collect();
        let pairwise = if order <= FC_PAIRWISE_LIMIT {
            &elems[..]
        } else {
            &[]
        };
        for x in &elems {
            for y in pairwise {
                for g in &gens {
                    let lhs = self.mul(&self.mul(x, y), g);
                    let rhs = self.mul(x, &self.mul(y, g));
                    if lhs != rhs {
                        return fail(format!("associativity fails at {x:?} {y:?} {g:?}"));
                    }
                }
                let c = self.commutator(x, y);
                if c.a.iter().any(|&v| v != 0) || c.z != self.wedge(&x.a, &y.a) {
                    return fail(format!("commutator identity fails at {x:?} {y:?}"));
                }
            }
            for g in &gens {
                let c = self.commutator(x, g);
                if c.a.iter().any(|&v| v != 0) || c.z != self.wedge(&x.a, &g.a) {
                    return fail(format!("commutator identity fails at {x:?} {g:?}"));
                }
                if x.a.iter().all(|&v| v == 0) && self.mul(x, g) != self.mul(g, x) {
                    return fail(format!("{x:?} is not central"));
                }
            }
            if self.mul(x, &self.inv(x)) != self.identity() {
                return fail(format!("inverse fails at {x:?}"));
            }
        }
        if self.derived_order() as u64 != self.commutator_part.order() {
            return fail("derived subgroup order differs from |∧²A|".into());
        }
        Ok(())
    }

    /// Left regular representation on `|F^c|` points; element `x` of the
    /// permutation group sends point `0` to `encode(x)`.
    pub fn permutation_group(&self, max_order: usize) -> Result<FiniteGroup> {
        let order = self.order();
        if order > max_order as u128 {
            return Err(GroupError::limit("F^c order", max_order as u128));
        }
        let order = order as usize;
        let elems: Vec<FcElement> = self.elements().collect();
        let n = self.moduli_a().len();
        let gens: Vec<Permutation> = (0..n)
            .map(|k| {
                let g = self.basis_lift(k);
                Permutation::from_images_unchecked(
                    elems
                        .iter()
                        .map(|y| self.encode(&self.mul(&g, y)) as u32)
                        .collect(),
                )
            })
            .collect();
        close_group_with_degree(order, &gens, max_order)
    }

    /// Cocycle element represented by a member of [`Self::permutation_group`].
    pub fn element_of_perm(&self, p: &Permutation) -> FcElement {
        self.decode(p.apply(0) as usize)
    }
}

/// Builds `F^c(A)`, verifies it, and realizes it as a permutation group.
pub fn fc_model(base: &AbelianGroup, max_order: usize) -> Result<(FcGroup, GroupRef)> {
    let fc = FcGroup::new(base.clone());
    if fc.order() > max_order as u128 {
        return Err(GroupError::limit("F^c order", max_order as u128));
    }
    fc.verify()?;
    let g = fc.permutation_group(max_order)?;
    Ok((fc, Arc::new(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center, derived_subgroup};

    fn ab(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn cyclic_base_is_abelian() {
        let (fc, g) = fc_model(&ab(&[2]), 1000).unwrap();
        assert_eq!(fc.order(), 2);
        assert!(g.is_abelian());
    }

    #[test]
    fn klein_base_gives_order_eight() {
        let (fc, g) = fc_model(&ab(&[2, 2]), 1000).unwrap();
        assert_eq!(fc.order(), 8);
        assert_eq!(g.order(), 8);
        assert_eq!(derived_subgroup(&g).order(), 2);
        assert_eq!(center(&g).order(), 2);
    }

    #[test]
    fn heisenberg_mod_three() {
        let (_, g) = fc_model(&ab(&[3, 3]), 1000).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 3);
        assert_eq!(derived_subgroup(&g).order(), 3);
        assert_eq!(center(&g).order(), 3);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let fc = FcGroup::new(ab(&[2, 4, 4]));
        for i in 0..fc.order() as usize {
            assert_eq!(fc.encode(&fc.decode(i)), i);
        }
        assert_eq!(fc.encode(&fc.identity()), 0);
    }

    #[test]
    fn large_model_uses_generator_proof() {
        let fc = FcGroup::new(ab(&[4, 4, 4]));
        assert_eq!(fc.order(), 4096);
        fc.verify().unwrap();
        assert_eq!(fc.derived_order(), 64);
    }

    #[test]
    fn limit_is_enforced() {
        assert!(fc_model(&ab(&[4, 4, 4]), 1000).unwrap_err().is_limit());
    }
}
