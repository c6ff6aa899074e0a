//! Finite abelian groups in invariant-factor form.

mod snf;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub use snf::{smith_normal_form, verify_smith_form, IntMatrix, SmithForm};

use crate::arith::factorize;
use crate::error::{GroupError, Result};
use crate::group::FiniteGroup;

/// `Z/d_1 ⊕ ... ⊕ Z/d_n` with `2 ≤ d_1 | d_2 | ... | d_n`. The trivial group
/// has no factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(invariant_factors: Vec<u64>) -> Result<AbelianGroup> {
        if invariant_factors.iter().any(|&d| d < 2) {
            return Err(GroupError::InvalidInput(
                "invariant factors must be at least 2".into(),
            ));
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(GroupError::InvalidInput(format!(
                "{invariant_factors:?} is not a divisibility chain"
            )));
        }
        Ok(AbelianGroup {
            factors: invariant_factors,
        })
    }

    pub fn trivial() -> AbelianGroup {
        AbelianGroup { factors: vec![] }
    }

    /// Normalizes an arbitrary direct sum of cyclic groups (orders `≥ 1`)
    /// through its primary decomposition.
    pub fn from_cyclic_orders(orders: &[u64]) -> AbelianGroup {
        let mut powers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &c in orders {
            assert!(c >= 1, "cyclic order must be positive");
            for (p, e) in factorize(c) {
                powers.entry(p).or_default().push(p.pow(e));
            }
        }
        let n = powers.values().map(|v| v.len()).max().unwrap_or(0);
        let mut factors = vec![1u64; n];
        for list in powers.values_mut() {
            list.sort_unstable_by(|a, b| b.cmp(a));
            for (k, &q) in list.iter().enumerate() {
                factors[n - 1 - k] *= q;
            }
        }
        AbelianGroup { factors }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Elementary divisors (prime powers), sorted.
    pub fn primary_decomposition(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .factors
            .iter()
            .flat_map(|&d| factorize(d).into_iter().map(|(p, e)| p.pow(e)))
            .collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for AbelianGroup {
    /// Report literal `abelian: d1,d2,...` (`abelian: 1` when trivial).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "abelian: 1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        write!(f, "abelian: {}", parts.join(","))
    }
}

/// `∧²(A) = ⊕_{i<j} Z/gcd(d_i, d_j)`, which is `⊕_{i<j} Z/d_i` for a
/// divisibility chain, renormalized.
pub fn exterior_square(a: &AbelianGroup) -> AbelianGroup {
    let d = a.invariant_factors();
    let mut cyclic = Vec::new();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            cyclic.push(d[i].gcd(&d[j]));
        }
    }
    AbelianGroup::from_cyclic_orders(&cyclic)
}

/// Invariant factors of an abelian permutation group from its `p`-layers:
/// `log_p |{g : g^{p^k} = 1}|` counts the cyclic `p`-factors of exponent at
/// least `1, 2, ..`, which fixes each `p`-type; the types are then merged by
/// the Chinese remainder theorem.
pub fn abelian_from_group(g: &FiniteGroup) -> Result<AbelianGroup> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let orders: Vec<u64> = (0..g.order()).map(|x| g.element_order(x)).collect();
    let mut prime_powers = Vec::new();
    for (p, e) in factorize(g.order() as u64) {
        let mut layer_logs = vec![0u32];
        let mut pk = 1u64;
        for _ in 1..=e {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let mut log = 0;
            let mut c = count;
            while c > 1 {
                c /= p;
                log += 1;
            }
            layer_logs.push(log);
            if count == p.pow(e) {
                break;
            }
        }
        // at_least[k] = number of cyclic factors of exponent >= k
        let at_least: Vec<u32> = layer_logs.windows(2).map(|w| w[1] - w[0]).collect();
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..at_least[k] - next {
                prime_powers.push(p.pow(k as u32 + 1));
            }
        }
    }
    Ok(AbelianGroup::from_cyclic_orders(&prime_powers))
}

/// An explicit isomorphism `Z/d_1 ⊕ ... ⊕ Z/d_n -> G` for an abelian group.
#[derive(Clone, Debug)]
pub struct AbelianBasis {
    pub structure: AbelianGroup,
    /// Element index of the generator of each cyclic factor.
    pub basis: Vec<usize>,
    /// Coordinates of every element of `G` in that basis.
    pub coordinates: Vec<Vec<u64>>,
}

impl AbelianBasis {
    pub fn element_of(&self, g: &FiniteGroup, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.basis)
            .fold(0, |acc, (&c, &b)| g.mul(acc, g.pow(b, c as i64)))
    }

    /// Index of a coordinate vector in mixed radix (first coordinate fastest).
    pub fn linear_index(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for (c, d) in coords.iter().zip(self.structure.invariant_factors()).rev() {
            idx = idx * *d as usize + *c as usize;
        }
        idx
    }
}

/// Inserts `row` into an integer row-echelon lattice basis.
fn insert_relation(basis: &mut Vec<Vec<BigInt>>, mut row: Vec<BigInt>) {
    let k = row.len();
    for col in 0..k {
        if row[col].is_zero() {
            continue;
        }
        match basis
            .iter()
            .position(|b| b[..col].iter().all(|x| x.is_zero()) && !b[col].is_zero())
        {
            None => {
                basis.push(row);
                basis.sort_by_key(|b| b.iter().position(|x| !x.is_zero()).unwrap_or(k));
                return;
            }
            Some(pos) => {
                let b = basis[pos].clone();
                let e = b[col].extended_gcd(&row[col]);
                let (bg, rg) = (&b[col] / &e.gcd, &row[col] / &e.gcd);
                let new_pivot: Vec<BigInt> =
                    (0..k).map(|j| &e.x * &b[j] + &e.y * &row[j]).collect();
                let reduced: Vec<BigInt> = (0..k).map(|j| &bg * &row[j] - &rg * &b[j]).collect();
                basis[pos] = new_pivot;
                row = reduced;
            }
        }
    }
}

/// Explicit cyclic decomposition of an abelian group: relations among the
/// generators are read off the Cayley graph, and the Smith form of the
/// relation lattice gives the new basis. Every element's coordinates are
/// checked against the basis before returning.
pub fn abelian_basis(g: &FiniteGroup) -> Result<AbelianBasis> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    if g.is_trivial() {
        return Ok(AbelianBasis {
            structure: AbelianGroup::trivial(),
            basis: vec![],
            coordinates: vec![vec![]],
        });
    }
    let gens = g.generators().to_vec();
    let k = gens.len();
    let mut word: Vec<Option<Vec<i64>>> = vec![None; g.order()];
    word[0] = Some(vec![0; k]);
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let wx = word[x].clone().unwrap();
        for (j, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let mut wy = wx.clone();
            wy[j] += 1;
            match &word[y] {
                None => {
                    word[y] = Some(wy);
                    queue.push_back(y);
                }
                Some(existing) => {
                    let rel: Vec<BigInt> = wy
                        .iter()
                        .zip(existing)
                        .map(|(a, b)| BigInt::from(a - b))
                        .collect();
                    if rel.iter().any(|r| !r.is_zero()) {
                        insert_relation(&mut relations, rel);
                    }
                }
            }
        }
    }
    let mut m = IntMatrix::zeros(relations.len(), k);
    for (i, r) in relations.iter().enumerate() {
        for j in 0..k {
            m[(i, j)] = r[j].clone();
        }
    }
    let sf = smith_normal_form(&m)?;
    let diag = sf.diagonal();
    if diag.len() < k || diag.iter().any(|d| d.is_zero()) {
        return Err(GroupError::InvalidInput(
            "relation lattice is not of full rank".into(),
        ));
    }
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] > BigInt::from(1)).collect();
    let factors: Vec<u64> = keep.iter().map(|&i| diag[i].to_u64().unwrap()).collect();
    let structure = AbelianGroup::new(factors.clone())?;
    let basis: Vec<usize> = keep
        .iter()
        .map(|&i| {
            (0..k).fold(0, |acc, j| {
                let e = sf.v_inv[(i, j)].mod_floor(&BigInt::from(g.element_order(gens[j])));
                g.mul(acc, g.pow(gens[j], e.to_i64().unwrap()))
            })
        })
        .collect();
    let coordinates: Vec<Vec<u64>> = word
        .iter()
        .map(|w| {
            let w = w.as_ref().unwrap();
            keep.iter()
                .zip(&factors)
                .map(|(&i, &d)| {
                    let y: BigInt = (0..k).map(|j| BigInt::from(w[j]) * &sf.v[(j, i)]).sum();
                    y.mod_floor(&BigInt::from(d)).to_u64().unwrap()
                })
                .collect()
        })
        .collect();
    let result = AbelianBasis {
        structure,
        basis,
        coordinates,
    };
    for x in 0..g.order() {
        if result.element_of(g, &result.coordinates[x]) != x {
            return Err(GroupError::InvalidInput(
                "basis reconstruction failed".into(),
            ));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::{center, quotient_group};
    use std::sync::Arc;

    fn ab(f: &[u64]) -> AbelianGroup {
        AbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(AbelianGroup::from_cyclic_orders(&[2, 3]), ab(&[6]));
        assert_eq!(AbelianGroup::from_cyclic_orders(&[4, 6]), ab(&[2, 12]));
        assert_eq!(
            AbelianGroup::from_cyclic_orders(&[1, 1]),
            AbelianGroup::trivial()
        );
        assert!(AbelianGroup::new(vec![4, 2]).is_err());
        assert!(AbelianGroup::new(vec![1]).is_err());
        assert_eq!(ab(&[2, 12]).primary_decomposition(), vec![2, 3, 4]);
        assert_eq!(ab(&[2, 4]).to_string(), "abelian: 2,4");
    }

    #[test]
    fn exterior_squares() {
        assert_eq!(exterior_square(&ab(&[2])), AbelianGroup::trivial());
        assert_eq!(exterior_square(&ab(&[2, 2])), ab(&[2]));
        assert_eq!(exterior_square(&ab(&[2, 2, 2])), ab(&[2, 2, 2]));
        assert_eq!(exterior_square(&ab(&[2, 4, 4])), ab(&[2, 2, 4]));
    }

    #[test]
    fn structure_from_groups() {
        assert_eq!(abelian_from_group(&catalog::cyclic(6)).unwrap(), ab(&[6]));
        assert_eq!(
            abelian_from_group(&catalog::abelian(&[2, 4])).unwrap(),
            ab(&[2, 4])
        );
        let q8 = Arc::new(catalog::quaternion());
        let q = quotient_group(&q8, &center(&q8)).unwrap();
        assert_eq!(abelian_from_group(&q.group).unwrap(), ab(&[2, 2]));
        assert_eq!(abelian_from_group(&q8).unwrap_err(), GroupError::NotAbelian);
    }

    #[test]
    fn explicit_basis() {
        for f in [
            vec![6u64],
            vec![2, 4],
            vec![2, 2, 2],
            vec![3, 6],
            vec![2, 6, 12],
        ] {
            let g = catalog::abelian(&f);
            let b = abelian_basis(&g).unwrap();
            assert_eq!(b.structure, AbelianGroup::from_cyclic_orders(&f));
            for (&e, &d) in b.basis.iter().zip(b.structure.invariant_factors()) {
                assert_eq!(g.element_order(e), d);
            }
        }
    }
}
