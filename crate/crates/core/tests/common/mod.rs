#![allow(dead_code)]

use std::sync::Arc;

use towergroup::catalog::{abelian, alternating, cyclic, dihedral, quaternion, symmetric};
use towergroup::fqlin::unitriangular;
use towergroup::{GroupRef, Limits};

pub fn heisenberg(p: u64) -> GroupRef {
    unitriangular(3, p, &Limits::default()).unwrap().top().group.clone()
}

/// Small named groups used across the property suites.
pub fn small_catalog() -> Vec<(String, GroupRef)> {
    let mut out: Vec<(String, GroupRef)> = Vec::new();
    for n in 1..=12 {
        out.push((format!("cyc({n})"), Arc::new(cyclic(n))));
    }
    for inv in [&[2u64, 2][..], &[2, 4], &[2, 2, 2], &[3, 3], &[2, 6], &[2, 2, 4], &[4, 4]] {
        out.push((format!("abelian: {inv:?}"), Arc::new(abelian(inv))));
    }
    for n in 3..=8 {
        out.push((format!("dihedral({n})"), Arc::new(dihedral(n))));
    }
    out.push(("q8".into(), Arc::new(quaternion())));
    out.push(("sym(3)".into(), Arc::new(symmetric(3))));
    out.push(("sym(4)".into(), Arc::new(symmetric(4))));
    out.push(("alt(4)".into(), Arc::new(alternating(4))));
    out.push(("heis(3)".into(), heisenberg(3)));
    out
}

/// Every divisibility chain `d_1 | d_2 | ...` with `d_1 ≥ 2` and product at most `bound`.
pub fn chains(bound: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, prod: u64, bound: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let step = prefix.last().copied().unwrap_or(1);
        let mut d = step.max(2);
        while prod * d <= bound {
            prefix.push(d);
            extend(prefix, prod * d, bound, out);
            prefix.pop();
            d += step;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, bound, &mut out);
    out
}
