//! Named groups used throughout the tests and the command line.
//!
//! Constructors panic only on their documented argument ranges; sizes are
//! small enough that the default enumeration limit never triggers.

use crate::group::{close_group, close_group_with_degree, FiniteGroup};
use crate::perm::Permutation;

const CATALOG_MAX: usize = 1 << 22;

fn cycle_perm(degree: usize, cycle: &[u32]) -> Permutation {
    Permutation::from_cycles(degree, &[cycle.to_vec()]).expect("valid cycle")
}

/// Cyclic group of order `n` acting on `n` points (degree 1 for `n = 1`).
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    if n == 1 {
        return FiniteGroup::trivial(1);
    }
    let c: Vec<u32> = (0..n as u32).collect();
    close_group(&[cycle_perm(n, &c)], n).unwrap()
}

/// Direct product of cyclic groups `Z/d_1 x ... x Z/d_k` on `sum d_i` points.
pub fn abelian(orders: &[u64]) -> FiniteGroup {
    let orders: Vec<usize> = orders
        .iter()
        .map(|&d| d as usize)
        .filter(|&d| d > 1)
        .collect();
    let degree: usize = orders.iter().sum::<usize>().max(1);
    let mut gens = Vec::new();
    let mut offset = 0u32;
    for &d in &orders {
        let c: Vec<u32> = (offset..offset + d as u32).collect();
        gens.push(cycle_perm(degree, &c));
        offset += d as u32;
    }
    close_group_with_degree(degree, &gens, CATALOG_MAX).unwrap()
}

/// Dihedral group of order `2n`: symmetries of an `n`-gon for `n ≥ 3`; the
/// Klein four-group on 4 points for `n = 2`; `C2` for `n = 1`.
pub fn dihedral(n: usize) -> FiniteGroup {
    match n {
        0 => panic!("dihedral(0) is undefined"),
        1 => cyclic(2),
        2 => abelian(&[2, 2]),
        _ => {
            let r: Vec<u32> = (0..n as u32).collect();
            let s: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
            close_group(
                &[cycle_perm(n, &r), Permutation::from_images(s).unwrap()],
                2 * n,
            )
            .unwrap()
        }
    }
}

/// The rotation `(0 1 .. n-1)` and the reflection `i -> -i` of [`dihedral`]
/// (for `n ≥ 3`).
pub fn dihedral_rs(g: &FiniteGroup) -> (usize, usize) {
    let n = g.degree();
    let r: Vec<u32> = (0..n as u32).collect();
    let s: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    (
        g.index_of(&cycle_perm(n, &r)).unwrap(),
        g.index_of(&Permutation::from_images(s).unwrap()).unwrap(),
    )
}

pub fn symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    if n == 1 {
        return FiniteGroup::trivial(1);
    }
    let full: Vec<u32> = (0..n as u32).collect();
    close_group(&[cycle_perm(n, &[0, 1]), cycle_perm(n, &full)], CATALOG_MAX).unwrap()
}

pub fn alternating(n: usize) -> FiniteGroup {
    assert!(n >= 1);
    if n < 3 {
        return FiniteGroup::trivial(n);
    }
    let gens: Vec<Permutation> = (2..n as u32).map(|k| cycle_perm(n, &[0, 1, k])).collect();
    close_group(&gens, CATALOG_MAX).unwrap()
}

/// Unit quaternion `±1, ±i, ±j, ±k`, encoded as `4*negative + unit` with
/// unit 0..4 for `1, i, j, k`.
pub(crate) fn quaternion_mul(a: usize, b: usize) -> usize {
    // unit products: row * column, (sign, unit)
    const TABLE: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let (sa, ua) = (a / 4, a % 4);
    let (sb, ub) = (b / 4, b % 4);
    let (s, u) = TABLE[ua][ub];
    4 * ((sa + sb + s) % 2) + u
}

/// The quaternion group in its left regular representation on 8 points,
/// generated by `i` and `j`. Point `x` is the quaternion with code `x`
/// (see [`quaternion_ij`]).
pub fn quaternion() -> FiniteGroup {
    let perm = |q: usize| {
        Permutation::from_images((0..8).map(|x| quaternion_mul(q, x) as u32).collect()).unwrap()
    };
    close_group(&[perm(1), perm(2)], 8).unwrap()
}

/// Indices of `i` and `j` in [`quaternion`].
pub fn quaternion_ij(g: &FiniteGroup) -> (usize, usize) {
    let perm = |q: usize| {
        Permutation::from_images((0..8).map(|x| quaternion_mul(q, x) as u32).collect()).unwrap()
    };
    (g.index_of(&perm(1)).unwrap(), g.index_of(&perm(2)).unwrap())
}

/// Quaternion code of an element of [`quaternion`] (image of the point 0).
pub fn quaternion_code(g: &FiniteGroup, x: usize) -> usize {
    g.element(x).apply(0) as usize
}
