//! Matrix groups over small finite fields, realized as permutation groups:
//! `GL` and `SL` on nonzero vectors, `PGL` and `PSL` on projective points.

use std::sync::Arc;

use crate::arith::{factorize, valuation};
use crate::catalog::symmetric;
use crate::error::{GroupError, Result};
use crate::group::{
    close_group_with_degree, is_isomorphic, quotient_group, sylow_subgroup,
    GroupHom, GroupRef, Subgroup,
};
use crate::limits::Limits;
use crate::perm::Permutation;
use crate::special::{build_step, is_special, verify_certificate, SpecialCertificate, SpecialOutcome};

/// Largest field size accepted by [`FqField::new`].
pub const DEFAULT_MAX_FIELD: u64 = 16;

/// `F_q` for `q = p^m`, elements encoded as integers `0..q` whose base-`p`
/// digits are polynomial coefficients (constant term first).
#[derive(Clone, Debug)]
pub struct FqField {
    p: u64,
    m: u32,
    /// Monic irreducible modulus, constant term first, length `m + 1`.
    modulus: Vec<u64>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    primitive: u8,
}

fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let f = top * lead_inv % p;
            let shift = a.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - f * c % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero residue modulo a prime")
}

fn digits(mut x: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Irreducibility by trial division by every monic polynomial of degree
/// at most `deg f / 2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FqField {
    pub fn new(q: u64) -> Result<FqField> {
        FqField::with_bound(q, DEFAULT_MAX_FIELD)
    }

    pub fn with_bound(q: u64, max_q: u64) -> Result<FqField> {
        if q > max_q {
            return Err(GroupError::limit("field size", max_q as u128));
        }
        let f = factorize(q);
        if f.len() != 1 {
            return Err(GroupError::InvalidInput(format!("{q} is not a prime power")));
        }
        let (p, m) = f[0];
        // first monic irreducible of degree m in lexicographic order
        let modulus = (0..p.pow(m))
            .map(|low| {
                let mut g = digits(low, p, m as usize);
                g.push(1);
                g
            })
            .find(|g| is_irreducible(g, p))
            .expect("irreducible polynomials exist in every degree");
        let qs = q as usize;
        let encode = |c: &[u64]| c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u8;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, m as usize);
            for b in 0..q {
                let db = digits(b, p, m as usize);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&sum);
                let mut prod = vec![0u64; 2 * m as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(prod, &modulus, p);
                r.resize(m as usize, 0);
                mul[a as usize * qs + b as usize] = encode(&r);
            }
        }
        let neg = (0..qs)
            .map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..qs)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8
                }
            })
            .collect();
        let mut field = FqField {
            p,
            m,
            modulus,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        field.primitive = (1..q as u8)
            .find(|&x| field.multiplicative_order(x) == q - 1)
            .expect("the multiplicative group is cyclic");
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> u8 {
        self.primitive
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.order() as usize + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.order() as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `0` for `0`.
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    fn multiplicative_order(&self, x: u8) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != 1 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// `1, ω, ..., ω^{m-1}`: an additive basis over the prime field.
    fn additive_basis(&self) -> Vec<u8> {
        let mut out = vec![1u8];
        for _ in 1..self.m {
            out.push(self.mul(*out.last().unwrap(), self.primitive));
        }
        out
    }
}

/// An `n x n` matrix over `F_q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatFq {
    pub n: usize,
    pub entries: Vec<u8>,
}

impl MatFq {
    pub fn identity(n: usize) -> MatFq {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        MatFq { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, f: &FqField, other: &MatFq) -> MatFq {
        let n = self.n;
        let mut out = MatFq { n, entries: vec![0; n * n] };
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn apply(&self, f: &FqField, v: &[u8]) -> Vec<u8> {
        (0..self.n)
            .map(|i| (0..self.n).fold(0, |acc, k| f.add(acc, f.mul(self.get(i, k), v[k]))))
            .collect()
    }

    pub fn determinant(&self, f: &FqField) -> u8 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1u8;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if r != c {
                for j in 0..n {
                    a.swap(r * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pivot = a[c * n + c];
            det = f.mul(det, pivot);
            let pinv = f.inv(pivot);
            for r2 in c + 1..n {
                let factor = f.mul(a[r2 * n + c], pinv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let sub = f.mul(factor, a[c * n + j]);
                    a[r2 * n + j] = f.add(a[r2 * n + j], f.neg(sub));
                }
            }
        }
        det
    }

    /// Canonical representative of the scalar class: first nonzero entry 1.
    pub fn projective_canonical(&self, f: &FqField) -> MatFq {
        let lead = *self.entries.iter().find(|&&x| x != 0).expect("nonzero matrix");
        let s = f.inv(lead);
        MatFq {
            n: self.n,
            entries: self.entries.iter().map(|&x| f.mul(s, x)).collect(),
        }
    }

    pub fn scale(&self, f: &FqField, s: u8) -> MatFq {
        MatFq {
            n: self.n,
            entries: self.entries.iter().map(|&x| f.mul(s, x)).collect(),
        }
    }
}

/// Which points a matrix group acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSet {
    /// Nonzero vectors of `F_q^n`; point index is the base-`q` value minus 1.
    Vectors,
    /// Projective points, represented by vectors whose first nonzero
    /// coordinate is 1, in increasing base-`q` order.
    Projective,
}

/// A matrix group with its field and point set, so permutations can be
/// turned back into matrices.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub field: Arc<FqField>,
    pub n: usize,
    pub points: PointSet,
    pub group: GroupRef,
    point_vectors: Vec<Vec<u8>>,
}

impl MatrixGroup {
    fn vector_of(&self, x: usize) -> &[u8] {
        &self.point_vectors[x]
    }

    /// A matrix inducing element `x` (for `Projective`, a representative
    /// with first nonzero entry 1).
    pub fn matrix(&self, x: usize) -> MatFq {
        let f = &self.field;
        let q = f.order();
        let p = self.group.element(x);
        let n = self.n;
        let mut m = MatFq { n, entries: vec![0; n * n] };
        match self.points {
            PointSet::Vectors => {
                for j in 0..n {
                    let e = (q.pow(j as u32) - 1) as u32;
                    let col = self.vector_of(p.apply(e) as usize);
                    for i in 0..n {
                        m.set(i, j, col[i]);
                    }
                }
            }
            PointSet::Projective => {
                // images of e_j and of e_0 + ... + e_{n-1} fix the scalars
                let pos = |v: &[u8]| self.point_index(v).unwrap();
                let cols: Vec<Vec<u8>> = (0..n)
                    .map(|j| {
                        let mut e = vec![0u8; n];
                        e[j] = 1;
                        self.vector_of(p.apply(pos(&e) as u32) as usize).to_vec()
                    })
                    .collect();
                let all = self.vector_of(p.apply(pos(&vec![1u8; n]) as u32) as usize).to_vec();
                // solve sum_j c_j cols[j] = all for scalars c_j
                let mut mat = MatFq { n, entries: vec![0; n * n] };
                for (j, c) in cols.iter().enumerate() {
                    for i in 0..n {
                        mat.set(i, j, c[i]);
                    }
                }
                let c = solve(f, &mat, &all);
                for j in 0..n {
                    for i in 0..n {
                        m.set(i, j, f.mul(c[j], cols[j][i]));
                    }
                }
                m = m.projective_canonical(f);
            }
        }
        m
    }

    fn point_index(&self, v: &[u8]) -> Option<usize> {
        point_index(&self.field, self.points, v)
    }

    pub fn element_of_matrix(&self, m: &MatFq) -> Option<usize> {
        let perm = matrix_perm(&self.field, self.points, &self.point_vectors, m);
        self.group.index_of(&perm)
    }
}

fn solve(f: &FqField, a: &MatFq, b: &[u8]) -> Vec<u8> {
    let n = a.n;
    let mut aug: Vec<Vec<u8>> = (0..n)
        .map(|i| {
            let mut row: Vec<u8> = (0..n).map(|j| a.get(i, j)).collect();
            row.push(b[i]);
            row
        })
        .collect();
    for c in 0..n {
        let r = (c..n).find(|&r| aug[r][c] != 0).expect("invertible");
        aug.swap(r, c);
        let pinv = f.inv(aug[c][c]);
        for x in aug[c].iter_mut() {
            *x = f.mul(*x, pinv);
        }
        for r2 in 0..n {
            if r2 != c && aug[r2][c] != 0 {
                let factor = aug[r2][c];
                let pivot_row = aug[c].clone();
                for (x, y) in aug[r2].iter_mut().zip(&pivot_row) {
                    *x = f.add(*x, f.neg(f.mul(factor, *y)));
                }
            }
        }
    }
    aug.iter().map(|row| row[n]).collect()
}

fn vector_value(f: &FqField, v: &[u8]) -> u64 {
    v.iter().rev().fold(0u64, |acc, &d| acc * f.order() + d as u64)
}

fn all_points(f: &FqField, n: usize, points: PointSet) -> Vec<Vec<u8>> {
    let q = f.order();
    (1..q.pow(n as u32))
        .map(|x| digits(x, q, n).into_iter().map(|d| d as u8).collect::<Vec<u8>>())
        .filter(|v| match points {
            PointSet::Vectors => true,
            PointSet::Projective => v.iter().find(|&&x| x != 0) == Some(&1),
        })
        .collect()
}

fn point_index(f: &FqField, points: PointSet, v: &[u8]) -> Option<usize> {
    match points {
        PointSet::Vectors => {
            let val = vector_value(f, v);
            (val > 0).then(|| val as usize - 1)
        }
        PointSet::Projective => {
            let lead = *v.iter().find(|&&x| x != 0)?;
            let s = f.inv(lead);
            let w: Vec<u8> = v.iter().map(|&x| f.mul(s, x)).collect();
            let all = all_points(f, v.len(), PointSet::Projective);
            all.binary_search_by_key(&vector_value(f, &w), |u| vector_value(f, u)).ok()
        }
    }
}

fn matrix_perm(f: &FqField, points: PointSet, pts: &[Vec<u8>], m: &MatFq) -> Permutation {
    let lookup = |v: &[u8]| -> u32 {
        match points {
            PointSet::Vectors => (vector_value(f, v) - 1) as u32,
            PointSet::Projective => {
                let lead = *v.iter().find(|&&x| x != 0).unwrap();
                let s = f.inv(lead);
                let w: Vec<u8> = v.iter().map(|&x| f.mul(s, x)).collect();
                let val = vector_value(f, &w);
                pts.binary_search_by_key(&val, |u| vector_value(f, u)).unwrap() as u32
            }
        }
    };
    Permutation::from_images_unchecked(pts.iter().map(|v| lookup(&m.apply(f, v))).collect())
}

fn matrix_group(
    f: Arc<FqField>,
    n: usize,
    points: PointSet,
    gens: &[MatFq],
    limits: &Limits,
) -> Result<MatrixGroup> {
    let pts = all_points(&f, n, points);
    let perms: Vec<Permutation> = gens.iter().map(|m| matrix_perm(&f, points, &pts, m)).collect();
    let group = Arc::new(close_group_with_degree(pts.len(), &perms, limits.max_order)?);
    Ok(MatrixGroup {
        field: f,
        n,
        points,
        group,
        point_vectors: pts,
    })
}

fn elementary(f: &FqField, n: usize, i: usize, j: usize, a: u8) -> MatFq {
    let mut m = MatFq::identity(n);
    m.set(i, j, f.add(m.get(i, j), a));
    m
}

/// `I + a E_{i,i+1}` and `I + a E_{i+1,i}` for `a` in an additive basis.
fn sl_generators(f: &FqField, n: usize) -> Vec<MatFq> {
    let mut gens = Vec::new();
    for a in f.additive_basis() {
        for i in 0..n.saturating_sub(1) {
            gens.push(elementary(f, n, i, i + 1, a));
            gens.push(elementary(f, n, i + 1, i, a));
        }
    }
    gens
}

fn gl_generators(f: &FqField, n: usize) -> Vec<MatFq> {
    let mut gens = sl_generators(f, n);
    let mut d = MatFq::identity(n);
    d.set(0, 0, f.primitive());
    gens.push(d);
    gens
}

fn gl_order(q: u128, n: u32) -> u128 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Classical orders of `GL_n`, `SL_n`, `PGL_n`, `PSL_n` over `F_q`.
pub fn classical_orders(n: u32, q: u64) -> [u128; 4] {
    let q = q as u128;
    let gl = gl_order(q, n);
    let sl = gl / (q - 1);
    let pgl = sl;
    let psl = sl / gcd(n as u128, q - 1);
    [gl, sl, pgl, psl]
}

fn checked_group(
    f: FqField,
    n: usize,
    points: PointSet,
    gens: Vec<MatFq>,
    expected: u128,
    limits: &Limits,
) -> Result<MatrixGroup> {
    if n == 0 {
        return Err(GroupError::InvalidInput("matrix size must be positive".into()));
    }
    if expected > limits.max_order as u128 {
        return Err(GroupError::limit("matrix group order", limits.max_order as u128));
    }
    let g = matrix_group(Arc::new(f), n, points, &gens, limits)?;
    if g.group.order() as u128 != expected {
        return Err(GroupError::InvalidInput(format!(
            "constructed order {} differs from the classical order {expected}",
            g.group.order()
        )));
    }
    Ok(g)
}

fn field(q: u64) -> Result<FqField> {
    FqField::new(q)
}

pub fn gl(n: usize, q: u64, limits: &Limits) -> Result<MatrixGroup> {
    let f = field(q)?;
    let order = classical_orders(n as u32, q)[0];
    let gens = gl_generators(&f, n);
    checked_group(f, n, PointSet::Vectors, gens, order, limits)
}

pub fn sl(n: usize, q: u64, limits: &Limits) -> Result<MatrixGroup> {
    let f = field(q)?;
    let order = classical_orders(n as u32, q)[1];
    let gens = sl_generators(&f, n);
    checked_group(f, n, PointSet::Vectors, gens, order, limits)
}

pub fn pgl(n: usize, q: u64, limits: &Limits) -> Result<MatrixGroup> {
    let f = field(q)?;
    let order = classical_orders(n as u32, q)[2];
    let gens = gl_generators(&f, n);
    checked_group(f, n, PointSet::Projective, gens, order, limits)
}

pub fn psl(n: usize, q: u64, limits: &Limits) -> Result<MatrixGroup> {
    let f = field(q)?;
    let order = classical_orders(n as u32, q)[3];
    let gens = sl_generators(&f, n);
    checked_group(f, n, PointSet::Projective, gens, order, limits)
}

/// `U_1, ..., U_n` with the truncations `U_r -> U_{r-1}` (forget the last
/// row and column) and the block embeddings `U_{r-1} -> U_r` as sections.
#[derive(Clone, Debug)]
pub struct Unitriangular {
    /// `levels[r - 1] = U_r`.
    pub levels: Vec<MatrixGroup>,
    /// `truncations[r - 2]: U_r -> U_{r-1}` for `r = 2..=n`.
    pub truncations: Vec<GroupHom>,
    pub sections: Vec<GroupHom>,
    pub kernels: Vec<Subgroup>,
}

impl Unitriangular {
    pub fn top(&self) -> &MatrixGroup {
        self.levels.last().unwrap()
    }

    /// Special certificate for `U_n` from the truncation filtration:
    /// `G_i = ker(U_n -> U_{i+1})`, so `G/G_i = U_{i+1}`.
    pub fn certificate(&self) -> Result<SpecialCertificate> {
        let n = self.levels.len();
        let g = self.top().group.clone();
        // projections U_n -> U_r, by composing truncations downwards
        let mut projections: Vec<GroupHom> = vec![GroupHom::identity(g.clone())];
        for r in (1..n).rev() {
            let prev = projections.last().unwrap();
            projections.push(prev.then(&self.truncations[r - 1])?);
        }
        projections.reverse(); // projections[r - 1]: U_n -> U_r
        let mut steps = Vec::new();
        for i in 0..n - 1 {
            let complement = self.sections[i].image();
            steps.push(build_step(
                i,
                projections[i].clone(),
                projections[i + 1].clone(),
                complement,
            )?);
        }
        let chain = projections.iter().map(|p| p.kernel()).collect();
        let cert = SpecialCertificate {
            group: g,
            chain,
            steps,
        };
        verify_certificate(&cert).map_err(GroupError::InvalidInput)?;
        Ok(cert)
    }
}

fn unitriangular_generators(f: &FqField, n: usize) -> Vec<MatFq> {
    let mut gens = Vec::new();
    for a in f.additive_basis() {
        for i in 0..n.saturating_sub(1) {
            gens.push(elementary(f, n, i, i + 1, a));
        }
    }
    gens
}

pub fn unitriangular(n: usize, q: u64, limits: &Limits) -> Result<Unitriangular> {
    if n == 0 {
        return Err(GroupError::InvalidInput("matrix size must be positive".into()));
    }
    let f = Arc::new(field(q)?);
    let order = (q as u128).pow((n * (n - 1) / 2) as u32);
    if order > limits.max_order as u128 {
        return Err(GroupError::limit("unitriangular order", limits.max_order as u128));
    }
    let mut levels = Vec::new();
    for r in 1..=n {
        let u = matrix_group(f.clone(), r, PointSet::Vectors, &unitriangular_generators(&f, r), limits)?;
        let expected = q.pow((r * (r - 1) / 2) as u32) as usize;
        if u.group.order() != expected {
            return Err(GroupError::InvalidInput(format!(
                "U_{r} has order {}, expected {expected}",
                u.group.order()
            )));
        }
        levels.push(u);
    }
    let mut truncations = Vec::new();
    let mut sections = Vec::new();
    let mut kernels = Vec::new();
    for r in 2..=n {
        let (big, small) = (&levels[r - 1], &levels[r - 2]);
        let trunc: Vec<usize> = (0..big.group.order())
            .map(|x| {
                let m = big.matrix(x);
                let t = MatFq {
                    n: r - 1,
                    entries: (0..r - 1)
                        .flat_map(|i| (0..r - 1).map(move |j| (i, j)))
                        .map(|(i, j)| m.get(i, j))
                        .collect(),
                };
                small.element_of_matrix(&t).expect("truncation is unitriangular")
            })
            .collect();
        let trunc = GroupHom::new(big.group.clone(), small.group.clone(), trunc)?;
        let sect: Vec<usize> = (0..small.group.order())
            .map(|x| {
                let t = small.matrix(x);
                let mut m = MatFq::identity(r);
                for i in 0..r - 1 {
                    for j in 0..r - 1 {
                        m.set(i, j, t.get(i, j));
                    }
                }
                big.element_of_matrix(&m).expect("block embedding is unitriangular")
            })
            .collect();
        let sect = GroupHom::new(small.group.clone(), big.group.clone(), sect)?;
        let kernel = trunc.kernel();
        let ok = trunc.is_surjective()
            && kernel.is_abelian(&big.group)
            && kernel.order() == q.pow(r as u32 - 1) as usize
            && (0..small.group.order()).all(|x| trunc.apply(sect.apply(x)) == x);
        if !ok {
            return Err(GroupError::InvalidInput(format!("truncation U_{r} -> U_{} failed", r - 1)));
        }
        truncations.push(trunc);
        sections.push(sect);
        kernels.push(kernel);
    }
    Ok(Unitriangular {
        levels,
        truncations,
        sections,
        kernels,
    })
}

/// Split torus `T` and its normalizer `N(T)` inside `PGL_n(F_q)`.
#[derive(Clone, Debug)]
pub struct TorusNormalizer {
    pub pgl: MatrixGroup,
    pub normalizer: Subgroup,
    pub torus: Subgroup,
    /// `N(T)/T`, checked isomorphic to the symmetric group on `n` points.
    pub weyl_group: GroupRef,
}

pub fn torus_normalizer_split(n: usize, q: u64, limits: &Limits) -> Result<TorusNormalizer> {
    let pg = pgl(n, q, limits)?;
    let f = pg.field.clone();
    let diag: Vec<MatFq> = (0..n)
        .map(|k| {
            let mut d = MatFq::identity(n);
            d.set(k, k, f.primitive());
            d
        })
        .collect();
    let mut perm_mats = Vec::new();
    if n >= 2 {
        let mut swap = MatFq { n, entries: vec![0; n * n] };
        let mut cycle = MatFq { n, entries: vec![0; n * n] };
        for i in 0..n {
            let s = match i {
                0 => 1,
                1 => 0,
                _ => i,
            };
            swap.set(s, i, 1);
            cycle.set((i + 1) % n, i, 1);
        }
        perm_mats.push(swap);
        perm_mats.push(cycle);
    }
    let idx = |m: &MatFq| pg.element_of_matrix(m).expect("invertible matrix");
    let torus_gens: Vec<usize> = diag.iter().map(idx).collect();
    let mut all_gens = torus_gens.clone();
    all_gens.extend(perm_mats.iter().map(idx));
    let torus = Subgroup::generate(&pg.group, &torus_gens);
    let normalizer = Subgroup::generate(&pg.group, &all_gens);
    let ng = Arc::new(normalizer.to_group(&pg.group));
    let members: Vec<usize> = normalizer.members().collect();
    let t_in_n: Vec<usize> = torus.members().map(|x| members.binary_search(&x).unwrap()).collect();
    let t_sub = Subgroup::from_elements(&ng, &t_in_n).expect("torus is a subgroup");
    if !t_sub.is_abelian(&ng) || !t_sub.is_normal_in(&ng) {
        return Err(GroupError::InvalidInput("torus is not an abelian normal subgroup".into()));
    }
    let weyl = quotient_group(&ng, &t_sub)?.group;
    let sym = Arc::new(symmetric(n));
    if is_isomorphic(&weyl, &sym, limits)?.is_none() {
        return Err(GroupError::InvalidInput("N(T)/T is not the symmetric group".into()));
    }
    Ok(TorusNormalizer {
        pgl: pg,
        normalizer,
        torus,
        weyl_group: weyl,
    })
}

#[derive(Clone, Debug)]
pub struct SylowLinearReport {
    pub n: usize,
    pub q: u64,
    pub prime: u64,
    pub group_order: usize,
    pub sylow_order: usize,
    pub sylow: GroupRef,
    pub special: SpecialOutcome,
    /// For `ℓ = p`: whether the Sylow subgroup is isomorphic to `U_n(q)`.
    pub unitriangular_match: Option<bool>,
}

/// Sylow `ℓ`-subgroup of `PGL_n(F_q)` and its specialness.
pub fn analyze_sylow_linear(n: usize, q: u64, l: u64, limits: &Limits) -> Result<SylowLinearReport> {
    let pg = pgl(n, q, limits)?;
    let g = &pg.group;
    let s = sylow_subgroup(g, l as usize, limits)?;
    let expected = l.pow(valuation(g.order() as u64, l)) as usize;
    if s.order() != expected {
        return Err(GroupError::InvalidInput("Sylow subgroup has the wrong order".into()));
    }
    let sylow = Arc::new(s.to_group(g));
    let special = is_special(&sylow, limits);
    let unitriangular_match = if l == pg.field.characteristic() {
        let u = unitriangular(n, q, limits)?;
        Some(is_isomorphic(&sylow, &u.top().group, limits)?.is_some())
    } else {
        None
    };
    Ok(SylowLinearReport {
        n,
        q,
        prime: l,
        group_order: g.order(),
        sylow_order: s.order(),
        sylow,
        special,
        unitriangular_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::dihedral;

    #[test]
    fn fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FqField::new(q).unwrap();
            assert!(is_irreducible(f.modulus(), f.characteristic()));
            for a in 1..q as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for a in 0..q as u8 {
                for b in 0..q as u8 {
                    for c in 0..q as u8 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
        assert!(FqField::new(6).is_err());
        assert!(FqField::new(25).unwrap_err().is_limit());
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 1], 2));
    }

    #[test]
    fn classical_group_orders() {
        let lim = Limits::default();
        assert_eq!(gl(2, 2, &lim).unwrap().group.order(), 6);
        assert_eq!(pgl(3, 2, &lim).unwrap().group.order(), 168);
        assert_eq!(psl(2, 5, &lim).unwrap().group.order(), 60);
        assert_eq!(sl(2, 4, &lim).unwrap().group.order(), 60);
        assert_eq!(gl(1, 5, &lim).unwrap().group.order(), 4);
        let p = pgl(2, 3, &lim).unwrap();
        assert_eq!(p.group.order(), 24);
        assert!(is_isomorphic(&p.group, &Arc::new(symmetric(4)), &lim).unwrap().is_some());
    }

    #[test]
    fn matrices_roundtrip() {
        let lim = Limits::default();
        for g in [gl(2, 3, &lim).unwrap(), pgl(2, 4, &lim).unwrap()] {
            for x in 0..g.group.order() {
                let m = g.matrix(x);
                assert_ne!(m.determinant(&g.field), 0);
                assert_eq!(g.element_of_matrix(&m), Some(x));
            }
        }
    }

    #[test]
    fn unitriangular_filtration() {
        let lim = Limits::default();
        let u = unitriangular(3, 2, &lim).unwrap();
        assert_eq!(u.top().group.order(), 8);
        assert!(is_isomorphic(&u.top().group, &Arc::new(dihedral(4)), &lim).unwrap().is_some());
        let cert = u.certificate().unwrap();
        assert_eq!(cert.length(), 2);
        let u3 = unitriangular(3, 3, &lim).unwrap();
        assert_eq!(u3.kernels[1].order(), 9);
        u3.certificate().unwrap();
    }

    #[test]
    fn torus_normalizers() {
        let lim = Limits::default();
        let t = torus_normalizer_split(2, 3, &lim).unwrap();
        assert_eq!(t.normalizer.order(), 4);
        assert_eq!(t.torus.order(), 2);
        let t = torus_normalizer_split(2, 5, &lim).unwrap();
        assert_eq!(t.normalizer.order(), 8);
        let ng = Arc::new(t.normalizer.to_group(&t.pgl.group));
        assert!(is_isomorphic(&ng, &Arc::new(dihedral(4)), &lim).unwrap().is_some());
    }

    #[test]
    fn sylow_reports() {
        let lim = Limits::default();
        let r = analyze_sylow_linear(3, 2, 2, &lim).unwrap();
        assert_eq!(r.sylow_order, 8);
        assert_eq!(r.unitriangular_match, Some(true));
        assert!(r.special.certificate().is_some());
        let r = analyze_sylow_linear(3, 2, 7, &lim).unwrap();
        assert_eq!(r.sylow_order, 7);
        assert!(r.special.certificate().is_some());
        let r = analyze_sylow_linear(2, 3, 2, &lim).unwrap();
        assert_eq!(r.sylow_order, 8);
    }
}
