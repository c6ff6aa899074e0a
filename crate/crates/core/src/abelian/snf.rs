use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{GroupError, Result};

/// Dense integer matrix with exact (arbitrary precision) entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(GroupError::DimensionMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(GroupError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += &self[(i, k)] * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(GroupError::DimensionMismatch(
                "determinant of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Rows `(a, b) <- [[x, y], [z, w]] * (a, b)`.
    fn mix_rows(&mut self, a: usize, b: usize, t: &[BigInt; 4]) {
        for j in 0..self.cols {
            let (u, v) = (self[(a, j)].clone(), self[(b, j)].clone());
            self[(a, j)] = &t[0] * &u + &t[1] * &v;
            self[(b, j)] = &t[2] * &u + &t[3] * &v;
        }
    }

    /// Columns `(a, b) <- (a, b) * [[x, z], [y, w]]`, i.e. the same mix as
    /// [`Self::mix_rows`] applied to columns.
    fn mix_cols(&mut self, a: usize, b: usize, t: &[BigInt; 4]) {
        for i in 0..self.rows {
            let (u, v) = (self[(i, a)].clone(), self[(i, b)].clone());
            self[(i, a)] = &t[0] * &u + &t[1] * &v;
            self[(i, b)] = &t[2] * &u + &t[3] * &v;
        }
    }
}

/// Result of [`smith_normal_form`]: `d = u * m * v`, together with the
/// inverses of the unimodular transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, including ones and zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }
}

/// Bezout step: a unimodular 2x2 matrix sending `(a, b)` to `(gcd, 0)`, and
/// its inverse.
fn bezout(a: &BigInt, b: &BigInt) -> ([BigInt; 4], [BigInt; 4]) {
    if (b % a).is_zero() {
        // elementary transform: leaves the pivot line untouched, so cleared
        // entries stay cleared
        let q = b / a;
        let (one, zero) = (BigInt::one(), BigInt::zero());
        return (
            [one.clone(), zero.clone(), -q.clone(), one.clone()],
            [one.clone(), zero, q, one],
        );
    }
    let e = a.extended_gcd(b);
    let (g, x, y) = (e.gcd, e.x, e.y);
    let (ag, bg) = (a / &g, b / &g);
    let t = [x.clone(), y.clone(), -bg.clone(), ag.clone()];
    let t_inv = [ag, -y, bg, x];
    (t, t_inv)
}

/// Smith normal form over the integers.
///
/// Pivots are cleared with Bezout transforms (determinant 1), so `u` and `v`
/// stay unimodular throughout; divisibility of later entries by the pivot is
/// enforced by folding an offending row into the pivot row.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    if m.rows == 0 || m.cols == 0 {
        return Err(GroupError::InvalidInput("empty matrix".into()));
    }
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        // Move a nonzero entry of the trailing block to (t, t).
        let pivot = (t..r)
            .flat_map(|i| (t..c).map(move |j| (i, j)))
            .filter(|&(i, j)| !d[(i, j)].is_zero())
            .min_by(|&a, &b| d[a].abs().cmp(&d[b].abs()));
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (tr, tr_inv) = bezout(&d[(t, t)], &d[(i, t)]);
                d.mix_rows(t, i, &tr);
                u.mix_rows(t, i, &tr);
                // u_inv <- u_inv * tr^-1 : columns mixed by the transpose pattern
                let tt = [
                    tr_inv[0].clone(),
                    tr_inv[2].clone(),
                    tr_inv[1].clone(),
                    tr_inv[3].clone(),
                ];
                u_inv.mix_cols(t, i, &tt);
                changed = true;
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (tr, tr_inv) = bezout(&d[(t, t)], &d[(t, j)]);
                // columns (t, j) <- (t, j) * tr^T
                d.mix_cols(t, j, &tr);
                v.mix_cols(t, j, &tr);
                // v_inv <- (tr^T)^-1 * v_inv = (tr^-1)^T * v_inv
                let tt = [
                    tr_inv[0].clone(),
                    tr_inv[2].clone(),
                    tr_inv[1].clone(),
                    tr_inv[3].clone(),
                ];
                v_inv.mix_rows(t, j, &tt);
                changed = true;
            }
            if changed {
                continue;
            }
            // Row and column clear; enforce divisibility of the trailing block.
            let p = d[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&d[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    let add = [one.clone(), one.clone(), BigInt::zero(), one.clone()];
                    let add_inv = [one.clone(), -one.clone(), BigInt::zero(), one];
                    d.mix_rows(t, i, &add);
                    u.mix_rows(t, i, &add);
                    let tt = [
                        add_inv[0].clone(),
                        add_inv[2].clone(),
                        add_inv[1].clone(),
                        add_inv[3].clone(),
                    ];
                    u_inv.mix_cols(t, i, &tt);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for j in 0..c {
                d[(t, j)] = -d[(t, j)].clone();
            }
            for j in 0..r {
                u[(t, j)] = -u[(t, j)].clone();
                u_inv[(j, t)] = -u_inv[(j, t)].clone();
            }
        }
    }
    Ok(SmithForm {
        d,
        u,
        v,
        u_inv,
        v_inv,
    })
}

/// Re-multiplies and checks every claim of a Smith form: `u m v = d`, `d`
/// diagonal with a divisibility chain of nonnegative entries, `u`, `v`
/// unimodular, and the stored inverses correct.
pub fn verify_smith_form(m: &IntMatrix, sf: &SmithForm) -> bool {
    let Ok(prod) = sf.u.mul(m).and_then(|x| x.mul(&sf.v)) else {
        return false;
    };
    if prod != sf.d || !sf.d.is_diagonal() {
        return false;
    }
    let diag = sf.d.diagonal();
    if diag.iter().any(|x| x.is_negative()) {
        return false;
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        };
        if !ok {
            return false;
        }
    }
    let unit = |x: Result<BigInt>| x.map(|d| d.abs().is_one()).unwrap_or(false);
    unit(sf.u.determinant())
        && unit(sf.v.determinant())
        && sf.u.mul(&sf.u_inv).ok() == Some(IntMatrix::identity(sf.u.rows()))
        && sf.v.mul(&sf.v_inv).ok() == Some(IntMatrix::identity(sf.v.rows()))
}
