//! Monomial actions `σ(x_i) = c_i · ∏_j x_j^{a_ij}` on rational function
//! field coordinates, and their extraction from projective 2x2 matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::catalog::quaternion_mul;
use crate::error::{GroupError, Result};
use crate::extensions::fc_in_quaternions;
use crate::group::{quotient_group, GroupRef, Subgroup};

/// `re + im·i` with exact rational parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational64,
    pub im: Rational64,
}

impl GaussianRational {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        GaussianRational { re, im }
    }

    pub fn int(re: i64, im: i64) -> Self {
        GaussianRational::new(Rational64::from_integer(re), Rational64::from_integer(im))
    }

    pub fn zero() -> Self {
        GaussianRational::int(0, 0)
    }

    pub fn one() -> Self {
        GaussianRational::int(1, 0)
    }

    pub fn i() -> Self {
        GaussianRational::int(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one_value(&self) -> bool {
        *self == GaussianRational::one()
    }

    pub fn is_unit_sign(&self) -> bool {
        self.im.is_zero() && self.re.abs().is_one()
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = self.re * self.re + self.im * self.im;
        (!norm.is_zero()).then(|| GaussianRational::new(self.re / norm, -self.im / norm))
    }

    /// Integer power; negative exponents invert. `None` for `0^k`, `k < 0`.
    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { *self };
        let mut out = GaussianRational::one();
        for _ in 0..k.unsigned_abs() {
            out = out * base;
        }
        Some(out)
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(*self * other.inv()?)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianRational::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// A 2x2 matrix over the Gaussian rationals, row-major.
pub type Mat2 = [[GaussianRational; 2]; 2];

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[GaussianRational::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `x_i ↦ signs[i] · ∏_j x_j^{exponents[i][j]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialMap {
    pub n: usize,
    pub signs: Vec<GaussianRational>,
    pub exponents: Vec<Vec<i64>>,
}

fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * int_det(&minor)
        })
        .sum()
}

impl MonomialMap {
    pub fn new(signs: Vec<GaussianRational>, exponents: Vec<Vec<i64>>) -> Result<Self> {
        let n = signs.len();
        if exponents.len() != n || exponents.iter().any(|r| r.len() != n) {
            return Err(GroupError::DimensionMismatch(format!(
                "{n} coefficients need an {n}x{n} exponent matrix"
            )));
        }
        if signs.iter().any(GaussianRational::is_zero) {
            return Err(GroupError::InvalidInput("zero coefficient".into()));
        }
        if int_det(&exponents).abs() != 1 {
            return Err(GroupError::InvalidInput("exponent matrix is not in GL_n(Z)".into()));
        }
        Ok(MonomialMap { n, signs, exponents })
    }

    pub fn identity(n: usize) -> Self {
        let exponents = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        MonomialMap {
            n,
            signs: vec![GaussianRational::one(); n],
            exponents,
        }
    }

    /// Coordinatewise map `x_i ↦ c_i x_i^{e_i}`.
    pub fn diagonal(coords: &[(i64, i64)]) -> Result<Self> {
        let n = coords.len();
        let signs = coords.iter().map(|&(c, _)| GaussianRational::int(c, 0)).collect();
        let exponents = (0..n)
            .map(|i| (0..n).map(|j| if i == j { coords[i].1 } else { 0 }).collect())
            .collect();
        MonomialMap::new(signs, exponents)
    }

    pub fn is_identity(&self) -> bool {
        *self == MonomialMap::identity(self.n)
    }

    /// All coefficients in `{±1}`; maps outside this shape are flagged.
    pub fn has_sign_coefficients(&self) -> bool {
        self.signs.iter().all(GaussianRational::is_unit_sign)
    }

    /// Number of coordinates whose image is not `x_i` itself.
    pub fn moved_coordinates(&self) -> usize {
        let id = MonomialMap::identity(self.n);
        (0..self.n)
            .filter(|&i| !self.signs[i].is_one_value() || self.exponents[i] != id.exponents[i])
            .count()
    }

    /// Substitution `f ∘ g`: apply `g` first.
    pub fn compose(&self, g: &MonomialMap) -> Result<MonomialMap> {
        if self.n != g.n {
            return Err(GroupError::DimensionMismatch(format!("{} vs {}", self.n, g.n)));
        }
        let n = self.n;
        let mut signs = Vec::with_capacity(n);
        let mut exponents = vec![vec![0i64; n]; n];
        for i in 0..n {
            let mut c = self.signs[i];
            for j in 0..n {
                let a = self.exponents[i][j];
                c = c * g.signs[j].pow(a).expect("coefficients are nonzero");
                for (k, e) in exponents[i].iter_mut().enumerate() {
                    *e += a * g.exponents[j][k];
                }
            }
            signs.push(c);
        }
        Ok(MonomialMap { n, signs, exponents })
    }

    /// Evaluates the map at a point with all coordinates nonzero.
    pub fn evaluate(&self, x: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(self.signs[i], |acc, j| Some(acc * x[j].pow(self.exponents[i][j])?))
            })
            .collect()
    }

    /// One `"x1 -> -1/x1"` string per coordinate.
    pub fn coordinate_strings(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| format!("x{} -> {}", i + 1, self.image_string(i)))
            .collect()
    }

    fn image_string(&self, i: usize) -> String {
        let var = |j: usize, e: i64| {
            if e == 1 {
                format!("x{}", j + 1)
            } else {
                format!("x{}^{}", j + 1, e)
            }
        };
        let num: Vec<String> = (0..self.n)
            .filter(|&j| self.exponents[i][j] > 0)
            .map(|j| var(j, self.exponents[i][j]))
            .collect();
        let den: Vec<String> = (0..self.n)
            .filter(|&j| self.exponents[i][j] < 0)
            .map(|j| var(j, -self.exponents[i][j]))
            .collect();
        let c = self.signs[i];
        let mut out = String::new();
        let coeff_printed = if c == GaussianRational::one() {
            false
        } else if c == -GaussianRational::one() {
            out.push('-');
            false
        } else {
            out.push_str(&c.to_string());
            true
        };
        if num.is_empty() {
            if !coeff_printed {
                out.push('1');
            }
        } else {
            if coeff_printed {
                out.push('*');
            }
            out.push_str(&num.join("*"));
        }
        if !den.is_empty() {
            out.push('/');
            if den.len() > 1 {
                out.push_str(&format!("({})", den.join("*")));
            } else {
                out.push_str(&den[0]);
            }
        }
        out
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coordinate_strings().join(", "))
    }
}

/// Projective action of `M` on `P^1`: `x ↦ (m00 x + m01)/(m10 x + m11)`,
/// which is monomial exactly when `M` is diagonal or antidiagonal.
pub fn mobius_to_monomial(m: &Mat2) -> Result<MonomialMap> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.is_zero() {
        return Err(GroupError::InvalidInput("matrix is not invertible".into()));
    }
    let (coeff, exp) = if m[0][1].is_zero() && m[1][0].is_zero() {
        (m[0][0].div(&m[1][1]).unwrap(), 1)
    } else if m[0][0].is_zero() && m[1][1].is_zero() {
        (m[0][1].div(&m[1][0]).unwrap(), -1)
    } else {
        return Err(GroupError::NotMonomial);
    };
    MonomialMap::new(vec![coeff], vec![vec![exp]])
}

/// Direct Möbius evaluation; `None` at a pole.
pub fn mobius_evaluate(m: &Mat2, x: GaussianRational) -> Option<GaussianRational> {
    (m[0][0] * x + m[0][1]).div(&(m[1][0] * x + m[1][1]))
}

/// Standard 2-dimensional representation of `Q8` on quaternion codes
/// (`4·sign + unit`, units `1, i, j, k`): `i = diag(i, -i)`,
/// `j = [[0, 1], [-1, 0]]`, `k = [[0, i], [i, 0]]`.
pub fn quaternion_matrix(code: usize) -> Mat2 {
    let z = GaussianRational::zero();
    let one = GaussianRational::one();
    let i = GaussianRational::i();
    let unit = match code % 4 {
        0 => [[one, z], [z, one]],
        1 => [[i, z], [z, -i]],
        2 => [[z, one], [-one, z]],
        _ => [[z, i], [i, z]],
    };
    if code >= 4 {
        unit.map(|row| row.map(|x| -x))
    } else {
        unit
    }
}

/// A group together with a monomial map for each element.
#[derive(Clone, Debug)]
pub struct MonomialAction {
    pub group: GroupRef,
    pub assignment: Vec<MonomialMap>,
    /// Distinguished generators, in the order they are reported.
    pub generators: Vec<usize>,
}

impl MonomialAction {
    pub fn map(&self, x: usize) -> &MonomialMap {
        &self.assignment[x]
    }

    pub fn is_faithful(&self) -> bool {
        let mut maps: Vec<&MonomialMap> = self.assignment.iter().collect();
        maps.sort_by_key(|m| m.to_string());
        maps.dedup();
        maps.len() == self.assignment.len()
    }
}

/// Exhaustive check that `x ↦ assignment[x]` is a homomorphism into
/// monomial maps under substitution, with identity going to the identity.
pub fn verify_action(act: &MonomialAction) -> bool {
    let g = &act.group;
    if act.assignment.len() != g.order() {
        return false;
    }
    let n = match act.assignment.first() {
        Some(m) => m.n,
        None => return false,
    };
    if !act.assignment[g.identity()].is_identity() || act.assignment.iter().any(|m| m.n != n) {
        return false;
    }
    (0..g.order()).all(|a| {
        (0..g.order()).all(|b| {
            act.assignment[a]
                .compose(&act.assignment[b])
                .is_ok_and(|c| c == act.assignment[g.mul(a, b)])
        })
    })
}

fn componentwise_map(codes: [usize; 3]) -> MonomialMap {
    let parts: Vec<MonomialMap> = codes
        .iter()
        .map(|&c| mobius_to_monomial(&quaternion_matrix(c)).expect("quaternion matrices are monomial"))
        .collect();
    let signs = parts.iter().map(|p| p.signs[0]).collect();
    let exponents = (0..3)
        .map(|i| (0..3).map(|j| if i == j { parts[i].exponents[0][0] } else { 0 }).collect())
        .collect();
    MonomialMap::new(signs, exponents).expect("diagonal exponents are invertible")
}

/// The faithful `(Z/2)^3` action on `(x1, x2, x3)` induced by the quaternion
/// triple group through the componentwise projective representation.
pub fn action_from_q8_triple() -> Result<MonomialAction> {
    let triple = fc_in_quaternions();
    let g = triple.group.clone();
    let scalars: Vec<usize> = (0..g.order())
        .filter(|&x| triple.codes(x).iter().all(|&c| c % 4 == 0))
        .collect();
    let center = Subgroup::from_elements(&g, &scalars)
        .ok_or_else(|| GroupError::InvalidInput("scalars do not form a subgroup".into()))?;
    let quotient = quotient_group(&g, &center)?;
    let qg = quotient.group.clone();
    let mut assignment: Vec<Option<MonomialMap>> = vec![None; qg.order()];
    for x in 0..g.order() {
        let map = componentwise_map(triple.codes(x));
        let slot = &mut assignment[quotient.projection.apply(x)];
        match slot {
            Some(existing) if *existing != map => {
                return Err(GroupError::InvalidInput(
                    "projective action is not constant on scalar cosets".into(),
                ))
            }
            _ => *slot = Some(map),
        }
    }
    let action = MonomialAction {
        group: qg,
        assignment: assignment.into_iter().map(|m| m.expect("projection is onto")).collect(),
        generators: triple.generators.iter().map(|&x| quotient.projection.apply(x)).collect(),
    };
    if !verify_action(&action) || !action.is_faithful() {
        return Err(GroupError::NotAnAction("quaternion triple action failed verification".into()));
    }
    Ok(action)
}

/// Per-element count of moved coordinates, and its multiset over the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDescriptor {
    pub per_element: Vec<usize>,
    pub multiset: BTreeMap<usize, usize>,
}

pub fn type_descriptor(act: &MonomialAction) -> TypeDescriptor {
    let per_element: Vec<usize> = act.assignment.iter().map(MonomialMap::moved_coordinates).collect();
    let mut multiset = BTreeMap::new();
    for &k in &per_element {
        *multiset.entry(k).or_insert(0) += 1;
    }
    TypeDescriptor { per_element, multiset }
}

/// Quaternion representation is a homomorphism on codes.
pub fn quaternion_representation_is_hom() -> bool {
    (0..8).all(|a| {
        (0..8).all(|b| {
            mat2_mul(&quaternion_matrix(a), &quaternion_matrix(b)) == quaternion_matrix(quaternion_mul(a, b))
        })
    })
}
