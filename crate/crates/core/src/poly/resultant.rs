//! Sylvester resultants, Nullstellensatz cofactors and discriminants.
//!
//! Everything here is exact. Determinants use fraction-free Bareiss
//! elimination so intermediate entries stay integral.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BinaryForm, IntPoly};
use crate::{Error, Result};

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Matrix of `(A, B) -> A F + B G` in monomial bases, where `deg A = deg G - 1`
/// and `deg B = deg F - 1`. Rows index the coefficient of `X^(m+n-1-k) Y^k`.
fn sylvester_map(f: &[BigInt], g: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for col in 0..n {
        for (j, c) in f.iter().enumerate() {
            mat[col + j][col] = c.clone();
        }
    }
    for col in 0..m {
        for (j, c) in g.iter().enumerate() {
            mat[col + j][n + col] = c.clone();
        }
    }
    mat
}

/// Resultant of two binary forms of the same degree `d >= 1`: the determinant
/// of the Sylvester map on pairs of degree `d - 1` forms.
pub fn resultant(u: &BinaryForm, v: &BinaryForm) -> Result<BigInt> {
    if u.degree() != v.degree() {
        return Err(Error::InvalidInput(format!(
            "resultant needs forms of equal degree, got {} and {}",
            u.degree(),
            v.degree()
        )));
    }
    if u.degree() == 0 {
        return Err(Error::InvalidInput("resultant needs forms of degree at least 1".into()));
    }
    Ok(bareiss_det(sylvester_map(u.coeffs(), v.coeffs())))
}

/// Classical resultant `lc(P)^deg Q * prod Q(alpha)` of two univariate polynomials.
pub fn resultant_univariate(p: &IntPoly, q: &IntPoly) -> BigInt {
    if p.is_zero() || q.is_zero() {
        return BigInt::zero();
    }
    let (m, n) = (p.degree(), q.degree());
    if m == 0 {
        return p.leading().pow(n as u32);
    }
    if n == 0 {
        return q.leading().pow(m as u32);
    }
    let f: Vec<BigInt> = p.coeffs().iter().rev().cloned().collect();
    let g: Vec<BigInt> = q.coeffs().iter().rev().cloned().collect();
    bareiss_det(sylvester_map(&f, &g))
}

/// Integer cofactors realising the resultant as an element of the ideal `(U, V)`:
/// `a_x U + b_x V = r X^(2d-1)` and `a_y U + b_y V = r Y^(2d-1)` with `r = Res(U, V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullstellensatzCofactors {
    pub a_x: BinaryForm,
    pub b_x: BinaryForm,
    pub a_y: BinaryForm,
    pub b_y: BinaryForm,
    pub r: BigInt,
}

impl NullstellensatzCofactors {
    /// `max(|a_x|_1 + |b_x|_1, |a_y|_1 + |b_y|_1)`.
    pub fn l1_bound(&self) -> BigInt {
        let x = self.a_x.l1_norm() + self.b_x.l1_norm();
        let y = self.a_y.l1_norm() + self.b_y.l1_norm();
        x.max(y)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        [&self.a_x, &self.b_x, &self.a_y, &self.b_y]
            .iter()
            .map(|f| f.max_abs_coeff())
            .max()
            .unwrap_or_default()
    }
}

/// Solves the Sylvester system by Cramer's rule: with `r = det M`, the solution of
/// `M s = r e` is the integer vector whose `j`-th entry is `det` of `M` with column
/// `j` replaced by `e`.
pub fn nullstellensatz_cofactors(
    u: &BinaryForm,
    v: &BinaryForm,
) -> Result<NullstellensatzCofactors> {
    let r = resultant(u, v)?;
    if r.is_zero() {
        return Err(Error::DegenerateMap);
    }
    let d = u.degree();
    let mat = sylvester_map(u.coeffs(), v.coeffs());
    let size = 2 * d;
    let solve = |target_row: usize| -> Vec<BigInt> {
        (0..size)
            .map(|j| {
                let mut mj = mat.clone();
                for (row, line) in mj.iter_mut().enumerate() {
                    line[j] = if row == target_row {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    };
                }
                bareiss_det(mj)
            })
            .collect()
    };
    let sx = solve(0);
    let sy = solve(size - 1);
    Ok(NullstellensatzCofactors {
        a_x: BinaryForm::from_raw(sx[..d].to_vec()),
        b_x: BinaryForm::from_raw(sx[d..].to_vec()),
        a_y: BinaryForm::from_raw(sy[..d].to_vec()),
        b_y: BinaryForm::from_raw(sy[d..].to_vec()),
        r,
    })
}

/// Discriminant `(-1)^(n(n-1)/2) Res(P, P') / lc(P)`.
pub fn discriminant(p: &IntPoly) -> Result<BigRational> {
    let n = p.degree();
    if p.is_zero() || n < 2 {
        return Err(Error::InvalidInput(format!(
            "discriminant needs degree at least 2, got {n}"
        )));
    }
    let res = resultant_univariate(p, &p.derivative());
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    Ok(BigRational::new(res * sign, p.leading()))
}

/// Discriminant of the monic polynomial with the same roots,
/// `prod_{i<j} (z_i - z_j)^2 = disc(P) / lc(P)^(2n-2)`.
pub fn monic_discriminant(p: &IntPoly) -> Result<BigRational> {
    let disc = discriminant(p)?;
    let n = p.degree();
    let lc = BigRational::from_integer(p.leading().pow((2 * n - 2) as u32));
    Ok(disc / lc)
}

/// Sign-insensitive helper used where only `|Res|` enters a formula.
pub fn abs_resultant(u: &BinaryForm, v: &BinaryForm) -> Result<BigInt> {
    resultant(u, v).map(|r| r.abs())
}
