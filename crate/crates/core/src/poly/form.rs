use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntPoly;
use crate::numeric::big_to_f64;
use crate::{Error, Result};

/// Homogeneous polynomial in two variables.
///
/// `coeffs[i]` is the coefficient of `X^(d-i) Y^i`. Arithmetic may produce the
/// zero form of a given degree; constructors used for maps reject it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl BinaryForm {
    /// Builds a nonzero form of degree `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a binary form needs at least one coefficient".into()));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("binary form is identically zero".into()));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![BigInt::zero(); degree + 1],
        }
    }

    /// `X^k Y^(d-k)`.
    pub fn monomial(degree: usize, x_power: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[degree - x_power] = BigInt::one();
        f
    }

    pub(crate) fn from_raw(coeffs: Vec<BigInt>) -> Self {
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in the ratio: sum c_i x^(d-i) y^i
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            terms.push(c * &ypow);
            ypow *= y;
        }
        for t in terms {
            acc = acc * x + t;
        }
        acc
    }

    /// Evaluation modulo `m > 0`, result in `[0, m)`.
    pub fn eval_mod(&self, x: &BigInt, y: &BigInt, m: &BigInt) -> BigInt {
        let x = x.mod_floor(m);
        let y = y.mod_floor(m);
        let mut ypow = BigInt::one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            terms.push((c * &ypow).mod_floor(m));
            ypow = (ypow * &y).mod_floor(m);
        }
        let mut acc = BigInt::zero();
        for t in terms {
            acc = (acc * &x + t).mod_floor(m);
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mut ypow = Complex64::new(1.0, 0.0);
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            terms.push(ypow * big_to_f64(c));
            ypow *= y;
        }
        terms
            .into_iter()
            .fold(Complex64::new(0.0, 0.0), |acc, t| acc * x + t)
    }

    /// The affine polynomial `F(x, 1)`, low degree first.
    pub fn dehomogenize(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// Homogenizes `p` to the given degree (which must be at least `deg p`).
    pub fn homogenize(p: &IntPoly, degree: usize) -> Result<Self> {
        if p.degree() > degree {
            return Err(Error::InvalidInput(format!(
                "cannot homogenize a degree {} polynomial to degree {degree}",
                p.degree()
            )));
        }
        let coeffs = (0..=degree).map(|i| p.coeff(degree - i)).collect();
        Ok(BinaryForm { coeffs })
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![BigInt::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degrees");
        BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn exact_div_scalar(&self, k: &BigInt) -> BinaryForm {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|c| c / k).collect(),
        }
    }

    fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm {
            coeffs: vec![BigInt::one()],
        };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitution `F(G, H)` for forms `G`, `H` of a common degree.
    pub fn compose(&self, g: &BinaryForm, h: &BinaryForm) -> BinaryForm {
        assert_eq!(g.degree(), h.degree(), "composition needs forms of equal degree");
        let d = self.degree();
        let mut out = BinaryForm::zero(d * g.degree());
        let gp: Vec<BinaryForm> = (0..=d).map(|k| g.pow(k)).collect();
        let hp: Vec<BinaryForm> = (0..=d).map(|k| h.pow(k)).collect();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = gp[d - i].mul(&hp[i]).scale(c);
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (xp, yp) => {
                    let mut s = String::new();
                    if xp > 0 {
                        s.push('X');
                        if xp > 1 {
                            s.push_str(&format!("^{xp}"));
                        }
                    }
                    if yp > 0 {
                        s.push('Y');
                        if yp > 1 {
                            s.push_str(&format!("^{yp}"));
                        }
                    }
                    s
                }
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct FormRepr {
    degree: usize,
    #[serde(
        serialize_with = "crate::serde_util::ser_bigints",
        deserialize_with = "crate::serde_util::de_bigints"
    )]
    coeffs: Vec<BigInt>,
}

impl serde::Serialize for BinaryForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            degree: self.degree(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for BinaryForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = FormRepr::deserialize(d)?;
        if r.coeffs.len() != r.degree + 1 {
            return Err(D::Error::custom(format!(
                "form of degree {} needs {} coefficients, got {}",
                r.degree,
                r.degree + 1,
                r.coeffs.len()
            )));
        }
        BinaryForm::new(r.coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_is_homogeneous() {
        let f = BinaryForm::from_i64(&[1, -3, 0, 2]).unwrap();
        let (x, y, l) = (BigInt::from(5), BigInt::from(-7), BigInt::from(3));
        let lhs = f.eval(&(&x * &l), &(&y * &l));
        assert_eq!(lhs, f.eval(&x, &y) * l.pow(3));
    }

    #[test]
    fn eval_mod_agrees_with_exact() {
        let f = BinaryForm::from_i64(&[3, -1, 4]).unwrap();
        let m = BigInt::from(17);
        for (a, b) in [(2i64, 5i64), (-4, 9), (0, 1), (11, -13)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            assert_eq!(f.eval_mod(&a, &b, &m), f.eval(&a, &b).mod_floor(&m));
        }
    }

    #[test]
    fn composition_of_squaring_with_itself() {
        let x2 = BinaryForm::from_i64(&[1, 0, 0]).unwrap();
        let y2 = BinaryForm::from_i64(&[0, 0, 1]).unwrap();
        let u2 = x2.compose(&x2, &y2);
        assert_eq!(u2, BinaryForm::monomial(4, 4));
        // (X^2 + Y^2)∘(X^2 + Y^2, Y^2) = X^4 + 2 X^2 Y^2 + 2 Y^4
        let u = BinaryForm::from_i64(&[1, 0, 1]).unwrap();
        assert_eq!(
            u.compose(&u, &y2),
            BinaryForm::from_i64(&[1, 0, 2, 0, 2]).unwrap()
        );
    }

    #[test]
    fn zero_form_is_rejected() {
        assert!(BinaryForm::from_i64(&[0, 0]).is_err());
        assert!(BinaryForm::new(vec![]).is_err());
    }

    #[test]
    fn display() {
        let f = BinaryForm::from_i64(&[1, 0, -1]).unwrap();
        assert_eq!(f.to_string(), "X^2 - Y^2");
    }
}
