use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::big_to_f64;

/// Univariate polynomial with arbitrary-precision integer coefficients.
///
/// Coefficients are stored low degree first and kept trimmed, so the last
/// stored coefficient is the leading one. The zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(BigInt::one(), n);
        p.coeffs[0] -= 1;
        Self::new(p.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content-one representative with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.leading().is_positive()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Reciprocal polynomial `X^d P(1/X)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + big_to_f64(c))
    }

    /// Coefficients as floating-point numbers, low degree first.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(big_to_f64).collect()
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Largest coefficient in absolute value (the naive height `H(P)`).
    pub fn max_norm(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Division with remainder over `Q`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem_rational(&self, divisor: &IntPoly) -> (Vec<BigRational>, Vec<BigRational>) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem: Vec<BigRational> = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let dd = divisor.degree();
        let lead = BigRational::from_integer(divisor.leading());
        if rem.len() <= dd {
            return (Vec::new(), rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = &rem[k] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &q * BigRational::from_integer(c.clone());
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        while rem.last().is_some_and(Zero::is_zero) {
            rem.pop();
        }
        (quot, rem)
    }

    /// Exact quotient when `divisor` divides `self` in `Z[X]`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_rational(divisor);
        if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(IntPoly::new(q.into_iter().map(|c| c.to_integer()).collect()))
    }

    pub fn divides(&self, other: &IntPoly) -> bool {
        let (_, r) = other.div_rem_rational(self);
        r.is_empty()
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let mut r = self.coeffs.clone();
        let db = b.degree();
        let lb = b.leading();
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let lr = r[k].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, c) in b.coeffs.iter().enumerate() {
                r[k - db + j] -= &lr * c;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly::new(r)
    }

    /// Greatest common divisor in `Z[X]`, primitive with positive leading coefficient
    /// times the gcd of the contents.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive().scale(&self.content());
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive() };
        }
        a.primitive().scale(&content)
    }

    /// True when `gcd(P, P')` is constant.
    pub fn is_squarefree(&self) -> bool {
        if self.degree() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).degree() == 0
    }

    /// `P / gcd(P, P')`, made primitive.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive()
            .div_exact(&g.primitive())
            .expect("gcd divides the polynomial")
            .primitive()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{a}*X")?,
                (_, true) => write!(f, "X^{k}")?,
                (_, false) => write!(f, "{a}*X^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl serde::Serialize for IntPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::ser_bigints(&self.coeffs, s)
    }
}

impl<'de> serde::Deserialize<'de> for IntPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_util::de_bigints(d).map(IntPoly::new)
    }
}
