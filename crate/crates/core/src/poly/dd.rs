//! Minimal double-double arithmetic (about 106 significant bits), used as the
//! second rung of the root finder's precision ladder.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Unit roundoff of double-double arithmetic.
pub const DD_EPS: f64 = 4.93e-32;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for `|n| < 2^106`.
    pub fn from_bigint(n: &BigInt) -> Dd {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        let rest = n - BigInt::from(hi as i128);
        let lo = if hi.abs() < 1.7e38 {
            rest.to_f64().unwrap_or(0.0)
        } else {
            0.0
        };
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let xd = Dd::from_f64(x);
        let r = self - xd * xd;
        xd + Dd::from_f64(r.hi / (2.0 * x))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, y.hi);
        let e = e + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * Dd::from_f64(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * Dd::from_f64(q2);
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    pub fn from_c64(z: num_complex::Complex64) -> CDd {
        CDd::new(Dd::from_f64(z.re), Dd::from_f64(z.im))
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd::new(self.re * k, self.im * k)
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, o: CDd) -> CDd {
        CDd::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, o: CDd) -> CDd {
        CDd::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, o: CDd) -> CDd {
        CDd::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, o: CDd) -> CDd {
        let den = o.norm_sqr();
        let num = self
            * CDd::new(o.re, -o.im);
        CDd::new(num.re / den, num.im / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_f64() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let s = Dd::from_f64(2.0).sqrt();
        assert!((s * s - Dd::from_f64(2.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn exact_big_integers() {
        let n: BigInt = (BigInt::from(1u64) << 90) + 12345;
        let d = Dd::from_bigint(&n);
        let hi = BigInt::from(d.hi as i128);
        let lo = BigInt::from(d.lo as i128);
        assert_eq!(hi + lo, n);
    }
}
