//! Small numeric helpers shared across modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural logarithm of `|n|` for an arbitrary-size integer.
///
/// Returns `-inf` for zero. Accurate to a few ulps regardless of size.
pub fn log_abs(n: &BigInt) -> f64 {
    log_biguint(n.magnitude())
}

pub fn log_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log |q|` for a nonzero rational.
pub fn log_abs_rational(q: &BigRational) -> f64 {
    log_abs(q.numer()) - log_abs(q.denom())
}

/// Lossy conversion used for evaluating exact data in floating point.
pub fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.sign() == Sign::Minus {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let l = log_abs_rational(q);
        let s = if q.is_negative() { -1.0 } else { 1.0 };
        s * l.exp()
    })
}

/// Number of decimal digits of `|n|` (at least 1).
pub fn decimal_digits(n: &BigInt) -> u64 {
    if n.is_zero() {
        return 1;
    }
    (n.bits() as f64 * std::f64::consts::LOG10_2).floor() as u64 + 1
}

/// Riemann zeta at a real argument `s > 1`, via Euler–Maclaurin summation.
///
/// Absolute error is below `1e-14` for `s >= 1.5`.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta requires s > 1");
    let n = 64usize;
    let nf = n as f64;
    let mut sum = 0.0;
    for k in (1..n).rev() {
        sum += (k as f64).powf(-s);
    }
    // Euler–Maclaurin tail starting at n with Bernoulli corrections up to B_8.
    let mut tail = nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s);
    let b = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];
    let mut rising = s; // s (s+1) ... (s+2j-2)
    let mut fact = 2.0; // (2j)!
    for (j, bj) in b.iter().enumerate() {
        let m = 2 * j + 1;
        tail += bj / fact * rising * nf.powf(-s - m as f64);
        rising *= (s + m as f64) * (s + m as f64 + 1.0);
        fact *= ((m + 2) * (m + 3)) as f64;
    }
    sum + tail
}
