use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A p-adic valuation value: an integer or `+inf` (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A valuation together with the prime it was computed at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValuation {
    pub prime: BigUint,
    pub value: Valuation,
}

impl PadicValuation {
    /// `|q|_p = p^(-v)` as a float; zero for `v = +inf`.
    pub fn abs_value(&self) -> f64 {
        match self.value {
            Valuation::Infinity => 0.0,
            Valuation::Finite(v) => {
                let p = crate::numeric::log_biguint(&self.prime);
                (-(v as f64) * p).exp()
            }
        }
    }
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: &BigUint) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p.clone());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// The p-adic valuation of a rational number. `p` must be prime.
pub fn vp(q: &BigRational, p: &BigUint) -> PadicValuation {
    debug_assert!(p > &BigUint::one());
    let value = if q.is_zero() {
        Valuation::Infinity
    } else {
        let num = vp_int(q.numer(), p).unwrap() as i64;
        let den = vp_int(q.denom(), p).unwrap() as i64;
        Valuation::Finite(num - den)
    };
    PadicValuation {
        prime: p.clone(),
        value,
    }
}

pub fn vp_u64(q: &BigRational, p: u64) -> Valuation {
    vp(q, &BigUint::from(p)).value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        assert_eq!(vp_u64(&rat(12, 1), 2), Valuation::Finite(2));
        assert_eq!(vp_u64(&rat(5, 8), 2), Valuation::Finite(-3));
        assert_eq!(vp_u64(&rat(7, 1), 3), Valuation::Finite(0));
        assert_eq!(vp_u64(&rat(0, 1), 3), Valuation::Infinity);
    }

    #[test]
    fn abs_value_matches_definition() {
        let v = vp(&rat(5, 8), &BigUint::from(2u32));
        assert!((v.abs_value() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn infinity_orders_last() {
        assert!(Valuation::Finite(1_000_000) < Valuation::Infinity);
        assert_eq!(Valuation::Finite(2) + Valuation::Infinity, Valuation::Infinity);
    }
}
