//! Heights of algebraic numbers.
//!
//! An [`AlgebraicNumber`] is represented by a primitive squarefree integer
//! polynomial; its height is `(1/d) log M(P)` evaluated on the full root
//! multiset. Irreducibility is not checked: for a reducible input the value
//! is the average over all roots, which is what the formulas compute but not
//! the height of any single conjugacy class.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{log_abs, log_biguint};
use crate::poly::{complex_roots, factor, phi_inverse, CertifiedRoot, IntPoly};
use crate::{Error, Result, DEFAULT_TOL};

/// A Galois orbit of algebraic numbers, given by its minimal polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
}

impl AlgebraicNumber {
    /// Normalises to the primitive polynomial with positive leading
    /// coefficient and rejects repeated roots.
    pub fn new(p: IntPoly) -> Result<Self> {
        if p.is_zero() || p.degree() == 0 {
            return Err(Error::InvalidInput("minimal polynomial must have degree at least 1".into()));
        }
        let p = p.primitive();
        if !p.is_squarefree() {
            return Err(Error::RepeatedRoot {
                squarefree_part: p.squarefree_part().to_string(),
            });
        }
        Ok(AlgebraicNumber { minpoly: p })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(IntPoly::from_i64(coeffs))
    }

    /// The rational `a/b` as the root of `bX - a`.
    pub fn from_rational(q: &BigRational) -> Self {
        let p = IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]);
        AlgebraicNumber { minpoly: p.primitive() }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    /// The value when the degree is 1.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1)
            .then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.degree() == 1 && self.minpoly.coeff(0).is_zero()
    }

    /// `1/xi`, whose minimal polynomial is the reversal.
    pub fn inverse(&self) -> Result<Self> {
        if self.minpoly.coeff(0).is_zero() {
            return Err(Error::InvalidInput("zero has no inverse".into()));
        }
        Self::new(self.minpoly.reverse())
    }

    pub fn conjugates(&self, tol: f64) -> Result<Vec<CertifiedRoot>> {
        complex_roots(&self.minpoly, tol)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {}", self.minpoly)
    }
}

/// `M(P)` together with its certified error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MahlerResult {
    pub measure: f64,
    pub log_measure: f64,
    /// Bound on `|log_measure - log M(P)|`.
    pub error_bound: f64,
    /// `sum log max(1, |xi_i|)`.
    pub archimedean_part: f64,
    #[serde(
        serialize_with = "crate::serde_util::ser_bigint",
        deserialize_with = "crate::serde_util::de_bigint"
    )]
    pub leading_coeff: BigInt,
}

/// `sum log max(1, |z_i|)` over certified roots, with its error bound.
fn log_max_sum(p: &IntPoly, tol: f64) -> Result<(f64, f64)> {
    let n = p.degree();
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let root_tol = (tol / (2.0 * n as f64)).max(1e-300);
    let roots = match complex_roots(p, root_tol) {
        Ok(r) => r,
        // Use the best certifiable radius and report the larger error.
        Err(Error::NotCertified { achieved, .. }) if achieved.is_finite() => {
            complex_roots(p, achieved * 1.01)?
        }
        Err(e) => return Err(e),
    };
    let mut sum = 0.0;
    let mut err = 0.0;
    for r in &roots {
        let m = r.value.norm();
        sum += m.max(1.0).ln();
        err += r.radius / (m - r.radius).max(1.0);
    }
    err += 4.0 * n as f64 * f64::EPSILON * (sum.abs() + 1.0);
    Ok((sum, err))
}

/// `M(P) = |a_n| prod max(1, |xi_i|)` by Jensen's formula.
///
/// Non-squarefree input is split as `P = g q` with `g = gcd(P, P')` and
/// `q` squarefree; `M` is multiplicative.
pub fn mahler_measure(p: &IntPoly, tol: f64) -> Result<MahlerResult> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the Mahler measure of 0 is not defined".into()));
    }
    let mut rest = p.clone();
    let mut arch = 0.0;
    let mut err = 0.0;
    while rest.degree() > 0 {
        let g = rest.gcd(&rest.derivative());
        let q = rest.div_exact(&g).expect("gcd divides the polynomial");
        let (s, e) = log_max_sum(&q, tol)?;
        arch += s;
        err += e;
        rest = g;
    }
    let lead = p.leading().abs();
    let log_measure = log_abs(&lead) + arch;
    Ok(MahlerResult {
        measure: log_measure.exp(),
        log_measure,
        error_bound: err,
        archimedean_part: arch,
        leading_coeff: lead,
    })
}

/// `h(xi) = (1/d) log M(P)`.
pub fn height_algebraic(xi: &AlgebraicNumber) -> Result<f64> {
    height_algebraic_tol(xi, DEFAULT_TOL).map(|(h, _)| h)
}

/// Height and its certified error.
pub fn height_algebraic_tol(xi: &AlgebraicNumber, tol: f64) -> Result<(f64, f64)> {
    let m = mahler_measure(&xi.minpoly, tol)?;
    let d = xi.degree() as f64;
    Ok((m.log_measure / d, m.error_bound / d))
}

/// A place of `Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(BigUint),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

/// Local heights summing to `h(xi)`.
///
/// At a prime `p` the contribution is exactly `(v_p(a_n) / d) log p`, kept
/// as the rational coefficient of `log p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalHeights {
    pub finite: BTreeMap<BigUint, BigRational>,
    pub archimedean: f64,
    pub total: f64,
    pub error_bound: f64,
}

impl LocalHeights {
    pub fn value_at(&self, place: &Place) -> f64 {
        match place {
            Place::Infinity => self.archimedean,
            Place::Prime(p) => self
                .finite
                .get(p)
                .map(|c| crate::numeric::rational_to_f64(c) * log_biguint(p))
                .unwrap_or(0.0),
        }
    }

    /// `{"2": .., "3": .., "inf": ..}`.
    pub fn places(&self) -> BTreeMap<String, f64> {
        let mut out: BTreeMap<String, f64> = self
            .finite
            .keys()
            .map(|p| (p.to_string(), self.value_at(&Place::Prime(p.clone()))))
            .collect();
        out.insert("inf".into(), self.archimedean);
        out
    }

    pub fn sum(&self) -> f64 {
        self.finite
            .keys()
            .map(|p| self.value_at(&Place::Prime(p.clone())))
            .sum::<f64>()
            + self.archimedean
    }
}

pub fn local_height_breakdown(xi: &AlgebraicNumber) -> Result<LocalHeights> {
    local_height_breakdown_tol(xi, DEFAULT_TOL)
}

pub fn local_height_breakdown_tol(xi: &AlgebraicNumber, tol: f64) -> Result<LocalHeights> {
    let m = mahler_measure(&xi.minpoly, tol)?;
    let d = xi.degree();
    let lead = xi.minpoly.leading().abs();
    let mut finite = BTreeMap::new();
    if !lead.is_one() {
        let lead_u = lead.to_biguint().expect("absolute value is nonnegative");
        for (p, e) in factor(&lead_u) {
            finite.insert(p, BigRational::new(BigInt::from(e), BigInt::from(d)));
        }
    }
    Ok(LocalHeights {
        finite,
        archimedean: m.archimedean_part / d as f64,
        total: m.log_measure / d as f64,
        error_bound: m.error_bound / d as f64,
    })
}

/// Outcome of the root-of-unity test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOfUnityVerdict {
    pub is_root_of_unity: bool,
    pub order: Option<u64>,
    pub reason: String,
}

/// Decides whether `xi` is a root of unity. An algebraic integer with every
/// conjugate on the unit circle is a root of unity of some order `m` with
/// `phi(m) = d` (for irreducible input); that is confirmed by exact division
/// of `X^m - 1`.
pub fn is_root_of_unity(xi: &AlgebraicNumber) -> Result<RootOfUnityVerdict> {
    let p = &xi.minpoly;
    let no = |reason: String| {
        Ok(RootOfUnityVerdict {
            is_root_of_unity: false,
            order: None,
            reason,
        })
    };
    if !p.leading().is_one() {
        return no("not an algebraic integer".into());
    }
    if p.coeff(0).abs() != BigInt::one() {
        return no("constant term is not a unit".into());
    }
    let d = xi.degree();
    for r in complex_roots(p, 1e-10)? {
        let m = r.value.norm();
        if (m - 1.0).abs() > r.radius + 1e-12 {
            return no(format!("conjugate {} has modulus {m}", r.value));
        }
    }
    for m in phi_inverse(d as u64) {
        if p.divides(&IntPoly::x_pow_minus_one(m as usize)) {
            return Ok(RootOfUnityVerdict {
                is_root_of_unity: true,
                order: Some(m),
                reason: format!("minimal polynomial divides X^{m} - 1"),
            });
        }
    }
    no("all conjugates have modulus 1 but no X^m - 1 with phi(m) = d is divisible".into())
}

/// Newton power sums `S_1, ..., S_count` of the roots of a monic integer polynomial.
pub fn power_sums(p: &IntPoly, count: usize) -> Result<Vec<BigInt>> {
    if !p.leading().is_one() {
        return Err(Error::InvalidInput("power sums need a monic polynomial".into()));
    }
    let d = p.degree();
    // c[i] is the coefficient of X^(d-i), so P = X^d + c_1 X^(d-1) + ... + c_d.
    let c: Vec<BigInt> = (0..=d).map(|i| p.coeff(d - i)).collect();
    let mut s: Vec<BigInt> = vec![BigInt::from(d)];
    for k in 1..=count {
        let mut v = if k <= d {
            -BigInt::from(k) * &c[k]
        } else {
            BigInt::zero()
        };
        for i in 1..=d.min(k - 1) {
            v -= &c[i] * &s[k - i];
        }
        s.push(v);
    }
    Ok(s.split_off(1))
}

/// The power-sum criterion: for a prime `p` not dividing any order `m` with
/// `phi(m) = d`, an algebraic integer `xi` is a root of unity (or zero) iff
/// `S_(np) = S_n` for `1 <= n <= d`. Returns the prime used and the verdict.
pub fn root_of_unity_by_power_sums(xi: &AlgebraicNumber) -> Result<(u64, bool)> {
    let p = &xi.minpoly;
    if !p.leading().is_one() {
        return Ok((0, false));
    }
    let d = xi.degree();
    let bound = (2 * d * d).max(2) as u64;
    let prime = (bound + 1..)
        .find(|&q| crate::poly::factor::is_probable_prime(&BigUint::from(q)))
        .expect("primes are unbounded");
    let s = power_sums(p, d * prime as usize)?;
    let equal = (1..=d).all(|n| s[n - 1] == s[n * prime as usize - 1]);
    Ok((prime, equal))
}

/// Lower bounds for the height of a non-torsion algebraic integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LehmerBounds {
    pub degree: usize,
    /// `1 / (4 e d^3)`.
    pub elementary: f64,
}

pub fn lehmer_bounds(d: usize) -> Result<LehmerBounds> {
    if d == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let df = d as f64;
    Ok(LehmerBounds {
        degree: d,
        elementary: 1.0 / (4.0 * std::f64::consts::E * df * df * df),
    })
}

/// `c / d^(1 + eps)` for caller-supplied constants; no constant is claimed.
pub fn dobrowolski_form(c: f64, eps: f64, d: usize) -> f64 {
    c / (d as f64).powf(1.0 + eps)
}

/// `H(P) = max |a_i|` as a float logarithm.
pub fn log_naive_poly_height(p: &IntPoly) -> f64 {
    log_abs(&p.max_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;

    const LEHMER: [i64; 11] = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];

    fn alg(c: &[i64]) -> AlgebraicNumber {
        AlgebraicNumber::from_i64(c).unwrap()
    }

    /// Mean of `log |P|` over the circle of radius `rho`.
    fn circle_mean(p: &IntPoly, rho: f64, samples: usize) -> f64 {
        let mut acc = 0.0;
        for k in 0..samples {
            let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            acc += p.eval_complex(num_complex::Complex64::from_polar(rho, t)).norm().ln();
        }
        acc / samples as f64
    }

    /// Jensen: on a root-free annulus the circle mean is `C + n_in log rho`
    /// with `C = log |a_n| + sum_{|xi| > rho} log |xi|`. Two radii determine the
    /// integer slope `n_in`, and `C = log M(P)` when every root inside the
    /// annulus has modulus at most 1.
    fn mahler_by_jensen(c: &[i64], rho1: f64, rho2: f64) -> f64 {
        let p = IntPoly::from_i64(c);
        let (i1, i2) = (circle_mean(&p, rho1, 4096), circle_mean(&p, rho2, 4096));
        let n_in = ((i2 - i1) / (rho2.ln() - rho1.ln())).round();
        (i1 - n_in * rho1.ln()).exp()
    }

    #[test]
    fn mahler_examples() {
        let m = mahler_measure(&IntPoly::from_i64(&[-2, 1]), 1e-12).unwrap();
        assert!((m.measure - 2.0).abs() < 1e-12);
        for n in [1, 2, 3, 7, 12, 30] {
            let m = mahler_measure(&cyclotomic(n), 1e-12).unwrap();
            assert!((m.measure - 1.0).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn lehmer_matches_quadrature() {
        let m = mahler_measure(&IntPoly::from_i64(&LEHMER), 1e-12).unwrap();
        let q = mahler_by_jensen(&LEHMER, 1.05, 1.1);
        assert!((m.measure - q).abs() < 1e-9, "{} vs {}", m.measure, q);
        assert!((m.measure - 1.17628).abs() < 1e-4);
        assert!(m.error_bound < 1e-10);
    }

    #[test]
    fn mahler_of_non_squarefree() {
        // (X - 2)^2 (X + 3) has measure 4 * 3
        let p = &(&IntPoly::from_i64(&[-2, 1]) * &IntPoly::from_i64(&[-2, 1]))
            * &IntPoly::from_i64(&[3, 1]);
        let m = mahler_measure(&p, 1e-12).unwrap();
        assert!((m.measure - 12.0).abs() < 1e-10);
        assert!(mahler_measure(&IntPoly::zero(), 1e-12).is_err());
    }

    #[test]
    fn height_examples() {
        assert!((height_algebraic(&alg(&[-1, 2])).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((height_algebraic(&alg(&[-2, 0, 0, 1])).unwrap() - 2f64.ln() / 3.0).abs() < 1e-12);
        let phi7 = AlgebraicNumber::new(cyclotomic(7)).unwrap();
        assert!(height_algebraic(&phi7).unwrap().abs() < 1e-12);
    }

    #[test]
    fn breakdown_examples() {
        let b = local_height_breakdown(&alg(&[-1, 2])).unwrap();
        assert!((b.value_at(&Place::Prime(2u32.into())) - 2f64.ln()).abs() < 1e-15);
        assert!(b.archimedean.abs() < 1e-12);

        let b = local_height_breakdown(&alg(&[-2, 0, 0, 1])).unwrap();
        assert!(b.finite.is_empty());
        assert!((b.archimedean - 2f64.ln() / 3.0).abs() < 1e-12);

        let b = local_height_breakdown(&alg(&[1, -5, 6])).unwrap();
        assert!((b.value_at(&Place::Prime(2u32.into())) - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((b.value_at(&Place::Prime(3u32.into())) - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!(b.archimedean.abs() < 1e-12);
        assert!((b.sum() - b.total).abs() < 1e-12);
        assert_eq!(b.places().keys().cloned().collect::<Vec<_>>(), vec!["2", "3", "inf"]);
    }

    #[test]
    fn root_of_unity_examples() {
        let v = is_root_of_unity(&AlgebraicNumber::new(cyclotomic(12)).unwrap()).unwrap();
        assert!(v.is_root_of_unity);
        assert_eq!(v.order, Some(12));
        assert!(!is_root_of_unity(&alg(&[1, -3, 1])).unwrap().is_root_of_unity);
        assert_eq!(is_root_of_unity(&alg(&[-1, 1])).unwrap().order, Some(1));
        let v = is_root_of_unity(&alg(&[-1, 2])).unwrap();
        assert_eq!(v.reason, "not an algebraic integer");
        // Lehmer: all roots but two on the circle; not torsion
        assert!(!is_root_of_unity(&alg(&LEHMER)).unwrap().is_root_of_unity);
    }

    #[test]
    fn power_sums_match_direct_evaluation() {
        // X^2 - X - 1: S_n are Lucas numbers
        let s = power_sums(&IntPoly::from_i64(&[-1, -1, 1]), 8).unwrap();
        let lucas: Vec<BigInt> = [1, 3, 4, 7, 11, 18, 29, 47].iter().map(|&v| v.into()).collect();
        assert_eq!(s, lucas);
        // X^3 - 2: S_3 = 6, S_1 = S_2 = 0
        let s = power_sums(&IntPoly::from_i64(&[-2, 0, 0, 1]), 6).unwrap();
        let want: Vec<BigInt> = [0, 0, 6, 0, 0, 12].iter().map(|&v| v.into()).collect();
        assert_eq!(s, want);
    }

    #[test]
    fn power_sum_criterion_agrees_with_division_test() {
        for n in 1..=30 {
            let xi = AlgebraicNumber::new(cyclotomic(n)).unwrap();
            assert!(root_of_unity_by_power_sums(&xi).unwrap().1, "n = {n}");
        }
        assert!(!root_of_unity_by_power_sums(&alg(&LEHMER)).unwrap().1);
        assert!(!root_of_unity_by_power_sums(&alg(&[-1, -1, 1])).unwrap().1);
    }

    #[test]
    fn lehmer_bound_examples() {
        let e = std::f64::consts::E;
        assert!((lehmer_bounds(1).unwrap().elementary - 1.0 / (4.0 * e)).abs() < 1e-15);
        assert!((lehmer_bounds(10).unwrap().elementary - 1.0 / (4000.0 * e)).abs() < 1e-18);
        let h = height_algebraic(&alg(&LEHMER)).unwrap();
        assert!((h - 0.016236).abs() < 1e-5);
        assert!(h >= lehmer_bounds(10).unwrap().elementary);
        assert!((dobrowolski_form(2.0, 0.5, 4) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn inverse_has_same_height() {
        let xi = alg(&[1, -5, 6]);
        let a = height_algebraic(&xi).unwrap();
        let b = height_algebraic(&xi.inverse().unwrap()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
