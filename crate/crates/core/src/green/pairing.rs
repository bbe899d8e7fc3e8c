use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::EscapeRateField;
use crate::algebraic::{height_algebraic_tol, AlgebraicNumber};
use crate::dynamics::RationalMap;
use crate::numeric::{log_biguint, rational_to_f64};
use crate::poly::{factor, monic_discriminant, vp_int};
use crate::{Error, Result};

/// A point of `P^1(C)` in homogeneous coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CProjPoint {
    pub x: Complex64,
    pub y: Complex64,
}

impl CProjPoint {
    pub fn new(x: Complex64, y: Complex64) -> Result<Self> {
        if x == Complex64::zero() && y == Complex64::zero() {
            return Err(Error::InvalidInput("(0, 0) is not a projective point".into()));
        }
        Ok(CProjPoint { x, y })
    }

    /// `[z : 1]`.
    pub fn affine(z: Complex64) -> Self {
        CProjPoint {
            x: z,
            y: Complex64::new(1.0, 0.0),
        }
    }

    /// `[1 : 0]`.
    pub fn infinity() -> Self {
        CProjPoint {
            x: Complex64::new(1.0, 0.0),
            y: Complex64::zero(),
        }
    }

    /// `x / y`, or `None` at infinity.
    pub fn to_affine(&self) -> Option<Complex64> {
        (self.y != Complex64::zero()).then(|| self.x / self.y)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        CProjPoint {
            x: self.x * lambda,
            y: self.y * lambda,
        }
    }
}

/// A pairing value: finite, or `+inf` on the diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GValue {
    Finite(f64),
    Infinity,
}

impl GValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            GValue::Finite(v) => Some(*v),
            GValue::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GValue::Infinity)
    }
}

impl fmt::Display for GValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GValue::Finite(v) => write!(f, "{v:.17e}"),
            GValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for GValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GValue::Finite(v) => s.serialize_f64(*v),
            GValue::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for GValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(GValue::Finite(v)),
            Repr::Str(s) if s == "inf" => Ok(GValue::Infinity),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

/// `G(P1, P2) = -log |x1 y2 - x2 y1| + Lambda(P1) + Lambda(P2) - log |Res| / (d (d - 1))`.
pub fn g_pairing(field: &EscapeRateField, p1: &CProjPoint, p2: &CProjPoint) -> Result<GValue> {
    let det = p1.x * p2.y - p2.x * p1.y;
    if det == Complex64::zero() {
        return Ok(GValue::Infinity);
    }
    let l1 = field.escape_rate(p1.x, p1.y)?;
    let l2 = field.escape_rate(p2.x, p2.y)?;
    Ok(GValue::Finite(-det.norm().ln() + l1 + l2 + field.res_term()))
}

/// Mean of `G(P_i, P_j)` over ordered pairs `i != j`.
pub fn mean_pairing(field: &EscapeRateField, points: &[CProjPoint]) -> Result<GValue> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 points, got {n}")));
    }
    let lambdas = points
        .iter()
        .map(|p| field.escape_rate(p.x, p.y))
        .collect::<Result<Vec<f64>>>()?;
    let r = field.res_term();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let det = points[i].x * points[j].y - points[j].x * points[i].y;
            if det == Complex64::zero() {
                return Ok(GValue::Infinity);
            }
            sum += -det.norm().ln() + lambdas[i] + lambdas[j] + r;
        }
    }
    Ok(GValue::Finite(2.0 * sum / (n * (n - 1)) as f64))
}

/// A uniform probability measure on finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    points: Vec<CProjPoint>,
}

impl EmpiricalMeasure {
    pub fn new(points: Vec<CProjPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("an empirical measure needs points".into()));
        }
        Ok(EmpiricalMeasure { points })
    }

    pub fn from_affine(z: &[Complex64]) -> Result<Self> {
        Self::new(z.iter().map(|&z| CProjPoint::affine(z)).collect())
    }

    /// The Galois orbit `delta_xi`: the complex roots of the minimal polynomial.
    pub fn from_algebraic(xi: &AlgebraicNumber, tol: f64) -> Result<Self> {
        let roots = xi.conjugates(tol)?;
        Self::from_affine(&roots.iter().map(|r| r.value).collect::<Vec<_>>())
    }

    /// All `n`-th roots of unity.
    pub fn roots_of_unity(n: usize) -> Result<Self> {
        Self::from_affine(&(0..n).map(|k| unit_root(k, n)).collect::<Vec<_>>())
    }

    /// The primitive `n`-th roots of unity, i.e. the orbit of a root of `Phi_n`.
    pub fn primitive_roots_of_unity(n: usize) -> Result<Self> {
        Self::from_affine(
            &(0..n)
                .filter(|k| k.gcd(&n) == 1)
                .map(|k| unit_root(k, n))
                .collect::<Vec<_>>(),
        )
    }

    pub fn points(&self) -> &[CProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.points.len() as f64
    }

    fn distinct_count(&self) -> usize {
        let mut seen: Vec<CProjPoint> = Vec::new();
        for p in &self.points {
            if !seen.iter().any(|q| q.x * p.y == p.x * q.y) {
                seen.push(*p);
            }
        }
        seen.len()
    }
}

/// `exp(2 pi i k / n)`.
pub fn unit_root(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * (k % n) as f64 / n as f64)
}

/// `D(P) = (1 / n(n-1)) sum_{i != j} G(P_i, P_j)` over the conjugates.
pub fn discrepancy(field: &EscapeRateField, xi: &AlgebraicNumber) -> Result<GValue> {
    if xi.degree() < 2 {
        return Err(Error::InvalidInput("the discrepancy needs degree at least 2".into()));
    }
    let nu = EmpiricalMeasure::from_algebraic(xi, field.tol())?;
    mean_pairing(field, nu.points())
}

/// Mean pairwise `G`, exposed as the energy of an empirical measure.
pub fn discrete_energy(field: &EscapeRateField, nu: &EmpiricalMeasure) -> Result<GValue> {
    if nu.distinct_count() < 2 {
        return Err(Error::InvalidInput("the energy needs at least 2 distinct points".into()));
    }
    mean_pairing(field, nu.points())
}

/// One finite place in the height-discrepancy identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteDiscrepancy {
    #[serde(
        serialize_with = "crate::serde_util::ser_rational",
        deserialize_with = "crate::serde_util::de_rational"
    )]
    pub log_p_multiple: BigRational,
    pub value: f64,
}

/// Both sides of `h(xi) = (1/2) sum_v D_v(xi)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightDiscrepancy {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub d_infinity: f64,
    /// Keyed by the prime in decimal.
    pub finite: BTreeMap<String, FiniteDiscrepancy>,
}

/// For a power map, `D_p` is exact: with `Delta` the discriminant of the
/// monic minimal polynomial and `a` its leading coefficient,
/// `D_p = (v_p(Delta) / (n (n - 1)) + 2 v_p(a) / n) log p`,
/// since `sum_i log max(1, |xi_i|_p) = v_p(a) log p` by Gauss's lemma.
pub fn height_discrepancy_check(map: &RationalMap, xi: &AlgebraicNumber, tol: f64) -> Result<HeightDiscrepancy> {
    if !map.is_power_map() {
        return Err(Error::UnsupportedScope(
            "the finite-place discrepancies are exact only for power maps".into(),
        ));
    }
    let n = xi.degree();
    if n < 2 {
        return Err(Error::InvalidInput("the discrepancy needs degree at least 2".into()));
    }
    let field = EscapeRateField::new(map, tol)?;
    let (lhs, _) = height_algebraic_tol(xi, tol)?;
    let d_infinity = discrepancy(&field, xi)?
        .finite()
        .ok_or_else(|| Error::InvalidInput("conjugates coincide".into()))?;

    let delta = monic_discriminant(xi.minpoly())?;
    let lead = xi.minpoly().leading();
    let mut primes: Vec<BigUint> = Vec::new();
    for m in [delta.numer().abs(), delta.denom().abs(), lead.abs()] {
        let m = m.to_biguint().expect("nonnegative");
        if !m.is_zero() {
            primes.extend(factor(&m).into_iter().map(|(p, _)| p));
        }
    }
    primes.sort();
    primes.dedup();

    let nn = BigRational::from_integer((n * (n - 1)).into());
    let nr = BigRational::from_integer(n.into());
    let mut finite = BTreeMap::new();
    let mut finite_sum = 0.0;
    for p in primes {
        let vd = vp_int(delta.numer(), &p).unwrap_or(0) as i64 - vp_int(delta.denom(), &p).unwrap_or(0) as i64;
        let va = vp_int(&lead, &p).unwrap_or(0) as i64;
        let m = BigRational::from_integer(vd.into()) / &nn
            + BigRational::from_integer((2 * va).into()) / &nr;
        let value = rational_to_f64(&m) * log_biguint(&p);
        finite_sum += value;
        finite.insert(p.to_string(), FiniteDiscrepancy { log_p_multiple: m, value });
    }
    let rhs = 0.5 * (d_infinity + finite_sum);
    Ok(HeightDiscrepancy {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        d_infinity,
        finite,
    })
}

/// Mean pairing of a point set together with the smallest `c` for which
/// it is at least `-c log n / n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BakerReport {
    pub n: usize,
    pub mean: GValue,
    /// `None` when the mean is infinite (repeated points).
    pub fitted_c: Option<f64>,
}

pub fn baker_mean_pairing(field: &EscapeRateField, points: &[CProjPoint]) -> Result<BakerReport> {
    let n = points.len();
    let mean = mean_pairing(field, points)?;
    let fitted_c = mean.finite().map(|m| baker_constant(n, m));
    Ok(BakerReport { n, mean, fitted_c })
}

/// Smallest `c >= 0` with `mean >= -c log n / n`.
pub fn baker_constant(n: usize, mean: f64) -> f64 {
    let n = n as f64;
    (-mean * n / n.ln()).max(0.0)
}

/// The constant that works for a whole sweep; infinite means are skipped.
pub fn baker_fit(reports: &[BakerReport]) -> f64 {
    reports.iter().filter_map(|r| r.fitted_c).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub exponent: i64,
    pub magnitude: f64,
    /// Points that entered the average.
    pub used: usize,
}

/// `|(1/n) sum_i z_i^a|` for each exponent; `0` and `inf` are dropped where
/// the power is undefined and counted in `excluded`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiluMoments {
    pub moments: Vec<Moment>,
    pub excluded: usize,
}

pub fn bilu_moment_test(nu: &EmpiricalMeasure, exponents: &[i64]) -> Result<BiluMoments> {
    if exponents.contains(&0) {
        return Err(Error::InvalidInput("the exponent 0 carries no information".into()));
    }
    let mut excluded = 0;
    let mut moments = Vec::with_capacity(exponents.len());
    for &a in exponents {
        let mut sum = Complex64::zero();
        let mut used = 0;
        let mut dropped = 0;
        for p in nu.points() {
            match p.to_affine() {
                Some(z) if !(a < 0 && z == Complex64::zero()) => {
                    sum += z.powi(a as i32);
                    used += 1;
                }
                _ => dropped += 1,
            }
        }
        excluded = excluded.max(dropped);
        let magnitude = if used == 0 { 0.0 } else { sum.norm() / used as f64 };
        moments.push(Moment {
            exponent: a,
            magnitude,
            used,
        });
    }
    Ok(BiluMoments { moments, excluded })
}

/// Fraction of conjugates outside `1/r <= |z| <= r` against `2 h / log r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusReport {
    pub r: f64,
    pub observed: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn annulus_mass_bound(xi: &AlgebraicNumber, r: f64, tol: f64) -> Result<AnnulusReport> {
    if !(r > 1.0) {
        return Err(Error::InvalidInput(format!("the annulus radius must exceed 1, got {r}")));
    }
    let (h, _) = height_algebraic_tol(xi, tol)?;
    let roots = xi.conjugates(tol)?;
    let outside = roots
        .iter()
        .filter(|z| {
            let m = z.value.norm();
            m > r || m < 1.0 / r
        })
        .count();
    let observed = outside as f64 / roots.len() as f64;
    let bound = 2.0 * h / r.ln();
    Ok(AnnulusReport {
        r,
        observed,
        bound,
        holds: observed <= bound + tol,
    })
}
