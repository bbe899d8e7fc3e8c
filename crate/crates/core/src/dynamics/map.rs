use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::log_abs;
use crate::poly::{
    nullstellensatz_cofactors, prime_divisors, resultant, vp_int, BinaryForm, IntPoly,
    NullstellensatzCofactors,
};
use crate::proj::ProjPointQ;
use crate::{Error, Result};

/// Explicit constants for a map `f = [U : V]` of degree `d`.
///
/// With `|(x, y)| = max(|x|, |y|)` and `C` the cofactor bound
/// `max(|A_X|_1 + |B_X|_1, |A_Y|_1 + |B_Y|_1)`:
///
/// * `|Res| |z|^d / C <= |(U, V)(z)| <= max(|U|_1, |V|_1) |z|^d` for complex `z`;
/// * on `P^1(Q)`, `d h(x) - log C <= h(f(x)) <= d h(x) + log max(|U|_1, |V|_1)`,
///   because the gcd of `U(a, b)` and `V(a, b)` divides `Res`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapConstants {
    /// `log max(|U|_1, |V|_1)`.
    pub c_upper: f64,
    /// `log C`: lower constant for naive heights over `Q`.
    pub c_lower: f64,
    /// `log C - log |Res|`: lower constant for `log |(U, V)|` at the archimedean place.
    pub c_lower_arch: f64,
    /// `max(c_upper, c_lower)`.
    pub c_max: f64,
}

impl MapConstants {
    /// Largest per-step deviation of `log |(U, V)(z)| - d log |z|` in absolute value.
    pub fn archimedean_range(&self) -> f64 {
        self.c_upper.max(self.c_lower_arch).max(0.0)
    }
}

/// An endomorphism `[U : V]` of `P^1` over `Q` of degree at least 2.
#[derive(Clone, Debug)]
pub struct RationalMap {
    u: BinaryForm,
    v: BinaryForm,
    res: BigInt,
    bad_primes: Vec<BigUint>,
    cofactors: NullstellensatzCofactors,
    constants: MapConstants,
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v
    }
}

impl RationalMap {
    /// Divides out the joint content and caches the resultant, its prime
    /// divisors and the cofactors.
    pub fn new(u: BinaryForm, v: BinaryForm) -> Result<Self> {
        if u.degree() != v.degree() {
            return Err(Error::InvalidInput(format!(
                "U and V must share a degree, got {} and {}",
                u.degree(),
                v.degree()
            )));
        }
        if u.degree() < 2 {
            return Err(Error::InvalidInput("maps must have degree at least 2".into()));
        }
        let content = u.content().gcd(&v.content());
        if content.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let (u, v) = if content.is_one() {
            (u, v)
        } else {
            (u.exact_div_scalar(&content), v.exact_div_scalar(&content))
        };
        let res = resultant(&u, &v)?;
        if res.is_zero() {
            return Err(Error::DegenerateMap);
        }
        let cofactors = nullstellensatz_cofactors(&u, &v)?;
        let bad_primes = prime_divisors(&res.abs().to_biguint().expect("nonnegative"));
        let c_upper = log_abs(&u.l1_norm()).max(log_abs(&v.l1_norm()));
        let c_lower = log_abs(&cofactors.l1_bound());
        let constants = MapConstants {
            c_upper,
            c_lower,
            c_lower_arch: c_lower - log_abs(&res),
            c_max: c_upper.max(c_lower),
        };
        Ok(RationalMap {
            u,
            v,
            res,
            bad_primes,
            cofactors,
            constants,
        })
    }

    pub fn from_i64(u: &[i64], v: &[i64]) -> Result<Self> {
        Self::new(BinaryForm::from_i64(u)?, BinaryForm::from_i64(v)?)
    }

    /// `z -> p(z)` for an integer polynomial, as `[Y^d p(X/Y) : Y^d]`.
    pub fn polynomial(p: &IntPoly) -> Result<Self> {
        let d = p.degree();
        Self::new(BinaryForm::homogenize(p, d)?, BinaryForm::monomial(d, 0))
    }

    /// `[X^d : Y^d]`.
    pub fn power_map(d: usize) -> Result<Self> {
        Self::new(BinaryForm::monomial(d, d), BinaryForm::monomial(d, 0))
    }

    /// `[X^d : Y^d]` up to a permutation and sign of the coordinates.
    pub fn is_power_map(&self) -> bool {
        let d = self.degree();
        let mono = |f: &BinaryForm, k: usize| {
            f.coeffs()
                .iter()
                .enumerate()
                .all(|(i, c)| if i == d - k { c.abs().is_one() } else { c.is_zero() })
        };
        mono(&self.u, d) && mono(&self.v, 0)
    }

    pub fn u(&self) -> &BinaryForm {
        &self.u
    }

    pub fn v(&self) -> &BinaryForm {
        &self.v
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }

    pub fn resultant(&self) -> &BigInt {
        &self.res
    }

    pub fn bad_primes(&self) -> &[BigUint] {
        &self.bad_primes
    }

    pub fn cofactors(&self) -> &NullstellensatzCofactors {
        &self.cofactors
    }

    pub fn constants(&self) -> &MapConstants {
        &self.constants
    }

    /// `v_p(Res(U, V)) = 0`.
    pub fn good_reduction_at(&self, p: &BigUint) -> bool {
        vp_int(&self.res, p) == Some(0)
    }

    /// `(U(a, b), V(a, b))` before any reduction.
    pub fn eval(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        (self.u.eval(a, b), self.v.eval(a, b))
    }

    /// One gcd-reduced step: the normalised image of `[a : b]` and the
    /// extracted gcd `g`, with `U(a, b) = +-g a'` and `V(a, b) = +-g b'`.
    pub fn step(&self, x: &ProjPointQ) -> (ProjPointQ, BigInt) {
        let (a, b) = (&x.coords()[0], &x.coords()[1]);
        let (ua, vb) = self.eval(a, b);
        // g divides Res, so reducing mod |Res| first keeps the gcd cheap.
        let r = self.res.abs();
        let g = if r.is_one() {
            BigInt::one()
        } else {
            (&ua % &r).gcd(&(&vb % &r)).gcd(&r)
        };
        let (na, nb) = if g.is_one() {
            (ua, vb)
        } else {
            (ua / &g, vb / &g)
        };
        // (a, b) coprime and g the full gcd of the images.
        let y = ProjPointQ::from_coprime(vec![na, nb]);
        (y, g)
    }

    pub fn apply(&self, x: &ProjPointQ) -> ProjPointQ {
        self.step(x).0
    }

    pub fn eval_complex(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (self.u.eval_complex(x, y), self.v.eval_complex(x, y))
    }

    /// `self o g`, i.e. `x -> self(g(x))`.
    pub fn compose(&self, g: &RationalMap) -> Result<RationalMap> {
        RationalMap::new(self.u.compose(&g.u, &g.v), self.v.compose(&g.u, &g.v))
    }

    /// Whether two maps define the same morphism: the pairs are proportional.
    pub fn same_map(&self, other: &RationalMap) -> bool {
        self.degree() == other.degree() && self.u.mul(&other.v) == other.u.mul(&self.v)
    }

    /// Exact test of `f o g = g o f`.
    pub fn commutes_with(&self, g: &RationalMap) -> Result<bool> {
        Ok(self.compose(g)?.same_map(&g.compose(self)?))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.u, self.v)
    }
}

/// `{"d": 2, "U": [1, 0, 1], "V": [0, 0, 1]}`; index `i` holds the
/// coefficient of `X^(d-i) Y^i`.
#[derive(Serialize, Deserialize)]
struct MapRepr {
    d: usize,
    #[serde(
        rename = "U",
        serialize_with = "crate::serde_util::ser_bigints",
        deserialize_with = "crate::serde_util::de_bigints"
    )]
    u: Vec<BigInt>,
    #[serde(
        rename = "V",
        serialize_with = "crate::serde_util::ser_bigints",
        deserialize_with = "crate::serde_util::de_bigints"
    )]
    v: Vec<BigInt>,
}

impl Serialize for RationalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapRepr {
            d: self.degree(),
            u: self.u.coeffs().to_vec(),
            v: self.v.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MapRepr::deserialize(d)?;
        if r.u.len() != r.d + 1 || r.v.len() != r.d + 1 {
            return Err(D::Error::custom(format!(
                "a degree {} map needs {} coefficients per form",
                r.d,
                r.d + 1
            )));
        }
        let u = BinaryForm::new(r.u).map_err(D::Error::custom)?;
        let v = BinaryForm::new(r.v).map_err(D::Error::custom)?;
        RationalMap::new(u, v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> ProjPointQ {
        ProjPointQ::from_i64(c).unwrap()
    }

    #[test]
    fn good_reduction_examples() {
        let sq = RationalMap::power_map(2).unwrap();
        let z2p1 = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap();
        for p in [2u32, 3, 5, 7, 101] {
            assert!(sq.good_reduction_at(&p.into()));
            assert!(z2p1.good_reduction_at(&p.into()));
        }
        // [X^2 - XY : Y^2] has resultant 1 as well: the Sylvester matrix is
        // triangular with unit diagonal.
        let f = RationalMap::from_i64(&[1, -1, 0], &[0, 0, 1]).unwrap();
        assert_eq!(f.resultant(), &BigInt::from(1));
        // [2X^2 : Y^2] has Res = 2
        let g = RationalMap::from_i64(&[2, 0, 0], &[0, 0, 1]).unwrap();
        assert!(!g.good_reduction_at(&2u32.into()));
        assert!(g.good_reduction_at(&3u32.into()));
        assert_eq!(g.bad_primes(), &[BigUint::from(2u32)]);
    }

    #[test]
    fn content_is_removed_and_degenerate_maps_rejected() {
        let f = RationalMap::from_i64(&[2, 0, 2], &[0, 0, 2]).unwrap();
        assert_eq!(f.u().coeffs()[0], BigInt::from(1));
        assert_eq!(
            RationalMap::from_i64(&[1, 1, 0], &[1, 0, -1]).unwrap_err(),
            Error::DegenerateMap
        );
        assert!(RationalMap::from_i64(&[1, 0], &[0, 1]).is_err());
    }

    #[test]
    fn constants_for_power_map_vanish() {
        let c = RationalMap::power_map(3).unwrap().constants().clone();
        assert_eq!(c.c_upper, 0.0);
        assert_eq!(c.c_lower, 0.0);
        assert_eq!(c.c_max, 0.0);
    }

    #[test]
    fn constants_for_z2_plus_1() {
        let c = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap().constants().clone();
        assert!((c.c_upper - 2f64.ln()).abs() < 1e-15);
        assert!((c.c_lower - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn step_extracts_gcd() {
        // [2X^2 : Y^2] at [1:1]: U = 2, V = 1, gcd 1; at [1:2]: (2, 4) -> [1:2], g = 2
        let g = RationalMap::from_i64(&[2, 0, 0], &[0, 0, 1]).unwrap();
        let (y, gg) = g.step(&pt(&[1, 2]));
        assert_eq!(y, pt(&[1, 2]));
        assert_eq!(gg, BigInt::from(2));
    }

    #[test]
    fn polynomial_constructor() {
        let f = RationalMap::polynomial(&IntPoly::from_i64(&[1, 0, 1])).unwrap();
        assert_eq!(f, RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap());
        assert_eq!(f.apply(&pt(&[0, 1])), pt(&[1, 1]));
        assert_eq!(f.apply(&pt(&[1, 0])), pt(&[1, 0]));
    }

    #[test]
    fn commuting_pairs() {
        let z2 = RationalMap::power_map(2).unwrap();
        let z3 = RationalMap::power_map(3).unwrap();
        assert!(z2.commutes_with(&z3).unwrap());
        let t2 = RationalMap::from_i64(&[1, 0, -2], &[0, 0, 1]).unwrap();
        let t3 = RationalMap::from_i64(&[1, 0, -3, 0], &[0, 0, 0, 1]).unwrap();
        assert!(t2.commutes_with(&t3).unwrap());
        let q = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap();
        assert!(!q.commutes_with(&z2).unwrap());
        assert!(z2.is_power_map() && !t2.is_power_map());
    }

    #[test]
    fn json_round_trip() {
        let f: RationalMap = serde_json::from_str(r#"{"d":2,"U":[1,0,1],"V":[0,0,1]}"#).unwrap();
        assert_eq!(f, RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap());
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"d":2,"U":["1","0","1"],"V":["0","0","1"]}"#);
        assert!(serde_json::from_str::<RationalMap>(r#"{"d":2,"U":[1,0],"V":[0,0,1]}"#).is_err());
        assert!(serde_json::from_str::<RationalMap>(r#"{"d":2,"U":[0,1,0],"V":[0,1,0]}"#).is_err());
    }
}
