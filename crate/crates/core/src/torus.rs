//! Points of the torus `G_m^k` over `Q-bar`, their heights, and monomial maps
//! `z -> z_1^a_1 ... z_k^a_k`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::{height_algebraic_tol, mahler_measure, AlgebraicNumber};
use crate::poly::{resultant_univariate, IntPoly};
use crate::proj::ProjPointQ;
use crate::{Error, Result, DEFAULT_TOL};

/// Largest degree for which product polynomials are formed exactly.
pub const MAX_PRODUCT_DEGREE: usize = 16;

/// One coordinate of a torus point.
#[derive(Clone, Debug, PartialEq)]
pub enum TorusCoord {
    Rational(BigRational),
    /// The `root_index`-th root, in the order of [`AlgebraicNumber::conjugates`].
    Algebraic { number: AlgebraicNumber, root_index: usize },
}

impl TorusCoord {
    /// Degree-1 algebraic numbers become rationals; zero is rejected.
    pub fn algebraic(number: AlgebraicNumber, root_index: usize) -> Result<Self> {
        if root_index >= number.degree() {
            return Err(Error::InvalidInput(format!(
                "root index {root_index} out of range for degree {}",
                number.degree()
            )));
        }
        match number.as_rational() {
            Some(q) => Self::rational(q),
            None => Ok(TorusCoord::Algebraic { number, root_index }),
        }
    }

    pub fn rational(q: BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidInput("torus coordinates must be nonzero".into()));
        }
        Ok(TorusCoord::Rational(q))
    }

    pub fn from_i64(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Self::rational(BigRational::new(n.into(), d.into()))
    }

    /// The coordinate as an algebraic number (degree 1 for rationals).
    pub fn number(&self) -> AlgebraicNumber {
        match self {
            TorusCoord::Rational(q) => AlgebraicNumber::from_rational(q),
            TorusCoord::Algebraic { number, .. } => number.clone(),
        }
    }

    pub fn height(&self) -> Result<f64> {
        match self {
            TorusCoord::Rational(q) => Ok(ProjPointQ::affine(q).height()),
            TorusCoord::Algebraic { number, .. } => Ok(height_algebraic_tol(number, DEFAULT_TOL)?.0),
        }
    }

    pub fn to_complex(&self) -> Result<Complex64> {
        match self {
            TorusCoord::Rational(q) => Ok(Complex64::new(crate::numeric::rational_to_f64(q), 0.0)),
            TorusCoord::Algebraic { number, root_index } => {
                Ok(number.conjugates(DEFAULT_TOL)?[*root_index].value)
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match self {
            TorusCoord::Rational(q) => Self::rational(q.recip()),
            TorusCoord::Algebraic { number, .. } => {
                // Root order is by (re, im), which inversion does not preserve.
                let z = self.to_complex()?.inv();
                let inv = number.inverse()?;
                let roots = inv.conjugates(DEFAULT_TOL)?;
                let idx = nearest(&roots.iter().map(|r| r.value).collect::<Vec<_>>(), z);
                Self::algebraic(inv, idx)
            }
        }
    }
}

fn nearest(points: &[Complex64], z: Complex64) -> usize {
    points
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - z).norm().total_cmp(&(b.1 - z).norm()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoordRepr {
    Rational {
        rational: String,
    },
    Algebraic {
        minpoly: IntPoly,
        root_index: usize,
    },
}

impl Serialize for TorusCoord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TorusCoord::Rational(q) => CoordRepr::Rational {
                rational: crate::serde_util::rational_to_string(q),
            },
            TorusCoord::Algebraic { number, root_index } => CoordRepr::Algebraic {
                minpoly: number.minpoly().clone(),
                root_index: *root_index,
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusCoord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CoordRepr::deserialize(d)? {
            CoordRepr::Rational { rational } => {
                let q = crate::serde_util::parse_rational(&rational)
                    .ok_or_else(|| D::Error::custom(format!("not a rational: {rational:?}")))?;
                TorusCoord::rational(q).map_err(D::Error::custom)
            }
            CoordRepr::Algebraic { minpoly, root_index } => {
                let n = AlgebraicNumber::new(minpoly).map_err(D::Error::custom)?;
                TorusCoord::algebraic(n, root_index).map_err(D::Error::custom)
            }
        }
    }
}

/// A point of `G_m^k`: nonzero algebraic coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint {
    coords: Vec<TorusCoord>,
}

impl TorusPoint {
    pub fn new(coords: Vec<TorusCoord>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a torus point needs coordinates".into()));
        }
        Ok(TorusPoint { coords })
    }

    pub fn from_rationals(q: &[(i64, i64)]) -> Result<Self> {
        Self::new(q.iter().map(|&(n, d)| TorusCoord::from_i64(n, d)).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[TorusCoord] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(|c| matches!(c, TorusCoord::Rational(_)))
    }
}

/// `sum_i h(x_i)`.
pub fn torus_height(x: &TorusPoint) -> Result<f64> {
    x.coords.iter().map(TorusCoord::height).sum()
}

/// Image of a torus point under a monomial map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pushforward {
    /// Exact value when every coordinate is rational.
    #[serde(
        serialize_with = "ser_opt_rational",
        deserialize_with = "de_opt_rational",
        default
    )]
    pub exact: Option<BigRational>,
    /// `prod x_i^a_i` at the chosen roots.
    pub value: [f64; 2],
    /// Height of the image: exact for rationals, otherwise the mean height
    /// over all conjugate tuples from the product polynomial. `None` when
    /// that polynomial would exceed [`MAX_PRODUCT_DEGREE`].
    pub height: Option<f64>,
    /// `(sum |a_i|) max_i h(x_i)`.
    pub bound: f64,
    pub holds: Option<bool>,
    /// Integer polynomial vanishing on the whole image cloud, when formed.
    pub product_polynomial: Option<IntPoly>,
    /// Images of all conjugate tuples.
    #[serde(skip)]
    pub cloud: Vec<Complex64>,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_str(&crate::serde_util::rational_to_string(q)),
        None => s.serialize_none(),
    }
}

fn de_opt_rational<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
    let s: Option<String> = Option::deserialize(d)?;
    s.map(|s| {
        crate::serde_util::parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {s:?}")))
    })
    .transpose()
}

/// Cap on the size of the conjugate-tuple cloud.
const MAX_CLOUD: usize = 100_000;

pub fn monomial_pushforward(x: &TorusPoint, a: &[i64]) -> Result<Pushforward> {
    if a.len() != x.dim() {
        return Err(Error::InvalidInput(format!(
            "exponent vector has length {}, point has dimension {}",
            a.len(),
            x.dim()
        )));
    }
    if a.iter().all(|&e| e == 0) {
        return Err(Error::InvalidInput("the exponent vector must be nonzero".into()));
    }
    let l1: f64 = a.iter().map(|e| e.unsigned_abs() as f64).sum();
    let max_h = x
        .coords
        .iter()
        .map(TorusCoord::height)
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let bound = l1 * max_h;

    let mut value = Complex64::one();
    for (c, &e) in x.coords.iter().zip(a) {
        value *= c.to_complex()?.powi(e as i32);
    }

    if x.is_rational() {
        let mut q = BigRational::one();
        for (c, &e) in x.coords.iter().zip(a) {
            if let TorusCoord::Rational(r) = c {
                q *= Pow::pow(r, e as i32);
            }
        }
        let h = ProjPointQ::affine(&q).height();
        return Ok(Pushforward {
            exact: Some(q),
            value: [value.re, value.im],
            height: Some(h),
            bound,
            holds: Some(h <= bound * (1.0 + 4.0 * f64::EPSILON) + 1e-300),
            product_polynomial: None,
            cloud: vec![value],
        });
    }

    // Cloud over all conjugate tuples.
    let mut cloud = vec![Complex64::one()];
    for (c, &e) in x.coords.iter().zip(a) {
        if e == 0 {
            continue;
        }
        let roots: Vec<Complex64> = c.number().conjugates(DEFAULT_TOL)?.iter().map(|r| r.value).collect();
        if cloud.len() * roots.len() > MAX_CLOUD {
            return Err(Error::ResourceLimit {
                what: "monomial image cloud".into(),
                bound: format!("more than {MAX_CLOUD} conjugate tuples"),
            });
        }
        cloud = cloud
            .iter()
            .flat_map(|w| roots.iter().map(move |z| w * z.powi(e as i32)))
            .collect();
    }

    let product_polynomial = monomial_product_polynomial(x, a)?;
    let height = match &product_polynomial {
        Some(p) => Some(mahler_measure(p, DEFAULT_TOL)?.log_measure / p.degree() as f64),
        None => None,
    };
    let holds = height.map(|h| h <= bound + 1e-9);
    Ok(Pushforward {
        exact: None,
        value: [value.re, value.im],
        height,
        bound,
        holds,
        product_polynomial,
        cloud,
    })
}

/// Primitive integer polynomial with roots `prod sigma_i(x_i)^a_i` over all
/// conjugate tuples, or `None` beyond [`MAX_PRODUCT_DEGREE`].
pub fn monomial_product_polynomial(x: &TorusPoint, a: &[i64]) -> Result<Option<IntPoly>> {
    let total: usize = x
        .coords
        .iter()
        .zip(a)
        .filter(|(_, &e)| e != 0)
        .map(|(c, _)| c.number().degree())
        .product();
    if total > MAX_PRODUCT_DEGREE {
        return Ok(None);
    }
    let mut acc: Option<IntPoly> = None;
    for (c, &e) in x.coords.iter().zip(a) {
        if e == 0 {
            continue;
        }
        let p = power_polynomial(c.number().minpoly(), e);
        acc = Some(match acc {
            None => p,
            Some(q) => product_polynomial(&q, &p),
        });
    }
    Ok(acc.map(|p| p.primitive()))
}

/// Polynomial whose roots are the `e`-th powers of the roots of `p`:
/// `Res_Y(p(Y), X - Y^e)` for `e > 0`, via the reversal for `e < 0`.
pub fn power_polynomial(p: &IntPoly, e: i64) -> IntPoly {
    let base = if e < 0 { p.reverse() } else { p.clone() };
    let k = e.unsigned_abs() as usize;
    if k == 1 {
        return base.primitive();
    }
    let n = base.degree();
    interpolate_resultant(n, |x| {
        // X - Y^k as a polynomial in Y with X = x
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = x.clone();
        c[k] = -BigInt::one();
        resultant_univariate(&base, &IntPoly::new(c))
    })
    .primitive()
}

/// Polynomial whose roots are all products `alpha_i beta_j`:
/// `Res_Y(A(Y), Y^m B(X / Y))` with `m = deg B`.
pub fn product_polynomial(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (n, m) = (a.degree(), b.degree());
    interpolate_resultant(n * m, |x| {
        // Y^m B(x / Y) = sum_k b_k x^k Y^(m - k)
        let mut c = vec![BigInt::zero(); m + 1];
        let mut xk = BigInt::one();
        for k in 0..=m {
            c[m - k] = b.coeff(k) * &xk;
            xk *= x;
        }
        resultant_univariate(a, &IntPoly::new(c))
    })
    .primitive()
}

/// The polynomial of degree at most `deg` through `(x, f(x))` for
/// `x = 0..=deg`, by Newton divided differences over `Q`.
fn interpolate_resultant(deg: usize, f: impl Fn(&BigInt) -> BigInt) -> IntPoly {
    let xs: Vec<BigInt> = (0..=deg).map(BigInt::from).collect();
    let mut dd: Vec<BigRational> = xs.iter().map(|x| BigRational::from_integer(f(x))).collect();
    for j in 1..=deg {
        for i in (j..=deg).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / BigRational::from_integer(&xs[i] - &xs[i - j]);
        }
    }
    // Expand the Newton form.
    let mut poly: Vec<BigRational> = vec![BigRational::zero(); deg + 1];
    for i in (0..=deg).rev() {
        // poly = poly * (X - x_i) + dd[i]
        let mut next = vec![BigRational::zero(); deg + 1];
        for k in 0..deg {
            next[k + 1] += &poly[k];
        }
        for k in 0..=deg {
            next[k] -= &poly[k] * BigRational::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        poly = next;
    }
    let denom = poly.iter().fold(BigInt::one(), |l, q| num_integer::Integer::lcm(&l, q.denom()));
    IntPoly::new(poly.iter().map(|q| (q * BigRational::from_integer(denom.clone())).to_integer()).collect())
}

/// Outcome of comparing `h(alpha beta)` with `h(alpha) + h(beta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    /// `h(alpha beta)`, or the mean over conjugate pairs.
    pub lhs: Option<f64>,
    pub rhs: f64,
    pub holds: Option<bool>,
    pub method: SubadditivityMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubadditivityMethod {
    /// `H(alpha beta) <= H(alpha) H(beta)` in integers.
    ExactRational,
    ProductPolynomial,
    /// The product polynomial would exceed the degree cap.
    Skipped,
}

pub fn subadditivity_check(alpha: &AlgebraicNumber, beta: &AlgebraicNumber) -> Result<SubadditivityReport> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::InvalidInput("subadditivity is checked for nonzero numbers".into()));
    }
    let (ha, _) = height_algebraic_tol(alpha, DEFAULT_TOL)?;
    let (hb, _) = height_algebraic_tol(beta, DEFAULT_TOL)?;
    let rhs = ha + hb;
    if let (Some(p), Some(q)) = (alpha.as_rational(), beta.as_rational()) {
        let hp = ProjPointQ::affine(&p).exp_height();
        let hq = ProjPointQ::affine(&q).exp_height();
        let prod = ProjPointQ::affine(&(&p * &q));
        return Ok(SubadditivityReport {
            lhs: Some(prod.height()),
            rhs,
            holds: Some(prod.exp_height().abs() <= hp * hq),
            method: SubadditivityMethod::ExactRational,
        });
    }
    if alpha.degree() * beta.degree() > MAX_PRODUCT_DEGREE {
        return Ok(SubadditivityReport {
            lhs: None,
            rhs,
            holds: None,
            method: SubadditivityMethod::Skipped,
        });
    }
    let p = product_polynomial(alpha.minpoly(), beta.minpoly());
    let m = mahler_measure(&p, DEFAULT_TOL)?;
    let lhs = m.log_measure / p.degree() as f64;
    Ok(SubadditivityReport {
        lhs: Some(lhs),
        rhs,
        holds: Some(lhs <= rhs + 1e-9),
        method: SubadditivityMethod::ProductPolynomial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cyclotomic;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn root_of_unity(n: usize) -> TorusCoord {
        TorusCoord::algebraic(AlgebraicNumber::new(cyclotomic(n)).unwrap(), 0).unwrap()
    }

    #[test]
    fn heights() {
        let x = TorusPoint::new(vec![root_of_unity(5), root_of_unity(7)]).unwrap();
        assert!(torus_height(&x).unwrap().abs() < 1e-12);
        let x = TorusPoint::from_rationals(&[(2, 1), (1, 2)]).unwrap();
        assert!((torus_height(&x).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-15);
        let cbrt2 = TorusCoord::algebraic(AlgebraicNumber::from_i64(&[-2, 0, 0, 1]).unwrap(), 0).unwrap();
        let x = TorusPoint::new(vec![cbrt2, TorusCoord::from_i64(3, 1).unwrap()]).unwrap();
        assert!((torus_height(&x).unwrap() - (2f64.ln() / 3.0 + 3f64.ln())).abs() < 1e-10);
        assert!(TorusCoord::from_i64(0, 5).is_err());
    }

    #[test]
    fn rational_pushforwards() {
        let x = TorusPoint::from_rationals(&[(2, 1), (3, 1)]).unwrap();
        let p = monomial_pushforward(&x, &[1, -1]).unwrap();
        assert_eq!(p.exact, Some(q(2, 3)));
        assert!((p.height.unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(p.holds, Some(true));
        let x = TorusPoint::from_rationals(&[(4, 1), (2, 1)]).unwrap();
        let p = monomial_pushforward(&x, &[1, -2]).unwrap();
        assert_eq!(p.exact, Some(q(1, 1)));
        assert_eq!(p.height, Some(0.0));
        assert!(monomial_pushforward(&x, &[0, 0]).is_err());
    }

    #[test]
    fn roots_of_unity_pushforward() {
        let z8 = root_of_unity(8);
        let x = TorusPoint::new(vec![z8.clone(), z8]).unwrap();
        let p = monomial_pushforward(&x, &[1, 1]).unwrap();
        assert!(p.height.unwrap().abs() < 1e-9);
        let v = Complex64::new(p.value[0], p.value[1]);
        // the chosen root squared is a 4th root of unity
        assert!((v.powi(4) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn power_and_product_polynomials() {
        // roots of X^2 - 2 squared: 2, 2
        let p = power_polynomial(&IntPoly::from_i64(&[-2, 0, 1]), 2);
        assert_eq!(p, IntPoly::from_i64(&[4, -4, 1]));
        // inverse of 2X - 1 is 2
        assert_eq!(power_polynomial(&IntPoly::from_i64(&[-1, 2]), -1), IntPoly::from_i64(&[-2, 1]));
        // sqrt2 * sqrt3 and conjugates: X^4 - 12 X^2 + 36 = (X^2 - 6)^2
        let p = product_polynomial(&IntPoly::from_i64(&[-2, 0, 1]), &IntPoly::from_i64(&[-3, 0, 1]));
        assert_eq!(p, IntPoly::from_i64(&[36, 0, -12, 0, 1]));
    }

    #[test]
    fn subadditivity_examples() {
        let two = AlgebraicNumber::from_i64(&[-2, 1]).unwrap();
        let three = AlgebraicNumber::from_i64(&[-3, 1]).unwrap();
        let half = AlgebraicNumber::from_i64(&[-1, 2]).unwrap();
        let r = subadditivity_check(&two, &three).unwrap();
        assert_eq!(r.method, SubadditivityMethod::ExactRational);
        assert!((r.lhs.unwrap() - r.rhs).abs() < 1e-15);
        let r = subadditivity_check(&two, &half).unwrap();
        assert_eq!(r.lhs, Some(0.0));
        assert_eq!(r.holds, Some(true));
        let s2 = AlgebraicNumber::from_i64(&[-2, 0, 1]).unwrap();
        let r = subadditivity_check(&s2, &s2).unwrap();
        assert_eq!(r.method, SubadditivityMethod::ProductPolynomial);
        assert!((r.lhs.unwrap() - 2f64.ln()).abs() < 1e-10);
        assert!((r.rhs - 2f64.ln()).abs() < 1e-10);
        let big = AlgebraicNumber::new(cyclotomic(17)).unwrap();
        assert_eq!(subadditivity_check(&big, &s2).unwrap().method, SubadditivityMethod::Skipped);
    }

    #[test]
    fn inversion_keeps_height() {
        let c = TorusCoord::algebraic(AlgebraicNumber::from_i64(&[-1, 1, 0, 2]).unwrap(), 1).unwrap();
        let i = c.inverse().unwrap();
        assert!((c.height().unwrap() - i.height().unwrap()).abs() < 1e-10);
        assert!((c.to_complex().unwrap() * i.to_complex().unwrap() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn json() {
        let s = r#"[{"rational":"2/3"},{"minpoly":[-2,0,1],"root_index":1}]"#;
        let x: TorusPoint = serde_json::from_str(s).unwrap();
        assert_eq!(x.dim(), 2);
        let back = serde_json::to_string(&x).unwrap();
        assert_eq!(back, r#"[{"rational":"2/3"},{"minpoly":["-2","0","1"],"root_index":1}]"#);
        assert!(serde_json::from_str::<TorusPoint>(r#"[{"rational":"0"}]"#).is_err());
    }
}
