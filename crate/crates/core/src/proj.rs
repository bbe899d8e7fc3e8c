//! Naive heights on `P^k(Q)`.
//!
//! A [`ProjPointQ`] always holds coprime integer coordinates whose first
//! nonzero entry is positive, so equal points have equal coordinate vectors.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{big_to_f64, log_abs, zeta};
use crate::poly::{nullstellensatz_cofactors, BinaryForm, IntPoly};
use crate::{Error, Result};

/// Largest number of points [`enumerate_points`] will materialise by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 5_000_000;

/// A point of `P^k(Q)` in normalised coprime integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPointQ {
    coords: Vec<BigInt>,
}

impl ProjPointQ {
    /// Normalises arbitrary integer coordinates: divides by the gcd and makes
    /// the first nonzero coordinate positive.
    pub fn new(mut coords: Vec<BigInt>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a projective point needs coordinates".into()));
        }
        let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(Error::InvalidInput("all coordinates are zero".into()));
        }
        let first_negative = coords.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative);
        let g = if first_negative { -g } else { g };
        if !g.is_one() {
            for c in coords.iter_mut() {
                *c = &*c / &g;
            }
        }
        Ok(ProjPointQ { coords })
    }

    /// Skips the gcd for coordinates already known to be coprime; only the
    /// sign is normalised.
    pub(crate) fn from_coprime(mut coords: Vec<BigInt>) -> Self {
        debug_assert!(coords.iter().any(|c| !c.is_zero()));
        if coords.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
            for c in coords.iter_mut() {
                *c = -&*c;
            }
        }
        ProjPointQ { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Clears denominators of rational coordinates.
    pub fn from_rationals(coords: &[BigRational]) -> Result<Self> {
        let l = coords.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        Self::new(coords.iter().map(|q| (q * &l).to_integer()).collect())
    }

    /// `[q : 1]` in `P^1`.
    pub fn affine(q: &BigRational) -> Self {
        Self::new(vec![q.numer().clone(), q.denom().clone()]).expect("denominator is nonzero")
    }

    /// `[1 : 0]` in `P^1`.
    pub fn infinity() -> Self {
        ProjPointQ {
            coords: vec![BigInt::one(), BigInt::zero()],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Multiplicative height `H(x) = max |x_i|`.
    pub fn exp_height(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// `h(x) = log max |x_i|`.
    pub fn height(&self) -> f64 {
        log_abs(&self.exp_height())
    }

    pub fn is_infinity(&self) -> bool {
        self.dim() == 1 && self.coords[1].is_zero()
    }

    /// The affine coordinate `x_0 / x_1` of a finite point of `P^1`.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.dim() != 1 || self.coords[1].is_zero() {
            None
        } else {
            Some(BigRational::new(self.coords[0].clone(), self.coords[1].clone()))
        }
    }

    /// Homogeneous coordinates as complex floats (dimension 1 only).
    pub fn to_complex_pair(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(big_to_f64(&self.coords[0]), 0.0),
            Complex64::new(big_to_f64(&self.coords[1]), 0.0),
        )
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Parses `"a/b"` as `[a:b]`, `"a"` as `[a:1]`, `"inf"` as `[1:0]`, and
/// `"[a:b:c]"` or `"a:b:c"` as a point of any dimension.
impl FromStr for ProjPointQ {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Self::infinity());
        }
        let parse = |t: &str| {
            BigInt::from_str(t.trim())
                .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
        };
        let inner = s.trim_start_matches('[').trim_end_matches(']');
        if inner.contains(':') {
            return Self::new(inner.split(':').map(parse).collect::<Result<_>>()?);
        }
        match inner.split_once('/') {
            Some((a, b)) => Self::new(vec![parse(a)?, parse(b)?]),
            None => Self::new(vec![parse(inner)?, BigInt::one()]),
        }
    }
}

impl Serialize for ProjPointQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::ser_bigints(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for ProjPointQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = crate::serde_util::de_bigints(d)?;
        ProjPointQ::new(coords).map_err(serde::de::Error::custom)
    }
}

/// `h(x)`, as a free function.
pub fn height(x: &ProjPointQ) -> f64 {
    x.height()
}

/// Largest integer `H` with `log H <= b`.
pub fn height_bound_from_log(b: f64) -> u64 {
    if b < 0.0 {
        return 0;
    }
    let mut h = b.exp().floor() as u64;
    while ((h + 1) as f64).ln() <= b {
        h += 1;
    }
    while h > 1 && (h as f64).ln() > b {
        h -= 1;
    }
    h.max(1)
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Calls `visit` once for every normalised point of `P^k(Q)` with
/// `max |x_i| = m` exactly. Shells are independent, so ranges of `m` can be
/// produced separately and merged.
pub fn for_each_in_shell(k: usize, m: i64, mut visit: impl FnMut(&[i64])) {
    assert!(m >= 1);
    let n = k + 1;
    let mut c = vec![0i64; n];
    // j is the first index with |c_j| = m.
    for j in 0..n {
        for sign in [1i64, -1] {
            c[j] = sign * m;
            // Earlier coordinates lie in (-m, m), later ones in [-m, m].
            for (i, ci) in c.iter_mut().enumerate() {
                if i < j {
                    *ci = -(m - 1);
                } else if i > j {
                    *ci = -m;
                }
            }
            loop {
                let first_nonzero = c.iter().find(|&&v| v != 0).copied().unwrap_or(0);
                if first_nonzero > 0 {
                    let g = c.iter().fold(0, |g, &v| gcd_i64(g, v));
                    if g == 1 {
                        visit(&c);
                    }
                }
                // odometer over all indices except j
                let mut idx = n;
                let mut advanced = false;
                while idx > 0 {
                    idx -= 1;
                    if idx == j {
                        continue;
                    }
                    let hi = if idx < j { m - 1 } else { m };
                    let lo = -hi;
                    if c[idx] < hi {
                        c[idx] += 1;
                        advanced = true;
                        break;
                    }
                    c[idx] = lo;
                }
                if !advanced {
                    break;
                }
            }
        }
    }
}

/// Number of normalised points with `H(x) <= h_max`, without storing them.
pub fn count_points(k: usize, h_max: u64) -> u64 {
    let mut n = 0u64;
    for m in 1..=h_max as i64 {
        for_each_in_shell(k, m, |_| n += 1);
    }
    n
}

/// Points of `P^k(Q)` with `H(x) <= h_max`, sorted lexicographically.
pub fn enumerate_points_by_height(k: usize, h_max: u64, cap: usize) -> Result<Vec<ProjPointQ>> {
    // Every point has a representative in [-H, H]^(k+1) up to sign.
    let bound = ((2.0 * h_max as f64 + 1.0).powi(k as i32 + 1) - 1.0) / 2.0;
    if bound > cap as f64 {
        return Err(Error::ResourceLimit {
            what: format!("enumerating P^{k}(Q) up to H = {h_max}"),
            bound: format!("up to {bound:.3e} points, cap {cap}"),
        });
    }
    let mut out: Vec<ProjPointQ> = Vec::new();
    for m in 1..=h_max as i64 {
        for_each_in_shell(k, m, |c| {
            out.push(ProjPointQ {
                coords: c.iter().map(|&v| BigInt::from(v)).collect(),
            })
        });
    }
    out.sort();
    Ok(out)
}

/// Points of `P^k(Q)` with `h(x) <= b`, i.e. `H(x) <= e^b`, sorted lexicographically.
pub fn enumerate_points(k: usize, b: f64) -> Result<Vec<ProjPointQ>> {
    if !(b >= 0.0) {
        return Err(Error::InvalidInput(format!("height bound must be nonnegative, got {b}")));
    }
    if b > 40.0 {
        return Err(Error::ResourceLimit {
            what: format!("enumerating P^{k}(Q) up to h = {b}"),
            bound: format!("H up to e^{b}"),
        });
    }
    enumerate_points_by_height(k, height_bound_from_log(b), DEFAULT_ENUMERATION_CAP)
}

/// Result of comparing the point count with Schanuel's asymptotic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchanuelReport {
    pub k: usize,
    pub bound: u64,
    pub count: u64,
    pub predicted: f64,
    pub ratio: f64,
}

/// `N(B) / (2^k B^(k+1) / zeta(k+1))` where `N(B)` counts points with `H <= B`.
pub fn schanuel_ratio(k: usize, b: u64) -> Result<SchanuelReport> {
    if b < 2 {
        return Err(Error::InvalidInput(format!("Schanuel ratio needs B >= 2, got {b}")));
    }
    let bound = (2.0 * b as f64 + 1.0).powi(k as i32 + 1);
    if bound > 1e10 {
        return Err(Error::ResourceLimit {
            what: format!("counting P^{k}(Q) up to H = {b}"),
            bound: format!("{bound:.3e} candidate tuples"),
        });
    }
    let count = count_points(k, b);
    let predicted = 2f64.powi(k as i32) * (b as f64).powi(k as i32 + 1) / zeta(k as f64 + 1.0);
    Ok(SchanuelReport {
        k,
        bound: b,
        count,
        predicted,
        ratio: count as f64 / predicted,
    })
}

/// Segre embedding: coordinates `x_i y_j` in lexicographic `(i, j)` order.
pub fn segre(x: &ProjPointQ, y: &ProjPointQ) -> ProjPointQ {
    let coords = x
        .coords
        .iter()
        .flat_map(|a| y.coords.iter().map(move |b| a * b))
        .collect();
    ProjPointQ::new(coords).expect("product of nonzero points is nonzero")
}

/// Exponent vectors of degree `d` in `n` variables, lexicographically
/// decreasing (so `x_0^d` comes first).
pub fn monomial_exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

fn monomial_value(x: &[BigInt], e: &[u32]) -> BigInt {
    x.iter()
        .zip(e)
        .fold(BigInt::one(), |acc, (xi, &ei)| acc * xi.pow(ei))
}

/// Veronese embedding of degree `d`: all degree-`d` monomials.
pub fn veronese(x: &ProjPointQ, d: u32) -> Result<ProjPointQ> {
    if d == 0 {
        return Err(Error::InvalidInput("Veronese degree must be at least 1".into()));
    }
    let coords = monomial_exponents(x.coords.len(), d)
        .iter()
        .map(|e| monomial_value(&x.coords, e))
        .collect();
    ProjPointQ::new(coords)
}

/// Linear projection `[x_0 : ... : x_k] -> [x_i : i in keep]`.
pub fn linear_projection(x: &ProjPointQ, keep: &[usize]) -> Result<ProjPointQ> {
    if keep.is_empty() || keep.iter().any(|&i| i > x.dim()) {
        return Err(Error::InvalidInput("projection indices out of range".into()));
    }
    let coords: Vec<BigInt> = keep.iter().map(|&i| x.coords[i].clone()).collect();
    if coords.iter().all(Zero::is_zero) {
        return Err(Error::Indeterminate(format!("{x} lies on the projection centre")));
    }
    ProjPointQ::new(coords)
}

/// Homogeneous polynomial in `n` variables as `(exponents, coefficient)` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomForm {
    nvars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl HomForm {
    pub fn new(nvars: usize, terms: Vec<(Vec<u32>, BigInt)>) -> Result<Self> {
        let mut merged: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidInput(format!(
                    "monomial {e:?} has {} exponents, expected {nvars}",
                    e.len()
                )));
            }
            *merged.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<(Vec<u32>, BigInt)> =
            merged.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let degrees: Vec<u32> = terms.iter().map(|(e, _)| e.iter().sum()).collect();
        let degree = degrees.first().copied().unwrap_or(0);
        if degrees.iter().any(|&d| d != degree) {
            return Err(Error::InvalidInput("form is not homogeneous".into()));
        }
        Ok(HomForm {
            nvars,
            degree,
            terms,
        })
    }

    pub fn from_binary(f: &BinaryForm) -> Self {
        let d = f.degree() as u32;
        let terms = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![d - i as u32, i as u32], c.clone()))
            .collect();
        HomForm {
            nvars: 2,
            degree: d,
            terms,
        }
    }

    /// `x_i^d`.
    pub fn power(nvars: usize, i: usize, d: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = d;
        HomForm {
            nvars,
            degree: d,
            terms: vec![(e, BigInt::one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn l1_norm(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).sum()
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| c * monomial_value(x, e))
            .sum()
    }

    /// The binary form with the same coefficients (two variables only).
    pub fn to_binary(&self) -> Option<BinaryForm> {
        if self.nvars != 2 {
            return None;
        }
        let d = self.degree as usize;
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (e, c) in &self.terms {
            coeffs[e[1] as usize] = c.clone();
        }
        Some(BinaryForm::new(coeffs).unwrap_or_else(|_| BinaryForm::zero(d)))
    }
}

/// Explicit constants with `d h(x) - c_lower <= h(f(x)) <= d h(x) + c_upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctorialityConstants {
    pub c_upper: f64,
    /// Unavailable when `k >= 2`, or when no pair of forms is coprime.
    pub c_lower: Option<f64>,
}

/// A morphism `P^k -> P^m` given by `m + 1` forms of a common degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomMorphism {
    source_dim: usize,
    degree: u32,
    forms: Vec<HomForm>,
    base_point_free: bool,
}

impl HomMorphism {
    /// For `k = 1` base-point-freeness is decided exactly and `assume_bpf` is
    /// ignored; for `k >= 2` it is the caller's assertion.
    pub fn new(source_dim: usize, forms: Vec<HomForm>, assume_bpf: bool) -> Result<Self> {
        if forms.is_empty() || forms.iter().all(HomForm::is_zero) {
            return Err(Error::InvalidInput("a morphism needs a nonzero form".into()));
        }
        if forms.iter().any(|f| f.nvars != source_dim + 1) {
            return Err(Error::InvalidInput("form arity does not match the source dimension".into()));
        }
        let degree = forms.iter().find(|f| !f.is_zero()).unwrap().degree;
        if forms.iter().any(|f| !f.is_zero() && f.degree != degree) {
            return Err(Error::InvalidInput("forms must share a degree".into()));
        }
        let base_point_free = if source_dim == 1 {
            binary_forms_base_point_free(&forms)
        } else {
            assume_bpf
        };
        Ok(HomMorphism {
            source_dim,
            degree,
            forms,
            base_point_free,
        })
    }

    pub fn from_binary_forms(forms: &[BinaryForm]) -> Result<Self> {
        Self::new(1, forms.iter().map(HomForm::from_binary).collect(), false)
    }

    /// `[x_0^d : ... : x_k^d]`.
    pub fn power_map(k: usize, d: u32) -> Self {
        let forms = (0..=k).map(|i| HomForm::power(k + 1, i, d)).collect();
        Self::new(k, forms, true).expect("power map is well formed")
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn forms(&self) -> &[HomForm] {
        &self.forms
    }

    pub fn base_point_free(&self) -> bool {
        self.base_point_free
    }

    pub fn apply(&self, x: &ProjPointQ) -> Result<ProjPointQ> {
        if x.dim() != self.source_dim {
            return Err(Error::InvalidInput(format!(
                "point of dimension {} for a map from P^{}",
                x.dim(),
                self.source_dim
            )));
        }
        let vals: Vec<BigInt> = self.forms.iter().map(|f| f.eval(&x.coords)).collect();
        if vals.iter().all(Zero::is_zero) {
            return Err(Error::Indeterminate(x.to_string()));
        }
        ProjPointQ::new(vals)
    }

    /// `c_upper = log max_i |F_i|_1`. On `P^1` the lower constant comes from
    /// the cofactor identity `A U + B V = Res X^(2d-1)` for a coprime pair
    /// `(U, V)` among the forms: with `C = max(|A_X|_1 + |B_X|_1, |A_Y|_1 + |B_Y|_1)`,
    /// `|Res| H^d <= C max(|U|, |V|)`, and the gcd of the values divides `Res`,
    /// so `h(f(x)) >= d h(x) - log C`.
    pub fn functoriality_constants(&self) -> FunctorialityConstants {
        let c_upper = self
            .forms
            .iter()
            .map(|f| log_abs(&f.l1_norm()))
            .fold(f64::NEG_INFINITY, f64::max);
        let c_lower = if self.source_dim == 1 && self.base_point_free {
            self.best_coprime_pair_constant()
        } else {
            None
        };
        FunctorialityConstants { c_upper, c_lower }
    }

    fn best_coprime_pair_constant(&self) -> Option<f64> {
        let binary: Vec<BinaryForm> = self.forms.iter().filter_map(HomForm::to_binary).collect();
        let mut best: Option<f64> = None;
        for i in 0..binary.len() {
            for j in i + 1..binary.len() {
                if binary[i].is_zero() || binary[j].is_zero() {
                    continue;
                }
                if let Ok(c) = nullstellensatz_cofactors(&binary[i], &binary[j]) {
                    let v = log_abs(&c.l1_bound());
                    best = Some(best.map_or(v, |b: f64| b.min(v)));
                }
            }
        }
        best
    }
}

/// Binary forms have a common projective zero iff they all vanish at `[1:0]`
/// or their dehomogenisations share a factor.
fn binary_forms_base_point_free(forms: &[HomForm]) -> bool {
    let binary: Vec<BinaryForm> = forms
        .iter()
        .filter(|f| !f.is_zero())
        .filter_map(HomForm::to_binary)
        .collect();
    if binary.iter().all(|f| f.coeffs()[0].is_zero()) {
        return false;
    }
    let mut g = IntPoly::zero();
    for f in &binary {
        g = g.gcd(&f.dehomogenize());
    }
    g.degree() == 0
}

/// Integer-valued height `H` of a point, as `u64` when it fits.
pub fn exp_height_u64(x: &ProjPointQ) -> Option<u64> {
    x.exp_height().to_u64()
}
