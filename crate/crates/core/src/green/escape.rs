use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::RationalMap;
use crate::{Error, Result};

/// The homogeneous escape rate `Lambda(x, y) = lim d^-n log |F^n(x, y)|`
/// of a map at complex points, with `|(x, y)| = max(|x|, |y|)`.
///
/// Each step divides by the current norm and accumulates the scaled log;
/// the remainder after `K` steps lies in an interval of half-width
/// `d^-K r` fixed by the map constants.
#[derive(Clone, Debug)]
pub struct EscapeRateField {
    map: RationalMap,
    u: Vec<f64>,
    v: Vec<f64>,
    // Partial derivatives of U and V in x and y, as forms of degree d - 1.
    partials: [Vec<f64>; 4],
    tol: f64,
    depth: usize,
    tail_mid: f64,
    tail_radius: f64,
}

/// Position of a point relative to the filled Julia set `{Lambda <= 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Inside,
    Outside,
    BoundaryUncertain,
}

impl EscapeRateField {
    /// Picks the smallest depth with tail bound at most `tol / 10`.
    pub fn new(map: &RationalMap, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        let d = map.degree() as f64;
        let k = map.constants();
        let lo = -k.c_lower_arch;
        let hi = k.c_upper;
        let tail_mid = (lo + hi) / 2.0 / (d - 1.0);
        let tail_radius = ((hi - lo) / 2.0).max(0.0) / (d - 1.0);
        let mut depth = 0;
        let mut w = tail_radius;
        while w > tol / 10.0 {
            w /= d;
            depth += 1;
        }
        let to_f64 = |c: &[num_bigint::BigInt]| c.iter().map(crate::numeric::big_to_f64).collect();
        let u: Vec<f64> = to_f64(map.u().coeffs());
        let v: Vec<f64> = to_f64(map.v().coeffs());
        let dd = map.degree();
        let dx = |c: &[f64]| (0..dd).map(|i| c[i] * (dd - i) as f64).collect::<Vec<f64>>();
        let dy = |c: &[f64]| (1..=dd).map(|i| c[i] * i as f64).collect::<Vec<f64>>();
        Ok(EscapeRateField {
            partials: [dx(&u), dy(&u), dx(&v), dy(&v)],
            u,
            v,
            map: map.clone(),
            tol,
            depth,
            tail_mid,
            tail_radius,
        })
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Certified bound on the truncation error of [`Self::escape_rate`].
    pub fn tail_bound(&self) -> f64 {
        self.tail_radius / (self.map.degree() as f64).powi(self.depth as i32)
    }

    /// `-log |Res| / (d (d - 1))`, the normalising term of the pairing.
    pub fn res_term(&self) -> f64 {
        let d = self.map.degree() as f64;
        -crate::numeric::log_abs(self.map.resultant()) / (d * (d - 1.0))
    }

    fn apply(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        (hom_eval(&self.u, x, y), hom_eval(&self.v, x, y))
    }

    /// `Lambda(x, y)`; the truncation error is at most [`Self::tail_bound`].
    pub fn escape_rate(&self, x: Complex64, y: Complex64) -> Result<f64> {
        let s = x.norm().max(y.norm());
        if s == 0.0 || !s.is_finite() {
            return Err(Error::InvalidInput("the escape rate needs a nonzero finite point".into()));
        }
        let d = self.map.degree() as f64;
        let mut acc = s.ln();
        let (mut x, mut y) = (x / s, y / s);
        let mut w = 1.0;
        for _ in 0..self.depth {
            let (u, v) = self.apply(x, y);
            let m = u.norm().max(v.norm());
            w /= d;
            acc += w * m.ln();
            x = u / m;
            y = v / m;
        }
        Ok(acc + w * self.tail_mid)
    }

    /// `Lambda(z, 1)` and its gradient in `(Re z, Im z)`.
    ///
    /// The derivative of the unnormalised orbit `F^K(z, 1)` is carried along
    /// with it; with `c = <W, W'> / |W|^2` for the final vector `W`, the
    /// gradient of `d^-K log |W|` is `d^-K (Re c, -Im c)`.
    pub fn escape_rate_affine_grad(&self, z: Complex64) -> (f64, [f64; 2]) {
        let one = Complex64::new(1.0, 0.0);
        let d = self.map.degree() as f64;
        let s = z.norm().max(1.0);
        let mut acc = s.ln();
        let (mut x, mut y) = (z / s, one / s);
        let (mut dx, mut dy) = (one / s, Complex64::new(0.0, 0.0));
        let mut w = 1.0;
        for _ in 0..self.depth {
            let (u, v) = self.apply(x, y);
            let [ux, uy, vx, vy] = &self.partials;
            let du = hom_eval(ux, x, y) * dx + hom_eval(uy, x, y) * dy;
            let dv = hom_eval(vx, x, y) * dx + hom_eval(vy, x, y) * dy;
            let m = u.norm().max(v.norm());
            w /= d;
            acc += w * m.ln();
            x = u / m;
            y = v / m;
            dx = du / m;
            dy = dv / m;
        }
        let c = (x.conj() * dx + y.conj() * dy) / (x.norm_sqr() + y.norm_sqr());
        (acc + w * self.tail_mid, [w * c.re, -w * c.im])
    }

    /// `Lambda(z, 1)`.
    pub fn escape_rate_affine(&self, z: Complex64) -> f64 {
        self.escape_rate(z, Complex64::new(1.0, 0.0)).expect("(z, 1) is nonzero")
    }

    /// Inside when `Lambda <= -margin`, outside when `Lambda >= margin`,
    /// with `margin` the certified tail bound plus rounding slack.
    pub fn filled_julia_membership(&self, x: Complex64, y: Complex64) -> Result<Membership> {
        let l = self.escape_rate(x, y)?;
        let margin = self.tail_bound() + 1e-12 * (1.0 + l.abs());
        Ok(if l <= -margin {
            Membership::Inside
        } else if l >= margin {
            Membership::Outside
        } else {
            Membership::BoundaryUncertain
        })
    }
}

/// `sum_i c_i x^(d-i) y^i` in floating point.
pub(crate) fn hom_eval(c: &[f64], x: Complex64, y: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut ypow = Complex64::new(1.0, 0.0);
    for &ci in c {
        acc = acc * x + ci * ypow;
        ypow *= y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn homogeneous_evaluation() {
        // X^2 - 3XY + 2Y^2 at (2, 5): 4 - 30 + 50
        let v = hom_eval(&[1.0, -3.0, 2.0], c(2.0, 0.0), c(5.0, 0.0));
        assert_eq!(v, c(24.0, 0.0));
    }

    #[test]
    fn power_map_is_log_norm() {
        let f = EscapeRateField::new(&RationalMap::power_map(3).unwrap(), 1e-12).unwrap();
        assert_eq!(f.depth(), 0);
        let l = f.escape_rate(c(0.3, 0.4), c(-2.0, 0.0)).unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn z2_plus_1_against_exact_orbit() {
        let map = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap();
        let f = EscapeRateField::new(&map, 1e-12).unwrap();
        let l = f.escape_rate_affine(c(0.0, 0.0));
        // log 677 / 32 + O(677^-2 / 32)
        assert!((l - 677f64.ln() / 32.0).abs() < 1e-6);
        let mut z = num_bigint::BigInt::from(0);
        for _ in 0..12 {
            z = &z * &z + 1;
        }
        assert!((l - crate::numeric::log_abs(&z) / 4096.0).abs() < 1e-12);
    }

    #[test]
    fn homogeneity_and_functional_equation() {
        let map = RationalMap::from_i64(&[3, 1, 2], &[0, 2, 4]).unwrap();
        let f = EscapeRateField::new(&map, 1e-10).unwrap();
        let (x, y) = (c(0.3, -1.2), c(0.7, 0.1));
        let l = f.escape_rate(x, y).unwrap();
        let lam = c(7.0, 2.0);
        let l2 = f.escape_rate(lam * x, lam * y).unwrap();
        assert!((l2 - l - lam.norm().ln()).abs() < 3e-10);
        let (u, v) = f.apply(x, y);
        assert!((f.escape_rate(u, v).unwrap() - 2.0 * l).abs() < 3e-10);
        assert!(f.escape_rate(c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn membership() {
        let f = EscapeRateField::new(&RationalMap::power_map(2).unwrap(), 1e-12).unwrap();
        assert_eq!(f.filled_julia_membership(c(0.5, 0.0), c(0.9, 0.0)).unwrap(), Membership::Inside);
        assert_eq!(f.filled_julia_membership(c(2.0, 0.0), c(1.0, 0.0)).unwrap(), Membership::Outside);
        assert_eq!(
            f.filled_julia_membership(c(1.0, 0.0), c(0.0, 1.0)).unwrap(),
            Membership::BoundaryUncertain
        );
        // z^2 + 1 at (0.1, 1), decided by direct iteration.
        let q = EscapeRateField::new(&RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap(), 1e-12)
            .unwrap();
        let m = q.filled_julia_membership(c(0.1, 0.0), c(1.0, 0.0)).unwrap();
        let mut z = 0.1f64;
        let mut escaped = false;
        for _ in 0..60 {
            z = z * z + 1.0;
            if z.abs() > 2.0 {
                escaped = true;
                break;
            }
        }
        assert!(escaped);
        assert_eq!(m, Membership::Outside);
    }

    #[test]
    fn gradient_matches_differences() {
        let map = RationalMap::from_i64(&[1, 0, 1], &[0, 0, 1]).unwrap();
        let f = EscapeRateField::new(&map, 1e-10).unwrap();
        for z in [c(0.3, 1.4), c(-2.0, 0.5), c(0.1, -0.9)] {
            let (l, g) = f.escape_rate_affine_grad(z);
            assert!((l - f.escape_rate_affine(z)).abs() < 1e-12);
            let h = 1e-6;
            let gx = (f.escape_rate_affine(z + c(h, 0.0)) - f.escape_rate_affine(z - c(h, 0.0))) / (2.0 * h);
            let gy = (f.escape_rate_affine(z + c(0.0, h)) - f.escape_rate_affine(z - c(0.0, h))) / (2.0 * h);
            assert!((g[0] - gx).abs() < 1e-5 && (g[1] - gy).abs() < 1e-5, "{z}: {g:?} vs {gx} {gy}");
        }
    }
}
