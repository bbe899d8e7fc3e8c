//! Certified complex roots of squarefree integer polynomials.
//!
//! Approximations come from Aberth–Ehrlich simultaneous iteration in `f64`.
//! Each approximation `z_i` gets the inclusion radius
//!
//! ```text
//! r_i = n |P(z_i)| / (|a_n| prod_{j != i} |z_i - z_j|)
//! ```
//!
//! with `|P(z_i)|` replaced by an upper bound that includes the Horner
//! rounding error. The disks `D(z_i, r_i)` cover the roots and every connected
//! component of their union holds as many roots as disks, so pairwise disjoint
//! disks each hold exactly one root. When the `f64` radii are too large or
//! overlap, the iteration is continued in double-double arithmetic and the
//! radii recomputed there.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::dd::{CDd, Dd, DD_EPS};
use super::IntPoly;
use crate::numeric::rational_to_f64;
use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// A root approximation together with a radius guaranteed to contain a root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub value: Complex64,
    pub radius: f64,
}

/// All complex roots of `p`, each within `tol` of a distinct true root.
///
/// `p` must be squarefree; otherwise the error carries the deflated
/// polynomial `p / gcd(p, p')`.
pub fn complex_roots(p: &IntPoly, tol: f64) -> Result<Vec<CertifiedRoot>> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::InvalidInput("root finding needs degree at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if !p.is_squarefree() {
        return Err(Error::RepeatedRoot {
            squarefree_part: p.squarefree_part().to_string(),
        });
    }
    let n = p.degree();
    if n == 1 {
        let root = BigRational::new(-p.coeff(0), p.coeff(1));
        let value = rational_to_f64(&root);
        return Ok(vec![CertifiedRoot {
            value: Complex64::new(value, 0.0),
            radius: 2.0 * EPS * value.abs(),
        }]);
    }

    let coeffs: Vec<Complex64> = p.to_f64().into_iter().map(|c| Complex64::new(c, 0.0)).collect();
    let mut best = f64::INFINITY;
    // Retry from rotated starting circles when certification fails.
    for sigma in [0.7, 2.3, 1.4, 0.2] {
        let approx = aberth_from(&coeffs, initial_guesses(&coeffs, sigma), 1000);
        match certify(p, approx, tol) {
            Ok(roots) => return Ok(roots),
            Err(b) => best = best.min(b),
        }
    }
    Err(Error::NotCertified { tol, achieved: best })
}

/// Certified roots from approximations, or the best radius reached.
fn certify(p: &IntPoly, approx: Vec<Complex64>, tol: f64) -> std::result::Result<Vec<CertifiedRoot>, f64> {
    let mut best = f64::INFINITY;
    if let Some(radii) = radii_f64(p, &approx) {
        let worst = radii.iter().cloned().fold(0.0, f64::max);
        if worst <= tol {
            return Ok(finish(approx, radii));
        }
        best = worst;
    }

    let dd_coeffs: Vec<Dd> = p.coeffs().iter().map(Dd::from_bigint).collect();
    let mut zs: Vec<CDd> = approx.iter().map(|&z| CDd::from_c64(z)).collect();
    for _ in 0..8 {
        aberth_step_dd(&dd_coeffs, &mut zs);
        if let Some(radii) = radii_dd(p, &dd_coeffs, &zs) {
            let values: Vec<Complex64> = zs.iter().map(|z| z.to_c64()).collect();
            let radii: Vec<f64> = radii
                .iter()
                .zip(zs.iter().zip(values.iter()))
                .map(|(r, (zd, zf))| {
                    let round = (*zd - CDd::from_c64(*zf)).abs().to_f64();
                    (r + round) * (1.0 + 1e-12)
                })
                .collect();
            if disjoint(&values, &radii) {
                let worst = radii.iter().cloned().fold(0.0, f64::max);
                if worst <= tol {
                    return Ok(finish(values, radii));
                }
                best = best.min(worst);
            }
        }
    }
    Err(best)
}

fn finish(values: Vec<Complex64>, radii: Vec<f64>) -> Vec<CertifiedRoot> {
    let mut out: Vec<CertifiedRoot> = values
        .into_iter()
        .zip(radii)
        .map(|(value, radius)| CertifiedRoot { value, radius })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

fn disjoint(z: &[Complex64], r: &[f64]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() <= (r[i] + r[j]) * (1.0 + 1e-9) {
                return false;
            }
        }
    }
    true
}

/// Inclusion radii from `f64` evaluation, or `None` if any two disks meet.
fn radii_f64(p: &IntPoly, z: &[Complex64]) -> Option<Vec<f64>> {
    let n = p.degree();
    let coeffs = p.to_f64();
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
    let lead = coeffs[n].abs();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let zi = z[i];
        let mut val = Complex64::zero();
        let mut bound = 0.0;
        let m = zi.norm();
        for k in (0..=n).rev() {
            val = val * zi + coeffs[k];
            bound = bound * m + abs_coeffs[k];
        }
        let err = 8.0 * (n as f64 + 2.0) * EPS * bound;
        let mut log_den = lead.ln();
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                log_den += (zi - zj).norm().ln();
            }
        }
        let num = (n as f64) * (val.norm() + err);
        let r = (num.ln() - log_den).exp() / (1.0 - 4.0 * n as f64 * EPS);
        if !r.is_finite() {
            return None;
        }
        radii.push(r * (1.0 + 1e-12));
    }
    disjoint(z, &radii).then_some(radii)
}

fn radii_dd(p: &IntPoly, coeffs: &[Dd], z: &[CDd]) -> Option<Vec<f64>> {
    let n = p.degree();
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.to_f64().abs()).collect();
    let lead = abs_coeffs[n];
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let zi = z[i];
        let m = zi.abs().to_f64();
        let mut val = CDd::ZERO;
        let mut bound = 0.0;
        for k in (0..=n).rev() {
            val = val * zi + CDd::new(coeffs[k], Dd::ZERO);
            bound = bound * m + abs_coeffs[k];
        }
        let err = 8.0 * (n as f64 + 2.0) * DD_EPS * bound * (1.0 + 1e-6);
        let mut log_den = lead.ln();
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                log_den += (zi - *zj).abs().to_f64().ln();
            }
        }
        let num = (n as f64) * (val.abs().to_f64() + err);
        let r = (num.ln() - log_den).exp() / (1.0 - 8.0 * n as f64 * EPS);
        if !r.is_finite() {
            return None;
        }
        radii.push(r * (1.0 + 1e-9));
    }
    Some(radii)
}

fn aberth_step_dd(coeffs: &[Dd], z: &mut [CDd]) {
    let n = coeffs.len() - 1;
    for i in 0..n {
        let zi = z[i];
        let mut p = CDd::new(coeffs[n], Dd::ZERO);
        let mut dp = CDd::ZERO;
        for k in (0..n).rev() {
            dp = dp * zi + p;
            p = p * zi + CDd::new(coeffs[k], Dd::ZERO);
        }
        if p == CDd::ZERO {
            continue;
        }
        let ratio = p / dp;
        let mut sum = CDd::ZERO;
        let one = CDd::new(Dd::ONE, Dd::ZERO);
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                sum = sum + one / (zi - *zj);
            }
        }
        let w = ratio / (one - ratio * sum);
        z[i] = zi - w;
    }
}

/// `p(z) / p'(z)`, evaluated through the reversed polynomial when `|z| > 1`
/// so high degrees do not overflow.
fn newton_ratio(c: &[Complex64], z: Complex64) -> Complex64 {
    let n = c.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = c[n];
        let mut dp = Complex64::zero();
        for k in (0..n).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        p / dp
    } else {
        let w = z.inv();
        let mut q = c[0];
        let mut dq = Complex64::zero();
        for &ck in &c[1..=n] {
            dq = dq * w + q;
            q = q * w + ck;
        }
        z * q / (q * n as f64 - w * dq)
    }
}

/// Starting points on circles whose radii come from the Newton polygon of
/// `(k, log |c_k|)`.
fn initial_guesses(c: &[Complex64], sigma: f64) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(k, a)| (k, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - k1 as f64);
            if cross >= -1e-9 * (1.0 + y1.abs() + y2.abs() + pt.1.abs()) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(n);
    // Roots at zero: one per power of X dividing the polynomial.
    let low = pts.first().map(|p| p.0).unwrap_or(0);
    for _ in 0..low {
        out.push(Complex64::zero());
    }
    for w in hull.windows(2) {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let m = k2 - k1;
        let radius = ((y1 - y2) / m as f64).exp();
        for j in 0..m {
            // The offset k1 (in radians) keeps segments of equal radius apart.
            let theta = 2.0 * PI * j as f64 / m as f64 + k1 as f64 + sigma;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    out
}

/// Aberth–Ehrlich iteration for a polynomial with complex coefficients given
/// low degree first. Returns `deg` approximations; no certification.
pub fn aberth(c: &[Complex64], max_iter: usize) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let z = initial_guesses(&c, 0.7);
    aberth_from(&c, z, max_iter)
}

fn aberth_from(c: &[Complex64], mut z: Vec<Complex64>, max_iter: usize) -> Vec<Complex64> {
    let n = c.len() - 1;
    let mut done = vec![false; n];
    for (i, zi) in z.iter().enumerate() {
        if zi.norm() == 0.0 {
            done[i] = true;
        }
    }
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let ratio = newton_ratio(c, zi);
            if !ratio.is_finite() {
                done[i] = true;
                continue;
            }
            let mut sum = Complex64::zero();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += (zi - zj).inv();
                }
            }
            let w = ratio / (1.0 - ratio * sum);
            if !w.is_finite() {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= 2.0 * EPS * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    z
}
