//! The archimedean escape rate `Lambda(a, b)` at a real point with a
//! rigorous error bound.
//!
//! The orbit is followed in an affine chart: a point is `(1, t)` or `(t, 1)`
//! with `|t| <= 1`, held in double-double. If `P` is the chart's pivot
//! component of `F = (U, V)` and `Q` the other one, then
//!
//! ```text
//! Lambda(z) = (1/d) (log |P(t)| + Lambda(1, Q(t)/P(t)))
//! ```
//!
//! exactly, whichever component the floating computation picked as pivot.
//! Alongside `t` we carry a bound `E` on the distance to the exact orbit.
//! It is propagated through Taylor coefficients of `P` and `Q`, so
//! contracting charts shrink it. When it grows too large the iteration stops
//! and the remainder is bounded by the per-step range of
//! `log |F(z)| - d log |z|`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::RationalMap;
use crate::numeric::log_abs;
use crate::poly::dd::{Dd, DD_EPS};

const EPS: f64 = f64::EPSILON;

/// Give up tracking once the orbit is known only to this accuracy.
const MAX_TRACKED_ERROR: f64 = 1e-3;

/// `Lambda` together with an upper bound on its error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArchEstimate {
    pub value: f64,
    pub error: f64,
    /// Steps actually iterated before the tail bound was applied.
    pub steps: usize,
}

#[derive(Clone, Copy, PartialEq)]
enum Chart {
    /// `(1, t)`
    X,
    /// `(t, 1)`
    Y,
}

struct ChartPoly {
    dd: Vec<Dd>,
    f: Vec<f64>,
    abs: Vec<f64>,
}

impl ChartPoly {
    fn new(c: Vec<BigInt>) -> Self {
        let dd: Vec<Dd> = c.iter().map(Dd::from_bigint).collect();
        let f: Vec<f64> = dd.iter().map(|x| x.to_f64()).collect();
        let abs = f.iter().map(|x| x.abs()).collect();
        ChartPoly { dd, f, abs }
    }

    fn eval(&self, t: Dd) -> Dd {
        let mut acc = Dd::ZERO;
        for c in self.dd.iter().rev() {
            acc = acc * t + *c;
        }
        acc
    }

    /// Upper bound on `|P(t + e) - P_computed(t)|` over `|e| <= err`.
    fn deviation(&self, t: f64, err: f64) -> f64 {
        let n = self.f.len();
        let m = t.abs();
        let abs_at_t: f64 = self.abs.iter().rev().fold(0.0, |acc, c| acc * m + c);
        let rounding = 4.0 * (n as f64 + 1.0) * DD_EPS * abs_at_t * (1.0 + 1e-6);
        if err == 0.0 {
            return rounding;
        }
        // Taylor coefficients at t by repeated synthetic division.
        let mut coeffs = self.f.clone();
        let mut abs_coeffs = self.abs.clone();
        let gamma = 4.0 * (n as f64 + 1.0) * EPS;
        let mut total = 0.0;
        let mut e_pow = 1.0;
        for j in 0..n {
            for i in (j + 1..n).rev() {
                coeffs[i - 1] += coeffs[i] * t;
                abs_coeffs[i - 1] += abs_coeffs[i] * m;
            }
            // After pass j, coeffs[j] holds the j-th Taylor coefficient.
            if j >= 1 {
                total += (coeffs[j].abs() + gamma * abs_coeffs[j]) * e_pow;
            }
            e_pow *= err;
        }
        (total * (1.0 + 1e-9)) + rounding
    }
}

/// Rigorous evaluator of `Lambda` for one map at real points.
pub struct ArchEvaluator {
    d: usize,
    // [chart][component]: component 0 is U, 1 is V.
    polys: [[ChartPoly; 2]; 2],
    range_mid: f64,
    range_radius: f64,
}

impl ArchEvaluator {
    pub fn new(f: &RationalMap) -> Self {
        let d = f.degree();
        let u = f.u().coeffs();
        let v = f.v().coeffs();
        // (1, t): coefficient of X^(d-i) Y^i multiplies t^i.
        let x_chart = |c: &[BigInt]| ChartPoly::new(c.to_vec());
        // (t, 1): it multiplies t^(d-i).
        let y_chart = |c: &[BigInt]| ChartPoly::new(c.iter().rev().cloned().collect());
        let k = f.constants();
        let lo = -k.c_lower_arch;
        let hi = k.c_upper;
        let df = d as f64 - 1.0;
        ArchEvaluator {
            d,
            polys: [[x_chart(u), x_chart(v)], [y_chart(u), y_chart(v)]],
            range_mid: (lo + hi) / 2.0 / df,
            range_radius: ((hi - lo) / 2.0).max(0.0) / df,
        }
    }

    /// Half-width of the interval containing `Lambda(z) - log |z|`.
    pub fn tail_radius(&self) -> f64 {
        self.range_radius
    }

    /// Smallest `K` with `d^-K * tail_radius <= tol`.
    pub fn steps_for(&self, tol: f64) -> usize {
        if self.range_radius == 0.0 {
            return 0;
        }
        let mut k = 0;
        let mut w = self.range_radius;
        while w > tol && k < 10_000 {
            w /= self.d as f64;
            k += 1;
        }
        k
    }

    /// `Lambda(a, b)` for integers `(a, b) != (0, 0)` using at most `steps`
    /// iterations.
    pub fn eval_integer(&self, a: &BigInt, b: &BigInt, steps: usize) -> ArchEstimate {
        assert!(!(a.is_zero() && b.is_zero()), "Lambda is undefined at the origin");
        let (chart, num, den) = if a.abs() >= b.abs() {
            (Chart::X, b, a)
        } else {
            (Chart::Y, a, b)
        };
        let log_norm = log_abs(den);
        let t = ratio_to_dd(num, den);
        let mut est = self.eval_chart(chart, t, 2f64.powi(-100), steps);
        est.value += log_norm;
        est.error += 2.0 * EPS * log_norm.abs();
        est
    }

    fn eval_chart(&self, mut chart: Chart, mut t: Dd, mut err: f64, steps: usize) -> ArchEstimate {
        let d = self.d as f64;
        let mut acc = 0.0;
        let mut acc_err = 0.0;
        let mut weight = 1.0 / d;
        let mut k = 0;
        while k < steps {
            let polys = &self.polys[chart as usize];
            let pu = polys[0].eval(t);
            let pv = polys[1].eval(t);
            let (piv, other, piv_idx) = if pu.abs().to_f64() >= pv.abs().to_f64() {
                (pu, pv, 0)
            } else {
                (pv, pu, 1)
            };
            let tf = t.to_f64();
            let dev_piv = polys[piv_idx].deviation(tf, err);
            let dev_other = polys[1 - piv_idx].deviation(tf, err);
            let piv_abs = piv.abs().to_f64();
            if !(piv_abs > dev_piv * 2.0) {
                break;
            }
            let delta = piv_abs.ln();
            let term_err = dev_piv / (piv_abs - dev_piv) + 2.0 * EPS * (delta.abs() + 1.0);
            let next = other / piv;
            let next_abs = next.abs().to_f64();
            let next_err = (dev_other + next_abs * dev_piv) / (piv_abs - dev_piv)
                + 4.0 * DD_EPS * next_abs;
            acc += weight * delta;
            acc_err += weight * term_err + EPS * acc.abs();
            weight /= d;
            k += 1;
            t = next;
            err = next_err;
            chart = if piv_idx == 0 { Chart::X } else { Chart::Y };
            if !(err <= MAX_TRACKED_ERROR) {
                break;
            }
        }
        // Remainder d^-k Lambda(z_k) with z_k = chart point at t.
        let w = weight * d;
        let tf = t.to_f64().abs();
        let log_norm = tf.max(1.0).ln();
        let norm_err = if tf + err > 1.0 { err } else { 0.0 };
        let value = acc + w * (log_norm + self.range_mid);
        let error = acc_err + w * (self.range_radius + norm_err) + 4.0 * EPS * value.abs();
        ArchEstimate {
            value,
            error,
            steps: k,
        }
    }
}

/// `num / den` in double-double, for `|num| <= |den|`, `den != 0`.
fn ratio_to_dd(num: &BigInt, den: &BigInt) -> Dd {
    const SHIFT: i32 = 110;
    let q: BigInt = (num << SHIFT as usize) / den;
    let r = Dd::from_bigint(&q);
    let s = 2f64.powi(-SHIFT);
    Dd {
        hi: r.hi * s,
        lo: r.lo * s,
    }
}
