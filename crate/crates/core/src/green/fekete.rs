//! Fekete-type maximisation of `prod |x_i y_j - x_j y_i|` over the
//! homogeneous filled Julia set `K = {Lambda <= 0}`.
//!
//! The product is maximised on the boundary `Lambda = 0`. A direction
//! `(z, 1)` meets it at `e^(-Lambda(z, 1)) (z, 1)`, so for `n` affine
//! parameters the objective is
//!
//! ```text
//! mean_{i != j} log |z_i - z_j| - 2 mean_i Lambda(z_i, 1)
//! ```
//!
//! For a power map the boundary contains the torus and points are
//! parametrised by angles instead.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CProjPoint, EscapeRateField};
use crate::numeric::log_abs;
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 32;

const MAX_ITERS: usize = 400;
const GRAD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransfiniteReport {
    pub n: usize,
    pub delta_n: f64,
    /// `|Res|^(-1 / (d (d - 1)))`, the limit as `n -> infinity`.
    pub formula_value: f64,
    pub restarts: usize,
    /// At least one restart met the gradient tolerance.
    pub converged: bool,
    /// Maximising configuration, on the boundary `Lambda = 0`.
    #[serde(skip)]
    pub points: Vec<CProjPoint>,
}

/// `delta_n(K)` by L-BFGS ascent from `restarts` random configurations.
pub fn transfinite_diameter(
    field: &EscapeRateField,
    n: usize,
    restarts: usize,
    seed: u64,
) -> Result<TransfiniteReport> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("the transfinite diameter needs n >= 2, got {n}")));
    }
    if restarts == 0 {
        return Err(Error::InvalidInput("need at least one restart".into()));
    }
    let map = field.map();
    let d = map.degree() as f64;
    let formula_value = (-log_abs(map.resultant()) / (d * (d - 1.0))).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let power = map.is_power_map();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut converged = false;
    for r in 0..restarts {
        let x0: Vec<f64> = if power {
            (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
        } else if r % 4 == 0 {
            initial_exchange(field, n, &mut rng)
        } else if r % 2 == 0 {
            initial_preimages(field, n, &mut rng)
        } else {
            initial_affine(field, n, &mut rng)
        };
        let (x, fx, ok) = if power {
            lbfgs_max(angular_objective, x0)
        } else {
            // Keep the start if the ascent cannot improve on it.
            let f0 = affine_objective(field, &x0).0;
            let (x, fx, ok) = lbfgs_max(|v| affine_objective(field, v), x0.clone());
            if fx >= f0 { (x, fx, ok) } else { (x0, f0, false) }
        };
        converged |= ok;
        if fx.is_finite() && best.as_ref().is_none_or(|(b, _)| fx > *b) {
            best = Some((fx, x));
        }
    }
    let (log_delta, x) = best.ok_or(Error::NotCertified {
        tol: GRAD_TOL,
        achieved: f64::INFINITY,
    })?;
    // The angular objective omits the Lambda terms, which vanish on the torus.
    let points = if power {
        x.iter().map(|&t| CProjPoint::affine(Complex64::from_polar(1.0, t))).collect()
    } else {
        (0..n)
            .map(|i| {
                let z = Complex64::new(x[2 * i], x[2 * i + 1]);
                CProjPoint::affine(z).scale(Complex64::new((-field.escape_rate_affine(z)).exp(), 0.0))
            })
            .collect()
    };
    Ok(TransfiniteReport {
        n,
        delta_n: log_delta.exp(),
        formula_value,
        restarts,
        converged,
        points,
    })
}

/// `delta_n` for each `n`, plus whether the sequence is nonincreasing up to
/// `slack`.
pub fn transfinite_sweep(
    field: &EscapeRateField,
    ns: &[usize],
    restarts: usize,
    seed: u64,
    slack: f64,
) -> Result<(Vec<TransfiniteReport>, bool)> {
    let reports = ns
        .iter()
        .map(|&n| transfinite_diameter(field, n, restarts, seed.wrapping_add(n as u64)))
        .collect::<Result<Vec<_>>>()?;
    let monotone = reports.windows(2).all(|w| w[1].delta_n <= w[0].delta_n + slack);
    Ok((reports, monotone))
}

/// Random starts spread over a disk that contains most of `K`.
fn initial_affine(field: &EscapeRateField, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Radius where Lambda(z, 1) first exceeds log 2 along the real axis.
    let mut r = 1.0f64;
    while r < 1e6 && field.escape_rate_affine(Complex64::new(r, 0.0)) < 2f64.ln() {
        r *= 1.5;
    }
    let mut v = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let z = Complex64::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        v.push(z.re);
        v.push(z.im);
    }
    v
}

/// Iterated preimages of a random point until there are at least `target`
/// of them. The tree accumulates on the Julia set with the equilibrium
/// distribution.
fn preimage_cloud(field: &EscapeRateField, target: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let map = field.map();
    let d = map.degree();
    let u: Vec<f64> = map.u().coeffs().iter().map(crate::numeric::big_to_f64).collect();
    let v: Vec<f64> = map.v().coeffs().iter().map(crate::numeric::big_to_f64).collect();
    let mut level = vec![Complex64::from_polar(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )];
    for _ in 0..16 {
        if level.len() >= target {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * d);
        for z in &level {
            // U(w, 1) - z V(w, 1), low degree first
            let c: Vec<Complex64> = (0..=d).map(|k| u[d - k] - *z * v[d - k]).collect();
            next.extend(crate::poly::aberth(&c, 200).into_iter().filter(|w| w.is_finite()));
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    level
}

/// `n` points sampled from a preimage cloud.
fn initial_preimages(field: &EscapeRateField, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut level = preimage_cloud(field, 4 * n, rng);
    let mut v = Vec::with_capacity(2 * n);
    for i in 0..n {
        let z = if level.len() > i {
            let j = rng.gen_range(i..level.len());
            level.swap(i, j);
            level[i]
        } else {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        };
        v.push(z.re);
        v.push(z.im);
    }
    v
}

/// Greedy selection from a dense preimage cloud followed by single-point
/// exchanges; a discrete stand-in for the Fekete problem that copes with
/// the non-smooth escape rate near the Julia set.
fn initial_exchange(field: &EscapeRateField, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let cand = preimage_cloud(field, (64 * n).clamp(1024, 4096), rng);
    if cand.len() < n {
        return initial_preimages(field, n, rng);
    }
    let lam: Vec<f64> = cand.iter().map(|&z| field.escape_rate_affine(z)).collect();
    // pair term between candidates a and b
    let pair = |a: usize, b: usize| (cand[a] - cand[b]).norm().ln() - lam[a] - lam[b];
    let mut chosen: Vec<usize> = vec![rng.gen_range(0..cand.len())];
    while chosen.len() < n {
        let best = (0..cand.len())
            .filter(|c| !chosen.contains(c))
            .map(|c| (c, chosen.iter().map(|&j| pair(c, j)).sum::<f64>()))
            .filter(|(_, v)| v.is_finite())
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((c, _)) => chosen.push(c),
            None => break,
        }
    }
    for _ in 0..50 {
        let mut changed = false;
        for i in 0..chosen.len() {
            let others: Vec<usize> = chosen.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &c)| c).collect();
            let score = |c: usize| others.iter().map(|&j| pair(c, j)).sum::<f64>();
            let current = score(chosen[i]);
            let best = (0..cand.len())
                .filter(|c| !chosen.contains(c))
                .map(|c| (c, score(c)))
                .filter(|(_, v)| v.is_finite())
                .max_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((c, v)) = best {
                if v > current + 1e-13 {
                    chosen[i] = c;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut v = Vec::with_capacity(2 * n);
    for &c in &chosen {
        v.push(cand[c].re);
        v.push(cand[c].im);
    }
    while v.len() < 2 * n {
        v.push(rng.gen_range(-1.0..1.0));
    }
    v
}

/// Mean of `log |2 sin((t_i - t_j) / 2)|` and its gradient.
fn angular_objective(t: &[f64]) -> (f64, Vec<f64>) {
    let n = t.len();
    let scale = 2.0 / (n * (n - 1)) as f64;
    let mut f = 0.0;
    let mut g = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let h = (t[i] - t[j]) / 2.0;
            let s = h.sin();
            if s == 0.0 {
                return (f64::NEG_INFINITY, g);
            }
            f += (2.0 * s).abs().ln();
            let c = 0.5 * h.cos() / s;
            g[i] += c;
            g[j] -= c;
        }
    }
    (f * scale, g.into_iter().map(|x| x * scale).collect())
}

/// The boundary-projected log product and its gradient.
fn affine_objective(field: &EscapeRateField, v: &[f64]) -> (f64, Vec<f64>) {
    let n = v.len() / 2;
    let z: Vec<Complex64> = (0..n).map(|i| Complex64::new(v[2 * i], v[2 * i + 1])).collect();
    let pair_scale = 2.0 / (n * (n - 1)) as f64;
    let lam_scale = 2.0 / n as f64;
    let mut f = 0.0;
    let mut g = vec![0.0; 2 * n];
    for i in 0..n {
        for j in i + 1..n {
            let w = z[i] - z[j];
            let m = w.norm_sqr();
            if m == 0.0 {
                return (f64::NEG_INFINITY, g);
            }
            f += 0.5 * m.ln() * pair_scale;
            let gr = w / m * pair_scale;
            g[2 * i] += gr.re;
            g[2 * i + 1] += gr.im;
            g[2 * j] -= gr.re;
            g[2 * j + 1] -= gr.im;
        }
    }
    for i in 0..n {
        let (lam, grad) = field.escape_rate_affine_grad(z[i]);
        f -= lam_scale * lam;
        g[2 * i] -= lam_scale * grad[0];
        g[2 * i + 1] -= lam_scale * grad[1];
    }
    (f, g)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Limited-memory BFGS ascent with backtracking. Returns the final point,
/// its value and whether the gradient tolerance was met.
fn lbfgs_max(obj: impl Fn(&[f64]) -> (f64, Vec<f64>), mut x: Vec<f64>) -> (Vec<f64>, f64, bool) {
    const MEMORY: usize = 8;
    let (mut fx, mut gx) = obj(&x);
    if !fx.is_finite() {
        return (x, fx, false);
    }
    let mut hist: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    for _ in 0..MAX_ITERS {
        let gnorm = dot(&gx, &gx).sqrt();
        if gnorm < GRAD_TOL {
            return (x, fx, true);
        }
        // Two-loop recursion on the negated problem.
        let mut q: Vec<f64> = gx.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            alphas.push(a);
        }
        if let Some((s, y, _)) = hist.last() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|v| *v *= gamma);
        } else {
            let s = 1.0 / gnorm.max(1.0);
            q.iter_mut().for_each(|v| *v *= s);
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&gx, &dir);
        if !(slope > 0.0) {
            hist.clear();
            dir = gx.clone();
            slope = gnorm * gnorm;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let xn: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            let (fn_, gn) = obj(&xn);
            if fn_.is_finite() && fn_ >= fx + 1e-4 * step * slope {
                accepted = Some((xn, fn_, gn));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else {
            // No ascent along the direction: stationary to working precision.
            return (x, fx, gnorm < 1e-6);
        };
        // Curvature pair for the minimisation of -f.
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gx.iter().zip(&gn).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            hist.push((s, y, 1.0 / sy));
            if hist.len() > MEMORY {
                hist.remove(0);
            }
        }
        let improved = fn_ - fx;
        x = xn;
        fx = fn_;
        gx = gn;
        if improved.abs() < 1e-15 * fx.abs().max(1.0) && dot(&gx, &gx).sqrt() < 1e-6 {
            return (x, fx, true);
        }
    }
    let ok = dot(&gx, &gx).sqrt() < 1e-6;
    (x, fx, ok)
}
