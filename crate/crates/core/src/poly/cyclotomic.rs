use super::IntPoly;

/// The `n`-th cyclotomic polynomial, by exact division of `X^n - 1` by
/// `Phi_m` for every proper divisor `m` of `n`.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut phis: Vec<Option<IntPoly>> = vec![None; n + 1];
    cyclotomic_memo(n, &mut phis)
}

fn cyclotomic_memo(n: usize, memo: &mut Vec<Option<IntPoly>>) -> IntPoly {
    if let Some(p) = &memo[n] {
        return p.clone();
    }
    let mut p = IntPoly::x_pow_minus_one(n);
    for m in (1..n).filter(|m| n.is_multiple_of(*m)) {
        let phi_m = cyclotomic_memo(m, memo);
        p = p.div_exact(&phi_m).expect("Phi_m divides X^n - 1");
    }
    memo[n] = Some(p.clone());
    p
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Every `m` with `phi(m) = d`, ascending. Uses `m <= 2 d^2` (valid for all
/// `d >= 1` since `phi(m) >= sqrt(m / 2)`) and a sieve.
pub fn phi_inverse(d: u64) -> Vec<u64> {
    let bound = (2 * d * d).max(6) as usize;
    let mut phi: Vec<u64> = (0..=bound as u64).collect();
    for i in 2..=bound {
        if phi[i] == i as u64 {
            let mut j = i;
            while j <= bound {
                phi[j] -= phi[j] / i as u64;
                j += i;
            }
        }
    }
    (1..=bound as u64).filter(|&m| phi[m as usize] == d).collect()
}
