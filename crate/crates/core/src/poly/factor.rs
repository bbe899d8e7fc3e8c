//! Integer factorisation for the sizes that occur here: resultants and
//! discriminants of small forms. Trial division, then Miller–Rabin and
//! Pollard's rho (Brent variant) on the cofactor.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TRIAL_LIMIT: u64 = 10_000;

/// Prime factorisation as sorted `(prime, exponent)` pairs. `n` must be nonzero.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut stack = vec![n];
        let mut large: Vec<BigUint> = Vec::new();
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                large.push(m);
                continue;
            }
            let f = pollard_brent(&m, &mut rng);
            stack.push(&m / &f);
            stack.push(f);
        }
        large.sort();
        for q in large {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out.sort();
    out
}

/// Distinct prime divisors.
pub fn prime_divisors(n: &BigUint) -> Vec<BigUint> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    // These bases are deterministic below 3.3e24; larger inputs are probable primes.
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let one = BigUint::one();
    loop {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&one, n);
        let m = 64u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
}

/// Primes below `limit` as `u64`, by sieve.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; limit];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < limit {
        if sieve[i] {
            let mut j = i * i;
            while j < limit {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

pub fn biguint_to_u64(n: &BigUint) -> Option<u64> {
    n.to_u64()
}
