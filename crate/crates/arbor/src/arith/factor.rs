//! Integer factorisation for scan-sized inputs (≤ 2^128).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;

fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    let r = BigUint::from(a) * BigUint::from(b) % BigUint::from(m);
    r.to_u128().unwrap()
}

fn pow_mod_u128(mut a: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u128(r, a, m);
        }
        a = mul_mod_u128(a, a, m);
        e >>= 1;
    }
    r
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Miller-Rabin; deterministic below 3.3·10^24, overwhelmingly reliable above.
pub fn is_probable_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u128; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| (mul_mod_u128(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u128, 1u64, 1u128, 1u128);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_probable_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Prime factorisation as (prime, exponent) pairs in increasing order.
pub fn factorize_u128(mut n: u128) -> Vec<(u128, u32)> {
    assert!(n >= 1, "factorize needs a positive argument");
    let mut primes = Vec::new();
    let mut d: u128 = 2;
    while d <= TRIAL_LIMIT as u128 && d * d <= n {
        while n % d == 0 {
            primes.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    split_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u128, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn factorize(e: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!e.is_zero(), "factorize needs a positive argument");
    let n = e.to_u128().expect("factorize is limited to inputs below 2^128");
    factorize_u128(n).into_iter().map(|(p, k)| (BigUint::from(p), k)).collect()
}

pub fn product(fs: &[(BigUint, u32)]) -> BigUint {
    fs.iter().fold(BigUint::one(), |acc, (p, k)| acc * p.pow(*k))
}
