//! Dense univariate polynomials over a `Field`, lowest degree first.
//! The zero polynomial is the empty vector.

use super::field::Field;

pub fn trim<F: Field>(f: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while let Some(&c) = a.last() {
        if f.is_zero(c) {
            a.pop();
        } else {
            break;
        }
    }
    a
}

pub fn deg<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(f.zero());
        let y = b.get(i).copied().unwrap_or(f.zero());
        r.push(f.add(x, y));
    }
    trim(f, r)
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(f.zero());
        let y = b.get(i).copied().unwrap_or(f.zero());
        r.push(f.sub(x, y));
    }
    trim(f, r)
}

pub fn neg<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub fn scale<F: Field>(f: &F, a: &[F::Elem], c: F::Elem) -> Vec<F::Elem> {
    trim(f, a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    trim(f, r)
}

pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = deg(b).expect("polynomial division by zero");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(b[db]).expect("leading coefficient not invertible");
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = f.mul(r[i], lead_inv);
        if f.is_zero(c) {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = f.sub(r[i - db + j], f.mul(c, b[j]));
        }
    }
    r.truncate(db);
    (trim(f, q), trim(f, r))
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(f, a, f.inv(l).unwrap()),
    }
}

pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (mut x, mut y) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Returns (g, s, t) with s·a + t·b = g; g is not normalised.
pub fn xgcd<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    let (mut s0, mut s1) = (vec![f.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

/// Monic gcd together with Bézout cofactors.
pub fn xgcd_monic<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (g, s, t) = xgcd(f, a, b);
    match g.last() {
        None => (g, s, t),
        Some(&l) => {
            let li = f.inv(l).unwrap();
            (scale(f, &g, li), scale(f, &s, li), scale(f, &t, li))
        }
    }
}

pub fn eval<F: Field>(f: &F, a: &[F::Elem], x: F::Elem) -> F::Elem {
    a.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn derivative<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let r = a.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_u64(i as u64), c)).collect();
    trim(f, r)
}

/// base^e mod m.
pub fn powmod<F: Field>(f: &F, base: &[F::Elem], mut e: u128, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut r = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            r = rem(f, &mul(f, &r, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    r
}

/// x^(p^j) mod m for j = 0..=k, iterating the Frobenius.
fn frobenius_powers<F: Field>(f: &F, m: &[F::Elem], k: usize) -> Vec<Vec<F::Elem>> {
    let p = f.characteristic() as u128;
    let x = vec![f.zero(), f.one()];
    let mut out = vec![rem(f, &x, m)];
    for _ in 0..k {
        let prev = out.last().unwrap().clone();
        out.push(powmod(f, &prev, p, m));
    }
    out
}

/// Rabin's irreducibility test over a prime field.
pub fn is_irreducible<F: Field>(f: &F, m: &[F::Elem]) -> bool {
    let Some(k) = deg(m) else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let frob = frobenius_powers(f, m, k);
    let x = vec![f.zero(), f.one()];
    if !sub(f, &frob[k], &rem(f, &x, m)).is_empty() {
        return false;
    }
    for q in prime_divisors(k) {
        let h = sub(f, &frob[k / q], &x);
        if deg(&gcd(f, m, &h)) != Some(0) {
            return false;
        }
    }
    true
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Roots of `a` in the field by exhaustive search; only for small fields.
pub fn roots_by_search(fp: &super::field::Fp, a: &[u64]) -> Vec<u64> {
    (0..fp.p).filter(|&x| eval(fp, a, x) == 0).collect()
}

/// A monic irreducible factor of least degree of a squarefree polynomial over F_p (p odd).
pub fn smallest_irreducible_factor(fp: &super::field::Fp, a: &[u64]) -> Vec<u64> {
    let a = monic(fp, a);
    let n = deg(&a).expect("zero polynomial has no factors");
    assert!(n >= 1);
    let p = fp.p as u128;
    let x = vec![0, 1];
    let mut xp = rem(fp, &x, &a);
    for d in 1..=n / 2 {
        xp = powmod(fp, &xp, p, &a);
        let g = gcd(fp, &a, &sub(fp, &xp, &x));
        if deg(&g).unwrap_or(0) > 0 {
            return equal_degree_split(fp, &g, d);
        }
    }
    a
}

/// Extract one irreducible factor of degree d from a product of such factors.
fn equal_degree_split(fp: &super::field::Fp, g: &[u64], d: usize) -> Vec<u64> {
    let mut g = g.to_vec();
    let p = fp.p as u128;
    let exp = (p.pow(d as u32) - 1) / 2;
    let mut seed: u64 = 1;
    while deg(&g).unwrap() > d {
        let n = deg(&g).unwrap();
        // deterministic trial polynomials
        let mut t = Vec::with_capacity(n);
        for _ in 0..n {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            t.push((seed >> 33) % fp.p);
        }
        let t = trim(fp, t);
        if deg(&t).unwrap_or(0) == 0 {
            continue;
        }
        let h = sub(fp, &powmod(fp, &t, exp, &g), &[1]);
        let c = gcd(fp, &g, &h);
        let dc = deg(&c).unwrap_or(0);
        if dc > 0 && dc < n {
            g = if dc <= n - dc { c } else { divrem(fp, &g, &c).0 };
            g = monic(fp, &g);
        }
    }
    g
}

/// Degrees and multiplicities of the irreducible factors of a nonzero polynomial
/// over F_p, as (degree, multiplicity) pairs. Works in every characteristic.
pub fn factor_degrees(fp: &super::field::Fp, a: &[u64]) -> Vec<(usize, u32)> {
    let a = monic(fp, &trim(fp, a.to_vec()));
    let mut out = Vec::new();
    squarefree_parts(fp, &a, 1, &mut out);
    out.sort_unstable();
    out
}

fn squarefree_parts(fp: &super::field::Fp, a: &[u64], mult: u32, out: &mut Vec<(usize, u32)>) {
    if deg(a).unwrap_or(0) == 0 {
        return;
    }
    let da = derivative(fp, a);
    if da.is_empty() {
        // a(x) = b(x^p); over F_p the p-th root just drops the stride.
        let p = fp.p as usize;
        let b: Vec<u64> = a.iter().step_by(p).copied().collect();
        squarefree_parts(fp, &b, mult * fp.p as u32, out);
        return;
    }
    let mut c = gcd(fp, a, &da);
    let mut w = divrem(fp, a, &c).0;
    let mut i = 1;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(fp, &w, &c);
        let z = divrem(fp, &w, &y).0;
        distinct_degree_counts(fp, &z, mult * i, out);
        i += 1;
        w = y;
        c = divrem(fp, &c, &w).0;
    }
    if deg(&c).unwrap_or(0) > 0 {
        let p = fp.p as usize;
        let b: Vec<u64> = c.iter().step_by(p).copied().collect();
        squarefree_parts(fp, &b, mult * fp.p as u32, out);
    }
}

fn distinct_degree_counts(fp: &super::field::Fp, a: &[u64], mult: u32, out: &mut Vec<(usize, u32)>) {
    let mut a = monic(fp, a);
    let x = vec![0, 1];
    let mut xp = rem(fp, &x, &a);
    let mut d = 0;
    while deg(&a).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > deg(&a).unwrap() {
            out.push((deg(&a).unwrap(), mult));
            return;
        }
        xp = powmod(fp, &xp, fp.p as u128, &a);
        let g = gcd(fp, &a, &sub(fp, &xp, &x));
        let k = deg(&g).unwrap_or(0);
        for _ in 0..k / d {
            out.push((d, mult));
        }
        if k > 0 {
            a = divrem(fp, &a, &g).0;
            xp = rem(fp, &xp, &a);
        }
    }
}
