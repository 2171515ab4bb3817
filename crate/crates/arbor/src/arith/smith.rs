//! Elementary-divisor valuations over Z/ℓⁿ by valuation pivoting.

use super::residue::Zmod;

/// Valuations v₁ ≤ … ≤ v_d (capped at n) of the elementary divisors of the
/// row-major d×d matrix `m` over Z/ℓⁿ.
pub fn smith_valuations(m: &[u64], d: usize, ring: &Zmod) -> Vec<u32> {
    assert_eq!(m.len(), d * d);
    let mut a: Vec<u64> = m.iter().map(|&x| x % ring.modulus).collect();
    let n = ring.n;
    let mut out = Vec::with_capacity(d);
    for t in 0..d {
        let mut best = (n, t, t);
        for i in t..d {
            for j in t..d {
                let v = ring.ord_capped(a[i * d + j]);
                if v < best.0 {
                    best = (v, i, j);
                    if v == 0 {
                        break;
                    }
                }
            }
            if best.0 == 0 {
                break;
            }
        }
        let (v, pi, pj) = best;
        if v == n {
            out.extend(std::iter::repeat(n).take(d - t));
            break;
        }
        out.push(v);
        if pi != t {
            for j in 0..d {
                a.swap(t * d + j, pi * d + j);
            }
        }
        if pj != t {
            for i in 0..d {
                a.swap(i * d + t, i * d + pj);
            }
        }
        let scale = ring.ell.pow(v);
        let unit = a[t * d + t] / scale;
        let uinv = ring.inv(unit).expect("pivot cofactor is a unit");
        for i in t + 1..d {
            let x = a[i * d + t];
            if x == 0 {
                continue;
            }
            let f = ring.mul(x / scale, uinv);
            for j in t..d {
                let s = ring.mul(f, a[t * d + j]);
                a[i * d + j] = ring.sub(a[i * d + j], s);
            }
        }
        for j in t + 1..d {
            let x = a[t * d + j];
            if x == 0 {
                continue;
            }
            let f = ring.mul(x / scale, uinv);
            for i in t..d {
                let s = ring.mul(f, a[i * d + t]);
                a[i * d + j] = ring.sub(a[i * d + j], s);
            }
        }
    }
    out.sort_unstable();
    out
}

/// log_ℓ of the size of the image of `m` acting on (Z/ℓⁿ)^d.
pub fn image_log(m: &[u64], d: usize, ring: &Zmod) -> u32 {
    let s: u32 = smith_valuations(m, d, ring).iter().sum();
    d as u32 * ring.n - s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(smith_valuations(&[0, 0, 0, 0], 2, &Zmod::new(2, 3)), vec![3, 3]);
        assert_eq!(smith_valuations(&[1, 0, 0, 0], 2, &Zmod::new(2, 2)), vec![0, 2]);
        assert_eq!(smith_valuations(&[2, 0, 0, 2], 2, &Zmod::new(2, 3)), vec![1, 1]);
    }

    #[test]
    fn non_diagonal() {
        // [[2,4],[6,8]] mod 16: det = -8, gcd of entries 2, so divisors 2 and 4.
        assert_eq!(smith_valuations(&[2, 4, 6, 8], 2, &Zmod::new(2, 4)), vec![1, 2]);
        // [[3,1],[0,3]] mod 9: det 9 ≡ 0, an entry is a unit.
        assert_eq!(smith_valuations(&[3, 1, 0, 3], 2, &Zmod::new(3, 2)), vec![0, 2]);
    }
}
