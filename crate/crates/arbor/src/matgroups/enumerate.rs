use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::Zmod;
use crate::error::{Error, Result};

use super::matrix::{AffineElement, ResidueMatrix};
use super::spec::{CartanKind, GroupSpec};

pub const CARDINALITY_GUARD: u64 = 10_000_000;

fn guard(predicted: &BigUint) -> Result<()> {
    if predicted.to_u64().is_none_or(|p| p > CARDINALITY_GUARD) {
        return Err(Error::CardinalityGuardExceeded {
            predicted: predicted.to_string(),
            guard: CARDINALITY_GUARD,
        });
    }
    Ok(())
}

/// Cartan element a + bω in the basis (1, ω).
pub fn cartan_element(kind: &CartanKind, a: u64, b: u64, r: &Zmod) -> ResidueMatrix {
    match kind {
        CartanKind::Split => ResidueMatrix::new(2, *r, vec![a, 0, 0, b]),
        CartanKind::Nonsplit { c, d } => {
            let c = r.elem(*c).value;
            let d = r.elem(*d).value;
            let e = vec![a, r.neg(r.mul(b, d)), b, r.sub(a, r.mul(b, c))];
            ResidueMatrix::new(2, *r, e)
        }
    }
}

/// Element of the non-identity coset of the normalizer.
pub fn cartan_coset_element(kind: &CartanKind, a: u64, b: u64, r: &Zmod) -> ResidueMatrix {
    match kind {
        CartanKind::Split => ResidueMatrix::new(2, *r, vec![0, a, b, 0]),
        CartanKind::Nonsplit { c, d } => {
            let c = r.elem(*c).value;
            let d = r.elem(*d).value;
            let e = vec![a, r.sub(r.mul(b, d), r.mul(a, c)), b, r.neg(a)];
            ResidueMatrix::new(2, *r, e)
        }
    }
}

/// Whether (a, b) parametrises a Cartan unit.
pub fn cartan_is_unit(kind: &CartanKind, a: u64, b: u64, r: &Zmod) -> bool {
    match kind {
        CartanKind::Split => r.is_unit(a) && r.is_unit(b),
        CartanKind::Nonsplit { .. } => cartan_element(kind, a, b, r).is_invertible(),
    }
}

/// The six matrices of S₃ acting on {x ∈ Z³ : Σx = 0} in the basis e₁−e₃, e₂−e₃.
pub fn s3_matrices() -> Vec<[i64; 4]> {
    let perms = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let basis = [[1i64, 0, -1], [0, 1, -1]];
    perms
        .iter()
        .map(|s| {
            let mut cols = [[0i64; 2]; 2];
            for (k, b) in basis.iter().enumerate() {
                let mut y = [0i64; 3];
                for i in 0..3 {
                    y[s[i]] = b[i];
                }
                cols[k] = [y[0], y[1]];
            }
            [cols[0][0], cols[1][0], cols[0][1], cols[1][1]]
        })
        .collect()
}

/// J with +1 at (i, d−1−i) for i < g and −1 below.
pub fn symplectic_form(g: usize) -> Vec<i64> {
    let d = 2 * g;
    let mut j = vec![0; d * d];
    for i in 0..d {
        j[i * d + (d - 1 - i)] = if i < g { 1 } else { -1 };
    }
    j
}

/// ⟨x, y⟩ = xᵀJy for the standard form.
pub fn pairing(x: &[u64], y: &[u64], g: usize, r: &Zmod) -> u64 {
    let d = 2 * g;
    let mut s = 0;
    for i in 0..d {
        let t = r.mul(x[i], y[d - 1 - i]);
        s = if i < g { r.add(s, t) } else { r.sub(s, t) };
    }
    s
}

/// Multiplier m with MᵀJM = mJ, if M is a symplectic similitude.
pub fn gsp_multiplier(m: &ResidueMatrix) -> Option<u64> {
    let d = m.d;
    if d % 2 != 0 {
        return None;
    }
    let g = d / 2;
    let r = &m.ring;
    let cols: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| m.get(i, j)).collect()).collect();
    let mult = pairing(&cols[0], &cols[d - 1], g, r);
    if !r.is_unit(mult) {
        return None;
    }
    let jf = symplectic_form(g);
    for i in 0..d {
        for j in 0..d {
            let want = r.mul(mult, r.elem(jf[i * d + j]).value);
            if pairing(&cols[i], &cols[j], g, r) != want {
                return None;
            }
        }
    }
    Some(mult)
}

fn all_vectors(d: usize, r: &Zmod) -> Vec<Vec<u64>> {
    let m = r.modulus;
    let total = (m as usize).pow(d as u32);
    (0..total)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let x = (idx % m as usize) as u64;
                    idx /= m as usize;
                    x
                })
                .collect()
        })
        .collect()
}

/// All of GSp_{2g}(Z/ℓⁿ) by backtracking over columns.
fn enumerate_gsp(g: usize, r: &Zmod) -> Vec<ResidueMatrix> {
    let d = 2 * g;
    let vecs = all_vectors(d, r);
    let jf = symplectic_form(g);
    // Column order pairs each basis vector with its symplectic partner.
    let mut order = Vec::with_capacity(d);
    for i in 0..g {
        order.push(i);
        order.push(d - 1 - i);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    fn rec(
        depth: usize,
        mult: Option<u64>,
        chosen: &mut Vec<usize>,
        order: &[usize],
        vecs: &[Vec<u64>],
        jf: &[i64],
        g: usize,
        r: &Zmod,
        out: &mut Vec<ResidueMatrix>,
    ) {
        let d = 2 * g;
        if depth == d {
            let mut e = vec![0; d * d];
            for (k, &col) in order.iter().enumerate() {
                for i in 0..d {
                    e[i * d + col] = vecs[chosen[k]][i];
                }
            }
            out.push(ResidueMatrix { d, ring: *r, entries: e });
            return;
        }
        let pos = order[depth];
        'cand: for (vi, v) in vecs.iter().enumerate() {
            if depth == 0 && v.iter().all(|&x| r.ord_capped(x) > 0) {
                continue;
            }
            let mut m = mult;
            for (k, &prev) in chosen.iter().enumerate() {
                let pk = order[k];
                let val = pairing(&vecs[prev], v, g, r);
                let jv = jf[pk * d + pos];
                if jv == 0 {
                    if val != 0 {
                        continue 'cand;
                    }
                } else {
                    let want_m = if jv == 1 { val } else { r.neg(val) };
                    match m {
                        None => {
                            if !r.is_unit(want_m) {
                                continue 'cand;
                            }
                            m = Some(want_m);
                        }
                        Some(mm) if mm != want_m => continue 'cand,
                        _ => {}
                    }
                }
            }
            chosen.push(vi);
            rec(depth + 1, m, chosen, order, vecs, jf, g, r, out);
            chosen.pop();
        }
    }
    rec(0, None, &mut chosen, &order, &vecs, &jf, g, r, &mut out);
    out
}

/// Closure of matrices under multiplication (finite groups only).
pub fn close_linear(gens: &[ResidueMatrix], d: usize, r: &Zmod) -> Result<Vec<ResidueMatrix>> {
    let id = ResidueMatrix::identity(d, *r);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.entries.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.entries.clone()) {
                if seen.len() as u64 > CARDINALITY_GUARD {
                    return Err(Error::CardinalityGuardExceeded {
                        predicted: format!("> {CARDINALITY_GUARD}"),
                        guard: CARDINALITY_GUARD,
                    });
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Closure of affine elements under composition.
pub fn close_affine(gens: &[AffineElement]) -> Result<Vec<AffineElement>> {
    let first = gens.first().ok_or_else(|| Error::Invalid("no generators".into()))?;
    let id = AffineElement::identity(first.linear.d, first.linear.ring);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(id.key());
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.key()) {
                if seen.len() as u64 > CARDINALITY_GUARD {
                    return Err(Error::CardinalityGuardExceeded {
                        predicted: format!("> {CARDINALITY_GUARD}"),
                        guard: CARDINALITY_GUARD,
                    });
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Every element of the level-n reduction of `spec`, each exactly once.
pub fn enumerate(spec: &GroupSpec, ell: u64, n: u32) -> Result<Vec<ResidueMatrix>> {
    spec.validate(ell)?;
    if let Some(p) = spec.predicted_order(ell, n) {
        guard(&p)?;
    }
    let r = Zmod::new(ell, n);
    let m = r.modulus;
    let out = match spec {
        GroupSpec::GL2Full => {
            let mut v = Vec::new();
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        for d in 0..m {
                            let det = r.sub(r.mul(a, d), r.mul(b, c));
                            if r.is_unit(det) {
                                v.push(ResidueMatrix { d: 2, ring: r, entries: vec![a, b, c, d] });
                            }
                        }
                    }
                }
            }
            v
        }
        GroupSpec::Cartan(k) | GroupSpec::CartanNormalizer(k) => {
            let mut v = Vec::new();
            for a in 0..m {
                for b in 0..m {
                    if cartan_is_unit(k, a, b, &r) {
                        v.push(cartan_element(k, a, b, &r));
                    }
                }
            }
            if matches!(spec, GroupSpec::CartanNormalizer(_)) {
                for a in 0..m {
                    for b in 0..m {
                        let x = cartan_coset_element(k, a, b, &r);
                        if x.is_invertible() {
                            v.push(x);
                        }
                    }
                }
            }
            v
        }
        GroupSpec::GSp { g } => enumerate_gsp(*g, &r),
        GroupSpec::SplitTorusPair => r.units().map(|u| ResidueMatrix::scalar(2, r, u)).collect(),
        GroupSpec::ScalarUnits => r.units().map(|u| ResidueMatrix::scalar(1, r, u)).collect(),
        GroupSpec::BigTorusS3 => {
            let mut v = Vec::new();
            for s in s3_matrices() {
                let sm = ResidueMatrix::from_i64(2, r, &s);
                for u in r.units() {
                    v.push(sm.mul(&ResidueMatrix::scalar(2, r, u)));
                }
            }
            v
        }
        GroupSpec::Generated { dim, .. } => {
            let gens: Vec<ResidueMatrix> =
                spec.affine_generators(ell, n)?.into_iter().map(|a| a.linear).collect();
            close_linear(&gens, *dim, &r)?
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn distinct(v: &[ResidueMatrix]) -> usize {
        v.iter().map(|m| m.entries.clone()).collect::<HashSet<_>>().len()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(enumerate(&GroupSpec::GL2Full, 2, 1).unwrap().len(), 6);
        let gsp = enumerate(&GroupSpec::GSp { g: 2 }, 2, 1).unwrap();
        assert_eq!(gsp.len(), 720);
        assert_eq!(distinct(&gsp), 720);
        let nm = enumerate(&GroupSpec::CartanNormalizer(CartanKind::Split), 3, 1).unwrap();
        assert_eq!(nm.len(), 8);
    }

    #[test]
    fn orders_match_closed_forms() {
        let specs = [
            GroupSpec::GL2Full,
            GroupSpec::Cartan(CartanKind::Split),
            GroupSpec::Cartan(CartanKind::Nonsplit { c: 1, d: 1 }),
            GroupSpec::CartanNormalizer(CartanKind::Split),
            GroupSpec::CartanNormalizer(CartanKind::Nonsplit { c: 1, d: 1 }),
            GroupSpec::SplitTorusPair,
            GroupSpec::BigTorusS3,
            GroupSpec::ScalarUnits,
            GroupSpec::GSp { g: 1 },
        ];
        for spec in &specs {
            for n in 1..=2 {
                let v = enumerate(spec, 2, n).unwrap();
                assert_eq!(v.len() as u64, spec.predicted_order(2, n).unwrap().to_u64().unwrap(), "{spec} n={n}");
                assert_eq!(distinct(&v), v.len(), "{spec}");
                let closed = close_linear(&v, spec.dim(), &Zmod::new(2, n)).unwrap();
                assert_eq!(closed.len(), v.len(), "{spec} not closed");
            }
        }
    }

    #[test]
    fn gsp_members_are_similitudes() {
        for m in enumerate(&GroupSpec::GSp { g: 1 }, 3, 1).unwrap() {
            assert_eq!(gsp_multiplier(&m), Some(m.det()));
        }
        let r = Zmod::new(3, 1);
        let count = enumerate(&GroupSpec::GSp { g: 2 }, 3, 1).unwrap().len();
        assert_eq!(count, 103_680);
        let bad = ResidueMatrix::from_i64(2, r, &[1, 0, 0, 0]);
        assert_eq!(gsp_multiplier(&bad), None);
    }

    #[test]
    fn guard_trips() {
        let e = enumerate(&GroupSpec::GSp { g: 2 }, 3, 2).unwrap_err();
        assert!(matches!(e, Error::CardinalityGuardExceeded { .. }));
    }
}
