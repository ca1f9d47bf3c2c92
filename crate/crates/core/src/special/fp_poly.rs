//! Dense polynomials over `F_p` (coefficients low to high), just enough to
//! split cyclotomic polynomials into irreducible factors.

use rand::Rng;

pub(crate) type FpPoly = Vec<u64>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &FpPoly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let r = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(r)
}

fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = ((r[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(r)
}

/// Quotient and remainder; `b` nonzero.
pub(crate) fn div_rem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut r = trim(a.clone());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = (r[dr] as u128 * lead_inv as u128 % p as u128) as u64;
        q[dr - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let t = (c as u128 * bj as u128 % p as u128) as u64;
            r[dr - db + j] = (r[dr - db + j] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(a: FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => a,
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            a.into_iter().map(|c| (c as u128 * inv as u128 % p as u128) as u64).collect()
        }
    }
}

pub(crate) fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = div_rem(&x, &y, p).1;
        x = y;
        y = r;
    }
    monic(x, p)
}

fn pow_mod_poly(base: &FpPoly, mut e: u128, m: &FpPoly, p: u64) -> FpPoly {
    let mut r: FpPoly = vec![1];
    let mut b = div_rem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = div_rem(&mul(&r, &b, p), m, p).1;
        }
        b = div_rem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Integer coefficients of the `l`-th cyclotomic polynomial.
pub(crate) fn cyclotomic(l: u64) -> Vec<i64> {
    // x^l - 1 divided by every Φ_d, d | l, d < l
    let mut poly = vec![0i64; l as usize + 1];
    poly[0] = -1;
    poly[l as usize] = 1;
    for d in 1..l {
        if l.is_multiple_of(d) {
            poly = div_exact_int(&poly, &cyclotomic(d));
        }
    }
    poly
}

fn div_exact_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b is monic
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// One monic irreducible factor of degree `f` of `g`, where `g` is squarefree
/// and all its irreducible factors have degree `f` (equal-degree splitting).
pub(crate) fn equal_degree_factor<R: Rng>(g: &FpPoly, f: usize, p: u64, rng: &mut R) -> FpPoly {
    let q = (p as u128).pow(f as u32);
    let mut g = monic(trim(g.clone()), p);
    while degree(&g).unwrap_or(0) > f {
        let dg = degree(&g).unwrap();
        let r: FpPoly = trim((0..dg).map(|_| rng.gen_range(0..p)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let mut h = gcd(&r, &g, p);
        if degree(&h) == Some(0) {
            let s = sub(&pow_mod_poly(&r, (q - 1) / 2, &g, p), &vec![1], p);
            h = gcd(&s, &g, p);
        }
        let dh = degree(&h).unwrap_or(0);
        if dh == 0 || dh == dg {
            continue;
        }
        let other = monic(div_rem(&g, &h, p).0, p);
        g = if dh <= dg - dh { h } else { other };
    }
    g
}

/// Multiplicative order of `p` modulo `l` (1 for `l = 1`).
pub(crate) fn mult_order(p: u64, l: u64) -> usize {
    if l == 1 {
        return 1;
    }
    let mut acc = p % l;
    let mut f = 1;
    while acc != 1 {
        acc = (acc as u128 * p as u128 % l as u128) as u64;
        f += 1;
    }
    f
}
