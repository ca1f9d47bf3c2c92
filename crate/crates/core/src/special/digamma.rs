//! p-adic digamma values at rationals `i/N` through the order-one
//! p-adic polylogarithm at `N`-th roots of unity.

use num_bigint::BigInt;

use super::dwork::RationalParam;
use super::zq::{floor_log, ZqContext, ZqElem};
use crate::error::{Error, Result};
use crate::padic::{PadicNum, PrecisionContext};
use crate::series::check_twist;

/// Extra digits used inside the extension; absorbs the division by `p`
/// in `w(z)` and the `1/k` factors.
const ZQ_GUARD: u32 = 2;

/// `ln_1^(p)(z) = Σ_{k>=1} p^(k-1) w(z)^k / k`, with
/// `w(z) = p^{-1} (1 - (1-z)^p / (1-z^p))`, for a root of unity `z ≠ 1`.
pub fn ln1p(zq: &ZqContext, z: &ZqElem) -> Result<ZqElem> {
    let one = zq.one();
    if zq.equals(z, &one) {
        return Err(Error::InvalidArgument("ln1 has a pole at z = 1".into()));
    }
    let p = zq.ctx().p();
    let ratio = frobenius_ratio(zq, z)?;
    let w = zq.shift(&zq.sub(&one, &ratio), -1);
    let nu = zq.ctx().nu() as u64;
    let k_max = (1..).find(|&k: &u64| k - 1 - floor_log(p, k) >= nu).unwrap() + 2;
    let mut sum = zq.zero();
    let mut wk = one;
    for k in 1..=k_max {
        wk = zq.mul(&wk, &w);
        let term = zq.divide_exact(&zq.shift(&wk, k as i64 - 1), &BigInt::from(k));
        sum = zq.add(&sum, &term);
    }
    Ok(sum)
}

/// `(1-z)^p / (1-z^p)`, a unit congruent to 1 mod p.
fn frobenius_ratio(zq: &ZqContext, z: &ZqElem) -> Result<ZqElem> {
    let p = zq.ctx().p() as u128;
    let one = zq.one();
    let num = zq.pow(&zq.sub(&one, z), p);
    let den = zq.sub(&one, &zq.pow(z, p));
    Ok(zq.mul(&num, &zq.inverse(&den)?))
}

/// The same value through the logarithm: `-p^{-1} log((1-z)^p / (1-z^p))`.
pub fn ln1p_via_log(zq: &ZqContext, z: &ZqElem) -> Result<ZqElem> {
    if zq.equals(z, &zq.one()) {
        return Err(Error::InvalidArgument("ln1 has a pole at z = 1".into()));
    }
    let l = zq.iwasawa_log(&frobenius_ratio(zq, z)?)?;
    Ok(zq.neg(&zq.shift(&l, -1)))
}

/// `ψ̃_p(i/N) = Σ_{ε ∈ μ_N, ε ≠ 1} (1 - ε^{-i}) ln_1^(p)(ε)`, returned in the
/// working precision of `ctx`. The sum is Galois-invariant, so it must land
/// in `Z_p`; that is checked.
pub fn psi_tilde(ctx: &PrecisionContext, i: i64, n: i64) -> Result<PadicNum> {
    let p = ctx.p();
    if n <= 0 || (n as u64).is_multiple_of(p) {
        return Err(Error::InvalidOrder(n.max(0) as u64));
    }
    let i = i.rem_euclid(n);
    if i == 0 {
        return Ok(ctx.zero());
    }
    let zq = ZqContext::new(n as u64, p, ctx.nu() + ZQ_GUARD)?;
    let zeta = zq.primitive_root()?;
    let mut powers = Vec::with_capacity(n as usize);
    let mut acc = zq.one();
    for _ in 0..n {
        powers.push(acc.clone());
        acc = zq.mul(&acc, &zeta);
    }
    let mut sum = zq.zero();
    for j in 1..n {
        let eps = &powers[j as usize];
        let twist = &powers[(-i * j).rem_euclid(n) as usize];
        let weight = zq.sub(&zq.one(), twist);
        sum = zq.add(&sum, &zq.mul(&weight, &ln1p(&zq, eps)?));
    }
    let nu = ctx.nu() as i64;
    for c in &sum.coeffs()[1..] {
        if c.valuation_or_abs() < nu {
            return Err(Error::InternalConsistency(format!(
                "digamma value at {i}/{n} is not in Z_p: extension coordinate {c}"
            )));
        }
    }
    let v = sum.constant();
    if v.abs_prec() < nu {
        return Err(Error::InternalConsistency(format!(
            "digamma value at {i}/{n} known only to p^{}",
            v.abs_prec()
        )));
    }
    Ok(ctx.recap(v))
}

/// `p^{-1} log(c)` for `c ≡ 1 mod p`.
pub fn log_twist_over_p(ctx: &PrecisionContext, c: &PadicNum) -> Result<PadicNum> {
    check_twist(ctx, c)?;
    let zq = ZqContext::new(1, ctx.p(), ctx.nu() + ZQ_GUARD)?;
    let l = zq.iwasawa_log(&zq.from_padic(c.clone()))?;
    Ok(ctx.recap(&ctx.shift(l.constant(), -1)))
}

/// Constant term of `τ^(σ)`: `-ψ̃(a) - ψ̃(b) + p^{-1} log(c)`. This equals
/// `-2γ_p - ψ_p(a) - ψ_p(b) + p^{-1} log(c)`, the Euler constant cancelling.
pub fn tau_constant(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    c: &PadicNum,
) -> Result<PadicNum> {
    let log_term = log_twist_over_p(ctx, c)?;
    let pa = psi_tilde(ctx, a.num(), a.den())?;
    let pb = psi_tilde(ctx, b.num(), b.den())?;
    Ok(ctx.sub(&log_term, &ctx.add(&pa, &pb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn r(c: &PrecisionContext, x: &PadicNum, k: u32) -> u64 {
        c.residue(x, k).unwrap().to_u64().unwrap()
    }

    #[test]
    fn ln1p_examples() {
        let zq = ZqContext::new(2, 5, 4).unwrap();
        let v = ln1p(&zq, &zq.from_int(-1)).unwrap();
        assert_eq!(r(zq.ctx(), v.constant(), 1), 2);
        assert!(matches!(ln1p(&zq, &zq.one()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn ln1p_matches_log_route() {
        for (l, p) in [(2u64, 5u64), (3, 5), (4, 7), (6, 7), (3, 7)] {
            let zq = ZqContext::new(l, p, 10).unwrap();
            let zeta = zq.primitive_root().unwrap();
            let mut z = zeta.clone();
            for _ in 1..l {
                let a = ln1p(&zq, &z).unwrap();
                let b = ln1p_via_log(&zq, &z).unwrap();
                let d = zq.sub(&a, &b);
                assert!(d.coeffs().iter().all(|c| c.valuation_or_abs() >= 9), "l={l} p={p}");
                z = zq.mul(&z, &zeta);
            }
        }
    }

    #[test]
    fn psi_tilde_examples() {
        let c = PrecisionContext::fixed(5, 1).unwrap();
        assert!(psi_tilde(&c, 0, 2).unwrap().is_zero());
        assert_eq!(r(&c, &psi_tilde(&c, 1, 2).unwrap(), 1), 4);
        // ψ̃(1/2) = 2 ln1(-1)
        let c = PrecisionContext::fixed(5, 6).unwrap();
        let zq = ZqContext::new(2, 5, 8).unwrap();
        let twice = c.mul_int(ln1p(&zq, &zq.from_int(-1)).unwrap().constant(), &BigInt::from(2));
        assert!(c.congruent(&psi_tilde(&c, 1, 2).unwrap(), &twice, 6));
    }

    #[test]
    fn tau_constant_examples() {
        let c = PrecisionContext::fixed(5, 3).unwrap();
        let half = RationalParam::new(1, 2).unwrap();
        let k = tau_constant(&c, half, half, &c.one()).unwrap();
        assert_eq!(r(&c, &k, 1), 2);
        let l = log_twist_over_p(&c, &c.from_int(6)).unwrap();
        assert_eq!(r(&c, &l, 1), 1);
        assert!(log_twist_over_p(&c, &c.one()).unwrap().is_zero());
        assert_eq!(log_twist_over_p(&c, &c.from_int(2)).unwrap_err(), Error::InvalidTwist);
    }
}
