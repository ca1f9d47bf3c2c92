//! Brute-force evaluators built on Dwork's congruences: dense truncations of
//! the hypergeometric series to degree `< p^n`, evaluated with plain `u128`
//! arithmetic mod `p^n`. Exponential in `n`; meant for small cross-checks.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::padic::PrecisionContext;
use crate::special::{Orbit, RationalParam};
use crate::PadicNum;

/// Cap on the number of series terms one oracle call may touch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_terms: u64,
}

impl Default for OracleBudget {
    /// Enough for `5^8`.
    fn default() -> Self {
        OracleBudget { max_terms: 400_000 }
    }
}

impl OracleBudget {
    fn admit(&self, terms: u128) -> Result<()> {
        if terms > self.max_terms as u128 {
            return Err(Error::BudgetExceeded { terms, cap: self.max_terms });
        }
        Ok(())
    }
}

/// Outcome of the nonvanishing check over a Dwork orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    Holds,
    FailsAt(usize),
}

/// Arithmetic mod `p^n` with `p^n < 2^63`, so products fit in `u128`.
struct Modulus {
    p: u64,
    n: u32,
    m: u64,
}

impl Modulus {
    fn new(p: u64, n: u32) -> Result<Self> {
        if p < 3 || n == 0 {
            return Err(Error::InvalidPrecision(format!("oracle needs odd p and n >= 1, got p={p} n={n}")));
        }
        let m = (p as u128)
            .checked_pow(n)
            .filter(|&m| m < 1 << 63)
            .ok_or_else(|| Error::InvalidPrecision(format!("{p}^{n} too large for the oracle")))?;
        Ok(Modulus { p, n, m: m as u64 })
    }

    fn reduce(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.m);
        let r = x.mod_floor(&m);
        u64::try_from(r).expect("reduced below modulus")
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        (x as u128 * y as u128 % self.m as u128) as u64
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.m as u128) as u64
    }

    fn pow(&self, mut b: u64, mut e: u128) -> u64 {
        let mut r = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Inverse of a unit mod `p^n` by the extended Euclidean algorithm.
    fn inv(&self, x: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.m as i128, (x % self.m) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        (r0 == 1).then(|| s0.rem_euclid(self.m as i128) as u64)
    }

    /// `x = p^v u`, `u` reduced mod `p^n`; `x` nonzero.
    fn split(&self, x: i128) -> (u32, u64) {
        let mut x = x;
        let mut v = 0;
        while x % self.p as i128 == 0 {
            x /= self.p as i128;
            v += 1;
        }
        (v, x.rem_euclid(self.m as i128) as u64)
    }

    /// `p^v u mod p^n`.
    fn value(&self, v: u32, u: u64) -> u64 {
        if v >= self.n {
            0
        } else {
            self.mul(u, self.p.pow(v))
        }
    }

    fn to_padic(&self, r: u64) -> PadicNum {
        let ctx = PrecisionContext::fixed(self.p, self.n).expect("valid oracle modulus");
        ctx.from_residue(&BigUint::from(r), self.n)
    }
}

/// Coefficients of `2F1(a, b; 1; t)` up to degree `< terms`, as residues
/// mod `p^n`, from the Pochhammer ratio with exact valuations.
fn hg_coeffs(md: &Modulus, a: RationalParam, b: RationalParam, terms: u128) -> Result<Vec<u64>> {
    let p = md.p as i64;
    if a.den() % p == 0 || b.den() % p == 0 {
        return Err(Error::InvalidParameter("p divides a denominator".into()));
    }
    let mut out = Vec::with_capacity(terms as usize);
    let (mut v, mut u) = (0u32, 1u64);
    let den_inv = md.inv(md.split((a.den() * b.den()) as i128).1).expect("unit");
    for k in 0..terms as i128 {
        out.push(md.value(v, u));
        if k + 1 == terms as i128 {
            break;
        }
        let top = (a.num() as i128 + k * a.den() as i128) * (b.num() as i128 + k * b.den() as i128);
        if top == 0 {
            // terminating series
            out.resize(terms as usize, 0);
            break;
        }
        let (vt, ut) = md.split(top);
        let (vb, ub) = md.split((k + 1) * (k + 1));
        v = v + vt - vb;
        u = md.mul(md.mul(u, ut), md.mul(md.inv(ub).expect("unit"), den_inv));
    }
    Ok(out)
}

fn horner(md: &Modulus, coeffs: &[u64], x: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| md.add(md.mul(acc, x), c))
}

fn require_unit_point(p: u64, alpha: &BigInt) -> Result<u64> {
    let r = u64::try_from(alpha.mod_floor(&BigInt::from(p))).expect("small residue");
    if r == 0 || r == 1 {
        return Err(Error::InvalidPoint(format!("α ≡ {r} mod {p}")));
    }
    Ok(r)
}

fn ensure_condition(p: u64, a: RationalParam, b: RationalParam, alpha: u64) -> Result<()> {
    match check_condition(p, a, b, alpha)? {
        Condition::Holds => Ok(()),
        Condition::FailsAt(index) => Err(Error::ConditionViolated { index }),
    }
}

/// `F_{ab}(t)_{<p^n} / [F_{a'b'}(c t^p)]_{<p^n}` at `t = α`, mod `p^n`.
pub fn oracle_dwork(
    p: u64,
    a: RationalParam,
    b: RationalParam,
    alpha: &BigInt,
    c: &BigInt,
    n: u32,
    budget: &OracleBudget,
) -> Result<PadicNum> {
    let md = Modulus::new(p, n)?;
    let terms = md.m as u128;
    budget.admit(terms)?;
    let ares = require_unit_point(p, alpha)?;
    if c.mod_floor(&BigInt::from(p)) != BigInt::from(1) {
        return Err(Error::InvalidTwist);
    }
    ensure_condition(p, a, b, ares)?;
    let orbit = Orbit::new(a, b, p)?;
    let (a1, b1) = orbit.pair(1);
    let x = md.reduce(alpha);
    let num = horner(&md, &hg_coeffs(&md, a, b, terms)?, x);
    let xs = md.mul(md.reduce(c), md.pow(x, p as u128));
    let den = horner(&md, &hg_coeffs(&md, a1, b1, terms / p as u128)?, xs);
    let den_inv = md.inv(den).ok_or(Error::ConditionViolated { index: 1 })?;
    Ok(md.to_padic(md.mul(num, den_inv)))
}

/// `F'_{ab}(t)_{<p^n} / F_{ab}(t)_{<p^n}` at `t = α`, mod `p^n`.
pub fn oracle_df(
    p: u64,
    a: RationalParam,
    b: RationalParam,
    alpha: &BigInt,
    n: u32,
    budget: &OracleBudget,
) -> Result<PadicNum> {
    let md = Modulus::new(p, n)?;
    let terms = md.m as u128;
    budget.admit(terms)?;
    let ares = require_unit_point(p, alpha)?;
    ensure_condition(p, a, b, ares)?;
    let coeffs = hg_coeffs(&md, a, b, terms)?;
    let x = md.reduce(alpha);
    let deriv: Vec<u64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| md.mul(c, (k as u64) % md.m))
        .collect();
    let num = horner(&md, &deriv, x);
    let den = horner(&md, &coeffs, x);
    let den_inv = md.inv(den).ok_or(Error::ConditionViolated { index: 0 })?;
    Ok(md.to_padic(md.mul(num, den_inv)))
}

/// `F_{a^(i) b^(i)}(t)_{<p}` at `ᾱ` is nonzero mod `p` for every `i` in the
/// Dwork orbit.
pub fn check_condition(p: u64, a: RationalParam, b: RationalParam, alpha: u64) -> Result<Condition> {
    let md = Modulus::new(p, 1)?;
    let orbit = Orbit::new(a, b, p)?;
    for (i, &(ai, bi)) in orbit.pairs().iter().enumerate() {
        let coeffs = hg_coeffs(&md, ai, bi, p as u128)?;
        if horner(&md, &coeffs, alpha % p) == 0 {
            return Ok(Condition::FailsAt(i));
        }
    }
    Ok(Condition::Holds)
}

/// `ψ̃(i/N) mod p^j` as `Σ_{1<=k<n_j, p∤k} 1/k` with `n_j ≡ i/N mod p^(j+2)`.
pub fn oracle_psi(i: i64, big_n: i64, p: u64, j: u32, budget: &OracleBudget) -> Result<PadicNum> {
    if big_n <= 0 || (big_n as u64).is_multiple_of(p) {
        return Err(Error::InvalidOrder(big_n.max(0) as u64));
    }
    let wide = Modulus::new(p, j + 2)?;
    budget.admit(wide.m as u128)?;
    let target = wide.mul(
        (i as i128).rem_euclid(wide.m as i128) as u64,
        wide.inv(big_n as u64).expect("p does not divide N"),
    );
    let md = Modulus::new(p, j)?;
    let mut sum = 0;
    for k in 1..target {
        if k % p != 0 {
            sum = md.add(sum, md.inv(k).expect("unit"));
        }
    }
    Ok(md.to_padic(sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> RationalParam {
        RationalParam::new(n, d).unwrap()
    }

    fn res(x: &PadicNum, p: u64, n: u32) -> u64 {
        let ctx = PrecisionContext::fixed(p, n).unwrap();
        ctx.residue(x, n).unwrap().to_u64().unwrap()
    }

    #[test]
    fn dwork_mod_p() {
        let b = OracleBudget::default();
        let half = q(1, 2);
        for (alpha, want) in [(2, 3), (3, 2), (4, 3)] {
            let v = oracle_dwork(5, half, half, &alpha.into(), &1.into(), 1, &b).unwrap();
            assert_eq!(res(&v, 5, 1), want);
        }
        assert!(matches!(
            oracle_dwork(5, half, half, &5.into(), &1.into(), 1, &b),
            Err(Error::InvalidPoint(_))
        ));
    }

    #[test]
    fn dwork_stabilizes() {
        let b = OracleBudget::default();
        let half = q(1, 2);
        for c in [1, 6] {
            let v3 = oracle_dwork(5, half, half, &2.into(), &c.into(), 3, &b).unwrap();
            let v4 = oracle_dwork(5, half, half, &2.into(), &c.into(), 4, &b).unwrap();
            assert_eq!(res(&v3, 5, 3), res(&v4, 5, 3));
        }
    }

    #[test]
    fn golden_low_digits() {
        let b = OracleBudget::default();
        let half = q(1, 2);
        let m = 5u64.pow(6);
        for (alpha, golden) in [(2, 7213582472073u64), (3, 22359491081212), (4, 65856465245823)] {
            let v = oracle_dwork(5, half, half, &alpha.into(), &1.into(), 6, &b).unwrap();
            assert_eq!(res(&v, 5, 6), golden % m);
        }
    }

    #[test]
    fn df_mod_p() {
        let b = OracleBudget::default();
        let v = oracle_df(5, q(1, 2), q(1, 2), &2.into(), 1, &b).unwrap();
        assert_eq!(res(&v, 5, 1), 1);
    }

    #[test]
    fn condition_examples() {
        for alpha in 2..5 {
            assert_eq!(check_condition(5, q(1, 2), q(1, 2), alpha).unwrap(), Condition::Holds);
        }
    }

    #[test]
    fn psi_examples() {
        let b = OracleBudget::default();
        assert_eq!(res(&oracle_psi(1, 2, 5, 1, &b).unwrap(), 5, 1), 4);
        assert_eq!(res(&oracle_psi(0, 3, 5, 2, &b).unwrap(), 5, 2), 0);
        let v2 = oracle_psi(1, 3, 7, 2, &b).unwrap();
        let v3 = oracle_psi(1, 3, 7, 3, &b).unwrap();
        assert_eq!(res(&v2, 7, 2), res(&v3, 7, 2));
    }

    #[test]
    fn budget_is_enforced() {
        let b = OracleBudget { max_terms: 100 };
        let r = oracle_dwork(5, q(1, 2), q(1, 2), &2.into(), &1.into(), 3, &b);
        assert_eq!(r.unwrap_err(), Error::BudgetExceeded { terms: 125, cap: 100 });
    }
}
