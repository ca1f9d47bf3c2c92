//! Fixed-precision arithmetic in `Z_p` with explicit valuation tracking.
//!
//! A nonzero [`PadicNum`] is `p^v * u` with `u` a unit known modulo `p^k`
//! (`k` is the *relative* precision), so the value itself is known modulo
//! `p^(v+k)`. Exact divisions by integers only move the valuation; they never
//! throw away digits of the unit part. Relative precision is capped at the
//! working exponent of the [`PrecisionContext`].

use std::borrow::Cow;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::frobenius::e_bound;

/// Absolute precision carried by an exact zero.
pub const EXACT: i64 = i64::MAX / 4;

fn sat(x: i64) -> i64 {
    x.min(EXACT)
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        sat(a + b)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest `e >= 0` with `p^e >= x`.
pub(crate) fn ceil_log(p: u64, x: u64) -> u32 {
    let mut e = 0;
    let mut acc: u128 = 1;
    while acc < x as u128 {
        acc *= p as u128;
        e += 1;
    }
    e
}

/// The prime, the target exponent `n` and the working exponent `nu`.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    p: u64,
    n: u32,
    nu: u32,
    guard: u32,
    e_n: u64,
    degree_bound: usize,
    pows: Vec<BigUint>,
}

impl PrecisionContext {
    /// Context for a target of `p^n`, with `nu` set by the working-precision
    /// policy `nu = n + guard + 2*ceil(log_p(D*+1)) + 4`.
    pub fn new(p: u64, n: u32, guard: u32) -> Result<Self> {
        Self::check_prime(p)?;
        if n < 1 {
            return Err(Error::InvalidPrecision("target exponent n must be >= 1".into()));
        }
        let (e_n, degree_bound) = e_bound(p, n);
        let slack = 2 * ceil_log(p, degree_bound as u64 + 1) + 4;
        Ok(Self::build(p, n, n + guard + slack, guard, e_n, degree_bound))
    }

    /// Context whose working exponent is exactly `nu` (and `n = nu`).
    pub fn fixed(p: u64, nu: u32) -> Result<Self> {
        Self::check_prime(p)?;
        if nu < 1 {
            return Err(Error::InvalidPrecision("working exponent must be >= 1".into()));
        }
        let (e_n, degree_bound) = e_bound(p, nu);
        Ok(Self::build(p, nu, nu, 0, e_n, degree_bound))
    }

    /// Same prime and target, working exponent raised to `nu`.
    pub fn with_working_exponent(&self, nu: u32) -> Self {
        let nu = nu.max(1);
        Self::build(self.p, self.n.min(nu), nu, self.guard, self.e_n, self.degree_bound)
    }

    fn check_prime(p: u64) -> Result<()> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(())
    }

    fn build(p: u64, n: u32, nu: u32, guard: u32, e_n: u64, degree_bound: usize) -> Self {
        let mut pows = Vec::with_capacity(nu as usize + 2);
        let mut acc = BigUint::one();
        for _ in 0..=nu + 1 {
            pows.push(acc.clone());
            acc *= p;
        }
        PrecisionContext { p, n, nu, guard, e_n, degree_bound, pows }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// `e_n` for the target exponent.
    pub fn e_n(&self) -> u64 {
        self.e_n
    }

    /// Uniform truncation degree `D* = p*e_n + 2p` of the entry series.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn p_pow(&self, k: u32) -> Cow<'_, BigUint> {
        match self.pows.get(k as usize) {
            Some(x) => Cow::Borrowed(x),
            None => Cow::Owned(BigUint::from(self.p).pow(k)),
        }
    }

    /// `p^k` as a signed integer.
    pub fn p_pow_int(&self, k: u32) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.p_pow(k).into_owned())
    }

    /// Removes the factors of `p` from `s` (nonzero) and returns their count.
    fn strip_p(&self, s: &mut BigUint) -> u32 {
        let p = BigUint::from(self.p);
        let mut e = 0;
        loop {
            let (q, r) = s.div_rem(&p);
            if !r.is_zero() {
                return e;
            }
            *s = q;
            e += 1;
        }
    }

    /// Builds `p^val * s` where `s` is known modulo `p^prec`.
    fn normalize(&self, val: i64, mut s: BigUint, prec: u32) -> PadicNum {
        if prec == 0 {
            return PadicNum::zero_at(val);
        }
        let modulus = self.p_pow(prec);
        if s >= *modulus {
            s %= modulus.as_ref();
        }
        if s.is_zero() {
            return PadicNum::zero_at(sat_add(val, prec as i64));
        }
        let e = self.strip_p(&mut s);
        let mut rel = prec - e;
        if rel > self.nu {
            s %= self.p_pow(self.nu).as_ref();
            rel = self.nu;
        }
        PadicNum { repr: Repr::Value { val: val + e as i64, unit: s, rel } }
    }

    pub fn zero(&self) -> PadicNum {
        PadicNum::zero_at(EXACT)
    }

    pub fn one(&self) -> PadicNum {
        PadicNum { repr: Repr::Value { val: 0, unit: BigUint::one(), rel: self.nu } }
    }

    pub fn from_int(&self, m: i64) -> PadicNum {
        self.from_bigint(&BigInt::from(m))
    }

    /// An integer, known to relative precision `nu`.
    pub fn from_bigint(&self, m: &BigInt) -> PadicNum {
        if m.is_zero() {
            return self.zero();
        }
        let mut mag = m.magnitude().clone();
        let e = self.strip_p(&mut mag);
        let modulus = self.p_pow(self.nu);
        let mut unit = mag % modulus.as_ref();
        if m.is_negative() {
            unit = modulus.as_ref() - unit;
        }
        PadicNum { repr: Repr::Value { val: e as i64, unit, rel: self.nu } }
    }

    /// The residue `r` read as a value known modulo `p^k`.
    pub fn from_residue(&self, r: &BigUint, k: u32) -> PadicNum {
        self.normalize(0, r.clone(), k)
    }

    /// The exact rational `num/den`.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<PadicNum> {
        let x = self.from_bigint(num);
        self.divide_exact(&x, den)
    }

    /// Recaps the relative precision at this context's `nu`.
    pub fn recap(&self, x: &PadicNum) -> PadicNum {
        match &x.repr {
            Repr::Value { val, unit, rel } if *rel > self.nu => {
                self.normalize(*val, unit.clone(), self.nu)
            }
            _ => x.clone(),
        }
    }

    pub fn neg(&self, x: &PadicNum) -> PadicNum {
        match &x.repr {
            Repr::Zero { .. } => x.clone(),
            Repr::Value { val, unit, rel } => {
                let m = self.p_pow(*rel);
                PadicNum { repr: Repr::Value { val: *val, unit: m.as_ref() - unit, rel: *rel } }
            }
        }
    }

    pub fn add(&self, x: &PadicNum, y: &PadicNum) -> PadicNum {
        match (&x.repr, &y.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => PadicNum::zero_at(*a.min(b)),
            (Repr::Zero { abs }, Repr::Value { val, unit, rel })
            | (Repr::Value { val, unit, rel }, Repr::Zero { abs }) => {
                if *abs <= *val {
                    PadicNum::zero_at(*abs)
                } else {
                    let k = (*abs - *val).min(*rel as i64) as u32;
                    if k == *rel {
                        PadicNum { repr: Repr::Value { val: *val, unit: unit.clone(), rel: k } }
                    } else {
                        self.normalize(*val, unit.clone(), k)
                    }
                }
            }
            (
                Repr::Value { val: v1, unit: u1, rel: k1 },
                Repr::Value { val: v2, unit: u2, rel: k2 },
            ) => {
                let abs = (v1 + *k1 as i64).min(v2 + *k2 as i64);
                let vmin = *v1.min(v2);
                let prec = (abs - vmin) as u32;
                let shifted = |v: i64, u: &BigUint| -> BigUint {
                    let d = v - vmin;
                    if d >= prec as i64 {
                        BigUint::zero()
                    } else if d == 0 {
                        u.clone()
                    } else {
                        u * self.p_pow(d as u32).as_ref()
                    }
                };
                let s = shifted(*v1, u1) + shifted(*v2, u2);
                self.normalize(vmin, s, prec)
            }
        }
    }

    pub fn sub(&self, x: &PadicNum, y: &PadicNum) -> PadicNum {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &PadicNum, y: &PadicNum) -> PadicNum {
        match (&x.repr, &y.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => PadicNum::zero_at(sat_add(*a, *b)),
            (Repr::Zero { abs }, Repr::Value { val, .. })
            | (Repr::Value { val, .. }, Repr::Zero { abs }) => PadicNum::zero_at(sat_add(*abs, *val)),
            (
                Repr::Value { val: v1, unit: u1, rel: k1 },
                Repr::Value { val: v2, unit: u2, rel: k2 },
            ) => {
                let rel = *k1.min(k2);
                let unit = (u1 * u2) % self.p_pow(rel).as_ref();
                PadicNum { repr: Repr::Value { val: v1 + v2, unit, rel } }
            }
        }
    }

    pub fn pow(&self, x: &PadicNum, e: u64) -> PadicNum {
        if e == 0 {
            return self.one();
        }
        match &x.repr {
            Repr::Zero { abs } => {
                if *abs >= EXACT {
                    self.zero()
                } else {
                    PadicNum::zero_at(sat(abs.saturating_mul(e as i64)))
                }
            }
            Repr::Value { val, unit, rel } => {
                let m = self.p_pow(*rel);
                let unit = unit.modpow(&BigUint::from(e), m.as_ref());
                PadicNum { repr: Repr::Value { val: val * e as i64, unit, rel: *rel } }
            }
        }
    }

    /// Inverse of a unit at the unit's own precision.
    pub fn unit_inverse(&self, x: &PadicNum) -> Result<PadicNum> {
        match &x.repr {
            Repr::Value { val: 0, .. } => self.inverse(x),
            _ => Err(Error::NonUnit),
        }
    }

    /// Inverse of any nonzero element; the valuation is negated.
    pub fn inverse(&self, x: &PadicNum) -> Result<PadicNum> {
        match &x.repr {
            Repr::Zero { .. } => Err(Error::NonUnit),
            Repr::Value { val, unit, rel } => {
                let m = self.p_pow(*rel);
                let inv = if *rel == 0 { BigUint::zero() } else { mod_inverse(unit, m.as_ref()) };
                Ok(PadicNum { repr: Repr::Value { val: -val, unit: inv, rel: *rel } })
            }
        }
    }

    pub fn div(&self, x: &PadicNum, y: &PadicNum) -> Result<PadicNum> {
        Ok(self.mul(x, &self.inverse(y)?))
    }

    /// Multiplies by the exact integer `w`.
    pub fn mul_int(&self, x: &PadicNum, w: &BigInt) -> PadicNum {
        if w.is_zero() {
            return self.zero();
        }
        match &x.repr {
            Repr::Zero { abs } => {
                let mut mag = w.magnitude().clone();
                let e = self.strip_p(&mut mag);
                PadicNum::zero_at(sat_add(*abs, e as i64))
            }
            Repr::Value { val, unit, rel } => {
                let mut mag = w.magnitude().clone();
                let e = self.strip_p(&mut mag);
                let m = self.p_pow(*rel);
                let mut u = (unit * mag) % m.as_ref();
                if w.is_negative() {
                    u = m.as_ref() - u;
                }
                PadicNum { repr: Repr::Value { val: val + e as i64, unit: u, rel: *rel } }
            }
        }
    }

    /// `x / w` for a nonzero integer `w = p^e * w0`: the valuation drops by `e`
    /// and the unit part is multiplied by `w0^{-1}`.
    pub fn divide_exact(&self, x: &PadicNum, w: &BigInt) -> Result<PadicNum> {
        if w.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        let mut mag = w.magnitude().clone();
        let e = self.strip_p(&mut mag) as i64;
        Ok(match &x.repr {
            Repr::Zero { abs } => {
                PadicNum::zero_at(if *abs >= EXACT { EXACT } else { abs - e })
            }
            Repr::Value { val, unit, rel } => {
                let m = self.p_pow(*rel);
                let mut u = (unit * mod_inverse(&(&mag % m.as_ref()), m.as_ref())) % m.as_ref();
                if w.is_negative() {
                    u = m.as_ref() - u;
                }
                PadicNum { repr: Repr::Value { val: val - e, unit: u, rel: *rel } }
            }
        })
    }

    /// Multiplication by `p^e` (`e` may be negative).
    pub fn shift(&self, x: &PadicNum, e: i64) -> PadicNum {
        match &x.repr {
            Repr::Zero { abs } => {
                PadicNum::zero_at(if *abs >= EXACT { EXACT } else { abs + e })
            }
            Repr::Value { val, unit, rel } => {
                PadicNum { repr: Repr::Value { val: val + e, unit: unit.clone(), rel: *rel } }
            }
        }
    }

    /// Drops everything beyond absolute precision `abs`.
    pub fn truncate_abs(&self, x: &PadicNum, abs: i64) -> PadicNum {
        self.add(x, &PadicNum::zero_at(abs))
    }

    /// True when `x - y` is indistinguishable from zero.
    pub fn equals(&self, x: &PadicNum, y: &PadicNum) -> bool {
        self.sub(x, y).is_zero()
    }

    /// True when `x ≡ y mod p^k` (as far as both are known).
    pub fn congruent(&self, x: &PadicNum, y: &PadicNum, k: i64) -> bool {
        let d = self.sub(x, y);
        match d.valuation() {
            None => true,
            Some(v) => v >= k,
        }
    }

    /// The image in `F_p` of an integral element.
    pub fn residue_mod_p(&self, x: &PadicNum) -> Result<u64> {
        match &x.repr {
            Repr::Zero { abs } if *abs >= 1 => Ok(0),
            Repr::Zero { .. } => Err(Error::InvalidPrecision("residue unknown".into())),
            Repr::Value { val, unit, .. } => match val.cmp(&0) {
                std::cmp::Ordering::Less => Err(Error::OutOfDomain("negative valuation".into())),
                std::cmp::Ordering::Greater => Ok(0),
                std::cmp::Ordering::Equal => Ok((unit % self.p).to_u64().unwrap_or(0)),
            },
        }
    }

    /// Canonical representative in `[0, p^k)`; requires `x` integral and known
    /// to absolute precision at least `k`.
    pub fn residue(&self, x: &PadicNum, k: u32) -> Result<BigUint> {
        if x.abs_prec() < k as i64 {
            return Err(Error::InternalConsistency(format!(
                "value known only to p^{}, needed p^{}",
                x.abs_prec(),
                k
            )));
        }
        match &x.repr {
            Repr::Zero { .. } => Ok(BigUint::zero()),
            Repr::Value { val, unit, .. } => {
                if *val < 0 {
                    return Err(Error::InternalConsistency(format!(
                        "expected an integral value, found valuation {val}"
                    )));
                }
                if *val >= k as i64 {
                    return Ok(BigUint::zero());
                }
                let m = self.p_pow(k);
                Ok((unit * self.p_pow(*val as u32).as_ref()) % m.as_ref())
            }
        }
    }
}

fn mod_inverse(u: &BigUint, m: &BigUint) -> BigUint {
    if m.is_one() {
        return BigUint::zero();
    }
    u.modinv(m).expect("unit part is invertible modulo p^k")
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// `O(p^abs)`; `abs == EXACT` is an exact zero.
    Zero { abs: i64 },
    Value { val: i64, unit: BigUint, rel: u32 },
}

/// A p-adic number `p^v * u`, `u` a unit known modulo `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNum {
    repr: Repr,
}

impl PadicNum {
    /// A zero known to absolute precision `abs`.
    pub fn zero_at(abs: i64) -> Self {
        PadicNum { repr: Repr::Zero { abs: sat(abs) } }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs } if abs >= EXACT)
    }

    /// `None` for (approximate) zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Value { val, .. } => Some(*val),
        }
    }

    /// Valuation, reading a zero `O(p^a)` as valuation `a`.
    pub fn valuation_or_abs(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Value { val, .. } => *val,
        }
    }

    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Value { unit, .. } => Some(unit),
        }
    }

    /// Relative precision `k`; zero for zeros.
    pub fn rel_prec(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Value { rel, .. } => *rel,
        }
    }

    /// Absolute precision `v + k`.
    pub fn abs_prec(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Value { val, rel, .. } => val + *rel as i64,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.repr, Repr::Value { val: 0, .. })
    }

    pub fn is_integral(&self) -> bool {
        match &self.repr {
            Repr::Zero { abs } => *abs >= 0,
            Repr::Value { val, .. } => *val >= 0,
        }
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs } if *abs >= EXACT => write!(f, "0"),
            Repr::Zero { abs } => write!(f, "O(p^{abs})"),
            Repr::Value { val, unit, rel } => {
                write!(f, "p^{val} * {unit} + O(p^{})", val + *rel as i64)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, k: u32) -> PrecisionContext {
        PrecisionContext::fixed(p, k).unwrap()
    }

    fn res(c: &PrecisionContext, x: &PadicNum, k: u32) -> u64 {
        c.residue(x, k).unwrap().to_u64().unwrap()
    }

    #[test]
    fn ctx_new_examples() {
        let c = PrecisionContext::new(5, 20, 4).unwrap();
        assert_eq!(c.p(), 5);
        assert_eq!(c.n(), 20);
        assert!(c.nu() >= 24);
        assert_eq!(PrecisionContext::new(2, 5, 0).unwrap_err(), Error::InvalidPrime(2));
        assert_eq!(PrecisionContext::new(9, 5, 0).unwrap_err(), Error::InvalidPrime(9));
        assert!(matches!(PrecisionContext::new(5, 0, 0), Err(Error::InvalidPrecision(_))));
        let c = PrecisionContext::new(5, 1, 0).unwrap();
        assert!(c.nu() >= 1);
        assert_eq!(c.e_n(), 0);
        assert_eq!(c.degree_bound(), 10);
    }

    #[test]
    fn ring_op_examples() {
        let c = ctx(5, 3);
        // p^1*2 times 3
        let x = c.shift(&c.from_int(2), 1);
        let prod = c.mul(&x, &c.from_int(3));
        assert_eq!(prod.valuation(), Some(1));
        assert_eq!(prod.unit_part().unwrap(), &BigUint::from(6u32));
        let s = c.add(&c.from_int(2), &c.from_int(3));
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.unit_part().unwrap(), &BigUint::one());
        assert_eq!(res(&c, &c.pow(&c.from_int(2), 5), 3), 32);
    }

    #[test]
    fn cancellation_loses_known_digits() {
        let c = ctx(5, 3);
        let x = c.from_int(7);
        let y = c.from_int(2);
        let d = c.sub(&x, &y);
        assert_eq!(d.valuation(), Some(1));
        assert_eq!(d.abs_prec(), 3);
        assert_eq!(d.rel_prec(), 2);
        assert!(c.sub(&x, &x).is_zero());
        assert_eq!(c.sub(&x, &x).abs_prec(), 3);
    }

    #[test]
    fn unit_inverse_examples() {
        let c = ctx(5, 3);
        assert_eq!(res(&c, &c.unit_inverse(&c.from_int(2)).unwrap(), 3), 63);
        assert_eq!(res(&c, &c.unit_inverse(&c.one()).unwrap(), 3), 1);
        assert_eq!(c.unit_inverse(&c.from_int(5)).unwrap_err(), Error::NonUnit);
        assert_eq!(c.unit_inverse(&c.zero()).unwrap_err(), Error::NonUnit);
    }

    #[test]
    fn divide_exact_examples() {
        let c = ctx(5, 3);
        let q = c.divide_exact(&c.from_int(50), &BigInt::from(5)).unwrap();
        assert_eq!(q.valuation(), Some(1));
        assert_eq!(q.unit_part().unwrap(), &BigUint::from(2u32));
        let q = c.divide_exact(&c.one(), &BigInt::from(4)).unwrap();
        assert_eq!(res(&c, &q, 3), 94);
        let q = c.divide_exact(&c.from_int(3), &BigInt::from(25)).unwrap();
        assert_eq!(q.valuation(), Some(-2));
        assert_eq!(q.unit_part().unwrap(), &BigUint::from(3u32));
        assert_eq!(q.abs_prec(), 1);
    }

    #[test]
    fn zero_compares_equal_below_precision() {
        let c = ctx(5, 4);
        let z = PadicNum::zero_at(2);
        assert!(c.equals(&z, &c.from_int(25)));
        assert!(c.equals(&z, &c.from_int(50)));
        assert!(!c.equals(&z, &c.from_int(5)));
    }

    #[test]
    fn negative_integers_and_residues() {
        let c = ctx(5, 3);
        assert_eq!(res(&c, &c.from_int(-1), 3), 124);
        assert_eq!(c.residue_mod_p(&c.from_int(-1)).unwrap(), 4);
        assert!(c.residue(&c.divide_exact(&c.one(), &BigInt::from(5)).unwrap(), 1).is_err());
    }
}
