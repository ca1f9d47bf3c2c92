//! Truncated power series over [`PadicNum`].

use num_bigint::{BigInt, BigUint};
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{PadicNum, PrecisionContext, EXACT};

/// A power series known modulo `t^(d+1)`, stored as `d+1` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTrunc {
    coeffs: Vec<PadicNum>,
}

impl SeriesTrunc {
    pub fn from_coeffs(coeffs: Vec<PadicNum>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least one coefficient");
        SeriesTrunc { coeffs }
    }

    /// The polynomial with integer coefficients `cs`, truncated at `d`.
    pub fn from_ints(ctx: &PrecisionContext, cs: &[i64], d: usize) -> Self {
        let coeffs = (0..=d)
            .map(|k| cs.get(k).map_or_else(|| ctx.zero(), |&c| ctx.from_int(c)))
            .collect();
        SeriesTrunc { coeffs }
    }

    pub fn zero(ctx: &PrecisionContext, d: usize) -> Self {
        SeriesTrunc { coeffs: vec![ctx.zero(); d + 1] }
    }

    pub fn one(ctx: &PrecisionContext, d: usize) -> Self {
        Self::constant(ctx, ctx.one(), d)
    }

    pub fn constant(ctx: &PrecisionContext, c: PadicNum, d: usize) -> Self {
        let mut s = Self::zero(ctx, d);
        s.coeffs[0] = c;
        s
    }

    /// `t^j` truncated at `d`.
    pub fn monomial(ctx: &PrecisionContext, c: PadicNum, j: usize, d: usize) -> Self {
        let mut s = Self::zero(ctx, d);
        if j <= d {
            s.coeffs[j] = c;
        }
        s
    }

    /// Truncation order `d`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PadicNum] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&PadicNum> {
        self.coeffs.get(k)
    }

    /// Keeps coefficients `0..=d` (padding with exact zeros).
    pub fn truncate(&self, d: usize) -> Self {
        let mut coeffs: Vec<PadicNum> = self.coeffs.iter().take(d + 1).cloned().collect();
        while coeffs.len() < d + 1 {
            coeffs.push(PadicNum::zero_at(EXACT));
        }
        SeriesTrunc { coeffs }
    }

    /// Minimum absolute precision over all coefficients.
    pub fn min_abs_prec(&self) -> i64 {
        self.coeffs.iter().map(PadicNum::abs_prec).min().unwrap_or(EXACT)
    }

    /// Minimum valuation over the nonzero coefficients.
    pub fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(PadicNum::valuation).min()
    }
}

pub fn add(ctx: &PrecisionContext, f: &SeriesTrunc, g: &SeriesTrunc) -> SeriesTrunc {
    let d = f.order().min(g.order());
    let coeffs = (0..=d).map(|k| ctx.add(&f.coeffs[k], &g.coeffs[k])).collect();
    SeriesTrunc { coeffs }
}

pub fn sub(ctx: &PrecisionContext, f: &SeriesTrunc, g: &SeriesTrunc) -> SeriesTrunc {
    let d = f.order().min(g.order());
    let coeffs = (0..=d).map(|k| ctx.sub(&f.coeffs[k], &g.coeffs[k])).collect();
    SeriesTrunc { coeffs }
}

pub fn neg(ctx: &PrecisionContext, f: &SeriesTrunc) -> SeriesTrunc {
    SeriesTrunc { coeffs: f.coeffs.iter().map(|c| ctx.neg(c)).collect() }
}

pub fn scale(ctx: &PrecisionContext, f: &SeriesTrunc, c: &PadicNum) -> SeriesTrunc {
    SeriesTrunc { coeffs: f.coeffs.iter().map(|x| ctx.mul(x, c)).collect() }
}

/// Multiplication by `t^j`, keeping the order.
pub fn shift_up(ctx: &PrecisionContext, f: &SeriesTrunc, j: usize) -> SeriesTrunc {
    let d = f.order();
    let coeffs = (0..=d)
        .map(|k| if k < j { ctx.zero() } else { f.coeffs[k - j].clone() })
        .collect();
    SeriesTrunc { coeffs }
}

/// Scaled-integer view of one coefficient: `c = p^base * x` with `x` known
/// modulo `p^(abs - base)`.
struct Scaled {
    x: BigUint,
    val: Option<i64>,
    abs: i64,
}

fn scaled_view(ctx: &PrecisionContext, f: &[PadicNum]) -> (i64, Vec<Scaled>) {
    let base = f.iter().filter_map(PadicNum::valuation).min().unwrap_or(0);
    let view = f
        .iter()
        .map(|c| match (c.valuation(), c.unit_part()) {
            (Some(v), Some(u)) => {
                let x = if v == base { u.clone() } else { u * ctx.p_pow((v - base) as u32).as_ref() };
                Scaled { x, val: Some(v), abs: c.abs_prec() }
            }
            _ => Scaled { x: BigUint::zero(), val: None, abs: c.abs_prec() },
        })
        .collect();
    (base, view)
}

fn term_prec(a: &Scaled, b: &Scaled) -> i64 {
    let plus = |x: i64, y: i64| if x >= EXACT || y >= EXACT { EXACT } else { (x + y).min(EXACT) };
    match (a.val, b.val) {
        (Some(va), Some(vb)) => plus(a.abs, vb).min(plus(b.abs, va)),
        (Some(va), None) => plus(b.abs, va),
        (None, Some(vb)) => plus(a.abs, vb),
        (None, None) => plus(a.abs, b.abs),
    }
}

/// Product of `f` and `g` truncated at order `min(d, ord f, ord g)`
/// (schoolbook convolution).
///
/// Coefficients are lifted to integers over a common power of `p`, summed
/// exactly, and reduced once per output coefficient; the absolute precision
/// of each output is the minimum over its contributing terms.
pub fn mul(ctx: &PrecisionContext, f: &SeriesTrunc, g: &SeriesTrunc, d: usize) -> SeriesTrunc {
    let d = d.min(f.order()).min(g.order());
    let (bf, vf) = scaled_view(ctx, &f.coeffs[..=d]);
    let (bg, vg) = scaled_view(ctx, &g.coeffs[..=d]);
    let base = bf + bg;
    let mut out = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut acc = BigUint::zero();
        let mut abs = EXACT;
        for i in 0..=k {
            let (a, b) = (&vf[i], &vg[k - i]);
            abs = abs.min(term_prec(a, b));
            if a.val.is_some() && b.val.is_some() {
                acc += &a.x * &b.x;
            }
        }
        out.push(rebuild(ctx, base, acc, abs));
    }
    SeriesTrunc { coeffs: out }
}

/// `p^base * acc` known to absolute precision `abs`.
fn rebuild(ctx: &PrecisionContext, base: i64, acc: BigUint, abs: i64) -> PadicNum {
    if abs >= EXACT {
        if acc.is_zero() {
            return ctx.zero();
        }
        return ctx.shift(&ctx.from_bigint(&BigInt::from(acc)), base);
    }
    let digits = abs - base;
    if digits <= 0 {
        return PadicNum::zero_at(abs);
    }
    let digits = digits.min(i64::from(u32::MAX)) as u32;
    let r = ctx.from_residue(&acc, digits);
    ctx.shift(&r, base)
}

/// Inverse of `f` modulo `t^(d+1)` by the telescoping product
/// `1/(1-h) = (1+h)(1+h^2)(1+h^4)...(1+h^(2^j))` with `floor(log2 d)+1` factors.
pub fn inv(ctx: &PrecisionContext, f: &SeriesTrunc, d: usize) -> Result<SeriesTrunc> {
    let f0 = &f.coeffs[0];
    if !f0.is_unit() {
        return Err(Error::NonInvertibleSeries);
    }
    let f0_inv = ctx.unit_inverse(f0)?;
    let d = d.min(f.order());
    if d == 0 {
        return Ok(SeriesTrunc::constant(ctx, f0_inv, 0));
    }
    let g = scale(ctx, &f.truncate(d), &f0_inv);
    // h = 1 - g has an exactly vanishing constant term
    let mut h = neg(ctx, &g);
    h.coeffs[0] = ctx.zero();
    let one = SeriesTrunc::one(ctx, d);
    let factors = (usize::BITS - d.leading_zeros()) as usize;
    let mut prod = add(ctx, &one, &h);
    let mut power = h;
    for _ in 1..factors {
        power = mul(ctx, &power, &power, d);
        prod = mul(ctx, &prod, &add(ctx, &one, &power), d);
    }
    Ok(scale(ctx, &prod, &f0_inv))
}

/// `(1-t)^r` truncated at `d`, for a rational `r` whose denominator is prime
/// to `p`.
pub fn binpow(ctx: &PrecisionContext, r: Rational64, d: usize) -> Result<SeriesTrunc> {
    let (num, den) = (*r.numer(), *r.denom());
    if den % ctx.p() as i64 == 0 {
        return Err(Error::InvalidExponent(r.to_string()));
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut c = ctx.one();
    coeffs.push(c.clone());
    for k in 0..d as i64 {
        // binom(r,k+1) (-1)^(k+1) = binom(r,k) (-1)^k * -(num - k den) / ((k+1) den)
        let top = -(BigInt::from(num) - BigInt::from(k) * den);
        let bottom = BigInt::from(k + 1) * den;
        c = ctx.divide_exact(&ctx.mul_int(&c, &top), &bottom)?;
        coeffs.push(c.clone());
    }
    Ok(SeriesTrunc { coeffs })
}

/// `f(c t^p)` truncated at `d`, for a twist `c ≡ 1 mod p`. The result order
/// is capped at `p*(ord f + 1) - 1`, beyond which `f(c t^p)` is unknown.
pub fn subst_frob(
    ctx: &PrecisionContext,
    f: &SeriesTrunc,
    c: &PadicNum,
    d: usize,
) -> Result<SeriesTrunc> {
    check_twist(ctx, c)?;
    let p = ctx.p() as usize;
    let d = d.min(p * (f.order() + 1) - 1);
    let mut out = SeriesTrunc::zero(ctx, d);
    let mut ck = ctx.one();
    for k in 0..=d / p {
        out.coeffs[p * k] = ctx.mul(&f.coeffs[k], &ck);
        ck = ctx.mul(&ck, c);
    }
    Ok(out)
}

pub(crate) fn check_twist(ctx: &PrecisionContext, c: &PadicNum) -> Result<()> {
    let d = ctx.sub(c, &ctx.one());
    if d.valuation_or_abs() < 1 {
        return Err(Error::InvalidTwist);
    }
    Ok(())
}

/// `sum h_k t^(k+1)/(k+1)`; the order grows by one.
pub fn integrate(ctx: &PrecisionContext, h: &SeriesTrunc) -> SeriesTrunc {
    let mut coeffs = Vec::with_capacity(h.coeffs.len() + 1);
    coeffs.push(ctx.zero());
    for (k, c) in h.coeffs.iter().enumerate() {
        let q = ctx
            .divide_exact(c, &BigInt::from(k + 1))
            .expect("k+1 is nonzero");
        coeffs.push(q);
    }
    SeriesTrunc { coeffs }
}

/// Termwise derivative; the order drops by one.
pub fn deriv(ctx: &PrecisionContext, f: &SeriesTrunc) -> SeriesTrunc {
    if f.order() == 0 {
        return SeriesTrunc::zero(ctx, 0);
    }
    let coeffs = (1..=f.order())
        .map(|k| ctx.mul_int(&f.coeffs[k], &BigInt::from(k)))
        .collect();
    SeriesTrunc { coeffs }
}

/// Horner evaluation `sum f_k x^k` of the stored coefficients at an integral `x`.
pub fn eval(ctx: &PrecisionContext, f: &SeriesTrunc, x: &PadicNum) -> Result<PadicNum> {
    if !x.is_integral() {
        return Err(Error::OutOfDomain("evaluation point has negative valuation".into()));
    }
    let mut acc = ctx.zero();
    for c in f.coeffs.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), c);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ctx(p: u64, k: u32) -> PrecisionContext {
        PrecisionContext::fixed(p, k).unwrap()
    }

    fn residues(c: &PrecisionContext, f: &SeriesTrunc, k: u32) -> Vec<u64> {
        f.coeffs()
            .iter()
            .map(|x| c.residue(x, k).unwrap().to_u64().unwrap())
            .collect()
    }

    #[test]
    fn mul_examples() {
        let c = ctx(5, 4);
        let f = SeriesTrunc::from_ints(&c, &[1, 1], 2);
        let g = SeriesTrunc::from_ints(&c, &[1, -1], 2);
        assert_eq!(residues(&c, &mul(&c, &f, &g, 2), 4), vec![1, 0, 624]);
        let one = SeriesTrunc::one(&c, 2);
        assert_eq!(residues(&c, &mul(&c, &f, &one, 2), 4), vec![1, 1, 0]);
        let c2 = ctx(5, 2);
        let h = SeriesTrunc::from_ints(&c2, &[1, 12, 3], 2);
        assert_eq!(residues(&c2, &mul(&c2, &h, &h, 2), 2), vec![1, 24, 0]);
    }

    #[test]
    fn inv_examples() {
        let c = ctx(5, 4);
        let f = SeriesTrunc::from_ints(&c, &[1, -1], 3);
        assert_eq!(residues(&c, &inv(&c, &f, 3).unwrap(), 4), vec![1, 1, 1, 1]);
        let c2 = ctx(5, 2);
        let f = SeriesTrunc::from_ints(&c2, &[1, 5], 2);
        assert_eq!(residues(&c2, &inv(&c2, &f, 2).unwrap(), 2), vec![1, 20, 0]);
        let f = SeriesTrunc::from_ints(&c, &[0, 1, 1], 4);
        assert_eq!(inv(&c, &f, 4).unwrap_err(), Error::NonInvertibleSeries);
    }

    #[test]
    fn binpow_examples() {
        let c = ctx(5, 2);
        let r = |a, b| Rational64::new(a, b);
        assert_eq!(residues(&c, &binpow(&c, r(1, 1), 2).unwrap(), 2), vec![1, 24, 0]);
        assert_eq!(residues(&c, &binpow(&c, r(1, 2), 2).unwrap(), 2), vec![1, 12, 3]);
        assert_eq!(residues(&c, &binpow(&c, r(0, 1), 2).unwrap(), 2), vec![1, 0, 0]);
        assert!(matches!(binpow(&c, r(1, 5), 2), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn subst_examples() {
        let c = ctx(5, 4);
        let f = SeriesTrunc::from_ints(&c, &[1, 1], 1);
        let s = subst_frob(&c, &f, &c.one(), 5).unwrap();
        assert_eq!(residues(&c, &s, 4), vec![1, 0, 0, 0, 0, 1]);
        let f = SeriesTrunc::from_ints(&c, &[0, 0, 1], 2);
        let s = subst_frob(&c, &f, &c.from_int(6), 10).unwrap();
        assert_eq!(c.residue(&s.coeffs()[10], 4).unwrap().to_u64(), Some(36));
        assert!(s.coeffs()[..10].iter().all(PadicNum::is_zero));
        let f = SeriesTrunc::one(&c, 0);
        let s = subst_frob(&c, &f, &c.from_int(11), 7).unwrap();
        assert_eq!(residues(&c, &s, 4), vec![1, 0, 0, 0, 0]);
        assert_eq!(subst_frob(&c, &f, &c.from_int(2), 7).unwrap_err(), Error::InvalidTwist);
    }

    #[test]
    fn integrate_examples() {
        let c = ctx(5, 4);
        let h = SeriesTrunc::one(&c, 0);
        assert_eq!(residues(&c, &integrate(&c, &h), 4), vec![0, 1]);
        let h = SeriesTrunc::from_ints(&c, &[0, 0, 0, 0, 1], 4);
        let s = integrate(&c, &h);
        assert_eq!(s.coeffs()[5].valuation(), Some(-1));
        assert_eq!(s.coeffs()[5].unit_part().unwrap().to_u64(), Some(1));
        let h = SeriesTrunc::from_ints(&c, &[0, 2], 1);
        assert_eq!(residues(&c, &integrate(&c, &h), 4), vec![0, 0, 1]);
    }

    #[test]
    fn eval_examples() {
        let c = ctx(5, 1);
        let f = SeriesTrunc::from_ints(&c, &[1, 4, 1], 2);
        assert_eq!(c.residue(&eval(&c, &f, &c.from_int(2)).unwrap(), 1).unwrap().to_u64(), Some(3));
        let c = ctx(5, 3);
        let f = SeriesTrunc::from_ints(&c, &[17, 4, 1], 2);
        assert_eq!(c.residue(&eval(&c, &f, &c.zero()).unwrap(), 3).unwrap().to_u64(), Some(17));
        let f = SeriesTrunc::from_ints(&c, &[0, 1], 1);
        assert_eq!(c.residue(&eval(&c, &f, &c.from_int(7)).unwrap(), 3).unwrap().to_u64(), Some(7));
        let x = c.divide_exact(&c.one(), &BigInt::from(5)).unwrap();
        assert!(matches!(eval(&c, &f, &x), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn mul_tracks_negative_valuations() {
        let c = ctx(5, 6);
        let fifth = c.divide_exact(&c.one(), &BigInt::from(5)).unwrap();
        let f = SeriesTrunc::from_coeffs(vec![c.one(), fifth]);
        let g = SeriesTrunc::from_ints(&c, &[1, 5], 1);
        let prod = mul(&c, &f, &g, 1);
        // (1 + t/5)(1 + 5t) = 1 + (5 + 1/5) t
        let expect = c.add(&c.from_int(5), &c.divide_exact(&c.one(), &BigInt::from(5)).unwrap());
        assert!(c.equals(&prod.coeffs()[1], &expect));
        assert_eq!(prod.coeffs()[1].abs_prec(), 5);
    }
}
