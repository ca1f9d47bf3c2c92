//! The unramified extension `Z_q = Z_p[x]/(H)` holding the `L`-th roots of
//! unity, with Teichmüller lifts and the Iwasawa logarithm.

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fp_poly;
use crate::error::{Error, Result};
use crate::padic::{ceil_log, PadicNum, PrecisionContext};

/// Seed of the cyclotomic-factor search; fixed so results are reproducible.
const FACTOR_SEED: u64 = 0x5eed_d00c;

/// An element of `Z_q`: `f` coordinates in the basis `1, x, .., x^(f-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZqElem {
    coeffs: Vec<PadicNum>,
}

impl ZqElem {
    pub fn coeffs(&self) -> &[PadicNum] {
        &self.coeffs
    }

    /// The coordinate on `1`.
    pub fn constant(&self) -> &PadicNum {
        &self.coeffs[0]
    }
}

#[derive(Clone, Debug)]
pub struct ZqContext {
    ctx: PrecisionContext,
    l: u64,
    f: usize,
    /// Monic `H`, low to high, length `f + 1`.
    modulus: Vec<i64>,
}

impl ZqContext {
    /// Builds `Z_q` with `q = p^f`, `f` the order of `p` mod `L`, from an
    /// irreducible factor of the `L`-th cyclotomic polynomial mod `p`.
    pub fn new(l: u64, p: u64, nu: u32) -> Result<Self> {
        let ctx = PrecisionContext::fixed(p, nu)?;
        if l == 0 || l.is_multiple_of(p) {
            return Err(Error::InvalidOrder(l));
        }
        let f = fp_poly::mult_order(p, l);
        let phi: Vec<u64> = fp_poly::cyclotomic(l)
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
        let h = fp_poly::equal_degree_factor(&phi, f, p, &mut rng);
        debug_assert_eq!(fp_poly::degree(&h), Some(f));
        let modulus = h.iter().map(|&c| c as i64).collect();
        Ok(ZqContext { ctx, l, f, modulus })
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn root_order(&self) -> u64 {
        self.l
    }

    /// Coefficients of `H`, low to high.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// `q = p^f`.
    pub fn q(&self) -> u128 {
        (self.ctx.p() as u128).pow(self.f as u32)
    }

    pub fn zero(&self) -> ZqElem {
        ZqElem { coeffs: vec![self.ctx.zero(); self.f] }
    }

    pub fn one(&self) -> ZqElem {
        self.from_padic(self.ctx.one())
    }

    pub fn from_padic(&self, c: PadicNum) -> ZqElem {
        let mut e = self.zero();
        e.coeffs[0] = self.ctx.recap(&c);
        e
    }

    pub fn from_int(&self, m: i64) -> ZqElem {
        self.from_padic(self.ctx.from_int(m))
    }

    /// The class of `x`.
    pub fn generator(&self) -> ZqElem {
        if self.f == 1 {
            return self.from_int(-self.modulus[0]);
        }
        let mut e = self.zero();
        e.coeffs[1] = self.ctx.one();
        e
    }

    pub fn from_coeffs(&self, coeffs: Vec<PadicNum>) -> ZqElem {
        assert_eq!(coeffs.len(), self.f);
        ZqElem { coeffs }
    }

    pub fn add(&self, x: &ZqElem, y: &ZqElem) -> ZqElem {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| self.ctx.add(a, b)).collect();
        ZqElem { coeffs }
    }

    pub fn sub(&self, x: &ZqElem, y: &ZqElem) -> ZqElem {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| self.ctx.sub(a, b)).collect();
        ZqElem { coeffs }
    }

    pub fn neg(&self, x: &ZqElem) -> ZqElem {
        ZqElem { coeffs: x.coeffs.iter().map(|a| self.ctx.neg(a)).collect() }
    }

    pub fn scale(&self, x: &ZqElem, c: &PadicNum) -> ZqElem {
        ZqElem { coeffs: x.coeffs.iter().map(|a| self.ctx.mul(a, c)).collect() }
    }

    /// Multiplication by `p^e`.
    pub fn shift(&self, x: &ZqElem, e: i64) -> ZqElem {
        ZqElem { coeffs: x.coeffs.iter().map(|a| self.ctx.shift(a, e)).collect() }
    }

    pub fn divide_exact(&self, x: &ZqElem, w: &BigInt) -> ZqElem {
        let coeffs = x
            .coeffs
            .iter()
            .map(|a| self.ctx.divide_exact(a, w).expect("nonzero divisor"))
            .collect();
        ZqElem { coeffs }
    }

    pub fn mul(&self, x: &ZqElem, y: &ZqElem) -> ZqElem {
        let ctx = &self.ctx;
        let f = self.f;
        let mut prod = vec![ctx.zero(); 2 * f - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            for (j, b) in y.coeffs.iter().enumerate() {
                prod[i + j] = ctx.add(&prod[i + j], &ctx.mul(a, b));
            }
        }
        // x^f = -(h_0 + .. + h_{f-1} x^{f-1})
        for top in (f..2 * f - 1).rev() {
            let c = prod[top].clone();
            for (j, &h) in self.modulus[..f].iter().enumerate() {
                let t = ctx.mul_int(&c, &BigInt::from(h));
                prod[top - f + j] = ctx.sub(&prod[top - f + j], &t);
            }
        }
        prod.truncate(f);
        ZqElem { coeffs: prod }
    }

    pub fn pow(&self, x: &ZqElem, mut e: u128) -> ZqElem {
        let mut result = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// A unit is an element whose reduction mod `p` is nonzero in `F_q`.
    pub fn is_unit(&self, x: &ZqElem) -> bool {
        x.coeffs.iter().all(PadicNum::is_integral) && x.coeffs.iter().any(PadicNum::is_unit)
    }

    pub fn is_zero(&self, x: &ZqElem) -> bool {
        x.coeffs.iter().all(PadicNum::is_zero)
    }

    pub fn equals(&self, x: &ZqElem, y: &ZqElem) -> bool {
        self.is_zero(&self.sub(x, y))
    }

    /// Inverse of a unit: `x^(q-2)` inverts mod `p`, then Newton `y(2 - xy)`.
    pub fn inverse(&self, x: &ZqElem) -> Result<ZqElem> {
        if !self.is_unit(x) {
            return Err(Error::NonUnit);
        }
        let mut y = self.pow(x, self.q() - 2);
        let two = self.from_int(2);
        let steps = ceil_log(2, self.ctx.nu() as u64) + 1;
        for _ in 0..steps {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
        }
        Ok(y)
    }

    /// The root of unity `ω(x)` congruent to the unit `x` mod `p`, by
    /// iterating `y -> y^q` until it stabilizes.
    pub fn teichmuller(&self, x: &ZqElem) -> Result<ZqElem> {
        if !self.is_unit(x) {
            return Err(Error::NonUnit);
        }
        let q = self.q();
        let mut y = x.clone();
        for _ in 0..=self.ctx.nu() + 1 {
            let next = self.pow(&y, q);
            if self.equals(&next, &y) {
                return Ok(next);
            }
            y = next;
        }
        Err(Error::InternalConsistency("Teichmüller iteration did not stabilize".into()))
    }

    /// A primitive `L`-th root of unity: the Teichmüller lift of `x`.
    pub fn primitive_root(&self) -> Result<ZqElem> {
        self.teichmuller(&self.generator())
    }

    /// Iwasawa logarithm of a unit: `log(u/ω(u)) = -Σ (1 - u/ω(u))^k / k`.
    pub fn iwasawa_log(&self, u: &ZqElem) -> Result<ZqElem> {
        if !self.is_unit(u) {
            return Err(Error::OutOfDomain("logarithm of a non-unit".into()));
        }
        let w = self.teichmuller(u)?;
        let w_inv = self.pow(&w, self.q() - 2);
        let x = self.mul(u, &w_inv);
        let z = self.sub(&self.one(), &x);
        let nu = self.ctx.nu() as u64;
        let p = self.ctx.p();
        let k_max = (1..).find(|&k: &u64| k - floor_log(p, k) >= nu).unwrap();
        let mut sum = self.zero();
        let mut zk = self.one();
        for k in 1..=k_max {
            zk = self.mul(&zk, &z);
            sum = self.sub(&sum, &self.divide_exact(&zk, &BigInt::from(k)));
        }
        Ok(sum)
    }
}

/// `floor(log_p k)` for `k >= 1`.
pub(crate) fn floor_log(p: u64, k: u64) -> u64 {
    let mut e = 0;
    let mut acc = p;
    while acc <= k {
        acc = acc.saturating_mul(p);
        e += 1;
    }
    e
}
