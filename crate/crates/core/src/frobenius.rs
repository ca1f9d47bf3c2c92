//! Power-series expansions of the Frobenius matrix entries on the first
//! cohomology of the hypergeometric family, around `t = 0`.
//!
//! For a pair `(a, b)` with Dwork primes `(a', b')` and a Frobenius
//! `σ(t) = c t^p` the entries are
//!
//! ```text
//! A = F'(t^σ)/F(t) - t (1-t)^(a+b) F'(t) F'(t^σ) τ^σ(t)      (F' here = F_{a'b'})
//! C = (1-t)^(a+b-1) F(t) F_{a'b'}(t^σ) τ^σ(t)
//! B = p t^σ (1-t^σ) DF_{a'b'}(t^σ) A - t (1-t)^(a+b) (1-t^σ)^(1-a'-b') F'(t)/F_{a'b'}(t^σ)
//! D = p t^σ (1-t^σ) DF_{a'b'}(t^σ) C + (1-t)^(a+b-1) (1-t^σ)^(1-a'-b') F(t)/F_{a'b'}(t^σ)
//! ```
//!
//! with `τ^σ = κ + τ_{ab}(t) - p^{-1} τ_{a'b'}(t^σ)` and `κ` the digamma
//! constant from [`crate::special::tau_constant`].

use num_bigint::BigInt;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::padic::{PadicNum, PrecisionContext};
use crate::series::{self, SeriesTrunc};
use crate::special::{dwork_prime, tau_constant, Orbit, RationalParam};

/// `e_n = max{k >= 1 : k - v_p(k!) < n}` (0 if the set is empty) and the
/// uniform entry degree `D* = p e_n + 2p`.
pub fn e_bound(p: u64, n: u32) -> (u64, usize) {
    let n = n as u64;
    let mut e = 0;
    let mut vp_fact = 0u64;
    let mut k = 1u64;
    // k - v_p(k!) >= (k(p-2)+1)/(p-1), so nothing past this point qualifies
    while k * (p - 2) + 1 < n * (p - 1) || k <= n {
        let mut m = k;
        while m.is_multiple_of(p) {
            m /= p;
            vp_fact += 1;
        }
        if k - vp_fact < n {
            e = k;
        }
        k += 1;
    }
    (e, (p * e + 2 * p) as usize)
}

/// Where the twist constant came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistSource {
    User,
    /// `c = β^(1-p)`, so that `t^σ` fixes `β`.
    FromPoint,
}

/// The Frobenius lift `σ(t) = c t^p`, `c ≡ 1 mod p`.
#[derive(Clone, Debug)]
pub struct TwistConfig {
    c: PadicNum,
    source: TwistSource,
}

impl TwistConfig {
    pub fn user(ctx: &PrecisionContext, c: PadicNum) -> Result<Self> {
        series::check_twist(ctx, &c)?;
        Ok(TwistConfig { c, source: TwistSource::User })
    }

    pub fn identity(ctx: &PrecisionContext) -> Self {
        TwistConfig { c: ctx.one(), source: TwistSource::User }
    }

    /// `c_β = β^(1-p)`; `≡ 1 mod p` by Fermat for `β ∈ Z_p^×`.
    pub fn from_point(ctx: &PrecisionContext, beta: &PadicNum) -> Result<Self> {
        if !beta.is_unit() {
            return Err(Error::InvalidPoint("twist base must be a unit".into()));
        }
        let c = ctx.unit_inverse(&ctx.pow(beta, ctx.p() - 1))?;
        series::check_twist(ctx, &c)?;
        Ok(TwistConfig { c, source: TwistSource::FromPoint })
    }

    pub fn c(&self) -> &PadicNum {
        &self.c
    }

    pub fn source(&self) -> TwistSource {
        self.source
    }

    /// `x^σ = c x^p`.
    pub fn apply(&self, ctx: &PrecisionContext, x: &PadicNum) -> PadicNum {
        ctx.mul(&self.c, &ctx.pow(x, ctx.p()))
    }
}

fn check_den(p: u64, x: RationalParam) -> Result<()> {
    if x.den() % p as i64 == 0 {
        return Err(Error::InvalidParameter(format!("p = {p} divides the denominator of {x}")));
    }
    Ok(())
}

/// `F = 2F1(a, b; 1; t)` and `F'` to order `d`, from
/// `c_{k+1} = c_k (a+k)(b+k)/(k+1)^2` with exact integer valuations.
pub fn hg_series(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    d: usize,
) -> Result<(SeriesTrunc, SeriesTrunc)> {
    check_den(ctx.p(), a)?;
    check_den(ctx.p(), b)?;
    let mut coeffs = Vec::with_capacity(d + 2);
    let mut c = ctx.one();
    let den = BigInt::from(a.den()) * b.den();
    for k in 0..=d as i64 {
        coeffs.push(c.clone());
        let top = BigInt::from(a.num() + k * a.den()) * (b.num() + k * b.den());
        let bottom = &den * (k + 1) * (k + 1);
        c = ctx.divide_exact(&ctx.mul_int(&c, &top), &bottom)?;
    }
    coeffs.push(c);
    let full = SeriesTrunc::from_coeffs(coeffs);
    let deriv = series::deriv(ctx, &full);
    Ok((full.truncate(d), deriv))
}

/// `τ_{ab}` with `τ' = t^{-1}(1 - 1/((1-t)^(a+b) F^2))`, `τ(0) = 0`.
pub fn tau_series(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    d: usize,
) -> Result<SeriesTrunc> {
    if d == 0 {
        return Ok(SeriesTrunc::zero(ctx, 0));
    }
    let (f, _) = hg_series(ctx, a, b, d)?;
    let r = a.as_ratio() + b.as_ratio();
    let ff = series::mul(ctx, &f, &f, d);
    let w = series::mul(ctx, &series::binpow(ctx, r, d)?, &ff, d);
    let u = series::inv(ctx, &w, d)?;
    if !ctx.sub(&ctx.one(), &u.coeffs()[0]).is_zero() {
        return Err(Error::InternalConsistency("τ integrand has a pole at t = 0".into()));
    }
    let h = SeriesTrunc::from_coeffs(u.coeffs()[1..].iter().map(|x| ctx.neg(x)).collect());
    Ok(series::integrate(ctx, &h))
}

fn check_integral(ctx: &PrecisionContext, s: &SeriesTrunc, what: &str) -> Result<()> {
    let n = ctx.n() as i64;
    for (k, c) in s.coeffs().iter().enumerate() {
        if !c.is_integral() {
            return Err(Error::InternalConsistency(format!(
                "{what}: coefficient {k} = {c} is not integral"
            )));
        }
        if c.abs_prec() < n {
            return Err(Error::InternalConsistency(format!(
                "{what}: coefficient {k} known only to p^{}, target p^{n}",
                c.abs_prec()
            )));
        }
    }
    Ok(())
}

/// `τ^σ = κ + τ_{ab}(t) - p^{-1} τ_{a'b'}(c t^p)`; integrality is asserted.
pub fn tau_sigma_series(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    twist: &TwistConfig,
    d: usize,
) -> Result<SeriesTrunc> {
    let p = ctx.p();
    let kappa = tau_constant(ctx, a, b, twist.c())?;
    let tau = tau_series(ctx, a, b, d)?;
    let tau1 = tau_series(ctx, dwork_prime(a, p)?, dwork_prime(b, p)?, d / p as usize)?;
    let frob = series::subst_frob(ctx, &tau1, twist.c(), d)?;
    let frob = SeriesTrunc::from_coeffs(frob.coeffs().iter().map(|x| ctx.shift(x, -1)).collect());
    let mut out = series::sub(ctx, &tau, &frob);
    let c0 = ctx.add(&out.coeffs()[0], &kappa);
    let mut coeffs = out.coeffs().to_vec();
    coeffs[0] = c0;
    out = SeriesTrunc::from_coeffs(coeffs);
    check_integral(ctx, &out, "τ^σ")?;
    Ok(out)
}

/// One of the four Frobenius matrix entries, with the factor `p` on the
/// first column included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntryKind {
    PA,
    B,
    PC,
    D,
}

impl EntryKind {
    pub const ALL: [EntryKind; 4] = [EntryKind::PA, EntryKind::B, EntryKind::PC, EntryKind::D];

    /// Degree of the numerator polynomial over `(1-t^σ)(1-t)^(p e_n)`.
    pub fn degree_bound(self, p: u64, e_n: u64) -> usize {
        let base = (p * e_n) as usize;
        let p = p as usize;
        match self {
            EntryKind::PA => base + p,
            EntryKind::B => base + 2 * p,
            EntryKind::PC => base + p - 1,
            EntryKind::D => base + 2 * p - 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EntryKind::PA => "pA",
            EntryKind::B => "B",
            EntryKind::PC => "pC",
            EntryKind::D => "D",
        }
    }
}

/// The series `A, B, C, D, E` for one orbit index, plus the pieces of the
/// determinant identity.
#[derive(Clone, Debug)]
pub struct FrobeniusEntrySet {
    pub a: SeriesTrunc,
    pub b: SeriesTrunc,
    pub c: SeriesTrunc,
    pub d: SeriesTrunc,
    pub e: SeriesTrunc,
    /// `τ^σ`.
    pub tau_sigma: SeriesTrunc,
    /// `(1-t)^(a+b-1) / (1-t^σ)^(a'+b'-1)`; the determinant is `p` times this.
    pub det_ratio: SeriesTrunc,
    /// `m_k = a + b - p(a' + b')`, an integer `<= 0`.
    pub m: i64,
    pub index: usize,
    pub order: usize,
}

impl FrobeniusEntrySet {
    /// The entry with the `p` of the first column applied.
    pub fn entry(&self, ctx: &PrecisionContext, kind: EntryKind) -> SeriesTrunc {
        match kind {
            EntryKind::PA => shift_series(ctx, &self.a, 1),
            EntryKind::B => self.b.clone(),
            EntryKind::PC => shift_series(ctx, &self.c, 1),
            EntryKind::D => self.d.clone(),
        }
    }

    /// `det [[pA, B], [pC, D]]` as a series.
    pub fn determinant(&self, ctx: &PrecisionContext) -> SeriesTrunc {
        let d = self.order;
        let ad = series::mul(ctx, &self.entry(ctx, EntryKind::PA), &self.d, d);
        let bc = series::mul(ctx, &self.b, &self.entry(ctx, EntryKind::PC), d);
        series::sub(ctx, &ad, &bc)
    }
}

fn shift_series(ctx: &PrecisionContext, s: &SeriesTrunc, e: i64) -> SeriesTrunc {
    SeriesTrunc::from_coeffs(s.coeffs().iter().map(|x| ctx.shift(x, e)).collect())
}

/// Builds `A, B, C, D, E` for `(a, b)` under the twist, to order `d`.
pub fn abcd_series(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    twist: &TwistConfig,
    d: usize,
) -> Result<FrobeniusEntrySet> {
    let p = ctx.p();
    let c = twist.c();
    let (a1, b1) = (dwork_prime(a, p)?, dwork_prime(b, p)?);
    let d1 = d / p as usize;
    let r = a.as_ratio() + b.as_ratio();
    let r1 = a1.as_ratio() + b1.as_ratio();
    let m = r - r1 * Rational64::from(p as i64);
    if !m.is_integer() || m.to_integer() > 0 {
        return Err(Error::InternalConsistency(format!("m = {m} is not an integer <= 0")));
    }

    let mul = |f: &SeriesTrunc, g: &SeriesTrunc| series::mul(ctx, f, g, d);
    let (f, df) = hg_series(ctx, a, b, d)?;
    let (f1, df1) = hg_series(ctx, a1, b1, d1)?;
    let fs = series::subst_frob(ctx, &f1, c, d)?;
    let dfs = series::subst_frob(ctx, &df1, c, d)?;
    let tau_sigma = tau_sigma_series(ctx, a, b, twist, d)?;

    let p1 = series::binpow(ctx, r, d)?;
    let p0 = series::binpow(ctx, r - 1, d)?;
    let q = series::subst_frob(ctx, &series::binpow(ctx, Rational64::from(1) - r1, d1)?, c, d)?;
    let inv_f = series::inv(ctx, &f, d)?;
    let inv_fs = series::inv(ctx, &fs, d)?;

    // t^σ (1 - t^σ) = c t^p - c^2 t^2p
    let p_us = p as usize;
    let mut ts = SeriesTrunc::monomial(ctx, c.clone(), p_us, d);
    if 2 * p_us <= d {
        let c2 = ctx.neg(&ctx.mul(c, c));
        ts = series::add(ctx, &ts, &SeriesTrunc::monomial(ctx, c2, 2 * p_us, d));
    }
    let g = shift_series(ctx, &mul(&mul(&ts, &dfs), &inv_fs), 1);

    let fs_tau = mul(&fs, &tau_sigma);
    let t_p1_df = series::shift_up(ctx, &mul(&p1, &df), 1);
    let ent_a = series::sub(ctx, &mul(&fs, &inv_f), &mul(&t_p1_df, &fs_tau));
    let ent_c = mul(&mul(&p0, &f), &fs_tau);
    let ent_b = series::sub(ctx, &mul(&g, &ent_a), &mul(&mul(&t_p1_df, &q), &inv_fs));
    let det_ratio = mul(&p0, &q);
    let ent_d = series::add(ctx, &mul(&g, &ent_c), &mul(&mul(&det_ratio, &f), &inv_fs));
    let q_e = series::subst_frob(ctx, &series::binpow(ctx, -r1, d1)?, c, d)?;
    let ent_e = mul(&p1, &q_e);

    for (s, what) in [(&ent_a, "A"), (&ent_b, "B"), (&ent_c, "C"), (&ent_d, "D")] {
        check_integral(ctx, s, what)?;
    }
    Ok(FrobeniusEntrySet {
        a: ent_a,
        b: ent_b,
        c: ent_c,
        d: ent_d,
        e: ent_e,
        tau_sigma,
        det_ratio,
        m: m.to_integer(),
        index: 0,
        order: d,
    })
}

/// Entry set for orbit index `k`.
pub fn orbit_entries(
    ctx: &PrecisionContext,
    orbit: &Orbit,
    k: usize,
    twist: &TwistConfig,
    d: usize,
) -> Result<FrobeniusEntrySet> {
    let (a, b) = orbit.pair(k);
    let mut set = abcd_series(ctx, a, b, twist, d)?;
    set.index = k % orbit.len();
    Ok(set)
}

/// `(1-t^σ)(1-t)^(p e_n) X(t)` for the entry `X` of the given kind, to the
/// order of the entry set.
pub fn rationalized_numerator(
    ctx: &PrecisionContext,
    set: &FrobeniusEntrySet,
    kind: EntryKind,
    twist: &TwistConfig,
    e_n: u64,
) -> Result<SeriesTrunc> {
    let d = set.order;
    let pole = pole_factor(ctx, twist, e_n, d)?;
    Ok(series::mul(ctx, &pole, &set.entry(ctx, kind), d))
}

/// The polynomial `(1 - c t^p)(1 - t)^(p e_n)` truncated at `d`.
pub(crate) fn pole_factor(
    ctx: &PrecisionContext,
    twist: &TwistConfig,
    e_n: u64,
    d: usize,
) -> Result<SeriesTrunc> {
    let p = ctx.p() as usize;
    let mut frob = SeriesTrunc::one(ctx, d);
    if p <= d {
        frob = series::sub(ctx, &frob, &SeriesTrunc::monomial(ctx, twist.c().clone(), p, d));
    }
    let power = series::binpow(ctx, Rational64::from((ctx.p() * e_n) as i64), d)?;
    Ok(series::mul(ctx, &frob, &power, d))
}
