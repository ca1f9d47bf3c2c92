//! Evaluation at a point: rationalized entry sums, the Frobenius matrix
//! chain over a Dwork orbit, its unit eigenvector, and the final values of
//! `F'/F` and of Dwork's function.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::frobenius::{orbit_entries, pole_factor, EntryKind, FrobeniusEntrySet, TwistConfig};
use crate::oracle::{check_condition, Condition};
use crate::padic::{PadicNum, PrecisionContext};
use crate::series::{self, SeriesTrunc};
use crate::special::{dwork_prime, Orbit, RationalParam};

/// `α` together with `β = c α^p` under the twist in force.
#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub alpha: PadicNum,
    pub beta: PadicNum,
    pub twist: TwistConfig,
}

impl EvalPoint {
    pub fn new(ctx: &PrecisionContext, alpha: PadicNum, twist: TwistConfig) -> Result<Self> {
        check_point(ctx, &alpha)?;
        let beta = twist.apply(ctx, &alpha);
        Ok(EvalPoint { alpha, beta, twist })
    }

    pub fn residue(&self, ctx: &PrecisionContext) -> u64 {
        ctx.residue_mod_p(&self.alpha).expect("checked unit")
    }
}

/// `x ∈ Z_p^×` with residue other than 1.
fn check_point(ctx: &PrecisionContext, x: &PadicNum) -> Result<()> {
    if !x.is_integral() || !x.is_unit() {
        return Err(Error::InvalidPoint(format!("{x} is not a p-adic unit")));
    }
    if ctx.residue_mod_p(x)? == 1 {
        return Err(Error::InvalidPoint("residue 1 mod p".into()));
    }
    Ok(())
}

/// `[[pA, B], [pC, D]]` evaluated at a point, for orbit index `index`.
#[derive(Clone, Debug)]
pub struct FrobMatrix {
    pub entries: [[PadicNum; 2]; 2],
    pub index: usize,
}

impl FrobMatrix {
    pub fn det(&self, ctx: &PrecisionContext) -> PadicNum {
        let [[a, b], [c, d]] = &self.entries;
        ctx.sub(&ctx.mul(a, d), &ctx.mul(b, c))
    }

    pub fn trace(&self, ctx: &PrecisionContext) -> PadicNum {
        ctx.add(&self.entries[0][0], &self.entries[1][1])
    }

    pub fn mul(&self, ctx: &PrecisionContext, other: &FrobMatrix) -> FrobMatrix {
        let (x, y) = (&self.entries, &other.entries);
        let e = |i: usize, j: usize| ctx.add(&ctx.mul(&x[i][0], &y[0][j]), &ctx.mul(&x[i][1], &y[1][j]));
        FrobMatrix { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], index: self.index }
    }

    pub fn apply(&self, ctx: &PrecisionContext, v: &[PadicNum; 2]) -> [PadicNum; 2] {
        let row = |i: usize| {
            ctx.add(&ctx.mul(&self.entries[i][0], &v[0]), &ctx.mul(&self.entries[i][1], &v[1]))
        };
        [row(0), row(1)]
    }
}

/// `X(β)` from the numerator `(1-t^σ)(1-t)^(p e_n) X(t)` truncated
/// at the degree bound of its kind, divided by `(1-β^σ)(1-β)^(p e_n)`.
pub fn step1_eval(
    ctx: &PrecisionContext,
    entry: &SeriesTrunc,
    kind: EntryKind,
    twist: &TwistConfig,
    beta: &PadicNum,
    e_n: u64,
) -> Result<PadicNum> {
    let bound = kind.degree_bound(ctx.p(), e_n);
    if entry.order() < bound {
        return Err(Error::InvalidPrecision(format!(
            "{} known to degree {}, needs {bound}",
            kind.name(),
            entry.order()
        )));
    }
    let pole = pole_factor(ctx, twist, e_n, bound)?;
    let numer = series::mul(ctx, &pole, entry, bound);
    let top = series::eval(ctx, &numer, beta)?;
    let one_minus = ctx.sub(&ctx.one(), beta);
    let bottom = ctx.mul(
        &ctx.sub(&ctx.one(), &twist.apply(ctx, beta)),
        &ctx.pow(&one_minus, ctx.p() * e_n),
    );
    if !bottom.is_unit() {
        return Err(Error::InvalidPoint("1 - β^σ or 1 - β is not a unit".into()));
    }
    ctx.div(&top, &bottom)
}

/// The four rationalized values at `β` assembled into `H^(k)(β)`; the
/// determinant must be `p` times a unit.
pub fn h_matrix(
    ctx: &PrecisionContext,
    set: &FrobeniusEntrySet,
    twist: &TwistConfig,
    beta: &PadicNum,
) -> Result<FrobMatrix> {
    let e_n = ctx.e_n();
    let ev = |k: EntryKind| step1_eval(ctx, &set.entry(ctx, k), k, twist, beta, e_n);
    let h = FrobMatrix {
        entries: [[ev(EntryKind::PA)?, ev(EntryKind::B)?], [ev(EntryKind::PC)?, ev(EntryKind::D)?]],
        index: set.index,
    };
    let v = h.det(ctx).valuation_or_abs();
    if v != 1 {
        return Err(Error::InternalConsistency(format!(
            "det H^({}) has valuation {v}, expected 1",
            set.index
        )));
    }
    Ok(h)
}

/// Unit root `λ` of `x^2 - tr x + det` and the eigenvector for it with
/// second coordinate `-1`.
pub fn unit_eigen(ctx: &PrecisionContext, m: &FrobMatrix) -> Result<(PadicNum, [PadicNum; 2])> {
    let tr = m.trace(ctx);
    let det = m.det(ctx);
    if !tr.is_unit() {
        return Err(Error::DegenerateMatrix("trace is not a unit".into()));
    }
    if det.valuation_or_abs() < 1 {
        return Err(Error::DegenerateMatrix("determinant is a unit".into()));
    }
    let two = BigInt::from(2);
    let mut x = tr.clone();
    for _ in 0..128 {
        let f = ctx.add(&ctx.sub(&ctx.mul(&x, &x), &ctx.mul(&tr, &x)), &det);
        if f.is_zero() {
            break;
        }
        let df = ctx.sub(&ctx.mul_int(&x, &two), &tr);
        x = ctx.sub(&x, &ctx.div(&f, &df)?);
    }
    let lambda = x;
    let other = ctx.div(&det, &lambda)?;
    let [[a, b], [c, d]] = &m.entries;
    let cols = [[ctx.sub(a, &other), c.clone()], [b.clone(), ctx.sub(d, &other)]];
    let col = cols
        .iter()
        .find(|col| col[1].is_unit())
        .ok_or(Error::DegenerateEigenvector)?;
    let scale = ctx.neg(&ctx.unit_inverse(&col[1])?);
    let v = [ctx.mul(&col[0], &scale), ctx.neg(&ctx.one())];
    Ok((lambda, v))
}

/// `H^(k) H^(k+1) ⋯ H^(k+m-1)`.
pub fn chain(ctx: &PrecisionContext, hs: &[FrobMatrix], k: usize) -> FrobMatrix {
    let m = hs.len();
    let mut acc = hs[k % m].clone();
    for j in 1..m {
        acc = acc.mul(ctx, &hs[(k + j) % m]);
    }
    acc
}

/// Everything computed along the way to `DF^(k)(β)`.
#[derive(Clone, Debug)]
pub struct DfReport {
    /// `DF^(k)(β) = F'/F` of the `k`-th orbit pair at `β`.
    pub value: PadicNum,
    /// `β(1-β) DF^(k)(β)`, the first eigenvector coordinate.
    pub v1: PadicNum,
    pub eigenvalue: PadicNum,
    pub chain: FrobMatrix,
    pub orbit_length: usize,
    /// Whether `det` of the chain is `p^m` times a unit `≡ 1 mod p^n`,
    /// not just of valuation `m`.
    pub det_is_p_power: bool,
}

fn check_params(p: u64, a: RationalParam, b: RationalParam) -> Result<Orbit> {
    for x in [a, b] {
        if x.den() as u64 >= p {
            return Err(Error::InvalidParameter(format!("denominator of {x} must be below p = {p}")));
        }
    }
    Orbit::new(a, b, p)
}

fn require_condition(p: u64, a: RationalParam, b: RationalParam, residue: u64) -> Result<()> {
    match check_condition(p, a, b, residue)? {
        Condition::Holds => Ok(()),
        Condition::FailsAt(index) => Err(Error::ConditionViolated { index }),
    }
}

/// The `H^(k)(β)` for the whole orbit under `σ_β`.
pub fn frobenius_matrices(
    ctx: &PrecisionContext,
    orbit: &Orbit,
    beta: &PadicNum,
) -> Result<Vec<FrobMatrix>> {
    let twist = TwistConfig::from_point(ctx, beta)?;
    let d = ctx.degree_bound();
    (0..orbit.len())
        .map(|k| {
            let set = orbit_entries(ctx, orbit, k, &twist, d)?;
            h_matrix(ctx, &set, &twist, beta)
        })
        .collect()
}

/// `DF^(k)(β)` from the eigenvector of the chain starting at `k`.
pub fn df_from_matrices(
    ctx: &PrecisionContext,
    hs: &[FrobMatrix],
    beta: &PadicNum,
    k: usize,
) -> Result<DfReport> {
    let m = hs.len();
    let p_chain = chain(ctx, hs, k);
    let det = p_chain.det(ctx);
    if det.valuation_or_abs() != m as i64 {
        return Err(Error::InternalConsistency(format!(
            "chain determinant has valuation {}, expected {m}",
            det.valuation_or_abs()
        )));
    }
    // unit part compared to the target precision only; guard digits are noise
    let exact = ctx.shift(&ctx.one(), m as i64);
    let det_is_p_power = ctx.congruent(&det, &exact, (m as u32 + ctx.n()) as i64);
    let (lambda, v) = unit_eigen(ctx, &p_chain)?;
    let pv = p_chain.apply(ctx, &v);
    let n = ctx.n() as i64;
    for i in 0..2 {
        let r = ctx.sub(&pv[i], &ctx.mul(&lambda, &v[i]));
        if r.valuation_or_abs() < n {
            return Err(Error::InternalConsistency(format!("eigen-residual {r} in coordinate {i}")));
        }
    }
    let w = ctx.mul(beta, &ctx.sub(&ctx.one(), beta));
    let value = ctx.div(&v[0], &w)?;
    Ok(DfReport {
        value,
        v1: v[0].clone(),
        eigenvalue: lambda,
        chain: p_chain,
        orbit_length: m,
        det_is_p_power,
    })
}

/// `F'_{ab}/F_{ab}` at `β`, mod `p^n`, with a full report.
pub fn df_report(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    beta: &PadicNum,
    k: usize,
) -> Result<DfReport> {
    let orbit = check_params(ctx.p(), a, b)?;
    check_point(ctx, beta)?;
    require_condition(ctx.p(), a, b, ctx.residue_mod_p(beta)?)?;
    let hs = frobenius_matrices(ctx, &orbit, beta)?;
    df_from_matrices(ctx, &hs, beta, k)
}

/// `F'_{ab}(β)/F_{ab}(β)` mod `p^n`.
pub fn df_value(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    beta: &PadicNum,
) -> Result<PadicNum> {
    let r = df_report(ctx, a, b, beta, 0)?;
    finish(ctx, &r.value)
}

fn finish(ctx: &PrecisionContext, x: &PadicNum) -> Result<PadicNum> {
    let n = ctx.n() as i64;
    if x.abs_prec() < n || !x.is_integral() {
        return Err(Error::InternalConsistency(format!("result {x} not determined mod p^{n}")));
    }
    Ok(ctx.truncate_abs(x, n))
}

/// `E(α) = (1-α)^(a+b) (1-β)^(-(a'+b'))`, split as
/// `(1-α)^m ((1-α)^p/(1-β))^(a'+b')` with the second factor `≡ 1 mod p`.
fn e_value(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    point: &EvalPoint,
) -> Result<PadicNum> {
    let p = ctx.p();
    let r1 = dwork_prime(a, p)?.as_ratio() + dwork_prime(b, p)?.as_ratio();
    let m = a.as_ratio() + b.as_ratio() - r1 * (p as i64);
    let m = m.to_integer();
    let one_a = ctx.sub(&ctx.one(), &point.alpha);
    let one_b = ctx.sub(&ctx.one(), &point.beta);
    let ratio = ctx.div(&ctx.pow(&one_a, p), &one_b)?;
    let pu = ctx.sub(&ratio, &ctx.one());
    if pu.valuation_or_abs() < 1 {
        return Err(Error::InternalConsistency("(1-α)^p/(1-β) is not 1 mod p".into()));
    }
    // Σ binom(r1, k) (p u)^k; the k-th term has valuation >= k
    let (num, den) = (BigInt::from(*r1.numer()), BigInt::from(*r1.denom()));
    let mut term = ctx.one();
    let mut sum = ctx.one();
    for k in 1..=ctx.nu() as i64 + 1 {
        let top = &num - &den * (k - 1);
        term = ctx.divide_exact(&ctx.mul_int(&ctx.mul(&term, &pu), &top), &(&den * k))?;
        sum = ctx.add(&sum, &term);
    }
    let mut base = ctx.pow(&one_a, m.unsigned_abs().to_u64().expect("small"));
    if m < 0 {
        base = ctx.unit_inverse(&base)?;
    }
    Ok(ctx.mul(&base, &sum))
}

/// Everything computed along the way to Dwork's function at `α`.
#[derive(Clone, Debug)]
pub struct DworkReport {
    pub value: PadicNum,
    pub beta: PadicNum,
    pub df: DfReport,
    pub pc: PadicNum,
    pub d: PadicNum,
    pub e: PadicNum,
}

/// `𝓕^{Dw,σ}_{ab}(α)` for `σ(t) = c t^p`, mod `p^n`, with a full report.
pub fn dwork_report(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    alpha: &PadicNum,
    c: &PadicNum,
) -> Result<DworkReport> {
    let orbit = check_params(ctx.p(), a, b)?;
    let twist = TwistConfig::user(ctx, c.clone())?;
    let point = EvalPoint::new(ctx, alpha.clone(), twist)?;
    // β ≡ α^p ≡ α mod p, so one check covers both points
    require_condition(ctx.p(), a, b, point.residue(ctx))?;

    let hs = frobenius_matrices(ctx, &orbit, &point.beta)?;
    let df = df_from_matrices(ctx, &hs, &point.beta, 1 % orbit.len())?;

    let set = orbit_entries(ctx, &orbit, 0, &point.twist, ctx.degree_bound())?;
    let e_n = ctx.e_n();
    let pc = step1_eval(ctx, &set.entry(ctx, EntryKind::PC), EntryKind::PC, &point.twist, alpha, e_n)?;
    let d = step1_eval(ctx, &set.entry(ctx, EntryKind::D), EntryKind::D, &point.twist, alpha, e_n)?;
    let e = e_value(ctx, a, b, &point)?;

    let top = ctx.mul(&ctx.sub(&d, &ctx.mul(&pc, &df.v1)), &ctx.sub(&ctx.one(), alpha));
    let bottom = ctx.mul(&ctx.sub(&ctx.one(), &point.beta), &e);
    let value = finish(ctx, &ctx.div(&top, &bottom)?)?;
    Ok(DworkReport { value, beta: point.beta, df, pc, d, e })
}

/// `𝓕^{Dw,σ}_{ab}(α)` mod `p^n`.
pub fn dwork_value(
    ctx: &PrecisionContext,
    a: RationalParam,
    b: RationalParam,
    alpha: &PadicNum,
    c: &PadicNum,
) -> Result<PadicNum> {
    Ok(dwork_report(ctx, a, b, alpha, c)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> RationalParam {
        RationalParam::new(n, d).unwrap()
    }

    fn res(c: &PrecisionContext, x: &PadicNum) -> u64 {
        c.residue(x, c.n()).unwrap().to_u64().unwrap()
    }

    fn diag(c: &PrecisionContext, x: i64, y: i64) -> FrobMatrix {
        FrobMatrix {
            entries: [[c.from_int(x), c.zero()], [c.zero(), c.from_int(y)]],
            index: 0,
        }
    }

    #[test]
    fn unit_eigen_diagonal() {
        let c = PrecisionContext::fixed(5, 6).unwrap();
        let (l, v) = unit_eigen(&c, &diag(&c, 5, 3)).unwrap();
        assert!(c.equals(&l, &c.from_int(3)));
        assert!(v[0].is_zero());
        assert!(c.equals(&v[1], &c.from_int(-1)));
        assert_eq!(unit_eigen(&c, &diag(&c, 3, 5)).unwrap_err(), Error::DegenerateEigenvector);
        assert!(matches!(unit_eigen(&c, &diag(&c, 5, 10)), Err(Error::DegenerateMatrix(_))));
    }

    #[test]
    fn rejects_residue_one() {
        let c = PrecisionContext::new(5, 2, 0).unwrap();
        let half = q(1, 2);
        assert!(matches!(
            dwork_value(&c, half, half, &c.from_int(6), &c.one()),
            Err(Error::InvalidPoint(_))
        ));
        assert!(matches!(
            dwork_value(&c, half, half, &c.from_int(10), &c.one()),
            Err(Error::InvalidPoint(_))
        ));
    }

    #[test]
    fn small_values_mod_p() {
        let c = PrecisionContext::new(5, 1, 0).unwrap();
        let half = q(1, 2);
        for (alpha, want) in [(2, 3), (3, 2), (4, 3)] {
            let v = dwork_value(&c, half, half, &c.from_int(alpha), &c.one()).unwrap();
            assert_eq!(res(&c, &v), want);
        }
    }

    #[test]
    fn golden_mod_p4() {
        let c = PrecisionContext::new(5, 4, 0).unwrap();
        let half = q(1, 2);
        let v = dwork_value(&c, half, half, &c.from_int(2), &c.one()).unwrap();
        assert_eq!(res(&c, &v), 7213582472073 % 625);
    }

    #[test]
    fn step1_inverts_the_pole_factor() {
        let c = PrecisionContext::new(5, 3, 0).unwrap();
        let e_n = c.e_n();
        let twist = TwistConfig::user(&c, c.from_int(6)).unwrap();
        let bound = EntryKind::PC.degree_bound(5, e_n);
        let poly: Vec<i64> = (0..=bound as i64).map(|k| (k * k + 3) % 17 - 8).collect();
        let numer = SeriesTrunc::from_ints(&c, &poly, c.degree_bound());
        let pole = pole_factor(&c, &twist, e_n, c.degree_bound()).unwrap();
        let entry = series::mul(&c, &numer, &series::inv(&c, &pole, c.degree_bound()).unwrap(), c.degree_bound());
        let beta = c.from_int(3);
        let got = step1_eval(&c, &entry, EntryKind::PC, &twist, &beta, e_n).unwrap();
        let bottom = c.mul(
            &c.sub(&c.one(), &twist.apply(&c, &beta)),
            &c.pow(&c.sub(&c.one(), &beta), 5 * e_n),
        );
        let want = c.div(&series::eval(&c, &numer, &beta).unwrap(), &bottom).unwrap();
        assert!(c.congruent(&got, &want, 3));
        let one = c.from_int(11);
        assert!(matches!(step1_eval(&c, &entry, EntryKind::PC, &twist, &one, e_n), Err(Error::InvalidPoint(_))));
    }
}
