use dwork_hg::series::{self, SeriesTrunc};
use dwork_hg::special::ZqContext;
use dwork_hg::{PadicNum, PrecisionContext};
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

const P: u64 = 5;
const NU: u32 = 12;

fn ctx() -> PrecisionContext {
    PrecisionContext::fixed(P, NU).unwrap()
}

fn int(c: &PrecisionContext, x: i64) -> PadicNum {
    c.from_int(x)
}

fn unit() -> impl Strategy<Value = i64> {
    (-10_000i64..10_000).prop_filter("unit", |x| x % P as i64 != 0)
}

fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-500i64..500, len)
}

fn same(c: &PrecisionContext, f: &SeriesTrunc, g: &SeriesTrunc, k: i64) -> bool {
    f.coeffs().iter().zip(g.coeffs()).all(|(x, y)| c.congruent(x, y, k))
}

proptest! {
    #[test]
    fn unit_inverse_is_inverse(x in unit()) {
        let c = ctx();
        let x = int(&c, x);
        let y = c.unit_inverse(&x).unwrap();
        prop_assert!(c.equals(&c.mul(&x, &y), &c.one()));
    }

    #[test]
    fn ring_laws(x in -10_000i64..10_000, y in -10_000i64..10_000, z in -10_000i64..10_000) {
        let c = ctx();
        let (x, y, z) = (int(&c, x), int(&c, y), int(&c, z));
        prop_assert!(c.equals(&c.add(&x, &y), &c.add(&y, &x)));
        prop_assert!(c.equals(&c.add(&c.add(&x, &y), &z), &c.add(&x, &c.add(&y, &z))));
        prop_assert!(c.equals(&c.mul(&x, &y), &c.mul(&y, &x)));
        let lhs = c.mul(&x, &c.add(&y, &z));
        let rhs = c.add(&c.mul(&x, &y), &c.mul(&x, &z));
        prop_assert!(c.congruent(&lhs, &rhs, NU as i64));
    }

    #[test]
    fn divide_exact_round_trip(x in -10_000i64..10_000, w in 1i64..3000) {
        let c = ctx();
        let x = int(&c, x);
        let w = BigInt::from(w);
        let back = c.divide_exact(&c.mul_int(&x, &w), &w).unwrap();
        prop_assert!(c.congruent(&back, &x, NU as i64 - 5));
    }

    #[test]
    fn series_inverse(mut cs in ints(8), u in unit()) {
        let c = ctx();
        cs[0] = u;
        let f = SeriesTrunc::from_ints(&c, &cs, 7);
        let g = series::inv(&c, &f, 7).unwrap();
        prop_assert!(same(&c, &series::mul(&c, &f, &g, 7), &SeriesTrunc::one(&c, 7), NU as i64));
    }

    #[test]
    fn binpow_is_additive(rn in -20i64..20, sn in -20i64..20, den in prop::sample::select(vec![1i64, 2, 3, 4, 6])) {
        let c = ctx();
        let (r, s) = (Rational64::new(rn, den), Rational64::new(sn, den));
        let lhs = series::mul(&c, &series::binpow(&c, r, 10).unwrap(), &series::binpow(&c, s, 10).unwrap(), 10);
        prop_assert!(same(&c, &lhs, &series::binpow(&c, r + s, 10).unwrap(), NU as i64 - 4));
    }

    #[test]
    fn deriv_undoes_integrate(cs in ints(9)) {
        let c = ctx();
        let h = SeriesTrunc::from_ints(&c, &cs, 8);
        let back = series::deriv(&c, &series::integrate(&c, &h));
        prop_assert!(same(&c, &back, &h, NU as i64 - 2));
    }

    #[test]
    fn frobenius_substitution_is_multiplicative(f in ints(4), g in ints(4), k in 0i64..20) {
        let c = ctx();
        let tw = c.from_int(1 + 5 * k);
        let (f, g) = (SeriesTrunc::from_ints(&c, &f, 3), SeriesTrunc::from_ints(&c, &g, 3));
        let d = 19;
        let lhs = series::subst_frob(&c, &series::mul(&c, &f, &g, 3), &tw, d).unwrap();
        let rhs = series::mul(
            &c,
            &series::subst_frob(&c, &f, &tw, d).unwrap(),
            &series::subst_frob(&c, &g, &tw, d).unwrap(),
            d,
        );
        prop_assert!(same(&c, &lhs, &rhs, NU as i64));
    }

    #[test]
    fn log_is_a_homomorphism(x in unit(), y in unit()) {
        let zq = ZqContext::new(1, P, NU).unwrap();
        let (x, y) = (zq.from_int(x), zq.from_int(y));
        let lhs = zq.iwasawa_log(&zq.mul(&x, &y)).unwrap();
        let rhs = zq.add(&zq.iwasawa_log(&x).unwrap(), &zq.iwasawa_log(&y).unwrap());
        prop_assert!(zq.ctx().congruent(lhs.constant(), rhs.constant(), NU as i64 - 2));
    }
}
