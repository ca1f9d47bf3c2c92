//! Fixtures shared by the criterion benches.

use dwork_hg::{PadicNum, PrecisionContext, RationalParam};

/// The `a = b = 1/2`, `p = 5`, `α = 2`, `c = 1` job at precision `n`.
pub struct Job {
    pub ctx: PrecisionContext,
    pub a: RationalParam,
    pub b: RationalParam,
    pub alpha: PadicNum,
    pub c: PadicNum,
}

impl Job {
    pub fn legendre(n: u32) -> Self {
        let ctx = PrecisionContext::new(5, n, 0).expect("valid precision");
        let half = RationalParam::new(1, 2).expect("reduced");
        let alpha = ctx.from_int(2);
        let c = ctx.one();
        Job { ctx, a: half, b: half, alpha, c }
    }

    pub fn run(&self) -> PadicNum {
        dwork_hg::dwork_value(&self.ctx, self.a, self.b, &self.alpha, &self.c).expect("evaluation succeeds")
    }
}
