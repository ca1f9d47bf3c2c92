use std::time::Instant;

use dwork_hg::{dwork_value, PrecisionContext, RationalParam};
use num_traits::ToPrimitive;

#[test]
fn published_values_mod_5_20() {
    let ctx = PrecisionContext::new(5, 20, 0).unwrap();
    let half = RationalParam::new(1, 2).unwrap();
    for (alpha, want) in [(2, 7213582472073u64), (3, 22359491081212), (4, 65856465245823)] {
        let t = Instant::now();
        let v = dwork_value(&ctx, half, half, &ctx.from_int(alpha), &ctx.one()).unwrap();
        eprintln!("alpha={alpha} {:?}", t.elapsed());
        assert_eq!(ctx.residue(&v, 20).unwrap().to_u64(), Some(want));
    }
}
