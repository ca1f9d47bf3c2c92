//! Dwork's p-adic hypergeometric functions through the Frobenius matrix on
//! the hypergeometric family, with a slow congruence-based oracle.

pub mod error;
pub mod frobenius;
pub mod oracle;
pub mod padic;
pub mod series;
pub mod solver;
pub mod special;

pub use error::{Error, Result};
pub use frobenius::{e_bound, EntryKind, FrobeniusEntrySet, TwistConfig, TwistSource};
pub use padic::{PadicNum, PrecisionContext};
pub use series::SeriesTrunc;
pub use special::{Orbit, RationalParam};
pub use oracle::{Condition, OracleBudget};
pub use solver::{df_value, dwork_value, EvalPoint, FrobMatrix};
