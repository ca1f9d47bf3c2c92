//! Dwork primes, roots of unity in unramified extensions, and the digamma
//! constants entering `τ^(σ)`.

mod digamma;
mod dwork;
mod fp_poly;
mod zq;

pub use digamma::{ln1p, ln1p_via_log, log_twist_over_p, psi_tilde, tau_constant};
pub use dwork::{dwork_prime, orbit_length, Orbit, RationalParam};
pub use zq::{ZqContext, ZqElem};
