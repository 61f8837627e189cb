//! Exact computation of the dimension function of survivor sets for the
//! expanding circle maps `x -> d x mod 1` with the hole `(0, t)`.
//!
//! The crate has four layers:
//!
//! * [`words`]: exact base-`d` expansions of rationals, the strong order
//!   and Lyndon words;
//! * [`orbits`]: exact dynamics on rationals, membership in the survivor
//!   set `K(t)` and in the bifurcation set, plateau location and
//!   enumeration;
//! * [`dimension`]: the coefficient series `P_t`, certified root
//!   enclosures for `P_t(lambda) = 1`, the dimension function `eta`, its
//!   blind counterpart `zeta`, and the Hoelder/modulus probes;
//! * [`oracle`]: independent brute-force verification: survivor-cylinder
//!   counting, growth-rate estimates and Markov-decomposition crosschecks
//!   that deliberately avoid the analytic code paths.
//!
//! All parameters are exact rationals; enclosures are certified outward.

pub mod dimension;
pub mod error;
pub mod oracle;
pub mod orbits;
pub mod rat;
pub mod words;

pub use error::{Error, Result};
pub use rat::Rational;
pub use words::{Base, Expansion, Word};
