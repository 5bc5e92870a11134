//! Local solvability of plane curves `f(U, V) = 0` modulo primes, and the
//! search for x-pseudopoints: integers `n` such that `f(n, m) = 0 mod p` is
//! solvable for every prime `p <= x` where the curve has points, while
//! `f(n, V)` has no integer root.
//!
//! - [`poly`]: sparse integer polynomials, parsing and specialisation.
//! - [`local`]: point counts and admissible residues modulo primes, `P_f(x)`,
//!   `M_f(x)`, Weil and product-formula checks.
//! - [`expsum`]: exponential sums along the curve, the CRT factorisation,
//!   Parseval and congruence counts.
//! - [`sieve`]: the segmented residue sieve, integer-root exclusion,
//!   certificates, Lehmer pseudosquares and pseudopowers.

pub mod arith;
pub mod decimal;
pub mod error;
pub mod expsum;
pub mod local;
pub mod poly;
pub mod sieve;

pub use error::{Error, Result};
pub use poly::{parse_poly, BivariatePoly, UnivariatePoly};
