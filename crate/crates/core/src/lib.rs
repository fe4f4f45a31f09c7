//! Exact arithmetic in the prime cyclotomic rings `Z[ζ_p]` and `Z[ζ_p, ζ_q]`,
//! together with the machinery built on top of it: λ-adic expansions and exact
//! π-adic valuations, Gauss sums and Jacobi resolvents, Stickelberger-type
//! group-ring elements, a regular-prime criterion with an independent Bernoulli
//! oracle, and class-group annihilator checks modulo large primes.
//!
//! Everything is exact: coefficients are arbitrary-precision integers, checks
//! are congruences and valuations, and no floating point appears anywhere.
//! Intended scale is "desk scale": p up to a couple hundred, grids
//! `(p−1)(q−1)` up to ~2·10^5 entries.

pub mod annihilator;
pub mod arith;
pub mod gauss;
pub mod group_ring;
pub mod padic;
pub mod regularity;
pub mod report;
pub mod ring;

pub use report::{CheckReport, Status};
pub use ring::{BiCycInt, CycInt};

/// Largest finite field `F_{q^f}` we are willing to enumerate for a
/// character-sum Gauss sum. Matches the intended desk scale of the crate.
pub const DESK_SCALE_BUDGET: u64 = 200_000;
