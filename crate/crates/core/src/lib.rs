//! Exact arithmetic for curves over Q and finite fields: point counts,
//! L-polynomials and Jacobian orders, explicit group law on hyperelliptic
//! Jacobians, local obstruction sieves, coprime place chains, and Monte
//! Carlo exploration of sieve-emptying heuristics.
//!
//! Everything is computed with exact integer arithmetic; randomness only
//! enters the explicitly seeded sampling modes.

pub mod constant;
pub mod curvefile;
pub mod curves;
pub mod elliptic;
pub mod error;
pub mod factorint;
pub mod ff;
pub mod group;
pub mod heuristic;
pub mod jacobian;
pub mod localsol;
pub mod places;
pub mod poly;
pub mod report;
pub mod sieve;

pub use error::Error;

/// Default ceiling on the field cardinality `q^n` that exhaustive scans
/// (point counting, square tables) will enumerate.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
