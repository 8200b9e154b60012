//! Exact arithmetic for Farkas-type divisor convolution identities.
//!
//! The crate is organised bottom-up:
//!
//! - [`foundations`]: rationals, Gaussian rationals and elementary number theory.
//! - [`characters`]: Dirichlet characters modulo an odd prime, stored as an
//!   exponent against a fixed primitive root.
//! - [`qseries`]: truncated q-expansions built from twisted divisor sums and
//!   their Cauchy products.
//! - [`identities`]: verification and falsification of the convolution
//!   identities, the finite obstruction searches and the asymptotic ratio checks.
//! - [`charpoly`]: the integer polynomial route used to decide vanishing of the
//!   obstruction sums for even characters.
//!
//! Everything is exact. No floating point value is used to decide any claim.

pub mod characters;
pub mod charpoly;
pub mod error;
pub mod foundations;
pub mod identities;
pub mod qseries;

pub use error::{Error, Result};
pub use foundations::{GaussianRational, Rational};
