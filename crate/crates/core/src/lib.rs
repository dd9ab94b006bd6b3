//! Effective Hilbert–Schinzel specialization over the integers.
//!
//! The crate is `no_std` (it only needs `alloc`) and is organised bottom-up:
//!
//! - [`polyring`]: sparse multivariate polynomials with bigint coefficients,
//!   the expression parser, residue reductions.
//! - [`factorlab`]: irreducibility certificates (mod-p, evaluation) and the
//!   exhaustive Kronecker factorization oracle; gcd over the rationals.
//! - [`fixdiv`]: fixed prime divisors with respect to a tuple of parameters.
//! - [`schinzelcore`]: Bezout constant, bad primes, CRT nonvanishing points and
//!   arithmetic-progression witnesses for specializing one parameter.
//! - [`hilbert`]: membership, lazy search and exhaustive density counts for
//!   the integrally Hilbertian specialization set.
//! - [`polyschinzel`]: degree conditions, generic substitution, the
//!   specialization solver, the strong pipeline, iterated composition and the
//!   sharpness counterexamples.
//! - [`coprime`]: the local coprimality condition and coprime point search.
#![no_std]

extern crate alloc;

pub mod arith;
pub mod coprime;
pub mod enumerate;
mod error;
pub mod factorlab;
pub mod fixdiv;
pub mod hilbert;
pub mod polyring;
pub mod polyschinzel;
pub mod schinzelcore;

pub use error::{Error, Result};
pub use polyring::{MPoly, Monomial, Registry, ResiduePoly, UPoly, VarSplit};
