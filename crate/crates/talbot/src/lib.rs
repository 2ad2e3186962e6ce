//! Counterexample machinery for fractal pointwise convergence of dispersive
//! equations `i∂ₜu + P(D)u = 0`.
//!
//! The crate is organised by stage of the construction:
//!
//! * [`fieldsum`]: complete exponential sums over prime fields, the Weil bound,
//!   the large-sum sets `G(q)` and the block-summation lemma.
//! * [`propagator`]: the frequency-comb data `f_R` and the exact factored
//!   evaluation of `T_t f_R` for power and saddle symbols.
//! * [`slabgeo`]: admissible slab families, dilated unit cells, union measures,
//!   overlap counts and covering numbers.
//! * [`mtp`]: Mass Transference Principle dimension bounds.
//! * [`regions`]: the parameter domain, dimension formulas and Sobolev-exponent
//!   curves.
//! * [`cli`]: the `talbot` command line front end.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bspline;
pub mod cli;
pub mod csvout;
pub mod error;
pub mod fieldsum;
pub mod mtp;
pub mod primes;
pub mod propagator;
pub mod quad;
pub mod regions;
pub mod slabgeo;

pub use error::{Error, Result};
