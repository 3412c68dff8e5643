//! High-precision evaluation of motivic L-functions.
//!
//! Given an L-series `L(s) = Σ a_n n^-s` whose completed form
//! `L*(s) = A^s γ(s) L(s)`, with `γ(s) = ∏ Γ((s+λ_j)/2)`, satisfies
//! `L*(s) = ϵ L̂*(w-s)`, the crate computes
//!
//! * the inverse Mellin transform `φ(t)` of `γ(s)` and the incomplete
//!   transforms `∂^k G_s(t)`, by power series at the origin and continued
//!   fractions of the asymptotic series at infinity ([`mellin_small`],
//!   [`mellin_large`]);
//! * the theta series `Θ(t) = Σ a_n φ(nt/A)`, the residual of its `t ↦ 1/t`
//!   transformation law, `L*(s)`, `L(s)` and their derivatives ([`lseries`]);
//! * unknown signs, pole residues and bad-prime coefficients ([`solver`]).
//!
//! All arithmetic is carried at a configurable decimal [`Precision`].

pub mod cli;
pub mod error;
pub mod lseries;
pub mod mellin_large;
pub mod mellin_small;
pub mod numerics;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use numerics::{HPComplex, Number, Precision};
