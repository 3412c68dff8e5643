//! Arbitrary-precision substrate: precision policy, complex numbers,
//! exact-or-approximate parameters, constants and the Γ-function.

mod complex;
mod gamma;
mod number;
mod precision;

pub use complex::{format_real, HPComplex, HPReal};
pub use gamma::{bernoulli_even, constants, factorial, gamma, Constants};
pub(crate) use gamma::{ln_factorial, near_nonpositive_integer, stirling_plan};
pub use number::{parse_real, Number};
pub use precision::{bits_to_digits, digits_to_bits, Precision};
