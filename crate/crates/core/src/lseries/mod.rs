//! L-function descriptors and the quantities built from them: the theta
//! series, its functional-equation residual, `L*(s)`, `L(s)` and derivatives.
//!
//! Sums over `n` are truncated where `C n^α |f(n x_1)|` falls below the
//! target, with `f` bounded by the leading asymptotic term. Values of `L`
//! come from the Laurent window of `L*(s+ε)` divided by that of
//! `A^{s+ε} γ(s+ε)`, so trivial zeros and poles fall out of the valuations.

mod coeffs;
mod descriptor;
mod eval;

pub use coeffs::{
    factorize, kronecker, CoefficientProvider, DedekindQuadratic, Dirichlet, EulerProduct, One, Table, Tau,
};
pub use descriptor::{
    class_number, dedekind_quadratic, dirichlet, ramanujan_delta, riemann_zeta, ExpFactor, LFunctionDescriptor,
    PoleSpec,
};
pub use eval::{
    feq_residual, l_value, lstar_deriv, plan_truncation, theta, EvaluationReport, LFunction, LValue, PoleReport,
};
