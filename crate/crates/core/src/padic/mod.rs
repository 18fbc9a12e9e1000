//! Exact p-adic scalars, polynomials and truncated power series.

pub mod analytic;
pub mod binomial;
pub mod literal;
pub mod poly;
pub mod scalar;

pub use analytic::{binomial_coefficient, monoid_series, padic_exp, padic_log, TruncatedSeries};
pub use binomial::{binomial_poly, gauss_norm, gauss_norm_rat};
pub use literal::{parse_scalar, scalar_to_json};
pub use poly::{PadicPoly, RatPoly};
pub use scalar::{arith, ArithOp, Context, Padic, DEFAULT_PRECISION, INF};
