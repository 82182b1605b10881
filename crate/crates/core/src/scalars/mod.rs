//! Exact arithmetic: Gaussian rationals, truncated power series and
//! polynomials in the super-variable `Λ = (λ, χ)`.

mod lambda;
mod scalar;
mod series;

pub use lambda::{Coefficient, LambdaMonomial, LambdaPoly};
pub use scalar::{binomial, factorial, rat, Rational, Scalar};
pub use series::{invert_scalar_matrix, inverse_map, CoeffFunction, Exponent, Precision};
