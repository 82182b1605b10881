//! The Λ-bracket engine: base brackets of the free system, sesquilinearity,
//! skew-symmetry, the non-commutative Wick formula and the Jacobi check.

mod engine;
mod gamma;
mod skew;
mod wick;

pub use engine::{apply_t_coeffs, bracket_is_zero, bracket_precision, lambda_plus_t, s_plus_chi, Bracket};
pub use gamma::{GammaMonomial, GammaPoly};
