//! The free superfield algebra: generators, expressions, and the canonical
//! PBW normal form with its normally ordered product.

pub(crate) mod algebra;
mod expr;
mod generator;
mod normal;

pub use algebra::Algebra;
pub use expr::{apply_s, apply_t, FieldExpr};
pub use generator::{parity_of, sort_with_sign, GenKind, Generator, Parity};
pub use normal::{render_function, NormalForm, Term};
