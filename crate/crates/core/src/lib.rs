//! Exact Λ-bracket calculus for the N=1 SUSY chiral de Rham complex.
//!
//! The crate computes Λ-brackets and normally ordered products in the free
//! superfield algebra generated by `B^i` and `Ψ_i`, builds superconformal
//! currents from metric and tensor data, and checks the N=1, N=2 and N=4
//! superconformal relations with exact central charges.

#![allow(clippy::needless_range_loop)]

pub mod bracket;
pub mod cli;
pub mod components;
pub mod error;
pub mod geometry;
pub mod sampling;
pub mod scalars;
pub mod superconf;
pub mod terms;

pub use error::{Result, ScdrError};
