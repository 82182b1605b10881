#![allow(dead_code)]

pub mod fock;

#[allow(unused_imports)]
pub use scdr_core::sampling::{random_expr, random_parity, random_poly, rng};
