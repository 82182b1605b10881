//! Geometric inputs and the currents built from them.

mod christoffel;
mod coords;
mod currents;
pub mod matrix;
mod metric;
mod tensor;
mod vector_field;

pub use christoffel::Christoffel;
pub use coords::CoordinateChange;
pub use currents::{build_h, build_h0, build_j, connection_trace};
pub use matrix::SeriesMatrix;
pub use metric::MetricData;
pub use tensor::{quaternionic_triple_flat, EndoTensor};
pub use vector_field::{vector_field_action, VectorField};
