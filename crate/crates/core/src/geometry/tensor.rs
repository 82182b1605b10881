use serde_json::Value;

use super::matrix::{self, SeriesMatrix};
use super::metric::{matrix_from_json, matrix_to_json, MetricData};
use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, Scalar};

/// A type (1,1) tensor with components `ω_i^j`, stored as `omega[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoTensor {
    omega: SeriesMatrix,
}

impl EndoTensor {
    pub fn new(omega: SeriesMatrix) -> Result<Self> {
        let n = omega.len();
        if n == 0 || omega.iter().any(|r| r.len() != n) {
            return Err(ScdrError::Structural("tensor must be a non-empty square matrix".into()));
        }
        let cutoff = omega[0][0].cutoff();
        if omega.iter().flatten().any(|x| x.dim() != n || x.cutoff() != cutoff) {
            return Err(ScdrError::Structural("tensor entries must share dimension and cutoff".into()));
        }
        Ok(EndoTensor { omega })
    }

    pub fn constant(m: &[Vec<Scalar>], cutoff: u32) -> Self {
        EndoTensor { omega: matrix::constant(m, cutoff) }
    }

    pub fn zero(dim: usize, cutoff: u32) -> Self {
        EndoTensor { omega: matrix::zeros(dim, cutoff) }
    }

    pub fn identity(dim: usize, cutoff: u32) -> Self {
        EndoTensor { omega: matrix::identity(dim, cutoff) }
    }

    /// `diag(i, .., i, −i, .., −i)` on `(z_1..z_m, z̄_1..z̄_m)`.
    pub fn standard_complex(m: usize, cutoff: u32) -> Self {
        let n = 2 * m;
        let mut c = vec![vec![Scalar::zero(); n]; n];
        for a in 0..m {
            c[a][a] = Scalar::i();
            c[m + a][m + a] = -Scalar::i();
        }
        Self::constant(&c, cutoff)
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn cutoff(&self) -> u32 {
        self.omega[0][0].cutoff()
    }

    /// `ω_i^j` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> &CoeffFunction {
        &self.omega[i - 1][j - 1]
    }

    pub fn matrix(&self) -> &SeriesMatrix {
        &self.omega
    }

    /// The composite acting as `self` first, then `other`; in components
    /// this is the matrix product `self · other`.
    pub fn then(&self, other: &EndoTensor) -> EndoTensor {
        EndoTensor { omega: matrix::mul(&self.omega, &other.omega) }
    }

    pub fn scale(&self, s: &Scalar) -> EndoTensor {
        EndoTensor { omega: matrix::scale(&self.omega, s) }
    }

    pub fn add(&self, other: &EndoTensor) -> EndoTensor {
        EndoTensor { omega: matrix::add(&self.omega, &other.omega) }
    }

    pub fn is_zero_mod_precision(&self) -> bool {
        self.omega.iter().flatten().all(|x| x.is_zero_mod_precision())
    }

    fn equals(&self, other: &EndoTensor) -> bool {
        self.omega.iter().flatten().zip(other.omega.iter().flatten()).all(|(a, b)| a.sub(b).is_zero_mod_precision())
    }

    /// `ω² = −Id`.
    pub fn is_complex_structure(&self) -> bool {
        self.then(self).equals(&EndoTensor::identity(self.dim(), self.cutoff()).scale(&-Scalar::one()))
    }

    /// `g(ωu, ωv) = g(u, v)`, i.e. `ω g ωᵀ = g` in components.
    pub fn preserves(&self, metric: &MetricData) -> bool {
        let lhs = matrix::mul(&matrix::mul(&self.omega, metric.g()), &matrix::transpose(&self.omega));
        lhs.iter().flatten().zip(metric.g().iter().flatten()).all(|(a, b)| a.sub(b).is_zero_mod_precision())
    }

    pub fn from_json(dim: usize, cutoff: u32, v: &Value) -> Result<Self> {
        Self::new(matrix_from_json(dim, cutoff, v)?)
    }

    pub fn to_json(&self) -> Value {
        matrix_to_json(&self.omega)
    }
}

/// Constant quaternionic triple `(I, J, K)` on flat `R^{4n}` in complex
/// coordinates `(z_1..z_{2n}, z̄_1..z̄_{2n})`.
///
/// `I` is the standard complex structure; `J` has the off-diagonal blocks
/// `J_{z_{2k-1}}^{z̄_{2k}} = 1`, `J_{z_{2k}}^{z̄_{2k-1}} = −1` and their
/// conjugates, and `K = I J`.
pub fn quaternionic_triple_flat(n: usize, cutoff: u32) -> (EndoTensor, EndoTensor, EndoTensor) {
    let m = 2 * n;
    let dim = 2 * m;
    let i_t = EndoTensor::standard_complex(m, cutoff);
    let mut j = vec![vec![Scalar::zero(); dim]; dim];
    for k in 0..n {
        let (a, b) = (2 * k, 2 * k + 1);
        j[a][m + b] = Scalar::one();
        j[b][m + a] = -Scalar::one();
        j[m + a][b] = Scalar::one();
        j[m + b][a] = -Scalar::one();
    }
    let j_t = EndoTensor::constant(&j, cutoff);
    let k_t = i_t.then(&j_t);
    (i_t, j_t, k_t)
}
