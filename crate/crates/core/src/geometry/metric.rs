use serde_json::Value;

use super::matrix::{self, SeriesMatrix};
use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, Scalar};

/// A metric jet `g_ij` around the origin of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricData {
    dim: usize,
    cutoff: u32,
    g: SeriesMatrix,
    g_inverse: SeriesMatrix,
    logdet_half: CoeffFunction,
}

impl MetricData {
    pub fn new(g: SeriesMatrix) -> Result<Self> {
        let dim = g.len();
        if dim == 0 || g.iter().any(|r| r.len() != dim) {
            return Err(ScdrError::Structural("metric must be a non-empty square matrix".into()));
        }
        let cutoff = g[0][0].cutoff();
        if g.iter().flatten().any(|x| x.dim() != dim || x.cutoff() != cutoff) {
            return Err(ScdrError::Structural("metric entries must share dimension and cutoff".into()));
        }
        for i in 0..dim {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(ScdrError::Structural(format!("metric is not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let g_inverse = matrix::inverse(&g)?;
        let logdet_half = half_log_det(&g)?;
        Ok(MetricData { dim, cutoff, g, g_inverse, logdet_half })
    }

    /// The Euclidean metric `δ_ij`.
    pub fn flat(dim: usize, cutoff: u32) -> Self {
        Self::new(matrix::identity(dim, cutoff)).expect("identity is a metric")
    }

    /// Flat Hermitian metric in coordinates `(z_1..z_m, z̄_1..z̄_m)`:
    /// `g_{α ᾱ} = 1/2`.
    pub fn flat_complex(m: usize, cutoff: u32) -> Self {
        let n = 2 * m;
        let mut g = vec![vec![Scalar::zero(); n]; n];
        for a in 0..m {
            g[a][m + a] = Scalar::frac(1, 2);
            g[m + a][a] = Scalar::frac(1, 2);
        }
        Self::new(matrix::constant(&g, cutoff)).expect("flat hermitian metric")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn g(&self) -> &SeriesMatrix {
        &self.g
    }

    pub fn g_inverse(&self) -> &SeriesMatrix {
        &self.g_inverse
    }

    /// `log √det g`, normalised to vanish at the origin.
    pub fn logdet_half(&self) -> &CoeffFunction {
        &self.logdet_half
    }

    /// Parses `[[{"e1,..": "p/q"}, ..], ..]`.
    pub fn from_json(dim: usize, cutoff: u32, v: &Value) -> Result<Self> {
        Self::new(matrix_from_json(dim, cutoff, v)?)
    }

    pub fn to_json(&self) -> Value {
        matrix_to_json(&self.g)
    }
}

/// `½ tr log(g(0)⁻¹ g)`, the normalised `log √det g`.
fn half_log_det(g: &SeriesMatrix) -> Result<CoeffFunction> {
    let n = g.len();
    let cutoff = g[0][0].cutoff();
    let g0_inv = crate::scalars::invert_scalar_matrix(&matrix::constant_part(g))
        .ok_or_else(|| ScdrError::Singular("metric is degenerate at the origin".into()))?;
    let m = matrix::sub(&matrix::mul(&matrix::constant(&g0_inv, cutoff), g), &matrix::identity(n, cutoff));
    let mut acc = CoeffFunction::zero(n, cutoff);
    let mut power = matrix::identity(n, cutoff);
    let mut nonzero = false;
    for k in 1..=cutoff {
        power = matrix::mul(&power, &m);
        let tr = matrix::trace(&power);
        if power.iter().flatten().all(|x| x.is_zero()) {
            break;
        }
        nonzero = true;
        let coef = Scalar::frac(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        acc = acc.add(&tr.scale(&coef));
    }
    let mut out = acc.scale(&Scalar::frac(1, 2));
    if nonzero {
        out.mark_series_tail();
    }
    let p = g.iter().flatten().fold(out.precision(), |acc, x| acc.min(x.precision()));
    Ok(out.with_precision(p))
}

pub(crate) fn matrix_from_json(dim: usize, cutoff: u32, v: &Value) -> Result<SeriesMatrix> {
    let rows = v.as_array().ok_or_else(|| ScdrError::Input("matrix must be a JSON array of rows".into()))?;
    if rows.len() != dim {
        return Err(ScdrError::Input(format!("matrix has {} rows, expected {dim}", rows.len())));
    }
    rows.iter()
        .map(|r| {
            let cols = r.as_array().ok_or_else(|| ScdrError::Input("matrix row must be an array".into()))?;
            if cols.len() != dim {
                return Err(ScdrError::Input(format!("matrix row has {} entries, expected {dim}", cols.len())));
            }
            cols.iter().map(|x| CoeffFunction::from_json(dim, cutoff, x)).collect()
        })
        .collect()
}

pub(crate) fn matrix_to_json(m: &SeriesMatrix) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| x.to_json()).collect())).collect())
}
