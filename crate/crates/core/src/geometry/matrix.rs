//! Small dense matrices of truncated series.

use crate::error::{Result, ScdrError};
use crate::scalars::{invert_scalar_matrix, CoeffFunction, Scalar};

pub type SeriesMatrix = Vec<Vec<CoeffFunction>>;

pub fn identity(n: usize, cutoff: u32) -> SeriesMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { CoeffFunction::one(n, cutoff) } else { CoeffFunction::zero(n, cutoff) })
                .collect()
        })
        .collect()
}

pub fn zeros(n: usize, cutoff: u32) -> SeriesMatrix {
    vec![vec![CoeffFunction::zero(n, cutoff); n]; n]
}

pub fn constant(m: &[Vec<Scalar>], cutoff: u32) -> SeriesMatrix {
    let n = m.len();
    m.iter().map(|row| row.iter().map(|c| CoeffFunction::constant(n, cutoff, c.clone())).collect()).collect()
}

pub fn mul(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
    let n = a.len();
    let (dim, cutoff) = shape(a);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = CoeffFunction::zero(dim, cutoff);
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&a[i][k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn add(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.add(y)).collect()).collect()
}

pub fn sub(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.sub(y)).collect()).collect()
}

pub fn scale(a: &SeriesMatrix, s: &Scalar) -> SeriesMatrix {
    a.iter().map(|r| r.iter().map(|x| x.scale(s)).collect()).collect()
}

pub fn transpose(a: &SeriesMatrix) -> SeriesMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

pub fn trace(a: &SeriesMatrix) -> CoeffFunction {
    let (dim, cutoff) = shape(a);
    a.iter().enumerate().fold(CoeffFunction::zero(dim, cutoff), |acc, (i, r)| acc.add(&r[i]))
}

pub fn constant_part(a: &SeriesMatrix) -> Vec<Vec<Scalar>> {
    a.iter().map(|r| r.iter().map(|x| x.constant_term()).collect()).collect()
}

pub fn compose(a: &SeriesMatrix, subs: &[CoeffFunction]) -> Result<SeriesMatrix> {
    a.iter().map(|r| r.iter().map(|x| x.compose(subs)).collect()).collect()
}

/// Inverse as a Neumann series around the constant part.
pub fn inverse(a: &SeriesMatrix) -> Result<SeriesMatrix> {
    let n = a.len();
    let (_, cutoff) = shape(a);
    let a0 = constant_part(a);
    let a0_inv = invert_scalar_matrix(&a0).ok_or_else(|| ScdrError::Singular("matrix is singular at the origin".into()))?;
    let c_inv = constant(&a0_inv, cutoff);
    let nil = sub(&mul(&c_inv, a), &identity(n, cutoff));
    let neg = scale(&nil, &-Scalar::one());
    let mut acc = identity(n, cutoff);
    let mut power = identity(n, cutoff);
    for _ in 0..cutoff {
        power = mul(&power, &neg);
        if power.iter().flatten().all(|x| x.is_zero()) {
            break;
        }
        acc = add(&acc, &power);
    }
    let mut out = mul(&acc, &c_inv);
    if !nil.iter().flatten().all(|x| x.is_zero()) {
        for x in out.iter_mut().flatten() {
            x.mark_series_tail();
        }
    }
    Ok(out)
}

/// The Jacobian `J[l][j] = ∂_l g^j`.
pub fn jacobian(map: &[CoeffFunction]) -> Result<SeriesMatrix> {
    let n = map.len();
    (0..n).map(|l| map.iter().map(|g| g.partial(l + 1)).collect()).collect()
}

pub(crate) fn shape(a: &SeriesMatrix) -> (usize, u32) {
    let x = &a[0][0];
    (x.dim(), x.cutoff())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_curved_matrix() {
        let x = CoeffFunction::variable(2, 6, 1).unwrap();
        let y = CoeffFunction::variable(2, 6, 2).unwrap();
        let one = CoeffFunction::one(2, 6);
        let m = vec![vec![one.add(&x), y.clone()], vec![y, one.add(&x.mul(&x))]];
        let inv = inverse(&m).unwrap();
        let prod = mul(&m, &inv);
        let id = identity(2, 6);
        for i in 0..2 {
            for j in 0..2 {
                assert!(prod[i][j].sub(&id[i][j]).is_zero_mod_precision());
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let x = CoeffFunction::variable(1, 4, 1).unwrap();
        assert!(inverse(&vec![vec![x]]).is_err());
    }
}
