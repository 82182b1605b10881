use super::matrix::SeriesMatrix;
use super::metric::MetricData;
use crate::error::Result;
use crate::scalars::{CoeffFunction, Scalar};

/// Levi-Civita connection coefficients `Γ^i_{jk}`, stored as `gamma[i][j][k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    gamma: Vec<SeriesMatrix>,
}

impl Christoffel {
    /// `Γ^i_{jk} = ½ g^{il}(∂_j g_{lk} + ∂_k g_{jl} − ∂_l g_{jk})`.
    pub fn of(metric: &MetricData) -> Result<Self> {
        let n = metric.dim();
        let g = metric.g();
        let ginv = metric.g_inverse();
        // dg[l][i][j] = ∂_l g_ij
        let mut dg = Vec::with_capacity(n);
        for l in 0..n {
            let mut m = Vec::with_capacity(n);
            for row in g {
                m.push(row.iter().map(|x| x.partial(l + 1)).collect::<Result<Vec<_>>>()?);
            }
            dg.push(m);
        }
        let half = Scalar::frac(1, 2);
        let zero = CoeffFunction::zero(n, metric.cutoff());
        let mut gamma = vec![vec![vec![zero.clone(); n]; n]; n];
        for j in 0..n {
            for k in j..n {
                let lowered: Vec<CoeffFunction> =
                    (0..n).map(|l| dg[j][l][k].add(&dg[k][j][l]).sub(&dg[l][j][k]).scale(&half)).collect();
                for i in 0..n {
                    let mut acc = zero.clone();
                    for (l, low) in lowered.iter().enumerate() {
                        if !low.is_zero() && !ginv[i][l].is_zero() {
                            acc = acc.add(&ginv[i][l].mul(low));
                        }
                    }
                    gamma[i][j][k] = acc.clone();
                    gamma[i][k][j] = acc;
                }
            }
        }
        Ok(Christoffel { gamma })
    }

    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `Γ^i_{jk}` with 1-based indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &CoeffFunction {
        &self.gamma[i - 1][j - 1][k - 1]
    }

    pub(crate) fn raw(&self) -> &[SeriesMatrix] {
        &self.gamma
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.gamma[i][j][k] == self.gamma[i][k][j])))
    }

    /// `R_{jk} = ∂_i Γ^i_{jk} − ∂_k Γ^i_{ij} + Γ^i_{ip} Γ^p_{jk} − Γ^i_{kp} Γ^p_{ij}`.
    pub fn ricci(&self) -> Result<SeriesMatrix> {
        let n = self.dim();
        let zero = CoeffFunction::zero(self.gamma[0][0][0].dim(), self.gamma[0][0][0].cutoff());
        let mut out = vec![vec![zero.clone(); n]; n];
        for j in 0..n {
            for k in 0..n {
                let mut acc = zero.clone();
                for i in 0..n {
                    acc = acc.add(&self.gamma[i][j][k].partial(i + 1)?);
                    acc = acc.sub(&self.gamma[i][i][j].partial(k + 1)?);
                    for p in 0..n {
                        acc = acc.add(&self.gamma[i][i][p].mul(&self.gamma[p][j][k]));
                        acc = acc.sub(&self.gamma[i][k][p].mul(&self.gamma[p][i][j]));
                    }
                }
                out[j][k] = acc;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Precision;

    #[test]
    fn flat_metrics_have_no_connection() {
        assert!(Christoffel::of(&MetricData::flat(3, 6)).unwrap().is_zero());
        assert!(Christoffel::of(&MetricData::flat_complex(1, 6)).unwrap().is_zero());
    }

    #[test]
    fn one_dimensional_example() {
        let x = CoeffFunction::variable(1, 6, 1).unwrap();
        let g = CoeffFunction::one(1, 6).add(&x.pow(2));
        let ch = Christoffel::of(&MetricData::new(vec![vec![g]]).unwrap()).unwrap();
        let expected = x.sub(&x.pow(3)).add(&x.pow(5));
        let got = ch.get(1, 1, 1);
        assert!(got.same_terms(&expected));
        assert_eq!(got.precision(), Precision::Through(6));
    }

    #[test]
    fn ricci_of_sphere_jet_is_metric() {
        // Round 2-sphere jet in stereographic coordinates, g = 4/(1+r²)² δ: Ric = g.
        let d = 5;
        let x = CoeffFunction::variable(2, d, 1).unwrap();
        let y = CoeffFunction::variable(2, d, 2).unwrap();
        let one = CoeffFunction::one(2, d);
        let r2 = x.mul(&x).add(&y.mul(&y));
        let conf = one.add(&r2).pow(2).reciprocal().unwrap().scale(&Scalar::from_int(4));
        let zero = CoeffFunction::zero(2, d);
        let metric = MetricData::new(vec![vec![conf.clone(), zero.clone()], vec![zero, conf]]).unwrap();
        let ric = Christoffel::of(&metric).unwrap().ricci().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(ric[i][j].sub(&metric.g()[i][j]).is_zero_mod_precision());
            }
        }
    }
}
