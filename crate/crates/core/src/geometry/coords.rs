use serde_json::Value;

use super::currents::weighted;
use super::matrix::{self, SeriesMatrix};
use super::metric::MetricData;
use super::tensor::EndoTensor;
use crate::error::{Result, ScdrError};
use crate::scalars::{inverse_map, CoeffFunction, Precision, Scalar};
use crate::bracket::Bracket;
use crate::superconf::StructureReport;
use crate::terms::{Algebra, FieldExpr, GenKind, NormalForm};

/// A change of coordinates `x̃ = g(x)` with inverse `x = f(x̃)`, both fixing
/// the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    forward: Vec<CoeffFunction>,
    inverse: Vec<CoeffFunction>,
}

impl CoordinateChange {
    /// Builds from the forward map, computing the inverse as a series.
    pub fn new(forward: Vec<CoeffFunction>) -> Result<Self> {
        let inverse = inverse_map(&forward)?;
        Ok(CoordinateChange { forward, inverse })
    }

    /// Builds from both maps; rejects a pair with `f ∘ g ≠ id`.
    pub fn with_inverse(forward: Vec<CoeffFunction>, inverse: Vec<CoeffFunction>) -> Result<Self> {
        if forward.len() != inverse.len() {
            return Err(ScdrError::Structural("forward and inverse maps differ in length".into()));
        }
        for (k, f) in inverse.iter().enumerate() {
            if !f.constant_term().is_zero() {
                return Err(ScdrError::ConstantTerm(k + 1));
            }
        }
        let ch = CoordinateChange { forward, inverse };
        inverse_map(&ch.forward)?;
        let (ok, _) = ch.round_trip();
        if !ok {
            return Err(ScdrError::Input("inverse map does not invert the forward map".into()));
        }
        Ok(ch)
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    pub fn cutoff(&self) -> u32 {
        self.forward[0].cutoff()
    }

    pub fn forward(&self) -> &[CoeffFunction] {
        &self.forward
    }

    pub fn inverse(&self) -> &[CoeffFunction] {
        &self.inverse
    }

    /// Whether `f ∘ g = id`, and through which degree.
    pub fn round_trip(&self) -> (bool, Precision) {
        let mut ok = true;
        let mut p = Precision::Exact;
        for (i, f) in self.inverse.iter().enumerate() {
            let back = match f.compose(&self.forward) {
                Ok(b) => b,
                Err(_) => return (false, Precision::Through(-1)),
            };
            let diff = back.sub(&CoeffFunction::variable(self.dim(), self.cutoff(), i + 1).unwrap());
            p = p.min(diff.precision());
            ok &= diff.is_zero_mod_precision();
        }
        (ok, p)
    }

    /// `∂_l g^j`, indexed `[l][j]`.
    pub fn forward_jacobian(&self) -> Result<SeriesMatrix> {
        matrix::jacobian(&self.forward)
    }

    /// `(∂f^j/∂x̃^i)(g(x))`, indexed `[i][j]`: the inverse of the forward Jacobian.
    pub fn inverse_jacobian_at_source(&self) -> Result<SeriesMatrix> {
        matrix::inverse(&self.forward_jacobian()?)
    }

    /// A function of the new coordinates, evaluated at `x̃ = g(x)`.
    pub fn pull(&self, f: &CoeffFunction) -> Result<CoeffFunction> {
        f.compose(&self.forward)
    }

    /// The new generators as expressions in the old ones:
    /// `B̃^i = g^i(B)` and `Ψ̃_i = (∂f^j/∂x̃^i)(g(B)) Ψ_j`.
    pub fn transform_generators(&self) -> Result<(Vec<FieldExpr>, Vec<FieldExpr>)> {
        let m = self.inverse_jacobian_at_source()?;
        let b = self.forward.iter().map(|g| FieldExpr::coeff(g.clone())).collect();
        let psi = m
            .iter()
            .map(|row| {
                let items = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !(c.is_zero() && c.precision().is_exact()))
                    .map(|(j, c)| (Scalar::one(), weighted(c, FieldExpr::psi(j as u16 + 1))))
                    .collect();
                FieldExpr::sum(items)
            })
            .collect();
        Ok((b, psi))
    }

    /// Rewrites an expression written in the new chart in terms of the old
    /// generators.
    pub fn transform_expr(&self, e: &FieldExpr) -> Result<FieldExpr> {
        let (b, psi) = self.transform_generators()?;
        self.substitute(e, &b, &psi)
    }

    fn substitute(&self, e: &FieldExpr, b: &[FieldExpr], psi: &[FieldExpr]) -> Result<FieldExpr> {
        Ok(match e {
            FieldExpr::Vacuum => FieldExpr::Vacuum,
            FieldExpr::Gen(g) => {
                let idx = g.index as usize;
                if idx == 0 || idx > self.dim() {
                    return Err(ScdrError::IndexOutOfRange { index: idx, dim: self.dim() });
                }
                let mut out = match g.kind {
                    GenKind::B => b[idx - 1].clone(),
                    GenKind::Psi => psi[idx - 1].clone(),
                };
                if g.s {
                    out = FieldExpr::s(out);
                }
                for _ in 0..g.t {
                    out = FieldExpr::t(out);
                }
                out
            }
            FieldExpr::Coeff(f) => FieldExpr::coeff(self.pull(f)?),
            FieldExpr::Nop(x, y) => FieldExpr::nop(self.substitute(x, b, psi)?, self.substitute(y, b, psi)?),
            FieldExpr::Sum(items) => FieldExpr::Sum(
                items.iter().map(|(c, x)| Ok((c.clone(), self.substitute(x, b, psi)?))).collect::<Result<_>>()?,
            ),
            FieldExpr::SDeriv(x) => FieldExpr::s(self.substitute(x, b, psi)?),
            FieldExpr::TDeriv(x) => FieldExpr::t(self.substitute(x, b, psi)?),
        })
    }

    /// `∂f^k/∂x̃^i` as functions of the new coordinates, indexed `[i][k]`.
    fn inverse_jacobian(&self) -> Result<SeriesMatrix> {
        matrix::jacobian(&self.inverse)
    }

    /// The metric in the new coordinates:
    /// `g̃_ij = (∂f^k/∂x̃^i)(∂f^l/∂x̃^j) g_kl(f)`.
    pub fn pushforward_metric(&self, metric: &MetricData) -> Result<MetricData> {
        let jf = self.inverse_jacobian()?;
        let g_at_f = matrix::compose(metric.g(), &self.inverse)?;
        let gt = matrix::mul(&matrix::mul(&jf, &g_at_f), &matrix::transpose(&jf));
        MetricData::new(symmetrize(gt))
    }

    /// The tensor in the new coordinates:
    /// `ω̃_i^j = (∂f^k/∂x̃^i) ω_k^l(f) (∂g^j/∂x^l)(f)`.
    pub fn pushforward_tensor(&self, omega: &EndoTensor) -> Result<EndoTensor> {
        let jf = self.inverse_jacobian()?;
        let w_at_f = matrix::compose(omega.matrix(), &self.inverse)?;
        let jg_at_f = matrix::compose(&self.forward_jacobian()?, &self.inverse)?;
        EndoTensor::new(matrix::mul(&matrix::mul(&jf, &w_at_f), &jg_at_f))
    }

    /// Parses `{"dim": n, "forward": [..], "inverse": [..]}`; `inverse` is optional.
    pub fn from_json(cutoff: u32, v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| ScdrError::Input("coordinate change needs an integer \"dim\"".into()))? as usize;
        let list = |key: &str| -> Result<Option<Vec<CoeffFunction>>> {
            match v.get(key) {
                None => Ok(None),
                Some(Value::Array(xs)) => {
                    if xs.len() != dim {
                        return Err(ScdrError::Input(format!("\"{key}\" needs {dim} components")));
                    }
                    Ok(Some(xs.iter().map(|x| CoeffFunction::from_json(dim, cutoff, x)).collect::<Result<_>>()?))
                }
                Some(_) => Err(ScdrError::Input(format!("\"{key}\" must be an array"))),
            }
        };
        let forward = list("forward")?.ok_or_else(|| ScdrError::Input("coordinate change needs \"forward\"".into()))?;
        match list("inverse")? {
            Some(inv) => Self::with_inverse(forward, inv),
            None => Self::new(forward),
        }
    }
}

impl Algebra {
    /// Checks `[B̃^i_Λ B̃^j] = 0`, `[B̃^i_Λ Ψ̃_j] = δ_ij` and `[Ψ̃_i Λ Ψ̃_j] = 0`.
    pub fn check_transformed_brackets(&self, ch: &CoordinateChange) -> Result<StructureReport> {
        let (b, psi) = ch.transform_generators()?;
        let nb: Vec<NormalForm> = b.iter().map(|e| self.normalize(e)).collect::<Result<_>>()?;
        let np: Vec<NormalForm> = psi.iter().map(|e| self.normalize(e)).collect::<Result<_>>()?;
        let mut rep = StructureReport::new("coordchange", self.cutoff());
        let n = ch.dim();
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (i + 1, j + 1);
                rep.absorb_residual(&format!("[B~{bi}_L B~{bj}] = 0"), &self.bracket(&nb[i], &nb[j]));
                let mut r = self.bracket(&nb[i], &np[j]);
                if i == j {
                    r = r.sub(&Bracket::constant(self.vacuum()));
                }
                rep.absorb_residual(&format!("[B~{bi}_L Psi~{bj}] = delta"), &r);
                rep.absorb_residual(&format!("[Psi~{bi}_L Psi~{bj}] = 0"), &self.bracket(&np[i], &np[j]));
            }
        }
        Ok(rep)
    }

    /// Checks that `new`, written in the new chart, transforms back to `old`.
    pub fn check_covariance(&self, name: &str, old: &FieldExpr, new: &FieldExpr, ch: &CoordinateChange) -> Result<StructureReport> {
        let mut rep = StructureReport::new(name, self.cutoff());
        let diff = self.normalize(&ch.transform_expr(new)?)?.sub(&self.normalize(old)?);
        rep.absorb_residual("transforms covariantly", &Bracket::constant(diff));
        Ok(rep)
    }
}

/// Averages `m` with its transpose; removes asymmetric round-off in the
/// truncated tail.
fn symmetrize(m: SeriesMatrix) -> SeriesMatrix {
    let t = matrix::transpose(&m);
    matrix::scale(&matrix::add(&m, &t), &Scalar::frac(1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::{bracket_is_zero, bracket_precision};

    fn x(d: u32) -> CoeffFunction {
        CoeffFunction::variable(1, d, 1).unwrap()
    }

    #[test]
    fn linear_change_examples() {
        let alg = Algebra::new(1, 4);
        let ch = CoordinateChange::new(vec![x(4).scale(&Scalar::from_int(2))]).unwrap();
        let (b, psi) = ch.transform_generators().unwrap();
        assert!(alg.expr_equal(&b[0], &FieldExpr::sum(vec![(Scalar::from_int(2), FieldExpr::b(1))])).unwrap().0);
        assert!(alg.expr_equal(&psi[0], &FieldExpr::sum(vec![(Scalar::frac(1, 2), FieldExpr::psi(1))])).unwrap().0);
        let br = alg.lambda_bracket(&b[0], &psi[0]).unwrap();
        assert_eq!(br, Bracket::constant(alg.vacuum()));
    }

    #[test]
    fn quadratic_change_preserves_brackets() {
        let d = 6;
        let alg = Algebra::new(1, d);
        let ch = CoordinateChange::new(vec![x(d).add(&x(d).pow(2))]).unwrap();
        let (b, psi) = ch.transform_generators().unwrap();
        let bp = alg.lambda_bracket(&b[0], &psi[0]).unwrap().sub(&Bracket::constant(alg.vacuum()));
        assert!(bracket_is_zero(&bp));
        let pp = alg.lambda_bracket(&psi[0], &psi[0]).unwrap();
        assert!(bracket_is_zero(&pp));
        assert!(bracket_precision(&pp).degree(d) >= d as i32 - 3);
    }

    #[test]
    fn inverse_jacobian_matches_composed_partials() {
        let d = 6;
        let ch = CoordinateChange::new(vec![x(d).add(&x(d).pow(2))]).unwrap();
        let m = ch.inverse_jacobian_at_source().unwrap();
        let composed = ch.inverse[0].partial(1).unwrap().compose(&ch.forward).unwrap();
        assert!(m[0][0].sub(&composed).is_zero_mod_precision());
    }

    #[test]
    fn mismatched_inverse_is_rejected() {
        let g = x(4).add(&x(4).pow(2));
        assert!(CoordinateChange::with_inverse(vec![g.clone()], vec![x(4)]).is_err());
        let good = inverse_map(std::slice::from_ref(&g)).unwrap();
        assert!(CoordinateChange::with_inverse(vec![g], good).is_ok());
    }
}
