use crate::bracket::Bracket;
use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, LambdaMonomial};
use crate::superconf::StructureReport;
use crate::terms::{Algebra, FieldExpr, NormalForm};

use super::currents::weighted;

/// A formal vector field `X = f^j ∂_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    coeffs: Vec<CoeffFunction>,
}

impl VectorField {
    pub fn new(coeffs: Vec<CoeffFunction>) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 || coeffs.iter().any(|c| c.dim() != n) {
            return Err(ScdrError::Structural("vector field needs one coefficient per coordinate".into()));
        }
        Ok(VectorField { coeffs })
    }

    /// `f ∂_j` with 1-based `j`.
    pub fn single(f: CoeffFunction, j: usize) -> Result<Self> {
        let n = f.dim();
        if j == 0 || j > n {
            return Err(ScdrError::IndexOutOfRange { index: j, dim: n });
        }
        let mut coeffs = vec![CoeffFunction::zero(n, f.cutoff()); n];
        coeffs[j - 1] = f;
        Ok(VectorField { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[CoeffFunction] {
        &self.coeffs
    }

    /// `[X, Y]^j = X^i ∂_i Y^j − Y^i ∂_i X^j`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = CoeffFunction::zero(n, self.coeffs[0].cutoff());
            for i in 0..n {
                acc = acc.add(&self.coeffs[i].mul(&other.coeffs[j].partial(i + 1)?));
                acc = acc.sub(&other.coeffs[i].mul(&self.coeffs[j].partial(i + 1)?));
            }
            out.push(acc);
        }
        Ok(VectorField { coeffs: out })
    }

    /// The superfield `Σ_j f^j(B) Ψ_j` whose super-residue acts as `X`.
    pub fn superfield(&self) -> FieldExpr {
        let items = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, f)| !(f.is_zero() && f.precision().is_exact()))
            .map(|(j, f)| (crate::scalars::Scalar::one(), weighted(f, FieldExpr::psi(j as u16 + 1))))
            .collect();
        FieldExpr::sum(items)
    }

    /// The top component written classically:
    /// `Σ_j f^j(b) a^j + Σ_{j,k} (∂_k f^j)(b) φ^k ψ^j`.
    pub fn top_density(&self) -> Result<FieldExpr> {
        let mut items = Vec::new();
        for (j, f) in self.coeffs.iter().enumerate() {
            let psi = FieldExpr::psi(j as u16 + 1);
            items.push(weighted(f, FieldExpr::s(psi.clone())));
            for k in 0..self.dim() {
                let d = f.partial(k + 1)?;
                if d.is_zero() && d.precision().is_exact() {
                    continue;
                }
                items.push(FieldExpr::nop(weighted(&d, FieldExpr::s(FieldExpr::b(k as u16 + 1))), psi.clone()));
            }
        }
        Ok(FieldExpr::sum(items.into_iter().map(|e| (crate::scalars::Scalar::one(), e)).collect()))
    }
}

/// The superfield `f(B) Ψ_j` attached to `f ∂_j`.
pub fn vector_field_action(f: &CoeffFunction, j: usize) -> Result<FieldExpr> {
    Ok(VectorField::single(f.clone(), j)?.superfield())
}

impl Algebra {
    /// `sres(X)` applied to the state `y`: the `λ⁰χ⁰` coefficient of `[x_Λ y]`,
    /// which is the zero mode of the top component of `x`.
    pub fn sres_action(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        self.bracket(x, y).coefficient(0, false).cloned().unwrap_or_default()
    }

    /// Checks `sres(X) Y_sf = [X, Y]_sf` and that the top component of `X_sf`
    /// is the classical density.
    pub fn check_vector_fields(&self, x: &VectorField, y: &VectorField) -> Result<StructureReport> {
        let mut rep = StructureReport::new("vector fields", self.cutoff());
        let xs = self.normalize(&x.superfield())?;
        let ys = self.normalize(&y.superfield())?;
        let lie = self.normalize(&x.lie_bracket(y)?.superfield())?;
        let diff = self.sres_action(&xs, &ys).sub(&lie);
        rep.absorb_residual("sres(X) Y = [X, Y]", &Bracket::monomial(LambdaMonomial::ONE, diff));
        for (name, v, nf) in [("X", x, &xs), ("Y", y, &ys)] {
            let d = nf.apply_s().sub(&self.normalize(&v.top_density()?)?);
            rep.absorb_residual(&format!("top component of {name}"), &Bracket::constant(d));
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;

    fn x(d: u32) -> CoeffFunction {
        CoeffFunction::variable(1, d, 1).unwrap()
    }

    #[test]
    fn constant_and_euler_fields() {
        let alg = Algebra::new(1, 6);
        let d = vector_field_action(&CoeffFunction::one(1, 6), 1).unwrap();
        assert!(alg.expr_equal(&d, &FieldExpr::psi(1)).unwrap().0);
        let e = vector_field_action(&x(6), 1).unwrap();
        let want = FieldExpr::nop(FieldExpr::b(1), FieldExpr::psi(1));
        assert!(alg.expr_equal(&e, &want).unwrap().0);
    }

    #[test]
    fn lie_bracket_in_one_variable() {
        let a = VectorField::single(CoeffFunction::one(1, 6), 1).unwrap();
        let b = VectorField::single(x(6).pow(2), 1).unwrap();
        let c = a.lie_bracket(&b).unwrap();
        assert!(c.coefficients()[0].same_terms(&x(6).scale(&Scalar::from_int(2))));
    }

    #[test]
    fn homomorphism_on_small_fields() {
        let alg = Algebra::new(1, 8);
        let f = VectorField::single(x(8).add(&x(8).pow(3)), 1).unwrap();
        let h = VectorField::single(CoeffFunction::one(1, 8).sub(&x(8).pow(2)), 1).unwrap();
        let rep = alg.check_vector_fields(&f, &h).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
