use super::christoffel::Christoffel;
use super::metric::MetricData;
use super::tensor::EndoTensor;
use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, Scalar};
use crate::terms::FieldExpr;

/// `f · e`, written as a scalar multiple when `f` is constant.
pub(crate) fn weighted(f: &CoeffFunction, e: FieldExpr) -> FieldExpr {
    match f.as_scalar() {
        Some(s) if s.is_one() => e,
        Some(s) => FieldExpr::sum(vec![(s, e)]),
        None => FieldExpr::nop(FieldExpr::coeff(f.clone()), e),
    }
}

fn sum(items: Vec<FieldExpr>) -> FieldExpr {
    FieldExpr::sum(items.into_iter().filter(|e| !e.is_syntactic_zero()).map(|e| (Scalar::one(), e)).collect())
}

/// `H⁰ = SB^i SΨ_i + TB^i Ψ_i`.
pub fn build_h0(dim: usize) -> FieldExpr {
    let mut items = Vec::new();
    for i in 1..=dim as u16 {
        items.push(FieldExpr::nop(FieldExpr::s(FieldExpr::b(i)), FieldExpr::s(FieldExpr::psi(i))));
        items.push(FieldExpr::nop(FieldExpr::t(FieldExpr::b(i)), FieldExpr::psi(i)));
    }
    sum(items)
}

/// The Neveu–Schwarz vector `H = SB^i SΨ_i + TB^i Ψ_i − TS 𝐠`, `𝐠 = log √det g`.
pub fn build_h(metric: &MetricData) -> FieldExpr {
    let h0 = build_h0(metric.dim());
    let g = metric.logdet_half();
    if g.is_zero() && g.precision().is_exact() {
        return h0;
    }
    FieldExpr::sum(vec![
        (Scalar::one(), h0),
        (-Scalar::one(), FieldExpr::t(FieldExpr::s(FieldExpr::coeff(g.clone())))),
    ])
}

/// `Σ_{i,j} Γ^i_{jk} ω_i^j`, the coefficient of `TB^k` in the current.
pub fn connection_trace(omega: &EndoTensor, gamma: &Christoffel) -> Vec<CoeffFunction> {
    let n = omega.dim();
    let raw = gamma.raw();
    (0..n)
        .map(|k| {
            let mut acc = CoeffFunction::zero(n, omega.cutoff());
            for i in 0..n {
                for j in 0..n {
                    let w = &omega.matrix()[i][j];
                    let c = &raw[i][j][k];
                    if !w.is_zero() && !c.is_zero() {
                        acc = acc.add(&c.mul(w));
                    }
                }
            }
            acc
        })
        .collect()
}

/// The current `J = (ω_i^j SB^i) Ψ_j + Γ^i_{jk} ω_i^j TB^k`.
pub fn build_j(omega: &EndoTensor, metric: &MetricData) -> Result<FieldExpr> {
    let n = omega.dim();
    if metric.dim() != n {
        return Err(ScdrError::Structural(format!("tensor has dimension {n}, metric {}", metric.dim())));
    }
    let gamma = Christoffel::of(metric)?;
    let mut items = Vec::new();
    for j in 1..=n {
        for i in 1..=n {
            let w = omega.get(i, j);
            if w.is_zero() && w.precision().is_exact() {
                continue;
            }
            let sb = weighted(w, FieldExpr::s(FieldExpr::b(i as u16)));
            items.push(FieldExpr::nop(sb, FieldExpr::psi(j as u16)));
        }
    }
    for (k, c) in connection_trace(omega, &gamma).iter().enumerate() {
        if c.is_zero() && c.precision().is_exact() {
            continue;
        }
        items.push(weighted(c, FieldExpr::t(FieldExpr::b(k as u16 + 1))));
    }
    Ok(sum(items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Algebra;

    #[test]
    fn flat_h_is_h0() {
        let alg = Algebra::new(2, 6);
        let (eq, p) = alg.expr_equal(&build_h(&MetricData::flat(2, 6)), &build_h0(2)).unwrap();
        assert!(eq && p.is_exact());
    }

    #[test]
    fn linearity_examples() {
        let alg = Algebra::new(2, 4);
        let g = MetricData::flat(2, 4);
        let zero = build_j(&EndoTensor::zero(2, 4), &g).unwrap();
        assert!(alg.normalize(&zero).unwrap().is_empty());
        let id = build_j(&EndoTensor::identity(2, 4), &g).unwrap();
        let expected = FieldExpr::sum(vec![
            (Scalar::one(), FieldExpr::nop(FieldExpr::s(FieldExpr::b(1)), FieldExpr::psi(1))),
            (Scalar::one(), FieldExpr::nop(FieldExpr::s(FieldExpr::b(2)), FieldExpr::psi(2))),
        ]);
        assert!(alg.expr_equal(&id, &expected).unwrap().0);
    }

    #[test]
    fn flat_complex_current() {
        let alg = Algebra::new(2, 4);
        let j = build_j(&EndoTensor::standard_complex(1, 4), &MetricData::flat_complex(1, 4)).unwrap();
        let expected = FieldExpr::sum(vec![
            (Scalar::i(), FieldExpr::nop(FieldExpr::s(FieldExpr::b(1)), FieldExpr::psi(1))),
            (-Scalar::i(), FieldExpr::nop(FieldExpr::s(FieldExpr::b(2)), FieldExpr::psi(2))),
        ]);
        assert!(alg.expr_equal(&j, &expected).unwrap().0);
    }
}
