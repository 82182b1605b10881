use super::engine::Bracket;
use crate::scalars::{binomial, LambdaMonomial, Scalar};
use crate::terms::{Algebra, NormalForm, Parity};

impl Algebra {
    /// Skew-symmetry: from `[b_Γ a]` produce `[a_Λ b]`.
    ///
    /// Substitutes `η → −χ − S` first and then `γ → −λ − T`, with `S`, `T`
    /// acting on the coefficients, and multiplies by `(−1)^{p(a) p(b)}`.
    pub fn skew(&self, b_bracket_a: &Bracket, parity_a: Parity, parity_b: Parity) -> Bracket {
        self.skew_poly(b_bracket_a, parity_a, parity_b)
    }

    pub(crate) fn skew_poly(&self, p: &Bracket, parity_a: Parity, parity_b: Parity) -> Bracket {
        let mut out = Bracket::zero();
        for (m, c) in p.terms() {
            // (−χ − S) applied to the coefficient, or the coefficient itself.
            let mut stage: Vec<(bool, NormalForm)> = Vec::new();
            if m.chi {
                stage.push((true, c.neg()));
                stage.push((false, c.apply_s().neg()));
            } else {
                stage.push((false, c.clone()));
            }
            let k = m.lambda;
            for (chi, v) in stage {
                // (−λ − T)^k = (−1)^k Σ_r C(k, r) λ^{k−r} T^r
                let mut tv = v;
                for r in 0..=k {
                    let coef = Scalar::from_rational(binomial(k as i64, r));
                    let coef = if k % 2 == 1 { -coef } else { coef };
                    out.add_term(LambdaMonomial::new(k - r, chi), tv.scale(&coef));
                    if r < k {
                        tv = tv.apply_t();
                    }
                }
            }
        }
        if parity_a.sign_with(parity_b) {
            out.negated()
        } else {
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::FieldExpr;

    #[test]
    fn skew_of_base_bracket() {
        let a = Algebra::new(1, 4);
        let bp = a.lambda_bracket(&FieldExpr::b(1), &FieldExpr::psi(1)).unwrap();
        let back = a.skew(&bp, Parity::Odd, Parity::Even);
        assert_eq!(back, a.lambda_bracket(&FieldExpr::psi(1), &FieldExpr::b(1)).unwrap());
        assert!(a.skew(&Bracket::zero(), Parity::Odd, Parity::Odd).is_zero());
    }

    #[test]
    fn skew_is_an_involution_on_examples() {
        let a = Algebra::new(1, 4);
        let x = FieldExpr::nop(FieldExpr::s(FieldExpr::b(1)), FieldExpr::psi(1));
        let y = FieldExpr::t(FieldExpr::psi(1));
        let (px, py) = (Parity::Even, Parity::Odd);
        let xy = a.lambda_bracket(&x, &y).unwrap();
        let twice = a.skew(&a.skew(&xy, py, px), px, py);
        assert_eq!(twice, xy);
    }
}
