use crate::error::{Result, ScdrError};
use crate::scalars::{LambdaMonomial, LambdaPoly, Precision, Scalar};
use crate::terms::algebra::{split_scalar, terms_with_precision, CACHE_LIMIT, MAX_DEPTH};
use crate::terms::{Algebra, FieldExpr, Generator, NormalForm, Parity, Term};

pub type Bracket = LambdaPoly<NormalForm>;

/// Minimum certified degree over all coefficients of a bracket.
pub fn bracket_precision(p: &Bracket) -> Precision {
    p.terms().fold(Precision::Exact, |acc, (_, c)| acc.min(c.precision()))
}

/// Zero through the certified degree of every coefficient.
pub fn bracket_is_zero(p: &Bracket) -> bool {
    p.terms().all(|(_, c)| c.is_zero_mod_precision())
}

/// `T` applied to every coefficient.
pub fn apply_t_coeffs(p: &Bracket) -> Bracket {
    p.map(|c| c.apply_t())
}

/// `(λ + T) P`.
pub fn lambda_plus_t(p: &Bracket) -> Bracket {
    p.mul_lambda(1).add(&apply_t_coeffs(p))
}

/// `(S + χ) P`, where `S` acts on `χ ⊗ v` as `2λ ⊗ v − χ ⊗ Sv`.
pub fn s_plus_chi(p: &Bracket) -> Bracket {
    let mut out = p.mul_chi();
    for (m, c) in p.terms() {
        if m.chi {
            out.add_term(LambdaMonomial::new(m.lambda + 1, false), c.scale(&Scalar::from_int(2)));
            out.add_term(LambdaMonomial::new(m.lambda, true), c.apply_s().neg());
        } else {
            out.add_term(LambdaMonomial::new(m.lambda, false), c.apply_s());
        }
    }
    out
}

pub(crate) fn is_composite(t: &Term) -> bool {
    t.gens.len() >= 2 || (t.gens.len() == 1 && t.coeff.as_scalar().is_none())
}

impl Algebra {
    /// Λ-bracket of two expressions, with normalized coefficients.
    pub fn lambda_bracket(&self, a: &FieldExpr, b: &FieldExpr) -> Result<Bracket> {
        let na = self.normalize(a)?;
        let nb = self.normalize(b)?;
        self.bracket_checked(&na, &nb)
    }

    /// Λ-bracket of normal forms; rejects mixed-parity input.
    pub fn bracket_checked(&self, a: &NormalForm, b: &NormalForm) -> Result<Bracket> {
        if !a.is_homogeneous() || !b.is_homogeneous() {
            return Err(ScdrError::NonHomogeneous);
        }
        Ok(self.bracket(a, b))
    }

    /// Λ-bracket of normal forms.
    pub fn bracket(&self, a: &NormalForm, b: &NormalForm) -> Bracket {
        self.bracket_depth(a, b, 0)
    }

    pub(crate) fn bracket_depth(&self, a: &NormalForm, b: &NormalForm, depth: usize) -> Bracket {
        let mut out = Bracket::zero();
        let xs = terms_with_precision(a);
        let ys = terms_with_precision(b);
        for x in &xs {
            for y in &ys {
                out.add_assign(&self.bracket_terms(x, y, depth + 1));
            }
        }
        out
    }

    pub(crate) fn term_from_generator(&self, g: Generator) -> Term {
        if g.is_coordinate() {
            Term { gens: Vec::new(), coeff: self.x(g.index as usize) }
        } else {
            Term { gens: vec![g], coeff: self.one() }
        }
    }

    pub(crate) fn bracket_terms(&self, x: &Term, y: &Term, depth: usize) -> Bracket {
        assert!(depth < MAX_DEPTH, "bracket recursion exceeded {MAX_DEPTH} levels");
        if x.coeff.is_zero() || y.coeff.is_zero() {
            return Bracket::zero();
        }
        let (sx, x0) = split_scalar(x);
        let (sy, y0) = split_scalar(y);
        let factor = &sx * &sy;
        if self.caching() {
            if let Some(hit) = self.bracket_cache.lock().unwrap().get(&(x0.clone(), y0.clone())) {
                return hit.scale(&factor);
            }
        }
        let value = if is_composite(&y0) {
            self.wick_terms(&x0, &y0, depth + 1)
        } else if is_composite(&x0) {
            let reversed = self.bracket_terms(&y0, &x0, depth + 1);
            self.skew_poly(&reversed, x0.parity(), y0.parity())
        } else {
            self.atomic_bracket(&x0, &y0, depth + 1)
        };
        if self.caching() {
            let mut cache = self.bracket_cache.lock().unwrap();
            if cache.len() >= CACHE_LIMIT {
                cache.clear();
            }
            cache.insert((x0, y0), value.clone());
        }
        value.scale(&factor)
    }

    /// Bracket of two atomic terms: a (derived) generator or a function each.
    fn atomic_bracket(&self, x: &Term, y: &Term, depth: usize) -> Bracket {
        let sx = x.coeff.as_scalar();
        let sy = y.coeff.as_scalar();
        if let (Some(g), Some(s)) = (x.gens.first().copied(), sx.clone()) {
            if g.t > 0 {
                let inner = self.term_from_generator(g.with(g.t - 1, g.s));
                return self.bracket_terms(&inner, y, depth + 1).mul_lambda(1).scale(&-s);
            }
            if g.s {
                let inner = self.term_from_generator(g.underived());
                return self.bracket_terms(&inner, y, depth + 1).mul_chi().scale(&s);
            }
        }
        if let (Some(h), Some(s)) = (y.gens.first().copied(), sy.clone()) {
            if h.t > 0 {
                let inner = self.term_from_generator(h.with(h.t - 1, h.s));
                return lambda_plus_t(&self.bracket_terms(x, &inner, depth + 1)).scale(&s);
            }
            if h.s {
                let inner = self.term_from_generator(h.underived());
                let base = s_plus_chi(&self.bracket_terms(x, &inner, depth + 1));
                let sign = if x.parity().is_odd() { Scalar::one() } else { -Scalar::one() };
                return base.scale(&(&sign * &s));
            }
        }
        // Underived base table: only Ψ against a function is nonzero.
        match (x.gens.first(), y.gens.first()) {
            (Some(g), None) => {
                let f = y.coeff.partial(g.index as usize).expect("index in range");
                let s = sx.unwrap_or_else(Scalar::one);
                Bracket::constant(NormalForm::function(f.scale(&s)))
            }
            (None, Some(h)) => {
                let f = x.coeff.partial(h.index as usize).expect("index in range");
                let s = sy.unwrap_or_else(Scalar::one);
                Bracket::constant(NormalForm::function(f.scale(&s)))
            }
            _ => Bracket::zero(),
        }
    }

    /// Right non-commutative Wick formula for `[x_Λ :h y':]`.
    fn wick_terms(&self, x: &Term, y: &Term, depth: usize) -> Bracket {
        let h = y.gens[0];
        let rest = Term { gens: y.gens[1..].to_vec(), coeff: y.coeff.clone() };
        let rest_nf = NormalForm::from_term(rest.clone());
        let h_term = Term { gens: vec![h], coeff: self.one() };
        let px = x.parity();
        let ph = h.parity();

        let with_h = self.bracket_terms(x, &h_term, depth + 1);
        let mut out = Bracket::zero();
        for (m, c) in with_h.terms() {
            out.add_term(*m, self.nop_depth(c, &rest_nf, depth + 1));
        }

        let with_rest = self.bracket_terms(x, &rest, depth + 1);
        let base_neg = px.flip().sign_with(ph);
        for (m, c) in with_rest.terms() {
            let neg = base_neg ^ (m.chi && ph.is_odd());
            let v = c.mul_generator(h);
            out.add_term(*m, if neg { v.neg() } else { v });
        }

        for (m, c) in with_h.terms() {
            let inner = self.bracket_depth(c, &rest_nf, depth + 1);
            for (mi, d) in inner.terms() {
                if !mi.chi {
                    continue;
                }
                let k = mi.lambda;
                out.add_term(
                    LambdaMonomial::new(m.lambda + k + 1, m.chi),
                    d.scale(&Scalar::frac(1, k as i64 + 1)),
                );
            }
        }
        out
    }

    /// Parity helper for callers holding normal forms.
    pub fn nf_parity(&self, nf: &NormalForm) -> Parity {
        nf.parity().unwrap_or(Parity::Even)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Algebra {
        Algebra::new(2, 6)
    }

    #[test]
    fn base_table() {
        let a = alg();
        let one = Bracket::constant(a.vacuum());
        assert_eq!(a.lambda_bracket(&FieldExpr::b(1), &FieldExpr::psi(1)).unwrap(), one);
        assert_eq!(a.lambda_bracket(&FieldExpr::psi(1), &FieldExpr::b(1)).unwrap(), one);
        assert!(a.lambda_bracket(&FieldExpr::b(1), &FieldExpr::psi(2)).unwrap().is_zero());
        assert!(a.lambda_bracket(&FieldExpr::b(1), &FieldExpr::b(2)).unwrap().is_zero());
        assert!(a.lambda_bracket(&FieldExpr::psi(1), &FieldExpr::psi(1)).unwrap().is_zero());
    }

    #[test]
    fn sesquilinearity_examples() {
        let a = alg();
        let chi = Bracket::monomial(LambdaMonomial::new(0, true), a.vacuum());
        let sb = FieldExpr::s(FieldExpr::b(1));
        assert_eq!(a.lambda_bracket(&sb, &FieldExpr::psi(1)).unwrap(), chi);
        assert_eq!(a.lambda_bracket(&FieldExpr::psi(1), &sb).unwrap(), chi);
        let lam = Bracket::monomial(LambdaMonomial::new(1, false), a.vacuum());
        let tpsi = FieldExpr::t(FieldExpr::psi(1));
        assert_eq!(a.lambda_bracket(&FieldExpr::b(1), &tpsi).unwrap(), lam);
        let sspsi = FieldExpr::s(FieldExpr::s(FieldExpr::psi(1)));
        assert_eq!(a.lambda_bracket(&FieldExpr::b(1), &sspsi).unwrap(), lam);
    }

    #[test]
    fn psi_against_function() {
        let a = alg();
        let f = a.x(1).mul(&a.x(1)).mul(&a.x(2));
        let br = a.lambda_bracket(&FieldExpr::psi(1), &FieldExpr::Coeff(f.clone())).unwrap();
        assert_eq!(br, Bracket::constant(NormalForm::function(f.partial(1).unwrap())));
    }
}
