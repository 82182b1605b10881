use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;

/// Vector-space operations needed from a `LambdaPoly` coefficient.
pub trait Coefficient: Clone {
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn scale(&self, s: &Scalar) -> Self;

    fn negated(&self) -> Self {
        self.scale(&-Scalar::one())
    }
}

impl Coefficient for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

/// `λ^j χ^J` with `J ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaMonomial {
    pub lambda: u32,
    pub chi: bool,
}

impl LambdaMonomial {
    pub const ONE: LambdaMonomial = LambdaMonomial { lambda: 0, chi: false };

    pub fn new(lambda: u32, chi: bool) -> Self {
        LambdaMonomial { lambda, chi }
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match self.lambda {
            0 => String::new(),
            1 => "lambda".to_string(),
            k => format!("lambda^{k}"),
        };
        match (l.is_empty(), self.chi) {
            (true, false) => write!(f, "1"),
            (true, true) => write!(f, "chi"),
            (false, false) => write!(f, "{l}"),
            (false, true) => write!(f, "{l}*chi"),
        }
    }
}

/// A polynomial in the even `λ` and odd `χ`, with `χ² = -λ` and `χ`
/// always written to the left of the coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaPoly<C> {
    terms: BTreeMap<LambdaMonomial, C>,
}

impl<C> Default for LambdaPoly<C> {
    fn default() -> Self {
        LambdaPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> LambdaPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(LambdaMonomial::ONE, c)
    }

    pub fn monomial(m: LambdaMonomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: LambdaMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LambdaMonomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (LambdaMonomial, C)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, lambda: u32, chi: bool) -> Option<&C> {
        self.terms.get(&LambdaMonomial::new(lambda, chi))
    }

    pub fn max_lambda(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.lambda).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negated())
    }

    pub fn negated(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.scale(s));
        }
        out
    }

    /// Multiplication by `λ^k`.
    pub fn mul_lambda(&self, k: u32) -> Self {
        LambdaPoly { terms: self.terms.iter().map(|(m, c)| (LambdaMonomial::new(m.lambda + k, m.chi), c.clone())).collect() }
    }

    /// Left multiplication by `χ`, using `χ² = -λ`.
    pub fn mul_chi(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m.chi {
                out.add_term(LambdaMonomial::new(m.lambda + 1, false), c.negated());
            } else {
                out.add_term(LambdaMonomial::new(m.lambda, true), c.clone());
            }
        }
        out
    }

    /// Left multiplication by a monomial.
    pub fn mul_monomial(&self, m: LambdaMonomial) -> Self {
        let p = self.mul_lambda(m.lambda);
        if m.chi {
            p.mul_chi()
        } else {
            p
        }
    }

    /// Applies a linear map to every coefficient, collecting the results.
    pub fn map<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> LambdaPoly<D> {
        let mut out = LambdaPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Applies a coefficient-to-polynomial map and multiplies back the monomial.
    pub fn flat_map(&self, mut f: impl FnMut(LambdaMonomial, &C) -> LambdaPoly<C>) -> LambdaPoly<C> {
        let mut out = LambdaPoly::zero();
        for (m, c) in &self.terms {
            out.add_assign(&f(*m, c));
        }
        out
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for LambdaPoly<C> {
    /// Renders as `coef` / `mono*(coef)` summands joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let (neg, body) = if *m == LambdaMonomial::ONE {
                match cs.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, cs),
                }
            } else if is_plain_scalar(&cs) {
                let (neg, mag) = match cs.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, cs),
                };
                (neg, if mag == "1" { m.to_string() } else { format!("{mag}*{m}") })
            } else {
                (false, format!("{m}*({cs})"))
            };
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

fn is_plain_scalar(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == 'i')
        && !s[1..].contains('-')
}

impl<C: Coefficient + fmt::Debug> fmt::Debug for LambdaPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m.to_string(), c))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn chi_squares_to_minus_lambda() {
        let p = LambdaPoly::constant(s(1)).mul_chi().mul_chi();
        assert_eq!(p, LambdaPoly::monomial(LambdaMonomial::new(1, false), s(-1)));
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut p = LambdaPoly::monomial(LambdaMonomial::new(2, true), s(3));
        p.add_term(LambdaMonomial::new(2, true), s(-3));
        assert!(p.is_zero());
    }

    #[test]
    fn rendering() {
        let mut p = LambdaPoly::monomial(LambdaMonomial::new(0, true), s(1));
        p.add_term(LambdaMonomial::new(2, true), Scalar::frac(1, 3));
        assert_eq!(p.to_string(), "chi + 1/3*lambda^2*chi");
        assert_eq!(LambdaPoly::<Scalar>::zero().to_string(), "0");
    }
}
