use std::collections::HashMap;
use std::sync::Mutex;

use super::expr::FieldExpr;
use super::generator::{Generator, Parity};
use super::normal::{NormalForm, Term};
use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, LambdaPoly, Precision, Scalar};

/// Recursion bound for the mutually recursive bracket / product reduction.
pub(crate) const MAX_DEPTH: usize = 4096;

/// Entries kept per memo table before it is flushed.
pub(crate) const CACHE_LIMIT: usize = 10_000;

type BracketCache = Mutex<HashMap<(Term, Term), LambdaPoly<NormalForm>>>;
type NopCache = Mutex<HashMap<(Term, Term), NormalForm>>;

/// The free superfield algebra on `n` pairs `(B^i, Ψ_i)` with coefficient
/// functions truncated at a fixed cutoff.
///
/// Owns the memo tables shared by `normalize`, the normally ordered
/// product and the Λ-bracket. Results are identical with caching disabled.
pub struct Algebra {
    dim: usize,
    cutoff: u32,
    caching: bool,
    pub(crate) bracket_cache: BracketCache,
    pub(crate) nop_cache: NopCache,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra").field("dim", &self.dim).field("cutoff", &self.cutoff).finish()
    }
}

impl Algebra {
    pub fn new(dim: usize, cutoff: u32) -> Self {
        Self::with_caching(dim, cutoff, true)
    }

    pub fn with_caching(dim: usize, cutoff: u32, caching: bool) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Algebra {
            dim,
            cutoff,
            caching,
            bracket_cache: Mutex::new(HashMap::new()),
            nop_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn caching(&self) -> bool {
        self.caching
    }

    pub fn clear_caches(&self) {
        self.bracket_cache.lock().unwrap().clear();
        self.nop_cache.lock().unwrap().clear();
    }

    pub fn one(&self) -> CoeffFunction {
        CoeffFunction::one(self.dim, self.cutoff)
    }

    pub fn constant(&self, c: Scalar) -> CoeffFunction {
        CoeffFunction::constant(self.dim, self.cutoff, c)
    }

    pub fn x(&self, i: usize) -> CoeffFunction {
        CoeffFunction::variable(self.dim, self.cutoff, i).expect("coordinate index in range")
    }

    pub fn vacuum(&self) -> NormalForm {
        NormalForm::vacuum(self.dim, self.cutoff)
    }

    pub fn scalar_nf(&self, s: Scalar) -> NormalForm {
        NormalForm::scalar(self.dim, self.cutoff, s)
    }

    pub fn gen_nf(&self, g: Generator) -> NormalForm {
        NormalForm::generator(self.dim, self.cutoff, g)
    }

    fn check_shape(&self, f: &CoeffFunction) -> Result<()> {
        if f.dim() != self.dim || f.cutoff() != self.cutoff {
            return Err(ScdrError::Structural(format!(
                "coefficient function has dim {} / cutoff {}, algebra has dim {} / cutoff {}",
                f.dim(),
                f.cutoff(),
                self.dim,
                self.cutoff
            )));
        }
        Ok(())
    }

    /// Reduces an expression to its canonical PBW form.
    pub fn normalize(&self, e: &FieldExpr) -> Result<NormalForm> {
        e.parity()?;
        self.normalize_inner(e)
    }

    fn normalize_inner(&self, e: &FieldExpr) -> Result<NormalForm> {
        Ok(match e {
            FieldExpr::Vacuum => self.vacuum(),
            FieldExpr::Gen(g) => {
                if g.index == 0 || g.index as usize > self.dim {
                    return Err(ScdrError::IndexOutOfRange { index: g.index as usize, dim: self.dim });
                }
                self.gen_nf(*g)
            }
            FieldExpr::Coeff(f) => {
                self.check_shape(f)?;
                NormalForm::function(f.clone())
            }
            FieldExpr::Nop(a, b) => {
                let na = self.normalize_inner(a)?;
                let nb = self.normalize_inner(b)?;
                self.nop(&na, &nb)
            }
            FieldExpr::Sum(items) => {
                let mut out = NormalForm::zero();
                for (c, x) in items {
                    if c.is_zero() {
                        continue;
                    }
                    out.add_assign(&self.normalize_inner(x)?.scale(c));
                }
                out
            }
            FieldExpr::SDeriv(x) => self.normalize_inner(x)?.apply_s(),
            FieldExpr::TDeriv(x) => self.normalize_inner(x)?.apply_t(),
        })
    }

    /// Turns a normal form back into an expression tree (right-nested monomials).
    pub fn to_expr(&self, nf: &NormalForm) -> FieldExpr {
        let mut items = Vec::new();
        for (gens, c) in nf.terms() {
            let mut acc = match c.as_scalar() {
                Some(_) if !gens.is_empty() => None,
                _ => Some(FieldExpr::Coeff(if c.as_scalar().is_some() { self.one() } else { c.clone() })),
            };
            for g in gens.iter().rev() {
                acc = Some(match acc {
                    None => FieldExpr::Gen(*g),
                    Some(inner) => FieldExpr::nop(FieldExpr::Gen(*g), inner),
                });
            }
            let scale = c.as_scalar().unwrap_or_else(Scalar::one);
            items.push((scale, acc.unwrap_or(FieldExpr::Vacuum)));
        }
        FieldExpr::Sum(items)
    }

    /// Equality in the algebra, with the degree through which it is certified.
    pub fn expr_equal(&self, a: &FieldExpr, b: &FieldExpr) -> Result<(bool, Precision)> {
        let diff = self.normalize(a)?.sub(&self.normalize(b)?);
        Ok((diff.is_zero_mod_precision(), diff.precision()))
    }

    /// The normally ordered product `:X Y:` of two normal forms.
    pub fn nop(&self, x: &NormalForm, y: &NormalForm) -> NormalForm {
        self.nop_depth(x, y, 0)
    }

    pub(crate) fn nop_depth(&self, x: &NormalForm, y: &NormalForm, depth: usize) -> NormalForm {
        let mut out = NormalForm::zero().with_precision(x.precision().min(y.precision()));
        let xs = terms_with_precision(x);
        let ys = terms_with_precision(y);
        for xt in &xs {
            for yt in &ys {
                out.add_assign(&self.nop_terms(xt, yt, depth + 1));
            }
        }
        out
    }

    fn nop_terms(&self, x: &Term, y: &Term, depth: usize) -> NormalForm {
        assert!(depth < MAX_DEPTH, "normally ordered product recursion exceeded {MAX_DEPTH} levels");
        let (sx, x0) = split_scalar(x);
        let (sy, y0) = split_scalar(y);
        let factor = &sx * &sy;
        if self.caching {
            if let Some(hit) = self.nop_cache.lock().unwrap().get(&(x0.clone(), y0.clone())) {
                return hit.scale(&factor);
            }
        }
        let value = self.nop_terms_uncached(&x0, &y0, depth);
        if self.caching {
            let mut cache = self.nop_cache.lock().unwrap();
            if cache.len() >= CACHE_LIMIT {
                cache.clear();
            }
            cache.insert((x0, y0), value.clone());
        }
        value.scale(&factor)
    }

    fn nop_terms_uncached(&self, x: &Term, y: &Term, depth: usize) -> NormalForm {
        let ynf = NormalForm::from_term(y.clone());
        if x.gens.is_empty() {
            let c = &x.coeff;
            if let Some(s) = c.as_scalar() {
                return ynf.scale(&s);
            }
            // Quasi-commutativity moves the function to the innermost slot.
            let mut out = if y.gens.is_empty() {
                NormalForm::function(c.mul(&y.coeff))
            } else {
                self.nop_terms(y, x, depth + 1)
            };
            let br = self.bracket_terms(x, y, depth + 1);
            for (m, coef) in br.terms() {
                if !m.chi {
                    continue;
                }
                let j = m.lambda;
                let mut v = coef.clone();
                for _ in 0..=j {
                    v = v.apply_t();
                }
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out.add_assign(&v.scale(&Scalar::frac(sign, j as i64 + 1)));
            }
            return out;
        }
        let g1 = x.gens[0];
        let rest = Term { gens: x.gens[1..].to_vec(), coeff: x.coeff.clone() };
        if rest.gens.is_empty() {
            if let Some(s) = rest.coeff.as_scalar() {
                return ynf.mul_generator(g1).scale(&s);
            }
        }
        // Quasi-associativity for ::g1 x': Y:.
        let rest_nf = NormalForm::from_term(rest.clone());
        let mut out = self.nop_terms(&rest, y, depth + 1).mul_generator(g1);
        let br_rest = self.bracket_terms(&rest, y, depth + 1);
        for (m, coef) in br_rest.terms() {
            if !m.chi {
                continue;
            }
            let j = m.lambda;
            let mut g = g1;
            for _ in 0..=j {
                g = g.apply_t();
            }
            out.add_assign(&coef.mul_generator(g).scale(&Scalar::frac(1, j as i64 + 1)));
        }
        let g1_term = Term { gens: vec![g1], coeff: self.one() };
        let br_g1 = self.bracket_terms(&g1_term, y, depth + 1);
        let sign = if g1.parity().sign_with(rest.parity()) { -1 } else { 1 };
        for (m, coef) in br_g1.terms() {
            if !m.chi {
                continue;
            }
            let j = m.lambda;
            let mut shifted = rest_nf.clone();
            for _ in 0..=j {
                shifted = shifted.apply_t();
            }
            let part = self.nop_depth(&shifted, coef, depth + 1);
            out.add_assign(&part.scale(&Scalar::frac(sign, j as i64 + 1)));
        }
        out
    }

    /// Parity of a normal form, erroring on mixed input.
    pub fn parity_of(&self, nf: &NormalForm) -> Result<Option<Parity>> {
        if !nf.is_homogeneous() {
            return Err(ScdrError::NonHomogeneous);
        }
        Ok(nf.parity())
    }
}

/// Pushes the form-level precision into each monomial's coefficient, so that
/// downstream derivatives lower it consistently.
pub(crate) fn terms_with_precision(nf: &NormalForm) -> Vec<Term> {
    let p = nf.precision();
    nf.terms()
        .map(|(g, c)| Term { gens: g.clone(), coeff: if p.is_exact() { c.clone() } else { c.clone().with_precision(p) } })
        .collect()
}

/// Splits an exact scalar prefactor so that cache keys are shared.
pub(crate) fn split_scalar(t: &Term) -> (Scalar, Term) {
    match t.coeff.as_scalar() {
        Some(s) if !s.is_one() && !s.is_zero() => (
            s,
            Term { gens: t.gens.clone(), coeff: CoeffFunction::one(t.coeff.dim(), t.coeff.cutoff()) },
        ),
        _ => (Scalar::one(), t.clone()),
    }
}
impl Algebra {
    /// Current number of memoized brackets and products.
    pub fn cache_sizes(&self) -> (usize, usize) {
        (self.bracket_cache.lock().unwrap().len(), self.nop_cache.lock().unwrap().len())
    }
}
