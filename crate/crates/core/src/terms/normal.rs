use std::collections::BTreeMap;
use std::fmt;

use super::generator::{parity_of, sort_with_sign, Generator, Parity};
use crate::scalars::{CoeffFunction, Coefficient, Precision, Scalar};

/// One PBW monomial: `c(B) · g1 … gk` with sorted derived generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub gens: Vec<Generator>,
    pub coeff: CoeffFunction,
}

impl Term {
    pub fn parity(&self) -> Parity {
        parity_of(&self.gens)
    }

    /// Total number of `S` applications, a proxy for conformal weight.
    pub fn weight(&self) -> u32 {
        self.gens.iter().map(|g| g.weight()).sum()
    }
}

/// Canonical PBW form: a sum of monomials `c(B) · g1 … gk`.
///
/// A monomial stands for the right-nested product `:g1 :g2 … :gk c:…::`,
/// which in the free-field realisation is the plain (super)commutative
/// product of creation modes. `precision` is the minimum certified degree
/// over everything that went into the value, including cancelled terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    terms: BTreeMap<Vec<Generator>, CoeffFunction>,
    precision: Precision,
}

impl Default for NormalForm {
    fn default() -> Self {
        NormalForm { terms: BTreeMap::new(), precision: Precision::Exact }
    }
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum(dim: usize, cutoff: u32) -> Self {
        Self::function(CoeffFunction::one(dim, cutoff))
    }

    pub fn scalar(dim: usize, cutoff: u32, s: Scalar) -> Self {
        Self::function(CoeffFunction::constant(dim, cutoff, s))
    }

    pub fn function(f: CoeffFunction) -> Self {
        let mut nf = Self::zero();
        nf.add_term(Vec::new(), f);
        nf
    }

    /// A single generator; underived `B^i` becomes the coordinate function.
    pub fn generator(dim: usize, cutoff: u32, g: Generator) -> Self {
        Self::vacuum(dim, cutoff).mul_generator(g)
    }

    pub fn from_term(t: Term) -> Self {
        let mut nf = Self::zero();
        nf.add_term(t.gens, t.coeff);
        nf
    }

    /// Adds `c · gens`; `gens` must already be canonical.
    pub fn add_term(&mut self, gens: Vec<Generator>, c: CoeffFunction) {
        self.precision = self.precision.min(c.precision());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(gens) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Adds an arbitrary (unsorted) product of generators times `c`.
    pub fn add_product(&mut self, gens: Vec<Generator>, c: CoeffFunction) {
        self.precision = self.precision.min(c.precision());
        let mut coeff = c;
        let mut rest = Vec::with_capacity(gens.len());
        for g in gens {
            if g.is_coordinate() {
                let x = CoeffFunction::variable(coeff.dim(), coeff.cutoff(), g.index as usize)
                    .expect("generator index within dimension");
                coeff = coeff.mul(&x);
            } else {
                rest.push(g);
            }
        }
        if let Some((negate, sorted)) = sort_with_sign(rest) {
            let c = if negate { coeff.neg() } else { coeff };
            self.add_term(sorted, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Generator>, &CoeffFunction)> {
        self.terms.iter()
    }

    pub fn term_list(&self) -> Vec<Term> {
        self.terms.iter().map(|(g, c)| Term { gens: g.clone(), coeff: c.clone() }).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No stored monomials (possibly with a precision caveat).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn with_precision(mut self, p: Precision) -> Self {
        self.precision = self.precision.min(p);
        self
    }

    /// True when some coefficient lost terms to the cutoff.
    pub fn truncated(&self) -> bool {
        !self.precision.is_exact() || self.terms.values().any(|c| c.truncated())
    }

    /// Zero through the certified degree.
    pub fn is_zero_mod_precision(&self) -> bool {
        match self.precision {
            Precision::Exact => self.terms.is_empty(),
            Precision::Through(d) => self.terms.values().all(|c| c.vanishes_through(d)),
        }
    }

    /// Parity of the first monomial, if any.
    pub fn parity(&self) -> Option<Parity> {
        self.terms.keys().next().map(|g| parity_of(g))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut ps = self.terms.keys().map(|g| parity_of(g));
        match ps.next() {
            None => true,
            Some(p) => ps.all(|q| q == p),
        }
    }

    /// The scalar `s` if this is exactly `s · |0⟩`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return self.precision.is_exact().then(Scalar::zero);
        }
        if self.terms.len() != 1 || !self.precision.is_exact() {
            return None;
        }
        let (g, c) = self.terms.iter().next().unwrap();
        if g.is_empty() {
            c.as_scalar()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.precision = self.precision.min(other.precision);
        for (g, c) in &other.terms {
            self.add_term(g.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = NormalForm { terms: BTreeMap::new(), precision: self.precision };
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(g, c)| (g.clone(), c.scale(s))).collect();
        out
    }

    /// Multiplication by a function of the coordinates.
    pub fn mul_function(&self, f: &CoeffFunction) -> Self {
        let mut out = NormalForm { terms: BTreeMap::new(), precision: self.precision.min(f.precision()) };
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c.mul(f));
        }
        out
    }

    /// Left Fock multiplication by a generator, i.e. `:g X:`.
    pub fn mul_generator(&self, g: Generator) -> Self {
        let mut out = NormalForm { terms: BTreeMap::new(), precision: self.precision };
        for (gens, c) in &self.terms {
            let mut list = Vec::with_capacity(gens.len() + 1);
            list.push(g);
            list.extend_from_slice(gens);
            out.add_product(list, c.clone());
        }
        out
    }

    /// Supercommutative Fock product of two normal forms.
    pub fn fock_mul(&self, other: &Self) -> Self {
        let mut out = NormalForm { terms: BTreeMap::new(), precision: self.precision.min(other.precision) };
        for (ga, ca) in &self.terms {
            for (gb, cb) in &other.terms {
                let mut list = ga.clone();
                list.extend_from_slice(gb);
                out.add_product(list, ca.mul(cb));
            }
        }
        out
    }

    /// The even derivation `T`.
    pub fn apply_t(&self) -> Self {
        let mut out = NormalForm { terms: BTreeMap::new(), precision: self.precision };
        for (gens, c) in &self.terms {
            for i in 0..gens.len() {
                let mut list = gens.clone();
                list[i] = list[i].apply_t();
                out.add_product(list, c.clone());
            }
            for k in 1..=c.dim() {
                let dc = c.partial(k).expect("index in range");
                if dc.is_zero() && dc.precision().is_exact() {
                    continue;
                }
                let mut list = gens.clone();
                list.push(Generator::b(k as u16).apply_t());
                out.add_product(list, dc);
            }
        }
        out
    }

    /// The odd derivation `S`, with `S² = T`.
    pub fn apply_s(&self) -> Self {
        let mut out = NormalForm { terms: BTreeMap::new(), precision: self.precision };
        for (gens, c) in &self.terms {
            let mut passed = Parity::Even;
            for i in 0..gens.len() {
                let mut list = gens.clone();
                list[i] = list[i].apply_s();
                let coeff = if passed.is_odd() { c.neg() } else { c.clone() };
                out.add_product(list, coeff);
                passed = passed.add(gens[i].parity());
            }
            for k in 1..=c.dim() {
                let dc = c.partial(k).expect("index in range");
                if dc.is_zero() && dc.precision().is_exact() {
                    continue;
                }
                let mut list = gens.clone();
                list.push(Generator::b(k as u16).apply_s());
                let coeff = if passed.is_odd() { dc.neg() } else { dc };
                out.add_product(list, coeff);
            }
        }
        out
    }

    /// Largest generator index appearing, for dimension checks.
    pub fn max_index(&self) -> u16 {
        self.terms.keys().flat_map(|g| g.iter().map(|x| x.index)).max().unwrap_or(0)
    }

    /// Count of `Ψ`-type minus `B`-type factors is not tracked; this returns
    /// the maximal number of generator factors in a monomial.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(|g| g.len()).max().unwrap_or(0)
    }
}

impl Coefficient for NormalForm {
    /// Only an exactly known zero counts; an empty form with a precision
    /// caveat is kept so that the caveat survives.
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_exact()
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.add_assign(other);
    }

    fn scale(&self, s: &Scalar) -> Self {
        NormalForm::scale(self, s)
    }
}

fn push_scalar_pieces(pieces: &mut Vec<(bool, String)>, s: &Scalar, body: Option<String>) {
    for (part, imag) in [(s.re().clone(), false), (s.im().clone(), true)] {
        if num_traits::Zero::is_zero(&part) {
            continue;
        }
        let negative = num_traits::Signed::is_negative(&part);
        let mag = num_traits::Signed::abs(&part);
        let mag_s = Scalar::from_rational(mag.clone()).to_string();
        let lit = match (imag, num_traits::One::is_one(&mag)) {
            (false, _) => mag_s,
            (true, true) => "i".to_string(),
            (true, false) => format!("{mag_s}i"),
        };
        let text = match &body {
            None => lit,
            Some(b) if lit == "1" => b.clone(),
            Some(b) => format!("{lit} * {b}"),
        };
        pieces.push((negative, text));
    }
}

fn render_generators_with(gens: &[Generator], inner: Option<String>, name: &dyn Fn(&Generator) -> String) -> String {
    // Right-nested: :g1 (:g2 (... inner):):
    let mut parts: Vec<String> = gens.iter().map(name).collect();
    let mut acc = match inner {
        Some(s) => s,
        None => parts.pop().unwrap_or_else(|| "vac".to_string()),
    };
    while let Some(g) = parts.pop() {
        let wrapped = if acc.starts_with(':') { format!("({acc})") } else { acc };
        acc = format!(":{g} {wrapped}:");
    }
    acc
}

/// DSL literal for a coefficient function, e.g. `f{"2,0": "1/2"}`.
pub fn render_function(c: &CoeffFunction) -> String {
    let entries: Vec<String> = c
        .terms()
        .map(|(e, v)| format!("\"{}\": \"{}\"", e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","), v))
        .collect();
    format!("f{{{}}}", entries.join(", "))
}

impl NormalForm {
    /// Renders with custom names for generators and coefficient functions.
    pub fn render_with(&self, name: &dyn Fn(&Generator) -> String, func: &dyn Fn(&CoeffFunction) -> String) -> String {
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (gens, c) in &self.terms {
            if let Some(s) = c.as_scalar() {
                let body = if gens.is_empty() { None } else { Some(render_generators_with(gens, None, name)) };
                push_scalar_pieces(&mut pieces, &s, body);
            } else if c.precision().is_exact() {
                // Exact polynomials print as sums of coordinate monomials.
                for (e, v) in c.terms() {
                    let mut all = gens.clone();
                    for (i, &k) in e.iter().enumerate() {
                        all.extend(std::iter::repeat_n(Generator::b(i as u16 + 1), k as usize));
                    }
                    let body = if all.is_empty() { None } else { Some(render_generators_with(&all, None, name)) };
                    push_scalar_pieces(&mut pieces, v, body);
                }
            } else {
                let fs = func(c);
                let text = if gens.is_empty() { fs } else { render_generators_with(gens, Some(fs), name) };
                pieces.push((false, text));
            }
        }
        if pieces.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (neg, text)) in pieces.iter().enumerate() {
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            out.push_str(text);
        }
        out
    }
}

impl fmt::Display for NormalForm {
    /// Canonical DSL text; parsing it back gives the same normal form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|g| g.to_string(), &render_function))
    }
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalForm[{self}; {}]", self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf_gen(g: Generator) -> NormalForm {
        NormalForm::generator(2, 6, g)
    }

    #[test]
    fn coordinate_generator_is_absorbed() {
        let b = nf_gen(Generator::b(1));
        let (gens, c) = b.terms().next().unwrap();
        assert!(gens.is_empty());
        assert_eq!(*c, CoeffFunction::variable(2, 6, 1).unwrap());
    }

    #[test]
    fn s_squared_is_t() {
        let x = nf_gen(Generator::psi(1)).mul_generator(Generator::b(2).with(0, true)).mul_function(
            &CoeffFunction::variable(2, 6, 1).unwrap(),
        );
        assert_eq!(x.apply_s().apply_s(), x.apply_t());
    }

    #[test]
    fn odd_square_vanishes() {
        let p = nf_gen(Generator::psi(1));
        assert!(p.mul_generator(Generator::psi(1)).is_empty());
    }

    #[test]
    fn render_nested() {
        let x = nf_gen(Generator::psi(1))
            .mul_generator(Generator::b(1).with(0, true))
            .mul_generator(Generator::b(1).with(1, false));
        assert_eq!(x.to_string(), ":S B1 (:T B1 Psi1:):");
        assert_eq!(NormalForm::zero().to_string(), "0");
        assert_eq!(NormalForm::scalar(1, 4, Scalar::from_int(-2)).to_string(), "-2");
    }
}
