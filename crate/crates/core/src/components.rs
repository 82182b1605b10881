//! Component fields of superfields and the classical λ-brackets they inherit.
//!
//! A superfield `A(z, θ) = a(z) + θ a'(z)` has bottom component the state `A`
//! and top component the state `SA`. Generators are named
//! `b^i = B^i`, `φ^i = SB^i`, `ψ^i = Ψ_i`, `a^i = SΨ_i`, and `∂` is `T`.
//! The classical bracket `[x_λ y]` of two states is the `χ`-linear part of
//! `[x_Λ y]`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bracket::{bracket_precision, Bracket};
use crate::error::{Result, ScdrError};
use crate::geometry::CoordinateChange;
use crate::scalars::{CoeffFunction, LambdaMonomial, Scalar};
use crate::superconf::StructureReport;
use crate::terms::{Algebra, FieldExpr, GenKind, Generator, NormalForm, Parity};

/// Classical name of a derived generator, e.g. `d^2 phi1`.
pub fn classical_name(g: &Generator) -> String {
    let base = match (g.kind, g.s) {
        (GenKind::B, false) => "b",
        (GenKind::B, true) => "phi",
        (GenKind::Psi, false) => "psi",
        (GenKind::Psi, true) => "a",
    };
    let d = match g.t {
        0 => String::new(),
        1 => "d ".to_string(),
        k => format!("d^{k} "),
    };
    format!("{d}{base}{}", g.index)
}

/// Renders a state as a classical field expression.
pub fn render_classical(nf: &NormalForm) -> String {
    nf.render_with(&classical_name, &|c: &CoeffFunction| {
        let text = c.to_string().replace('x', "b");
        if c.num_terms() == 1 && !text.contains(['+', '-', '/']) && !text.contains("*b") {
            text
        } else {
            format!("({text})")
        }
    })
}

/// The two components of a superfield.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentPair {
    pub bottom: NormalForm,
    pub top: NormalForm,
}

impl fmt::Display for ComponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", render_classical(&self.bottom), render_classical(&self.top))
    }
}

/// A classical λ-bracket: a polynomial in `λ` alone.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalBracket(pub Bracket);

impl ClassicalBracket {
    pub fn is_zero(&self) -> bool {
        self.0.terms().all(|(_, c)| c.is_zero_mod_precision())
    }
}

impl fmt::Display for ClassicalBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .terms()
            .map(|(m, c)| {
                let body = render_classical(c);
                match m.lambda {
                    0 => body,
                    k => {
                        let l = if k == 1 { "lambda".to_string() } else { format!("lambda^{k}") };
                        match c.as_scalar() {
                            Some(s) if s.is_one() => l,
                            Some(_) if c.terms().count() == 1 => format!("{body}*{l}"),
                            _ => format!("{l}*({body})"),
                        }
                    }
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `[b_λ a]` from `[a_λ b]`: `−(−1)^{p(a)p(b)} [a_{−λ−∂} b]`.
pub fn classical_skew(alg: &Algebra, p: &ClassicalBracket, parity_a: Parity, parity_b: Parity) -> ClassicalBracket {
    ClassicalBracket(alg.skew_poly(&p.0, parity_a, parity_b).negated())
}

/// Which superconformal algebra a decomposition targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    N1,
    N2,
    N4,
}

impl Extension {
    pub fn name(self) -> &'static str {
        match self {
            Extension::N1 => "n1",
            Extension::N2 => "n2",
            Extension::N4 => "n4",
        }
    }
}

/// Named component fields, as states, in table order.
#[derive(Clone, Debug)]
pub struct ComponentFields {
    pub kind: Extension,
    pub fields: Vec<(&'static str, NormalForm)>,
}

impl ComponentFields {
    pub fn get(&self, name: &str) -> Option<&NormalForm> {
        self.fields.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut NormalForm> {
        self.fields.iter_mut().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    fn index(&self, name: &str) -> usize {
        self.fields.iter().position(|(n, _)| *n == name).expect("field name")
    }
}

fn half(x: &NormalForm, y: &NormalForm, sign_y: Scalar) -> NormalForm {
    x.add(&y.scale(&sign_y)).scale(&Scalar::frac(1, 2))
}

impl Algebra {
    /// Bottom and top components of a homogeneous expression.
    pub fn expand(&self, a: &FieldExpr) -> Result<ComponentPair> {
        let nf = self.normalize(a)?;
        if !nf.is_homogeneous() {
            return Err(ScdrError::NonHomogeneous);
        }
        Ok(self.expand_nf(&nf))
    }

    pub fn expand_nf(&self, a: &NormalForm) -> ComponentPair {
        ComponentPair { bottom: a.clone(), top: a.apply_s() }
    }

    /// The classical λ-bracket of two states.
    pub fn classical_bracket(&self, x: &NormalForm, y: &NormalForm) -> ClassicalBracket {
        let full = self.bracket(x, y);
        let mut out = Bracket::zero();
        for (m, c) in full.terms() {
            if m.chi {
                out.add_term(LambdaMonomial::new(m.lambda, false), c.clone());
            }
        }
        ClassicalBracket(out)
    }

    /// `G = H`, `L = SH/2`.
    pub fn decompose_n1(&self, h: &NormalForm) -> ComponentFields {
        let l = h.apply_s().scale(&Scalar::frac(1, 2));
        ComponentFields { kind: Extension::N1, fields: vec![("L", l), ("G", h.clone())] }
    }

    /// Inverts `J = −i J(z) − iθ(G⁻ − G⁺)`, `H = (G⁺ + G⁻) + 2θL`.
    pub fn decompose_n2(&self, h: &NormalForm, j: &NormalForm) -> ComponentFields {
        let i = Scalar::i();
        let sj = j.apply_s().scale(&i);
        let l = h.apply_s().scale(&Scalar::frac(1, 2));
        ComponentFields {
            kind: Extension::N2,
            fields: vec![
                ("L", l),
                ("J", j.scale(&i)),
                ("G+", half(h, &sj, -Scalar::one())),
                ("G-", half(h, &sj, Scalar::one())),
            ],
        }
    }

    /// Inverts the N=4 decomposition of `(H, J⁰, J¹, J²)`.
    ///
    /// `J¹` is read as `i(J⁺ + J⁻) + iθ(Ḡ⁺ − G⁻)`.
    pub fn decompose_n4(&self, h: &NormalForm, js: [&NormalForm; 3]) -> ComponentFields {
        let i = Scalar::i();
        let l = h.apply_s().scale(&Scalar::frac(1, 2));
        let s0 = js[0].apply_s().scale(&i);
        let s1 = js[1].apply_s().scale(&i);
        let s2 = js[2].apply_s();
        let b1 = js[1].scale(&-i.clone());
        ComponentFields {
            kind: Extension::N4,
            fields: vec![
                ("L", l),
                ("J0", js[0].scale(&i)),
                ("J+", half(&b1, js[2], Scalar::one())),
                ("J-", half(&b1, js[2], -Scalar::one())),
                ("G+", half(h, &s0, -Scalar::one())),
                ("G-", half(&s2, &s1, Scalar::one())),
                ("Gbar+", half(&s2, &s1, -Scalar::one())),
                ("Gbar-", half(h, &s0, Scalar::one())),
            ],
        }
    }

    /// The tabulated brackets `[x_λ y]` for the listed ordered pairs.
    fn component_table(&self, f: &ComponentFields, c: &Scalar) -> BTreeMap<(usize, usize), ClassicalBracket> {
        let vac = self.vacuum();
        let mut table = BTreeMap::new();
        let mut put = |x: &str, y: &str, terms: Vec<(u32, NormalForm)>| {
            let mut b = Bracket::zero();
            for (k, v) in terms {
                b.add_term(LambdaMonomial::new(k, false), v);
            }
            table.insert((f.index(x), f.index(y)), ClassicalBracket(b));
        };
        let get = |n: &str| f.get(n).expect("field").clone();
        let l = get("L");
        put("L", "L", vec![(0, l.apply_t()), (1, l.scale(&Scalar::from_int(2))), (3, vac.scale(&(c * &Scalar::frac(1, 12))))]);
        let primary = |x: &NormalForm, w: Scalar| vec![(0, x.apply_t()), (1, x.scale(&w))];
        let c3 = c * &Scalar::frac(1, 3);
        let c6 = c * &Scalar::frac(1, 6);
        let three_half = Scalar::frac(3, 2);
        match f.kind {
            Extension::N1 => {
                let g = get("G");
                put("L", "G", primary(&g, three_half));
                put("G", "G", vec![(0, l.scale(&Scalar::from_int(2))), (2, vac.scale(&c3))]);
            }
            Extension::N2 => {
                let j = get("J");
                let (gp, gm) = (get("G+"), get("G-"));
                put("L", "J", primary(&j, Scalar::one()));
                put("L", "G+", primary(&gp, three_half.clone()));
                put("L", "G-", primary(&gm, three_half));
                put("J", "G+", vec![(0, gp.clone())]);
                put("J", "G-", vec![(0, gm.neg())]);
                put("J", "J", vec![(1, vac.scale(&c3))]);
                let half_tj = j.apply_t().scale(&Scalar::frac(1, 2));
                put("G+", "G-", vec![(0, l.add(&half_tj)), (1, j.clone()), (2, vac.scale(&c6))]);
                put("G+", "G+", vec![]);
                put("G-", "G-", vec![]);
            }
            Extension::N4 => {
                let j0 = get("J0");
                let (jp, jm) = (get("J+"), get("J-"));
                let (gp, gm, gbp, gbm) = (get("G+"), get("G-"), get("Gbar+"), get("Gbar-"));
                for n in ["J0", "J+", "J-"] {
                    put("L", n, primary(&get(n), Scalar::one()));
                }
                for n in ["G+", "G-", "Gbar+", "Gbar-"] {
                    put("L", n, primary(&get(n), three_half.clone()));
                }
                put("J0", "J+", vec![(0, jp.scale(&Scalar::from_int(2)))]);
                put("J0", "J-", vec![(0, jm.scale(&Scalar::from_int(-2)))]);
                put("J0", "J0", vec![(1, vac.scale(&c3))]);
                put("J+", "J-", vec![(0, j0.clone()), (1, vac.scale(&c6))]);
                put("J0", "G+", vec![(0, gp.clone())]);
                put("J0", "G-", vec![(0, gm.neg())]);
                put("J0", "Gbar+", vec![(0, gbp.clone())]);
                put("J0", "Gbar-", vec![(0, gbm.neg())]);
                put("J+", "G-", vec![(0, gp.clone())]);
                put("J-", "G+", vec![(0, gm.clone())]);
                put("J+", "Gbar-", vec![(0, gbp.neg())]);
                put("J-", "Gbar+", vec![(0, gbm.neg())]);
                put("G+", "Gbar+", primary(&jp, Scalar::from_int(2)));
                put("G-", "Gbar-", primary(&jm, Scalar::from_int(2)));
                let half_tj0 = j0.apply_t().scale(&Scalar::frac(1, 2));
                put("G+", "Gbar-", vec![(0, l.add(&half_tj0)), (1, j0.clone()), (2, vac.scale(&c6))]);
                put("G-", "Gbar+", vec![(0, l.sub(&half_tj0)), (1, j0.neg()), (2, vac.scale(&c6))]);
            }
        }
        table
    }

    /// Checks every ordered pair of component fields against the
    /// superconformal table with central charge `c`. Pairs absent from the
    /// table, in either order, must bracket to zero.
    pub fn check_component_table(&self, f: &ComponentFields, c: &Scalar) -> StructureReport {
        let table = self.component_table(f, c);
        let n = f.fields.len();
        let parities: Vec<Parity> = f.fields.iter().map(|(_, v)| self.nf_parity(v)).collect();
        let rows: Vec<Vec<(String, Bracket)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..n)
                .map(|a| {
                    let (table, parities) = (&table, &parities);
                    scope.spawn(move || {
                        (0..n)
                            .map(|b| {
                                let expected = match (table.get(&(a, b)), table.get(&(b, a))) {
                                    (Some(e), _) => e.clone(),
                                    (None, Some(e)) => classical_skew(self, e, parities[b], parities[a]),
                                    (None, None) => ClassicalBracket(Bracket::zero()),
                                };
                                let got = self.classical_bracket(&f.fields[a].1, &f.fields[b].1);
                                let label = format!("[{}_lambda {}]", f.fields[a].0, f.fields[b].0);
                                (label, got.0.sub(&expected.0))
                            })
                            .collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("table row panicked")).collect()
        });
        let mut rep = StructureReport::new(&format!("components {}", f.kind.name()), self.cutoff());
        for (label, r) in rows.into_iter().flatten() {
            rep.absorb_residual(&label, &r);
        }
        if rep.passed() {
            rep.central_charge = Some(c.clone());
        }
        rep
    }

    /// Runs the superconformal check, decomposes into components and checks
    /// the component table with the extracted central charge.
    pub fn verify_decomposition(&self, kind: Extension, h: &FieldExpr, js: &[&FieldExpr]) -> Result<StructureReport> {
        let want = match kind {
            Extension::N1 => 0,
            Extension::N2 => 1,
            Extension::N4 => 3,
        };
        if js.len() != want {
            return Err(ScdrError::Input(format!("{} needs {want} currents, got {}", kind.name(), js.len())));
        }
        let nh = self.normalize(h)?;
        let nj: Vec<NormalForm> = js.iter().map(|j| self.normalize(j)).collect::<Result<_>>()?;
        let (sup, fields) = match kind {
            Extension::N1 => (self.check_ns(h)?, self.decompose_n1(&nh)),
            Extension::N2 => (self.check_n2(h, js[0])?, self.decompose_n2(&nh, &nj[0])),
            Extension::N4 => (self.check_n4(h, [js[0], js[1], js[2]])?, self.decompose_n4(&nh, [&nj[0], &nj[1], &nj[2]])),
        };
        let mut rep = StructureReport::new(&format!("components {}", kind.name()), self.cutoff());
        rep.merge(&sup);
        let Some(c) = sup.central_charge.clone() else {
            return Ok(rep);
        };
        let table = self.check_component_table(&fields, &c);
        rep.merge(&table);
        if rep.passed() {
            rep.central_charge = Some(c);
        }
        Ok(rep)
    }

    /// Checks that the components of the transformed superfields are given by
    /// the classical transformation law:
    ///
    /// `b̃ = g(b)`, `φ̃^i = ∂_j g^i φ^j`, `ψ̃_i = M_i^j ψ_j`,
    /// `ã_i = a_j M_i^j + (∂_i ∂_l f^k)(g(b)) ∂_r g^l φ^r ψ_k`,
    /// with `M_i^j = (∂f^j/∂x̃^i)(g(b))`.
    pub fn check_transformed_components(&self, ch: &CoordinateChange) -> Result<StructureReport> {
        let n = ch.dim();
        let (bt, pt) = ch.transform_generators()?;
        let jg = ch.forward_jacobian()?;
        let m = ch.inverse_jacobian_at_source()?;
        let mut rep = StructureReport::new("components coordchange", self.cutoff());
        let coeff = |f: &CoeffFunction, e: FieldExpr| FieldExpr::nop(FieldExpr::coeff(f.clone()), e);
        let sb = |r: usize| FieldExpr::s(FieldExpr::b(r as u16 + 1));
        let psi = |k: usize| FieldExpr::psi(k as u16 + 1);
        for i in 0..n {
            let super_b = self.expand(&bt[i])?;
            let super_p = self.expand(&pt[i])?;

            let b_bottom = FieldExpr::coeff(ch.forward()[i].clone());
            let b_top = FieldExpr::sum((0..n).map(|j| (Scalar::one(), coeff(&jg[j][i], sb(j)))).collect());
            let p_bottom = FieldExpr::sum((0..n).map(|j| (Scalar::one(), coeff(&m[i][j], psi(j)))).collect());

            let mut top = Vec::new();
            for j in 0..n {
                let a = FieldExpr::s(psi(j));
                top.push((Scalar::one(), FieldExpr::nop(a, FieldExpr::coeff(m[i][j].clone()))));
            }
            for k in 0..n {
                let dk = ch.inverse()[k].partial(i + 1)?;
                for l in 0..n {
                    let second = ch.pull(&dk.partial(l + 1)?)?;
                    if second.is_zero() && second.precision().is_exact() {
                        continue;
                    }
                    for r in 0..n {
                        let w = second.mul(&jg[r][l]);
                        top.push((Scalar::one(), coeff(&w, FieldExpr::nop(sb(r), psi(k)))));
                    }
                }
            }
            let p_top = FieldExpr::sum(top);

            let idx = i + 1;
            for (label, got, want) in [
                (format!("b~{idx}"), &super_b.bottom, b_bottom),
                (format!("phi~{idx}"), &super_b.top, b_top),
                (format!("psi~{idx}"), &super_p.bottom, p_bottom),
                (format!("a~{idx}"), &super_p.top, p_top),
            ] {
                let diff = got.sub(&self.normalize(&want)?);
                rep.absorb_residual(&label, &Bracket::constant(diff));
            }
        }
        Ok(rep)
    }
}

/// Degree through which a classical bracket is certified.
pub fn classical_precision(b: &ClassicalBracket) -> crate::scalars::Precision {
    bracket_precision(&b.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_h, MetricData};

    #[test]
    fn generator_components() {
        let alg = Algebra::new(1, 4);
        assert_eq!(alg.expand(&FieldExpr::b(1)).unwrap().to_string(), "(b1, phi1)");
        assert_eq!(alg.expand(&FieldExpr::psi(1)).unwrap().to_string(), "(psi1, a1)");
    }

    #[test]
    fn free_classical_brackets() {
        let alg = Algebra::new(1, 4);
        let nf = |e: FieldExpr| alg.normalize(&e).unwrap();
        let a = nf(FieldExpr::s(FieldExpr::psi(1)));
        let b = nf(FieldExpr::b(1));
        let phi = nf(FieldExpr::s(FieldExpr::b(1)));
        let psi = nf(FieldExpr::psi(1));
        let one = ClassicalBracket(Bracket::constant(alg.vacuum()));
        assert_eq!(alg.classical_bracket(&a, &b), one);
        assert_eq!(alg.classical_bracket(&phi, &psi), one);
        assert!(alg.classical_bracket(&b, &psi).is_zero());
    }

    #[test]
    fn flat_line_gives_neveu_schwarz_table() {
        let alg = Algebra::new(1, 4);
        let h = build_h(&MetricData::flat(1, 4));
        let rep = alg.verify_decomposition(Extension::N1, &h, &[]).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.central_charge, Some(Scalar::from_int(3)));
    }
}
