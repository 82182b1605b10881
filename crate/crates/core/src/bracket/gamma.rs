use std::collections::BTreeMap;
use std::fmt;

use super::engine::Bracket;
use crate::error::{Result, ScdrError};
use crate::scalars::{binomial, Coefficient, Precision, Scalar};
use crate::terms::{Algebra, FieldExpr, NormalForm, Parity};

/// `λ^j χ^J γ^k η^K`, written with `χ` to the left of `η`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaMonomial {
    pub lambda: u32,
    pub chi: bool,
    pub gamma: u32,
    pub eta: bool,
}

impl fmt::Display for GammaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.lambda {
            0 => {}
            1 => parts.push("lambda".to_string()),
            k => parts.push(format!("lambda^{k}")),
        }
        if self.chi {
            parts.push("chi".into());
        }
        match self.gamma {
            0 => {}
            1 => parts.push("gamma".to_string()),
            k => parts.push(format!("gamma^{k}")),
        }
        if self.eta {
            parts.push("eta".into());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Polynomial in two super-variables `Λ = (λ, χ)`, `Γ = (γ, η)` with
/// `χ² = −λ`, `η² = −γ` and `χη = −ηχ`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct GammaPoly {
    terms: BTreeMap<GammaMonomial, NormalForm>,
}

impl GammaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: GammaMonomial, c: NormalForm) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if Coefficient::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GammaMonomial, &NormalForm)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero through the certified degree of each coefficient.
    pub fn is_zero_mod_precision(&self) -> bool {
        self.terms.values().all(|c| c.is_zero_mod_precision())
    }

    pub fn precision(&self) -> Precision {
        self.terms.values().fold(Precision::Exact, |p, c| p.min(c.precision()))
    }
}

impl fmt::Display for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{m}*({c})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GammaPoly[{self}]")
    }
}

/// Pulling an odd parameter out of the right slot of `[x_Λ ·]` costs
/// `−(−1)^{p(x)}`; out of the left slot it always costs `−1`.
fn right_pull_negates(px: Parity) -> bool {
    !px.is_odd()
}

impl Algebra {
    /// Jacobi defect
    /// `[a_Λ[b_Γ c]] + (−1)^{p(a)}[[a_Λ b]_{Γ+Λ} c] − (−1)^{(p(a)+1)(p(b)+1)}[b_Γ[a_Λ c]]`,
    /// which vanishes identically in a SUSY vertex algebra.
    pub fn jacobi_defect(&self, a: &FieldExpr, b: &FieldExpr, c: &FieldExpr) -> Result<GammaPoly> {
        let na = self.normalize(a)?;
        let nb = self.normalize(b)?;
        let nc = self.normalize(c)?;
        for nf in [&na, &nb, &nc] {
            if !nf.is_homogeneous() {
                return Err(ScdrError::NonHomogeneous);
            }
        }
        let pa = a.parity()?.unwrap_or(Parity::Even);
        let pb = b.parity()?.unwrap_or(Parity::Even);
        Ok(self.jacobi_defect_nf(&na, &nb, &nc, pa, pb))
    }

    pub fn jacobi_defect_nf(
        &self,
        a: &NormalForm,
        b: &NormalForm,
        c: &NormalForm,
        pa: Parity,
        pb: Parity,
    ) -> GammaPoly {
        let mut out = GammaPoly::zero();

        // [a_Λ [b_Γ c]]
        let bc: Bracket = self.bracket(b, c);
        for (mg, cg) in bc.terms() {
            let inner = self.bracket(a, cg);
            for (ml, d) in inner.terms() {
                let neg = mg.chi && (right_pull_negates(pa) ^ ml.chi);
                let m = GammaMonomial { lambda: ml.lambda, chi: ml.chi, gamma: mg.lambda, eta: mg.chi };
                out.add_term(m, if neg { d.neg() } else { d.clone() });
            }
        }

        // (−1)^{p(a)} [[a_Λ b]_{Γ+Λ} c]
        let ab = self.bracket(a, b);
        for (ml, cl) in ab.terms() {
            let inner = self.bracket(cl, c);
            for (mi, d) in inner.terms() {
                let flip = pa.is_odd() ^ ml.chi;
                let d = if flip { d.neg() } else { d.clone() };
                let k = mi.lambda;
                for r in 0..=k {
                    let coef = Scalar::from_rational(binomial(k as i64, r));
                    let base = d.scale(&coef);
                    let lam = ml.lambda + k - r;
                    if !mi.chi {
                        out.add_term(GammaMonomial { lambda: lam, chi: ml.chi, gamma: r, eta: false }, base);
                        continue;
                    }
                    // ζ = η + χ sits to the right of χ^J.
                    out.add_term(GammaMonomial { lambda: lam, chi: ml.chi, gamma: r, eta: true }, base.clone());
                    if ml.chi {
                        out.add_term(GammaMonomial { lambda: lam + 1, chi: false, gamma: r, eta: false }, base.neg());
                    } else {
                        out.add_term(GammaMonomial { lambda: lam, chi: true, gamma: r, eta: false }, base);
                    }
                }
            }
        }

        // − (−1)^{(p(a)+1)(p(b)+1)} [b_Γ [a_Λ c]]
        let outer_neg = !(pa.flip().sign_with(pb.flip()));
        let ac = self.bracket(a, c);
        for (ml, cl) in ac.terms() {
            let inner = self.bracket(b, cl);
            for (mg, d) in inner.terms() {
                let neg = outer_neg ^ (ml.chi && right_pull_negates(pb));
                let m = GammaMonomial { lambda: ml.lambda, chi: ml.chi, gamma: mg.lambda, eta: mg.chi };
                out.add_term(m, if neg { d.neg() } else { d.clone() });
            }
        }
        out
    }
}
