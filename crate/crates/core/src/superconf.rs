//! Neveu–Schwarz, N=2 and N=4 relation checkers.
//!
//! Every checker computes the relevant Λ-brackets, subtracts the required
//! right-hand side and reads the central charge off the vacuum coefficient
//! of what remains.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bracket::{bracket_precision, Bracket};
use crate::error::{Result, ScdrError};
use crate::scalars::{LambdaMonomial, Precision, Scalar};
use crate::terms::{Algebra, FieldExpr, NormalForm, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of a structure check.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub name: String,
    pub verdict: Verdict,
    pub central_charge: Option<Scalar>,
    /// Left over after subtracting the required relation; empty on a pass.
    pub residual: Bracket,
    pub precision: Precision,
    pub cutoff: u32,
    /// Names of failed sub-relations.
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Degree through which the verdict is certified.
    pub fn guaranteed_degree(&self) -> i32 {
        self.precision.degree(self.cutoff)
    }

    pub fn residual_rendering(&self) -> String {
        self.residual.to_string()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "verdict": self.verdict,
            "central_charge": self.central_charge.as_ref().map(|c| c.to_string()),
            "guaranteed_degree": self.guaranteed_degree(),
            "exact": self.precision.is_exact(),
            "residual_rendering": self.residual_rendering(),
            "failures": self.failures,
        })
    }

    pub(crate) fn new(name: &str, cutoff: u32) -> Self {
        StructureReport {
            name: name.to_string(),
            verdict: Verdict::Pass,
            central_charge: None,
            residual: Bracket::zero(),
            precision: Precision::Exact,
            cutoff,
            failures: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, what: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.failures.push(what.into());
    }

    pub(crate) fn absorb_residual(&mut self, label: &str, r: &Bracket) {
        self.precision = self.precision.min(bracket_precision(r));
        if !r.terms().all(|(_, c)| c.is_zero_mod_precision()) {
            self.fail(label);
            self.residual.add_assign(&drop_certified_zeros(r));
        }
    }

    /// Folds a sub-report into this one.
    pub(crate) fn merge(&mut self, sub: &StructureReport) {
        self.precision = self.precision.min(sub.precision);
        if !sub.passed() {
            self.verdict = Verdict::Fail;
            for f in &sub.failures {
                self.failures.push(format!("{}: {}", sub.name, f));
            }
            self.residual.add_assign(&sub.residual);
        }
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        };
        write!(f, "{}: {verdict}", self.name)?;
        if let Some(c) = &self.central_charge {
            write!(f, ", c = {c}")?;
        }
        if self.precision.is_exact() {
            write!(f, ", exact")?;
        } else {
            write!(f, ", guaranteed through degree {}", self.guaranteed_degree())?;
        }
        for fl in &self.failures {
            write!(f, "\n  failed: {fl}")?;
        }
        if !self.residual.is_zero() {
            write!(f, "\n  residual: {}", self.residual)?;
        }
        Ok(())
    }
}

fn drop_certified_zeros(r: &Bracket) -> Bracket {
    let mut out = Bracket::zero();
    for (m, c) in r.terms() {
        if !c.is_zero_mod_precision() {
            out.add_term(*m, c.clone());
        }
    }
    out
}

/// The constant `k` if `nf = k|0⟩` through its certified degree.
pub fn central_value(nf: &NormalForm) -> Option<Scalar> {
    if !nf.precision().covers(0) {
        return None;
    }
    if nf.is_empty() {
        return Some(Scalar::zero());
    }
    let k = nf
        .terms()
        .find(|(g, _)| g.is_empty())
        .map(|(_, c)| c.constant_term())
        .unwrap_or_else(Scalar::zero);
    let dim = nf.terms().next().map(|(_, c)| c.dim())?;
    let cutoff = nf.terms().next().map(|(_, c)| c.cutoff())?;
    let rest = nf.sub(&NormalForm::scalar(dim, cutoff, k.clone()));
    rest.is_zero_mod_precision().then_some(k)
}

/// Splits off a central term at monomial `m`: returns the constant and the
/// remainder with that constant removed.
fn extract_central(alg: &Algebra, r: &Bracket, m: LambdaMonomial) -> (Scalar, Bracket) {
    let k = r.coefficient(m.lambda, m.chi).and_then(central_value).unwrap_or_else(Scalar::zero);
    let rest = r.sub(&Bracket::monomial(m, alg.scalar_nf(k.clone())));
    (k, rest)
}

fn require(alg: &Algebra, e: &FieldExpr, want: Parity, what: &str) -> Result<NormalForm> {
    let nf = alg.normalize(e)?;
    match alg.parity_of(&nf)? {
        Some(p) if p != want => Err(ScdrError::Precondition(format!(
            "{what} must be {}",
            if want.is_odd() { "odd" } else { "even" }
        ))),
        _ => Ok(nf),
    }
}

/// `(2T + χS + 3λ) H`.
pub fn ns_rhs(h: &NormalForm) -> Bracket {
    let mut out = Bracket::zero();
    out.add_term(LambdaMonomial::ONE, h.apply_t().scale(&Scalar::from_int(2)));
    out.add_term(LambdaMonomial::new(0, true), h.apply_s());
    out.add_term(LambdaMonomial::new(1, false), h.scale(&Scalar::from_int(3)));
    out
}

/// `(2T + 2λ + χS) J`.
pub fn primary_weight_one_rhs(j: &NormalForm) -> Bracket {
    let mut out = Bracket::zero();
    out.add_term(LambdaMonomial::ONE, j.apply_t().scale(&Scalar::from_int(2)));
    out.add_term(LambdaMonomial::new(1, false), j.scale(&Scalar::from_int(2)));
    out.add_term(LambdaMonomial::new(0, true), j.apply_s());
    out
}

/// `(S + 2χ) J`.
pub fn su2_rhs(j: &NormalForm) -> Bracket {
    let mut out = Bracket::constant(j.apply_s());
    out.add_term(LambdaMonomial::new(0, true), j.scale(&Scalar::from_int(2)));
    out
}

impl Algebra {
    /// Checks `[H_Λ H] = (2T + χS + 3λ)H + (c/3)χλ²` and extracts `c`.
    pub fn check_ns(&self, h: &FieldExpr) -> Result<StructureReport> {
        let nh = require(self, h, Parity::Odd, "H")?;
        Ok(self.check_ns_nf(&nh))
    }

    pub fn check_ns_nf(&self, h: &NormalForm) -> StructureReport {
        let mut rep = StructureReport::new("ns", self.cutoff());
        let r = self.bracket(h, h).sub(&ns_rhs(h));
        let (k, rest) = extract_central(self, &r, LambdaMonomial::new(2, true));
        rep.absorb_residual("[H_L H] = (2T + chi S + 3 lambda) H + (c/3) chi lambda^2", &rest);
        if rep.passed() {
            rep.central_charge = Some(&k * &Scalar::from_int(3));
        }
        rep
    }

    /// Checks the N=2 relations for `(H, J)` and cross-checks `c` against
    /// the Neveu–Schwarz extraction.
    pub fn check_n2(&self, h: &FieldExpr, j: &FieldExpr) -> Result<StructureReport> {
        let nh = require(self, h, Parity::Odd, "H")?;
        let nj = require(self, j, Parity::Even, "J")?;
        Ok(self.check_n2_nf(&nh, &nj))
    }

    pub fn check_n2_nf(&self, h: &NormalForm, j: &NormalForm) -> StructureReport {
        let ns = self.check_ns_nf(h);
        let mut rep = StructureReport::new("n2", self.cutoff());
        rep.merge(&ns);

        let r1 = self.bracket(h, j).sub(&primary_weight_one_rhs(j));
        rep.absorb_residual("[H_L J] = (2T + 2 lambda + chi S) J", &r1);

        let r2 = self.bracket(j, j).add(&Bracket::constant(h.clone()));
        let (k, rest) = extract_central(self, &r2, LambdaMonomial::new(1, true));
        rep.absorb_residual("[J_L J] = -(H + (c/3) lambda chi)", &rest);

        let c = &k * &Scalar::from_int(-3);
        if rep.passed() {
            if ns.central_charge.as_ref() != Some(&c) {
                rep.fail(format!(
                    "central charges disagree: {} from [H_L H], {c} from [J_L J]",
                    ns.central_charge.map(|x| x.to_string()).unwrap_or_else(|| "none".into())
                ));
            } else {
                rep.central_charge = Some(c);
            }
        }
        rep
    }

    /// Checks the N=4 relations for `H` and the `su(2)` triple `J^0, J^1, J^2`.
    pub fn check_n4(&self, h: &FieldExpr, js: [&FieldExpr; 3]) -> Result<StructureReport> {
        let nh = require(self, h, Parity::Odd, "H")?;
        let mut nj = Vec::with_capacity(3);
        for (i, j) in js.iter().enumerate() {
            nj.push(require(self, j, Parity::Even, &format!("J{i}"))?);
        }
        Ok(self.check_n4_nf(&nh, [&nj[0], &nj[1], &nj[2]]))
    }

    pub fn check_n4_nf(&self, h: &NormalForm, js: [&NormalForm; 3]) -> StructureReport {
        let subs: Vec<StructureReport> = std::thread::scope(|scope| {
            let handles: Vec<_> = js.iter().map(|j| scope.spawn(move || self.check_n2_nf(h, j))).collect();
            handles.into_iter().map(|hd| hd.join().expect("N=2 sub-check panicked")).collect()
        });
        let mut rep = StructureReport::new("n4", self.cutoff());
        let mut charges = Vec::new();
        for (i, sub) in subs.iter().enumerate() {
            let mut named = sub.clone();
            named.name = format!("n2(H, J{i})");
            rep.merge(&named);
            charges.push(sub.central_charge.clone());
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let k = 3 - i - j;
                let cyclic = (j + 3 - i) % 3 == 1;
                let rhs = su2_rhs(js[k]);
                let rhs = if cyclic { rhs } else { rhs.negated() };
                let r = self.bracket(js[i], js[j]).sub(&rhs);
                rep.absorb_residual(&format!("[J{i}_L J{j}] = eps (S + 2 chi) J{k}"), &r);
            }
        }
        if rep.passed() {
            if charges.windows(2).all(|w| w[0] == w[1]) {
                rep.central_charge = charges[0].clone();
            } else {
                rep.fail("central charges of the three N=2 pairs disagree");
            }
        }
        rep
    }
}
