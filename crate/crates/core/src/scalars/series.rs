use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::scalar::Scalar;
use crate::error::{Result, ScdrError};

/// Degree through which a truncated quantity is known to be exact.
///
/// `Exact` means no information was lost anywhere; `Through(d)` certifies
/// every homogeneous component of total degree `<= d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Precision {
    Through(i32),
    Exact,
}

impl Precision {
    pub fn min(self, other: Precision) -> Precision {
        std::cmp::min(self, other)
    }

    /// Precision after `k` derivatives.
    pub fn lowered(self, k: i32) -> Precision {
        match self {
            Precision::Exact => Precision::Exact,
            Precision::Through(d) => Precision::Through(d - k),
        }
    }

    pub fn is_exact(self) -> bool {
        self == Precision::Exact
    }

    /// Whether terms of total degree `deg` are certified.
    pub fn covers(self, deg: u32) -> bool {
        match self {
            Precision::Exact => true,
            Precision::Through(d) => (deg as i64) <= d as i64,
        }
    }

    /// Degree to report: the cutoff for exact results.
    pub fn degree(self, cutoff: u32) -> i32 {
        match self {
            Precision::Exact => cutoff as i32,
            Precision::Through(d) => d.min(cutoff as i32),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => write!(f, "exact"),
            Precision::Through(d) => write!(f, "through degree {d}"),
        }
    }
}

pub type Exponent = Vec<u16>;

fn degree_of(e: &[u16]) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

/// A truncated power series `f(x_1, .., x_n)` with Gaussian-rational coefficients.
///
/// Stored terms never exceed total degree `cutoff`. The `truncated` flag is
/// sticky: once some arithmetic discarded a nonzero term it stays set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffFunction {
    dim: usize,
    cutoff: u32,
    terms: BTreeMap<Exponent, Scalar>,
    truncated: bool,
    precision: Precision,
}

impl CoeffFunction {
    pub fn zero(dim: usize, cutoff: u32) -> Self {
        CoeffFunction { dim, cutoff, terms: BTreeMap::new(), truncated: false, precision: Precision::Exact }
    }

    pub fn constant(dim: usize, cutoff: u32, c: Scalar) -> Self {
        let mut f = Self::zero(dim, cutoff);
        if !c.is_zero() {
            f.terms.insert(vec![0; dim], c);
        }
        f
    }

    pub fn one(dim: usize, cutoff: u32) -> Self {
        Self::constant(dim, cutoff, Scalar::one())
    }

    /// The coordinate function `x_i` (1-based).
    pub fn variable(dim: usize, cutoff: u32, i: usize) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(ScdrError::IndexOutOfRange { index: i, dim });
        }
        let mut e = vec![0; dim];
        e[i - 1] = 1;
        Ok(Self::monomial(dim, cutoff, e, Scalar::one()))
    }

    /// `c * x^e`; dropped (with the flag set) when `|e| > cutoff`.
    pub fn monomial(dim: usize, cutoff: u32, e: Exponent, c: Scalar) -> Self {
        Self::from_terms(dim, cutoff, [(e, c)])
    }

    /// Builds from explicit terms; terms above the cutoff are discarded and flagged.
    pub fn from_terms(dim: usize, cutoff: u32, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Self {
        let mut f = Self::zero(dim, cutoff);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must equal dimension");
            if degree_of(&e) > cutoff {
                if !c.is_zero() {
                    f.truncated = true;
                    f.precision = f.precision.min(Precision::Through(cutoff as i32));
                }
                continue;
            }
            f.add_term(e, &c);
        }
        f
    }

    fn add_term(&mut self, e: Exponent, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Caps the certified degree, e.g. for data known only as a jet.
    pub fn with_precision(mut self, p: Precision) -> Self {
        self.precision = self.precision.min(p);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u16]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.dim])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every stored term has degree 0.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| degree_of(e) == 0)
    }

    /// A genuine scalar: constant and known exactly.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.precision.is_exact() && self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Largest stored total degree, if any.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree_of(e)).max()
    }

    /// Whether all terms of degree `<= deg` vanish.
    pub fn vanishes_through(&self, deg: i32) -> bool {
        self.terms.keys().all(|e| (degree_of(e) as i64) > deg as i64)
    }

    /// Same stored terms, ignoring flags and precision.
    pub fn same_terms(&self, other: &Self) -> bool {
        self.terms == other.terms
    }

    /// Agreement of all terms of degree `<= deg`.
    pub fn agrees_through(&self, other: &Self, deg: i32) -> bool {
        self.sub(other).vanishes_through(deg)
    }

    /// Zero modulo the certified precision.
    pub fn is_zero_mod_precision(&self) -> bool {
        match self.precision {
            Precision::Exact => self.is_zero(),
            Precision::Through(d) => self.vanishes_through(d),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.cutoff != other.cutoff {
            return Err(ScdrError::Structural(format!(
                "series shapes differ: (dim {}, cutoff {}) vs (dim {}, cutoff {})",
                self.dim, self.cutoff, other.dim, other.cutoff
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out.truncated |= other.truncated;
        out.precision = self.precision.min(other.precision);
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("incompatible series")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.dim, self.cutoff);
        out.truncated = self.truncated;
        out.precision = self.precision;
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        out
    }

    /// Product truncated at the cutoff.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.dim, self.cutoff);
        let mut dropped: BTreeMap<Exponent, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = degree_of(ea);
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let prod = ca * cb;
                if da + degree_of(eb) > self.cutoff {
                    *dropped.entry(e).or_default() += &prod;
                } else {
                    out.add_term(e, &prod);
                }
            }
        }
        let lost = dropped.values().any(|c| !c.is_zero());
        out.truncated = self.truncated || other.truncated || lost;
        out.precision = self.precision.min(other.precision);
        if lost {
            out.precision = out.precision.min(Precision::Through(self.cutoff as i32));
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("incompatible series")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim, self.cutoff).with_precision(self.precision);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative in `x_i` (1-based).
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.dim {
            return Err(ScdrError::IndexOutOfRange { index: i, dim: self.dim });
        }
        let mut out = Self::zero(self.dim, self.cutoff);
        for (e, c) in &self.terms {
            let k = e[i - 1];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i - 1] -= 1;
            out.add_term(e2, &(c * &Scalar::from_int(k as i64)));
        }
        out.truncated = self.truncated;
        out.precision = self.precision.lowered(1);
        Ok(out)
    }

    /// Composition `f(s_1, .., s_n)`, truncated at the cutoff.
    ///
    /// Substitutions with a nonzero constant term are only accepted when
    /// `recenter` is set, and then only for an exactly known `f`.
    pub fn compose_with(&self, subs: &[CoeffFunction], recenter: bool) -> Result<Self> {
        if subs.len() != self.dim {
            return Err(ScdrError::Structural(format!(
                "composition needs {} substitutions, got {}",
                self.dim,
                subs.len()
            )));
        }
        let target_dim = subs.first().map(|s| s.dim).unwrap_or(self.dim);
        let target_cutoff = subs.first().map(|s| s.cutoff).unwrap_or(self.cutoff);
        for (k, s) in subs.iter().enumerate() {
            if s.dim != target_dim || s.cutoff != target_cutoff {
                return Err(ScdrError::Structural("substitutions have mismatched shapes".into()));
            }
            if !s.constant_term().is_zero() {
                if !recenter {
                    return Err(ScdrError::ConstantTerm(k + 1));
                }
                if !self.precision.is_exact() {
                    return Err(ScdrError::Precondition(
                        "recentering requires an exactly known outer function".into(),
                    ));
                }
            }
        }
        let max_pow = self.max_degree().unwrap_or(0);
        let mut powers: Vec<Vec<CoeffFunction>> = Vec::with_capacity(subs.len());
        for s in subs {
            let mut row = vec![CoeffFunction::one(target_dim, target_cutoff)];
            for k in 1..=max_pow as usize {
                let next = row[k - 1].mul(s);
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = CoeffFunction::zero(target_dim, target_cutoff);
        for (e, c) in &self.terms {
            let mut term = CoeffFunction::constant(target_dim, target_cutoff, c.clone());
            for (var, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[var][k as usize]);
                }
            }
            out = out.add(&term);
        }
        for row in &powers {
            for p in row {
                out.precision = out.precision.min(p.precision);
                out.truncated |= p.truncated;
            }
        }
        out.precision = out.precision.min(self.precision);
        out.truncated |= self.truncated;
        Ok(out)
    }

    pub fn compose(&self, subs: &[CoeffFunction]) -> Result<Self> {
        self.compose_with(subs, false)
    }

    /// Multiplicative inverse as a power series; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let c = self.constant_term();
        let cinv = c.inv().ok_or_else(|| ScdrError::Singular("series with zero constant term".into()))?;
        let u = self.scale(&cinv).sub(&Self::one(self.dim, self.cutoff));
        let mut acc = Self::one(self.dim, self.cutoff);
        let mut power = Self::one(self.dim, self.cutoff);
        let neg_u = u.neg();
        for _ in 0..self.cutoff {
            power = power.mul(&neg_u);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        let mut out = acc.scale(&cinv);
        out.precision = out.precision.min(self.precision);
        out.truncated |= self.truncated;
        if !u.is_zero() {
            out.mark_series_tail();
        }
        Ok(out)
    }

    /// `log(f / f(0))`: the logarithm normalised to vanish at the origin.
    pub fn log_normalized(&self) -> Result<Self> {
        let c = self.constant_term();
        let cinv = c.inv().ok_or_else(|| ScdrError::Singular("logarithm of series with zero constant term".into()))?;
        let u = self.scale(&cinv).sub(&Self::one(self.dim, self.cutoff));
        Ok(Self::log1p_nilpotent(&u).with_precision(self.precision))
    }

    /// `log(1 + u)` for `u` without constant term.
    fn log1p_nilpotent(u: &Self) -> Self {
        let mut acc = Self::zero(u.dim, u.cutoff);
        let mut power = Self::one(u.dim, u.cutoff);
        for k in 1..=u.cutoff {
            power = power.mul(u);
            if power.is_zero() {
                break;
            }
            let coef = Scalar::frac(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            acc = acc.add(&power.scale(&coef));
        }
        acc.precision = acc.precision.min(u.precision);
        acc.truncated |= u.truncated;
        if !u.is_zero() {
            acc.mark_series_tail();
        }
        acc
    }

    /// Records that the true value is an infinite series cut at the cutoff.
    pub(crate) fn mark_series_tail(&mut self) {
        self.truncated = true;
        self.precision = self.precision.min(Precision::Through(self.cutoff as i32));
    }

    /// Serialises as `{"e1,..,en": "p/q", ..}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.terms {
            let key = e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
            m.insert(key, Value::String(c.to_string()));
        }
        Value::Object(m)
    }

    /// Parses the JSON object form; values may be strings or integers.
    pub fn from_json(dim: usize, cutoff: u32, v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| ScdrError::Input("coefficient function must be a JSON object".into()))?;
        let mut terms = Vec::with_capacity(obj.len());
        for (key, val) in obj {
            let e = parse_exponent(key, dim)?;
            let c: Scalar = match val {
                Value::String(s) => s.parse()?,
                Value::Number(n) if n.is_i64() => Scalar::from_int(n.as_i64().unwrap()),
                other => return Err(ScdrError::Input(format!("bad coefficient value {other}"))),
            };
            terms.push((e, c));
        }
        Ok(Self::from_terms(dim, cutoff, terms))
    }
}

pub(crate) fn parse_exponent(key: &str, dim: usize) -> Result<Exponent> {
    let parts: std::result::Result<Vec<u16>, _> = key.split(',').map(|p| p.trim().parse::<u16>()).collect();
    let e = parts.map_err(|_| ScdrError::Input(format!("bad multi-index `{key}`")))?;
    if e.len() != dim {
        return Err(ScdrError::Input(format!("multi-index `{key}` has length {} but dim is {dim}", e.len())));
    }
    Ok(e)
}

impl fmt::Display for CoeffFunction {
    /// Human-readable polynomial, e.g. `1 + 1/2*x1^2 - x1*x2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by_key(|(e, _)| (degree_of(e), std::cmp::Reverse((*e).clone())));
        for (e, c) in entries {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            let cs = c.to_string();
            let (neg, body) = if c.is_real() && cs.starts_with('-') { (true, cs[1..].to_string()) } else { (false, cs) };
            let body = if !c.is_real() && !num_traits::Zero::is_zero(c.re()) { format!("({body})") } else { body };
            let text = match (vars.is_empty(), body.as_str()) {
                (true, _) => body.clone(),
                (false, "1") => vars.join("*"),
                (false, _) => format!("{}*{}", body, vars.join("*")),
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, text)?;
                first = false;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, text)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffFunction({self}; {})", self.precision)
    }
}

/// Inverse of a square matrix over `Q(i)` by Gauss-Jordan elimination.
pub fn invert_scalar_matrix(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &pinv;
            inv[col][j] = &inv[col][j] * &pinv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &factor;
                    a[r][j] -= &t;
                    let t = &inv[col][j] * &factor;
                    inv[r][j] -= &t;
                }
            }
        }
    }
    Some(inv)
}

/// Compositional inverse of a map `y = g(x)` with zero constant term and
/// invertible linear part, exact through the cutoff.
pub fn inverse_map(forward: &[CoeffFunction]) -> Result<Vec<CoeffFunction>> {
    let n = forward.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (dim, cutoff) = (forward[0].dim, forward[0].cutoff);
    if dim != n {
        return Err(ScdrError::Structural("coordinate change must be a map from n to n variables".into()));
    }
    for (k, g) in forward.iter().enumerate() {
        if g.dim != dim || g.cutoff != cutoff {
            return Err(ScdrError::Structural("coordinate change components have mismatched shapes".into()));
        }
        if !g.constant_term().is_zero() {
            return Err(ScdrError::ConstantTerm(k + 1));
        }
    }
    let unit = |j: usize| {
        let mut e = vec![0u16; dim];
        e[j] = 1;
        e
    };
    let linear: Vec<Vec<Scalar>> = forward.iter().map(|g| (0..n).map(|j| g.coefficient(&unit(j))).collect()).collect();
    let a_inv = invert_scalar_matrix(&linear).ok_or_else(|| ScdrError::Singular("linear part is not invertible".into()))?;
    let nonlinear: Vec<CoeffFunction> = forward
        .iter()
        .map(|g| {
            let lin = CoeffFunction::from_terms(dim, cutoff, (0..n).map(|j| (unit(j), g.coefficient(&unit(j)))));
            g.sub(&lin)
        })
        .collect();
    let vars: Vec<CoeffFunction> = (1..=n).map(|i| CoeffFunction::variable(dim, cutoff, i).unwrap()).collect();
    let apply_a_inv = |v: &[CoeffFunction]| -> Vec<CoeffFunction> {
        (0..n)
            .map(|i| {
                let mut acc = CoeffFunction::zero(dim, cutoff);
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&vj.scale(&a_inv[i][j]));
                }
                acc
            })
            .collect()
    };
    let mut f = apply_a_inv(&vars);
    let is_linear = nonlinear.iter().all(|p| p.is_zero());
    if !is_linear {
        for _ in 0..cutoff {
            let mut rhs = Vec::with_capacity(n);
            for i in 0..n {
                rhs.push(vars[i].sub(&nonlinear[i].compose(&f)?));
            }
            f = apply_a_inv(&rhs);
        }
        for fi in f.iter_mut() {
            fi.precision = Precision::Through(cutoff as i32);
            fi.mark_series_tail();
        }
    }
    let input_precision = forward.iter().map(|g| g.precision).min().unwrap_or(Precision::Exact);
    Ok(f.into_iter().map(|fi| fi.with_precision(input_precision)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: u32) -> CoeffFunction {
        CoeffFunction::variable(1, d, 1).unwrap()
    }

    fn one(d: u32) -> CoeffFunction {
        CoeffFunction::one(1, d)
    }

    #[test]
    fn product_examples() {
        let a = one(8).add(&x(8));
        let b = one(8).sub(&x(8));
        assert_eq!(a.mul(&b), one(8).sub(&x(8).pow(2)));
        let p = x(8).pow(4).mul(&x(8).pow(5));
        assert!(p.is_zero());
        assert!(p.truncated());
        let q = one(8).add(&x(8).pow(2));
        let r = q.mul(&one(8));
        assert_eq!(r, q);
        assert!(!r.truncated());
    }

    #[test]
    fn partial_examples() {
        let f = CoeffFunction::monomial(2, 8, vec![2, 1], Scalar::one());
        assert_eq!(f.partial(1).unwrap(), CoeffFunction::monomial(2, 8, vec![1, 1], Scalar::from_int(2)));
        assert!(CoeffFunction::one(2, 8).partial(2).unwrap().is_zero());
        assert!(f.partial(3).is_err());
    }

    #[test]
    fn compose_examples() {
        let f = x(4).pow(2);
        let s = x(4).add(&x(4).pow(2));
        let expected = CoeffFunction::from_terms(
            1,
            4,
            [(vec![2], Scalar::one()), (vec![3], Scalar::from_int(2)), (vec![4], Scalar::one())],
        );
        assert_eq!(f.compose(std::slice::from_ref(&s)).unwrap(), expected);
        assert_eq!(x(4).compose(&[x(4)]).unwrap(), x(4));
        assert!(matches!(f.compose(&[one(4)]), Err(ScdrError::ConstantTerm(1))));
    }

    #[test]
    fn recentering_exact_polynomial() {
        let f = x(4).pow(2);
        let shifted = f.compose_with(&[one(4).add(&x(4))], true).unwrap();
        assert_eq!(shifted, one(4).add(&x(4).scale(&Scalar::from_int(2))).add(&x(4).pow(2)));
        assert!(shifted.precision().is_exact());
    }

    #[test]
    fn reciprocal_and_log_precision() {
        let g = one(6).add(&x(6).pow(2));
        let inv = g.reciprocal().unwrap();
        assert_eq!(inv.precision(), Precision::Through(6));
        assert!(inv.mul(&g).same_terms(&one(6)));
        assert!(one(6).reciprocal().unwrap().precision().is_exact());
        assert!(CoeffFunction::zero(1, 6).reciprocal().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = CoeffFunction::from_terms(
            2,
            5,
            [(vec![0, 0], Scalar::one()), (vec![1, 2], "1/2-3i".parse().unwrap())],
        );
        let back = CoeffFunction::from_json(2, 5, &f.to_json()).unwrap();
        assert_eq!(back, f);
        assert!(CoeffFunction::from_json(2, 5, &serde_json::json!({"1": "1"})).is_err());
    }

    #[test]
    fn precision_ordering() {
        assert!(Precision::Through(3) < Precision::Exact);
        assert_eq!(Precision::Through(3).min(Precision::Through(1)), Precision::Through(1));
        assert_eq!(Precision::Exact.lowered(2), Precision::Exact);
        assert_eq!(Precision::Through(5).lowered(2), Precision::Through(3));
    }
}
