use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::generator::{GenKind, Generator, Parity};
use super::normal::render_function;
use crate::error::{Result, ScdrError};
use crate::scalars::{CoeffFunction, Scalar};

/// Expression tree over the free superfield algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldExpr {
    Vacuum,
    Gen(Generator),
    Coeff(CoeffFunction),
    Nop(Box<FieldExpr>, Box<FieldExpr>),
    Sum(Vec<(Scalar, FieldExpr)>),
    SDeriv(Box<FieldExpr>),
    TDeriv(Box<FieldExpr>),
}

impl FieldExpr {
    pub fn zero() -> Self {
        FieldExpr::Sum(Vec::new())
    }

    pub fn b(i: u16) -> Self {
        FieldExpr::Gen(Generator::b(i))
    }

    pub fn psi(i: u16) -> Self {
        FieldExpr::Gen(Generator::psi(i))
    }

    pub fn coeff(f: CoeffFunction) -> Self {
        FieldExpr::Coeff(f)
    }

    pub fn nop(a: FieldExpr, b: FieldExpr) -> Self {
        FieldExpr::Nop(Box::new(a), Box::new(b))
    }

    /// Left-nested chain `:e1 e2 … ek:`.
    pub fn nop_chain(items: Vec<FieldExpr>) -> Self {
        let mut it = items.into_iter();
        let first = it.next().unwrap_or(FieldExpr::Vacuum);
        it.fold(first, FieldExpr::nop)
    }

    pub fn s(e: FieldExpr) -> Self {
        FieldExpr::SDeriv(Box::new(e))
    }

    pub fn t(e: FieldExpr) -> Self {
        FieldExpr::TDeriv(Box::new(e))
    }

    pub fn scaled(self, c: Scalar) -> Self {
        FieldExpr::Sum(vec![(c, self)])
    }

    pub fn sum(items: Vec<(Scalar, FieldExpr)>) -> Self {
        FieldExpr::Sum(items)
    }

    /// Syntactically zero: an empty sum, or a sum of zero multiples / zeros.
    pub fn is_syntactic_zero(&self) -> bool {
        match self {
            FieldExpr::Sum(items) => items.iter().all(|(c, e)| c.is_zero() || e.is_syntactic_zero()),
            FieldExpr::Coeff(f) => f.is_zero(),
            FieldExpr::Nop(a, b) => a.is_syntactic_zero() || b.is_syntactic_zero(),
            FieldExpr::SDeriv(e) | FieldExpr::TDeriv(e) => e.is_syntactic_zero(),
            _ => false,
        }
    }

    /// Parity, `None` for a syntactic zero. Mixed sums are rejected.
    pub fn parity(&self) -> Result<Option<Parity>> {
        if self.is_syntactic_zero() {
            return Ok(None);
        }
        Ok(Some(match self {
            FieldExpr::Vacuum | FieldExpr::Coeff(_) => Parity::Even,
            FieldExpr::Gen(g) => g.parity(),
            FieldExpr::Nop(a, b) => {
                let pa = a.parity()?.unwrap_or(Parity::Even);
                let pb = b.parity()?.unwrap_or(Parity::Even);
                pa.add(pb)
            }
            FieldExpr::SDeriv(e) => e.parity()?.map(Parity::flip).unwrap_or(Parity::Even),
            FieldExpr::TDeriv(e) => e.parity()?.unwrap_or(Parity::Even),
            FieldExpr::Sum(items) => {
                let mut found: Option<Parity> = None;
                for (c, e) in items {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some(p) = e.parity()? {
                        match found {
                            None => found = Some(p),
                            Some(q) if q != p => return Err(ScdrError::NonHomogeneous),
                            _ => {}
                        }
                    }
                }
                return Ok(found);
            }
        }))
    }

    /// Largest coordinate index used by any generator.
    pub fn max_index(&self) -> u16 {
        match self {
            FieldExpr::Gen(g) => g.index,
            FieldExpr::Coeff(f) => f.dim() as u16,
            FieldExpr::Nop(a, b) => a.max_index().max(b.max_index()),
            FieldExpr::Sum(items) => items.iter().map(|(_, e)| e.max_index()).max().unwrap_or(0),
            FieldExpr::SDeriv(e) | FieldExpr::TDeriv(e) => e.max_index(),
            FieldExpr::Vacuum => 0,
        }
    }

    /// Number of nodes; used to bound random generators.
    pub fn size(&self) -> usize {
        match self {
            FieldExpr::Vacuum | FieldExpr::Gen(_) | FieldExpr::Coeff(_) => 1,
            FieldExpr::Nop(a, b) => 1 + a.size() + b.size(),
            FieldExpr::Sum(items) => 1 + items.iter().map(|(_, e)| e.size()).sum::<usize>(),
            FieldExpr::SDeriv(e) | FieldExpr::TDeriv(e) => 1 + e.size(),
        }
    }
}

/// Symbolic odd-Leibniz expansion of `S e`.
///
/// The result is pushed down to generators and functions; `S f(B)` becomes
/// `Σ_i :∂_i f · SB^i:`.
pub fn apply_s(e: &FieldExpr) -> Result<FieldExpr> {
    e.parity()?;
    Ok(match e {
        FieldExpr::Vacuum => FieldExpr::zero(),
        FieldExpr::Gen(g) => FieldExpr::Gen(g.apply_s()),
        FieldExpr::Coeff(f) => {
            let mut items = Vec::new();
            for i in 1..=f.dim() {
                let df = f.partial(i)?;
                if !df.is_zero() {
                    let gi = FieldExpr::Gen(Generator::b(i as u16).apply_s());
                    items.push((Scalar::one(), FieldExpr::nop(FieldExpr::Coeff(df), gi)));
                }
            }
            FieldExpr::Sum(items)
        }
        FieldExpr::Nop(a, b) => {
            let sign = if a.parity()?.unwrap_or(Parity::Even).is_odd() { -Scalar::one() } else { Scalar::one() };
            FieldExpr::Sum(vec![
                (Scalar::one(), FieldExpr::nop(apply_s(a)?, (**b).clone())),
                (sign, FieldExpr::nop((**a).clone(), apply_s(b)?)),
            ])
        }
        FieldExpr::Sum(items) => {
            FieldExpr::Sum(items.iter().map(|(c, x)| Ok((c.clone(), apply_s(x)?))).collect::<Result<_>>()?)
        }
        FieldExpr::SDeriv(x) => apply_t(x),
        FieldExpr::TDeriv(x) => apply_t(&apply_s(x)?),
    })
}

/// Symbolic even-Leibniz expansion of `T e`.
pub fn apply_t(e: &FieldExpr) -> FieldExpr {
    match e {
        FieldExpr::Vacuum => FieldExpr::zero(),
        FieldExpr::Gen(g) => FieldExpr::Gen(g.apply_t()),
        FieldExpr::Coeff(f) => {
            let mut items = Vec::new();
            for i in 1..=f.dim() {
                let df = f.partial(i).expect("index in range");
                if !df.is_zero() {
                    let gi = FieldExpr::Gen(Generator::b(i as u16).apply_t());
                    items.push((Scalar::one(), FieldExpr::nop(FieldExpr::Coeff(df), gi)));
                }
            }
            FieldExpr::Sum(items)
        }
        FieldExpr::Nop(a, b) => FieldExpr::Sum(vec![
            (Scalar::one(), FieldExpr::nop(apply_t(a), (**b).clone())),
            (Scalar::one(), FieldExpr::nop((**a).clone(), apply_t(b))),
        ]),
        FieldExpr::Sum(items) => FieldExpr::Sum(items.iter().map(|(c, x)| (c.clone(), apply_t(x))).collect()),
        FieldExpr::SDeriv(x) => match apply_s(x) {
            Ok(sx) => apply_t(&sx),
            Err(_) => FieldExpr::t(e.clone()),
        },
        FieldExpr::TDeriv(x) => apply_t(&apply_t(x)),
    }
}

impl Add for FieldExpr {
    type Output = FieldExpr;
    fn add(self, rhs: FieldExpr) -> FieldExpr {
        let mut items = match self {
            FieldExpr::Sum(v) => v,
            other => vec![(Scalar::one(), other)],
        };
        match rhs {
            FieldExpr::Sum(v) => items.extend(v),
            other => items.push((Scalar::one(), other)),
        }
        FieldExpr::Sum(items)
    }
}

impl Sub for FieldExpr {
    type Output = FieldExpr;
    fn sub(self, rhs: FieldExpr) -> FieldExpr {
        self + (-rhs)
    }
}

impl Neg for FieldExpr {
    type Output = FieldExpr;
    fn neg(self) -> FieldExpr {
        self.scaled(-Scalar::one())
    }
}

impl Mul<FieldExpr> for Scalar {
    type Output = FieldExpr;
    fn mul(self, rhs: FieldExpr) -> FieldExpr {
        rhs.scaled(self)
    }
}

fn render_scalar_factor(c: &Scalar) -> String {
    if c.is_real() || c.re().numer().sign() == num_bigint::Sign::NoSign {
        c.to_string()
    } else {
        format!("({c})")
    }
}

impl fmt::Display for FieldExpr {
    /// DSL syntax; `parse` accepts everything printed here.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldExpr::Vacuum => write!(f, "vac"),
            FieldExpr::Gen(g) => match (g.t, g.s) {
                (0, false) => write!(f, "{g}"),
                _ => {
                    let base = match g.kind {
                        GenKind::B => format!("B{}", g.index),
                        GenKind::Psi => format!("Psi{}", g.index),
                    };
                    let mut s = base;
                    if g.s {
                        s = format!("S({s})");
                    }
                    match g.t {
                        0 => {}
                        1 => s = format!("T({s})"),
                        k => s = format!("T^{k}({s})"),
                    }
                    write!(f, "{s}")
                }
            },
            FieldExpr::Coeff(c) => write!(f, "{}", render_function(c)),
            FieldExpr::Nop(a, b) => {
                let wrap = |e: &FieldExpr| -> String {
                    match e {
                        FieldExpr::Sum(_) | FieldExpr::Nop(_, _) => format!("({e})"),
                        _ => e.to_string(),
                    }
                };
                // Left-nested chains print flat.
                let mut chain = vec![b.as_ref()];
                let mut head = a.as_ref();
                while let FieldExpr::Nop(x, y) = head {
                    chain.push(y.as_ref());
                    head = x.as_ref();
                }
                chain.push(head);
                chain.reverse();
                let parts: Vec<String> = chain.iter().map(|e| wrap(e)).collect();
                write!(f, ":{}:", parts.join(" "))
            }
            FieldExpr::Sum(items) => {
                if items.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = items
                    .iter()
                    .map(|(c, e)| {
                        let inner = match e {
                            FieldExpr::Sum(_) => format!("({e})"),
                            _ => e.to_string(),
                        };
                        if c.is_one() {
                            inner
                        } else {
                            format!("{} * {}", render_scalar_factor(c), inner)
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
            FieldExpr::SDeriv(e) => write!(f, "S({e})"),
            FieldExpr::TDeriv(e) => write!(f, "T({e})"),
        }
    }
}
