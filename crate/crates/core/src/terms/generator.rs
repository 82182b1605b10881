use std::fmt;

use serde::{Deserialize, Serialize};

/// Grassmann parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// True when `(-1)^{p q}` is `-1`.
    pub fn sign_with(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }

    pub fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    B,
    Psi,
}

/// A derived generator `T^t S^s X` with `X = B^index` or `Ψ_index`.
///
/// The derived ordering (kind, index, t, s) is the canonical PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub kind: GenKind,
    pub index: u16,
    pub t: u32,
    pub s: bool,
}

impl Generator {
    pub fn b(index: u16) -> Self {
        Generator { kind: GenKind::B, index, t: 0, s: false }
    }

    pub fn psi(index: u16) -> Self {
        Generator { kind: GenKind::Psi, index, t: 0, s: false }
    }

    pub fn with(self, t: u32, s: bool) -> Self {
        Generator { t, s, ..self }
    }

    pub fn parity(self) -> Parity {
        let base_odd = self.kind == GenKind::Psi;
        Parity::from_odd(base_odd ^ self.s)
    }

    pub fn apply_s(self) -> Self {
        if self.s {
            Generator { t: self.t + 1, s: false, ..self }
        } else {
            Generator { s: true, ..self }
        }
    }

    pub fn apply_t(self) -> Self {
        Generator { t: self.t + 1, ..self }
    }

    /// Underived `B^i`, which is absorbed into coefficient functions.
    pub fn is_coordinate(self) -> bool {
        self.kind == GenKind::B && self.t == 0 && !self.s
    }

    /// Number of `S` applications: `2t + s`.
    pub fn weight(self) -> u32 {
        2 * self.t + self.s as u32
    }

    pub fn underived(self) -> Self {
        Generator { t: 0, s: false, ..self }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t {
            0 => {}
            1 => write!(f, "T ")?,
            k => write!(f, "T^{k} ")?,
        }
        if self.s {
            write!(f, "S ")?;
        }
        match self.kind {
            GenKind::B => write!(f, "B{}", self.index),
            GenKind::Psi => write!(f, "Psi{}", self.index),
        }
    }
}

/// Sorts a product of generators into canonical order.
///
/// Returns the sign of the permutation restricted to odd factors, or `None`
/// if an odd factor repeats (the product vanishes).
pub fn sort_with_sign(mut gens: Vec<Generator>) -> Option<(bool, Vec<Generator>)> {
    let mut negate = false;
    // Insertion sort: inputs are short and usually nearly sorted.
    for i in 1..gens.len() {
        let mut j = i;
        while j > 0 && gens[j - 1] > gens[j] {
            if gens[j - 1].parity().is_odd() && gens[j].parity().is_odd() {
                negate = !negate;
            }
            gens.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in gens.windows(2) {
        if w[0] == w[1] && w[0].parity().is_odd() {
            return None;
        }
    }
    Some((negate, gens))
}

/// Total parity of a list of generators.
pub fn parity_of(gens: &[Generator]) -> Parity {
    gens.iter().fold(Parity::Even, |p, g| p.add(g.parity()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_squares_to_t() {
        let b = Generator::b(1);
        assert_eq!(b.apply_s().apply_s(), b.apply_t());
        assert_eq!(b.apply_s().parity(), Parity::Odd);
        assert_eq!(Generator::psi(2).apply_s().parity(), Parity::Even);
    }

    #[test]
    fn canonical_order() {
        let mut v = [Generator::psi(1), Generator::b(2).with(1, false), Generator::b(1).with(0, true)];
        v.sort();
        assert_eq!(v[0], Generator::b(1).with(0, true));
        assert_eq!(v[2], Generator::psi(1));
    }

    #[test]
    fn odd_sort_sign() {
        let a = Generator::psi(1);
        let b = Generator::psi(2);
        assert_eq!(sort_with_sign(vec![b, a]), Some((true, vec![a, b])));
        assert_eq!(sort_with_sign(vec![a, a]), None);
        let e = Generator::b(1).with(1, false);
        assert_eq!(sort_with_sign(vec![b, e, a]), Some((true, vec![e, a, b])));
    }

    #[test]
    fn rendering() {
        assert_eq!(Generator::b(1).with(2, true).to_string(), "T^2 S B1");
        assert_eq!(Generator::psi(3).with(1, false).to_string(), "T Psi3");
    }
}
