//! Brute-force free-field mode calculus.
//!
//! States are super-polynomials in creation modes `x_(-m)|0⟩`; fields of
//! monomial states are normally ordered products of `∂^k x(z) / k!`. Nothing
//! here uses Wick, skew-symmetry or quasi-associativity.

use std::collections::BTreeMap;

use scdr_core::scalars::{binomial, factorial, LambdaPoly, Scalar};
use scdr_core::terms::{GenKind, Generator, NormalForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    B,
    A,
    Phi,
    Psi,
}

/// The creation operator `x_(-mode)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: Kind,
    pub index: u16,
    pub mode: u32,
}

impl Var {
    pub fn odd(self) -> bool {
        matches!(self.kind, Kind::Phi | Kind::Psi)
    }
}

type Mono = Vec<Var>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct State(pub BTreeMap<Mono, Scalar>);

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        let mut s = State::zero();
        s.add(Vec::new(), Scalar::one());
        s
    }

    pub fn add(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add_state(&mut self, other: &State, c: &Scalar) {
        for (m, v) in &other.0 {
            self.add(m.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_mode(&self) -> u32 {
        self.0.keys().flat_map(|m| m.iter().map(|v| v.mode)).max().unwrap_or(0)
    }

    /// Left multiplication by a creation operator.
    pub fn mul_var(&self, v: Var) -> State {
        let mut out = State::zero();
        for (m, c) in &self.0 {
            let pos = m.iter().position(|w| *w >= v).unwrap_or(m.len());
            if v.odd() && m.get(pos) == Some(&v) {
                continue;
            }
            let passed_odd = m[..pos].iter().filter(|w| w.odd()).count();
            let sign = v.odd() && passed_odd % 2 == 1;
            let mut m2 = m.clone();
            m2.insert(pos, v);
            out.add(m2, c.clone().signed(sign));
        }
        out
    }

    /// Left derivative `∂/∂v`.
    pub fn deriv(&self, v: Var) -> State {
        let mut out = State::zero();
        for (m, c) in &self.0 {
            let count = m.iter().filter(|w| **w == v).count();
            if count == 0 {
                continue;
            }
            let pos = m.iter().position(|w| *w == v).unwrap();
            let passed_odd = m[..pos].iter().filter(|w| w.odd()).count();
            let sign = v.odd() && passed_odd % 2 == 1;
            let mut m2 = m.clone();
            m2.remove(pos);
            out.add(m2, (c * &Scalar::from_int(count as i64)).signed(sign));
        }
        out
    }

    /// The odd derivation `S`.
    pub fn apply_s(&self) -> State {
        self.derivation(true)
    }

    /// The even derivation `T`.
    pub fn apply_t(&self) -> State {
        self.derivation(false)
    }

    fn derivation(&self, odd: bool) -> State {
        let mut out = State::zero();
        for (m, c) in &self.0 {
            let mut passed_odd = 0usize;
            for i in 0..m.len() {
                if i > 0 && m[i] == m[i - 1] {
                    if m[i].odd() {
                        passed_odd += 1;
                    }
                    continue;
                }
                let v = m[i];
                let mult = m.iter().filter(|w| **w == v).count();
                let (nv, factor) = if odd {
                    match v.kind {
                        Kind::B => (Var { kind: Kind::Phi, ..v }, 1),
                        Kind::Phi => (Var { kind: Kind::B, mode: v.mode + 1, ..v }, v.mode as i64),
                        Kind::Psi => (Var { kind: Kind::A, ..v }, 1),
                        Kind::A => (Var { kind: Kind::Psi, mode: v.mode + 1, ..v }, v.mode as i64),
                    }
                } else {
                    (Var { mode: v.mode + 1, ..v }, v.mode as i64)
                };
                let mut rest = m.clone();
                rest.remove(i);
                // Replace in place: the prefix sign comes from odd variables before position i.
                let sign = odd && passed_odd % 2 == 1;
                let mut part = State::zero();
                part.add(rest[i..].to_vec(), Scalar::one());
                let mut part = part.mul_var(nv);
                for w in rest[..i].iter().rev() {
                    part = part.mul_var(*w);
                }
                let coef = (c * &Scalar::from_int(factor * mult as i64)).signed(sign);
                out.add_state(&part, &coef);
                if v.odd() {
                    passed_odd += 1;
                }
            }
        }
        out
    }
}

fn annihilator(v: Var, n: i64) -> (Var, bool) {
    let mode = (n + 1) as u32;
    match v.kind {
        Kind::A => (Var { kind: Kind::B, index: v.index, mode }, false),
        Kind::B => (Var { kind: Kind::A, index: v.index, mode }, true),
        Kind::Phi => (Var { kind: Kind::Psi, index: v.index, mode }, false),
        Kind::Psi => (Var { kind: Kind::Phi, index: v.index, mode }, false),
    }
}

/// `A_(n) B` for states `A`, `B`.
pub fn mode_action(a: &State, n: i64, b: &State) -> State {
    let mut out = State::zero();
    let hi = b.max_mode() as i64 - 1;
    for (mono, c) in &a.0 {
        let total: i64 = n + 1 - mono.iter().map(|v| v.mode as i64).sum::<i64>();
        let mut assign = vec![0i64; mono.len()];
        enumerate(mono, 0, total, hi, &mut assign, &mut |modes| {
            let mut coef = c.clone();
            for (v, &ni) in mono.iter().zip(modes) {
                let k = v.mode - 1;
                coef = &coef * &Scalar::from_rational(binomial(-ni - 1, k));
            }
            if coef.is_zero() {
                return;
            }
            let mut sign = false;
            for i in 0..mono.len() {
                for j in i + 1..mono.len() {
                    if modes[i] >= 0 && modes[j] < 0 && mono[i].odd() && mono[j].odd() {
                        sign = !sign;
                    }
                }
            }
            let mut st = b.clone();
            for i in (0..mono.len()).rev() {
                if modes[i] >= 0 {
                    let (target, neg) = annihilator(mono[i], modes[i]);
                    st = st.deriv(target);
                    if neg {
                        sign = !sign;
                    }
                    if st.is_zero() {
                        return;
                    }
                }
            }
            for i in (0..mono.len()).rev() {
                if modes[i] < 0 {
                    st = st.mul_var(Var { mode: (-modes[i]) as u32, ..mono[i] });
                }
            }
            out.add_state(&st, &coef.signed(sign));
        });
    }
    out
}

fn enumerate(mono: &[Var], i: usize, remaining: i64, hi: i64, assign: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    let top = hi.max(-1);
    if i + 1 == mono.len() {
        if remaining <= top || remaining < 0 {
            assign[i] = remaining;
            f(assign);
        }
        return;
    }
    if i == mono.len() {
        if remaining == 0 {
            f(assign);
        }
        return;
    }
    let left = (mono.len() - i - 1) as i64;
    for ni in (remaining - left * top)..=top {
        assign[i] = ni;
        enumerate(mono, i + 1, remaining - ni, hi, assign, f);
    }
}

fn gen_var(g: Generator) -> (Var, Scalar) {
    let kind = match (g.kind, g.s) {
        (GenKind::B, false) => Kind::B,
        (GenKind::B, true) => Kind::Phi,
        (GenKind::Psi, false) => Kind::Psi,
        (GenKind::Psi, true) => Kind::A,
    };
    (Var { kind, index: g.index, mode: g.t + 1 }, Scalar::from_rational(factorial(g.t)))
}

/// Fock state of a normal form with polynomial coefficients.
pub fn state_of(nf: &NormalForm) -> State {
    let mut out = State::zero();
    for (gens, c) in nf.terms() {
        for (e, v) in c.terms() {
            let mut st = State::vacuum();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    st = st.mul_var(Var { kind: Kind::B, index: i as u16 + 1, mode: 1 });
                }
            }
            let mut coef = v.clone();
            for g in gens.iter().rev() {
                let (var, f) = gen_var(*g);
                st = st.mul_var(var);
                coef = &coef * &f;
            }
            out.add_state(&st, &coef);
        }
    }
    out
}

/// `[A_Λ B]` via modes: `Σ_j λ^j/j! ((SA)_(j)B + χ A_(j)B)`.
pub fn lambda_bracket(a: &State, b: &State, max_j: u32) -> BTreeMap<(u32, bool), State> {
    let sa = a.apply_s();
    let mut out = BTreeMap::new();
    for j in 0..=max_j {
        let inv = Scalar::from_rational(factorial(j)).inv().unwrap();
        let even = mode_action(&sa, j as i64, b);
        let odd = mode_action(a, j as i64, b);
        let mut e = State::zero();
        e.add_state(&even, &inv);
        let mut o = State::zero();
        o.add_state(&odd, &inv);
        if !e.is_zero() {
            out.insert((j, false), e);
        }
        if !o.is_zero() {
            out.insert((j, true), o);
        }
    }
    out
}

/// Converts an engine bracket to the same shape.
pub fn bracket_states(p: &LambdaPoly<NormalForm>) -> BTreeMap<(u32, bool), State> {
    let mut out = BTreeMap::new();
    for (m, c) in p.terms() {
        let s = state_of(c);
        if !s.is_zero() {
            out.insert((m.lambda, m.chi), s);
        }
    }
    out
}

/// `:A B:` as `A_(-1) B`.
pub fn nop(a: &State, b: &State) -> State {
    mode_action(a, -1, b)
}
