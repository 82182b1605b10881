//! Seeded random expressions and the randomized axiom suite.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bracket::Bracket;
use crate::scalars::{CoeffFunction, Scalar};
use crate::superconf::StructureReport;
use crate::terms::{Algebra, FieldExpr, Generator, NormalForm, Parity};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small polynomial with integer coefficients and no terms above `max_deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, cutoff: u32, max_deg: u16) -> CoeffFunction {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let mut e = vec![0u16; dim];
        let mut left = rng.gen_range(0..=max_deg);
        while left > 0 {
            let i = rng.gen_range(0..dim);
            e[i] += 1;
            left -= 1;
        }
        terms.push((e, Scalar::from_int(rng.gen_range(-2..=2))));
    }
    CoeffFunction::from_terms(dim, cutoff, terms)
}

fn random_atom(rng: &mut ChaCha8Rng, dim: usize, cutoff: u32, parity: Parity) -> FieldExpr {
    let i = rng.gen_range(1..=dim) as u16;
    let t = if rng.gen_bool(0.25) { 1 } else { 0 };
    match parity {
        Parity::Even => match rng.gen_range(0..4) {
            0 => FieldExpr::Gen(Generator::b(i).with(t, false)),
            1 => FieldExpr::Gen(Generator::psi(i).with(t, true)),
            2 => FieldExpr::b(i),
            _ => FieldExpr::Coeff(random_poly(rng, dim, cutoff, 2)),
        },
        Parity::Odd => match rng.gen_range(0..2) {
            0 => FieldExpr::Gen(Generator::psi(i).with(t, false)),
            _ => FieldExpr::Gen(Generator::b(i).with(t, true)),
        },
    }
}

/// Random homogeneous expression of the given parity with about `size` nodes.
pub fn random_expr(rng: &mut ChaCha8Rng, dim: usize, cutoff: u32, parity: Parity, size: usize) -> FieldExpr {
    if size <= 1 {
        return random_atom(rng, dim, cutoff, parity);
    }
    match rng.gen_range(0..6) {
        0..=2 => {
            let p1 = random_parity(rng);
            let p2 = p1.add(parity);
            let left = rng.gen_range(1..size);
            FieldExpr::nop(
                random_expr(rng, dim, cutoff, p1, left),
                random_expr(rng, dim, cutoff, p2, size - left),
            )
        }
        3 => FieldExpr::s(random_expr(rng, dim, cutoff, parity.flip(), size - 1)),
        4 => FieldExpr::t(random_expr(rng, dim, cutoff, parity, size - 1)),
        _ => {
            let a = random_expr(rng, dim, cutoff, parity, size / 2);
            let b = random_expr(rng, dim, cutoff, parity, size - size / 2);
            let c = Scalar::frac(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            a + b.scaled(c)
        }
    }
}

pub fn random_parity(rng: &mut ChaCha8Rng) -> Parity {
    if rng.gen_bool(0.5) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Counts from one run of the axiom suite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomCounts {
    pub pairs: usize,
    pub triples: usize,
    pub skew_failures: usize,
    pub jacobi_failures: usize,
    pub idempotence_failures: usize,
}

impl Algebra {
    /// Skew-symmetry, the Jacobi identity and idempotence of `normalize` on
    /// `samples` random pairs and triples drawn from `seed`.
    pub fn check_axioms(&self, seed: u64, samples: usize, size: usize) -> (StructureReport, AxiomCounts) {
        let dim = self.dim();
        let cutoff = self.cutoff();
        let results: Vec<(Vec<String>, Bracket)> = std::thread::scope(|scope| {
            let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..samples)
                            .step_by(workers)
                            .map(|k| {
                                let mut r = rng(seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
                                let ps = [random_parity(&mut r), random_parity(&mut r), random_parity(&mut r)];
                                let es: Vec<FieldExpr> =
                                    ps.iter().map(|p| random_expr(&mut r, dim, cutoff, *p, size)).collect();
                                (k, self.axiom_sample(&es, ps))
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            let mut all: Vec<(usize, (Vec<String>, Bracket))> =
                handles.into_iter().flat_map(|h| h.join().expect("axiom worker panicked")).collect();
            all.sort_by_key(|(k, _)| *k);
            all.into_iter().map(|(_, v)| v).collect()
        });
        let mut rep = StructureReport::new("jacobi", cutoff);
        let mut counts = AxiomCounts { pairs: samples, triples: samples, ..Default::default() };
        for (k, (fails, residual)) in results.into_iter().enumerate() {
            for f in &fails {
                match f.as_str() {
                    "skew" => counts.skew_failures += 1,
                    "jacobi" => counts.jacobi_failures += 1,
                    _ => counts.idempotence_failures += 1,
                }
                rep.fail(format!("sample {k}: {f}"));
            }
            rep.residual.add_assign(&residual);
        }
        (rep, counts)
    }

    fn axiom_sample(&self, es: &[FieldExpr], ps: [Parity; 3]) -> (Vec<String>, Bracket) {
        let mut fails = Vec::new();
        let mut residual = Bracket::zero();
        let nf: Vec<NormalForm> = match es.iter().map(|e| self.normalize(e)).collect() {
            Ok(v) => v,
            Err(_) => return (vec!["normalize".into()], residual),
        };
        let ab = self.bracket(&nf[0], &nf[1]);
        let ba = self.bracket(&nf[1], &nf[0]);
        let skew = self.skew(&ba, ps[0], ps[1]).sub(&ab);
        if !skew.is_zero() {
            fails.push("skew".into());
            residual.add_assign(&skew);
        }
        if !self.jacobi_defect_nf(&nf[0], &nf[1], &nf[2], ps[0], ps[1]).is_zero() {
            fails.push("jacobi".into());
        }
        for n in &nf {
            match self.normalize(&self.to_expr(n)) {
                Ok(again) if again == *n => {}
                _ => fails.push("idempotence".into()),
            }
        }
        (fails, residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_respects_parity() {
        let mut r = rng(7);
        for _ in 0..50 {
            let p = random_parity(&mut r);
            let e = random_expr(&mut r, 2, 4, p, 4);
            assert!(matches!(e.parity().unwrap(), None | Some(_)));
            if let Some(q) = e.parity().unwrap() {
                assert_eq!(q, p);
            }
        }
    }

    #[test]
    fn small_axiom_run() {
        let alg = Algebra::new(2, 6);
        let (rep, counts) = alg.check_axioms(1, 20, 3);
        assert!(rep.passed(), "{rep}");
        assert_eq!(counts.pairs, 20);
    }
}
