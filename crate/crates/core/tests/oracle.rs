mod support;

use scdr_core::terms::{Algebra, FieldExpr, Parity};
use support::fock;

fn check_pair(alg: &Algebra, a: &FieldExpr, b: &FieldExpr) {
    let na = alg.normalize(a).unwrap();
    let nb = alg.normalize(b).unwrap();
    let engine = fock::bracket_states(&alg.bracket(&na, &nb));
    let oracle = fock::lambda_bracket(&fock::state_of(&na), &fock::state_of(&nb), 10);
    assert_eq!(engine, oracle, "bracket mismatch for [{a} _ {b}]");
    let prod = fock::state_of(&alg.nop(&na, &nb));
    let expect = fock::nop(&fock::state_of(&na), &fock::state_of(&nb));
    assert_eq!(prod, expect, "product mismatch for :{a} {b}:");
}

#[test]
fn generators_against_modes() {
    let alg = Algebra::new(2, 8);
    let atoms = [
        FieldExpr::b(1),
        FieldExpr::psi(1),
        FieldExpr::s(FieldExpr::b(1)),
        FieldExpr::s(FieldExpr::psi(2)),
        FieldExpr::t(FieldExpr::b(2)),
        FieldExpr::t(FieldExpr::psi(1)),
    ];
    for a in &atoms {
        for b in &atoms {
            check_pair(&alg, a, b);
        }
    }
}

#[test]
fn random_pairs_against_modes() {
    let alg = Algebra::new(2, 8);
    for seed in 0..150u64 {
        let mut r = support::rng(seed);
        let pa = support::random_parity(&mut r);
        let pb = support::random_parity(&mut r);
        let a = support::random_expr(&mut r, 2, 8, pa, 3);
        let b = support::random_expr(&mut r, 2, 8, pb, 3);
        check_pair(&alg, &a, &b);
    }
    let _ = Parity::Even;
}
