mod support;

use proptest::prelude::*;

use scdr_core::bracket::bracket_is_zero;
use scdr_core::cli::dsl::parse_expr;
use scdr_core::scalars::{CoeffFunction, Scalar};
use scdr_core::terms::{Algebra, FieldExpr, Parity};
use support::fock;

const DIM: usize = 2;
const CUTOFF: u32 = 6;

fn parity(odd: bool) -> Parity {
    if odd {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn expr(seed: u64, odd: bool, size: usize) -> FieldExpr {
    let mut r = support::rng(seed);
    support::random_expr(&mut r, DIM, CUTOFF, parity(odd), size)
}

fn poly(seed: u64) -> CoeffFunction {
    let mut r = support::rng(seed);
    support::random_poly(&mut r, DIM, CUTOFF, 3)
}

fn alg() -> Algebra {
    Algebra::new(DIM, CUTOFF)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coefficient_ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (f, g, h) = (poly(a), poly(b), poly(c));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.add(&g).sub(&g), f.clone());
        prop_assert_eq!(f.mul(&CoeffFunction::one(DIM, CUTOFF)), f);
    }

    #[test]
    fn partials_commute_and_obey_leibniz(a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (poly(a), poly(b));
        let fx = f.partial(1).unwrap();
        prop_assert!(fx.partial(2).unwrap().same_terms(&f.partial(2).unwrap().partial(1).unwrap()));
        let lhs = f.mul(&g).partial(1).unwrap();
        let rhs = fx.mul(&g).add(&f.mul(&g.partial(1).unwrap()));
        prop_assert!(lhs.sub(&rhs).is_zero_mod_precision());
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>(), odd in any::<bool>()) {
        let a = alg();
        let nf = a.normalize(&expr(seed, odd, 4)).unwrap();
        prop_assert_eq!(a.normalize(&a.to_expr(&nf)).unwrap(), nf);
    }

    #[test]
    fn s_squared_is_t(seed in any::<u64>(), odd in any::<bool>()) {
        let a = alg();
        let nf = a.normalize(&expr(seed, odd, 4)).unwrap();
        prop_assert_eq!(nf.apply_s().apply_s(), nf.apply_t());
    }

    #[test]
    fn derivations_commute_with_normalize(seed in any::<u64>(), odd in any::<bool>()) {
        let a = alg();
        let e = expr(seed, odd, 4);
        let nf = a.normalize(&e).unwrap();
        prop_assert_eq!(a.normalize(&FieldExpr::s(e.clone())).unwrap(), nf.apply_s());
        prop_assert_eq!(a.normalize(&FieldExpr::t(e)).unwrap(), nf.apply_t());
    }

    #[test]
    fn s_and_t_are_derivations_of_the_product(sa in any::<u64>(), sb in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        let a = alg();
        let x = a.normalize(&expr(sa, pa, 2)).unwrap();
        let y = a.normalize(&expr(sb, pb, 2)).unwrap();
        let xy = a.nop(&x, &y);
        let t_rhs = a.nop(&x.apply_t(), &y).add(&a.nop(&x, &y.apply_t()));
        prop_assert!(xy.apply_t().sub(&t_rhs).is_zero_mod_precision());
        let sign = if pa { -Scalar::one() } else { Scalar::one() };
        let s_rhs = a.nop(&x.apply_s(), &y).add(&a.nop(&x, &y.apply_s()).scale(&sign));
        prop_assert!(xy.apply_s().sub(&s_rhs).is_zero_mod_precision());
    }

    #[test]
    fn skew_symmetry_is_an_involution(sa in any::<u64>(), sb in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        let a = alg();
        let x = a.normalize(&expr(sa, pa, 3)).unwrap();
        let y = a.normalize(&expr(sb, pb, 3)).unwrap();
        let xy = a.bracket(&x, &y);
        let yx = a.bracket(&y, &x);
        prop_assert_eq!(a.skew(&yx, parity(pa), parity(pb)), xy.clone());
        let back = a.skew(&a.skew(&xy, parity(pb), parity(pa)), parity(pa), parity(pb));
        prop_assert_eq!(back, xy);
    }

    #[test]
    fn bracket_and_product_match_modes(sa in any::<u64>(), sb in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        let a = alg();
        let x = a.normalize(&expr(sa, pa, 2)).unwrap();
        let y = a.normalize(&expr(sb, pb, 2)).unwrap();
        let (fx, fy) = (fock::state_of(&x), fock::state_of(&y));
        prop_assert_eq!(fock::bracket_states(&a.bracket(&x, &y)), fock::lambda_bracket(&fx, &fy, 8));
        prop_assert_eq!(fock::state_of(&a.nop(&x, &y)), fock::nop(&fx, &fy));
    }

    #[test]
    fn render_then_parse_round_trips(seed in any::<u64>(), odd in any::<bool>()) {
        let a = alg();
        let nf = a.normalize(&expr(seed, odd, 4)).unwrap();
        let text = nf.to_string();
        let back = a.normalize(&parse_expr(&text, DIM, CUTOFF).unwrap()).unwrap();
        prop_assert_eq!(back, nf, "rendering: {}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identity(sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>(), pa in any::<bool>(), pb in any::<bool>(), pc in any::<bool>()) {
        let a = alg();
        let x = a.normalize(&expr(sa, pa, 2)).unwrap();
        let y = a.normalize(&expr(sb, pb, 2)).unwrap();
        let z = a.normalize(&expr(sc, pc, 2)).unwrap();
        prop_assert!(a.jacobi_defect_nf(&x, &y, &z, parity(pa), parity(pb)).is_zero());
    }

    #[test]
    fn sesquilinearity(sa in any::<u64>(), sb in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        use scdr_core::bracket::{lambda_plus_t, s_plus_chi};
        let a = alg();
        let x = a.normalize(&expr(sa, pa, 2)).unwrap();
        let y = a.normalize(&expr(sb, pb, 2)).unwrap();
        // [Tx_Λ y] = -λ[x_Λ y], [x_Λ Ty] = (λ + T)[x_Λ y].
        let left = a.bracket(&x.apply_t(), &y).add(&a.bracket(&x, &y).mul_lambda(1));
        prop_assert!(bracket_is_zero(&left));
        let right = a.bracket(&x, &y.apply_t()).sub(&lambda_plus_t(&a.bracket(&x, &y)));
        prop_assert!(bracket_is_zero(&right));
        // [Sx_Λ y] = χ[x_Λ y], [x_Λ Sy] = (-1)^{p(x)+1}(S + χ)[x_Λ y].
        let sx = a.bracket(&x.apply_s(), &y).sub(&a.bracket(&x, &y).mul_chi());
        prop_assert!(bracket_is_zero(&sx));
        let sign = if pa { Scalar::one() } else { -Scalar::one() };
        let sy = a.bracket(&x, &y.apply_s()).sub(&s_plus_chi(&a.bracket(&x, &y)).scale(&sign));
        prop_assert!(bracket_is_zero(&sy));
    }
}

#[test]
fn product_of_normal_forms_matches_normalize() {
    let a = alg();
    let gens = [FieldExpr::b(1), FieldExpr::psi(2), FieldExpr::s(FieldExpr::b(2)), FieldExpr::t(FieldExpr::psi(1))];
    for x in &gens {
        for y in &gens {
            let direct = a.normalize(&FieldExpr::nop(x.clone(), y.clone())).unwrap();
            let via = a.nop(&a.normalize(x).unwrap(), &a.normalize(y).unwrap());
            assert_eq!(direct, via, ":{x} {y}:");
        }
    }
}
