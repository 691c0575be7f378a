//! Property tests for the exact arithmetic layer.

use loja::ball::CBall;
use loja::gcd::{divides, gcd_bivariate};
use loja::multipoly::MultiPoly;
use loja::parser::parse_poly;
use loja::rational::{rat, rat_frac, Rational};
use proptest::prelude::*;

fn poly_from(terms: &[(u8, u8, i8)]) -> MultiPoly {
    let mut p = MultiPoly::zero(&["x", "y"]);
    for &(e0, e1, c) in terms {
        if c != 0 {
            p = p
                .add(&MultiPoly::from_terms(
                    &["x", "y"],
                    [(vec![(e0 % 5) as u32, (e1 % 5) as u32], rat(c as i64))],
                ))
                .unwrap();
        }
    }
    p
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((0u8..5, 0u8..5, -9i8..=9), 0..6).prop_map(|t| poly_from(&t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_round_trips_canonical_form(p in arb_poly()) {
        let s = p.to_string();
        let q = parse_poly(&s, &["x", "y"]).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        // distributivity
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        // associativity
        let l2 = a.mul(&b).unwrap().mul(&c).unwrap();
        let r2 = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&l2, &r2);
        // additive inverse
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn gcd_divides_both(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = gcd_bivariate(&a, &b).unwrap();
        if !a.is_zero() {
            prop_assert!(divides(&g, &a));
        }
        if !b.is_zero() {
            prop_assert!(divides(&g, &b));
        }
    }

    #[test]
    fn linear_change_preserves_total_degree(p in arb_poly(), a in -3i64..=3, b in -3i64..=3) {
        prop_assume!(!p.is_zero());
        // unit lower x upper triangular: always invertible
        let m = vec![
            vec![rat(1), rat(a)],
            vec![rat(b), rat(1 + a * b)],
        ];
        let q = p.linear_change(&m).unwrap();
        prop_assert_eq!(p.degrees().total, q.degrees().total);
    }

    #[test]
    fn eval_ball_width_monotone(p in arb_poly(), k in 4u32..7) {
        let point = [
            CBall::new(rat_frac(1, 3), rat_frac(2, 7), rat_frac(1, 997)),
            CBall::new(rat_frac(-3, 5), rat_frac(1, 11), rat_frac(1, 1499)),
        ];
        let prec = 1u32 << k;
        let w1 = p.eval_ball(&point, prec).rad;
        let w2 = p.eval_ball(&point, 2 * prec).rad;
        prop_assert!(w2 <= w1);
    }

    #[test]
    fn eval_ball_contains_rational_value(p in arb_poly()) {
        // at exact rational points the enclosure is the exact value
        let x = rat_frac(3, 7);
        let y = rat_frac(-2, 5);
        let point = [
            CBall::from_rational(x.clone()),
            CBall::from_rational(y.clone()),
        ];
        let v = p.eval_ball(&point, 64);
        prop_assert!(v.is_exact());
        // compare against naive term-by-term evaluation
        let mut expect = Rational::from_integer(0.into());
        for (m, c) in p.terms() {
            let mut t = c.clone();
            for _ in 0..m.0[0] {
                t *= &x;
            }
            for _ in 0..m.0[1] {
                t *= &y;
            }
            expect += t;
        }
        prop_assert_eq!(v.re, expect);
    }
}
