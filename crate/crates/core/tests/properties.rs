use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use qboole::padic::{fermionic_partial_sum, fermionic_partial_sum_literal, IntegerPoly};
use qboole::rational::{int, ratio};
use qboole::{Monomial, MultiPoly, Rational, TruncSeries, Var};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| ratio(a, b))
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..=6, 0u32..=6, 0u32..=6), rational()), 0..=8).prop_map(|terms| {
        let mut out = MultiPoly::zero();
        for ((x, l, q), c) in terms {
            out += MultiPoly::monomial(c, Monomial::new(x, l, q));
        }
        out
    })
}

fn point() -> impl Strategy<Value = BTreeMap<Var, Rational>> {
    (rational(), rational(), rational())
        .prop_map(|(x, l, q)| [(Var::X, x), (Var::Lambda, l), (Var::Q, q)].into_iter().collect())
}

fn integer_poly() -> impl Strategy<Value = IntegerPoly> {
    prop::collection::vec(-100i64..=100, 1..=6).prop_map(|c| IntegerPoly::from_i64(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, MultiPoly::zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
    }

    #[test]
    fn canonical_form(a in poly(), b in poly()) {
        prop_assert!(a.terms().all(|(_, c)| *c != int(0)));
        let ordered: Vec<&Monomial> = a.terms().map(|(m, _)| m).collect();
        prop_assert!(ordered.windows(2).all(|w| w[0] < w[1]));
        let sum = &a + &b;
        prop_assert_eq!(sum.render(), (&b + &a).render());
    }

    #[test]
    fn eval_is_a_homomorphism(a in poly(), b in poly(), at in point()) {
        let ea = a.eval(&at).unwrap();
        let eb = b.eval(&at).unwrap();
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), &ea + &eb);
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), &ea * &eb);
    }

    #[test]
    fn specialize_then_eval(a in poly(), at in point()) {
        let x = at[&Var::X].clone();
        prop_assert_eq!(a.specialize(Var::X, &x).eval(&at).unwrap(), a.eval(&at).unwrap());
    }

    #[test]
    fn series_inverse(
        c0 in prop::sample::select(vec![ratio(1, 1), ratio(2, 1), ratio(-1, 2)]),
        tail in prop::collection::vec(poly(), 4),
    ) {
        let mut coeffs = vec![MultiPoly::constant(c0)];
        coeffs.extend(tail);
        let s = TruncSeries::from_coeffs(coeffs);
        let product = &s * &s.inv().unwrap();
        prop_assert_eq!(product, TruncSeries::one(s.order()));
    }

    #[test]
    fn fast_sum_matches_literal(f in integer_poly(), p in prop::sample::select(vec![3u64, 5]), depth in 1u32..=4) {
        let fast = fermionic_partial_sum(&f, p, depth, depth).unwrap();
        let literal = fermionic_partial_sum_literal(&f, p, depth, depth).unwrap();
        prop_assert_eq!(fast, literal);
    }

    #[test]
    fn partial_sums_stabilize(f in integer_poly(), p in prop::sample::select(vec![3u64, 5, 7]), depth in 1u32..=5) {
        let a = fermionic_partial_sum(&f, p, depth, depth).unwrap();
        let b = fermionic_partial_sum(&f, p, depth + 2, depth).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn shift_composes(f in integer_poly(), a in -10i64..=10, b in -10i64..=10) {
        let lhs = f.shift(&BigInt::from(a)).shift(&BigInt::from(b));
        prop_assert_eq!(lhs, f.shift(&BigInt::from(a + b)));
    }
}
