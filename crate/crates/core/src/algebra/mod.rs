//! Exact arithmetic: rationals, polynomials, linear forms, Bernoulli data.

pub mod bernoulli;
pub mod linalg;
pub mod linform;
pub mod poly;
pub mod rational;

pub use bernoulli::{bernoulli, bernoulli_eval, bernoulli_number, bernoulli_polynomial, BernoulliTable};
pub use linform::LinearForm;
pub use poly::{poly_arith, PolyOp, Polynomial};
pub use rational::{frac_part, Rational};

#[cfg(test)]
mod ring_props {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..3, 0u32..3), -5i64..6, 1i64..4), 0..4).prop_map(|ts| {
            Polynomial::from_terms(2, ts.into_iter().map(|((a, b), p, q)| (vec![a, b], rat(p, q))))
        })
    }

    proptest! {
        #[test]
        fn associativity_and_distributivity(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }
    }
}
