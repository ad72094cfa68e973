//! Bernoulli numbers and polynomials.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::rational::{binomial, from_big, Rational};

fn cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// The Bernoulli number `b_n` (with `b_1 = -1/2`).
pub fn bernoulli_number(n: u32) -> Rational {
    let n = n as usize;
    if let Some(b) = cache().read().expect("bernoulli cache poisoned").get(n) {
        return b.clone();
    }
    let mut table = cache().write().expect("bernoulli cache poisoned");
    while table.len() <= n {
        // sum_{k=0}^{m} C(m+1, k) b_k = 0
        let m = table.len() as u32;
        let mut acc = Rational::zero();
        for (k, bk) in table.iter().enumerate() {
            acc += from_big(&binomial(m + 1, k as u32)) * bk;
        }
        let b = -acc / from_big(&binomial(m + 1, m));
        table.push(b);
    }
    table[n].clone()
}

/// `B_n(s) = sum_k C(n,k) b_k s^(n-k)` as a univariate polynomial.
pub fn bernoulli_polynomial(n: u32) -> Polynomial {
    let mut p = Polynomial::zero(1);
    for k in 0..=n {
        p.add_term(vec![n - k], from_big(&binomial(n, k)) * bernoulli_number(k));
    }
    p
}

/// `(b_n, B_n(s))`.
pub fn bernoulli(n: u32) -> (Rational, Polynomial) {
    (bernoulli_number(n), bernoulli_polynomial(n))
}

/// `B_n(x)` evaluated at a rational point.
pub fn bernoulli_eval(n: u32, x: &Rational) -> Rational {
    bernoulli_polynomial(n).eval(std::slice::from_ref(x))
}

/// Bernoulli data up to a fixed order.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    pub max_order: u32,
    pub numbers: Vec<Rational>,
    pub polynomials: Vec<Polynomial>,
}

impl BernoulliTable {
    pub fn new(max_order: u32) -> Self {
        let numbers = (0..=max_order).map(bernoulli_number).collect();
        let polynomials = (0..=max_order).map(bernoulli_polynomial).collect();
        Self { max_order, numbers, polynomials }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac_part, rat};
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        let (b2, p2) = bernoulli(2);
        assert_eq!(b2, rat(1, 6));
        assert_eq!(p2, Polynomial::from_terms(1, [(vec![2], rat(1, 1)), (vec![1], rat(-1, 1)), (vec![0], rat(1, 6))]));
        let (b1, p1) = bernoulli(1);
        assert_eq!(b1, rat(-1, 2));
        assert_eq!(p1, Polynomial::from_terms(1, [(vec![1], rat(1, 1)), (vec![0], rat(-1, 2))]));
        let (b3, p3) = bernoulli(3);
        assert_eq!(b3, rat(0, 1));
        assert_eq!(p3, Polynomial::from_terms(1, [(vec![3], rat(1, 1)), (vec![2], rat(-3, 2)), (vec![1], rat(1, 2))]));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn table_invariants() {
        let t = BernoulliTable::new(30);
        for n in 1..=30u32 {
            let s: Rational = (0..=n).map(|k| from_big(&binomial(n + 1, k)) * &t.numbers[k as usize]).sum();
            assert!(s.is_zero(), "recursion fails at {n}");
            if n >= 3 && n % 2 == 1 {
                assert!(t.numbers[n as usize].is_zero());
            }
            assert_eq!(t.polynomials[n as usize].constant_term(), t.numbers[n as usize]);
        }
    }

    #[test]
    fn frac_part_examples() {
        assert_eq!(frac_part(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac_part(&rat(-1, 4)), rat(3, 4));
        assert_eq!(frac_part(&rat(5, 1)), rat(0, 1));
    }

    proptest! {
        #[test]
        fn periodic_fractional_part(p in -500i64..500, q in 1i64..60, n in 0u32..6) {
            let x = rat(p, q);
            let shifted = &x + Rational::one();
            prop_assert_eq!(frac_part(&shifted), frac_part(&x));
            prop_assert_eq!(bernoulli_eval(n, &frac_part(&shifted)), bernoulli_eval(n, &frac_part(&x)));
        }
    }
}
