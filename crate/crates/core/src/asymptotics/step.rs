//! Step-polynomials in a dilation parameter `t`: the algebra generated by
//! the functions `t ↦ {γ t}`.

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::rational::{format_rational, frac_part, Rational};
use crate::algebra::{bernoulli_polynomial, Polynomial};
use crate::error::{Error, Result};
use crate::polyhedra::AffineCone;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepPolynomialExpr {
    Const(Rational),
    /// `{γ t}`
    Frac(Rational),
    Add(Vec<StepPolynomialExpr>),
    Mul(Vec<StepPolynomialExpr>),
}

impl StepPolynomialExpr {
    pub fn constant(c: Rational) -> Self {
        Self::Const(c)
    }

    pub fn frac(gamma: Rational) -> Self {
        Self::Frac(gamma)
    }

    /// `p({γ t})` for a univariate polynomial `p`.
    pub fn poly_of_frac(p: &Polynomial, gamma: &Rational) -> Self {
        let mut terms = Vec::new();
        for (e, c) in p.terms() {
            let mut factors = vec![Self::Const(c.clone())];
            factors.extend((0..e[0]).map(|_| Self::Frac(gamma.clone())));
            terms.push(Self::Mul(factors));
        }
        Self::Add(terms)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        step_poly_eval(self, t)
    }
}

impl std::ops::Add for StepPolynomialExpr {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::Add(vec![self, rhs])
    }
}

impl std::ops::Sub for StepPolynomialExpr {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::Add(vec![self, Self::Mul(vec![Self::Const(-Rational::one()), rhs])])
    }
}

impl std::ops::Mul for StepPolynomialExpr {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::Mul(vec![self, rhs])
    }
}

impl fmt::Display for StepPolynomialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) => write!(f, "{}", format_rational(c)),
            Self::Frac(g) if g.is_one() => write!(f, "{{t}}"),
            Self::Frac(g) => write!(f, "{{{}*t}}", format_rational(g)),
            Self::Add(xs) if xs.is_empty() => write!(f, "0"),
            Self::Mul(xs) if xs.is_empty() => write!(f, "1"),
            Self::Add(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Self::Mul(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

pub fn step_poly_eval(e: &StepPolynomialExpr, t: &Rational) -> Rational {
    match e {
        StepPolynomialExpr::Const(c) => c.clone(),
        StepPolynomialExpr::Frac(g) => frac_part(&(g * t)),
        StepPolynomialExpr::Add(xs) => xs.iter().fold(Rational::zero(), |a, x| a + step_poly_eval(x, t)),
        StepPolynomialExpr::Mul(xs) => xs.iter().fold(Rational::one(), |a, x| a * step_poly_eval(x, t)),
    }
}

/// Symbolic `μ(t a)_[m] = c(t) η^m` for a one-dimensional affine cone
/// `a = s + ℝ_{≥0} r` in `ℚ` with the standard lattice, where `η` is the
/// dual coordinate. Returns `c` as a step-polynomial in `t`.
pub fn mu_dim1_step(a: &AffineCone, m: u32) -> Result<StepPolynomialExpr> {
    if a.dim_ambient() != 1 || a.cone.rays().len() != 1 || !a.cone.lines().is_empty() {
        return Err(Error::InvalidArgument("expected a half-line in dimension one".into()));
    }
    let s = &a.vertex[0];
    let positive = a.cone.rays()[0][0] > 0.into();
    // s + ℝ≥0: −B_{m+1}({−ts})/(m+1)! η^m; the reflected case uses {ts} and (−η)^m.
    let (gamma, sign) = if positive { (-s.clone(), Rational::one()) } else { (s.clone(), if m % 2 == 0 { Rational::one() } else { -Rational::one() }) };
    let fact = (1..=m + 1).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()));
    let b = bernoulli_polynomial(m + 1).scale(&(-sign / fact));
    Ok(StepPolynomialExpr::poly_of_frac(&b, &gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::mu::mu_at_dilation;
    use crate::hyperfrac::ScalarProduct;
    use crate::polyhedra::{Cone, QuotientLattice};
    use rand::{Rng, SeedableRng};

    fn one_minus_fracs(k: i64) -> StepPolynomialExpr {
        StepPolynomialExpr::constant(int(1)) - StepPolynomialExpr::frac(int(k)) - StepPolynomialExpr::frac(int(-k))
    }

    #[test]
    fn basic_values() {
        assert_eq!(one_minus_fracs(1).eval(&rat(1, 2)), int(0));
        assert_eq!(StepPolynomialExpr::frac(int(1)).eval(&rat(7, 3)), rat(1, 3));
    }

    #[test]
    fn product_identity_at_random_rationals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rhs = one_minus_fracs(2) * one_minus_fracs(3);
        for _ in 0..20 {
            let t = rat(rng.gen_range(-60..60), rng.gen_range(1..13));
            assert_eq!(one_minus_fracs(1).eval(&t), rhs.eval(&t), "t = {t}");
        }
    }

    #[test]
    fn symbolic_matches_renormalization() {
        let q = ScalarProduct::identity(1);
        let ql = QuotientLattice::identity(1);
        for (s, r) in [(rat(1, 3), 1), (rat(-2, 5), -1), (rat(1, 1), -1)] {
            let a = AffineCone::new(vec![s], Cone::from_int_generators(1, &[vec![r.into()]]));
            for t in [rat(1, 2), rat(3, 2), rat(7, 3), int(2)] {
                let mu = mu_at_dilation(&a, &ql, &t, &q, 3).unwrap();
                for m in 0..=3u32 {
                    let c = mu_dim1_step(&a, m).unwrap().eval(&t);
                    assert_eq!(mu.components[m as usize], Polynomial::monomial(vec![m], c));
                }
            }
        }
    }
}
