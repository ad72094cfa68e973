//! The one-dimensional Euler–Maclaurin formula with exact remainder for a
//! polynomial on a window `[s, M]`, scaled by a rational parameter `t`.

use num_traits::{One, Zero};

use crate::algebra::rational::{frac_part, Rational};
use crate::algebra::{bernoulli_eval, bernoulli_polynomial, Polynomial};
use crate::error::{Error, Result};

/// Both sides of
/// `(1/t) Σ_{ts ≤ x ≤ tM} h(x/t) = ∫_s^M h − Σ_{k<n} t^{-k}/k! [B_k({−ts}) h^{(k−1)}(s) − B_k(1−{tM}) h^{(k−1)}(M)] + t^{-n} R_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dim1Expansion {
    /// `(1/t) Σ h(x/t)` by direct enumeration.
    pub riemann_sum: Rational,
    /// The terms of order `k < n`.
    pub expansion: Rational,
    /// Everything of order `t^{-n}`, including the closed-form integral.
    pub remainder: Rational,
}

/// `h` is a univariate polynomial, `s ≤ M`, `t > 0`, `n ≥ 1`.
pub fn dim1_euler_maclaurin(s: &Rational, m_end: &Rational, h: &Polynomial, t: &Rational, n: u32) -> Result<Dim1Expansion> {
    if n < 1 {
        return Err(Error::InvalidArgument("order n must be at least 1".into()));
    }
    if h.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: h.dim() });
    }
    if *t <= Rational::zero() {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    if s > m_end {
        return Err(Error::InvalidArgument("window must satisfy s <= M".into()));
    }
    let a = s * t;
    let b = m_end * t;
    let mut riemann = Rational::zero();
    let mut x = a.ceil();
    while x <= b {
        riemann += h.eval(&[&x / t]);
        x += Rational::one();
    }
    riemann /= t;

    let c_lo = frac_part(&-a.clone());
    let c_hi = Rational::one() - frac_part(&b);
    let antider = integrate_poly(h);
    let mut expansion = antider.eval(&[m_end.clone()]) - antider.eval(&[s.clone()]);
    let mut deriv = h.clone();
    let mut tk = Rational::one();
    let mut fact = Rational::one();
    let mut boundary_n = Rational::zero();
    for k in 1..=n {
        tk /= t;
        fact *= Rational::from_integer(k.into());
        let term = (bernoulli_eval(k, &c_lo) * deriv.eval(&[s.clone()]) - bernoulli_eval(k, &c_hi) * deriv.eval(&[m_end.clone()])) / &fact;
        if k < n {
            expansion -= &tk * term;
        } else {
            boundary_n = term;
        }
        deriv = deriv.derivative(0);
    }
    // deriv is now h^{(n)}
    let integral = periodic_integral(n, &deriv, t, &a, &b) / &fact;
    let remainder = -(tk * (boundary_n + integral));
    Ok(Dim1Expansion { riemann_sum: riemann, expansion, remainder })
}

fn integrate_poly(h: &Polynomial) -> Polynomial {
    Polynomial::from_terms(1, h.terms().map(|(e, c)| (vec![e[0] + 1], c / Rational::from_integer((e[0] + 1).into()))))
}

/// `∫_s^M B_n({−t y}) g(y) dy`, split at the points where `t y` is an integer.
fn periodic_integral(n: u32, g: &Polynomial, t: &Rational, a: &Rational, b: &Rational) -> Rational {
    if g.is_zero() || a == b {
        return Rational::zero();
    }
    // In u = t y on (j, j+1): {−u} = j + 1 − u, dy = du / t.
    let bn = bernoulli_polynomial(n);
    let g_u = g.substitute_linear(&[vec![Rational::one() / t]], 1);
    let mut acc = Rational::zero();
    let mut lo = a.clone();
    while lo < *b {
        let j = lo.floor();
        let hi = (&j + Rational::one()).min(b.clone());
        // B_n(j + 1 − u) as a polynomial in u
        let shifted = bn.substitute_affine(&[&j + Rational::one()], &[vec![-Rational::one()]], 1);
        let prim = integrate_poly(&(&shifted * &g_u));
        acc += prim.eval(&[hi.clone()]) - prim.eval(&[lo.clone()]);
        lo = hi;
    }
    acc / t
}
