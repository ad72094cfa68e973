//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{factorial, format_rational, from_big, int, parse_rational, to_f64, QVec, Rational};
use crate::error::{Error, Result};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// Polynomial in `dim` variables stored as a map from exponent vectors to
/// nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(vec![0; dim], c)
    }

    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let dim = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { dim, terms }
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    /// `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let dim = coeffs.len();
        let mut p = Self::zero(dim);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; dim];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(dim: usize, terms: I) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must equal dim");
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.dim])
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == k)
    }

    pub fn homogeneous_part(&self, k: u32) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Product truncated to total degree `max_degree`.
    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            if d1 > max_degree {
                continue;
            }
            for (e2, c2) in &other.terms {
                let d2: u32 = e2.iter().sum();
                if d1 + d2 > max_degree {
                    continue;
                }
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.dim);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = to_f64(c);
                for (xi, &k) in x.iter().zip(e) {
                    t *= xi.powi(k as i32);
                }
                t
            })
            .sum()
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * int(e[i] as i64));
            }
        }
        out
    }

    /// Derivative along the direction `dir`.
    pub fn directional_derivative(&self, dir: &[Rational]) -> Self {
        let mut out = Self::zero(self.dim);
        for (i, d) in dir.iter().enumerate() {
            if !d.is_zero() {
                out = &out + &self.derivative(i).scale(d);
            }
        }
        out
    }

    /// Applies `∂^alpha`.
    pub fn partial(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                out = out.derivative(i);
            }
        }
        out
    }

    /// Reads `self` as a constant-coefficient differential operator
    /// (`x_i -> ∂/∂x_i`) and applies it to `h`.
    pub fn apply_as_operator(&self, h: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, h.dim);
        let mut out = Self::zero(h.dim);
        for (e, c) in &self.terms {
            out = &out + &h.partial(e).scale(c);
        }
        out
    }

    /// Substitutes `x_i = sum_j rows[i][j] * z_j`, producing a polynomial in
    /// `new_dim` variables `z`.
    pub fn substitute_linear(&self, rows: &[QVec], new_dim: usize) -> Self {
        assert_eq!(rows.len(), self.dim);
        let max_deg = self.degree().unwrap_or(0) as usize;
        let forms: Vec<Polynomial> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), new_dim);
                Polynomial::linear(r)
            })
            .collect();
        // powers[i][k] = (row_i . z)^k, filled on demand
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(new_dim)]; self.dim];
        let mut out = Self::zero(new_dim);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(new_dim, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &forms[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        debug_assert!(out.degree().unwrap_or(0) as usize <= max_deg);
        out
    }

    /// Affine substitution `x_i = offset_i + sum_j rows[i][j] z_j`.
    pub fn substitute_affine(&self, offset: &[Rational], rows: &[QVec], new_dim: usize) -> Self {
        let mut ext_rows: Vec<QVec> = Vec::with_capacity(self.dim);
        for (i, r) in rows.iter().enumerate() {
            let mut row = r.clone();
            row.push(offset[i].clone());
            ext_rows.push(row);
        }
        // homogenize with an extra variable set to one afterwards
        let p = self.substitute_linear(&ext_rows, new_dim + 1);
        let mut out = Self::zero(new_dim);
        for (e, c) in &p.terms {
            out.add_term(e[..new_dim].to_vec(), c.clone());
        }
        out
    }

    /// Restriction to the subspace spanned by `basis`: the polynomial in
    /// `t` obtained by substituting `x = sum_i t_i basis_i`.
    pub fn restrict_to_subspace(&self, basis: &[QVec]) -> Result<Self> {
        for b in basis {
            if b.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: b.len() });
            }
        }
        if super::linalg::rank(basis) < basis.len() {
            return Err(Error::DependentVectors);
        }
        let k = basis.len();
        let rows: Vec<QVec> = (0..self.dim).map(|i| (0..k).map(|j| basis[j][i].clone()).collect()).collect();
        Ok(self.substitute_linear(&rows, k))
    }

    /// Exact division by the linear form `sum_i form[i] x_i`; `None` if not divisible.
    pub fn div_linear(&self, form: &[Rational]) -> Option<Self> {
        assert_eq!(form.len(), self.dim);
        let i = form.iter().position(|c| !c.is_zero())?;
        if self.is_zero() {
            return Some(self.clone());
        }
        // Long division treating x_i as the main variable.
        let lead = form[i].clone();
        let rest: Vec<(usize, Rational)> =
            form.iter().enumerate().filter(|(j, c)| *j != i && !c.is_zero()).map(|(j, c)| (j, c.clone())).collect();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.dim);
        loop {
            // highest power of x_i in the remainder
            let top = match rem.terms.keys().map(|e| e[i]).max() {
                Some(t) => t,
                None => return Some(quot),
            };
            if top == 0 {
                return None;
            }
            let top_terms: Vec<(Exponent, Rational)> =
                rem.terms.iter().filter(|(e, _)| e[i] == top).map(|(e, c)| (e.clone(), c.clone())).collect();
            for (e, c) in top_terms {
                let mut qe = e.clone();
                qe[i] -= 1;
                let qc = &c / &lead;
                // subtract qc * x^qe * form
                rem.add_term(e, -c);
                for (j, fj) in &rest {
                    let mut te = qe.clone();
                    te[*j] += 1;
                    rem.add_term(te, -(&qc * fj));
                }
                quot.add_term(qe, qc);
            }
        }
    }

    /// Integral of the monomial expansion over the standard simplex
    /// `{x >= 0, sum x <= 1}`.
    pub fn integrate_standard_simplex(&self) -> Rational {
        let k = self.dim as u32;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let num = e.iter().fold(num_bigint::BigInt::one(), |a, &ai| a * factorial(ai));
            let den = factorial(k + e.iter().sum::<u32>());
            acc += c * Rational::new(num, den);
        }
        acc
    }

    /// Appends `extra` new variables (all with exponent zero).
    pub fn extend_dim(&self, extra: usize) -> Self {
        Self {
            dim: self.dim + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f.extend(std::iter::repeat(0).take(extra));
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Human-readable form such as `1/2*x1^2*x2 - x3 + 1`.
    pub fn to_string_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest degree first, lexicographic inside a degree
        let mut items: Vec<(&Exponent, &Rational)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in items.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("{var}{}", i + 1) } else { format!("{var}{}^{k}", i + 1) })
                .collect();
            if mono.is_empty() {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format_rational(&mag));
                out.push('*');
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    /// Parses the mini-grammar `c*x1^a*x2^b + ... - ...` with coefficients
    /// written `p/q`. The literal `one` denotes the constant 1.
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let s = s.trim();
        if s == "one" {
            return Ok(Self::one(dim));
        }
        let bad = |msg: &str| Error::Parse(format!("polynomial `{s}`: {msg}"));
        let mut out = Self::zero(dim);
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(bad("empty"));
        }
        // split into signed terms at top-level +/- (not following '^' or '/')
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (idx, &ch) in chars.iter().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !matches!(chars[idx - 1], '^' | '/' | '*') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && idx == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coeff = Rational::one();
            let mut exp = vec![0u32; dim];
            for factor in t.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                    if i == 0 || i > dim {
                        return Err(bad(&format!("variable x{i} out of range 1..={dim}")));
                    }
                    exp[i - 1] += pow;
                } else {
                    coeff *= parse_rational(factor).map_err(|_| bad(&format!("bad coefficient `{factor}`")))?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(exp, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("x"))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.dim, self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(&-rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOp {
    Add,
    Mul,
    Scale(Rational),
}

/// Exact arithmetic on two polynomials; `Scale` ignores `b` except for the
/// dimension check.
pub fn poly_arith(a: &Polynomial, b: &Polynomial, op: PolyOp) -> Result<Polynomial> {
    a.check_dim(b)?;
    Ok(match op {
        PolyOp::Add => a.try_add(b)?,
        PolyOp::Mul => a.try_mul(b)?,
        PolyOp::Scale(c) => a.scale(&c),
    })
}

/// JSON form: `{"dim": d, "terms": [{"exp": [..], "coeff": "p/q"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolynomialJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        Self {
            dim: p.dim,
            terms: p.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coeff: format_rational(c) }).collect(),
        }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = Error;
    fn try_from(j: &PolynomialJson) -> Result<Self> {
        let mut p = Polynomial::zero(j.dim);
        for t in &j.terms {
            if t.exp.len() != j.dim {
                return Err(Error::DimensionMismatch { expected: j.dim, got: t.exp.len() });
            }
            p.add_term(t.exp.clone(), parse_rational(&t.coeff)?);
        }
        Ok(p)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        Polynomial::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// `1/k!` as a rational.
pub fn inv_factorial(k: u32) -> Rational {
    Rational::new(num_bigint::BigInt::one(), factorial(k))
}

pub fn big(n: &num_bigint::BigInt) -> Rational {
    from_big(n)
}
