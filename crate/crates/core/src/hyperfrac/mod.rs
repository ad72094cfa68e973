//! Rational functions with poles on hyperplane arrangements, their
//! subspace decomposition and the renormalization map.

mod decompose;
mod simple;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::poly::PolynomialJson;
use crate::algebra::rational::{format_rational, QVec, Rational, ZVec};
use crate::algebra::{LinearForm, Polynomial};
use crate::error::{Error, Result};

pub use decompose::{decompose_general, renormalize, renormalize_germ};
pub use simple::decompose_simple_poles;

/// `P(ξ) / ∏ ⟨ξ, v_j⟩^{n_j}` with canonical, pairwise non-collinear pole forms.
#[derive(Clone, PartialEq, Eq)]
pub struct HyperFraction {
    numerator: Polynomial,
    poles: Vec<(LinearForm, u32)>,
}

impl HyperFraction {
    /// Builds a fraction, canonicalizing and merging pole forms.
    pub fn new(numerator: Polynomial, poles: Vec<(LinearForm, u32)>) -> Result<Self> {
        let dim = numerator.dim();
        let mut num = numerator;
        let mut merged: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (v, m) in poles {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
            }
            if m == 0 {
                continue;
            }
            let (canon, scale) =
                v.canonicalize().ok_or_else(|| Error::InvalidArgument("zero pole form".into()))?;
            // 1/(scale*w)^m = scale^-m / w^m
            let mut f = Rational::one();
            for _ in 0..m {
                f /= &scale;
            }
            num = num.scale(&f);
            *merged.entry(canon).or_insert(0) += m;
        }
        Ok(Self { numerator: num, poles: merged.into_iter().collect() })
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self { numerator: p, poles: Vec::new() }
    }

    pub fn zero(dim: usize) -> Self {
        Self::polynomial(Polynomial::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn poles(&self) -> &[(LinearForm, u32)] {
        &self.poles
    }

    pub fn pole_forms(&self) -> Vec<QVec> {
        self.poles.iter().map(|(v, _)| v.coeffs.clone()).collect()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.poles.iter().map(|(_, m)| m).sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn multiplicity_of(&self, v: &LinearForm) -> u32 {
        let Some((canon, _)) = v.canonicalize() else { return 0 };
        self.poles.iter().find(|(w, _)| *w == canon).map_or(0, |(_, m)| *m)
    }

    /// `∏ v_j^{n_j}` as a polynomial.
    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one(self.dim());
        for (v, m) in &self.poles {
            d = &d * &v.to_polynomial().pow(*m);
        }
        d
    }

    /// Numerators of `self` and `other` over the common denominator with
    /// maximal multiplicities.
    fn common(&self, other: &Self) -> (Polynomial, Polynomial, Vec<(LinearForm, u32)>) {
        let mut mult: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (v, m) in self.poles.iter().chain(other.poles.iter()) {
            let e = mult.entry(v.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &Self| {
            let mut p = f.numerator.clone();
            for (v, m) in &mult {
                let have = f.poles.iter().find(|(w, _)| w == v).map_or(0, |(_, k)| *k);
                if *m > have {
                    p = &p * &v.to_polynomial().pow(m - have);
                }
            }
            p
        };
        (lift(self), lift(other), mult.into_iter().collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, poles) = self.common(other);
        Self { numerator: &a + &b, poles }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { numerator: -&self.numerator, poles: self.poles.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { numerator: self.numerator.scale(c), poles: self.poles.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut mult: BTreeMap<LinearForm, u32> = self.poles.iter().cloned().collect();
        for (v, m) in &other.poles {
            *mult.entry(v.clone()).or_insert(0) += m;
        }
        Self { numerator: &self.numerator * &other.numerator, poles: mult.into_iter().collect() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self { numerator: &self.numerator * p, poles: self.poles.clone() }
    }

    /// Exact equality as rational functions.
    pub fn value_eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let (a, b, _) = self.common(other);
        a == b
    }

    /// Cancels pole factors dividing the numerator.
    pub fn reduce(&self) -> Self {
        if self.is_zero() {
            return Self::zero(self.dim());
        }
        let mut num = self.numerator.clone();
        let mut poles = Vec::new();
        for (v, m) in &self.poles {
            let mut left = *m;
            while left > 0 {
                match num.div_linear(&v.coeffs) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                poles.push((v.clone(), left));
            }
        }
        Self { numerator: num, poles }
    }

    /// Value at a point off the poles.
    pub fn eval(&self, xi: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (v, m) in &self.poles {
            let x = v.eval(xi);
            if x.is_zero() {
                return None;
            }
            for _ in 0..*m {
                d *= &x;
            }
        }
        Some(self.numerator.eval(xi) / d)
    }

    /// Substitutes `ξ = M y` (`rows[i]` gives `ξ_i` in terms of `y`).
    /// Fails if a pole form vanishes identically after substitution.
    pub fn substitute(&self, rows: &[QVec], new_dim: usize) -> Result<Self> {
        let num = self.numerator.substitute_linear(rows, new_dim);
        let mut poles = Vec::new();
        for (v, m) in &self.poles {
            // <M y, v> = <y, M^T v>
            let w: QVec = (0..new_dim)
                .map(|j| rows.iter().zip(&v.coeffs).fold(Rational::zero(), |acc, (r, vi)| acc + &r[j] * vi))
                .collect();
            if w.iter().all(Zero::is_zero) {
                return Err(Error::InvalidArgument(format!("pole {v} vanishes on the subspace")));
            }
            poles.push((LinearForm::new(w), *m));
        }
        Self::new(num, poles)
    }

    /// Restriction to the dual subspace spanned by `basis`.
    pub fn restrict(&self, basis: &[QVec]) -> Result<Self> {
        if linalg::rank(basis) < basis.len() {
            return Err(Error::DependentVectors);
        }
        let d = self.dim();
        let rows: Matrix = (0..d).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
        self.substitute(&rows, basis.len())
    }

    /// Keeps numerator terms of the given total degree.
    pub fn homogeneous_numerator_part(&self, k: u32) -> Self {
        Self { numerator: self.numerator.homogeneous_part(k), poles: self.poles.clone() }
    }

    pub fn to_json(&self) -> HyperFractionJson {
        HyperFractionJson {
            numerator: PolynomialJson::from(&self.numerator),
            poles: self
                .poles
                .iter()
                .map(|(v, m)| PoleJson { form: v.coeffs.iter().map(format_rational).collect(), multiplicity: *m })
                .collect(),
        }
    }
}

impl fmt::Debug for HyperFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.numerator)?;
        if !self.poles.is_empty() {
            write!(f, " / ")?;
            for (v, m) in &self.poles {
                write!(f, "{v}^{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleJson {
    pub form: Vec<String>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperFractionJson {
    pub numerator: PolynomialJson,
    pub poles: Vec<PoleJson>,
}

/// Euclidean scalar product given by a symmetric positive definite matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarProduct {
    matrix: Matrix,
}

impl ScalarProduct {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let d = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: row.len() });
            }
            for j in 0..d {
                if row[j] != matrix[j][i] {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        for k in 1..=d {
            let minor: Matrix = matrix[..k].iter().map(|r| r[..k].to_vec()).collect();
            if linalg::det(&minor) <= Rational::zero() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: linalg::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[Rational], b: &[Rational]) -> Rational {
        linalg::bilinear(&self.matrix, a, b)
    }

    /// `Q x` as a dual vector.
    pub fn lower(&self, x: &[Rational]) -> QVec {
        linalg::mat_vec(&self.matrix, x)
    }

    /// Restriction to the subspace with basis `basis` (Gram matrix).
    pub fn restrict(&self, basis: &[QVec]) -> Self {
        let gram: Matrix =
            basis.iter().map(|a| basis.iter().map(|b| self.apply(a, b)).collect()).collect();
        Self { matrix: gram }
    }

    /// Basis of the `Q`-orthogonal complement of `span(basis)`.
    pub fn complement(&self, basis: &[QVec]) -> Matrix {
        linalg::q_orthogonal_complement(basis, &self.matrix, self.dim())
    }

    /// Parses `{"dim": d, "matrix": [["p/q", ...], ...]}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("scalar product: {m}"));
        let dim = v.get("dim").and_then(|d| d.as_u64()).ok_or_else(|| bad("missing dim"))? as usize;
        let rows = v.get("matrix").and_then(|m| m.as_array()).ok_or_else(|| bad("missing matrix"))?;
        if rows.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: rows.len() });
        }
        let mut m = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("row is not an array"))?;
            let row: Result<QVec> = r.iter().map(crate::io::json_rational).collect();
            m.push(row?);
        }
        Self::new(m)
    }
}

/// One summand `P_L / ∏ v^n` of the decomposition, grouped by the subspace
/// `L` spanned by its poles.
#[derive(Clone, Debug)]
pub struct SubspaceComponent {
    /// Primitive integer basis of `L ∩ ℤ^d`.
    pub subspace_basis: Vec<ZVec>,
    /// Canonical key of `L` (reduced row echelon form).
    pub key: Matrix,
    /// Fractions whose poles form a basis of `L` and whose numerators lie in
    /// `Sym(C_Q(L))`.
    pub terms: Vec<HyperFraction>,
}

impl SubspaceComponent {
    pub fn sum(&self, dim: usize) -> HyperFraction {
        self.terms.iter().fold(HyperFraction::zero(dim), |acc, t| acc.add(t))
    }

    pub fn dim(&self) -> usize {
        self.key.len()
    }

    pub fn is_polynomial_part(&self) -> bool {
        self.key.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subspace_basis": self.subspace_basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "terms": self.terms.iter().map(|t| {
                let j = t.to_json();
                serde_json::json!({"numerator": j.numerator, "poles": j.poles})
            }).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn component_key_and_basis(forms: &[QVec], dim: usize) -> (Matrix, Vec<ZVec>) {
    let key = linalg::subspace_key(forms);
    let basis = crate::lattice::lattice_basis(forms, dim);
    (key, basis)
}

/// Re-sums a component list.
pub fn sum_components(components: &[SubspaceComponent], dim: usize) -> HyperFraction {
    components.iter().fold(HyperFraction::zero(dim), |acc, c| acc.add(&c.sum(dim)))
}

/// Default basis of `v^⊥` in the dual: Gram–Schmidt of the standard basis
/// against `v`.
pub fn hyperplane_basis(v: &[Rational]) -> Matrix {
    linalg::q_orthogonal_complement(&[v.to_vec()], &linalg::identity(v.len()), v.len())
}

/// `Res_v f = (⟨ξ,v⟩ f)|_{v^⊥}` in the coordinates of `basis` (a basis of `v^⊥`).
pub fn residue_in_basis(f: &HyperFraction, v: &LinearForm, basis: &[QVec]) -> Result<HyperFraction> {
    let canon = v.canonicalize().ok_or(Error::NotAPole)?;
    match f.multiplicity_of(v) {
        0 => return Err(Error::NotAPole),
        1 => {}
        m => return Err(Error::MultiplePole(m)),
    }
    for b in basis {
        if !v.eval(b).is_zero() {
            return Err(Error::InvalidArgument("basis vector not in the hyperplane".into()));
        }
    }
    // v f = (numerator / scale) / ∏_{w≠v} w^m
    let (cv, scale) = canon;
    let num = f.numerator().scale(&(Rational::one() / scale));
    let poles: Vec<(LinearForm, u32)> = f.poles().iter().filter(|(w, _)| *w != cv).cloned().collect();
    HyperFraction { numerator: num, poles }.restrict(basis)
}

/// Partial residue along a simple pole, in the default basis of `v^⊥`.
pub fn residue(f: &HyperFraction, v: &LinearForm) -> Result<HyperFraction> {
    let basis = hyperplane_basis(&v.coeffs);
    residue_in_basis(f, v, &basis)
}
