//! Linear forms `ξ ↦ ⟨ξ, v⟩` on the dual space.

use std::fmt;

use num_traits::Zero;

use super::poly::Polynomial;
use super::rational::{dot, format_rational, primitive_canonical, z_to_q, QVec, Rational};

/// The vector `v`, acting on dual vectors by pairing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub coeffs: QVec,
}

impl LinearForm {
    pub fn new(coeffs: QVec) -> Self {
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, xi: &[Rational]) -> Rational {
        dot(&self.coeffs, xi)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::linear(&self.coeffs)
    }

    /// Splits into `scale * canonical` with the canonical form primitive
    /// integral with positive leading entry.
    pub fn canonicalize(&self) -> Option<(LinearForm, Rational)> {
        let (p, scale) = primitive_canonical(&self.coeffs)?;
        Some((LinearForm::new(z_to_q(&p)), scale))
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "<{}>", parts.join(","))
    }
}
