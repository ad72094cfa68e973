//! Quotients `V/L` with their projected lattices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::rational::{dot, z_to_q, QVec, Rational, ZVec};
use crate::hyperfrac::ScalarProduct;
use crate::lattice;

/// Coordinates on `V/L` in which the projected lattice `π(ℤ^d)` is `ℤ^(d-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLattice {
    pub dim: usize,
    /// ℤ-basis of `L ∩ ℤ^d`.
    pub mod_basis: Vec<ZVec>,
    /// Rows of the projection matrix `V → V/L`.
    pub proj_rows: Vec<ZVec>,
    /// Integer vectors `c_j` with `π(c_j) = e_j`.
    pub lifts: Vec<ZVec>,
    /// ℤ-basis of the projected lattice (standard basis in these coordinates).
    pub image_basis: Vec<ZVec>,
}

impl QuotientLattice {
    /// Quotient by the subspace spanned by `vectors`.
    pub fn new(vectors: &[QVec], dim: usize) -> Self {
        let mod_basis = lattice::lattice_basis(vectors, dim);
        let c = lattice::complete(&mod_basis, dim);
        let k = dim - mod_basis.len();
        let image_basis = (0..k)
            .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self { dim, mod_basis, proj_rows: c.proj_rows, lifts: c.lifts, image_basis }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(&[], dim)
    }

    pub fn quotient_dim(&self) -> usize {
        self.proj_rows.len()
    }

    pub fn project(&self, x: &[Rational]) -> QVec {
        self.proj_rows.iter().map(|r| dot(&z_to_q(r), x)).collect()
    }

    pub fn project_z(&self, x: &[BigInt]) -> ZVec {
        self.proj_rows.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Representatives `p_j ∈ L^⊥Q` of the quotient basis vectors.
    pub fn orthogonal_lifts(&self, q: &ScalarProduct) -> Vec<QVec> {
        let basis: Vec<QVec> = self.mod_basis.iter().map(|b| z_to_q(b)).collect();
        self.lifts
            .iter()
            .map(|c| {
                let c = z_to_q(c);
                let along = crate::algebra::linalg::q_project(&basis, q.matrix(), &c);
                c.iter().zip(&along).map(|(x, y)| x - y).collect()
            })
            .collect()
    }

    /// Scalar product induced on `V/L` through `L^⊥Q`.
    pub fn induced_product(&self, q: &ScalarProduct) -> ScalarProduct {
        q.restrict(&self.orthogonal_lifts(q))
    }
}
