//! Rational polyhedra, cones, faces and subdivisions.

pub mod dd;
mod polyhedron;
mod quotient;
mod subdivision;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::linalg;
use crate::algebra::rational::{dot, q_to_z, vec_add, z_to_q, QVec, Rational, ZVec};
use crate::error::{Error, Result};
use crate::lattice;

pub use polyhedron::{lineality_and_project, supporting_cone, transverse_cone, Face, Polyhedron};
pub use quotient::QuotientLattice;
pub use subdivision::{
    half_open_marks, parallelepiped_points as subdivision_points, simplicial_subdivision, simplicial_subdivision_with_pivot,
    unimodular_subdivision, HalfOpenCone,
};

/// Rational polyhedral cone given by primitive extreme rays and a lineality basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    rays: Vec<ZVec>,
    lines: Vec<ZVec>,
}

impl Cone {
    /// Cone generated by `gens` (arbitrary, possibly redundant, generators).
    pub fn from_generators(dim: usize, gens: &[QVec]) -> Self {
        let gens: Vec<QVec> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
        if gens.is_empty() {
            return Self { dim, rays: Vec::new(), lines: Vec::new() };
        }
        let (eqs, facets) = dd::cone_facets(&gens, dim);
        let mut cons = facets;
        for e in eqs {
            cons.push(e.iter().map(|x| -x).collect());
            cons.push(e);
        }
        Self::from_constraints(dim, &cons)
    }

    pub fn from_int_generators(dim: usize, gens: &[ZVec]) -> Self {
        let q: Vec<QVec> = gens.iter().map(|g| z_to_q(g)).collect();
        Self::from_generators(dim, &q)
    }

    /// Cone `{y : <c, y> >= 0}`.
    pub fn from_constraints(dim: usize, constraints: &[QVec]) -> Self {
        let g = dd::cone_generators(constraints, dim);
        let rays = g.rays.iter().map(|r| q_to_z(r).expect("rays are normalized to integers")).collect();
        let lines = if g.lines.is_empty() { Vec::new() } else { lattice::lattice_basis(&g.lines, dim) };
        Self { dim, rays, lines }
    }

    /// Builds from known extreme rays without running double description.
    pub fn from_extreme_rays(dim: usize, rays: Vec<ZVec>) -> Self {
        Self { dim, rays, lines: Vec::new() }
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[ZVec] {
        &self.rays
    }

    pub fn lines(&self) -> &[ZVec] {
        &self.lines
    }

    pub fn rays_q(&self) -> Vec<QVec> {
        self.rays.iter().map(|r| z_to_q(r)).collect()
    }

    pub fn is_pointed(&self) -> bool {
        self.lines.is_empty()
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        let mut all = self.rays_q();
        all.extend(self.lines.iter().map(|l| z_to_q(l)));
        linalg::rank(&all)
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && linalg::rank(&self.rays_q()) == self.rays.len()
    }

    /// ℤ-basis of `lin(c) ∩ ℤ^d`.
    pub fn lattice_basis(&self) -> Vec<ZVec> {
        let mut all = self.rays_q();
        all.extend(self.lines.iter().map(|l| z_to_q(l)));
        lattice::lattice_basis(&all, self.dim)
    }

    /// Index of the ray lattice in `lin(c) ∩ ℤ^d` (simplicial cones only).
    pub fn index(&self) -> Result<Rational> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        Ok(lattice::lattice_det(&self.rays_q(), &self.lattice_basis()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.index().map(|i| i.is_one()).unwrap_or(false)
    }

    /// Facets as sets of ray indices (pointed cones).
    pub fn facets(&self) -> Vec<Vec<usize>> {
        ray_facets(&self.rays_q(), self.dim)
    }

    /// `(equations, inner facet normals)` of the cone.
    pub fn halfspaces(&self) -> (Vec<QVec>, Vec<QVec>) {
        let mut gens = self.rays_q();
        gens.extend(self.lines.iter().map(|l| z_to_q(l)));
        dd::cone_facets(&gens, self.dim)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let (eqs, facets) = self.halfspaces();
        eqs.iter().all(|e| dot(e, x).is_zero()) && facets.iter().all(|f| dot(f, x) >= Rational::zero())
    }
}

/// Facets of the pointed cone spanned by `rays`, as sets of ray indices.
pub(crate) fn ray_facets(rays: &[QVec], dim: usize) -> Vec<Vec<usize>> {
    let (_, normals) = dd::cone_facets(rays, dim);
    let mut out: Vec<Vec<usize>> = normals
        .iter()
        .map(|n| (0..rays.len()).filter(|&i| dot(n, &rays[i]).is_zero()).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A translated cone `s + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCone {
    pub vertex: QVec,
    pub cone: Cone,
}

impl AffineCone {
    pub fn new(vertex: QVec, cone: Cone) -> Self {
        assert_eq!(vertex.len(), cone.dim_ambient());
        Self { vertex, cone }
    }

    /// `s + cone(gens)` with generators given as small integer vectors.
    pub fn from_ints(vertex: QVec, gens: &[Vec<i64>]) -> Self {
        let dim = vertex.len();
        let g: Vec<QVec> = gens.iter().map(|v| crate::algebra::rational::qvec(v)).collect();
        Self::new(vertex, Cone::from_generators(dim, &g))
    }

    pub fn dim_ambient(&self) -> usize {
        self.vertex.len()
    }

    pub fn translate(&self, v: &[Rational]) -> Self {
        Self { vertex: vec_add(&self.vertex, v), cone: self.cone.clone() }
    }

    pub fn dilate(&self, t: &Rational) -> Self {
        Self { vertex: self.vertex.iter().map(|x| x * t).collect(), cone: self.cone.clone() }
    }

    /// The polyhedron `s + c`.
    pub fn to_polyhedron(&self) -> Polyhedron {
        let rays: Vec<ZVec> = self.cone.rays.clone();
        Polyhedron::from_generators(self.dim_ambient(), vec![self.vertex.clone()], rays, self.cone.lines.clone())
            .expect("affine cone is nonempty")
    }
}

pub(crate) fn unit(dim: usize, i: usize) -> ZVec {
    (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}
