use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("linear form is not a pole of the fraction")]
    NotAPole,
    #[error("pole has multiplicity {0}, expected a simple pole")]
    MultiplePole(u32),
    #[error("poles are not simple and linearly independent")]
    NotSimplePoles,
    #[error("scalar product is not positive definite")]
    NotPositiveDefinite,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("insufficient Taylor depth: need {needed}, have {have}")]
    InsufficientDepth { needed: usize, have: usize },
    #[error("homogeneous degree {0} is out of the available range")]
    DegreeOutOfRange(i64),
    #[error("not a face of the polyhedron")]
    NotAFace,
    #[error("polyhedron is not a lattice polyhedron: {0}")]
    NotLattice(String),
    #[error("polyhedron is empty")]
    Empty,
    #[error("effective summation region is unbounded")]
    Unbounded,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
