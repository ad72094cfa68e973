//! Exact local Euler–Maclaurin expansions of Riemann sums over rational
//! polyhedra.

pub mod algebra;
pub mod asymptotics;
pub mod error;
pub mod lattice;
pub mod mu;

pub use error::{Error, Result};
pub mod genfun;
pub mod hyperfrac;
pub mod io;
pub mod polyhedra;
