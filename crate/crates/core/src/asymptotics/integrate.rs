//! Exact integration of polynomials over faces of polytopes, with the
//! Lebesgue measure normalized by the lattice `lin(f) ∩ ℤ^d`.

use std::collections::HashMap;

use crate::algebra::rational::{vec_sub, QVec, Rational, ZVec};
use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::lattice::lattice_det;
use crate::polyhedra::{Face, Polyhedron};

/// Simplices (as vertex index lists) triangulating a bounded face, obtained
/// by pulling the lowest vertex over the facets of the face that miss it.
pub fn face_simplices(p: &Polyhedron, f: &Face) -> Result<Vec<Vec<usize>>> {
    let mut memo = HashMap::new();
    simplices_rec(p, f, &mut memo)
}

fn simplices_rec(p: &Polyhedron, f: &Face, memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>) -> Result<Vec<Vec<usize>>> {
    if !f.rays.is_empty() || !p.lines().is_empty() {
        return Err(Error::Unbounded);
    }
    if let Some(s) = memo.get(&f.active) {
        return Ok(s.clone());
    }
    let out = if f.dim == 0 {
        vec![vec![f.vertices[0]]]
    } else {
        let v0 = f.vertices[0];
        let mut out = Vec::new();
        for g in p.faces() {
            if g.dim + 1 != f.dim || g.vertices.contains(&v0) || !g.vertices.iter().all(|v| f.vertices.contains(v)) {
                continue;
            }
            for mut s in simplices_rec(p, g, memo)? {
                s.insert(0, v0);
                out.push(s);
            }
        }
        out
    };
    memo.insert(f.active.clone(), out.clone());
    Ok(out)
}

/// Affine parametrization `λ ↦ p0 + Σ λ_i (p_i − p0)` of a simplex and its
/// lattice-normalized Jacobian.
pub fn simplex_map(points: &[QVec], span_basis: &[ZVec]) -> (QVec, Vec<QVec>, Rational) {
    let p0 = points[0].clone();
    let edges: Vec<QVec> = points[1..].iter().map(|x| vec_sub(x, &p0)).collect();
    let jac = if edges.is_empty() { Rational::from_integer(1.into()) } else { lattice_det(&edges, span_basis) };
    let d = p0.len();
    // rows[i][j] = coordinate i of edge j
    let rows: Vec<QVec> = (0..d).map(|i| edges.iter().map(|e| e[i].clone()).collect()).collect();
    (p0, rows, jac)
}

/// `∫_f g dm_f` over a bounded face.
pub fn integrate_over_face(p: &Polyhedron, f: &Face, g: &Polynomial) -> Result<Rational> {
    let simplices = face_simplices(p, f)?;
    Ok(integrate_over_simplices(p, f, &simplices, g))
}

pub(crate) fn integrate_over_simplices(p: &Polyhedron, f: &Face, simplices: &[Vec<usize>], g: &Polynomial) -> Rational {
    let mut acc = Rational::from_integer(0.into());
    if g.is_zero() {
        return acc;
    }
    for s in simplices {
        let pts: Vec<QVec> = s.iter().map(|&i| p.vertices()[i].clone()).collect();
        let (p0, rows, jac) = simplex_map(&pts, &f.span_basis);
        let k = pts.len() - 1;
        let pulled = g.substitute_affine(&p0, &rows, k);
        acc += jac * pulled.integrate_standard_simplex();
    }
    acc
}
