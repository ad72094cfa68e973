use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::dd;
use super::{AffineCone, Cone, QuotientLattice};
use crate::algebra::linalg;
use crate::algebra::rational::{dot, primitive, primitive_canonical, q_to_z, vec_sub, z_to_q, QVec, Rational, ZVec};
use crate::error::{Error, Result};
use crate::lattice;

/// A face, identified by the set of facet inequalities active on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub active: Vec<usize>,
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
    pub dim: usize,
    /// ℤ-basis of `lin(f) ∩ ℤ^d`.
    pub span_basis: Vec<ZVec>,
    pub affine_point: QVec,
}

impl Face {
    pub fn span_basis_q(&self) -> Vec<QVec> {
        self.span_basis.iter().map(|b| z_to_q(b)).collect()
    }

    pub fn is_vertex(&self) -> bool {
        self.dim == 0
    }
}

/// Rational polyhedron `{x : <a_i, x> <= b_i, <e_j, x> = c_j}` with an
/// irredundant facet list and its minimal generators.
#[derive(Clone, Debug)]
pub struct Polyhedron {
    dim: usize,
    inequalities: Vec<(ZVec, Rational)>,
    equations: Vec<(ZVec, Rational)>,
    vertices: Vec<QVec>,
    rays: Vec<ZVec>,
    lines: Vec<ZVec>,
    dimension: usize,
    faces: Vec<Face>,
}

fn homogenize_h(d: usize, ineqs: &[(QVec, Rational)], eqs: &[(QVec, Rational)]) -> Vec<QVec> {
    let mut cons: Vec<QVec> = Vec::new();
    let mut x0 = vec![Rational::zero(); d + 1];
    x0[0] = Rational::from_integer(1.into());
    cons.push(x0);
    for (a, b) in ineqs {
        let mut row = vec![b.clone()];
        row.extend(a.iter().map(|x| -x));
        cons.push(row);
    }
    for (a, b) in eqs {
        let mut row = vec![b.clone()];
        row.extend(a.iter().map(|x| -x));
        cons.push(row.iter().map(|x| -x).collect());
        cons.push(row);
    }
    cons
}

type VRep = (Vec<QVec>, Vec<ZVec>, Vec<ZVec>);

fn h_to_v(dim: usize, ineqs: &[(QVec, Rational)], eqs: &[(QVec, Rational)]) -> Result<VRep> {
    let cons = homogenize_h(dim, ineqs, eqs);
    let g = dd::cone_generators(&cons, dim + 1);
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in &g.rays {
        if r[0].is_positive() {
            vertices.push(r[1..].iter().map(|x| x / &r[0]).collect::<QVec>());
        } else {
            let (p, _) = primitive(&r[1..]).expect("nonzero ray");
            rays.push(p);
        }
    }
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    let line_vecs: Vec<QVec> = g.lines.iter().map(|l| l[1..].to_vec()).collect();
    let lines = if line_vecs.is_empty() { Vec::new() } else { lattice::lattice_basis(&line_vecs, dim) };
    Ok((vertices, rays, lines))
}

type HRep = (Vec<(ZVec, Rational)>, Vec<(ZVec, Rational)>);

fn v_to_h(dim: usize, vertices: &[QVec], rays: &[ZVec], lines: &[ZVec]) -> HRep {
    let mut gens: Vec<QVec> = Vec::new();
    for v in vertices {
        let mut g = vec![Rational::from_integer(1.into())];
        g.extend(v.iter().cloned());
        gens.push(g);
    }
    for (r, is_line) in rays.iter().map(|r| (r, false)).chain(lines.iter().map(|l| (l, true))) {
        let mut g = vec![Rational::zero()];
        g.extend(z_to_q(r));
        if is_line {
            gens.push(g.iter().map(|x| -x).collect());
        }
        gens.push(g);
    }
    let (eqs, facets) = dd::cone_facets(&gens, dim + 1);
    let mut ineqs = Vec::new();
    for y in facets {
        let c: QVec = y[1..].to_vec();
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let a: QVec = c.iter().map(|x| -x).collect();
        let (p, s) = primitive(&a).expect("nonzero normal");
        ineqs.push((p, &y[0] / s));
    }
    let mut equations = Vec::new();
    if !eqs.is_empty() {
        let (r, _) = linalg::rref(&eqs);
        for y in r {
            let c: QVec = y[1..].to_vec();
            let (p, s) = primitive_canonical(&c).expect("equation has a nonzero normal");
            equations.push((p, -&y[0] / s));
        }
    }
    (ineqs, equations)
}

impl Polyhedron {
    /// `{x : <a_i, x> <= b_i}`.
    pub fn from_inequalities(dim: usize, ineqs: &[(QVec, Rational)]) -> Result<Self> {
        for (a, _) in ineqs {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
        }
        let (v, r, l) = h_to_v(dim, ineqs, &[])?;
        let mut p = Self::from_generators(dim, v, r, l)?;
        // keep the caller's facet order where a facet matches an input row
        let pos = |a: &ZVec, b: &Rational| {
            ineqs.iter().position(|(ia, ib)| {
                let Some((pa, s)) = primitive(ia) else { return false };
                &pa == a && &(ib / s) == b
            })
        };
        let mut keyed: Vec<(usize, (ZVec, Rational))> = p
            .inequalities
            .iter()
            .map(|(a, b)| (pos(a, b).unwrap_or(usize::MAX), (a.clone(), b.clone())))
            .collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let ineq: Vec<(ZVec, Rational)> = keyed.into_iter().map(|(_, x)| x).collect();
        if ineq != p.inequalities {
            p.inequalities = ineq;
            p.faces = p.compute_faces();
        }
        Ok(p)
    }

    /// `conv(vertices) + cone(rays) + lin(lines)`.
    pub fn from_generators(dim: usize, vertices: Vec<QVec>, rays: Vec<ZVec>, lines: Vec<ZVec>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Empty);
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
        }
        for r in rays.iter().chain(&lines) {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
        }
        let (mut inequalities, equations) = v_to_h(dim, &vertices, &rays, &lines);
        inequalities.sort();
        let iq: Vec<(QVec, Rational)> = inequalities.iter().map(|(a, b)| (z_to_q(a), b.clone())).collect();
        let eq: Vec<(QVec, Rational)> = equations.iter().map(|(a, b)| (z_to_q(a), b.clone())).collect();
        let (vertices, rays, lines) = h_to_v(dim, &iq, &eq)?;
        let dimension = dim - equations.len();
        let mut p = Self { dim, inequalities, equations, vertices, rays, lines, dimension, faces: Vec::new() };
        p.faces = p.compute_faces();
        Ok(p)
    }

    /// Convex hull of points given as small integers.
    pub fn lattice_polytope(points: &[Vec<i64>]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        let v = points.iter().map(|p| crate::algebra::rational::qvec(p)).collect();
        Self::from_generators(dim, v, Vec::new(), Vec::new())
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    /// Dimension `ℓ` of the affine span.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn inequalities(&self) -> &[(ZVec, Rational)] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[(ZVec, Rational)] {
        &self.equations
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[ZVec] {
        &self.rays
    }

    pub fn lines(&self) -> &[ZVec] {
        &self.lines
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_by_active(&self, active: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.active == active)
    }

    /// The face of dimension `ℓ` (the polyhedron itself).
    pub fn top_face(&self) -> &Face {
        self.face_by_active(&[]).expect("polyhedron is a face of itself")
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|(a, b)| dot(&z_to_q(a), x) <= *b)
            && self.equations.iter().all(|(a, b)| dot(&z_to_q(a), x) == *b)
    }

    /// Whether `x ∈ tP`.
    pub fn contains_dilated(&self, x: &[Rational], t: &Rational) -> bool {
        self.inequalities.iter().all(|(a, b)| dot(&z_to_q(a), x) <= b * t)
            && self.equations.iter().all(|(a, b)| dot(&z_to_q(a), x) == b * t)
    }

    fn is_tight_vertex(&self, i: usize, v: &[Rational]) -> bool {
        let (a, b) = &self.inequalities[i];
        dot(&z_to_q(a), v) == *b
    }

    fn is_tight_ray(&self, i: usize, r: &[num_bigint::BigInt]) -> bool {
        crate::algebra::rational::dot_z(&self.inequalities[i].0, r).is_zero()
    }

    fn make_face(&self, active: Vec<usize>, vertices: Vec<usize>, rays: Vec<usize>) -> Face {
        let v0 = self.vertices[vertices[0]].clone();
        let mut dirs: Vec<QVec> = vertices[1..].iter().map(|&i| vec_sub(&self.vertices[i], &v0)).collect();
        dirs.extend(rays.iter().map(|&i| z_to_q(&self.rays[i])));
        dirs.extend(self.lines.iter().map(|l| z_to_q(l)));
        let dim = linalg::rank(&dirs);
        let span_basis = if dim == 0 { Vec::new() } else { lattice::lattice_basis(&dirs, self.dim) };
        Face { active, vertices, rays, dim, span_basis, affine_point: v0 }
    }

    fn compute_faces(&self) -> Vec<Face> {
        let m = self.inequalities.len();
        let vt: Vec<Vec<bool>> = (0..m)
            .map(|i| self.vertices.iter().map(|v| self.is_tight_vertex(i, v)).collect())
            .collect();
        let rt: Vec<Vec<bool>> =
            (0..m).map(|i| self.rays.iter().map(|r| self.is_tight_ray(i, r)).collect()).collect();
        let all_v: Vec<usize> = (0..self.vertices.len()).collect();
        let all_r: Vec<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces: Vec<Face> = Vec::new();
        let mut queue: VecDeque<(Vec<usize>, Vec<usize>, Vec<usize>)> = VecDeque::new();
        seen.insert(Vec::new());
        queue.push_back((Vec::new(), all_v, all_r));
        while let Some((active, vs, rs)) = queue.pop_front() {
            for j in 0..m {
                if active.contains(&j) {
                    continue;
                }
                let nv: Vec<usize> = vs.iter().cloned().filter(|&v| vt[j][v]).collect();
                if nv.is_empty() {
                    continue;
                }
                let nr: Vec<usize> = rs.iter().cloned().filter(|&r| rt[j][r]).collect();
                let closure: Vec<usize> = (0..m)
                    .filter(|&i| nv.iter().all(|&v| vt[i][v]) && nr.iter().all(|&r| rt[i][r]))
                    .collect();
                if seen.insert(closure.clone()) {
                    queue.push_back((closure, nv, nr));
                }
            }
            faces.push(self.make_face(active, vs, rs));
        }
        faces.sort_by(|a, b| a.active.cmp(&b.active));
        faces
    }

    /// Every minimal face contains a lattice point.
    pub fn is_lattice(&self) -> bool {
        let line_q: Vec<QVec> = self.lines.iter().map(|l| z_to_q(l)).collect();
        self.vertices.iter().all(|v| {
            if line_q.is_empty() {
                return q_to_z(v).is_some();
            }
            let perp: Vec<ZVec> = linalg::kernel(&line_q, self.dim).iter().map(|k| lattice::integralize(k)).collect();
            let rhs: QVec = perp.iter().map(|n| dot(&z_to_q(n), v)).collect();
            match q_to_z(&rhs) {
                Some(b) => lattice::solve_integer(&perp, &b, self.dim).is_some(),
                None => false,
            }
        })
    }

    /// Integer bounding box `[lo, hi]` of `tP` (bounded polyhedra).
    pub fn bounding_box(&self, t: &Rational) -> Result<(ZVec, ZVec)> {
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let lo = (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| (&v[i] * t).ceil().to_integer()).min().expect("nonempty"))
            .collect();
        let hi = (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| (&v[i] * t).floor().to_integer()).max().expect("nonempty"))
            .collect();
        Ok((lo, hi))
    }
}

fn check_face<'a>(p: &'a Polyhedron, f: &Face) -> Result<&'a Face> {
    p.face_by_active(&f.active).filter(|g| g.vertices == f.vertices && g.rays == f.rays).ok_or(Error::NotAFace)
}

/// The supporting cone `C(P, f)`: apex at a point of `f`, lineality `lin(f)`.
pub fn supporting_cone(p: &Polyhedron, f: &Face) -> Result<AffineCone> {
    let f = check_face(p, f)?;
    let mut cons: Vec<QVec> = f.active.iter().map(|&i| p.inequalities[i].0.iter().map(|x| Rational::from_integer(-x)).collect()).collect();
    for (a, _) in &p.equations {
        let q = z_to_q(a);
        cons.push(q.iter().map(|x| -x).collect());
        cons.push(q);
    }
    let cone = if cons.is_empty() {
        Cone { dim: p.dim, rays: Vec::new(), lines: (0..p.dim).map(|i| super::unit(p.dim, i)).collect() }
    } else {
        Cone::from_constraints(p.dim, &cons)
    };
    Ok(AffineCone::new(f.affine_point.clone(), cone))
}

/// The transverse cone of `P` along `f`: the pointed image of `C(P, f)` in
/// `V / lin(f)` together with the quotient lattice data.
pub fn transverse_cone(p: &Polyhedron, f: &Face) -> Result<(AffineCone, QuotientLattice)> {
    let sc = supporting_cone(p, f)?;
    let ql = QuotientLattice::new(&f.span_basis_q(), p.dim);
    let k = ql.quotient_dim();
    let gens: Vec<QVec> = sc.cone.rays().iter().map(|r| z_to_q(&ql.project_z(r))).collect();
    let cone = Cone::from_generators(k, &gens);
    debug_assert!(cone.is_pointed());
    Ok((AffineCone::new(ql.project(&sc.vertex), cone), ql))
}

/// Lineality space `L` of `P` and the pointed projection of `P` to `V/L`.
pub fn lineality_and_project(p: &Polyhedron) -> Result<(QuotientLattice, Polyhedron)> {
    let lines: Vec<QVec> = p.lines.iter().map(|l| z_to_q(l)).collect();
    let ql = QuotientLattice::new(&lines, p.dim);
    let k = ql.quotient_dim();
    let verts: Vec<QVec> = p.vertices.iter().map(|v| ql.project(v)).collect();
    let rays: Vec<ZVec> = p.rays.iter().map(|r| ql.project_z(r)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let proj = Polyhedron::from_generators(k, verts, rays, Vec::new())?;
    Ok((ql, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, qvec, zvec};

    fn unit_triangle() -> Polyhedron {
        Polyhedron::lattice_polytope(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn triangle_faces() {
        let p = unit_triangle();
        assert_eq!(p.faces().len(), 7);
        let by_dim = |d| p.faces().iter().filter(|f| f.dim == d).count();
        assert_eq!((by_dim(0), by_dim(1), by_dim(2)), (3, 3, 1));
        assert!(p.is_lattice());
    }

    #[test]
    fn half_plane_faces() {
        let p = Polyhedron::from_inequalities(2, &[(qvec(&[-1, 0]), int(0))]).unwrap();
        assert_eq!(p.faces().len(), 2);
        assert_eq!(p.lines().len(), 1);
    }

    #[test]
    fn square_cone_faces() {
        let c = AffineCone::from_ints(qvec(&[0, 0, 0]), &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]);
        let p = c.to_polyhedron();
        assert_eq!(p.faces().len(), 10);
    }

    #[test]
    fn supporting_cones_of_triangle() {
        let p = unit_triangle();
        let v0 = p.faces().iter().find(|f| f.dim == 0 && f.affine_point == qvec(&[0, 0])).unwrap();
        let c = supporting_cone(&p, v0).unwrap();
        assert!(c.cone.rays().contains(&zvec(&[1, 0])) && c.cone.rays().contains(&zvec(&[0, 1])));
        let diag = p
            .faces()
            .iter()
            .find(|f| f.dim == 1 && f.vertices.iter().all(|&i| p.vertices()[i] != qvec(&[0, 0])))
            .unwrap();
        let c = supporting_cone(&p, diag).unwrap();
        assert_eq!(c.cone.lines().len(), 1);
        assert_eq!(c.cone.rays().len(), 1);
        assert!(dot(&qvec(&[1, 1]), &z_to_q(&c.cone.rays()[0])) < int(0));
        let top = supporting_cone(&p, p.top_face()).unwrap();
        assert_eq!(top.cone.lines().len(), 2);
        let (t, ql) = transverse_cone(&p, p.top_face()).unwrap();
        assert_eq!(ql.quotient_dim(), 0);
        assert!(t.cone.rays().is_empty());
    }

    #[test]
    fn transverse_cone_at_vertex() {
        let p = Polyhedron::lattice_polytope(&[vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
        let v = p.faces().iter().find(|f| f.dim == 0 && f.affine_point == qvec(&[2, 0])).unwrap();
        let (t, _) = transverse_cone(&p, v).unwrap();
        let mut rays = t.cone.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![zvec(&[-2, 3]), zvec(&[-1, 0])]);
    }

    #[test]
    fn facet_transverse_cone_is_half_line() {
        let p = unit_triangle();
        for f in p.faces().iter().filter(|f| f.dim == 1) {
            let (t, ql) = transverse_cone(&p, f).unwrap();
            assert_eq!(ql.quotient_dim(), 1);
            assert_eq!(t.cone.rays().len(), 1);
            assert!(t.vertex[0].is_integer());
        }
    }

    #[test]
    fn lineality_projection() {
        let p = Polyhedron::from_inequalities(2, &[(qvec(&[-1, 0]), int(0))]).unwrap();
        let (ql, proj) = lineality_and_project(&p).unwrap();
        assert_eq!(ql.mod_basis.len(), 1);
        assert_eq!(proj.dim_ambient(), 1);
        assert_eq!(proj.rays().len(), 1);
        let plane = Polyhedron::from_inequalities(2, &[]).unwrap();
        let (ql, proj) = lineality_and_project(&plane).unwrap();
        assert_eq!(ql.quotient_dim(), 0);
        assert_eq!(proj.vertices().len(), 1);
        let tri = unit_triangle();
        let (ql, proj) = lineality_and_project(&tri).unwrap();
        assert_eq!(ql.quotient_dim(), 2);
        assert_eq!(proj.vertices().len(), 3);
    }
}
