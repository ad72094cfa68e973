//! Asymptotic expansion of Riemann sums `t^{-ℓ} Σ_{x ∈ tP ∩ ℤ^d} h(x/t)`
//! as `Σ_k t^{-k} Σ_{(f, m)} ∫_f μ(t(P, f))_[m](∂) h dm_f`.

pub mod dim1;
pub mod integrate;
pub mod numeric;
pub mod step;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{QVec, Rational};
use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::hyperfrac::ScalarProduct;
use crate::mu::{mu_at_dilation, mu_embedded, MuFunction};
use crate::polyhedra::{transverse_cone, AffineCone, Face, Polyhedron, QuotientLattice};

pub use dim1::{dim1_euler_maclaurin, Dim1Expansion};
pub use integrate::{face_simplices, integrate_over_face};
pub use step::{mu_dim1_step, step_poly_eval, StepPolynomialExpr};

/// How the dilation parameter ranges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TClass {
    /// Lattice polyhedron, `t ∈ ℕ`: constant coefficients.
    IntegerLattice,
    /// Rational polyhedron, `t ∈ ℚ_{>0}`: coefficients recomputed at each `t`.
    RationalT,
}

/// One summand `t^{-k} ∫_f μ_[m](∂) h dm_f`, with `k = m + ℓ − dim f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub k: u32,
    pub face_index: usize,
    pub face: Face,
    pub m: u32,
    /// Homogeneous of degree `m` on `V*`, read as a differential operator.
    pub operator: Polynomial,
}

/// Per-face data: the transverse cone and its quotient.
#[derive(Clone, Debug)]
pub struct FaceData {
    pub face: Face,
    pub transverse: AffineCone,
    pub quotient: QuotientLattice,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub polyhedron: Polyhedron,
    pub scalar_product: ScalarProduct,
    pub order: u32,
    pub mode: TClass,
    pub faces: Vec<FaceData>,
    /// Terms at `t = 1` (the constant terms in integer-lattice mode).
    pub terms: Vec<ExpansionTerm>,
}

fn terms_from_mu(p: &Polyhedron, fd: &FaceData, fi: usize, mu: &MuFunction, order: u32) -> Vec<ExpansionTerm> {
    let ell = p.dimension() as i64;
    let mut out = Vec::new();
    for (m, op) in mu.components.iter().enumerate() {
        let k = m as i64 + ell - fd.face.dim as i64;
        if k > order as i64 || op.is_zero() {
            continue;
        }
        out.push(ExpansionTerm { k: k as u32, face_index: fi, face: fd.face.clone(), m: m as u32, operator: op.clone() });
    }
    out
}

fn sort_terms(terms: &mut [ExpansionTerm]) {
    terms.sort_by(|a, b| a.k.cmp(&b.k).then_with(|| a.face.active.cmp(&b.face.active)).then(a.m.cmp(&b.m)));
}

/// All terms with `k ≤ order`. Integer mode requires a lattice polyhedron.
pub fn expansion_terms(p: &Polyhedron, q: &ScalarProduct, order: u32, mode: TClass) -> Result<Expansion> {
    if q.dim() != p.dim_ambient() {
        return Err(Error::DimensionMismatch { expected: p.dim_ambient(), got: q.dim() });
    }
    if mode == TClass::IntegerLattice && !p.is_lattice() {
        return Err(Error::NotLattice("some face contains no lattice point".into()));
    }
    let faces: Vec<FaceData> = p
        .faces()
        .iter()
        .map(|f| {
            let (transverse, quotient) = transverse_cone(p, f)?;
            Ok(FaceData { face: f.clone(), transverse, quotient })
        })
        .collect::<Result<_>>()?;
    let mut e = Expansion { polyhedron: p.clone(), scalar_product: q.clone(), order, mode, faces, terms: Vec::new() };
    e.terms = e.compute_terms(&Rational::one())?;
    Ok(e)
}

impl Expansion {
    fn mu_order(&self, fd: &FaceData) -> Option<u32> {
        let ell = self.polyhedron.dimension() as i64;
        let top = self.order as i64 - ell + fd.face.dim as i64;
        (top >= 0).then_some(top as u32)
    }

    fn compute_terms(&self, t: &Rational) -> Result<Vec<ExpansionTerm>> {
        let per_face: Vec<Vec<ExpansionTerm>> = self
            .faces
            .par_iter()
            .enumerate()
            .map(|(fi, fd)| {
                let Some(n) = self.mu_order(fd) else { return Ok(Vec::new()) };
                let mu = if t.is_one() {
                    mu_embedded(&fd.transverse, &fd.quotient, &self.scalar_product, n)?
                } else {
                    mu_at_dilation(&fd.transverse, &fd.quotient, t, &self.scalar_product, n)?
                };
                Ok(terms_from_mu(&self.polyhedron, fd, fi, &mu, self.order))
            })
            .collect::<Result<_>>()?;
        let mut terms: Vec<ExpansionTerm> = per_face.into_iter().flatten().collect();
        sort_terms(&mut terms);
        Ok(terms)
    }

    /// The terms valid at dilation `t`.
    pub fn terms_at(&self, t: &Rational) -> Result<Vec<ExpansionTerm>> {
        check_t(t)?;
        match self.mode {
            TClass::IntegerLattice if !t.is_integer() => {
                Err(Error::InvalidArgument(format!("t = {t} is not an integer in integer-lattice mode")))
            }
            TClass::IntegerLattice => Ok(self.terms.clone()),
            TClass::RationalT => self.compute_terms(t),
        }
    }

    /// `μ(t · t(P, f))` for face `fi`.
    pub fn mu_at(&self, fi: usize, t: &Rational) -> Result<MuFunction> {
        let fd = &self.faces[fi];
        let n = self.mu_order(fd).unwrap_or(0);
        mu_at_dilation(&fd.transverse, &fd.quotient, t, &self.scalar_product, n)
    }

    /// Per-order values `⟨F_k, h⟩` at dilation `t`.
    pub fn coefficients(&self, h: &Polynomial, t: &Rational) -> Result<Vec<Rational>> {
        let terms = self.terms_at(t)?;
        coefficients_of_terms(&self.polyhedron, &terms, h, self.order)
    }

    pub fn evaluate(&self, h: &Polynomial, t: &Rational) -> Result<Rational> {
        let terms = self.terms_at(t)?;
        evaluate_expansion(&self.polyhedron, &terms, h, t)
    }
}

/// For a face with one-dimensional transverse cone, writes the operator as
/// `c · ∂_u^m` where `u` is the `Q`-orthogonal lift of the primitive
/// generator of the transverse cone. Returns `(c, u)`.
pub fn normal_form(e: &Expansion, term: &ExpansionTerm) -> Option<(Rational, QVec)> {
    let fd = &e.faces[term.face_index];
    let rays = fd.transverse.cone.rays();
    if rays.len() != 1 || fd.quotient.quotient_dim() != 1 {
        return None;
    }
    let lift = &fd.quotient.orthogonal_lifts(&e.scalar_product)[0];
    let r = Rational::from_integer(rays[0][0].clone());
    let u: QVec = lift.iter().map(|x| x * &r).collect();
    let base = Polynomial::linear(&u).pow(term.m);
    let (exp, c0) = base.terms().next()?;
    let c = term.operator.coeff(exp) / c0;
    (base.scale(&c) == term.operator).then_some((c, u))
}

fn check_t(t: &Rational) -> Result<()> {
    if *t <= Rational::zero() {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    Ok(())
}

/// `∫_f op(∂)h dm_f` for every term.
pub fn term_values(p: &Polyhedron, terms: &[ExpansionTerm], h: &Polynomial) -> Result<Vec<Rational>> {
    if h.dim() != p.dim_ambient() {
        return Err(Error::DimensionMismatch { expected: p.dim_ambient(), got: h.dim() });
    }
    let mut simplices: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for t in terms {
        if !simplices.contains_key(&t.face_index) {
            simplices.insert(t.face_index, face_simplices(p, &t.face)?);
        }
    }
    Ok(terms
        .par_iter()
        .map(|t| {
            let g = t.operator.apply_as_operator(h);
            integrate::integrate_over_simplices(p, &t.face, &simplices[&t.face_index], &g)
        })
        .collect())
}

pub fn coefficients_of_terms(p: &Polyhedron, terms: &[ExpansionTerm], h: &Polynomial, order: u32) -> Result<Vec<Rational>> {
    let vals = term_values(p, terms, h)?;
    let mut out = vec![Rational::zero(); order as usize + 1];
    for (t, v) in terms.iter().zip(vals) {
        if (t.k as usize) < out.len() {
            out[t.k as usize] += v;
        }
    }
    Ok(out)
}

/// `Σ_k t^{-k} Σ ∫_f op(∂)h dm_f` over the given terms.
pub fn evaluate_expansion(p: &Polyhedron, terms: &[ExpansionTerm], h: &Polynomial, t: &Rational) -> Result<Rational> {
    check_t(t)?;
    let vals = term_values(p, terms, h)?;
    let tinv = Rational::one() / t;
    Ok(terms.iter().zip(vals).fold(Rational::zero(), |acc, (term, v)| acc + v * pow(&tinv, term.k)))
}

fn pow(x: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |a, _| a * x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannSumResult {
    pub t: Rational,
    pub value: Rational,
    pub point_count: usize,
}

/// Closed box `[lo, hi]` outside of which the test function vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportBox {
    pub lo: QVec,
    pub hi: QVec,
}

/// Integer points of `tP`, restricted to `t · support` when given.
pub fn dilated_lattice_points(p: &Polyhedron, t: &Rational, support: Option<&SupportBox>) -> Result<Vec<Vec<BigInt>>> {
    let d = p.dim_ambient();
    let (lo, hi): (Vec<BigInt>, Vec<BigInt>) = match (p.bounding_box(t), support) {
        (Ok((lo, hi)), None) => (lo, hi),
        (Ok((lo, hi)), Some(b)) => (
            (0..d).map(|i| lo[i].clone().max((&b.lo[i] * t).ceil().to_integer())).collect(),
            (0..d).map(|i| hi[i].clone().min((&b.hi[i] * t).floor().to_integer())).collect(),
        ),
        (Err(_), Some(b)) => (
            (0..d).map(|i| (&b.lo[i] * t).ceil().to_integer()).collect(),
            (0..d).map(|i| (&b.hi[i] * t).floor().to_integer()).collect(),
        ),
        (Err(e), None) => return Err(e),
    };
    if d == 0 {
        return Ok(vec![Vec::new()]);
    }
    if (0..d).any(|i| lo[i] > hi[i]) {
        return Ok(Vec::new());
    }
    let first: Vec<BigInt> = num_iter(&lo[0], &hi[0]);
    let pts: Vec<Vec<Vec<BigInt>>> = first
        .par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            let mut cur = vec![x0.clone()];
            enumerate_rest(p, t, &lo, &hi, &mut cur, &mut out);
            out
        })
        .collect();
    Ok(pts.into_iter().flatten().collect())
}

fn num_iter(lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = lo.clone();
    while x <= *hi {
        out.push(x.clone());
        x += 1;
    }
    out
}

fn enumerate_rest(p: &Polyhedron, t: &Rational, lo: &[BigInt], hi: &[BigInt], cur: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) {
    let i = cur.len();
    if i == lo.len() {
        let xq: QVec = cur.iter().map(|x| Rational::from_integer(x.clone())).collect();
        if p.contains_dilated(&xq, t) {
            out.push(cur.clone());
        }
        return;
    }
    for x in num_iter(&lo[i], &hi[i]) {
        cur.push(x);
        enumerate_rest(p, t, lo, hi, cur, out);
        cur.pop();
    }
}

/// `t^{-ℓ} Σ_{x ∈ tP ∩ ℤ^d} h(x/t)` by enumeration. Unbounded polyhedra need a
/// support box for `h`, which is then treated as `h · 1_box`.
pub fn riemann_sum_oracle(p: &Polyhedron, h: &Polynomial, t: &Rational, support: Option<&SupportBox>) -> Result<RiemannSumResult> {
    check_t(t)?;
    if h.dim() != p.dim_ambient() {
        return Err(Error::DimensionMismatch { expected: p.dim_ambient(), got: h.dim() });
    }
    let pts = dilated_lattice_points(p, t, support)?;
    let d = p.dim_ambient();
    let tinv = Rational::one() / t;
    let scaled = h.substitute_linear(
        &(0..d).map(|i| (0..d).map(|j| if i == j { tinv.clone() } else { Rational::zero() }).collect()).collect::<Vec<_>>(),
        d,
    );
    let sum = pts
        .par_iter()
        .map(|x| scaled.eval(&x.iter().map(|v| Rational::from_integer(v.clone())).collect::<Vec<_>>()))
        .reduce(Rational::zero, |a, b| a + b);
    let value = sum * pow(&tinv, p.dimension() as u32);
    Ok(RiemannSumResult { t: t.clone(), value, point_count: pts.len() })
}

/// Ehrhart polynomial of a lattice polytope from the `h = 1` expansion:
/// entry `k` is the coefficient of `t^{ℓ−k}`.
pub fn ehrhart(p: &Polyhedron, q: &ScalarProduct) -> Result<Vec<Rational>> {
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    let ell = p.dimension() as u32;
    let e = expansion_terms(p, q, ell, TClass::IntegerLattice)?;
    e.coefficients(&Polynomial::one(p.dim_ambient()), &Rational::one())
}

/// `Σ_k c_k t^{ℓ−k}`.
pub fn ehrhart_eval(coeffs: &[Rational], t: &Rational) -> Rational {
    let ell = coeffs.len().saturating_sub(1) as u32;
    coeffs.iter().enumerate().fold(Rational::zero(), |acc, (k, c)| acc + c * pow(t, ell - k as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, qvec, rat};

    fn unit_triangle() -> Polyhedron {
        Polyhedron::lattice_polytope(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn vertex_constants(e: &Expansion) -> Vec<(QVec, Rational)> {
        let p = &e.polyhedron;
        let mut out: Vec<(QVec, Rational)> = e
            .terms
            .iter()
            .filter(|t| t.face.dim == 0 && t.k == 2)
            .map(|t| (p.vertices()[t.face.vertices[0]].clone(), t.operator.constant_term()))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn unit_triangle_terms() {
        let e = expansion_terms(&unit_triangle(), &ScalarProduct::identity(2), 2, TClass::IntegerLattice).unwrap();
        assert_eq!(
            vertex_constants(&e),
            vec![(qvec(&[0, 0]), rat(1, 4)), (qvec(&[0, 1]), rat(3, 8)), (qvec(&[1, 0]), rat(3, 8))]
        );
        for t in e.terms.iter().filter(|t| t.face.dim == 1) {
            match t.k {
                1 => assert_eq!(t.operator, Polynomial::constant(2, rat(1, 2))),
                2 => assert!(t.operator.is_homogeneous_of(1)),
                _ => unreachable!(),
            }
        }
        let diag = e.terms.iter().find(|t| t.face.dim == 1 && t.k == 2 && t.operator.num_terms() == 2).unwrap();
        // -1/12 times the normal derivative -(∂1 + ∂2)/2
        assert_eq!(diag.operator, Polynomial::parse("1/24*x1 + 1/24*x2", 2).unwrap());
    }

    #[test]
    fn normal_forms_of_edge_terms() {
        let e = expansion_terms(&unit_triangle(), &ScalarProduct::identity(2), 2, TClass::IntegerLattice).unwrap();
        for t in e.terms.iter().filter(|t| t.face.dim == 1) {
            let (c, u) = normal_form(&e, t).unwrap();
            assert_eq!(c, if t.k == 1 { rat(1, 2) } else { rat(-1, 12) });
            if t.operator.num_terms() == 2 {
                assert_eq!(u, vec![rat(-1, 2), rat(-1, 2)]);
            }
        }
        assert!(e.terms.iter().filter(|t| t.face.dim == 0).all(|t| normal_form(&e, t).is_none()));
    }

    #[test]
    fn ehrhart_of_triangles() {
        let q = ScalarProduct::identity(2);
        assert_eq!(ehrhart(&unit_triangle(), &q).unwrap(), vec![rat(1, 2), rat(3, 2), int(1)]);
        let p = Polyhedron::lattice_polytope(&[vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(ehrhart(&p, &q).unwrap(), vec![int(3), int(3), int(1)]);
    }

    #[test]
    fn oracle_counts() {
        let p = unit_triangle();
        let one = Polynomial::one(2);
        let r = riemann_sum_oracle(&p, &one, &int(2), None).unwrap();
        assert_eq!((r.point_count, r.value), (6, rat(3, 2)));
        let x1 = Polynomial::var(2, 0);
        assert_eq!(riemann_sum_oracle(&p, &x1, &int(1), None).unwrap().value, int(1));
        assert_eq!(riemann_sum_oracle(&p, &Polynomial::zero(2), &int(3), None).unwrap().value, int(0));
    }

    #[test]
    fn exact_on_a_lattice_segment_in_the_plane() {
        // not full-dimensional: measure normalized on lin(P) ∩ ℤ^2
        let p = Polyhedron::lattice_polytope(&[vec![0, 1], vec![2, 3]]).unwrap();
        let h = Polynomial::parse("x1^2*x2 + 3", 2).unwrap();
        let e = expansion_terms(&p, &ScalarProduct::identity(2), 4, TClass::IntegerLattice).unwrap();
        for t in 1..=4 {
            let t = int(t);
            assert_eq!(e.evaluate(&h, &t).unwrap(), riemann_sum_oracle(&p, &h, &t, None).unwrap().value);
        }
    }

    #[test]
    fn rational_t_on_the_unit_triangle() {
        let p = unit_triangle();
        let e = expansion_terms(&p, &ScalarProduct::identity(2), 4, TClass::RationalT).unwrap();
        let h = Polynomial::parse("x1^2 - x2 + 1/3", 2).unwrap();
        for t in [rat(1, 2), rat(3, 2), rat(7, 3), rat(5, 4)] {
            assert_eq!(e.evaluate(&h, &t).unwrap(), riemann_sum_oracle(&p, &h, &t, None).unwrap().value, "t = {t}");
        }
        let ei = expansion_terms(&p, &ScalarProduct::identity(2), 4, TClass::IntegerLattice).unwrap();
        assert!(matches!(ei.terms_at(&rat(1, 2)), Err(Error::InvalidArgument(_))));
        assert_eq!(ei.terms_at(&int(3)).unwrap(), e.terms_at(&int(3)).unwrap());
    }

    #[test]
    fn non_lattice_rejected_in_integer_mode() {
        let p = Polyhedron::from_generators(1, vec![vec![rat(1, 2)], vec![int(2)]], vec![], vec![]).unwrap();
        let r = expansion_terms(&p, &ScalarProduct::identity(1), 2, TClass::IntegerLattice);
        assert!(matches!(r, Err(Error::NotLattice(_))));
    }
}
