//! μ-functions of affine cones by renormalization, and the local
//! Euler–Maclaurin decomposition `S(a) = Σ_f μ(t(a, f)) I(f)`.

use num_traits::Signed;

use crate::algebra::rational::{z_to_q, QVec, Rational};
use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::genfun::{exp_series, integral_fraction, s_affine_cone, shifted_generating_function};
use crate::hyperfrac::{HyperFraction, ScalarProduct};
use crate::polyhedra::{transverse_cone, AffineCone, Cone, Face, Polyhedron, QuotientLattice};

/// Homogeneous components `μ_[0..=N]` of `μ_Q(a)`.
#[derive(Clone, Debug)]
pub struct MuFunction {
    /// The cone, in its own coordinates.
    pub cone: AffineCone,
    /// Quotient data when the cone lives in `V / L`.
    pub quotient: Option<QuotientLattice>,
    pub scalar_product: ScalarProduct,
    /// Components as polynomials on the ambient dual space.
    pub components: Vec<Polynomial>,
    /// Components in the cone's own dual coordinates.
    pub local_components: Vec<Polynomial>,
}

impl MuFunction {
    pub fn order(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn component(&self, m: usize) -> Polynomial {
        self.components.get(m).cloned().unwrap_or_else(|| Polynomial::zero(self.ambient_dim()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.quotient.as_ref().map_or(self.cone.dim_ambient(), |q| q.dim)
    }

    /// `Σ_m μ_[m]` truncated at the stored order.
    pub fn total(&self) -> Polynomial {
        self.components.iter().fold(Polynomial::zero(self.ambient_dim()), |a, p| &a + p)
    }
}

/// `μ_Q(a)_[m] = R_Q(M(s, c)_[m])` for `m ≤ order`.
pub fn mu(a: &AffineCone, q: &ScalarProduct, order: u32) -> Result<MuFunction> {
    if !a.cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    if q.dim() != a.dim_ambient() {
        return Err(Error::DimensionMismatch { expected: a.dim_ambient(), got: q.dim() });
    }
    let m = shifted_generating_function(a, order)?;
    let parts = m.renormalize(q, order)?;
    Ok(MuFunction {
        cone: a.clone(),
        quotient: None,
        scalar_product: q.clone(),
        components: parts.clone(),
        local_components: parts,
    })
}

/// μ of a cone living in `V / L`, computed with the projected lattice and
/// the scalar product induced through `L^⊥Q`, then pulled back to `V*`.
pub fn mu_embedded(a: &AffineCone, ql: &QuotientLattice, q: &ScalarProduct, order: u32) -> Result<MuFunction> {
    let d = ql.dim;
    if ql.quotient_dim() == 0 {
        // the zero space: μ({0}) = 1
        let mut components = vec![Polynomial::one(d)];
        components.extend((0..order).map(|_| Polynomial::zero(d)));
        return Ok(MuFunction {
            cone: a.clone(),
            quotient: Some(ql.clone()),
            scalar_product: q.clone(),
            components,
            local_components: vec![Polynomial::one(0); order as usize + 1],
        });
    }
    let induced = ql.induced_product(q);
    let local = mu(a, &induced, order)?;
    let rows = ql.orthogonal_lifts(q);
    let components = local.local_components.iter().map(|p| p.substitute_linear(&rows, d)).collect();
    Ok(MuFunction {
        cone: a.clone(),
        quotient: Some(ql.clone()),
        scalar_product: q.clone(),
        components,
        local_components: local.local_components,
    })
}

/// `μ(t · a)` for a transverse cone `a` and rational `t > 0`.
pub fn mu_at_dilation(
    a: &AffineCone,
    ql: &QuotientLattice,
    t: &Rational,
    q: &ScalarProduct,
    order: u32,
) -> Result<MuFunction> {
    if !t.is_positive() {
        return Err(Error::InvalidArgument("dilation parameter must be positive".into()));
    }
    mu_embedded(&a.dilate(t), ql, q, order)
}

/// Per-face data of the local Euler–Maclaurin decomposition.
#[derive(Clone, Debug)]
pub struct FaceTerm {
    pub face: Face,
    pub mu: MuFunction,
    /// `e^{-<ξ,s>} I(f)`, homogeneous of degree `-dim f`.
    pub integral: HyperFraction,
}

/// `S(a) = Σ_f μ(t(a, f)) I(f)` for a pointed affine cone.
#[derive(Clone, Debug)]
pub struct LocalEMLDecomposition {
    pub cone: AffineCone,
    pub polyhedron: Polyhedron,
    pub per_face: Vec<FaceTerm>,
    /// Highest degree `m` of `S(a)_[m]` that can be reconstructed.
    pub depth: i64,
}

impl LocalEMLDecomposition {
    /// `Σ_f μ_f[m + dim f] I(f_c)`, the degree-`m` part of `e^{-<ξ,s>} S(a)`.
    pub fn reconstruct_shifted(&self, m: i64) -> HyperFraction {
        let d = self.cone.dim_ambient();
        let mut acc = HyperFraction::zero(d);
        for t in &self.per_face {
            let k = m + t.face.dim as i64;
            if k < 0 {
                continue;
            }
            let mu_k = t.mu.component(k as usize);
            if mu_k.is_zero() {
                continue;
            }
            acc = acc.add(&t.integral.mul_poly(&mu_k));
        }
        acc
    }

    /// The degree-`m` part of `S(a)` itself: `Σ_k <ξ,s>^k / k! · M_[m-k]`.
    pub fn reconstruct(&self, m: i64) -> HyperFraction {
        let d = self.cone.dim_ambient();
        let ell = self.cone.cone.dimension() as i64;
        let e = exp_series(&[self.cone.vertex.clone()], (m + ell).max(0) as u32);
        let mut acc = HyperFraction::zero(d);
        for k in 0..=(m + ell).max(0) {
            let part = e.homogeneous_part(k as u32);
            if part.is_zero() {
                continue;
            }
            acc = acc.add(&self.reconstruct_shifted(m - k).mul_poly(&part));
        }
        acc
    }

    /// Compares the reconstruction with `S(a)_[m]` for all `m ∈ [-ℓ, depth]`.
    pub fn verify(&self) -> Result<Vec<i64>> {
        let ell = self.cone.cone.dimension() as i64;
        let order = self.depth.max(0) as u32;
        let s = s_affine_cone(&self.cone, order)?;
        let mut bad = Vec::new();
        for m in -ell..=self.depth {
            if !self.reconstruct(m).value_eq(&s.component(m)?) {
                bad.push(m);
            }
        }
        Ok(bad)
    }
}

/// Computes `μ(t(a, f))` and `I(f)` for every face of `a`.
pub fn local_eml(a: &AffineCone, q: &ScalarProduct, depth: u32) -> Result<LocalEMLDecomposition> {
    if !a.cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    let p = a.to_polyhedron();
    let d = a.dim_ambient();
    let mut per_face = Vec::new();
    for f in p.faces() {
        let (tc, ql) = transverse_cone(&p, f)?;
        let order = depth + f.dim as u32;
        let mu = mu_embedded(&tc, &ql, q, order)?;
        let rays: Vec<QVec> = f.rays.iter().map(|&i| z_to_q(&p.rays()[i])).collect();
        let fc = Cone::from_generators(d, &rays);
        let integral = integral_fraction(&fc)?;
        per_face.push(FaceTerm { face: f.clone(), mu, integral });
    }
    Ok(LocalEMLDecomposition { cone: a.clone(), polyhedron: p, per_face, depth: depth as i64 })
}

/// Whether `p` is unchanged by `ξ → ξ + Q x` for every `x` in `span(dirs)`.
pub fn is_normal_invariant(p: &Polynomial, q: &ScalarProduct, dirs: &[QVec]) -> bool {
    dirs.iter().all(|x| {
        let qx = q.lower(x);
        p.directional_derivative(&qx).is_zero()
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{qvec, rat};
    use crate::algebra::{bernoulli_eval, bernoulli_number, frac_part};
    use crate::algebra::poly::inv_factorial;

    fn std_q(d: usize) -> ScalarProduct {
        ScalarProduct::identity(d)
    }

    #[test]
    fn half_line() {
        let a = AffineCone::from_ints(qvec(&[0]), &[vec![1]]);
        let m = mu(&a, &std_q(1), 4).unwrap();
        for k in 0..=4u32 {
            let expected = -bernoulli_number(k + 1) * inv_factorial(k + 1);
            assert_eq!(m.components[k as usize], Polynomial::monomial(vec![k], expected));
        }
        assert_eq!(m.components[0].constant_term(), rat(1, 2));
    }

    #[test]
    fn shifted_half_line() {
        for s in [rat(1, 3), rat(-5, 4), rat(7, 2), rat(2, 1)] {
            let a = AffineCone::new(vec![s.clone()], Cone::from_int_generators(1, &[crate::algebra::rational::zvec(&[1])]));
            let m = mu(&a, &std_q(1), 3).unwrap();
            for k in 0..=3u32 {
                let expected = -bernoulli_eval(k + 1, &frac_part(&-s.clone())) * inv_factorial(k + 1);
                assert_eq!(m.components[k as usize], Polynomial::monomial(vec![k], expected), "s = {s}");
            }
        }
    }

    #[test]
    fn zero_cone_and_lattice_shift() {
        let z = AffineCone::new(qvec(&[0, 0]), Cone::from_generators(2, &[]));
        let m = mu(&z, &std_q(2), 2).unwrap();
        assert_eq!(m.components[0], Polynomial::one(2));
        let off = AffineCone::new(vec![rat(1, 2), rat(0, 1)], Cone::from_generators(2, &[]));
        assert!(mu(&off, &std_q(2), 2).unwrap().components.iter().all(|p| p.is_zero()));
        let a = AffineCone::from_ints(vec![rat(1, 3), rat(0, 1)], &[vec![1, 0], vec![1, 2]]);
        let b = a.translate(&qvec(&[2, -1]));
        assert_eq!(mu(&a, &std_q(2), 3).unwrap().components, mu(&b, &std_q(2), 3).unwrap().components);
    }

    #[test]
    fn two_dimensional_constant() {
        let a = AffineCone::from_ints(qvec(&[0, 0]), &[vec![1, 0], vec![1, 1]]);
        let m = mu(&a, &std_q(2), 1).unwrap();
        assert_eq!(m.components[0], Polynomial::constant(2, rat(3, 8)));
    }

    #[test]
    fn local_eml_of_small_cones() {
        for gens in [vec![vec![1]], vec![vec![1, 0], vec![1, 1]], vec![vec![1, 0], vec![1, 3]]] {
            let d = gens[0].len();
            let a = AffineCone::from_ints(vec![rat(0, 1); d], &gens);
            let dec = local_eml(&a, &std_q(d), 2).unwrap();
            assert!(dec.verify().unwrap().is_empty());
        }
        let a = AffineCone::from_ints(vec![rat(1, 2), rat(-2, 3)], &[vec![1, 0], vec![2, 3]]);
        let dec = local_eml(&a, &std_q(2), 2).unwrap();
        assert!(dec.verify().unwrap().is_empty());
    }

    #[test]
    fn embedded_mu_is_normal() {
        let p = Polyhedron::lattice_polytope(&[vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
        for f in p.faces() {
            let (tc, ql) = transverse_cone(&p, f).unwrap();
            let m = mu_embedded(&tc, &ql, &std_q(2), 3).unwrap();
            for c in &m.components {
                assert!(is_normal_invariant(c, &std_q(2), &f.span_basis_q()));
            }
        }
    }
}
