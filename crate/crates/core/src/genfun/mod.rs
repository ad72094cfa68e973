//! Generating functions `S(a)` and `I(a)` of affine cones as truncated
//! meromorphic germs.

mod residue;

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::poly::inv_factorial;
use crate::algebra::rational::{to_f64, vec_sub, z_to_q, QVec, Rational, ZVec};
use crate::algebra::{bernoulli_number, LinearForm, Polynomial};
use crate::error::{Error, Result};
use crate::hyperfrac::HyperFraction;
use crate::lattice;
use crate::polyhedra::subdivision_points as parallelepiped_points;
use crate::polyhedra::{simplicial_subdivision_with_pivot, AffineCone, Cone, HalfOpenCone};

pub use residue::residue_check;

/// `g(ξ) / ∏ <ξ, v_j>^{n_j}` with `g` known up to total degree `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeromorphicGerm {
    numerator: Polynomial,
    poles: Vec<(LinearForm, u32)>,
    depth: usize,
}

impl MeromorphicGerm {
    /// Canonicalizes the pole forms; the numerator is truncated at `depth`.
    pub fn new(numerator: Polynomial, poles: Vec<(LinearForm, u32)>, depth: usize) -> Result<Self> {
        let f = HyperFraction::new(numerator.truncate(depth as u32), poles)?;
        Ok(Self { numerator: f.numerator().clone(), poles: f.poles().to_vec(), depth })
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

    /// Highest numerator degree carried.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.poles.iter().map(|(_, m)| m).sum()
    }

    /// Highest homogeneous degree available.
    pub fn max_degree(&self) -> i64 {
        self.depth as i64 - self.total_multiplicity() as i64
    }

    /// The homogeneous component of degree `m`: `g_[m+n] / ∏ poles`.
    pub fn component(&self, m: i64) -> Result<HyperFraction> {
        let n = self.total_multiplicity() as i64;
        if m < -n || m > self.max_degree() {
            return Err(Error::DegreeOutOfRange(m));
        }
        HyperFraction::new(self.numerator.homogeneous_part((m + n) as u32), self.poles.clone())
    }

    /// Exact sum; the result carries the smaller of the two available degree ranges.
    pub fn add(&self, other: &Self) -> Self {
        let mut mult: BTreeMap<LinearForm, u32> = BTreeMap::new();
        for (v, m) in self.poles.iter().chain(other.poles.iter()) {
            let e = mult.entry(v.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let n: u32 = mult.values().sum();
        let order = self.max_degree().min(other.max_degree());
        let depth = (order + n as i64).max(0) as usize;
        let lift = |g: &Self| {
            let mut p = g.numerator.clone();
            for (v, m) in &mult {
                let have = g.poles.iter().find(|(w, _)| w == v).map_or(0, |(_, k)| *k);
                if *m > have {
                    p = p.mul_truncated(&v.to_polynomial().pow(m - have), depth as u32);
                }
            }
            p.truncate(depth as u32)
        };
        let num = &lift(self) + &lift(other);
        Self { numerator: num, poles: mult.into_iter().collect(), depth }
    }

    /// Multiplies by `e^{<ξ, s>}`.
    pub fn mul_exp(&self, s: &[Rational]) -> Self {
        let e = exp_series(&[s.to_vec()], self.depth as u32);
        Self { numerator: self.numerator.mul_truncated(&e, self.depth as u32), poles: self.poles.clone(), depth: self.depth }
    }

    /// Floating-point value of the truncated series at `ξ`.
    pub fn eval_f64(&self, xi: &[f64]) -> f64 {
        let mut d = 1.0;
        for (v, m) in &self.poles {
            let x: f64 = v.coeffs.iter().zip(xi).map(|(a, b)| to_f64(a) * b).sum();
            d *= x.powi(*m as i32);
        }
        self.numerator.eval_f64(xi) / d
    }
}

/// `Σ_x e^{<ξ, x>}` truncated at total degree `depth`.
pub fn exp_series(points: &[QVec], depth: u32) -> Polynomial {
    let dim = points.first().map_or(0, |p| p.len());
    let mut out = Polynomial::zero(dim);
    for x in points {
        let l = Polynomial::linear(x);
        let mut pow = Polynomial::one(dim);
        for k in 0..=depth {
            out = &out + &pow.scale(&inv_factorial(k));
            if k < depth {
                pow = &pow * &l;
            }
        }
    }
    out
}

/// `z / (e^z - 1)` at `z = <ξ, w>`, truncated at degree `depth`.
pub fn todd_series(w: &[Rational], depth: u32) -> Polynomial {
    let l = Polynomial::linear(w);
    let mut out = Polynomial::zero(w.len());
    let mut pow = Polynomial::one(w.len());
    for k in 0..=depth {
        let b = bernoulli_number(k);
        if !b.is_zero() {
            out = &out + &pow.scale(&(b * inv_factorial(k)));
        }
        if k < depth {
            pow = &pow * &l;
        }
    }
    out
}

/// Lattice points of the half-open fundamental parallelepiped of a
/// simplicial affine cone.
#[derive(Clone, Debug)]
pub struct BoxSum {
    pub vertex: QVec,
    pub generators: Vec<ZVec>,
    pub points: Vec<ZVec>,
}

/// Lattice points of `s + Σ_j [0,1) g_j`, with `(0,1]` for marked generators.
pub fn box_points(s: &[Rational], gens: &[ZVec], open_marks: &[bool]) -> Result<BoxSum> {
    let open: Vec<bool> = if open_marks.is_empty() { vec![false; gens.len()] } else { open_marks.to_vec() };
    let pts = parallelepiped_points(s, gens, &open)?;
    Ok(BoxSum { vertex: s.to_vec(), generators: gens.to_vec(), points: pts.into_iter().map(|p| p.0).collect() })
}

fn piece_numerator(vertex: &[Rational], piece: &HalfOpenCone, depth: u32, shifted: bool) -> Result<Polynomial> {
    let bx = box_points(vertex, &piece.rays, &piece.open)?;
    let dim = vertex.len();
    if bx.points.is_empty() {
        return Ok(Polynomial::zero(dim));
    }
    let pts: Vec<QVec> =
        bx.points.iter().map(|p| if shifted { vec_sub(&z_to_q(p), vertex) } else { z_to_q(p) }).collect();
    let mut num = exp_series(&pts, depth);
    for w in &piece.rays {
        num = num.mul_truncated(&todd_series(&z_to_q(w), depth), depth);
    }
    if piece.rays.len() % 2 == 1 {
        num = -&num;
    }
    Ok(num)
}

fn generating_germ(a: &AffineCone, order: u32, pivot: usize, shifted: bool) -> Result<MeromorphicGerm> {
    let c = &a.cone;
    if !c.is_pointed() {
        return Err(Error::NotPointed);
    }
    let n = c.rays().len() as u32;
    let depth = order + n;
    let pieces = simplicial_subdivision_with_pivot(c, pivot)?;
    let mut total = Polynomial::zero(a.dim_ambient());
    for piece in &pieces {
        let mut num = piece_numerator(&a.vertex, piece, depth, shifted)?;
        for r in c.rays() {
            if !piece.rays.contains(r) {
                num = num.mul_truncated(&Polynomial::linear(&z_to_q(r)), depth);
            }
        }
        total = &total + &num;
    }
    let poles = c.rays().iter().map(|r| (LinearForm::new(z_to_q(r)), 1)).collect();
    MeromorphicGerm::new(total, poles, depth as usize)
}

/// `S(a)(ξ) = Σ_{x ∈ a ∩ ℤ^d} e^{<ξ, x>}` as a germ whose homogeneous
/// components are available up to degree `order`.
pub fn s_affine_cone(a: &AffineCone, order: u32) -> Result<MeromorphicGerm> {
    generating_germ(a, order, 0, false)
}

/// `S(a)` computed through the pulling triangulation from ray `pivot`.
pub fn s_affine_cone_with_pivot(a: &AffineCone, order: u32, pivot: usize) -> Result<MeromorphicGerm> {
    generating_germ(a, order, pivot, false)
}

/// The shifted generating function `M(s, c) = e^{-<ξ, s>} S(s + c)`.
pub fn shifted_generating_function(a: &AffineCone, order: u32) -> Result<MeromorphicGerm> {
    generating_germ(a, order, 0, true)
}

/// `e^{<ξ, s>}` times a homogeneous fraction.
#[derive(Clone, Debug)]
pub struct ExpFraction {
    pub shift: QVec,
    pub fraction: HyperFraction,
}

impl ExpFraction {
    pub fn to_germ(&self, order: u32) -> Result<MeromorphicGerm> {
        let n = self.fraction.total_multiplicity();
        let depth = (order as i64 + n as i64 + self.fraction.numerator().degree().unwrap_or(0) as i64) as usize;
        let g = MeromorphicGerm::new(self.fraction.numerator().clone(), self.fraction.poles().to_vec(), depth)?;
        Ok(g.mul_exp(&self.shift))
    }
}

fn simplex_integral(rays: &[ZVec], dim: usize) -> HyperFraction {
    let rq: Vec<QVec> = rays.iter().map(|r| z_to_q(r)).collect();
    let basis = lattice::lattice_basis(&rq, dim);
    let det = if rays.is_empty() { Rational::one() } else { lattice::lattice_det(&rq, &basis) };
    let sign = if rays.len() % 2 == 1 { -Rational::one() } else { Rational::one() };
    let poles = rq.into_iter().map(|r| (LinearForm::new(r), 1)).collect();
    HyperFraction::new(Polynomial::constant(dim, sign * det), poles).expect("rays are nonzero")
}

/// `I(s + c) = (-1)^ℓ e^{<ξ,s>} |det_Λ(v)| / ∏ <ξ, v_j>` for simplicial `c`.
pub fn i_affine_cone(a: &AffineCone) -> Result<ExpFraction> {
    if !a.cone.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    Ok(ExpFraction { shift: a.vertex.clone(), fraction: simplex_integral(a.cone.rays(), a.dim_ambient()) })
}

/// `e^{-<ξ,s>} I(s + c)` for any pointed cone, summed over a triangulation.
pub fn integral_fraction(c: &Cone) -> Result<HyperFraction> {
    let pieces = simplicial_subdivision_with_pivot(c, 0)?;
    let d = c.dim_ambient();
    Ok(pieces.iter().fold(HyperFraction::zero(d), |acc, p| acc.add(&simplex_integral(&p.rays, d))))
}

/// The homogeneous component of degree `m` of a germ.
pub fn homogeneous_component(g: &MeromorphicGerm, m: i64) -> Result<HyperFraction> {
    g.component(m)
}

/// Closed-form floating-point value of `S(a)(ξ)` (for `ξ` in the dual cone interior).
pub fn generating_function_value(a: &AffineCone, xi: &[f64]) -> Result<f64> {
    let pair = |x: &ZVec| -> f64 { x.iter().zip(xi).map(|(a, b)| a.to_f64().unwrap_or(f64::NAN) * b).sum() };
    let pieces = simplicial_subdivision_with_pivot(&a.cone, 0)?;
    let mut total = 0.0;
    for p in &pieces {
        let bx = box_points(&a.vertex, &p.rays, &p.open)?;
        let num: f64 = bx.points.iter().map(|x| pair(x).exp()).sum();
        let den: f64 = p.rays.iter().map(|w| 1.0 - pair(w).exp()).product();
        total += num / den;
    }
    Ok(total)
}
