use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ray_facets, Cone};
use crate::algebra::linalg::{self, Matrix};
use crate::algebra::rational::{from_big, q_to_z, z_to_q, QVec, Rational, ZVec};
use crate::error::{Error, Result};
use crate::lattice;

/// Simplicial cone with some facets removed. `open[i]` removes the facet
/// opposite to `rays[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfOpenCone {
    pub rays: Vec<ZVec>,
    pub open: Vec<bool>,
}

impl HalfOpenCone {
    pub fn closed(rays: Vec<ZVec>) -> Self {
        let open = vec![false; rays.len()];
        Self { rays, open }
    }

    pub fn rays_q(&self) -> Vec<QVec> {
        self.rays.iter().map(|r| z_to_q(r)).collect()
    }

    /// Coordinates of `x` in the ray basis, if `x ∈ lin`.
    pub fn coordinates(&self, x: &[Rational]) -> Option<QVec> {
        let rq = self.rays_q();
        let l = linalg::coordinates(&rq, x)?;
        let back: QVec = (0..x.len()).map(|i| l.iter().zip(&rq).map(|(c, r)| c * &r[i]).sum()).collect();
        (back == x).then_some(l)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        if self.rays.is_empty() {
            return x.iter().all(Zero::is_zero);
        }
        match self.coordinates(x) {
            None => false,
            Some(l) => l.iter().zip(&self.open).all(|(li, &o)| if o { li.is_positive() } else { !li.is_negative() }),
        }
    }
}

fn pull(idx: &[usize], rays: &[QVec], dim: usize, order: &[usize]) -> Vec<Vec<usize>> {
    let sub: Vec<QVec> = idx.iter().map(|&i| rays[i].clone()).collect();
    if linalg::rank(&sub) == idx.len() {
        return vec![idx.to_vec()];
    }
    let pivot = *order.iter().find(|o| idx.contains(o)).expect("pivot among rays");
    let mut out = Vec::new();
    for facet in ray_facets(&sub, dim) {
        let f: Vec<usize> = facet.iter().map(|&j| idx[j]).collect();
        if f.contains(&pivot) {
            continue;
        }
        for mut s in pull(&f, rays, dim, order) {
            s.push(pivot);
            s.sort();
            out.push(s);
        }
    }
    out
}

/// Marks facets so that the half-open pieces tile `cone(c_rays)` exactly.
/// A facet is removed when a fixed generic interior direction points out
/// of the piece across it.
pub fn half_open_marks(pieces: &[Vec<ZVec>], c_rays: &[ZVec]) -> Vec<Vec<bool>> {
    let dim = c_rays.first().map_or(0, |r| r.len());
    let mut k = BigInt::from(2);
    loop {
        let mut y = vec![Rational::zero(); dim];
        let mut w = BigInt::one();
        for r in c_rays {
            for (yi, ri) in y.iter_mut().zip(r) {
                *yi += from_big(&(&w * ri));
            }
            w *= &k;
        }
        let coords: Vec<QVec> = pieces
            .iter()
            .map(|p| HalfOpenCone::closed(p.clone()).coordinates(&y).expect("interior point lies in the span"))
            .collect();
        if coords.iter().all(|l| l.iter().all(|x| !x.is_zero())) {
            return coords.into_iter().map(|l| l.iter().map(|x| x.is_negative()).collect()).collect();
        }
        k += 1;
    }
}

/// Pulling triangulation of a pointed cone from its ray `pivot`, with half-open marks.
pub fn simplicial_subdivision_with_pivot(c: &Cone, pivot: usize) -> Result<Vec<HalfOpenCone>> {
    if !c.is_pointed() {
        return Err(Error::NotPointed);
    }
    let rays = c.rays_q();
    if rays.is_empty() {
        return Ok(vec![HalfOpenCone::closed(Vec::new())]);
    }
    if c.is_simplicial() {
        return Ok(vec![HalfOpenCone::closed(c.rays().to_vec())]);
    }
    let n = rays.len();
    let pivot = pivot.min(n - 1);
    let mut order = vec![pivot];
    order.extend((0..n).filter(|&i| i != pivot));
    let idx: Vec<usize> = (0..n).collect();
    let simplices = pull(&idx, &rays, c.dim_ambient(), &order);
    let pieces: Vec<Vec<ZVec>> = simplices.iter().map(|s| s.iter().map(|&i| c.rays()[i].clone()).collect()).collect();
    let marks = half_open_marks(&pieces, c.rays());
    Ok(pieces.into_iter().zip(marks).map(|(rays, open)| HalfOpenCone { rays, open }).collect())
}

/// Half-open simplicial subdivision using only the edges of `c`.
pub fn simplicial_subdivision(c: &Cone) -> Result<Vec<HalfOpenCone>> {
    simplicial_subdivision_with_pivot(c, 0)
}

/// Lattice points of `s + Σ I_j gens_j` with `I_j = [0,1)`, or `(0,1]` when
/// `open[j]`, together with their coordinates in the generators.
pub fn parallelepiped_points(s: &[Rational], gens: &[ZVec], open: &[bool]) -> Result<Vec<(ZVec, QVec)>> {
    let n = s.len();
    let k = gens.len();
    let g: Vec<QVec> = gens.iter().map(|v| z_to_q(v)).collect();
    if linalg::rank(&g) < k {
        return Err(Error::DependentVectors);
    }
    if k == 0 {
        return Ok(q_to_z(s).map(|p| vec![(p, Vec::new())]).unwrap_or_default());
    }
    let basis = lattice::lattice_basis(&g, n);
    let bq: Vec<QVec> = basis.iter().map(|b| z_to_q(b)).collect();
    let p0: ZVec = if k == n {
        vec![BigInt::zero(); n]
    } else {
        let perp: Vec<ZVec> = linalg::kernel(&g, n).iter().map(|v| lattice::integralize(v)).collect();
        let rhs: QVec = perp.iter().map(|r| crate::algebra::rational::dot(&z_to_q(r), s)).collect();
        let Some(rhs) = q_to_z(&rhs) else { return Ok(Vec::new()) };
        match lattice::solve_integer(&perp, &rhs, n) {
            Some(p) => p,
            None => return Ok(Vec::new()),
        }
    };
    let diff: QVec = z_to_q(&p0).iter().zip(s).map(|(a, b)| a - b).collect();
    let off = linalg::coordinates(&bq, &diff).expect("offset lies in the span");
    // t[i][j]: coordinate i of generator j in the lattice basis
    let cols: Matrix = g.iter().map(|v| linalg::coordinates(&bq, v).expect("generator in span")).collect();
    let t: Matrix = linalg::transpose(&cols, k);
    let tinv = linalg::inverse(&t).expect("generators are independent");
    let ranges: Vec<(BigInt, BigInt)> = (0..k)
        .map(|i| {
            let lo: Rational = t[i].iter().filter(|x| x.is_negative()).sum();
            let hi: Rational = t[i].iter().filter(|x| x.is_positive()).sum();
            ((lo - &off[i]).ceil().to_integer(), (hi - &off[i]).floor().to_integer())
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(out);
    }
    loop {
        let beta: QVec = cur.iter().zip(&off).map(|(c, o)| from_big(c) + o).collect();
        let lambda = linalg::mat_vec(&tinv, &beta);
        let inside = lambda.iter().zip(open).all(|(l, &o)| {
            if o {
                l.is_positive() && *l <= Rational::one()
            } else {
                !l.is_negative() && *l < Rational::one()
            }
        });
        if inside {
            let x: ZVec = (0..n).map(|i| &p0[i] + cur.iter().zip(&basis).map(|(c, b)| c * &b[i]).sum::<BigInt>()).collect();
            out.push((x, lambda));
        }
        // odometer
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0.clone();
            i += 1;
        }
    }
}

fn stellar(rays: Vec<ZVec>, dim: usize) -> Vec<Vec<ZVec>> {
    let rq: Vec<QVec> = rays.iter().map(|r| z_to_q(r)).collect();
    let basis = lattice::lattice_basis(&rq, dim);
    let index = lattice::lattice_det(&rq, &basis);
    if index.is_one() {
        return vec![rays];
    }
    let zero = vec![Rational::zero(); dim];
    let open = vec![false; rays.len()];
    let pts = parallelepiped_points(&zero, &rays, &open).expect("simplicial rays are independent");
    let (w, lambda) = pts
        .into_iter()
        .filter(|(x, _)| x.iter().any(|v| !v.is_zero()))
        .min_by(|a, b| {
            let sa: Rational = a.1.iter().sum();
            let sb: Rational = b.1.iter().sum();
            sa.cmp(&sb).then_with(|| a.1.cmp(&b.1))
        })
        .expect("non-unimodular cone has a nonzero box point");
    let mut out = Vec::new();
    for i in 0..rays.len() {
        if lambda[i].is_positive() {
            let mut r = rays.clone();
            r[i] = w.clone();
            out.extend(stellar(r, dim));
        }
    }
    out
}

/// Half-open unimodular subdivision of a simplicial cone.
pub fn unimodular_subdivision(c: &Cone) -> Result<Vec<HalfOpenCone>> {
    if !c.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if c.rays().is_empty() {
        return Ok(vec![HalfOpenCone::closed(Vec::new())]);
    }
    let pieces = stellar(c.rays().to_vec(), c.dim_ambient());
    if pieces.len() == 1 {
        return Ok(vec![HalfOpenCone::closed(pieces.into_iter().next().expect("one piece"))]);
    }
    let marks = half_open_marks(&pieces, c.rays());
    Ok(pieces.into_iter().zip(marks).map(|(rays, open)| HalfOpenCone { rays, open }).collect())
}
