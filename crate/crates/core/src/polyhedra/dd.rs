//! Double description for cones `{y : <c_i, y> >= 0}`.

use num_traits::{Signed, Zero};

use crate::algebra::linalg;
use crate::algebra::rational::{dot, primitive, z_to_q, QVec, Rational};

/// Lineality basis and extreme rays (primitive integral) of a cone.
#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub lines: Vec<QVec>,
    pub rays: Vec<QVec>,
}

struct Ray {
    v: QVec,
    tight: Vec<usize>,
}

fn normalize(v: &[Rational]) -> QVec {
    match primitive(v) {
        Some((p, _)) => z_to_q(&p),
        None => v.to_vec(),
    }
}

/// Generators of `{y ∈ Q^n : <c, y> >= 0 for c in constraints}`.
pub fn cone_generators(constraints: &[QVec], n: usize) -> Generators {
    let mut lines: Vec<QVec> = linalg::identity(n);
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed: Vec<QVec> = Vec::new();
    for c in constraints {
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        let idx = processed.len();
        processed.push(c.clone());
        if let Some(li) = lines.iter().position(|l| !dot(c, l).is_zero()) {
            let mut l = lines.remove(li);
            let mut cl = dot(c, &l);
            if cl.is_negative() {
                l = l.iter().map(|x| -x).collect();
                cl = -cl;
            }
            for other in lines.iter_mut() {
                let f = dot(c, other) / &cl;
                if !f.is_zero() {
                    for (o, x) in other.iter_mut().zip(&l) {
                        *o -= &f * x;
                    }
                }
            }
            for r in rays.iter_mut() {
                let f = dot(c, &r.v) / &cl;
                if !f.is_zero() {
                    for (o, x) in r.v.iter_mut().zip(&l) {
                        *o -= &f * x;
                    }
                    r.v = normalize(&r.v);
                }
                r.tight.push(idx);
            }
            // the new ray is tight on every earlier constraint (they vanish on lines)
            let tight: Vec<usize> = (0..idx).collect();
            rays.push(Ray { v: normalize(&l), tight });
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| dot(c, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let target = n.saturating_sub(lines.len() + 2);
        let mut new_rays: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<usize> =
                    rays[p].tight.iter().filter(|t| rays[q].tight.contains(t)).cloned().collect();
                if common.len() < target {
                    continue;
                }
                let rows: Vec<QVec> = common.iter().map(|&t| processed[t].clone()).collect();
                if linalg::rank(&rows) != target {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let v: QVec = rays[q].v.iter().zip(&rays[p].v).map(|(x, y)| a * x + &b * y).collect();
                let mut tight = common;
                tight.push(idx);
                new_rays.push(Ray { v: normalize(&v), tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight.push(idx);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }
    let mut out: Vec<QVec> = Vec::new();
    for r in rays {
        if !out.contains(&r.v) {
            out.push(r.v);
        }
    }
    Generators { lines, rays: out }
}

/// Facet description of `cone(generators)`: returns `(equations, facet
/// normals)` with `<n, y> >= 0` on the cone and `<e, y> = 0` for equations.
pub fn cone_facets(generators: &[QVec], n: usize) -> (Vec<QVec>, Vec<QVec>) {
    let dual = cone_generators(generators, n);
    (dual.lines, dual.rays)
}
