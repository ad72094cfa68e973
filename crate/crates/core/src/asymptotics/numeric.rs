//! Floating-point evaluation for smooth compactly supported test functions:
//! the Riemann sum by enumeration and face integrals by adaptive
//! Gauss–Kronrod quadrature over a triangulation of `f ∩ support`.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{to_f64, QVec, Rational};
use crate::algebra::Polynomial;
use crate::error::{Error, Result};
use crate::polyhedra::Polyhedron;

use super::integrate::{face_simplices, simplex_map};
use super::{dilated_lattice_points, ExpansionTerm, SupportBox};

/// A smooth test function with all partial derivatives.
pub trait SmoothTestFunction: Sync {
    fn dim(&self) -> usize;
    /// `∂^α h(x)`.
    fn partial(&self, alpha: &[u32], x: &[f64]) -> f64;
    /// A closed box containing the support.
    fn support(&self) -> SupportBox;

    fn value(&self, x: &[f64]) -> f64 {
        self.partial(&vec![0; self.dim()], x)
    }

    /// `op(∂) h` as a closure.
    fn apply_operator<'a>(&'a self, op: &Polynomial) -> Box<dyn Fn(&[f64]) -> f64 + Sync + 'a> {
        let terms: Vec<(Vec<u32>, f64)> = op.terms().map(|(e, c)| (e.clone(), to_f64(c))).collect();
        Box::new(move |x| terms.iter().map(|(e, c)| c * self.partial(e, x)).sum())
    }
}

/// `p(x) (1 − ‖x − c‖²/r²)^k` on the ball of radius `r`, zero outside.
#[derive(Clone, Debug)]
pub struct PolynomialBump {
    inside: Polynomial,
    center: QVec,
    radius: Rational,
}

impl PolynomialBump {
    pub fn new(p: &Polynomial, center: QVec, radius: Rational, power: u32) -> Result<Self> {
        let d = p.dim();
        if center.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: center.len() });
        }
        if radius <= Rational::zero() {
            return Err(Error::InvalidArgument("bump radius must be positive".into()));
        }
        let r2 = &radius * &radius;
        let mut base = Polynomial::one(d);
        for (i, c) in center.iter().enumerate() {
            let xi = &Polynomial::var(d, i) - &Polynomial::constant(d, c.clone());
            base = &base - &(&xi * &xi).scale(&(Rational::one() / &r2));
        }
        Ok(Self { inside: p * &base.pow(power), center, radius })
    }

    fn inside_ball(&self, x: &[f64]) -> bool {
        let r = to_f64(&self.radius);
        let d2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - to_f64(c)).powi(2)).sum();
        d2 < r * r
    }
}

impl SmoothTestFunction for PolynomialBump {
    fn dim(&self) -> usize {
        self.inside.dim()
    }

    fn partial(&self, alpha: &[u32], x: &[f64]) -> f64 {
        if !self.inside_ball(x) {
            return 0.0;
        }
        self.inside.partial(alpha).eval_f64(x)
    }

    fn support(&self) -> SupportBox {
        SupportBox {
            lo: self.center.iter().map(|c| c - &self.radius).collect(),
            hi: self.center.iter().map(|c| c + &self.radius).collect(),
        }
    }

    fn apply_operator<'a>(&'a self, op: &Polynomial) -> Box<dyn Fn(&[f64]) -> f64 + Sync + 'a> {
        let g = op.apply_as_operator(&self.inside);
        Box::new(move |x| if self.inside_ball(x) { g.eval_f64(x) } else { 0.0 })
    }
}

type PartialFn = dyn Fn(&[u32], &[f64]) -> f64 + Sync;

/// A test function given by a callable for its partial derivatives.
pub struct FnTestFunction {
    pub dim: usize,
    pub support: SupportBox,
    pub partials: Box<PartialFn>,
}

impl SmoothTestFunction for FnTestFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn partial(&self, alpha: &[u32], x: &[f64]) -> f64 {
        (self.partials)(alpha, x)
    }

    fn support(&self) -> SupportBox {
        self.support.clone()
    }
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WEIGHTS_K[7];
    let mut g = fc * GK_WEIGHTS_G[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += GK_WEIGHTS_K[i] * s;
        if i % 2 == 1 {
            g += GK_WEIGHTS_G[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integral of `f` over `[a, b]`.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth >= 40 || (b - a).abs() < 1e-14 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, tol / 2.0, depth + 1) + rec(f, m, b, tol / 2.0, depth + 1)
    }
    if a == b {
        return 0.0;
    }
    rec(f, a, b, tol, 0)
}

/// Integral over the standard `k`-simplex by iterated 1D quadrature.
pub fn integrate_standard_simplex<F: Fn(&[f64]) -> f64>(f: &F, k: usize, tol: f64) -> f64 {
    fn rec<F: Fn(&[f64]) -> f64>(f: &F, k: usize, prefix: &mut Vec<f64>, rest: f64, tol: f64) -> f64 {
        if prefix.len() == k {
            return f(prefix);
        }
        let g = |x: f64| {
            let mut p = prefix.clone();
            p.push(x);
            rec(f, k, &mut p, rest - x, tol)
        };
        integrate_1d(&g, 0.0, rest.max(0.0), tol)
    }
    rec(f, k, &mut Vec::with_capacity(k), 1.0, tol)
}

/// `∫_{f ∩ box} g dm_f` for a face `f` of `p`, with `box ∩ p` bounded.
pub fn integrate_over_face_numeric<G: Fn(&[f64]) -> f64 + Sync>(
    p: &Polyhedron,
    clipped: &Polyhedron,
    face_index: usize,
    g: &G,
    tol: f64,
) -> Result<f64> {
    let f = &p.faces()[face_index];
    let ineqs = p.inequalities();
    let tight: Vec<usize> = clipped
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            f.active.iter().all(|&i| {
                let (a, b) = &ineqs[i];
                crate::algebra::rational::dot(&crate::algebra::rational::z_to_q(a), v) == *b
            })
        })
        .map(|(i, _)| i)
        .collect();
    if tight.is_empty() {
        return Ok(0.0);
    }
    let Some(g_face) = clipped.faces().iter().find(|h| h.vertices == tight) else { return Ok(0.0) };
    if g_face.dim < f.dim {
        return Ok(0.0);
    }
    let simplices = face_simplices(clipped, g_face)?;
    let parts: Vec<f64> = simplices
        .par_iter()
        .map(|s| {
            let pts: Vec<QVec> = s.iter().map(|&i| clipped.vertices()[i].clone()).collect();
            let (p0, rows, jac) = simplex_map(&pts, &f.span_basis);
            let p0: Vec<f64> = p0.iter().map(to_f64).collect();
            let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(to_f64).collect()).collect();
            let k = pts.len() - 1;
            let pull = |lam: &[f64]| {
                let x: Vec<f64> = (0..p0.len()).map(|i| p0[i] + (0..k).map(|j| rows[i][j] * lam[j]).sum::<f64>()).collect();
                g(&x)
            };
            to_f64(&jac) * integrate_standard_simplex(&pull, k, tol)
        })
        .collect();
    Ok(parts.iter().sum())
}

/// `P ∩ box` as a polytope.
pub fn clip_to_box(p: &Polyhedron, b: &SupportBox) -> Result<Polyhedron> {
    let d = p.dim_ambient();
    let mut ineqs: Vec<(QVec, Rational)> =
        p.inequalities().iter().map(|(a, c)| (crate::algebra::rational::z_to_q(a), c.clone())).collect();
    for (a, c) in p.equations() {
        let aq = crate::algebra::rational::z_to_q(a);
        ineqs.push((aq.iter().map(|x| -x).collect(), -c.clone()));
        ineqs.push((aq, c.clone()));
    }
    for i in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[i] = Rational::one();
        ineqs.push((e.clone(), b.hi[i].clone()));
        ineqs.push((e.iter().map(|x| -x).collect(), -b.lo[i].clone()));
    }
    Polyhedron::from_inequalities(d, &ineqs)
}

/// `t^{-ℓ} Σ_{x ∈ tP ∩ ℤ^d} h(x/t)` in floating point.
pub fn riemann_sum_numeric(p: &Polyhedron, h: &dyn SmoothTestFunction, t: &Rational) -> Result<f64> {
    let pts = dilated_lattice_points(p, t, Some(&h.support()))?;
    let tf = to_f64(t);
    let sum: f64 = pts
        .par_iter()
        .map(|x| {
            let y: Vec<f64> = x.iter().map(|v| to_f64(&Rational::from_integer(v.clone())) / tf).collect();
            h.value(&y)
        })
        .sum();
    Ok(sum / tf.powi(p.dimension() as i32))
}

/// Per-order values `⟨F_k, h⟩` for a smooth test function.
pub fn coefficients_numeric(
    p: &Polyhedron,
    terms: &[ExpansionTerm],
    h: &dyn SmoothTestFunction,
    order: u32,
    tol: f64,
) -> Result<Vec<f64>> {
    if h.dim() != p.dim_ambient() {
        return Err(Error::DimensionMismatch { expected: p.dim_ambient(), got: h.dim() });
    }
    let clipped = clip_to_box(p, &h.support())?;
    let mut out = vec![0.0; order as usize + 1];
    for t in terms.iter().filter(|t| t.k <= order) {
        let g = h.apply_operator(&t.operator);
        out[t.k as usize] += integrate_over_face_numeric(p, &clipped, t.face_index, &g, tol)?;
    }
    Ok(out)
}

/// `Σ_{k ≤ order} t^{-k} ⟨F_k, h⟩`.
pub fn evaluate_expansion_numeric(
    p: &Polyhedron,
    terms: &[ExpansionTerm],
    h: &dyn SmoothTestFunction,
    t: &Rational,
    order: u32,
    tol: f64,
) -> Result<f64> {
    let c = coefficients_numeric(p, terms, h, order, tol)?;
    let tf = to_f64(t);
    Ok(c.iter().enumerate().map(|(k, v)| v / tf.powi(k as i32)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, qvec, rat};
    use crate::asymptotics::{expansion_terms, riemann_sum_oracle, TClass};
    use crate::hyperfrac::ScalarProduct;

    #[test]
    fn quadrature_matches_exact_integrals() {
        let v = integrate_1d(&|x: f64| x.powi(5) - x, 0.0, 2.0, 1e-13);
        assert!((v - (64.0 / 6.0 - 2.0)).abs() < 1e-12);
        let v = integrate_standard_simplex(&|l: &[f64]| l[0] * l[1] * l[1], 2, 1e-13);
        assert!((v - 2.0 / 120.0).abs() < 1e-13);
        let v = integrate_1d(&|x: f64| (1.0 - x * x).max(0.0).powi(4), -2.0, 2.0, 1e-13);
        assert!((v - 256.0 / 315.0).abs() < 1e-11);
    }

    #[test]
    fn numeric_agrees_with_exact_path_on_a_polytope() {
        let p = Polyhedron::lattice_polytope(&[vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
        let h = Polynomial::parse("x1^2*x2 - x2 + 2", 2).unwrap();
        let bump = FnTestFunction {
            dim: 2,
            support: SupportBox { lo: qvec(&[-1, -1]), hi: qvec(&[4, 4]) },
            partials: Box::new(move |a: &[u32], x: &[f64]| h.partial(a).eval_f64(x)),
        };
        let hp = Polynomial::parse("x1^2*x2 - x2 + 2", 2).unwrap();
        let e = expansion_terms(&p, &ScalarProduct::identity(2), 4, TClass::IntegerLattice).unwrap();
        for t in [int(1), int(3)] {
            let exact = e.evaluate(&hp, &t).unwrap();
            let num = evaluate_expansion_numeric(&p, &e.terms, &bump, &t, 4, 1e-12).unwrap();
            assert!((num - to_f64(&exact)).abs() < 1e-9);
            let rs = riemann_sum_numeric(&p, &bump, &t).unwrap();
            assert!((rs - to_f64(&riemann_sum_oracle(&p, &hp, &t, None).unwrap().value)).abs() < 1e-9);
        }
    }

    #[test]
    fn bump_derivatives_vanish_outside() {
        let b = PolynomialBump::new(&Polynomial::one(2), qvec(&[0, 0]), rat(1, 2), 4).unwrap();
        assert_eq!(b.value(&[0.6, 0.0]), 0.0);
        assert!((b.value(&[0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert_eq!(b.support().hi, vec![rat(1, 2), rat(1, 2)]);
    }
}
