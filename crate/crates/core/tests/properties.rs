use std::collections::BTreeMap;

use emk_core::algebra::linalg::subspace_key;
use emk_core::algebra::rational::{int, qvec, rat, to_f64, z_to_q, zvec, QVec, Rational};
use emk_core::algebra::Polynomial;
use emk_core::asymptotics::numeric::{coefficients_numeric, riemann_sum_numeric, PolynomialBump};
use emk_core::asymptotics::{
    dilated_lattice_points, dim1_euler_maclaurin, evaluate_expansion, expansion_terms, SupportBox, TClass,
};
use emk_core::genfun::{generating_function_value, homogeneous_component, s_affine_cone};
use emk_core::hyperfrac::{decompose_simple_poles, HyperFraction, ScalarProduct};
use emk_core::mu::{is_normal_invariant, local_eml, mu, mu_embedded};
use emk_core::polyhedra::{
    simplicial_subdivision, transverse_cone, unimodular_subdivision, AffineCone, Cone, Polyhedron,
};
use proptest::prelude::*;

fn q(d: usize) -> ScalarProduct {
    ScalarProduct::identity(d)
}

fn gram(a: i64, b: i64, c: i64) -> ScalarProduct {
    ScalarProduct::new(vec![vec![int(a), int(b)], vec![int(b), int(c)]]).unwrap()
}

fn gen2() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 2).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn pointed_cone2() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (gen2(), gen2()).prop_filter("independent", |(a, b)| a[0] * b[1] - a[1] * b[0] != 0).prop_map(|(a, b)| vec![a, b])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mu_is_invariant_under_lattice_shifts(gens in pointed_cone2(), s in prop::collection::vec(rational(), 2), z in prop::collection::vec(-5i64..=5, 2)) {
        let a = AffineCone::from_ints(s, &gens);
        let b = a.translate(&qvec(&z));
        prop_assert_eq!(mu(&a, &q(2), 2).unwrap().components, mu(&b, &q(2), 2).unwrap().components);
    }

    #[test]
    fn generating_function_shifts_by_an_exponential(gens in pointed_cone2(), z in prop::collection::vec(-3i64..=3, 2)) {
        let a = AffineCone::from_ints(qvec(&[0, 0]), &gens);
        let b = a.translate(&qvec(&z));
        let ga = s_affine_cone(&a, 2).unwrap().mul_exp(&qvec(&z));
        let gb = s_affine_cone(&b, 2).unwrap();
        for m in -2..=2 {
            prop_assert!(ga.component(m).unwrap().value_eq(&gb.component(m).unwrap()), "degree {}", m);
        }
    }

    #[test]
    fn half_open_pieces_tile_the_cone(
        gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4),
        pts in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 40),
    ) {
        let g: Vec<QVec> = gens.iter().map(|v| qvec(v)).collect();
        let c = Cone::from_generators(3, &g);
        prop_assume!(c.is_pointed() && c.dimension() == 3);
        let simplex = Cone::from_generators(3, &g[..3]);
        prop_assume!(simplex.dimension() == 3);
        for (cone, pieces) in [(&c, simplicial_subdivision(&c).unwrap()), (&simplex, unimodular_subdivision(&simplex).unwrap())] {
            prop_assert!(pieces.iter().all(|p| p.rays.len() == 3));
            for x in &pts {
                let x = qvec(x);
                let hits = pieces.iter().filter(|p| p.contains(&x)).count();
                prop_assert_eq!(hits, usize::from(cone.contains(&x)), "point {:?}", x);
            }
        }
    }

    #[test]
    fn mu_operators_are_normal_invariant(
        pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 4),
        (a, b, c) in (1i64..=4, -2i64..=2, 1i64..=4),
    ) {
        prop_assume!(a * c > b * b);
        let p = Polyhedron::lattice_polytope(&pts);
        prop_assume!(p.as_ref().map(|p| p.dimension() == 2).unwrap_or(false));
        let p = p.unwrap();
        let g = gram(a, b, c);
        for f in p.faces() {
            let (tc, ql) = transverse_cone(&p, f).unwrap();
            let m = mu_embedded(&tc, &ql, &g, 2).unwrap();
            for comp in &m.components {
                prop_assert!(is_normal_invariant(comp, &g, &f.span_basis_q()));
            }
        }
    }

    #[test]
    fn one_dimensional_formula_is_an_identity(
        s in rational(), len in (0i64..=20, 1i64..=4), t in (1i64..=20, 1i64..=6),
        coeffs in prop::collection::vec(-5i64..=5, 4), n in 1u32..=5,
    ) {
        let m_end = &s + rat(len.0, len.1);
        let t = rat(t.0, t.1);
        let h = Polynomial::from_terms(1, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], int(*c))));
        let r = dim1_euler_maclaurin(&s, &m_end, &h, &t, n).unwrap();
        prop_assert_eq!(r.riemann_sum, r.expansion + r.remainder);
    }
}

#[test]
fn germ_matches_a_direct_lattice_sum() {
    let a = AffineCone::new(
        vec![rat(1, 3), rat(-1, 2)],
        Cone::from_int_generators(2, &[zvec(&[1, 0]), zvec(&[1, 2])]),
    );
    let xi = [-0.7, -0.4];
    let closed = generating_function_value(&a, &xi).unwrap();
    let p = a.to_polyhedron();
    let support = SupportBox { lo: qvec(&[-1, -1]), hi: qvec(&[120, 120]) };
    let direct: f64 = dilated_lattice_points(&p, &int(1), Some(&support))
        .unwrap()
        .iter()
        .map(|x| x.iter().zip(&xi).map(|(a, b)| to_f64(&Rational::from_integer(a.clone())) * b).sum::<f64>().exp())
        .sum();
    assert!((closed - direct).abs() < 1e-12 * direct.abs().max(1.0), "{closed} vs {direct}");
}

#[test]
fn dimension_one_agrees_with_the_general_engine() {
    let p = Polyhedron::lattice_polytope(&[vec![-2], vec![5]]).unwrap();
    let h = Polynomial::parse("x1^3 - 2*x1 + 1/2", 1).unwrap();
    let e = expansion_terms(&p, &q(1), 4, TClass::IntegerLattice).unwrap();
    for t in 1..=5 {
        let t = int(t);
        let r = dim1_euler_maclaurin(&int(-2), &int(5), &h, &t, 5).unwrap();
        assert_eq!(r.remainder, int(0));
        assert_eq!(r.expansion, evaluate_expansion(&p, &e.terms, &h, &t).unwrap());
    }
}

#[test]
fn delzant_vertex_constants() {
    let polygons: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![0, 0], vec![1, 0], vec![0, 1]],
        vec![vec![0, 0], vec![3, 0], vec![0, 1], vec![3, 1]],
        vec![vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 1]],
        vec![vec![1, 0], vec![2, 0], vec![3, 1], vec![3, 2], vec![2, 3], vec![1, 3], vec![0, 2], vec![0, 1]],
    ];
    for g in [q(2), gram(2, 1, 2), gram(3, -1, 1)] {
        for pts in &polygons {
            let p = Polyhedron::lattice_polytope(pts).unwrap();
            let e = expansion_terms(&p, &g, 2, TClass::IntegerLattice).unwrap();
            for t in e.terms.iter().filter(|t| t.face.dim == 0 && t.k == 2) {
                let (tc, _) = transverse_cone(&p, &t.face).unwrap();
                assert!(tc.cone.is_unimodular(), "not Delzant: {pts:?}");
                let u: Vec<QVec> = tc.cone.rays().iter().map(|r| z_to_q(r)).collect();
                let n = |a: &QVec| g.apply(a, a);
                let c = rat(1, 4) + rat(1, 12) * g.apply(&u[0], &u[1]) * (int(1) / n(&u[0]) + int(1) / n(&u[1]));
                assert_eq!(t.operator, Polynomial::constant(2, c), "vertex {:?} of {pts:?}", p.vertices()[t.face.vertices[0]]);
            }
        }
    }
}

#[test]
fn expansion_depends_only_on_the_local_geometry() {
    let h = PolynomialBump::new(&Polynomial::parse("1 + x1 - x2^2", 2).unwrap(), qvec(&[0, 0]), rat(1, 2), 4).unwrap();
    let a = Polyhedron::lattice_polytope(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let b = Polyhedron::lattice_polytope(&[vec![0, 0], vec![2, 0], vec![0, 3]]).unwrap();
    let ca = coefficients_numeric(&a, &expansion_terms(&a, &q(2), 3, TClass::IntegerLattice).unwrap().terms, &h, 3, 1e-12).unwrap();
    let cb = coefficients_numeric(&b, &expansion_terms(&b, &q(2), 3, TClass::IntegerLattice).unwrap().terms, &h, 3, 1e-12).unwrap();
    for (x, y) in ca.iter().zip(&cb) {
        assert!((x - y).abs() < 1e-9, "{ca:?} vs {cb:?}");
    }
    for t in [7, 12] {
        let (ra, rb) = (riemann_sum_numeric(&a, &h, &int(t)).unwrap(), riemann_sum_numeric(&b, &h, &int(t)).unwrap());
        assert!((ra - rb).abs() < 1e-12, "t = {t}: {ra} vs {rb}");
    }
}

#[test]
fn simple_pole_components_are_the_local_terms() {
    let cones: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1, 0], vec![1, 1]],
        vec![vec![1, 0], vec![1, 3]],
        vec![vec![2, -1], vec![1, 2]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]],
    ];
    for gens in cones {
        let d = gens[0].len();
        let a = AffineCone::from_ints(vec![int(0); d], &gens);
        let dec = local_eml(&a, &q(d), 1).unwrap();
        let germ = s_affine_cone(&a, 1).unwrap();
        for m in -(d as i64)..=1 {
            let mut local: BTreeMap<String, HyperFraction> = BTreeMap::new();
            for ft in &dec.per_face {
                let k = m + ft.face.dim as i64;
                if k < 0 {
                    continue;
                }
                let term = ft.integral.mul_poly(&ft.mu.component(k as usize));
                let key = format!("{:?}", subspace_key(&ft.integral.pole_forms()));
                let acc = local.remove(&key).unwrap_or_else(|| HyperFraction::zero(d));
                local.insert(key, acc.add(&term));
            }
            let comps = decompose_simple_poles(&homogeneous_component(&germ, m).unwrap(), &q(d)).unwrap();
            let mut seen = 0;
            for c in &comps {
                let key = format!("{:?}", c.key);
                let want = local.get(&key).cloned().unwrap_or_else(|| HyperFraction::zero(d));
                assert!(c.sum(d).value_eq(&want), "{gens:?}, degree {m}, subspace {key}");
                seen += 1;
            }
            assert!(seen > 0 || local.values().all(|f| f.reduce().is_zero()));
        }
    }
}
