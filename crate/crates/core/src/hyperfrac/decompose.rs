use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{component_key_and_basis, HyperFraction, ScalarProduct, SubspaceComponent};
use crate::algebra::linalg::{self, Matrix};
use crate::algebra::rational::{QVec, Rational};
use crate::algebra::{LinearForm, Polynomial};
use crate::error::{Error, Result};
use crate::genfun::MeromorphicGerm;

/// Rewrites `1/∏ v_i^{e_i}` as a combination of fractions with linearly
/// independent pole supports.
struct SimpleFractions<'a> {
    forms: &'a [QVec],
    memo: HashMap<Vec<u32>, Vec<(Vec<u32>, Rational)>>,
}

impl SimpleFractions<'_> {
    fn rewrite(&mut self, e: &[u32]) -> Vec<(Vec<u32>, Rational)> {
        if let Some(r) = self.memo.get(e) {
            return r.clone();
        }
        let support: Vec<usize> = (0..e.len()).filter(|&i| e[i] > 0).collect();
        let vecs: Vec<QVec> = support.iter().map(|&i| self.forms[i].clone()).collect();
        let basis: Vec<usize> = linalg::greedy_basis(&vecs).into_iter().map(|i| support[i]).collect();
        let result = if basis.len() == support.len() {
            vec![(e.to_vec(), Rational::one())]
        } else {
            let k = *support.iter().find(|i| !basis.contains(i)).expect("dependent support");
            let bvecs: Vec<QVec> = basis.iter().map(|&j| self.forms[j].clone()).collect();
            let c = linalg::coordinates(&bvecs, &self.forms[k]).expect("w lies in the span of the basis");
            // 1 = sum_j c_j v_j / w
            let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
            for (cj, &j) in c.iter().zip(&basis) {
                if cj.is_zero() {
                    continue;
                }
                let mut f = e.to_vec();
                f[k] += 1;
                f[j] -= 1;
                for (g, coef) in self.rewrite(&f) {
                    *acc.entry(g).or_insert_with(Rational::zero) += cj * coef;
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        self.memo.insert(e.to_vec(), result.clone());
        result
    }
}

fn split_monomials(p: &Polynomial, k: usize) -> (Polynomial, Vec<Polynomial>) {
    let dim = p.dim();
    let mut free = Polynomial::zero(dim);
    let mut by_var: Vec<Polynomial> = vec![Polynomial::zero(dim); k];
    for (e, c) in p.terms() {
        match (0..k).find(|&j| e[j] > 0) {
            None => free.add_term(e.clone(), c.clone()),
            Some(j) => {
                let mut f = e.clone();
                f[j] -= 1;
                by_var[j].add_term(f, c.clone());
            }
        }
    }
    (free, by_var)
}

/// Decomposes `f` into components indexed by the subspaces spanned by its
/// poles. The numerator of each term lies in `Sym(C_Q(L))`.
pub fn decompose_general(f: &HyperFraction, q: &ScalarProduct) -> Vec<SubspaceComponent> {
    let d = f.dim();
    let forms = f.pole_forms();
    let r = forms.len();
    let e0: Vec<u32> = f.poles().iter().map(|(_, m)| *m).collect();
    let mut sf = SimpleFractions { forms: &forms, memo: HashMap::new() };

    let mut work: BTreeMap<(Reverse<u32>, Vec<u32>), Polynomial> = BTreeMap::new();
    let push = |work: &mut BTreeMap<(Reverse<u32>, Vec<u32>), Polynomial>, e: Vec<u32>, p: Polynomial| {
        if p.is_zero() {
            return;
        }
        let key = (Reverse(e.iter().sum()), e);
        match work.get_mut(&key) {
            Some(acc) => *acc = &*acc + &p,
            None => {
                work.insert(key, p);
            }
        }
    };
    for (e, c) in sf.rewrite(&e0) {
        push(&mut work, e, f.numerator().scale(&c));
    }

    // subspace key -> (basis, exponent -> numerator)
    let mut comps: BTreeMap<Matrix, BTreeMap<Vec<u32>, Polynomial>> = BTreeMap::new();
    let mut bases: BTreeMap<Matrix, Vec<crate::algebra::rational::ZVec>> = BTreeMap::new();
    while let Some(((_, e), p)) = work.pop_first() {
        if p.is_zero() {
            continue;
        }
        let support: Vec<usize> = (0..r).filter(|&i| e[i] > 0).collect();
        let k = support.len();
        let vj: Vec<QVec> = support.iter().map(|&i| forms[i].clone()).collect();
        let (free, by_var) = if k == 0 {
            (p, Vec::new())
        } else {
            // coordinates z_j = <ξ, v_j>, w_i = <ξ, u_i> with u a basis of C_Q(L)
            let mut b: Matrix = vj.clone();
            b.extend(q.complement(&vj));
            let binv = linalg::inverse(&b).expect("adapted basis is invertible");
            let pz = p.substitute_linear(&binv, d);
            let (free, by_var) = split_monomials(&pz, k);
            let back = |x: &Polynomial| x.substitute_linear(&b, d);
            (back(&free), by_var.iter().map(back).collect())
        };
        for (j, child) in by_var.into_iter().enumerate() {
            let mut g = e.clone();
            g[support[j]] -= 1;
            push(&mut work, g, child);
        }
        if free.is_zero() {
            continue;
        }
        let (key, basis) = if k == 0 { (Vec::new(), Vec::new()) } else { component_key_and_basis(&vj, d) };
        bases.entry(key.clone()).or_insert(basis);
        let entry = comps.entry(key).or_default();
        let slot = entry.entry(e.clone()).or_insert_with(|| Polynomial::zero(d));
        *slot = &*slot + &free;
    }

    let mut out: Vec<SubspaceComponent> = comps
        .into_iter()
        .filter_map(|(key, terms)| {
            let terms: Vec<HyperFraction> = terms
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(e, p)| HyperFraction {
                    numerator: p,
                    poles: (0..r)
                        .filter(|&i| e[i] > 0)
                        .map(|i| (LinearForm::new(forms[i].clone()), e[i]))
                        .collect(),
                })
                .collect();
            if terms.is_empty() {
                return None;
            }
            let subspace_basis = bases.get(&key).cloned().unwrap_or_default();
            Some(SubspaceComponent { subspace_basis, key, terms })
        })
        .collect();
    out.sort_by(|a, b| a.key.len().cmp(&b.key.len()).then_with(|| a.key.cmp(&b.key)));
    out
}

/// The polynomial part `R_Q(f)`.
pub fn renormalize(f: &HyperFraction, q: &ScalarProduct) -> Polynomial {
    if f.is_polynomial() {
        return f.numerator().clone();
    }
    decompose_general(f, q)
        .into_iter()
        .find(|c| c.is_polynomial_part())
        .map(|c| c.sum(f.dim()).numerator().clone())
        .unwrap_or_else(|| Polynomial::zero(f.dim()))
}

impl MeromorphicGerm {
    /// Degree-by-degree renormalization up to `order`.
    pub fn renormalize(&self, q: &ScalarProduct, order: u32) -> Result<Vec<Polynomial>> {
        let n = self.total_multiplicity();
        if (order + n) as usize > self.depth() {
            return Err(Error::InsufficientDepth { needed: (order + n) as usize, have: self.depth() });
        }
        (0..=order)
            .map(|m| {
                let f = self.component(m as i64)?;
                Ok(renormalize(&f, q))
            })
            .collect()
    }
}

/// `R_Q` applied term by term to the Taylor data of a germ; the result is
/// the truncated polynomial `Σ_{m ≤ order} R_Q(g_[m])`.
pub fn renormalize_germ(g: &MeromorphicGerm, q: &ScalarProduct, order: u32) -> Result<Polynomial> {
    let parts = g.renormalize(q, order)?;
    Ok(parts.iter().fold(Polynomial::zero(g.dim()), |acc, p| &acc + p))
}

#[cfg(test)]
mod tests {
    use super::super::sum_components;
    use super::*;
    use crate::algebra::rational::{qvec, rat};

    fn lf(v: &[i64]) -> LinearForm {
        LinearForm::new(qvec(v))
    }

    #[test]
    fn polynomial_is_its_own_component() {
        let p = Polynomial::parse("x1^2 + 3*x2", 2).unwrap();
        let comps = decompose_general(&HyperFraction::polynomial(p.clone()), &ScalarProduct::identity(2));
        assert_eq!(comps.len(), 1);
        assert!(comps[0].is_polynomial_part());
        assert_eq!(comps[0].sum(2).numerator(), &p);
    }

    #[test]
    fn dependent_triple_rewrites_and_resums() {
        // 1/((v1+v2) v1 v2) in d = 2
        let f = HyperFraction::new(
            Polynomial::one(2),
            vec![(lf(&[1, 1]), 1), (lf(&[1, 0]), 1), (lf(&[0, 1]), 1)],
        )
        .unwrap();
        let q = ScalarProduct::identity(2);
        let comps = decompose_general(&f, &q);
        assert!(sum_components(&comps, 2).value_eq(&f));
        for c in &comps {
            for t in &c.terms {
                assert_eq!(t.poles().len(), c.dim());
            }
        }
        // the simple-fraction rewriting on its own
        let forms = f.pole_forms();
        let mut sf = SimpleFractions { forms: &forms, memo: HashMap::new() };
        let rewritten = sf.rewrite(&[1, 1, 1]);
        let total = rewritten.iter().fold(HyperFraction::zero(2), |acc, (e, c)| {
            let poles = forms.iter().zip(e).map(|(v, &m)| (LinearForm::new(v.clone()), m)).collect();
            acc.add(&HyperFraction::new(Polynomial::constant(2, c.clone()), poles).unwrap())
        });
        assert!(total.value_eq(&f));
        assert_eq!(rewritten.len(), 2);
    }

    #[test]
    fn one_dimensional_renormalization() {
        // R(φ/ξ) = (φ(ξ) - φ(0))/ξ
        let phi = Polynomial::parse("3 + 2*x1 - x1^3", 1).unwrap();
        let f = HyperFraction::new(phi, vec![(lf(&[1]), 1)]).unwrap();
        let r = renormalize(&f, &ScalarProduct::identity(1));
        assert_eq!(r, Polynomial::parse("2 - x1^2", 1).unwrap());
        let pure = HyperFraction::new(Polynomial::one(2), vec![(lf(&[1, 0]), 1), (lf(&[0, 1]), 1)]).unwrap();
        assert!(renormalize(&pure, &ScalarProduct::identity(2)).is_zero());
    }

    #[test]
    fn renormalization_depends_on_scalar_product() {
        // ξ2/ξ1: with the standard product ξ2 is orthogonal to e1, so the
        // whole fraction is singular; with a skew product a polynomial part appears.
        let f = HyperFraction::new(Polynomial::var(2, 1), vec![(lf(&[1, 0]), 1)]).unwrap();
        assert!(renormalize(&f, &ScalarProduct::identity(2)).is_zero());
        let q = ScalarProduct::new(vec![qvec(&[2, 1]), qvec(&[1, 2])]).unwrap();
        let r = renormalize(&f, &q);
        // C_Q(e1) is spanned by (-1,2); ξ2 = (<ξ,(-1,2)> + ξ1)/2
        assert_eq!(r, Polynomial::constant(2, rat(1, 2)));
    }
}
