use super::{component_key_and_basis, HyperFraction, ScalarProduct, SubspaceComponent};
use crate::algebra::linalg::{self, Matrix};
use crate::algebra::rational::QVec;
use crate::algebra::{LinearForm, Polynomial};
use crate::error::{Error, Result};

/// `P_J` for every subset `J` (bitmask) of the simple, independent poles
/// `forms`, with respect to the Gram matrix `gram`.
fn parts(p: &Polynomial, forms: &[QVec], gram: &Matrix) -> Vec<Polynomial> {
    let d = p.dim();
    let r = forms.len();
    let full = 1usize << r;
    let mut out = vec![Polynomial::zero(d); full];
    if r == 0 {
        out[0] = p.clone();
        return out;
    }
    for mask in 1..full {
        let j: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
        let rest: Vec<usize> = (0..r).filter(|i| mask & (1 << i) == 0).collect();
        let vj: Vec<QVec> = j.iter().map(|&i| forms[i].clone()).collect();
        let c = linalg::q_orthogonal_complement(&vj, gram, d);
        // ξ = M y with <ξ, v_j> = 0 and <ξ, c_i> = y_i
        let mut b: Matrix = vj.clone();
        b.extend(c.iter().cloned());
        let binv = linalg::inverse(&b).expect("adapted basis is invertible");
        let m_rows: Matrix = binv.iter().map(|row| row[j.len()..].to_vec()).collect();
        let k = d - j.len();
        let restricted_p = p.substitute_linear(&m_rows, k);
        let mt = linalg::transpose(&m_rows, k);
        let restricted_forms: Vec<QVec> = rest.iter().map(|&i| linalg::mat_vec(&mt, &forms[i])).collect();
        let restricted_gram: Matrix =
            c.iter().map(|a| c.iter().map(|bb| linalg::bilinear(gram, a, bb)).collect()).collect();
        let r_part = parts(&restricted_p, &restricted_forms, &restricted_gram).swap_remove(0);
        // back to ξ: y_i = <ξ, c_i>
        out[mask] = r_part.substitute_linear(&c, d);
    }
    let mut rem = p.clone();
    for mask in 1..full {
        let mut t = out[mask].clone();
        for i in (0..r).filter(|i| mask & (1 << i) == 0) {
            t = &t * &Polynomial::linear(&forms[i]);
        }
        rem = &rem - &t;
    }
    for v in forms {
        rem = rem.div_linear(v).expect("remainder is divisible by every pole");
    }
    out[0] = rem;
    out
}

/// Decomposition of a fraction with simple, linearly independent poles by
/// the recursive formula `P_J = R_Q((P / ∏_{k∉J} v_k)|_{L_J^⊥})`.
pub fn decompose_simple_poles(f: &HyperFraction, q: &ScalarProduct) -> Result<Vec<SubspaceComponent>> {
    let forms = f.pole_forms();
    if f.poles().iter().any(|(_, m)| *m != 1) || linalg::rank(&forms) < forms.len() {
        return Err(Error::NotSimplePoles);
    }
    let d = f.dim();
    let ps = parts(f.numerator(), &forms, q.matrix());
    let mut out = Vec::new();
    for (mask, p) in ps.into_iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let idx: Vec<usize> = (0..forms.len()).filter(|i| mask & (1 << i) != 0).collect();
        let vj: Vec<QVec> = idx.iter().map(|&i| forms[i].clone()).collect();
        let (key, subspace_basis) =
            if vj.is_empty() { (Vec::new(), Vec::new()) } else { component_key_and_basis(&vj, d) };
        let poles = vj.into_iter().map(|v| (LinearForm::new(v), 1)).collect();
        out.push(SubspaceComponent { subspace_basis, key, terms: vec![HyperFraction { numerator: p, poles }] });
    }
    out.sort_by(|a, b| a.key.len().cmp(&b.key.len()).then_with(|| a.key.cmp(&b.key)));
    Ok(out)
}
