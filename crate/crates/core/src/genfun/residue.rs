use super::{integral_fraction, s_affine_cone};
use crate::algebra::rational::{z_to_q, QVec, ZVec};
use crate::algebra::LinearForm;
use crate::hyperfrac::residue_in_basis;
use crate::polyhedra::{AffineCone, Cone, QuotientLattice};

/// Checks `Res_v S(a) = -S(π a)` component by component up to degree
/// `depth`, and `Res_v I(a) = -I(π a)`, where `π` is the projection along
/// the edge `v`.
pub fn residue_check(a: &AffineCone, v: &ZVec, depth: u32) -> Result<(), String> {
    if !a.cone.rays().contains(v) {
        return Err(format!("{v:?} is not an edge generator"));
    }
    let d = a.dim_ambient();
    let vq = z_to_q(v);
    let ql = QuotientLattice::new(std::slice::from_ref(&vq), d);
    let basis: Vec<QVec> = ql.proj_rows.iter().map(|r| z_to_q(r)).collect();
    let gens: Vec<QVec> = a.cone.rays().iter().map(|r| z_to_q(&ql.project_z(r))).collect();
    let pa = AffineCone::new(ql.project(&a.vertex), Cone::from_generators(d - 1, &gens));
    let form = LinearForm::new(vq);
    let s = s_affine_cone(a, depth).map_err(|e| e.to_string())?;
    let ps = s_affine_cone(&pa, depth + 1).map_err(|e| e.to_string())?;
    let n = s.total_multiplicity() as i64;
    for m in -n..=depth as i64 {
        let lhs = residue_in_basis(&s.component(m).map_err(|e| e.to_string())?, &form, &basis)
            .map_err(|e| format!("degree {m}: {e}"))?;
        let rhs = if m + 1 < -(ps.total_multiplicity() as i64) {
            crate::hyperfrac::HyperFraction::zero(d - 1)
        } else {
            ps.component(m + 1).map_err(|e| e.to_string())?.neg()
        };
        if !lhs.value_eq(&rhs) {
            return Err(format!("degree {m}: residue {lhs:?} differs from {rhs:?}"));
        }
    }
    let i = integral_fraction(&a.cone).map_err(|e| e.to_string())?;
    let pi = integral_fraction(&pa.cone).map_err(|e| e.to_string())?;
    let lhs = residue_in_basis(&i, &form, &basis).map_err(|e| e.to_string())?;
    if !lhs.value_eq(&pi.neg()) && !(lhs.is_zero() && pi.numerator().is_zero()) {
        return Err(format!("integral: residue {lhs:?} differs from {:?}", pi.neg()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{qvec, zvec};

    #[test]
    fn product_cone() {
        let a = AffineCone::from_ints(qvec(&[0, 0]), &[vec![1, 0], vec![0, 1]]);
        residue_check(&a, &zvec(&[1, 0]), 3).unwrap();
    }

    #[test]
    fn non_primitive_projection() {
        let a = AffineCone::from_ints(qvec(&[0, 0]), &[vec![1, 0], vec![1, 2]]);
        residue_check(&a, &zvec(&[1, 2]), 3).unwrap();
        residue_check(&a, &zvec(&[1, 0]), 3).unwrap();
    }

    #[test]
    fn square_cone() {
        let a = AffineCone::from_ints(qvec(&[0, 0, 0]), &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]);
        residue_check(&a, &zvec(&[1, 0, 1]), 3).unwrap();
    }
}
