//! Integer lattice algorithms: column Hermite normal form, integer kernels,
//! saturated bases of rational subspaces and unimodular completions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::rational::{from_big, primitive, z_to_q, QVec, Rational, ZVec};

/// Result of column reduction `A U = [H | 0]`.
#[derive(Clone, Debug)]
pub struct ColumnHnf {
    /// `A U`, stored by rows.
    pub h: Vec<ZVec>,
    /// Unimodular `n x n` matrix, stored by rows.
    pub u: Vec<ZVec>,
    /// `(row, column)` of each pivot; columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
}

impl ColumnHnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn u_column(&self, j: usize) -> ZVec {
        self.u.iter().map(|r| r[j].clone()).collect()
    }
}

fn col_combine(m: &mut [ZVec], i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
    // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
    for row in m.iter_mut() {
        let xi = row[i].clone();
        let xj = row[j].clone();
        row[i] = a * &xi + b * &xj;
        row[j] = c * &xi + d * &xj;
    }
}

fn col_axpy(m: &mut [ZVec], target: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let t = f * &row[src];
        row[target] -= t;
    }
}

/// Column-style Hermite reduction of the `m x n` integer matrix `a`.
pub fn column_hnf(a: &[ZVec], n: usize) -> ColumnHnf {
    let mut h: Vec<ZVec> = a.to_vec();
    let mut u: Vec<ZVec> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut c = 0;
    for r in 0..h.len() {
        if c >= n {
            break;
        }
        for j in c + 1..n {
            if h[r][j].is_zero() {
                continue;
            }
            let x = h[r][c].clone();
            let y = h[r][j].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let p = -(&y / &g);
            let q = &x / &g;
            col_combine(&mut h, c, j, &s, &t, &p, &q);
            col_combine(&mut u, c, j, &s, &t, &p, &q);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for m in [&mut h, &mut u] {
                for row in m.iter_mut() {
                    row[c] = -row[c].clone();
                }
            }
        }
        let piv = h[r][c].clone();
        for i in 0..c {
            let f = h[r][i].div_floor(&piv);
            if !f.is_zero() {
                col_axpy(&mut h, i, c, &f);
                col_axpy(&mut u, i, c, &f);
            }
        }
        pivots.push((r, c));
        c += 1;
    }
    ColumnHnf { h, u, pivots }
}

/// ℤ-basis of `{x ∈ ℤ^n : a x = 0}`.
pub fn integer_kernel(a: &[ZVec], n: usize) -> Vec<ZVec> {
    let hnf = column_hnf(a, n);
    (hnf.rank()..n).map(|j| hnf.u_column(j)).collect()
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &[ZVec], b: &[BigInt], n: usize) -> Option<ZVec> {
    let hnf = column_hnf(a, n);
    let k = hnf.rank();
    let mut y: Vec<BigInt> = vec![BigInt::zero(); n];
    for (j, &(r, c)) in hnf.pivots.iter().enumerate() {
        debug_assert_eq!(c, j);
        let mut rhs = b[r].clone();
        for (i, yi) in y.iter().enumerate().take(j) {
            rhs -= &hnf.h[r][i] * yi;
        }
        let (q, rem) = rhs.div_rem(&hnf.h[r][j]);
        if !rem.is_zero() {
            return None;
        }
        y[j] = q;
    }
    for (r, row) in hnf.h.iter().enumerate() {
        let v: BigInt = row.iter().take(k).zip(&y).map(|(h, yi)| h * yi).sum();
        if v != b[r] {
            return None;
        }
    }
    Some((0..n).map(|i| hnf.u[i].iter().zip(&y).map(|(uij, yj)| uij * yj).sum()).collect())
}

/// Scales a rational vector to a primitive integer vector (positive multiple).
pub fn integralize(v: &[Rational]) -> ZVec {
    primitive(v).map(|(p, _)| p).unwrap_or_else(|| vec![BigInt::zero(); v.len()])
}

/// ℤ-basis of `span(vectors) ∩ ℤ^n`.
pub fn lattice_basis(vectors: &[QVec], n: usize) -> Vec<ZVec> {
    let nonzero: Vec<QVec> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let perp: Vec<ZVec> = linalg::kernel(&nonzero, n).iter().map(|v| integralize(v)).collect();
    if perp.is_empty() {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    integer_kernel(&perp, n)
}

/// Unimodular completion of a saturated basis `b` of `L ∩ ℤ^n`.
#[derive(Clone, Debug)]
pub struct Completion {
    /// Rows of the projection `ℤ^n → ℤ^(n-k)`, whose kernel is `L`.
    pub proj_rows: Vec<ZVec>,
    /// Lifts `c_j` with `proj(c_j) = e_j`.
    pub lifts: Vec<ZVec>,
}

pub fn complete(b: &[ZVec], n: usize) -> Completion {
    let k = b.len();
    if k == 0 {
        let id: Vec<ZVec> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        return Completion { proj_rows: id.clone(), lifts: id };
    }
    let hnf = column_hnf(b, n);
    let proj_rows: Vec<ZVec> = (k..n).map(|j| hnf.u_column(j)).collect();
    // W = U^{-T}; its columns k.. are the lifts.
    let uq: Matrix = hnf.u.iter().map(|r| z_to_q(r)).collect();
    let uinv = linalg::inverse(&uq).expect("unimodular matrix is invertible");
    // columns of U^{-T} are rows of U^{-1}
    let lifts: Vec<ZVec> = (k..n).map(|j| uinv[j].iter().map(|x| x.to_integer()).collect()).collect();
    Completion { proj_rows, lifts }
}

/// `|det|` of `vectors` measured in the lattice with basis `basis` (both spanning the same space).
pub fn lattice_det(vectors: &[QVec], basis: &[ZVec]) -> Rational {
    let bq: Vec<QVec> = basis.iter().map(|b| z_to_q(b)).collect();
    let coords: Matrix = vectors
        .iter()
        .map(|v| linalg::coordinates(&bq, v).expect("vector lies in the span of the basis"))
        .collect();
    let d = linalg::det(&coords);
    if d < Rational::zero() {
        -d
    } else {
        d
    }
}

pub fn big_to_rational(x: &BigInt) -> Rational {
    from_big(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{dot_z, qvec, rat, zvec};
    use proptest::prelude::*;

    #[test]
    fn kernel_of_single_row() {
        let k = integer_kernel(&[zvec(&[2, 3, 5])], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(dot_z(v, &zvec(&[2, 3, 5])).is_zero());
        }
    }

    #[test]
    fn integer_solutions() {
        let a = vec![zvec(&[2, 4])];
        assert!(solve_integer(&a, &[BigInt::from(3)], 2).is_none());
        let x = solve_integer(&a, &[BigInt::from(6)], 2).unwrap();
        assert_eq!(dot_z(&a[0], &x), BigInt::from(6));
    }

    #[test]
    fn basis_of_diagonal_line() {
        let b = lattice_basis(&[vec![rat(1, 2), rat(1, 2)]], 2);
        assert!(b == vec![zvec(&[1, 1])] || b == vec![zvec(&[-1, -1])]);
        assert_eq!(lattice_det(&[qvec(&[2, 2])], &b), rat(2, 1));
    }

    #[test]
    fn completion_projects_onto_quotient() {
        let b = vec![zvec(&[1, 2, 0])];
        let c = complete(&b, 3);
        assert_eq!(c.proj_rows.len(), 2);
        for r in &c.proj_rows {
            assert!(dot_z(r, &b[0]).is_zero());
        }
        for (j, l) in c.lifts.iter().enumerate() {
            for (i, r) in c.proj_rows.iter().enumerate() {
                let e = if i == j { BigInt::one() } else { BigInt::zero() };
                assert_eq!(dot_z(r, l), e);
            }
        }
    }

    proptest! {
        #[test]
        fn hnf_is_unimodular_transform(rows in prop::collection::vec(prop::collection::vec(-6i64..7, 3), 1..3)) {
            let a: Vec<ZVec> = rows.iter().map(|r| zvec(r)).collect();
            let h = column_hnf(&a, 3);
            let uq: Matrix = h.u.iter().map(|r| z_to_q(r)).collect();
            let d = linalg::det(&uq);
            prop_assert!(d == rat(1, 1) || d == rat(-1, 1));
            for v in integer_kernel(&a, 3) {
                for r in &a {
                    prop_assert!(dot_z(r, &v).is_zero());
                }
            }
        }
    }
}
