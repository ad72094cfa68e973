//! Dense linear algebra over the rationals. Matrices are row vectors.

use num_traits::{One, Zero};

use super::rational::{dot, QVec, Rational};

pub type Matrix = Vec<QVec>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn transpose(m: &[QVec], ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[QVec], v: &[Rational]) -> QVec {
    m.iter().map(|r| dot(r, v)).collect()
}

pub fn mat_mul(a: &[QVec], b: &[QVec]) -> Matrix {
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..ncols)
                .map(|j| r.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(m: &[QVec]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..ncols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[QVec]) -> usize {
    if m.is_empty() {
        return 0;
    }
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}`.
pub fn kernel(m: &[QVec], ncols: usize) -> Matrix {
    if m.is_empty() {
        return identity(ncols);
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, or `None` if inconsistent.
pub fn solve(m: &[QVec], b: &[Rational], ncols: usize) -> Option<QVec> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Coordinates of `v` in the (independent) spanning vectors `basis`.
pub fn coordinates(basis: &[QVec], v: &[Rational]) -> Option<QVec> {
    let n = v.len();
    let cols = transpose(basis, n);
    let x = solve(&cols, v, basis.len())?;
    Some(x)
}

pub fn inverse(m: &[QVec]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(m: &[QVec]) -> Rational {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = Rational::one() / &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] * &inv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Greedy choice of a maximal independent subset, by index order.
pub fn greedy_basis(vectors: &[QVec]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Matrix = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        rows.push(v.clone());
        if rank(&rows) == chosen.len() + 1 {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Bilinear form `a^T q b`.
pub fn bilinear(q: &[QVec], a: &[Rational], b: &[Rational]) -> Rational {
    dot(a, &mat_vec(q, b))
}

/// Basis of the `q`-orthogonal complement of `span(basis)` in `Q^n`, by
/// Gram-Schmidt on `basis` followed by the standard basis, without
/// normalization.
pub fn q_orthogonal_complement(basis: &[QVec], q: &[QVec], n: usize) -> Matrix {
    let mut ortho: Matrix = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();
    let project_out = |v: &QVec, ortho: &Matrix, norms: &[Rational]| -> QVec {
        let mut w = v.clone();
        for (u, nu) in ortho.iter().zip(norms) {
            let c = bilinear(q, u, &w) / nu;
            if !c.is_zero() {
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= &c * ui;
                }
            }
        }
        w
    };
    for b in basis {
        let w = project_out(b, &ortho, &norms);
        if w.iter().any(|x| !x.is_zero()) {
            norms.push(bilinear(q, &w, &w));
            ortho.push(w);
        }
    }
    let k = ortho.len();
    for i in 0..n {
        if ortho.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        let w = project_out(&e, &ortho, &norms);
        if w.iter().any(|x| !x.is_zero()) {
            norms.push(bilinear(q, &w, &w));
            ortho.push(w);
        }
    }
    ortho.split_off(k)
}

/// Canonical key of `span(vectors)`: its reduced row echelon form.
pub fn subspace_key(vectors: &[QVec]) -> Matrix {
    if vectors.is_empty() {
        return Vec::new();
    }
    rref(vectors).0
}

/// `q`-orthogonal projection of `v` onto `span(basis)`.
pub fn q_project(basis: &[QVec], q: &[QVec], v: &[Rational]) -> QVec {
    let n = v.len();
    if basis.is_empty() {
        return vec![Rational::zero(); n];
    }
    let k = basis.len();
    let gram: Matrix = (0..k).map(|i| (0..k).map(|j| bilinear(q, &basis[i], &basis[j])).collect()).collect();
    let rhs: QVec = basis.iter().map(|b| bilinear(q, b, v)).collect();
    let c = solve(&gram, &rhs, k).expect("gram matrix of independent vectors is invertible");
    let mut out = vec![Rational::zero(); n];
    for (ci, b) in c.iter().zip(basis) {
        for (o, bi) in out.iter_mut().zip(b) {
            *o += ci * bi;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{qvec, rat};

    #[test]
    fn kernel_and_rank() {
        let m = vec![qvec(&[1, 1, 0]), qvec(&[2, 2, 0])];
        assert_eq!(rank(&m), 1);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![qvec(&[2, 1]), qvec(&[1, 1])];
        assert_eq!(det(&m), rat(1, 1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(inverse(&[qvec(&[1, 2]), qvec(&[2, 4])]).is_none());
    }

    #[test]
    fn orthogonal_complement_is_orthogonal() {
        let q = vec![qvec(&[2, 1, 0]), qvec(&[1, 2, 0]), qvec(&[0, 0, 1])];
        let basis = vec![qvec(&[1, 0, 1])];
        let c = q_orthogonal_complement(&basis, &q, 3);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!(bilinear(&q, &basis[0], v).is_zero());
        }
        assert_eq!(rank(&[basis[0].clone(), c[0].clone(), c[1].clone()]), 3);
    }
}
