use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use super::{dot, Matrix};
use crate::{Error, Result};

/// Lower-triangular `L` with `L Lᵀ = m` for symmetric positive-definite `m`.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::invalid("cholesky of a non-square matrix"));
    }
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut diag = m[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if !(diag > 0.0) {
            return Err(Error::Numeric("matrix is not positive definite".into()));
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Inverse through Gauss–Jordan elimination with partial pivoting.
pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::invalid("inverse of a non-square matrix"));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::identity(n);
    let scale = m.max_abs();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[(i, col)].abs().partial_cmp(&a[(j, col)].abs()).unwrap())
            .unwrap();
        let pv = a[(pivot, col)];
        if pv.abs() <= scale * (n as f64) * f64::EPSILON || pv == 0.0 {
            return Err(Error::Numeric("matrix is singular".into()));
        }
        if pivot != col {
            for j in 0..n {
                let t = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = t;
                let t = inv[(col, j)];
                inv[(col, j)] = inv[(pivot, j)];
                inv[(pivot, j)] = t;
            }
        }
        for j in 0..n {
            a[(col, j)] /= pv;
            inv[(col, j)] /= pv;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[(i, col)];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[(i, j)] -= f * a[(col, j)];
                inv[(i, j)] -= f * inv[(col, j)];
            }
        }
    }
    Ok(inv)
}

/// Modified Gram–Schmidt (applied twice) on the columns of `m`.
pub fn orthonormalize_columns(m: &Matrix) -> Result<Matrix> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut c = m.col(j);
        let start = dot(&c, &c).sqrt();
        for _ in 0..2 {
            for b in &cols {
                let p = dot(&c, b);
                c.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let nrm = dot(&c, &c).sqrt();
        if !(nrm > 1e-10 * start) {
            return Err(Error::Numeric("columns are linearly dependent".into()));
        }
        c.iter_mut().for_each(|x| *x /= nrm);
        cols.push(c);
    }
    Matrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::orthonormality_error;

    #[test]
    fn cholesky_round_trip() {
        let m = Matrix::from_rows(&[[4.0, 2.0, 0.4], [2.0, 3.0, 0.5], [0.4, 0.5, 1.0]]).unwrap();
        let l = cholesky(&m).unwrap();
        assert!(l.matmul_t(&l).sub(&m).max_abs() < 1e-14);
        assert!(cholesky(&Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap()).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(&[[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]]).unwrap();
        let inv = inverse(&m).unwrap();
        assert!(m.matmul(&inv).sub(&Matrix::identity(3)).max_abs() < 1e-14);
        let sing = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&sing), Err(Error::Numeric(_))));
    }

    #[test]
    fn gram_schmidt() {
        let m = Matrix::from_rows(&[[1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let q = orthonormalize_columns(&m).unwrap();
        assert!(orthonormality_error(&q) < 1e-15);
    }
}
