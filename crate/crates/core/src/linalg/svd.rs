use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use super::{canonical_sign, dot, Matrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `m = u · diag(s) · vᵀ` with `r = min(rows, cols)` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// `rows x r`, orthonormal columns.
    pub u: Matrix,
    /// Descending, non-negative.
    pub s: Vec<f64>,
    /// `cols x r`, orthonormal columns.
    pub v: Matrix,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `u · diag(values) · vᵀ` for arbitrary per-mode values.
    pub fn compose(&self, values: &[f64]) -> Matrix {
        assert_eq!(values.len(), self.s.len());
        self.u.scale_cols(values).matmul_t(&self.v)
    }

    pub fn reconstruct(&self) -> Matrix {
        self.compose(&self.s)
    }
}

/// One-sided (Hestenes) Jacobi SVD on the smaller dimension.
pub fn svd(m: &Matrix) -> Result<SvdResult> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::invalid("svd of an empty matrix"));
    }
    if !m.is_finite() {
        return Err(Error::invalid("svd input has non-finite entries"));
    }
    if m.rows() >= m.cols() {
        jacobi_tall(m)
    } else {
        let t = jacobi_tall(&m.transpose())?;
        Ok(SvdResult { u: t.v, s: t.s, v: t.u })
    }
}

fn jacobi_tall(a: &Matrix) -> Result<SvdResult> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let tol = f64::EPSILON * (m as f64).sqrt();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("Jacobi SVD did not converge".into()));
    }

    let norms: Vec<f64> = w.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));
    let s_max = norms[order[0]];
    let floor = s_max * (m.max(n) as f64) * f64::EPSILON;

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    let mut pending = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        let sj = norms[j];
        s.push(sj);
        v_cols.push(v[j].clone());
        if sj > floor && sj > f64::MIN_POSITIVE {
            u_cols.push(w[j].iter().map(|x| x / sj).collect());
        } else {
            u_cols.push(vec![0.0; m]);
            pending.push(slot);
        }
    }
    // Null-space left vectors: complete to an orthonormal set.
    for slot in pending {
        let others: Vec<&Vec<f64>> =
            u_cols.iter().enumerate().filter(|(k, c)| *k != slot && c.iter().any(|x| *x != 0.0)).map(|(_, c)| c).collect();
        let fresh = complete_basis(&others, m)?;
        u_cols[slot] = fresh;
    }

    for k in 0..n {
        if canonical_sign(&v_cols[k]) < 0.0 {
            v_cols[k].iter_mut().for_each(|x| *x = -*x);
            u_cols[k].iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(SvdResult { u: Matrix::from_columns(&u_cols)?, s, v: Matrix::from_columns(&v_cols)? })
}

#[inline]
fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// A unit vector orthogonal to every vector in `basis`.
pub(crate) fn complete_basis(basis: &[&Vec<f64>], dim: usize) -> Result<Vec<f64>> {
    for k in 0..dim {
        let mut cand = vec![0.0; dim];
        cand[k] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let proj = dot(&cand, b);
                cand.iter_mut().zip(b.iter()).for_each(|(c, bi)| *c -= proj * bi);
            }
        }
        let nrm = dot(&cand, &cand).sqrt();
        if nrm > 0.5 {
            cand.iter_mut().for_each(|c| *c /= nrm);
            return Ok(cand);
        }
    }
    Err(Error::Numeric("could not complete orthonormal basis".into()))
}
