use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use super::{svd, sym_eig, Matrix, SYMMETRY_TOL};
use crate::{Error, Result};

/// Relative size of a negative eigenvalue that is treated as rounding noise.
const NEGATIVE_EIG_TOL: f64 = 1e-9;

/// Output of [`classical_mds`].
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// `points x dim` coordinates.
    pub coords: Matrix,
    /// Retained eigenvalues of the double-centered Gram (after clamping).
    pub eigenvalues: Vec<f64>,
    /// Negative eigenvalues beyond tolerance that were clamped to zero.
    pub clamped: Vec<f64>,
}

/// Classical (Torgerson) MDS of a Gram matrix: double-center, keep the top
/// `dim` eigenpairs, scale eigenvectors by `√λ`.
pub fn classical_mds(gram: &Matrix, dim: usize) -> Result<Embedding> {
    let n = gram.rows();
    if !gram.is_square() || n == 0 {
        return Err(Error::invalid("MDS needs a non-empty square Gram matrix"));
    }
    if dim > n {
        return Err(Error::invalid("MDS dimension exceeds the number of points"));
    }
    if gram.asymmetry() > SYMMETRY_TOL * gram.max_abs().max(1.0) {
        return Err(Error::invalid("Gram matrix is not symmetric"));
    }
    let centered = double_center(gram);
    let eig = sym_eig(&centered)?;
    let top = eig.values.first().copied().unwrap_or(0.0).abs().max(f64::MIN_POSITIVE);
    let mut clamped = Vec::new();
    for &v in &eig.values {
        if v < -NEGATIVE_EIG_TOL * top {
            clamped.push(v);
        }
    }
    if !clamped.is_empty() {
        log::warn!("classical_mds: clamped {} negative eigenvalue(s), most negative {:e}", clamped.len(), clamped[clamped.len() - 1]);
    }
    let eigenvalues: Vec<f64> = eig.values.iter().take(dim).map(|&v| v.max(0.0)).collect();
    let scales: Vec<f64> = eigenvalues.iter().map(|v| v.sqrt()).collect();
    let coords = eig.vectors.leading_cols(dim).scale_cols(&scales);
    Ok(Embedding { coords, eigenvalues, clamped })
}

/// `J G J` with `J = I − 11ᵀ/n`.
pub(crate) fn double_center(g: &Matrix) -> Matrix {
    let n = g.rows();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| g.row(i).iter().sum::<f64>() / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|j| (0..n).map(|i| g[(i, j)]).sum::<f64>() / nf).collect();
    let grand = row_means.iter().sum::<f64>() / nf;
    let mut c = Matrix::from_fn(n, n, |i, j| g[(i, j)] - row_means[i] - col_means[j] + grand);
    c.symmetrize();
    c
}

/// Rotates/reflects `a` by the orthogonal `R` minimizing `‖a R − reference‖_F`.
pub fn procrustes_align(a: &Matrix, reference: &Matrix) -> Result<Matrix> {
    if a.shape() != reference.shape() {
        return Err(Error::invalid("Procrustes inputs differ in shape"));
    }
    if a.cols() == 0 {
        return Ok(a.clone());
    }
    let cross = a.t_matmul(reference);
    let d = svd(&cross)?;
    let r = d.u.matmul_t(&d.v);
    Ok(a.matmul(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn pairwise(c: &Matrix) -> Matrix {
        Matrix::from_fn(c.rows(), c.rows(), |i, j| {
            c.row(i).iter().zip(c.row(j)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
        })
    }

    #[test]
    fn two_orthogonal_unit_vectors() {
        let e = classical_mds(&Matrix::identity(2), 2).unwrap();
        assert!((pairwise(&e.coords)[(0, 1)] - 2f64.sqrt()).abs() < 1e-12);
        assert!(e.clamped.is_empty());
    }

    #[test]
    fn zero_gram_collapses() {
        let e = classical_mds(&Matrix::zeros(3, 3), 2).unwrap();
        assert_eq!(e.coords.max_abs(), 0.0);
    }

    #[test]
    fn exact_low_rank_round_trip() {
        let pts = Matrix::from_rows(&[[1.0, 0.5], [-0.3, 2.0], [0.0, -1.0], [2.0, 1.0], [-1.0, 0.2]]).unwrap();
        let gram = pts.matmul_t(&pts);
        let e = classical_mds(&gram, 2).unwrap();
        // Inner products are reproduced after centering.
        let centered = double_center(&gram);
        let back = e.coords.matmul_t(&e.coords);
        assert!(back.sub(&centered).max_abs() < 1e-10);
    }

    #[test]
    fn negative_spectrum_is_clamped() {
        let g = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let e = classical_mds(&g, 2).unwrap();
        assert_eq!(e.clamped.len(), 1);
        assert!(e.eigenvalues.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn procrustes_identity_and_rotation() {
        let r = Matrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [-1.0, 0.5]]).unwrap();
        assert!(procrustes_align(&r, &r).unwrap().sub(&r).max_abs() < 1e-12);
        let rot = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let a = r.matmul(&rot);
        assert!(procrustes_align(&a, &r).unwrap().sub(&r).max_abs() < 1e-10);
        assert!(procrustes_align(&a, &Matrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn procrustes_beats_grid_search() {
        let a = Matrix::from_rows(&[[0.3, -1.2], [1.7, 0.4], [-0.8, 0.9], [0.1, -0.5]]).unwrap();
        let refm = Matrix::from_rows(&[[1.0, 0.2], [-0.4, 1.5], [0.6, -1.1], [-0.2, 0.3]]).unwrap();
        let best = procrustes_align(&a, &refm).unwrap().sub(&refm).frobenius();
        assert!(best <= a.sub(&refm).frobenius() + 1e-12);
        let mut grid_best = f64::INFINITY;
        for k in 0..3600 {
            let th = 2.0 * PI * k as f64 / 3600.0;
            let (c, s) = (th.cos(), th.sin());
            for refl in [1.0, -1.0] {
                let r = Matrix::from_rows(&[[c, -s * refl], [s, c * refl]]).unwrap();
                grid_best = grid_best.min(a.matmul(&r).sub(&refm).frobenius());
            }
        }
        assert!(best <= grid_best + 1e-9);
        assert!(grid_best - best < 1e-3);
    }
}
