//! Dense real-matrix kernel: SVD, symmetric eigendecomposition, classical
//! MDS, Procrustes alignment, and the few factorizations the generators need.
//!
//! Every decomposition applies one deterministic sign convention: each
//! singular/eigen vector is flipped so that its largest-magnitude entry is
//! positive, with near-ties resolved toward the lowest index. Vectors inside
//! a degenerate cluster are still only unique up to rotation; compare those
//! through [`projector`] rather than column by column.

mod decomp;
mod eig;
mod matrix;
mod mds;
mod svd;

pub use decomp::{cholesky, inverse, orthonormalize_columns};
pub use eig::{sym_eig, EigResult};
pub use matrix::{dot, frobenius, norm, Matrix};
pub use mds::{classical_mds, procrustes_align, Embedding};
pub use svd::{svd, SvdResult};

use alloc::vec::Vec;

/// Max-abs deviation of `QᵀQ` from the identity accepted for returned bases.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Relative Frobenius reconstruction error accepted for decompositions.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Input asymmetry (relative to `max(1, max|A|)`) tolerated by `sym_eig`.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Relative gap below which neighbouring singular values count as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Orthogonal projector `Q Qᵀ` onto the span of the given columns of `q`.
pub fn projector(q: &Matrix, cols: &[usize]) -> Matrix {
    let sub = q.select_cols(cols);
    sub.matmul_t(&sub)
}

/// Groups consecutive indices of a descending sequence into clusters whose
/// neighbours differ by less than `rel_gap` relative to the leading value.
pub fn degenerate_clusters(values: &[f64], rel_gap: f64) -> Vec<Vec<usize>> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if (values[*c.last().unwrap()] - v).abs() <= rel_gap * scale => c.push(i),
            _ => clusters.push(alloc::vec![i]),
        }
    }
    clusters
}

/// Sign that makes the largest-magnitude entry positive (near-ties go to the
/// lowest index).
pub(crate) fn canonical_sign(v: &[f64]) -> f64 {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return 1.0;
    }
    let cutoff = max * (1.0 - 1e-9);
    let lead = v.iter().find(|x| x.abs() >= cutoff).copied().unwrap_or(max);
    if lead < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Max-abs deviation of `QᵀQ` from the identity.
pub fn orthonormality_error(q: &Matrix) -> f64 {
    let g = q.t_matmul(q);
    g.sub(&Matrix::identity(g.rows())).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_group_near_equal_values() {
        let c = degenerate_clusters(&[3.0, 2.0, 0.7, 0.7 + 1e-12, 0.1], 1e-8);
        assert_eq!(c, alloc::vec![alloc::vec![0], alloc::vec![1], alloc::vec![2, 3], alloc::vec![4]]);
    }

    #[test]
    fn sign_prefers_lowest_index_on_ties() {
        assert_eq!(canonical_sign(&[-0.5, 0.5, 0.5, -0.5]), -1.0);
        assert_eq!(canonical_sign(&[0.1, -0.9]), -1.0);
        assert_eq!(canonical_sign(&[0.0, 0.0]), 1.0);
    }
}
