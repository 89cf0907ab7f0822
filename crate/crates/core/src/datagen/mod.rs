//! Structured environments: the hand-built hierarchy, branching-diffusion
//! trees, graph-structured Gaussian fields, the explicit ordering and
//! cross-cutting domains, and planted noisy categories.

mod gmrf;
mod planted;
mod tree;

pub use gmrf::{
    chain_graph, cluster_block_constants, cluster_eigs, cluster_graph, gmrf_covariance, ring_graph,
    sample_gmrf_features, tree_graph, Edge, GmrfSpec,
};
pub use planted::{planted_category, rescale_planted, PlantedSpec};
pub use tree::{
    analytic_item_similarity, analytic_overlaps, analytic_tree_eigs, lca_level, odd_parity_prob,
    sample_tree_features, tree_partition, tree_timescales, TreeLevelEig, TreeSpec,
};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Items with their input encodings (`x`, `N1 x P`) and feature values
/// (`y`, `N3 x P`); column `i` of each belongs to item `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub item_labels: Vec<String>,
    pub feature_labels: Vec<String>,
    pub x: Matrix,
    pub y: Matrix,
}

impl Dataset {
    /// Dataset with one-hot (identity) inputs.
    pub fn one_hot(name: &str, item_labels: Vec<String>, feature_labels: Vec<String>, y: Matrix) -> Result<Self> {
        let ds = Self { name: name.to_string(), item_labels, feature_labels, x: Matrix::identity(y.cols()), y };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.y.cols();
        if p == 0 {
            return Err(Error::invalid("dataset has no items"));
        }
        if self.x.cols() != p {
            return Err(Error::invalid(format!("x has {} columns but y has {p}", self.x.cols())));
        }
        if self.item_labels.len() != p || self.feature_labels.len() != self.y.rows() {
            return Err(Error::invalid("label counts do not match the matrices"));
        }
        if !self.x.is_finite() || !self.y.is_finite() {
            return Err(Error::invalid("dataset contains non-finite values"));
        }
        Ok(())
    }

    /// Number of items `P`.
    pub fn p(&self) -> usize {
        self.y.cols()
    }

    pub fn n_inputs(&self) -> usize {
        self.x.rows()
    }

    pub fn n_features(&self) -> usize {
        self.y.rows()
    }

    pub fn is_one_hot(&self) -> bool {
        self.x.is_square() && self.x == Matrix::identity(self.x.rows())
    }

    /// `Σ^yx = Y Xᵀ / P`.
    pub fn sigma_yx(&self) -> Matrix {
        self.y.matmul_t(&self.x).scale(1.0 / self.p() as f64)
    }

    /// `Σ^x = X Xᵀ`, the identity for one-hot inputs.
    pub fn sigma_x(&self) -> Matrix {
        let mut s = self.x.matmul_t(&self.x);
        s.symmetrize();
        s
    }

    /// `Σ^y = (Σ^yx)ᵀ Σ^yx`.
    pub fn sigma_y(&self) -> Matrix {
        self.sigma_yx().gram()
    }

    /// Example `i` as presented to the network: `(√P·x_i, y_i/√P)`.
    pub fn example(&self, i: usize) -> (Vec<f64>, Vec<f64>) {
        let sp = (self.p() as f64).sqrt();
        let x = self.x.col(i).into_iter().map(|v| v * sp).collect();
        let y = self.y.col(i).into_iter().map(|v| v / sp).collect();
        (x, y)
    }

    pub fn item_index(&self, label: &str) -> Option<usize> {
        self.item_labels.iter().position(|l| l.eq_ignore_ascii_case(label))
    }

    pub fn feature_index(&self, label: &str) -> Option<usize> {
        self.feature_labels.iter().position(|l| l.eq_ignore_ascii_case(label))
    }
}

pub(crate) fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn owned(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

const TOY_PATTERN: [[f64; 4]; 7] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Four items (Canary, Salmon, Oak, Rose), seven features, one-hot inputs.
/// Feature values are `0.7·P` so that `Σ^yx = 0.7·pattern`.
pub fn toy_hierarchy() -> Dataset {
    let p = 4.0;
    let y = Matrix::from_rows(&TOY_PATTERN).expect("static").scale(0.7 * p);
    Dataset::one_hot(
        "toy",
        owned(&["Canary", "Salmon", "Oak", "Rose"]),
        owned(&["Grow", "Move", "Roots", "Fly", "Swim", "Bark", "Petals"]),
        y,
    )
    .expect("static dataset is valid")
}

/// Nine items in a perfect transitive ordering: feature `i` is held by
/// items `0..=i`.
pub fn ordering_dataset() -> Dataset {
    let n = 9;
    let y = Matrix::from_fn(n, n, |i, mu| if mu <= i { 1.0 } else { 0.0 });
    Dataset::one_hot("ordering", labels("rank", n), labels("above", n), y).expect("static dataset is valid")
}

/// Eight items: a three-level binary hierarchy whose finest level is
/// repeated for item pairs (values 1.1), plus two features that cut across
/// the hierarchy.
pub fn crosscut_dataset() -> Dataset {
    let mut rows: Vec<[f64; 8]> = Vec::with_capacity(13);
    rows.push([1.0; 8]);
    rows.push([1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    rows.push([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]);
    for _ in 0..2 {
        for pair in 0..4 {
            let mut r = [0.0; 8];
            r[2 * pair] = 1.1;
            r[2 * pair + 1] = 1.1;
            rows.push(r);
        }
    }
    rows.push([1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
    rows.push([0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
    let y = Matrix::from_rows(&rows).expect("static");
    let mut features = owned(&["all", "branch_a", "branch_b"]);
    for rep in 0..2 {
        for pair in 0..4 {
            features.push(format!("pair{pair}_{rep}"));
        }
    }
    features.push("cross_odd".into());
    features.push("cross_even".into());
    Dataset::one_hot("crosscut", labels("item", 8), features, y).expect("static dataset is valid")
}

/// Relative RMS difference helper shared by generator tests.
#[cfg(test)]
pub(crate) fn rel_frobenius(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).frobenius() / b.frobenius().max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd;

    #[test]
    fn toy_dimensions_and_spectrum() {
        let ds = toy_hierarchy();
        assert_eq!((ds.n_features(), ds.n_inputs(), ds.p()), (7, 4, 4));
        assert!(ds.is_one_hot());
        assert_eq!(ds.sigma_x(), Matrix::identity(4));
        let r = svd(&ds.sigma_yx()).unwrap();
        let expect = [1.852_03, 1.212_44, 0.7, 0.7];
        for (a, b) in r.s.iter().zip(expect) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        // animal–plant split, sign fixed by the convention
        let v2 = r.v.col(1);
        for (a, b) in v2.iter().zip([0.5, 0.5, -0.5, -0.5]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_y_is_gram_of_sigma_yx() {
        let ds = toy_hierarchy();
        let g = Matrix::from_rows(&[
            [3.0, 2.0, 1.0, 1.0],
            [2.0, 3.0, 1.0, 1.0],
            [1.0, 1.0, 3.0, 2.0],
            [1.0, 1.0, 2.0, 3.0],
        ])
        .unwrap()
        .scale(0.49);
        assert!(ds.sigma_y().sub(&g).max_abs() < 1e-12);
    }

    #[test]
    fn examples_have_the_correlations_as_moments() {
        let ds = crosscut_dataset();
        let p = ds.p() as f64;
        let mut sx = Matrix::zeros(ds.n_inputs(), ds.n_inputs());
        let mut syx = Matrix::zeros(ds.n_features(), ds.n_inputs());
        for i in 0..ds.p() {
            let (x, y) = ds.example(i);
            for a in 0..x.len() {
                for b in 0..x.len() {
                    sx[(a, b)] += x[a] * x[b] / p;
                }
                for m in 0..y.len() {
                    syx[(m, a)] += y[m] * x[a] / p;
                }
            }
        }
        assert!(sx.sub(&ds.sigma_x()).max_abs() < 1e-12);
        assert!(syx.sub(&ds.sigma_yx()).max_abs() < 1e-12);
    }

    #[test]
    fn ordering_is_lower_triangular() {
        let ds = ordering_dataset();
        for i in 0..9 {
            for mu in 0..9 {
                assert_eq!(ds.y[(i, mu)], if mu <= i { 1.0 } else { 0.0 });
            }
        }
        assert!((ds.sigma_yx()[(8, 0)] - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn crosscut_layout() {
        let ds = crosscut_dataset();
        assert_eq!((ds.n_features(), ds.p()), (13, 8));
        assert_eq!(ds.y.row(11), &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(ds.y.row(12), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert_eq!(ds.y[(3, 0)], 1.1);
        // one of the top object analyzers alternates sign across branches
        let r = svd(&ds.sigma_yx()).unwrap();
        let alternating = (0..r.rank()).any(|a| {
            let v = r.v.col(a);
            let s0 = v[0].signum();
            v.iter().all(|x| x.abs() > 1e-6) && v.iter().enumerate().all(|(i, x)| x.signum() == if i % 2 == 0 { s0 } else { -s0 })
        });
        assert!(alternating);
    }

    #[test]
    fn validation_catches_mismatch() {
        let mut ds = toy_hierarchy();
        ds.item_labels.pop();
        assert!(ds.validate().is_err());
        let mut ds = toy_hierarchy();
        ds.x = Matrix::identity(3);
        assert!(ds.validate().is_err());
    }

    #[test]
    fn label_lookup_is_case_insensitive() {
        let ds = toy_hierarchy();
        assert_eq!(ds.item_index("salmon"), Some(1));
        assert_eq!(ds.feature_index("Fly"), Some(3));
        assert_eq!(ds.feature_index("wings"), None);
    }
}
