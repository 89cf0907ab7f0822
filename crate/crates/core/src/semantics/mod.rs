//! Semantic analysis through the SVD of the input-output correlations.
//!
//! Modes of `Σ^yx` are the learned categorical distinctions: `v^α` ranks
//! items by typicality, `u^α` is the feature prototype of the distinction.
//! Items are described by `o^i = P·Σ^yx e_i`, the feature vector of item `i`
//! for one-hot inputs.

mod coherence;
mod tree;

pub use coherence::{
    category_coherence, coherence_trial, empirical_overlaps, planted_theta, predicted_overlaps, CoherenceResult,
};
pub use tree::{basic_level_profile, tree_category_coherence, BasicLevelProfile};

use alloc::vec::Vec;

use crate::datagen::Dataset;
use crate::linalg::{svd, Matrix, SvdResult};
use crate::{Error, Result};

/// The mode triples `(s_α, u^α, v^α)` of a dataset's `Σ^yx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticSvd<'a> {
    pub dataset: &'a Dataset,
    pub svd: SvdResult,
    pub p: usize,
    sigma_yx: Matrix,
}

/// Decomposes `Σ^yx` of a dataset.
pub fn analyze(dataset: &Dataset) -> Result<SemanticSvd<'_>> {
    dataset.validate()?;
    let sigma_yx = dataset.sigma_yx();
    let svd = svd(&sigma_yx)?;
    Ok(SemanticSvd { dataset, svd, p: dataset.p(), sigma_yx })
}

impl SemanticSvd<'_> {
    pub fn sigma_yx(&self) -> &Matrix {
        &self.sigma_yx
    }

    pub fn n_modes(&self) -> usize {
        self.svd.rank()
    }

    /// `o^i = P·Σ^yx e_i`.
    pub fn item_features(&self, i: usize) -> Vec<f64> {
        self.sigma_yx.col(i).into_iter().map(|v| v * self.p as f64).collect()
    }

    fn check_mode(&self, alpha: usize) -> Result<f64> {
        let s = *self
            .svd
            .s
            .get(alpha)
            .ok_or_else(|| Error::invalid("mode index out of range"))?;
        if s <= f64::EPSILON * self.svd.s[0].max(f64::MIN_POSITIVE) || s == 0.0 {
            return Err(Error::UndefinedTypicality { mode: alpha });
        }
        Ok(s)
    }
}

/// Typicality of item `i` in mode `α`, as the prototype-weighted feature
/// sum `(1/(P s_α)) Σ_m u_m^α o_m^i`.
pub fn typicality(a: &SemanticSvd, item: usize, alpha: usize) -> Result<f64> {
    let s = a.check_mode(alpha)?;
    if item >= a.sigma_yx.cols() {
        return Err(Error::invalid("item index out of range"));
    }
    let o = a.item_features(item);
    let sum: f64 = (0..o.len()).map(|m| a.svd.u[(m, alpha)] * o[m]).sum();
    Ok(sum / (a.p as f64 * s))
}

/// Prototype of mode `α`: the typicality-weighted average of item feature
/// vectors, `(1/(P s_α)) Σ_i v_i^α o^i`.
pub fn prototype(a: &SemanticSvd, alpha: usize) -> Result<Vec<f64>> {
    let s = a.check_mode(alpha)?;
    let mut out = alloc::vec![0.0; a.sigma_yx.rows()];
    for i in 0..a.sigma_yx.cols() {
        let w = a.svd.v[(i, alpha)];
        for (acc, o) in out.iter_mut().zip(a.item_features(i)) {
            *acc += w * o;
        }
    }
    let k = 1.0 / (a.p as f64 * s);
    Ok(out.into_iter().map(|v| v * k).collect())
}

/// Mode `α`'s share of the trained network's output on feature `m` for
/// item `i`: `u_m^α s_α v_i^α`.
pub fn typicality_response(a: &SemanticSvd, item: usize, feature: usize, alpha: usize) -> f64 {
    a.svd.u[(feature, alpha)] * a.svd.s[alpha] * a.svd.v[(item, alpha)]
}

/// Best rank-`k` map and its training error `(P/2) Σ_{α>k} s_α²`.
pub fn truncated_map(a: &SemanticSvd, k: usize) -> Result<(Matrix, f64)> {
    if k > a.n_modes() {
        return Err(Error::invalid("truncation rank exceeds the number of modes"));
    }
    let kept: Vec<f64> = a.svd.s.iter().enumerate().map(|(i, &s)| if i < k { s } else { 0.0 }).collect();
    let sse = 0.5 * a.p as f64 * a.svd.s[k..].iter().map(|s| s * s).sum::<f64>();
    Ok((a.svd.compose(&kept), sse))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_hierarchy;
    use crate::rng;

    fn random_dataset(seed: u64, n3: usize, p: usize) -> Dataset {
        let mut g = rng::stream(seed, 0);
        let y = rng::gaussian_matrix(&mut g, n3, p, 1.0);
        let items = (0..p).map(|i| alloc::format!("i{i}")).collect();
        let feats = (0..n3).map(|i| alloc::format!("f{i}")).collect();
        Dataset::one_hot("rand", items, feats, y).unwrap()
    }

    #[test]
    fn toy_modes() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let want = [1.852_03, 1.212_44, 0.7, 0.7];
        for (s, w) in a.svd.s.iter().zip(want) {
            assert!((s - w).abs() < 1e-5, "{s}");
        }
    }

    #[test]
    fn zero_targets() {
        let mut ds = toy_hierarchy();
        ds.y = Matrix::zeros(7, 4);
        let a = analyze(&ds).unwrap();
        assert!(a.svd.s.iter().all(|&s| s == 0.0));
        assert_eq!(typicality(&a, 0, 0), Err(Error::UndefinedTypicality { mode: 0 }));
        assert!(prototype(&a, 1).is_err());
    }

    #[test]
    fn animal_plant_typicality() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let canary = typicality(&a, 0, 1).unwrap();
        assert!((canary.abs() - 0.5).abs() < 1e-10, "{canary}");
        // Canary and Oak sit on opposite sides of the distinction.
        assert!(canary * typicality(&a, 2, 1).unwrap() < 0.0);
    }

    #[test]
    fn dualities_on_random_data() {
        for seed in 0..5 {
            let ds = random_dataset(seed, 9, 6);
            let a = analyze(&ds).unwrap();
            for alpha in 0..a.n_modes() {
                let proto = prototype(&a, alpha).unwrap();
                for m in 0..9 {
                    assert!((proto[m] - a.svd.u[(m, alpha)]).abs() < 1e-10);
                }
                for i in 0..6 {
                    assert!((typicality(&a, i, alpha).unwrap() - a.svd.v[(i, alpha)]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn orthogonal_item_has_zero_typicality() {
        // Item 2 only has feature 2, which mode 0 ignores.
        let y = Matrix::from_rows(&[[2.0, 2.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let ds = Dataset::one_hot("o", crate::datagen::labels("i", 3), crate::datagen::labels("f", 2), y).unwrap();
        let a = analyze(&ds).unwrap();
        assert!(typicality(&a, 2, 0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn prototypes_of_toy() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let p0 = prototype(&a, 0).unwrap();
        assert!(p0.iter().all(|&w| w >= -1e-12));
        let p1 = prototype(&a, 1).unwrap();
        let (mv, roots) = (ds.feature_index("Move").unwrap(), ds.feature_index("Roots").unwrap());
        assert!(p1[mv] * p1[roots] < 0.0);
        assert!(p1[ds.feature_index("Grow").unwrap()].abs() < 1e-10);
    }

    #[test]
    fn responses_reconstruct_prediction() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        for i in 0..4 {
            for m in 0..7 {
                let total: f64 = (0..a.n_modes()).map(|al| typicality_response(&a, i, m, al)).sum();
                assert!((total - a.sigma_yx()[(m, i)]).abs() < 1e-10);
            }
        }
        // Larger typicality means a larger response on the same feature.
        let mv = ds.feature_index("Move").unwrap();
        let v = |i: usize| a.svd.v[(i, 1)].abs();
        let r = |i: usize| typicality_response(&a, i, mv, 1).abs();
        for i in 0..4 {
            for j in 0..4 {
                if v(i) > v(j) + 1e-9 {
                    assert!(r(i) > r(j));
                }
            }
        }
    }

    #[test]
    fn truncation_limits() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let (full, sse) = truncated_map(&a, 4).unwrap();
        assert!(sse.abs() < 1e-12 && full.sub(a.sigma_yx()).max_abs() < 1e-10);
        let (zero, sse0) = truncated_map(&a, 0).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
        let total = 0.5 * 4.0 * ds.sigma_y().trace();
        assert!((sse0 - total).abs() < 1e-10);
        assert!(truncated_map(&a, 5).is_err());
    }

    #[test]
    fn truncation_beats_random_rank_two_maps() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let (w, sse) = truncated_map(&a, 2).unwrap();
        let direct = 0.5 * 4.0 * a.sigma_yx().sub(&w).frobenius_sq();
        assert!((direct - sse).abs() < 1e-10);
        let mut g = rng::stream(11, 0);
        for _ in 0..200 {
            let l = rng::gaussian_matrix(&mut g, 7, 2, 1.0);
            let r = rng::gaussian_matrix(&mut g, 2, 4, 1.0);
            let m = l.matmul(&r);
            let e = 0.5 * 4.0 * a.sigma_yx().sub(&m).frobenius_sq();
            assert!(sse <= e + 1e-12);
        }
    }
}
