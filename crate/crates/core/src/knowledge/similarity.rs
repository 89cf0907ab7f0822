use alloc::vec::Vec;

use crate::datagen::Dataset;
use crate::dynamics::{mode_strengths, train_deep, DeepNet, TrainConfig};
use crate::linalg::{inverse, Matrix, SvdResult};
use crate::rng;
use crate::{Error, Result};

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;

/// `Σ^h_ij = h_iᵀ h_j` for hidden representations stored as columns.
pub fn neural_similarity(h: &Matrix) -> Matrix {
    h.gram()
}

/// `Σ^ŷ_ij = ŷ_iᵀ ŷ_j` for predictions stored as columns.
pub fn behavioral_similarity(yhat: &Matrix) -> Matrix {
    yhat.gram()
}

/// Neural and behavioural similarity of the same network on the same
/// probe items.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityPair {
    pub neural: Matrix,
    pub behavioral: Matrix,
}

impl SimilarityPair {
    /// Similarities of `net` on the probe inputs `x` (columns).
    pub fn of(net: &DeepNet, x: &Matrix) -> Self {
        let h = net.hidden(x);
        let yhat = net.w2.matmul(&h);
        Self { neural: neural_similarity(&h), behavioral: behavioral_similarity(&yhat) }
    }
}

/// `‖Σ^ŷ − (Σ^h)²‖_F / ‖Σ^ŷ‖_F`.
pub fn similarity_relation_check(pair: &SimilarityPair) -> Result<f64> {
    if pair.neural.shape() != pair.behavioral.shape() || !pair.neural.is_square() {
        return Err(Error::invalid("similarity matrices must be square and of equal size"));
    }
    let denom = pair.behavioral.frobenius();
    if denom == 0.0 {
        return Err(Error::invalid("behavioural similarity is zero"));
    }
    let sq = pair.neural.matmul(&pair.neural);
    Ok(pair.behavioral.sub(&sq).frobenius() / denom)
}

/// Minimum-norm weights for the composite map `U·A(t)·Vᵀ`:
/// `W¹ = R√A Vᵀ`, `W² = U√A Rᵀ`. `R` is a seeded random `n2 x r` matrix
/// with orthonormal columns, or the leading columns of the identity when
/// `rotation_seed` is `None`. Use `t = ∞` for the converged network.
pub fn min_norm_weights(
    svd: &SvdResult,
    a0: f64,
    tau: f64,
    t: f64,
    n2: usize,
    rotation_seed: Option<u64>,
) -> Result<DeepNet> {
    let r = svd.rank();
    if n2 < r {
        return Err(Error::invalid("hidden layer is narrower than the number of modes"));
    }
    let roots: Vec<f64> = mode_strengths(&svd.s, a0, tau, t)?.into_iter().map(|a| a.sqrt()).collect();
    let rot = match rotation_seed {
        Some(seed) => rng::random_orthonormal(seed, n2, r)?,
        None => Matrix::from_fn(n2, r, |i, j| if i == j { 1.0 } else { 0.0 }),
    };
    let w1 = rot.scale_cols(&roots).matmul_t(&svd.v);
    let w2 = svd.u.scale_cols(&roots).matmul_t(&rot);
    DeepNet::new(w1, w2)
}

/// Same composite map in another gauge: `W¹ ← Q W¹`, `W² ← W² Q⁻¹`.
pub fn gauge_weights(net: &DeepNet, q: &Matrix) -> Result<DeepNet> {
    if !q.is_square() || q.rows() != net.n_hidden() {
        return Err(Error::invalid("gauge must be a square matrix on the hidden layer"));
    }
    let qi = inverse(q)?;
    DeepNet::new(q.matmul(&net.w1), net.w2.matmul(&qi))
}

/// `D_ab = ‖Σ_a − Σ_b‖_F / ‖Σ_a‖_F`.
pub fn pairwise_distances(similarities: &[Matrix]) -> Result<Matrix> {
    let n = similarities.len();
    let mut d = Matrix::zeros(n, n);
    for a in 0..n {
        let na = similarities[a].frobenius();
        if na == 0.0 {
            return Err(Error::invalid("similarity matrix is zero"));
        }
        for b in 0..n {
            if similarities[b].shape() != similarities[a].shape() {
                return Err(Error::invalid("similarity matrices differ in size"));
            }
            d[(a, b)] = similarities[a].sub(&similarities[b]).frobenius() / na;
        }
    }
    Ok(d)
}

/// Boundaries between "similarity conserved" and "not conserved".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsaThresholds {
    pub conserved: f64,
    pub not_conserved: f64,
}

impl Default for RsaThresholds {
    fn default() -> Self {
        Self { conserved: 0.05, not_conserved: 0.2 }
    }
}

/// Networks trained from several seeds, compared on the dataset's inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RsaReport {
    pub seeds: Vec<u64>,
    /// Pairwise neural-similarity distances, see [`pairwise_distances`].
    pub distances: Matrix,
    /// [`similarity_relation_check`] residual per network.
    pub residuals: Vec<f64>,
    /// `‖W¹‖² + ‖W²‖²` per network.
    pub norms: Vec<f64>,
    pub neural: Vec<Matrix>,
}

impl RsaReport {
    pub fn max_distance(&self) -> f64 {
        self.distances.max_abs()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, &r| m.max(r))
    }

    pub fn min_residual(&self) -> f64 {
        self.residuals.iter().fold(f64::INFINITY, |m, &r| m.min(r))
    }

    /// All distances and residuals below the conserved threshold.
    pub fn conserved(&self, th: RsaThresholds) -> bool {
        self.max_distance() < th.conserved && self.max_residual() < th.conserved
    }

    /// Some distance and every residual above the not-conserved threshold.
    pub fn not_conserved(&self, th: RsaThresholds) -> bool {
        self.max_distance() > th.not_conserved && self.min_residual() > th.not_conserved
    }
}

/// Builds the report from already trained networks.
pub fn rsa_report(dataset: &Dataset, seeds: &[u64], nets: &[DeepNet]) -> Result<RsaReport> {
    let pairs: Vec<SimilarityPair> = nets.iter().map(|n| SimilarityPair::of(n, &dataset.x)).collect();
    let residuals = pairs.iter().map(similarity_relation_check).collect::<Result<Vec<f64>>>()?;
    let neural: Vec<Matrix> = pairs.into_iter().map(|p| p.neural).collect();
    Ok(RsaReport {
        seeds: seeds.to_vec(),
        distances: pairwise_distances(&neural)?,
        residuals,
        norms: nets.iter().map(DeepNet::squared_norm).collect(),
        neural,
    })
}

/// Trains one deep network per seed with `cfg` (its seed field replaced)
/// and compares their hidden-layer similarity structure.
pub fn rsa_invariance(dataset: &Dataset, seeds: &[u64], cfg: &TrainConfig) -> Result<RsaReport> {
    if seeds.len() < 2 {
        return Err(Error::invalid("RSA comparison needs at least two seeds"));
    }
    let nets = seeds
        .iter()
        .map(|&seed| train_deep(dataset, &TrainConfig { seed, ..cfg.clone() }).map(|(net, _)| net))
        .collect::<Result<Vec<DeepNet>>>()?;
    rsa_report(dataset, seeds, &nets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_hierarchy;
    use crate::dynamics::hidden_reps;
    use crate::linalg::sym_eig;
    use crate::semantics::analyze;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn orthonormal_columns_give_identity() {
        let q = rng::random_orthonormal(4, 6, 3).unwrap();
        assert!(neural_similarity(&q).sub(&Matrix::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn analytic_hidden_similarity() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let t = 3.0;
        let h = hidden_reps(&a.svd, 1e-2, 1.0, t, &ds.x).unwrap();
        let strengths = mode_strengths(&a.svd.s, 1e-2, 1.0, t).unwrap();
        let want = a.svd.v.scale_cols(&strengths).matmul_t(&a.svd.v);
        assert!(neural_similarity(&h).sub(&want).max_abs() < 1e-12);
        let h_inf = hidden_reps(&a.svd, 1e-2, 1.0, INF, &ds.x).unwrap();
        let eig = sym_eig(&neural_similarity(&h_inf)).unwrap();
        for (e, s) in eig.values.iter().zip(&a.svd.s) {
            assert!((e - s).abs() < 1e-10);
        }
    }

    #[test]
    fn min_norm_network() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        for t in [1.0, INF] {
            let net = min_norm_weights(&a.svd, 1e-3, 1.0, t, 8, Some(2)).unwrap();
            let strengths = mode_strengths(&a.svd.s, 1e-3, 1.0, t).unwrap();
            assert!(net.map().sub(&a.svd.compose(&strengths)).max_abs() < 1e-10);
            let trace: f64 = strengths.iter().sum();
            assert!((net.squared_norm() - 2.0 * trace).abs() < 1e-10);
            let pair = SimilarityPair::of(&net, &ds.x);
            assert!(similarity_relation_check(&pair).unwrap() < 1e-10);
        }
        let net = min_norm_weights(&a.svd, 1e-3, 1.0, INF, 4, None).unwrap();
        assert!((net.squared_norm() - 8.928_9).abs() < 1e-4);
        // canonical gauge: W¹ = √S Vᵀ
        let want = a.svd.v.transpose().scale_rows(&a.svd.s.iter().map(|s| s.sqrt()).collect::<Vec<_>>());
        assert!(net.w1.sub(&want).max_abs() < 1e-12);
    }

    #[test]
    fn rotation_does_not_change_similarity() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let base = SimilarityPair::of(&min_norm_weights(&a.svd, 1e-3, 1.0, 2.0, 10, None).unwrap(), &ds.x);
        for seed in 0..5 {
            let p = SimilarityPair::of(&min_norm_weights(&a.svd, 1e-3, 1.0, 2.0, 10, Some(seed)).unwrap(), &ds.x);
            assert!(p.neural.sub(&base.neural).max_abs() < 1e-10);
        }
    }

    #[test]
    fn shared_eigenvectors() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let net = min_norm_weights(&a.svd, 1e-3, 1.0, 2.5, 6, Some(1)).unwrap();
        let pair = SimilarityPair::of(&net, &ds.x);
        let eh = sym_eig(&pair.neural).unwrap();
        let ey = sym_eig(&pair.behavioral).unwrap();
        for (h, y) in eh.values.iter().zip(&ey.values) {
            assert!((h * h - y).abs() < 1e-10);
        }
        // Σ^ŷ is a polynomial in Σ^h, so Σ^h eigenvectors are Σ^ŷ eigenvectors.
        for k in 0..4 {
            let v = eh.vectors.col(k);
            let yv = pair.behavioral.mat_vec(&v);
            for (a, b) in yv.iter().zip(&v) {
                assert!((a - eh.values[k].powi(2) * b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn non_orthogonal_gauges_cost_norm() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let net = min_norm_weights(&a.svd, 1e-3, 1.0, INF, 4, Some(3)).unwrap();
        let mut g = rng::stream(17, 0);
        for _ in 0..50 {
            let q = Matrix::identity(4).add(&rng::gaussian_matrix(&mut g, 4, 4, 0.3));
            let other = gauge_weights(&net, &q).unwrap();
            assert!(other.map().sub(&net.map()).max_abs() < 1e-9);
            assert!(other.squared_norm() > net.squared_norm());
        }
        let rot = rng::random_orthonormal(5, 4, 4).unwrap();
        let same = gauge_weights(&net, &rot).unwrap();
        assert!((same.squared_norm() - net.squared_norm()).abs() < 1e-10);
    }

    #[test]
    fn distances() {
        let a = Matrix::identity(3);
        let b = Matrix::identity(3).scale(2.0);
        let d = pairwise_distances(&[a.clone(), b, a]).unwrap();
        assert!((d[(0, 1)] - 1.0).abs() < 1e-15 && (d[(1, 0)] - 0.5).abs() < 1e-15);
        assert_eq!(d[(0, 2)], 0.0);
        assert!(pairwise_distances(&[Matrix::zeros(2, 2)]).is_err());
    }

    #[test]
    fn same_seed_is_identical() {
        let ds = toy_hierarchy();
        let mut cfg = TrainConfig::new(0.05, 60, 0.1, 0);
        cfg.hidden_dim = Some(8);
        cfg.record_every = 60;
        let rep = rsa_invariance(&ds, &[4, 4], &cfg).unwrap();
        assert_eq!(rep.max_distance(), 0.0);
        assert!(rsa_invariance(&ds, &[4], &cfg).is_err());
    }
}
