//! Branching-diffusion hierarchies.
//!
//! Levels are indexed `0..D`, level 0 being the root and level `D−1` the
//! leaves (one leaf per item). Every node at level `l` has `branching[l]`
//! children, so `M_l = Π_{k<l} B_k` nodes live at level `l`. Leaves are
//! numbered depth-first, which makes every subtree a contiguous index range.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use rand::Rng;

use super::{labels, Dataset};
use crate::linalg::Matrix;
use crate::rng;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeSpec {
    /// Number of levels `D` including root and leaves.
    pub depth: usize,
    /// `B_l` for `l = 0..D−1`.
    pub branching: Vec<usize>,
    /// Probability that a child takes the opposite sign of its parent.
    pub flip_prob: f64,
    pub n_features: usize,
    pub seed: u64,
}

impl TreeSpec {
    pub fn new(branching: &[usize], flip_prob: f64, n_features: usize, seed: u64) -> Result<Self> {
        let spec = Self { depth: branching.len() + 1, branching: branching.to_vec(), flip_prob, n_features, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 || self.branching.len() + 1 != self.depth {
            return Err(Error::invalid("tree needs depth-1 branching factors"));
        }
        if self.branching.iter().any(|&b| b == 0) {
            return Err(Error::invalid("branching factors must be positive"));
        }
        if !(0.0..=0.5).contains(&self.flip_prob) {
            return Err(Error::invalid("flip probability must lie in [0, 0.5]"));
        }
        if self.n_features == 0 {
            return Err(Error::invalid("tree needs at least one feature"));
        }
        Ok(())
    }

    /// `M_l`, the node count at each level.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut m = Vec::with_capacity(self.depth);
        m.push(1);
        for &b in &self.branching {
            m.push(m.last().unwrap() * b);
        }
        m
    }

    /// Number of leaves `P`.
    pub fn n_items(&self) -> usize {
        *self.level_sizes().last().unwrap()
    }

    /// Number of leaves below one node at `level`.
    fn leaves_below(&self, level: usize) -> usize {
        self.branching[level..].iter().product()
    }
}

/// Probability that `n` Bernoulli(`p`) trials contain an odd number of ones.
pub fn odd_parity_prob(n: usize, p: f64) -> f64 {
    // Parity recursion Ω(N) = Ω(N−1)(1−p) + (1−Ω(N−1))p, in closed form.
    (1.0 - (1.0 - 2.0 * p).powi(n as i32)) / 2.0
}

/// `q_k`, the expected per-feature overlap of two leaves whose last common
/// ancestor sits at level `k`.
pub fn analytic_overlaps(spec: &TreeSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let d = spec.depth;
    let pair_flip = 2.0 * spec.flip_prob * (1.0 - spec.flip_prob);
    Ok((0..d).map(|k| 1.0 - 2.0 * odd_parity_prob(d - 1 - k, pair_flip)).collect())
}

/// Level of the last common ancestor of leaves `a` and `b`.
pub fn lca_level(spec: &TreeSpec, a: usize, b: usize) -> usize {
    let d = spec.depth;
    (0..d).rev().find(|&l| a / spec.leaves_below(l) == b / spec.leaves_below(l)).unwrap_or(0)
}

/// The ultrametric `P x P` item correlation with entries `q_{lca(μ,ν)}`.
pub fn analytic_item_similarity(spec: &TreeSpec) -> Result<Matrix> {
    let q = analytic_overlaps(spec)?;
    let p = spec.n_items();
    Ok(Matrix::from_fn(p, p, |a, b| q[lca_level(spec, a, b)]))
}

/// Eigenvalue of the item correlation shared by all level-`l` modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeLevelEig {
    pub level: usize,
    pub eigenvalue: f64,
    pub degeneracy: usize,
}

/// `λ_l = P Σ_{k≥l} Δ_k / M_k` with `Δ_k = q_k − q_{k−1}` and `q_{−1} = 0`,
/// with multiplicity `M_{l−1}(B_{l−1} − 1)` (one uniform mode at `l = 0`).
pub fn analytic_tree_eigs(spec: &TreeSpec) -> Result<Vec<TreeLevelEig>> {
    let q = analytic_overlaps(spec)?;
    let m = spec.level_sizes();
    let p = spec.n_items() as f64;
    let delta = deltas(&q);
    let out = (0..spec.depth)
        .map(|l| {
            let tail: f64 = (l..spec.depth).map(|k| delta[k] / m[k] as f64).sum();
            let degeneracy = if l == 0 { 1 } else { m[l - 1] * (spec.branching[l - 1] - 1) };
            TreeLevelEig { level: l, eigenvalue: p * tail, degeneracy }
        })
        .collect();
    Ok(out)
}

fn deltas(q: &[f64]) -> Vec<f64> {
    (0..q.len()).map(|l| q[l] - if l == 0 { 0.0 } else { q[l - 1] }).collect()
}

/// `τ_l = (1/ε)·√(M_l/Δ_l)`, the learning timescale of level `l` when the
/// learning rate is `ε·√(P/N3)`.
pub fn tree_timescales(spec: &TreeSpec, eps_rate: f64) -> Result<Vec<f64>> {
    if !(eps_rate > 0.0) {
        return Err(Error::invalid("rate parameter must be positive"));
    }
    let q = analytic_overlaps(spec)?;
    let m = spec.level_sizes();
    deltas(&q)
        .iter()
        .enumerate()
        .map(|(l, &d)| {
            if d <= 0.0 {
                Err(Error::DegenerateStructure(format!("level {l} has Δ = {d} ≤ 0")))
            } else {
                Ok((m[l] as f64 / d).sqrt() / eps_rate)
            }
        })
        .collect()
}

/// Samples `N3` independent ±1 features by diffusing a root coin flip down
/// the tree. Feature `m` uses random stream `m`.
pub fn sample_tree_features(spec: &TreeSpec) -> Result<Dataset> {
    spec.validate()?;
    let p = spec.n_items();
    let mut y = Matrix::zeros(spec.n_features, p);
    let mut level_vals: Vec<f64> = Vec::with_capacity(p);
    let mut next: Vec<f64> = Vec::with_capacity(p);
    for m in 0..spec.n_features {
        let mut rng = rng::stream(spec.seed, m as u64);
        level_vals.clear();
        level_vals.push(if rng.random_bool(0.5) { 1.0 } else { -1.0 });
        for &b in &spec.branching {
            next.clear();
            for &parent in &level_vals {
                for _ in 0..b {
                    let flip = rng.random::<f64>() < spec.flip_prob;
                    next.push(if flip { -parent } else { parent });
                }
            }
            core::mem::swap(&mut level_vals, &mut next);
        }
        for (i, &v) in level_vals.iter().enumerate() {
            y[(m, i)] = v;
        }
    }
    let name = format!("tree-d{}-eps{}", spec.depth, spec.flip_prob);
    Dataset::one_hot(&name, labels("leaf", p), labels("f", spec.n_features), y)
}

/// Category levels below the root, top to bottom; each level lists its
/// groups of leaf indices. The leaf level is included.
pub fn tree_partition(spec: &TreeSpec) -> Vec<Vec<Vec<usize>>> {
    let p = spec.n_items();
    (1..spec.depth)
        .map(|l| {
            let width = spec.leaves_below(l);
            (0..p / width).map(|g| (g * width..(g + 1) * width).collect()).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eig;
    use alloc::vec;

    fn spec(eps: f64, n3: usize) -> TreeSpec {
        TreeSpec::new(&[2, 2], eps, n3, 1).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert!((odd_parity_prob(1, 0.3) - 0.3).abs() < 1e-15);
        assert!((odd_parity_prob(2, 0.255) - 0.379_95).abs() < 1e-12);
        for n in 0..8 {
            assert!((odd_parity_prob(n.max(1), 0.5) - 0.5).abs() < 1e-15);
        }
        // agrees with the explicit recursion
        let mut omega = 0.0;
        for n in 1..12 {
            omega = omega * (1.0 - 0.17) + (1.0 - omega) * 0.17;
            assert!((odd_parity_prob(n, 0.17) - omega).abs() < 1e-14);
        }
    }

    #[test]
    fn overlaps_at_eps_015() {
        let q = analytic_overlaps(&spec(0.15, 1)).unwrap();
        assert_eq!(q[2], 1.0);
        assert!((q[1] - 0.49).abs() < 1e-12);
        assert!((q[0] - 0.2401).abs() < 1e-12);
    }

    #[test]
    fn level_bookkeeping() {
        let e = analytic_tree_eigs(&spec(0.15, 1)).unwrap();
        let deg: Vec<usize> = e.iter().map(|x| x.degeneracy).collect();
        assert_eq!(deg, vec![1, 1, 2]);
        assert_eq!(deg.iter().sum::<usize>(), 4);
        assert!(e.windows(2).all(|w| w[0].eigenvalue > w[1].eigenvalue));
    }

    #[test]
    fn eigenvalues_match_ultrametric_matrix() {
        let s = spec(0.15, 1);
        let sigma = analytic_item_similarity(&s).unwrap();
        let num = sym_eig(&sigma).unwrap().values;
        let mut analytic = Vec::new();
        for e in analytic_tree_eigs(&s).unwrap() {
            analytic.extend(core::iter::repeat(e.eigenvalue).take(e.degeneracy));
        }
        for (a, b) in num.iter().zip(&analytic) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn no_mutation_puts_everything_at_root() {
        let s = spec(0.0, 50);
        let e = analytic_tree_eigs(&s).unwrap();
        assert!((e[0].eigenvalue - 4.0).abs() < 1e-12);
        assert!(e[1..].iter().all(|x| x.eigenvalue.abs() < 1e-12));
        let ds = sample_tree_features(&s).unwrap();
        let emp = ds.y.gram().scale(1.0 / 50.0);
        assert!(emp.sub(&Matrix::from_fn(4, 4, |_, _| 1.0)).max_abs() == 0.0);
    }

    #[test]
    fn timescales() {
        let s = spec(0.15, 1);
        let t = tree_timescales(&s, 0.1).unwrap();
        let q = analytic_overlaps(&s).unwrap();
        assert!((t[0] - (1.0 / 0.1) / q[0].sqrt()).abs() < 1e-12);
        assert!((t[1] - (2.0 / (q[1] - q[0])).sqrt() / 0.1).abs() < 1e-12);
        assert!((t[2] - (4.0 / (q[2] - q[1])).sqrt() / 0.1).abs() < 1e-12);
        assert!(t[0] < t[1]);
        assert!(matches!(tree_timescales(&spec(0.0, 1), 0.1), Err(Error::DegenerateStructure(_))));
    }

    #[test]
    fn lca_and_partition() {
        let s = TreeSpec::new(&[2, 3], 0.1, 1, 0).unwrap();
        assert_eq!(s.n_items(), 6);
        assert_eq!(lca_level(&s, 0, 2), 1);
        assert_eq!(lca_level(&s, 0, 3), 0);
        assert_eq!(lca_level(&s, 4, 4), 2);
        let part = tree_partition(&s);
        assert_eq!(part[0], vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(part[1].len(), 6);
    }

    #[test]
    fn invalid_specs() {
        assert!(TreeSpec::new(&[2, 0], 0.1, 1, 0).is_err());
        assert!(TreeSpec::new(&[2], 0.6, 1, 0).is_err());
        assert!(TreeSpec::new(&[2], 0.1, 0, 0).is_err());
    }
}
