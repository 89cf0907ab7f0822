//! A single disjoint category hidden in Bernoulli noise.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use rand::Rng;

use crate::linalg::Matrix;
use crate::rng;
use crate::{Error, Result};

/// `K_o` items and `K_f` features form the category: inside it a feature is
/// present with probability `p_in`, everywhere else with `p_out`. The
/// category occupies the first `K_f` features and the first `K_o` items.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub n_objects: usize,
    pub n_features: usize,
    pub k_objects: usize,
    pub k_features: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl PlantedSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_objects == 0 || self.n_features == 0 {
            return Err(Error::invalid("planted model needs objects and features"));
        }
        if self.n_objects > self.n_features {
            return Err(Error::invalid("aspect ratio N_o/N_f must not exceed 1"));
        }
        if self.k_objects == 0 || self.k_features == 0 || self.k_objects > self.n_objects || self.k_features > self.n_features {
            return Err(Error::invalid("category size must be positive and fit inside the data"));
        }
        if !(self.p_out > 0.0 && self.p_out < 1.0) {
            return Err(Error::invalid("background probability must lie in (0, 1)"));
        }
        if !(self.p_in >= self.p_out && self.p_in <= 1.0) {
            return Err(Error::invalid("in-category probability must lie in [p_out, 1]"));
        }
        Ok(())
    }

    /// `c = N_o / N_f`.
    pub fn aspect(&self) -> f64 {
        self.n_objects as f64 / self.n_features as f64
    }

    /// Unit vectors on the category's features and items.
    pub fn ideal_vectors(&self) -> (Vec<f64>, Vec<f64>) {
        let indicator = |n: usize, k: usize| {
            let h = 1.0 / (k as f64).sqrt();
            (0..n).map(|i| if i < k { h } else { 0.0 }).collect::<Vec<f64>>()
        };
        (indicator(self.n_features, self.k_features), indicator(self.n_objects, self.k_objects))
    }
}

/// The `N_f x N_o` 0/1 matrix. Feature row `m` uses random stream `m`.
pub fn planted_category(spec: &PlantedSpec) -> Result<Matrix> {
    spec.validate()?;
    let mut r = Matrix::zeros(spec.n_features, spec.n_objects);
    for m in 0..spec.n_features {
        let mut g = rng::stream(spec.seed, m as u64);
        for j in 0..spec.n_objects {
            let prob = if m < spec.k_features && j < spec.k_objects { spec.p_in } else { spec.p_out };
            if g.random::<f64>() < prob {
                r[(m, j)] = 1.0;
            }
        }
    }
    Ok(r)
}

/// `(R − q·11ᵀ) / √(N_f q (1−q))`.
pub fn rescale_planted(r: &Matrix, q: f64, n_f: usize) -> Result<Matrix> {
    if !(q > 0.0 && q < 1.0) || n_f == 0 {
        return Err(Error::invalid("rescaling needs 0 < q < 1 and N_f > 0"));
    }
    let k = 1.0 / (n_f as f64 * q * (1.0 - q)).sqrt();
    Ok(r.map(|v| (v - q) * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd;

    fn spec(p: f64, q: f64, n_f: usize, n_o: usize, k: usize) -> PlantedSpec {
        PlantedSpec { n_objects: n_o, n_features: n_f, k_objects: k, k_features: k, p_in: p, p_out: q, seed: 3 }
    }

    #[test]
    fn background_moments() {
        let s = spec(0.5, 0.1, 400, 200, 20);
        let rt = rescale_planted(&planted_category(&s).unwrap(), 0.1, 400).unwrap();
        let mut vals = Vec::new();
        for m in 20..400 {
            vals.extend_from_slice(&rt.row(m)[..]);
        }
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let target = 1.0 / 400.0;
        assert!(mean.abs() < 3.0 * (target / n).sqrt(), "mean {mean}");
        // Var of a squared Bernoulli deviation, for a 3-sigma band on the sample variance.
        let fourth = (0.9f64.powi(4) * 0.1 + 0.1f64.powi(4) * 0.9) / (0.09f64 * 0.09) * target * target;
        assert!((var - target).abs() < 3.0 * ((fourth - target * target) / n).sqrt(), "var {var}");
    }

    #[test]
    fn pure_noise_edge() {
        let s = spec(0.1, 0.1, 800, 400, 10);
        let rt = rescale_planted(&planted_category(&s).unwrap(), 0.1, 800).unwrap();
        let top = svd(&rt).unwrap().s[0];
        let edge = 1.0 + s.aspect().sqrt();
        assert!((top - edge).abs() / edge < 0.05, "{top} vs {edge}");
    }

    #[test]
    fn category_placement() {
        let s = spec(1.0, 0.01, 50, 30, 5);
        let r = planted_category(&s).unwrap();
        for m in 0..5 {
            assert!(r.row(m)[..5].iter().all(|&v| v == 1.0));
        }
        let (u, v) = s.ideal_vectors();
        assert!((crate::linalg::norm(&u) - 1.0).abs() < 1e-12);
        assert_eq!(v.iter().filter(|&&x| x > 0.0).count(), 5);
    }

    #[test]
    fn invalid() {
        assert!(spec(0.05, 0.1, 10, 5, 2).validate().is_err());
        assert!(spec(0.5, 0.1, 5, 10, 2).validate().is_err());
        assert!(spec(0.5, 0.0, 10, 5, 2).validate().is_err());
        assert!(spec(0.5, 0.1, 10, 5, 6).validate().is_err());
    }
}
