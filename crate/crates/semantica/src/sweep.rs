//! Monte-Carlo sweeps run in parallel over seeds.

use rayon::prelude::*;

use semantica_core::datagen::{Dataset, PlantedSpec};
use semantica_core::dynamics::{train_deep, DeepNet, TrainConfig};
use semantica_core::knowledge::{rsa_report, RsaReport};
use semantica_core::semantics::{coherence_trial, predicted_overlaps};

use crate::io::Table;
use crate::AppError;

/// Worker pool sized by `SEMANTICA_THREADS` (all cores when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool, AppError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SEMANTICA_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| AppError::Input(format!("SEMANTICA_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(AppError::Input("SEMANTICA_THREADS must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| AppError::Input(e.to_string()))
}

/// `n` points from `lo` to `hi` evenly spaced in log scale.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect(),
    }
}

/// Planted-category sweep over coherence at a fixed size and background
/// density. Each point tunes `p_in` to hit the requested coherence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSweep {
    pub n_features: usize,
    pub n_objects: usize,
    pub q: f64,
    pub k: usize,
    pub coherences: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

/// Mean and standard error of the measured overlaps at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub coherence: f64,
    pub c: f64,
    pub pred_u2: f64,
    pub pred_v2: f64,
    pub emp_u2: f64,
    pub emp_v2: f64,
    pub stderr_u2: f64,
    pub stderr_v2: f64,
}

impl CoherenceSweep {
    /// `p = q + √(𝒞 q(1−q) √(N_f N_o) / K²)`.
    pub fn p_for(&self, coherence: f64) -> f64 {
        let q = self.q;
        let n = (self.n_features as f64 * self.n_objects as f64).sqrt();
        q + (coherence * q * (1.0 - q) * n / (self.k * self.k) as f64).sqrt()
    }

    pub fn spec(&self, coherence: f64, seed: u64) -> Result<PlantedSpec, AppError> {
        let spec = PlantedSpec {
            n_objects: self.n_objects,
            n_features: self.n_features,
            k_objects: self.k,
            k_features: self.k,
            p_in: self.p_for(coherence),
            p_out: self.q,
            seed,
        };
        spec.validate()
            .map_err(|e| AppError::Input(format!("coherence {coherence} is out of reach at these sizes: {e}")))?;
        Ok(spec)
    }

    pub fn run(&self, pool: &rayon::ThreadPool) -> Result<Vec<SweepPoint>, AppError> {
        if self.trials == 0 || self.coherences.is_empty() {
            return Err(AppError::Input("sweep needs at least one trial and one grid point".into()));
        }
        let specs = self
            .coherences
            .iter()
            .map(|&c| (0..self.trials).map(|j| self.spec(c, self.seed + j as u64)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let jobs: Vec<&PlantedSpec> = specs.iter().flatten().collect();
        let results = pool.install(|| {
            jobs.par_iter().map(|s| coherence_trial(s)).collect::<Result<Vec<_>, _>>()
        })?;
        let c = self.n_objects as f64 / self.n_features as f64;
        let mut out = Vec::with_capacity(self.coherences.len());
        for (i, &coh) in self.coherences.iter().enumerate() {
            let chunk = &results[i * self.trials..(i + 1) * self.trials];
            let (pu, pv) = predicted_overlaps(coh, c)?;
            let (mu, su) = mean_stderr(chunk.iter().map(|r| r.empirical_u_overlap2));
            let (mv, sv) = mean_stderr(chunk.iter().map(|r| r.empirical_v_overlap2));
            out.push(SweepPoint {
                coherence: coh,
                c,
                pred_u2: pu,
                pred_v2: pv,
                emp_u2: mu,
                emp_v2: mv,
                stderr_u2: su,
                stderr_v2: sv,
            });
        }
        Ok(out)
    }
}

/// Mean and standard error; the error is NaN for a single sample.
pub fn mean_stderr(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn sweep_table(provenance: &str, points: &[SweepPoint]) -> Table {
    let mut t = Table::new(provenance, &["C", "c", "pred_u2", "pred_v2", "emp_u2", "emp_v2", "stderr_u2", "stderr_v2"]);
    for p in points {
        t.push_floats(&[p.coherence, p.c, p.pred_u2, p.pred_v2, p.emp_u2, p.emp_v2, p.stderr_u2, p.stderr_v2]);
    }
    t
}

/// Trains one network per seed in parallel and compares their similarity
/// structure.
pub fn rsa_parallel(
    pool: &rayon::ThreadPool,
    dataset: &Dataset,
    seeds: &[u64],
    cfg: &TrainConfig,
) -> Result<RsaReport, AppError> {
    if seeds.len() < 2 {
        return Err(AppError::Input("RSA comparison needs at least two seeds".into()));
    }
    let nets = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| train_deep(dataset, &TrainConfig { seed, ..cfg.clone() }).map(|(n, _)| n))
            .collect::<Result<Vec<DeepNet>, _>>()
    })?;
    Ok(rsa_report(dataset, seeds, &nets)?)
}
