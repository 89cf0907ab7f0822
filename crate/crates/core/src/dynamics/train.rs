//! Direct simulation of gradient descent on deep (two weight layer) and
//! shallow linear networks.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use crate::datagen::Dataset;
use crate::linalg::{svd, Matrix, SvdResult};
use crate::rng::{self, streams};
use crate::{Error, Result};

/// `ŷ = W² W¹ x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepNet {
    /// `N2 x N1`.
    pub w1: Matrix,
    /// `N3 x N2`.
    pub w2: Matrix,
}

impl DeepNet {
    pub fn new(w1: Matrix, w2: Matrix) -> Result<Self> {
        if w2.cols() != w1.rows() {
            return Err(Error::invalid(format!(
                "W2 has {} columns but W1 has {} rows",
                w2.cols(),
                w1.rows()
            )));
        }
        Ok(Self { w1, w2 })
    }

    pub fn n_inputs(&self) -> usize {
        self.w1.cols()
    }

    pub fn n_hidden(&self) -> usize {
        self.w1.rows()
    }

    pub fn n_outputs(&self) -> usize {
        self.w2.rows()
    }

    /// Composite map `W² W¹`.
    pub fn map(&self) -> Matrix {
        self.w2.matmul(&self.w1)
    }

    /// Hidden activity `W¹ x` for each probe column of `x`.
    pub fn hidden(&self, x: &Matrix) -> Matrix {
        self.w1.matmul(x)
    }

    pub fn predict(&self, x: &Matrix) -> Matrix {
        self.w2.matmul(&self.w1.matmul(x))
    }

    /// `‖W¹‖²_F + ‖W²‖²_F`.
    pub fn squared_norm(&self) -> f64 {
        self.w1.frobenius_sq() + self.w2.frobenius_sq()
    }

    pub fn is_finite(&self) -> bool {
        self.w1.is_finite() && self.w2.is_finite()
    }
}

/// `ŷ = W^s x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShallowNet {
    /// `N3 x N1`.
    pub ws: Matrix,
}

impl ShallowNet {
    pub fn map(&self) -> Matrix {
        self.ws.clone()
    }

    pub fn predict(&self, x: &Matrix) -> Matrix {
        self.ws.matmul(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regime {
    /// One update per example, examples shuffled each epoch.
    Online,
    /// The example-averaged update, applied in `P` equal sub-steps per epoch
    /// so that an epoch moves as far as one online pass.
    #[default]
    Batch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Init {
    /// `W¹ ~ N(0, a0²/N1)`, `W² ~ N(0, a0²/N3)` entrywise.
    #[default]
    Gaussian,
    /// `W¹ = √a0·R·Vᵀ`, `W² = √a0·U·Rᵀ` with a random orthonormal `R`, so
    /// every mode starts at exactly `a0` with no cross-mode coupling.
    Balanced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub init_scale: f64,
    pub seed: u64,
    pub regime: Regime,
    pub init: Init,
    /// Record every this many epochs (the first and last epoch are always
    /// recorded).
    pub record_every: usize,
    /// Hidden width `N2`; defaults to the number of modes `min(N1, N3)`.
    pub hidden_dim: Option<usize>,
    pub record_hidden: bool,
    pub record_predictions: bool,
}

impl TrainConfig {
    pub fn new(learning_rate: f64, epochs: usize, init_scale: f64, seed: u64) -> Self {
        Self {
            learning_rate,
            epochs,
            init_scale,
            seed,
            regime: Regime::Batch,
            init: Init::Gaussian,
            record_every: 1,
            hidden_dim: None,
            record_hidden: false,
            record_predictions: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return Err(Error::invalid("initial scale must be non-negative"));
        }
        if self.record_every == 0 {
            return Err(Error::invalid("record_every must be at least 1"));
        }
        if self.hidden_dim == Some(0) {
            return Err(Error::invalid("hidden layer needs at least one unit"));
        }
        Ok(())
    }

    /// Time constant of the averaged dynamics in epochs, `τ = 1/(Pλ)`.
    pub fn tau(&self, p: usize) -> f64 {
        1.0 / (p as f64 * self.learning_rate)
    }
}

/// Recorded course of a training run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    /// Epochs at which the state was recorded.
    pub times: Vec<f64>,
    /// `times x modes`, the diagonal of `Uᵀ·W·V` for the SVD of `Σ^yx`.
    pub eff_singular_values: Matrix,
    /// Largest off-diagonal magnitude of `Uᵀ·W·V` at each record.
    pub off_diagonal: Vec<f64>,
    pub sse: Vec<f64>,
    pub hidden_snapshots: Vec<Matrix>,
    pub predictions: Vec<Matrix>,
    pub warnings: Vec<String>,
    /// `1/(Pλ)`, in epochs.
    pub tau: f64,
}

impl Trajectory {
    pub fn n_modes(&self) -> usize {
        self.eff_singular_values.cols()
    }

    /// Trajectory of mode `alpha`.
    pub fn mode(&self, alpha: usize) -> Vec<f64> {
        self.eff_singular_values.col(alpha)
    }
}

/// Gaussian initial weights, `W¹ ~ N(0, a0²/N1)`, `W² ~ N(0, a0²/N3)`.
pub fn init_network(n1: usize, n2: usize, n3: usize, a0: f64, seed: u64) -> Result<DeepNet> {
    if !(a0 >= 0.0) {
        return Err(Error::invalid("initial scale must be non-negative"));
    }
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(Error::invalid("layer sizes must be positive"));
    }
    let w1 = rng::gaussian_matrix(&mut rng::stream(seed, streams::INIT_W1), n2, n1, a0 / (n1 as f64).sqrt());
    let w2 = rng::gaussian_matrix(&mut rng::stream(seed, streams::INIT_W2), n3, n2, a0 / (n3 as f64).sqrt());
    DeepNet::new(w1, w2)
}

/// Balanced, decoupled weights whose composite map is `a0·U·Vᵀ`.
pub fn init_balanced(modes: &SvdResult, n2: usize, a0: f64, seed: u64) -> Result<DeepNet> {
    let r = modes.rank();
    if n2 < r {
        return Err(Error::invalid(format!("balanced init needs N2 ≥ {r} hidden units")));
    }
    if !(a0 >= 0.0) {
        return Err(Error::invalid("initial scale must be non-negative"));
    }
    let rot = rng::random_orthonormal(seed, n2, r)?;
    let k = a0.sqrt();
    let w1 = rot.matmul_t(&modes.v).scale(k);
    let w2 = modes.u.matmul_t(&rot).scale(k);
    DeepNet::new(w1, w2)
}

/// `½‖y − W²W¹x‖²` for one example.
pub fn example_loss(net: &DeepNet, x: &[f64], y: &[f64]) -> f64 {
    let yhat = net.w2.mat_vec(&net.w1.mat_vec(x));
    0.5 * y.iter().zip(&yhat).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
}

/// The backprop increments `(ΔW¹, ΔW²) = (λW²ᵀ e xᵀ, λ e hᵀ)` with
/// `e = y − ŷ`, both from the current weights.
pub fn online_update(net: &DeepNet, x: &[f64], y: &[f64], lr: f64) -> (Matrix, Matrix) {
    let h = net.w1.mat_vec(x);
    let yhat = net.w2.mat_vec(&h);
    let e: Vec<f64> = y.iter().zip(&yhat).map(|(a, b)| a - b).collect();
    let back = net.w2.t_mat_vec(&e);
    let d1 = Matrix::from_fn(net.w1.rows(), net.w1.cols(), |i, j| lr * back[i] * x[j]);
    let d2 = Matrix::from_fn(net.w2.rows(), net.w2.cols(), |i, j| lr * e[i] * h[j]);
    (d1, d2)
}

/// Inputs and targets as presented: `√P·X` and `Y/√P`.
fn presented(ds: &Dataset) -> (Matrix, Matrix) {
    let sp = (ds.p() as f64).sqrt();
    (ds.x.scale(sp), ds.y.scale(1.0 / sp))
}

fn total_sse(map: &Matrix, xs: &Matrix, ys: &Matrix) -> f64 {
    0.5 * ys.sub(&map.matmul(xs)).frobenius_sq()
}

struct Recorder<'a> {
    modes: &'a SvdResult,
    xs: Matrix,
    ys: Matrix,
    probe: Matrix,
    cfg: &'a TrainConfig,
    rows: Vec<Vec<f64>>,
    traj: Trajectory,
    sse0: f64,
}

impl<'a> Recorder<'a> {
    fn new(ds: &Dataset, modes: &'a SvdResult, cfg: &'a TrainConfig) -> Self {
        let (xs, ys) = presented(ds);
        let mut traj = Trajectory { tau: cfg.tau(ds.p()), ..Trajectory::default() };
        let s1 = modes.s.first().copied().unwrap_or(0.0);
        if cfg.learning_rate * s1 * ds.p() as f64 >= 1.0 {
            let msg = format!(
                "learning rate {} is not small against 1/(s1·P) = {:.3e}; learning is not gradual",
                cfg.learning_rate,
                1.0 / (s1 * ds.p() as f64)
            );
            log::warn!("{msg}");
            traj.warnings.push(msg);
        }
        Self { modes, xs, ys, probe: ds.x.clone(), cfg, rows: Vec::new(), traj, sse0: 0.0 }
    }

    /// Records the state if due; reports divergence.
    fn observe(&mut self, epoch: usize, map: &Matrix, hidden: Option<&Matrix>) -> Result<()> {
        let sse = total_sse(map, &self.xs, &self.ys);
        if epoch == 0 {
            self.sse0 = sse;
        }
        if !map.is_finite() || !sse.is_finite() || sse > 1e3 * self.sse0.max(1e-12) {
            return Err(Error::TrainingDiverged { epoch });
        }
        if epoch % self.cfg.record_every != 0 && epoch != self.cfg.epochs {
            return Ok(());
        }
        let proj = self.modes.u.t_matmul(map).matmul(&self.modes.v);
        let r = self.modes.rank();
        let mut off = 0.0f64;
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    off = off.max(proj[(i, j)].abs());
                }
            }
        }
        self.rows.push(proj.diagonal());
        self.traj.off_diagonal.push(off);
        self.traj.times.push(epoch as f64);
        self.traj.sse.push(sse);
        if self.cfg.record_hidden {
            if let Some(h) = hidden {
                self.traj.hidden_snapshots.push(h.matmul(&self.probe));
            }
        }
        if self.cfg.record_predictions {
            self.traj.predictions.push(map.matmul(&self.probe));
        }
        Ok(())
    }

    fn finish(mut self) -> Trajectory {
        let cols = self.modes.rank();
        let data: Vec<f64> = self.rows.concat();
        self.traj.eff_singular_values =
            Matrix::from_vec(self.rows.len(), cols, data).expect("rows have one entry per mode");
        self.traj
    }
}

fn check_dims(ds: &Dataset, n1: usize, n3: usize) -> Result<()> {
    ds.validate()?;
    if ds.n_inputs() != n1 || ds.n_features() != n3 {
        return Err(Error::invalid("network dimensions do not match the dataset"));
    }
    Ok(())
}

/// Trains a deep network initialized according to `cfg`.
pub fn train_deep(ds: &Dataset, cfg: &TrainConfig) -> Result<(DeepNet, Trajectory)> {
    cfg.validate()?;
    let modes = svd(&ds.sigma_yx())?;
    let n2 = cfg.hidden_dim.unwrap_or(modes.rank());
    let net = match cfg.init {
        Init::Gaussian => init_network(ds.n_inputs(), n2, ds.n_features(), cfg.init_scale, cfg.seed)?,
        Init::Balanced => init_balanced(&modes, n2, cfg.init_scale, cfg.seed)?,
    };
    train_deep_from(ds, cfg, net)
}

/// Trains a given deep network.
pub fn train_deep_from(ds: &Dataset, cfg: &TrainConfig, mut net: DeepNet) -> Result<(DeepNet, Trajectory)> {
    cfg.validate()?;
    check_dims(ds, net.n_inputs(), net.n_outputs())?;
    let modes = svd(&ds.sigma_yx())?;
    let syx = ds.sigma_yx();
    let sx = ds.sigma_x();
    let lr = cfg.learning_rate;
    let p = ds.p();
    let mut rec = Recorder::new(ds, &modes, cfg);
    rec.observe(0, &net.map(), Some(&net.w1))?;
    let mut shuffle = rng::stream(cfg.seed, streams::SHUFFLE);
    let examples: Vec<(Vec<f64>, Vec<f64>)> = (0..p).map(|i| ds.example(i)).collect();
    for epoch in 1..=cfg.epochs {
        match cfg.regime {
            Regime::Batch => {
                for _ in 0..p {
                    let err = syx.sub(&net.w2.matmul(&net.w1).matmul(&sx));
                    let d1 = net.w2.t_matmul(&err);
                    let d2 = err.matmul_t(&net.w1);
                    net.w1.axpy(lr, &d1);
                    net.w2.axpy(lr, &d2);
                }
            }
            Regime::Online => {
                for i in rng::permutation(&mut shuffle, p) {
                    let (x, y) = &examples[i];
                    let (d1, d2) = online_update(&net, x, y, lr);
                    net.w1.axpy(1.0, &d1);
                    net.w2.axpy(1.0, &d2);
                }
            }
        }
        rec.observe(epoch, &net.map(), Some(&net.w1))?;
    }
    Ok((net, rec.finish()))
}

/// Trains a shallow network. Gaussian init draws `W^s ~ N(0, a0²/N1)`;
/// balanced init starts from `a0·U·Vᵀ`.
pub fn train_shallow(ds: &Dataset, cfg: &TrainConfig) -> Result<(ShallowNet, Trajectory)> {
    cfg.validate()?;
    let modes = svd(&ds.sigma_yx())?;
    let (n1, n3) = (ds.n_inputs(), ds.n_features());
    let ws = match cfg.init {
        Init::Gaussian => rng::gaussian_matrix(
            &mut rng::stream(cfg.seed, streams::INIT_W1),
            n3,
            n1,
            cfg.init_scale / (n1 as f64).sqrt(),
        ),
        Init::Balanced => modes.u.matmul_t(&modes.v).scale(cfg.init_scale),
    };
    train_shallow_from(ds, cfg, ShallowNet { ws })
}

pub fn train_shallow_from(ds: &Dataset, cfg: &TrainConfig, mut net: ShallowNet) -> Result<(ShallowNet, Trajectory)> {
    cfg.validate()?;
    check_dims(ds, net.ws.cols(), net.ws.rows())?;
    let modes = svd(&ds.sigma_yx())?;
    let syx = ds.sigma_yx();
    let sx = ds.sigma_x();
    let lr = cfg.learning_rate;
    let p = ds.p();
    let mut rec = Recorder::new(ds, &modes, cfg);
    rec.observe(0, &net.ws, None)?;
    let mut shuffle = rng::stream(cfg.seed, streams::SHUFFLE);
    let examples: Vec<(Vec<f64>, Vec<f64>)> = (0..p).map(|i| ds.example(i)).collect();
    for epoch in 1..=cfg.epochs {
        match cfg.regime {
            Regime::Batch => {
                for _ in 0..p {
                    let err = syx.sub(&net.ws.matmul(&sx));
                    net.ws.axpy(lr, &err);
                }
            }
            Regime::Online => {
                for i in rng::permutation(&mut shuffle, p) {
                    let (x, y) = &examples[i];
                    let yhat = net.ws.mat_vec(x);
                    for m in 0..net.ws.rows() {
                        let e = y[m] - yhat[m];
                        for j in 0..net.ws.cols() {
                            net.ws[(m, j)] += lr * e * x[j];
                        }
                    }
                }
            }
        }
        rec.observe(epoch, &net.ws, None)?;
    }
    Ok((net, rec.finish()))
}
