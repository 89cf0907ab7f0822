//! Learning dynamics: closed-form mode trajectories, timescales, and direct
//! simulation of gradient descent.
//!
//! Times in the closed forms are measured in units where the averaged
//! dynamics read `τ·dW/dt = …`. A simulated run with learning rate `λ` on
//! `P` items maps onto them with `t` in epochs and `τ = 1/(Pλ)`.

mod analytic;
pub mod ode;
mod train;

pub use analytic::{
    analytic_map, deep_learning_time, deep_mode_trajectory, feature_trajectory, geometric_times, hidden_reps,
    illusory_interval, mode_strengths, sse_curve, shallow_learning_time, shallow_mode_trajectory,
    shallow_transition_sharpness, time_to_reach, transition_sharpness, CutoffParams, FeatureTrajectory,
    ModeDynamics, Sharpness,
};
pub use train::{
    example_loss, init_balanced, init_network, online_update, train_deep, train_deep_from, train_shallow,
    train_shallow_from, DeepNet, Init, Regime, ShallowNet, TrainConfig, Trajectory,
};
