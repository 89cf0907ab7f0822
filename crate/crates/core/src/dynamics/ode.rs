//! Classical fourth-order Runge–Kutta for autonomous systems, used to
//! cross-check closed-form trajectories.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;

fn steps_for(t_end: f64, dt: f64) -> (usize, f64) {
    if t_end <= 0.0 {
        return (0, 0.0);
    }
    let n = (t_end / dt).ceil().max(1.0) as usize;
    (n, t_end / n as f64)
}

/// Integrates `ẏ = f(y)` from `y0` over `[0, t_end]` with step at most `dt`.
pub fn rk4_scalar(f: impl Fn(f64) -> f64, y0: f64, t_end: f64, dt: f64) -> f64 {
    let (n, h) = steps_for(t_end, dt);
    let mut y = y0;
    for _ in 0..n {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

/// Vector version of [`rk4_scalar`].
pub fn rk4(f: impl Fn(&[f64]) -> Vec<f64>, y0: &[f64], t_end: f64, dt: f64) -> Vec<f64> {
    let (n, h) = steps_for(t_end, dt);
    let mut y = y0.to_vec();
    let shifted = |y: &[f64], k: &[f64], c: f64| y.iter().zip(k).map(|(a, b)| a + c * b).collect::<Vec<f64>>();
    for _ in 0..n {
        let k1 = f(&y);
        let k2 = f(&shifted(&y, &k1, 0.5 * h));
        let k3 = f(&shifted(&y, &k2, 0.5 * h));
        let k4 = f(&shifted(&y, &k3, h));
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = rk4_scalar(|y| -y, 1.0, 2.0, 1e-3);
        assert!((y - (-2.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn harmonic_oscillator() {
        let y = rk4(|y| alloc::vec![y[1], -y[0]], &[1.0, 0.0], core::f64::consts::PI, 1e-3);
        assert!((y[0] + 1.0).abs() < 1e-12 && y[1].abs() < 1e-12);
    }

    #[test]
    fn zero_time() {
        assert_eq!(rk4_scalar(|y| y, 3.0, 0.0, 0.1), 3.0);
    }
}
