use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;

use crate::linalg::{Matrix, SvdResult};
use crate::{Error, Result};

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("tau must be positive and finite"))
    }
}

/// Effective singular value of one mode of the deep network,
/// `a(t) = s·e^{2st/τ} / (e^{2st/τ} − 1 + s/a0)`.
pub fn deep_mode_trajectory(s: f64, a0: f64, tau: f64, t: f64) -> Result<f64> {
    check_tau(tau)?;
    if a0 == 0.0 {
        return Err(Error::FixedPoint);
    }
    if !(a0 > 0.0) || !(s >= 0.0) || !(t >= 0.0) {
        return Err(Error::domain("need s ≥ 0, a0 > 0 and t ≥ 0"));
    }
    if s == 0.0 {
        return Ok(a0 / (1.0 + 2.0 * a0 * t / tau));
    }
    let x = 2.0 * s * t / tau;
    let ratio = s / a0;
    Ok(if x <= 1.0 {
        s * x.exp() / (x.exp_m1() + ratio)
    } else {
        s / (1.0 + (ratio - 1.0) * (-x).exp())
    })
}

/// Shallow network mode, `b(t) = s(1 − e^{−t/τ}) + b0·e^{−t/τ}`.
pub fn shallow_mode_trajectory(s: f64, b0: f64, tau: f64, t: f64) -> Result<f64> {
    check_tau(tau)?;
    let decay = (-t / tau).exp();
    Ok(s * (1.0 - decay) + b0 * decay)
}

/// Time for a deep mode to grow from `a0` to `af`.
pub fn time_to_reach(s: f64, a0: f64, af: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    if !(a0 > 0.0 && a0 <= af && af < s) {
        return Err(Error::domain("time_to_reach needs 0 < a0 ≤ af < s"));
    }
    Ok(tau / (2.0 * s) * ((af * (s - a0)) / (a0 * (s - af))).ln())
}

fn check_cutoff(s: f64, eps: f64) -> Result<()> {
    if eps > 0.0 && eps < s {
        Ok(())
    } else {
        Err(Error::domain("need 0 < eps < s"))
    }
}

/// `(τ/s)·ln(s/ε)`.
pub fn deep_learning_time(s: f64, eps: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    check_cutoff(s, eps)?;
    Ok(tau / s * (s / eps).ln())
}

/// `τ·ln(s/ε)`.
pub fn shallow_learning_time(s: f64, eps: f64, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    check_cutoff(s, eps)?;
    Ok(tau * (s / eps).ln())
}

/// Learning cutoff `eps` and initial-strength cutoff `eps0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffParams {
    pub eps: f64,
    pub eps0: f64,
}

impl CutoffParams {
    pub fn validate(&self, s: f64) -> Result<()> {
        if self.eps0 > 0.0 && self.eps0 <= self.eps && self.eps < s {
            Ok(())
        } else {
            Err(Error::domain("need 0 < eps0 ≤ eps < s"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sharpness {
    /// Time to move from `ε` to `s − ε`.
    pub t_trans: f64,
    /// Time to move from `ε0` to `s − ε`.
    pub t_tot: f64,
    pub ratio: f64,
}

/// Transition duration relative to the total learning time of a deep mode.
pub fn transition_sharpness(s: f64, cut: CutoffParams, tau: f64) -> Result<Sharpness> {
    check_tau(tau)?;
    cut.validate(s)?;
    let CutoffParams { eps, eps0 } = cut;
    let k = tau / (2.0 * s);
    let t_trans = k * ((s - eps) * (s - eps) / (eps * eps)).ln();
    let t_tot = k * ((s - eps) * (s - eps0) / (eps0 * eps)).ln();
    Ok(Sharpness { t_trans, t_tot, ratio: t_trans / t_tot })
}

/// The same ratio for the exponential approach of a shallow mode.
pub fn shallow_transition_sharpness(s: f64, cut: CutoffParams, tau: f64) -> Result<Sharpness> {
    check_tau(tau)?;
    cut.validate(s)?;
    let CutoffParams { eps, eps0 } = cut;
    let t_trans = tau * ((s - eps) / eps).ln();
    let t_tot = tau * ((s - eps0) / eps).ln();
    Ok(Sharpness { t_trans, t_tot, ratio: t_trans / t_tot })
}

/// How long a feature stays wrongly predicted when a mode of strength `s`
/// is learned before one of strength `s − Δ` that cancels it. Returns the
/// exact interval and the small-`Δ` approximation `τΔ·ln(s/ε)/s²`.
pub fn illusory_interval(s: f64, delta: f64, eps: f64, tau: f64) -> Result<(f64, f64)> {
    check_tau(tau)?;
    if !(delta >= 0.0 && delta < s) {
        return Err(Error::domain("need 0 ≤ delta < s"));
    }
    check_cutoff(s - delta, eps)?;
    let exact = (tau * s * ((s - delta) / s).ln() + tau * delta * (s / eps).ln()) / (s * (s - delta));
    let approx = tau * delta * (s / eps).ln() / (s * s);
    Ok((exact, approx))
}

/// `a_α(t)` for every mode, all starting from `a0`.
pub fn mode_strengths(s: &[f64], a0: f64, tau: f64, t: f64) -> Result<Vec<f64>> {
    s.iter().map(|&sa| deep_mode_trajectory(sa, a0, tau, t)).collect()
}

/// `U·A(t)·Vᵀ`.
pub fn analytic_map(svd: &SvdResult, a0: f64, tau: f64, t: f64) -> Result<Matrix> {
    Ok(svd.compose(&mode_strengths(&svd.s, a0, tau, t)?))
}

/// `√A(t)·Vᵀ·x`, the hidden representations in the canonical gauge.
pub fn hidden_reps(svd: &SvdResult, a0: f64, tau: f64, t: f64, x: &Matrix) -> Result<Matrix> {
    if x.rows() != svd.v.rows() {
        return Err(Error::invalid("probe inputs do not match the input dimension"));
    }
    let roots: Vec<f64> = mode_strengths(&svd.s, a0, tau, t)?.into_iter().map(|a| a.sqrt()).collect();
    Ok(svd.v.t_matmul(x).scale_rows(&roots))
}

/// `SSE = (P/2)·TrΣ^y − P·Σ_α (s_α − a_α/2)·a_α` for one-hot inputs.
pub fn sse_curve(s: &[f64], sigma_y_trace: f64, a: &[f64], p: usize) -> Result<f64> {
    if s.len() != a.len() {
        return Err(Error::invalid("mode counts differ"));
    }
    let p = p as f64;
    let learned: f64 = s.iter().zip(a).map(|(s, a)| (s - a / 2.0) * a).sum();
    Ok(p / 2.0 * sigma_y_trace - p * learned)
}

/// How each mode's strength evolves in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeDynamics {
    Deep { a0: f64, tau: f64 },
    Shallow { b0: f64, tau: f64 },
}

impl ModeDynamics {
    pub fn strength(&self, s: f64, t: f64) -> Result<f64> {
        match *self {
            ModeDynamics::Deep { a0, tau } => deep_mode_trajectory(s, a0, tau, t),
            ModeDynamics::Shallow { b0, tau } => shallow_mode_trajectory(s, b0, tau, t),
        }
    }
}

/// Predicted value of one feature for one item over time.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTrajectory {
    pub times: Vec<f64>,
    pub prediction: Vec<f64>,
    /// `times x modes`, the term `a_α(t)·u_m^α·v_i^α` of each mode.
    pub contributions: Matrix,
}

pub fn feature_trajectory(
    svd: &SvdResult,
    dynamics: ModeDynamics,
    item: usize,
    feature: usize,
    times: &[f64],
) -> Result<FeatureTrajectory> {
    if item >= svd.v.rows() || feature >= svd.u.rows() {
        return Err(Error::invalid("item or feature index out of range"));
    }
    let r = svd.rank();
    let mut contributions = Matrix::zeros(times.len(), r);
    let mut prediction = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        let mut total = 0.0;
        for a in 0..r {
            let c = dynamics.strength(svd.s[a], t)? * svd.u[(feature, a)] * svd.v[(item, a)];
            contributions[(k, a)] = c;
            total += c;
        }
        prediction.push(total);
    }
    Ok(FeatureTrajectory { times: times.to_vec(), prediction, contributions })
}

/// `n` times spaced geometrically between `t_min` and `t_max`, preceded by 0.
pub fn geometric_times(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    if n == 1 {
        out.push(t_max);
    } else if n > 1 {
        let ratio = (t_max / t_min).ln() / (n - 1) as f64;
        out.extend((0..n).map(|k| t_min * (ratio * k as f64).exp()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_hierarchy;
    use crate::dynamics::ode::rk4_scalar;
    use crate::linalg::svd;

    #[test]
    fn deep_trajectory_basics() {
        assert_eq!(deep_mode_trajectory(1.5, 0.01, 1.0, 0.0).unwrap(), 0.01);
        for t in [0.0, 0.3, 5.0, 50.0] {
            assert!((deep_mode_trajectory(2.0, 2.0, 1.0, t).unwrap() - 2.0).abs() < 1e-14);
        }
        assert_eq!(deep_mode_trajectory(1.0, 0.0, 1.0, 1.0), Err(Error::FixedPoint));
        let s = 1.85203;
        let a0 = 1e-4;
        let half = 1.0 / (2.0 * s) * (s / a0 - 1.0).ln();
        assert!((half - 2.653).abs() < 1e-3);
        assert!((deep_mode_trajectory(s, a0, 1.0, half).unwrap() - s / 2.0).abs() < 1e-12);
    }

    #[test]
    fn deep_trajectory_matches_rk4() {
        let (s, a0, tau) = (1.85203, 1e-4, 1.0);
        for t in [0.5, 2.0, 2.653, 4.0, 8.0] {
            let num = rk4_scalar(|a| 2.0 * a * (s - a) / tau, a0, t, tau / 1000.0);
            assert!((num - deep_mode_trajectory(s, a0, tau, t).unwrap()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn zero_singular_value_decays() {
        let a = deep_mode_trajectory(0.0, 0.5, 1.0, 2.0).unwrap();
        let num = rk4_scalar(|a| -2.0 * a * a, 0.5, 2.0, 1e-3);
        assert!((a - num).abs() < 1e-10);
    }

    #[test]
    fn shallow_trajectory() {
        assert_eq!(shallow_mode_trajectory(3.0, 0.2, 1.0, 0.0).unwrap(), 0.2);
        let v = shallow_mode_trajectory(2.0, 0.0, 1.5, 1.5).unwrap();
        assert!((v - 2.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-14);
        assert!((shallow_mode_trajectory(2.0, 2.0, 1.0, 7.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn time_to_reach_values() {
        let t = time_to_reach(2.0, 0.01, 1.99, 1.0).unwrap();
        assert!((t - 0.25 * (1.99f64 * 1.99 / 1e-4).ln()).abs() < 1e-12);
        assert!((t - 2.6467).abs() < 1e-4);
        assert!(time_to_reach(2.0, 0.3, 0.3, 1.0).unwrap().abs() < 1e-15);
        assert!(matches!(time_to_reach(2.0, 0.01, 2.0, 1.0), Err(Error::Domain(_))));
        let num = rk4_scalar(|a| 2.0 * a * (2.0 - a), 0.01, t, 1e-3);
        assert!((num - 1.99).abs() < 1e-7);
    }

    #[test]
    fn learning_times() {
        let d = deep_learning_time(2.0, 0.01, 1.0).unwrap();
        let s = shallow_learning_time(2.0, 0.01, 1.0).unwrap();
        assert!((d - 2.6492).abs() < 1e-4);
        assert!((s - 5.2983).abs() < 1e-4);
        assert!((d / s - 0.5).abs() < 1e-14);
        let reach = time_to_reach(2.0, 0.01, 1.99, 1.0).unwrap();
        assert!((reach - d).abs() < 0.01);
        let s3 = shallow_learning_time(3.0, 0.01, 1.0).unwrap();
        let s1 = shallow_learning_time(1.0, 0.01, 1.0).unwrap();
        assert!((s3 - s1 - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sharpness_values() {
        let cut = |eps0| CutoffParams { eps: 0.05, eps0 };
        assert!((transition_sharpness(1.0, cut(0.05), 1.0).unwrap().ratio - 1.0).abs() < 1e-14);
        let r = transition_sharpness(1.0, cut(1e-8), 1.0).unwrap();
        assert!((r.t_trans * 2.0 - 361f64.ln()).abs() < 1e-9);
        assert!((r.ratio - 0.275_63).abs() < 1e-4);
        assert!(transition_sharpness(1.0, cut(5e-9), 1.0).unwrap().ratio < r.ratio);
        let sh = shallow_transition_sharpness(1.0, CutoffParams { eps: 0.01, eps0: 1e-9 }, 1.0).unwrap();
        assert!((sh.ratio - 1.0).abs() < 0.01);
        assert!(transition_sharpness(1.0, CutoffParams { eps: 0.01, eps0: 0.02 }, 1.0).is_err());
    }

    #[test]
    fn illusory_interval_values() {
        let (exact, _) = illusory_interval(2.0, 0.5, 0.01, 1.0).unwrap();
        assert!((exact - 0.6913).abs() < 1e-4);
        let diff = deep_learning_time(1.5, 0.01, 1.0).unwrap() - deep_learning_time(2.0, 0.01, 1.0).unwrap();
        assert!((exact - diff).abs() < 1e-12);
        assert_eq!(illusory_interval(2.0, 0.0, 0.01, 1.0).unwrap().0, 0.0);
        assert!(illusory_interval(2.0, 2.0, 0.01, 1.0).is_err());
    }

    #[test]
    fn map_and_hidden_reps() {
        let ds = toy_hierarchy();
        let d = svd(&ds.sigma_yx()).unwrap();
        let m0 = analytic_map(&d, 1e-6, 1.0, 0.0).unwrap();
        assert!(m0.max_abs() <= 1e-6);
        let late = analytic_map(&d, 1e-4, 1.0, 200.0).unwrap();
        assert!(late.sub(&ds.sigma_yx()).max_abs() < 1e-8);
        let t = 3.0;
        let h = hidden_reps(&d, 1e-4, 1.0, t, &ds.x).unwrap();
        let a = mode_strengths(&d.s, 1e-4, 1.0, t).unwrap();
        let expect = d.v.scale_cols(&a).matmul_t(&d.v);
        assert!(h.t_matmul(&h).sub(&expect).max_abs() < 1e-12);
        let h = hidden_reps(&d, 1e-4, 1.0, 200.0, &ds.x).unwrap();
        let (c, s) = (h.col(0), h.col(1));
        let sim = crate::linalg::dot(&c, &s) / crate::linalg::dot(&c, &c);
        assert!((sim - 0.37283).abs() < 1e-4);
    }

    #[test]
    fn only_first_mode_early() {
        let ds = toy_hierarchy();
        let d = svd(&ds.sigma_yx()).unwrap();
        let (a0, eps) = (1e-12, 0.1);
        // mode 1 within eps of s1 while mode 2 is still below eps
        let t = time_to_reach(d.s[0], a0, d.s[0] - eps, 1.0).unwrap();
        assert!(deep_mode_trajectory(d.s[1], a0, 1.0, t).unwrap() < eps);
        let m = analytic_map(&d, a0, 1.0, t).unwrap();
        let rank1 = d.compose(&[d.s[0], 0.0, 0.0, 0.0]);
        assert!(m.sub(&rank1).frobenius() < eps * 2.0);
    }

    #[test]
    fn sse_matches_direct_sum() {
        let ds = toy_hierarchy();
        let d = svd(&ds.sigma_yx()).unwrap();
        let tr = ds.sigma_y().trace();
        assert!((sse_curve(&d.s, tr, &[0.0; 4], 4).unwrap() - 2.0 * tr).abs() < 1e-12);
        let end = sse_curve(&d.s, tr, &d.s, 4).unwrap();
        assert!((end - 2.0 * (tr - d.s.iter().map(|s| s * s).sum::<f64>())).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for t in [0.0, 1.0, 2.5, 3.0, 4.0, 6.0] {
            let a = mode_strengths(&d.s, 1e-4, 1.0, t).unwrap();
            let w = d.compose(&a);
            let mut direct = 0.0;
            for i in 0..ds.p() {
                let (x, y) = ds.example(i);
                let yhat = w.mat_vec(&x);
                direct += 0.5 * y.iter().zip(&yhat).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            }
            let curve = sse_curve(&d.s, tr, &a, 4).unwrap();
            assert!((curve - direct).abs() < 1e-8);
            assert!(curve <= prev + 1e-12);
            prev = curve;
        }
    }

    #[test]
    fn illusory_fly_for_salmon() {
        let ds = toy_hierarchy();
        let d = svd(&ds.sigma_yx()).unwrap();
        let times: Vec<f64> = (0..=400).map(|k| k as f64 * 0.05).collect();
        let (salmon, fly) = (ds.item_index("Salmon").unwrap(), ds.feature_index("Fly").unwrap());
        let deep = feature_trajectory(&d, ModeDynamics::Deep { a0: 1e-4, tau: 1.0 }, salmon, fly, &times).unwrap();
        let peak = deep.prediction.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak > 0.1);
        assert!(deep.prediction.last().unwrap().abs() < 0.05);
        let sh = feature_trajectory(&d, ModeDynamics::Shallow { b0: 0.0, tau: 1.0 }, salmon, fly, &times).unwrap();
        let steps: Vec<f64> = sh.prediction.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.iter().all(|&x| x >= -1e-10) || steps.iter().all(|&x| x <= 1e-10));
    }

    #[test]
    fn geometric_grid() {
        let g = geometric_times(0.1, 10.0, 3);
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 0.0);
        assert!((g[2] - 1.0).abs() < 1e-12 && (g[3] - 10.0).abs() < 1e-12);
    }
}
