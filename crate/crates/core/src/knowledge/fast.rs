use alloc::vec::Vec;

use crate::datagen::Dataset;
use crate::dynamics::{hidden_reps, mode_strengths, ode, DeepNet};
use crate::linalg::{dot, Matrix, SvdResult};
use crate::semantics::SemanticSvd;
use crate::{Error, Result};

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;

/// Steady-state weights of a fast-learned association.
#[derive(Debug, Clone, PartialEq)]
pub struct FastLearnResult {
    /// `h/‖h‖²` for the anchoring hidden vector `h`.
    pub new_weights: Vec<f64>,
    /// The anchoring item (novel feature) or feature (novel item).
    pub target: usize,
    /// Developmental time at which the association was learned.
    pub t: f64,
}

fn anchored(h: Vec<f64>, target: usize, t: f64) -> Result<FastLearnResult> {
    let n2 = dot(&h, &h);
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::CannotAnchor);
    }
    Ok(FastLearnResult { new_weights: h.into_iter().map(|v| v / n2).collect(), target, t })
}

/// New hidden-to-output row for a feature seen on `item` only. `hidden` is
/// `N2 x P` with one column per item.
pub fn learn_novel_feature(hidden: &Matrix, item: usize, t: f64) -> Result<FastLearnResult> {
    if item >= hidden.cols() {
        return Err(Error::invalid("item index out of range"));
    }
    anchored(hidden.col(item), item, t)
}

/// Integrates `τ_f ẇ = (1 − w·h) hᵀ` from `w = 0` for `t_end` with RK4.
pub fn learn_novel_feature_ode(hidden: &Matrix, item: usize, tau_f: f64, t_end: f64) -> Result<Vec<f64>> {
    if item >= hidden.cols() {
        return Err(Error::invalid("item index out of range"));
    }
    if !(tau_f > 0.0) || !(t_end >= 0.0) {
        return Err(Error::invalid("need tau_f > 0 and t_end >= 0"));
    }
    let h = hidden.col(item);
    let hh = dot(&h, &h);
    if hh == 0.0 {
        return Err(Error::CannotAnchor);
    }
    let dt = (0.05 * tau_f / hh).min(t_end.max(f64::MIN_POSITIVE));
    let w0 = alloc::vec![0.0; h.len()];
    Ok(ode::rk4(
        |w| {
            let r = (1.0 - dot(w, &h)) / tau_f;
            h.iter().map(|x| r * x).collect()
        },
        &w0,
        t_end,
        dt,
    ))
}

/// Output of the new feature unit for item `j`: `h_jᵀ h_i / ‖h_i‖²`.
pub fn project_feature(r: &FastLearnResult, hidden: &Matrix, j: usize) -> Result<f64> {
    if hidden.rows() != r.new_weights.len() || j >= hidden.cols() {
        return Err(Error::invalid("hidden representation does not match the learned weights"));
    }
    Ok(dot(&r.new_weights, &hidden.col(j)))
}

/// Hidden representations of the output features, `√A(t)·Uᵀ`
/// (`modes x N3`).
pub fn feature_reps(svd: &SvdResult, a0: f64, tau: f64, t: f64) -> Result<Matrix> {
    let roots: Vec<f64> = mode_strengths(&svd.s, a0, tau, t)?.into_iter().map(|a| a.sqrt()).collect();
    Ok(svd.u.transpose().scale_rows(&roots))
}

/// New input-to-hidden column for an item known to have feature `m` only.
pub fn learn_novel_item(a: &SemanticSvd, feature: usize, a0: f64, tau: f64, t: f64) -> Result<FastLearnResult> {
    let reps = feature_reps(&a.svd, a0, tau, t)?;
    if feature >= reps.cols() {
        return Err(Error::invalid("feature index out of range"));
    }
    anchored(reps.col(feature), feature, t)
}

/// Predicted value of feature `n` for the novel item: `h_nᵀ h_m / ‖h_m‖²`.
/// `reps` comes from [`feature_reps`] at the learning time.
pub fn project_item(r: &FastLearnResult, reps: &Matrix, n: usize) -> Result<f64> {
    if reps.rows() != r.new_weights.len() || n >= reps.cols() {
        return Err(Error::invalid("feature representation does not match the learned weights"));
    }
    Ok(dot(&r.new_weights, &reps.col(n)))
}

/// Network with the novel feature's output row added below `W²`.
pub fn append_feature(net: &DeepNet, weights: &[f64]) -> Result<DeepNet> {
    if weights.len() != net.n_hidden() {
        return Err(Error::invalid("new row must have one weight per hidden unit"));
    }
    let mut rows: Vec<Vec<f64>> = (0..net.w2.rows()).map(|i| net.w2.row(i).to_vec()).collect();
    rows.push(weights.to_vec());
    DeepNet::new(net.w1.clone(), Matrix::from_rows(&rows)?)
}

/// Network with the novel item's input column added to the right of `W¹`.
pub fn append_item(net: &DeepNet, weights: &[f64]) -> Result<DeepNet> {
    if weights.len() != net.n_hidden() {
        return Err(Error::invalid("new column must have one weight per hidden unit"));
    }
    let mut cols: Vec<Vec<f64>> = (0..net.w1.cols()).map(|j| net.w1.col(j)).collect();
    cols.push(weights.to_vec());
    DeepNet::new(Matrix::from_columns(&cols)?, net.w2.clone())
}

/// `times x items` table of novel-feature projections anchored at `anchor`,
/// using the analytic hidden representations of the deep network at each
/// time.
pub fn projection_over_time(dataset: &Dataset, anchor: usize, a0: f64, tau: f64, times: &[f64]) -> Result<Matrix> {
    let a = crate::semantics::analyze(dataset)?;
    let p = dataset.p();
    if anchor >= p {
        return Err(Error::invalid("anchor item out of range"));
    }
    let mut out = Matrix::zeros(times.len(), p);
    for (k, &t) in times.iter().enumerate() {
        let h = hidden_reps(&a.svd, a0, tau, t, &dataset.x)?;
        let r = learn_novel_feature(&h, anchor, t)?;
        for j in 0..p {
            out[(k, j)] = project_feature(&r, &h, j)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::toy_hierarchy;
    use crate::knowledge::min_norm_weights;
    use crate::semantics::analyze;
    use alloc::vec;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn unit_anchor() {
        let h = Matrix::from_columns(&[vec![0.6, 0.8], vec![0.8, -0.6]]).unwrap();
        let r = learn_novel_feature(&h, 0, 0.0).unwrap();
        assert_eq!(r.new_weights, vec![0.6, 0.8]);
        assert!((project_feature(&r, &h, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!(project_feature(&r, &h, 1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn zero_anchor() {
        let h = Matrix::zeros(3, 2);
        assert_eq!(learn_novel_feature(&h, 1, 0.0), Err(Error::CannotAnchor));
        assert_eq!(learn_novel_feature_ode(&h, 1, 1.0, 1.0), Err(Error::CannotAnchor));
        assert!(learn_novel_feature(&h, 2, 0.0).is_err());
    }

    #[test]
    fn canary_projection_at_convergence() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let h = hidden_reps(&a.svd, 1e-3, 1.0, INF, &ds.x).unwrap();
        let r = learn_novel_feature(&h, 0, INF).unwrap();
        let want = [1.0, 0.372_83, 0.143_26, 0.143_26];
        for (j, w) in want.iter().enumerate() {
            assert!((project_feature(&r, &h, j).unwrap() - w).abs() < 1e-5);
        }
        // Hand inner products: (0.46300 − 0.30311)/1.11611 for Oak.
        let oak = (0.46300 - 0.30311) / 1.11611;
        assert!((project_feature(&r, &h, 2).unwrap() - oak).abs() < 1e-4);
    }

    #[test]
    fn ode_route_reaches_the_closed_form() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let h = hidden_reps(&a.svd, 1e-3, 1.0, INF, &ds.x).unwrap();
        let closed = learn_novel_feature(&h, 1, INF).unwrap();
        let hh = dot(&h.col(1), &h.col(1));
        let w = learn_novel_feature_ode(&h, 1, 0.5, 40.0 * 0.5 / hh).unwrap();
        for (a, b) in w.iter().zip(&closed.new_weights) {
            assert!((a - b).abs() < 1e-6);
        }
        let mut last = f64::INFINITY;
        for k in 0..20 {
            let w = learn_novel_feature_ode(&h, 1, 0.5, k as f64 * 0.2 / hh).unwrap();
            let res = (1.0 - dot(&w, &h.col(1))).powi(2);
            assert!(res <= last);
            last = res;
        }
    }

    #[test]
    fn appended_row_reproduces_projection() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        for t in [0.5, 2.0, INF] {
            let net = min_norm_weights(&a.svd, 1e-2, 1.0, t, 6, Some(9)).unwrap();
            let h = net.hidden(&ds.x);
            let r = learn_novel_feature(&h, 0, t).unwrap();
            let grown = append_feature(&net, &r.new_weights).unwrap();
            let out = grown.predict(&ds.x);
            for j in 0..4 {
                assert_eq!(out[(7, j)], project_feature(&r, &h, j).unwrap());
            }
        }
    }

    #[test]
    fn novel_item_projection() {
        let ds = toy_hierarchy();
        let a = analyze(&ds).unwrap();
        let mv = ds.feature_index("Move").unwrap();
        let fly = ds.feature_index("Fly").unwrap();
        let r = learn_novel_item(&a, mv, 1e-3, 1.0, INF).unwrap();
        let reps = feature_reps(&a.svd, 1e-3, 1.0, INF).unwrap();
        assert!((project_item(&r, &reps, mv).unwrap() - 1.0).abs() < 1e-12);
        let to_fly = project_item(&r, &reps, fly).unwrap();
        assert!(to_fly > 0.0 && to_fly < 1.0, "{to_fly}");
        // Oracle: append the item column to the min-norm network.
        let net = min_norm_weights(&a.svd, 1e-3, 1.0, INF, 4, None).unwrap();
        let grown = append_item(&net, &r.new_weights).unwrap();
        let mut probe = vec![0.0; 5];
        probe[4] = 1.0;
        let out = grown.w2.mat_vec(&grown.w1.mat_vec(&probe));
        assert!((out[fly] - to_fly).abs() < 1e-12);
        assert!((out[mv] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_features_do_not_project() {
        // Two modes with disjoint feature support.
        let y = Matrix::from_rows(&[[2.0, 0.0], [0.0, 1.0]]).unwrap();
        let ds = Dataset::one_hot("d", crate::datagen::labels("i", 2), crate::datagen::labels("f", 2), y).unwrap();
        let a = analyze(&ds).unwrap();
        let r = learn_novel_item(&a, 0, 1e-3, 1.0, INF).unwrap();
        let reps = feature_reps(&a.svd, 1e-3, 1.0, INF).unwrap();
        assert!(project_item(&r, &reps, 1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn projection_narrows_over_development() {
        let ds = toy_hierarchy();
        let a0 = 1e-4;
        let times: Vec<f64> = (0..200).map(|k| 0.05 * k as f64).collect();
        let tab = projection_over_time(&ds, 0, a0, 1.0, &times).unwrap();
        // Once the shared mode dominates every item looks like the anchor.
        let t1 = crate::dynamics::time_to_reach(a_s(0), a0, a_s(0) / 2.0, 1.0).unwrap();
        let k1 = times.iter().position(|&t| t >= t1).unwrap();
        for j in 1..4 {
            assert!(tab[(k1, j)] > 0.8, "{}", tab[(k1, j)]);
        }
        for k in k1..times.len() - 1 {
            for j in 2..4 {
                assert!(tab[(k + 1, j)] <= tab[(k, j)] + 1e-12);
            }
        }
        let last = times.len() - 1;
        assert!((tab[(last, 2)] - 0.143_26).abs() < 1e-3);
        assert!((tab[(0, 0)] - 1.0).abs() < 1e-12);
    }

    fn a_s(alpha: usize) -> f64 {
        analyze(&toy_hierarchy()).unwrap().svd.s[alpha]
    }
}
