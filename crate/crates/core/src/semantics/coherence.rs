//! Recoverability of a single planted category from noisy features.

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;

use crate::datagen::{planted_category, rescale_planted, PlantedSpec};
use crate::linalg::{dot, sym_eig, Matrix};
use crate::{Error, Result};

/// Predicted and measured alignment of the top singular vectors with the
/// ideal feature and object analyzers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceResult {
    pub theta: f64,
    pub coherence: f64,
    pub c_ratio: f64,
    pub predicted_u_overlap2: f64,
    pub predicted_v_overlap2: f64,
    pub empirical_u_overlap2: f64,
    pub empirical_v_overlap2: f64,
}

fn snr(spec: &PlantedSpec) -> f64 {
    let (p, q) = (spec.p_in, spec.p_out);
    (p - q) * (p - q) / (q * (1.0 - q))
}

/// `𝒞 = SNR · K_o K_f / √(N_o N_f)` with `SNR = (p−q)² / (q(1−q))`.
pub fn category_coherence(spec: &PlantedSpec) -> Result<f64> {
    spec.validate()?;
    let k = (spec.k_objects * spec.k_features) as f64;
    let n = (spec.n_objects as f64 * spec.n_features as f64).sqrt();
    Ok(snr(spec) * k / n)
}

/// Singular value of the rescaled category block,
/// `θ = (p−q) √(K_f K_o) / √(N_f q(1−q))`.
pub fn planted_theta(spec: &PlantedSpec) -> Result<f64> {
    spec.validate()?;
    let q = spec.p_out;
    let k = ((spec.k_objects * spec.k_features) as f64).sqrt();
    Ok((spec.p_in - q) * k / (spec.n_features as f64 * q * (1.0 - q)).sqrt())
}

/// Squared overlaps `(u², v²)` of the top singular vectors with the ideal
/// analyzers in the large-size limit; zero at or below `𝒞 = 1`.
pub fn predicted_overlaps(coherence: f64, c: f64) -> Result<(f64, f64)> {
    if !(c > 0.0 && c <= 1.0) || !(coherence >= 0.0) {
        return Err(Error::invalid("predicted overlaps need 0 < c <= 1 and C >= 0"));
    }
    if coherence <= 1.0 {
        return Ok((0.0, 0.0));
    }
    let overlap = |r: f64| 1.0 - (1.0 + r * coherence) / (coherence * (coherence + r));
    let rc = c.sqrt();
    Ok((overlap(1.0 / rc), overlap(rc)))
}

/// Squared overlaps of the top singular pair of `r_tilde` with the ideal
/// analyzers.
///
/// When the leading singular value is not separated from the next ones by
/// more than `3·N_o^{-2/3}` the top vector is not identifiable, and the best
/// pair in that cluster is reported instead.
pub fn empirical_overlaps(r_tilde: &Matrix, spec: &PlantedSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    if r_tilde.shape() != (spec.n_features, spec.n_objects) {
        return Err(Error::invalid("rescaled matrix does not match the planted spec"));
    }
    let eig = sym_eig(&r_tilde.gram())?;
    let sv: alloc::vec::Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let gap = 3.0 * (spec.n_objects as f64).powf(-2.0 / 3.0);
    let (u_ideal, v_ideal) = spec.ideal_vectors();
    let mut best = (0.0, 0.0);
    for j in 0..sv.len() {
        if j > 0 && sv[0] - sv[j] > gap {
            break;
        }
        if sv[j] == 0.0 {
            break;
        }
        let v = eig.vectors.col(j);
        let u: alloc::vec::Vec<f64> = r_tilde.mat_vec(&v).into_iter().map(|x| x / sv[j]).collect();
        let pair = (dot(&u, &u_ideal).powi(2).min(1.0), dot(&v, &v_ideal).powi(2).min(1.0));
        if pair.0 + pair.1 > best.0 + best.1 {
            best = pair;
        }
    }
    Ok(best)
}

/// One Monte-Carlo draw: sample, rescale and compare against the prediction.
pub fn coherence_trial(spec: &PlantedSpec) -> Result<CoherenceResult> {
    let coherence = category_coherence(spec)?;
    let c_ratio = spec.aspect();
    let (pu, pv) = predicted_overlaps(coherence, c_ratio)?;
    let r = rescale_planted(&planted_category(spec)?, spec.p_out, spec.n_features)?;
    let (eu, ev) = empirical_overlaps(&r, spec)?;
    Ok(CoherenceResult {
        theta: planted_theta(spec)?,
        coherence,
        c_ratio,
        predicted_u_overlap2: pu,
        predicted_v_overlap2: pv,
        empirical_u_overlap2: eu,
        empirical_v_overlap2: ev,
    })
}
