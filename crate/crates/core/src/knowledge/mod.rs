//! Deploying learned structure on a fast timescale, and what hidden-layer
//! similarity says about behaviour.
//!
//! A novel feature attached to one familiar item (or a novel item known to
//! have one familiar feature) is learned by training only the new synapses.
//! The steady state projects the new knowledge along hidden-layer
//! similarity. For networks that sit on the minimum-norm solution the
//! behavioural similarity is the square of the neural similarity.

mod fast;
mod similarity;

pub use fast::{
    append_feature, append_item, feature_reps, learn_novel_feature, learn_novel_feature_ode, learn_novel_item,
    project_feature, project_item, projection_over_time, FastLearnResult,
};
pub use similarity::{
    behavioral_similarity, gauge_weights, min_norm_weights, neural_similarity, pairwise_distances, rsa_invariance, rsa_report,
    similarity_relation_check, RsaReport, RsaThresholds, SimilarityPair,
};
