//! Category coherence on hierarchies: within-category similarity minus
//! similarity to a sibling category.

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::{Error, Result};

const ULTRAMETRIC_TOL: f64 = 1e-8;

/// `Σ_{j∈C} Σ^y_ij − Σ_{j∈S} Σ^y_ij`, checked to be the same for every
/// representative `i ∈ C`.
pub fn tree_category_coherence(sigma_y: &Matrix, category: &[usize], sibling: &[usize]) -> Result<f64> {
    if !sigma_y.is_square() {
        return Err(Error::invalid("similarity matrix must be square"));
    }
    let n = sigma_y.rows();
    if category.is_empty() || sibling.is_empty() {
        return Err(Error::invalid("category and sibling must be non-empty"));
    }
    if category.iter().chain(sibling).any(|&i| i >= n) {
        return Err(Error::invalid("item index out of range"));
    }
    if category.iter().any(|i| sibling.contains(i)) {
        return Err(Error::invalid("category and sibling overlap"));
    }
    let value = |i: usize| {
        let within: f64 = category.iter().map(|&j| sigma_y[(i, j)]).sum();
        let between: f64 = sibling.iter().map(|&j| sigma_y[(i, j)]).sum();
        within - between
    };
    let first = value(category[0]);
    let spread = category.iter().map(|&i| (value(i) - first).abs()).fold(0.0, f64::max);
    if spread > ULTRAMETRIC_TOL * sigma_y.max_abs().max(1.0) {
        return Err(Error::NotUltrametric { spread });
    }
    Ok(first)
}

/// Coherence of each level of a category hierarchy, top level first.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicLevelProfile {
    pub coherence: Vec<f64>,
    /// Level with the largest coherence.
    pub argmax: usize,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|i| b.contains(i))
}

/// Evaluates [`tree_category_coherence`] on every level of a nested
/// partition (levels listed top-down, each a list of item groups). Every
/// group with a sibling under the same parent must give the same value.
pub fn basic_level_profile(sigma_y: &Matrix, partition: &[Vec<Vec<usize>>]) -> Result<BasicLevelProfile> {
    if partition.is_empty() {
        return Err(Error::invalid("partition has no levels"));
    }
    let everything: Vec<usize> = partition[0].iter().flatten().copied().collect();
    let root = alloc::vec![everything];
    let mut coherence = Vec::with_capacity(partition.len());
    for (l, groups) in partition.iter().enumerate() {
        let parents = if l == 0 { &root } else { &partition[l - 1] };
        let parent_of = |g: &[usize]| parents.iter().position(|p| is_subset(g, p));
        let mut owners = Vec::with_capacity(groups.len());
        for g in groups {
            match parent_of(g) {
                Some(p) if !g.is_empty() => owners.push(p),
                _ => return Err(Error::invalid("partition levels are not nested")),
            }
        }
        let mut level: Option<f64> = None;
        for (a, g) in groups.iter().enumerate() {
            for (b, s) in groups.iter().enumerate() {
                if a == b || owners[a] != owners[b] {
                    continue;
                }
                let v = tree_category_coherence(sigma_y, g, s)?;
                match level {
                    None => level = Some(v),
                    Some(first) => {
                        let spread = (v - first).abs();
                        if spread > ULTRAMETRIC_TOL * sigma_y.max_abs().max(1.0) {
                            return Err(Error::NotUltrametric { spread });
                        }
                    }
                }
            }
        }
        coherence.push(level.ok_or_else(|| Error::DegenerateStructure("a level has no sibling categories".into()))?);
    }
    let argmax = coherence
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > coherence[best] { i } else { best });
    Ok(BasicLevelProfile { coherence, argmax })
}
