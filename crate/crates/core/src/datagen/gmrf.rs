//! Gaussian Markov random fields over relational graphs.
//!
//! A graph of `K` nodes with edge lengths `e_ij` gives adjacency
//! `A_ij = 1/e_ij`, Laplacian `L = D − A` and node precision
//! `Φ̃ = L + I/σ²`. Items sit on a subset of nodes; the item covariance is
//! the corresponding principal block of `Φ̃⁻¹`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 math needs std
use num_traits::Float;
use super::{labels, Dataset};
use crate::linalg::{cholesky, inverse, sym_eig, Matrix};
use crate::rng;
use crate::{Error, Result};

/// Undirected edge between nodes `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmrfSpec {
    pub n_nodes: usize,
    pub edges: Vec<Edge>,
    /// Graph-independent standard deviation.
    pub sigma: f64,
    /// Node carrying each item, in item order.
    pub item_nodes: Vec<usize>,
    pub seed: u64,
}

impl GmrfSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes == 0 {
            return Err(Error::invalid("graph has no nodes"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid("sigma must be positive and finite"));
        }
        for e in &self.edges {
            if e.a >= self.n_nodes || e.b >= self.n_nodes || e.a == e.b {
                return Err(Error::invalid(format!("bad edge ({}, {})", e.a, e.b)));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(Error::invalid(format!("edge ({}, {}) has non-positive length", e.a, e.b)));
            }
        }
        if self.item_nodes.is_empty() {
            return Err(Error::invalid("no nodes are mapped to items"));
        }
        let mut seen = BTreeSet::new();
        for &n in &self.item_nodes {
            if n >= self.n_nodes || !seen.insert(n) {
                return Err(Error::invalid(format!("item node {n} is out of range or repeated")));
            }
        }
        Ok(())
    }

    pub fn n_items(&self) -> usize {
        self.item_nodes.len()
    }

    /// `Φ̃ = L + I/σ²` over all nodes.
    pub fn precision(&self) -> Result<Matrix> {
        self.validate()?;
        let k = self.n_nodes;
        let mut phi = Matrix::zeros(k, k);
        for e in &self.edges {
            let w = 1.0 / e.length;
            phi[(e.a, e.b)] -= w;
            phi[(e.b, e.a)] -= w;
            phi[(e.a, e.a)] += w;
            phi[(e.b, e.b)] += w;
        }
        let reg = 1.0 / (self.sigma * self.sigma);
        for i in 0..k {
            phi[(i, i)] += reg;
        }
        Ok(phi)
    }
}

fn edge(a: usize, b: usize, length: f64) -> Edge {
    Edge { a, b, length }
}

/// Items partitioned into clusters of the given sizes, each item joined by an
/// edge of `edge_len` to a hidden node for its cluster. Items come first.
pub fn cluster_graph(sizes: &[usize], edge_len: f64, sigma: f64, seed: u64) -> Result<GmrfSpec> {
    let p: usize = sizes.iter().sum();
    let mut edges = Vec::with_capacity(p);
    let mut item = 0;
    for (b, &m) in sizes.iter().enumerate() {
        for _ in 0..m {
            edges.push(edge(item, p + b, edge_len));
            item += 1;
        }
    }
    let spec = GmrfSpec { n_nodes: p + sizes.len(), edges, sigma, item_nodes: (0..p).collect(), seed };
    spec.validate()?;
    Ok(spec)
}

/// `p` items on a ring, neighbours joined by edges of `edge_len`.
pub fn ring_graph(p: usize, edge_len: f64, sigma: f64, seed: u64) -> Result<GmrfSpec> {
    if p < 3 {
        return Err(Error::invalid("a ring needs at least three items"));
    }
    let edges = (0..p).map(|i| edge(i, (i + 1) % p, edge_len)).collect();
    let spec = GmrfSpec { n_nodes: p, edges, sigma, item_nodes: (0..p).collect(), seed };
    spec.validate()?;
    Ok(spec)
}

/// `p` items on a line.
pub fn chain_graph(p: usize, edge_len: f64, sigma: f64, seed: u64) -> Result<GmrfSpec> {
    let edges = (1..p).map(|i| edge(i - 1, i, edge_len)).collect();
    let spec = GmrfSpec { n_nodes: p, edges, sigma, item_nodes: (0..p).collect(), seed };
    spec.validate()?;
    Ok(spec)
}

/// A regular tree with the given branching factors. Internal nodes are
/// hidden; items are the leaves in depth-first order.
pub fn tree_graph(branching: &[usize], edge_len: f64, sigma: f64, seed: u64) -> Result<GmrfSpec> {
    if branching.iter().any(|&b| b == 0) {
        return Err(Error::invalid("branching factors must be positive"));
    }
    let mut edges = Vec::new();
    let mut level: Vec<usize> = alloc::vec![0];
    let mut next_id = 1;
    for &b in branching {
        let mut children = Vec::with_capacity(level.len() * b);
        for &parent in &level {
            for _ in 0..b {
                edges.push(edge(parent, next_id, edge_len));
                children.push(next_id);
                next_id += 1;
            }
        }
        level = children;
    }
    let spec = GmrfSpec { n_nodes: next_id, edges, sigma, item_nodes: level, seed };
    spec.validate()?;
    Ok(spec)
}

/// Item covariance `M Φ̃⁻¹ Mᵀ`.
pub fn gmrf_covariance(spec: &GmrfSpec) -> Result<Matrix> {
    let full = inverse(&spec.precision()?)?;
    let mut cov = full.select_rows(&spec.item_nodes).select_cols(&spec.item_nodes);
    cov.symmetrize();
    Ok(cov)
}

/// `(ones, identity)` coefficients of one cluster's covariance block
/// `ones·11ᵀ + identity·I`.
pub fn cluster_block_constants(m_b: usize, e_b: f64, sigma: f64) -> (f64, f64) {
    let m = m_b as f64;
    let s2 = sigma * sigma;
    let head = s2 / (m + 1.0);
    let tail = 1.0 / (((m + 1.0) / e_b + 1.0 / s2) * m * (m + 1.0));
    let item = 1.0 / (1.0 / e_b + 1.0 / s2);
    // Diagonal and off-diagonal entries of the block.
    let diagonal = head + (m - 1.0) * item / m + tail;
    let off_diagonal = head - item / m + tail;
    (off_diagonal, diagonal - off_diagonal)
}

/// Eigenvalues of one cluster block: `s1` for the constant vector and `s2`
/// for the `M_b − 1` contrasts.
pub fn cluster_eigs(m_b: usize, e_b: f64, sigma: f64) -> (f64, f64) {
    let m = m_b as f64;
    let s2 = sigma * sigma;
    let s1 = (1.0 + m * s2 / e_b) / ((m + 1.0) / e_b + 1.0 / s2);
    (s1, 1.0 / (1.0 / e_b + 1.0 / s2))
}

/// Draws `n_features` independent features from the item covariance.
/// Feature `m` uses random stream `m`.
pub fn sample_gmrf_features(spec: &GmrfSpec, n_features: usize) -> Result<Dataset> {
    if n_features == 0 {
        return Err(Error::invalid("need at least one feature"));
    }
    let cov = gmrf_covariance(spec)?;
    let factor = match cholesky(&cov) {
        Ok(l) => l,
        Err(_) => {
            let e = sym_eig(&cov)?;
            let roots: Vec<f64> = e.values.iter().map(|v| v.max(0.0).sqrt()).collect();
            e.vectors.scale_cols(&roots)
        }
    };
    let p = spec.n_items();
    let mut y = Matrix::zeros(n_features, p);
    let mut z = alloc::vec![0.0; p];
    for m in 0..n_features {
        let mut r = rng::stream(spec.seed, m as u64);
        z.iter_mut().for_each(|v| *v = rng::gaussian(&mut r));
        let f = factor.mat_vec(&z);
        for (i, v) in f.into_iter().enumerate() {
            y[(m, i)] = v;
        }
    }
    Dataset::one_hot("gmrf", labels("item", p), labels("f", n_features), y)
}
