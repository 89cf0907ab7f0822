//! Seeded random streams.
//!
//! All sampling goes through ChaCha8 seeded from a `u64`. Independent parts
//! of a sample (one feature column, one weight matrix) draw from their own
//! ChaCha stream number, so results are bit-reproducible across platforms and
//! do not depend on the order in which columns are generated.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{orthonormalize_columns, Matrix};
use crate::Result;

/// Stream numbers reserved for non-column draws.
pub mod streams {
    pub const INIT_W1: u64 = 1 << 40;
    pub const INIT_W2: u64 = (1 << 40) + 1;
    pub const ROTATION: u64 = (1 << 40) + 2;
    pub const SHUFFLE: u64 = (1 << 40) + 3;
    pub const PLANTED: u64 = (1 << 40) + 4;
}

/// Generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// `rows x cols` matrix of i.i.d. `N(0, std²)` entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, std: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| std * gaussian(rng))
}

/// `n x k` matrix with orthonormal columns (`k ≤ n`), from Gram–Schmidt on
/// a seeded Gaussian matrix.
pub fn random_orthonormal(seed: u64, n: usize, k: usize) -> Result<Matrix> {
    let mut rng = stream(seed, streams::ROTATION);
    loop {
        let g = gaussian_matrix(&mut rng, n, k, 1.0);
        if let Ok(q) = orthonormalize_columns(&g) {
            return Ok(q);
        }
    }
}

/// Fisher–Yates permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> alloc::vec::Vec<usize> {
    let mut idx: alloc::vec::Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx
}
