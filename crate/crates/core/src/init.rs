//! Weight initialization.
//!
//! Convolutional and fully connected weights use the ReLU-suited scheme:
//! zero-mean Gaussian with variance `2 / fan_in` (`fan_in = c_in * w` for a
//! convolution, the input extent for a linear layer). Draws happen in `f64`
//! and are then narrowed, so a seed produces the same underlying sequence in
//! both precisions.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian tensor with variance `2 / fan_in`, drawn from `rng`.
pub fn he_draw<T: Real>(
    shape: impl Into<Vec<usize>>,
    fan_in: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Tensor<T>> {
    if fan_in == 0 {
        return Err(Error::invalid("he_init", "fan_in must be >= 1"));
    }
    let std = Real::sqrt(2.0f64 / fan_in as f64);
    let shape = shape.into();
    let numel = shape.iter().product();
    let data = (0..numel)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            T::from_f64(z * std)
        })
        .collect();
    Tensor::from_vec(shape, data)
}

/// Gaussian tensor with variance `2 / fan_in` from a fresh seeded stream.
pub fn he_init<T: Real>(shape: impl Into<Vec<usize>>, fan_in: usize, seed: u64) -> Result<Tensor<T>> {
    he_draw(shape, fan_in, &mut seeded_rng(seed))
}

/// Uniform tensor over `[lo, hi)`, drawn from `rng`.
pub fn uniform_draw<T: Real>(
    shape: impl Into<Vec<usize>>,
    lo: f64,
    hi: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Tensor<T>> {
    if !(lo < hi) {
        return Err(Error::invalid("uniform_init", "empty range"));
    }
    let shape = shape.into();
    let numel = shape.iter().product();
    let data = (0..numel)
        .map(|_| T::from_f64(rng.random_range(lo..hi)))
        .collect();
    Tensor::from_vec(shape, data)
}
