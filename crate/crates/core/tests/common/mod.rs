//! Brute-force reference implementations and test-data helpers.
//!
//! Everything here is written from the operator definitions alone, as
//! directly as possible, and stays independent of the library's kernels.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// C[i,j] = sum_t A[i,t] * B[t,j], the definition.
pub fn naive_matmul(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut acc = 0.0;
            for t in 0..k {
                acc += a[i * k + t] * b[t * n + j];
            }
            c[i * n + j] = acc;
        }
    }
    c
}

/// Temporal convolution by explicitly materializing the zero-padded input.
#[allow(clippy::too_many_arguments)]
pub fn naive_conv(
    x: &[f64],
    w: &[f64],
    cin: usize,
    s: usize,
    cout: usize,
    kw: usize,
    stride: usize,
    pad: usize,
) -> Vec<f64> {
    let padded_len = s + 2 * pad;
    let mut padded = vec![0.0; cin * padded_len];
    for ci in 0..cin {
        for t in 0..s {
            padded[ci * padded_len + pad + t] = x[ci * s + t];
        }
    }
    let so = (padded_len - kw) / stride + 1;
    let mut out = vec![0.0; cout * so];
    for co in 0..cout {
        for t in 0..so {
            let mut acc = 0.0;
            for ci in 0..cin {
                for k in 0..kw {
                    acc += w[(co * cin + ci) * kw + k] * padded[ci * padded_len + t * stride + k];
                }
            }
            out[co * so + t] = acc;
        }
    }
    out
}

/// Max pooling by direct window enumeration with explicit -inf padding.
pub fn naive_max_pool(
    x: &[f64],
    c: usize,
    s: usize,
    kernel: usize,
    stride: usize,
    pad: usize,
) -> Vec<f64> {
    let padded_len = s + 2 * pad;
    let mut padded = vec![f64::NEG_INFINITY; c * padded_len];
    for ch in 0..c {
        for t in 0..s {
            padded[ch * padded_len + pad + t] = x[ch * s + t];
        }
    }
    let so = (padded_len - kernel) / stride + 1;
    let mut out = vec![0.0; c * so];
    for ch in 0..c {
        for t in 0..so {
            let window = &padded[ch * padded_len + t * stride..ch * padded_len + t * stride + kernel];
            out[ch * so + t] = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        }
    }
    out
}

/// k-max pooling by sorting (value desc, index asc), keeping k, and
/// restoring the original index order.
pub fn naive_k_max(x: &[f64], c: usize, s: usize, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(c * k);
    for ch in 0..c {
        let row = &x[ch * s..(ch + 1) * s];
        let mut indexed: Vec<(usize, f64)> = row.iter().cloned().enumerate().collect();
        indexed.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let mut kept: Vec<(usize, f64)> = indexed.into_iter().take(k).collect();
        kept.sort_by_key(|&(i, _)| i);
        out.extend(kept.into_iter().map(|(_, v)| v));
    }
    out
}

/// Values with pairwise (and from-zero) separation of at least 1e-2, in a
/// shuffled order. Keeps finite-difference probes away from the kinks of
/// relu, max-pool argmax switches, and k-max selection boundaries.
pub fn kink_free(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let center = (n as f64 - 1.0) / 2.0;
    perm.into_iter()
        .map(|p| (p as f64 - center) * 0.0523 + 0.0037)
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-12))
        .fold(0.0, f64::max)
}
