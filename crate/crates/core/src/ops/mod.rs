//! Forward and backward kernels for the temporal operator set.
//!
//! Each submodule exposes the operator as a pure function over tensors plus
//! the raw-slice kernels the tape records against. Kernels partition their
//! output by rows, so the parallel feature changes scheduling, never results.

pub mod conv;
pub mod embed;
pub mod linear;
pub mod loss;
pub mod norm;
pub mod pool;

/// Work size (in multiply-adds) below which kernels stay single-threaded.
#[cfg(feature = "parallel")]
pub(crate) const PAR_MIN_WORK: usize = 1 << 21;

/// Runs `f(row_index, row)` over consecutive `row_len` chunks of `data`,
/// in parallel when the feature is on and `work` is large enough.
#[cfg(feature = "parallel")]
pub(crate) fn for_each_row<T: Send, F>(data: &mut [T], row_len: usize, work: usize, f: F)
where
    F: Fn(usize, &mut [T]) + Send + Sync,
{
    if work >= PAR_MIN_WORK && data.len() > row_len {
        use rayon::prelude::*;
        data.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
    } else {
        for (i, row) in data.chunks_mut(row_len).enumerate() {
            f(i, row);
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn for_each_row<T, F>(data: &mut [T], row_len: usize, _work: usize, f: F)
where
    F: Fn(usize, &mut [T]),
{
    for (i, row) in data.chunks_mut(row_len).enumerate() {
        f(i, row);
    }
}
