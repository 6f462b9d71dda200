//! Temporal max pooling and k-max pooling.
//!
//! Max-pool padding behaves like negative infinity, so a padding slot can
//! never win a window. k-max keeps the k largest entries of each row in
//! their original temporal order, breaking ties toward earlier positions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::conv::out_len;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

fn row_dims<T: Real>(x: &Tensor<T>, op: &'static str) -> Result<(usize, usize, usize)> {
    match *x.shape() {
        [c, s] => Ok((1, c, s)),
        [mb, c, s] => Ok((mb, c, s)),
        ref other => Err(Error::shape(
            op,
            format!("input must be [c, s] or [batch, c, s], got {other:?}"),
        )),
    }
}

fn pooled_shape(rank: usize, mb: usize, c: usize, so: usize) -> Vec<usize> {
    if rank == 2 {
        vec![c, so]
    } else {
        vec![mb, c, so]
    }
}

/// Forward max pool; returns the output and, per output element, the flat
/// index of the winning input element (first occurrence on ties).
pub(crate) fn max_pool_fwd<T: Real>(
    x: &Tensor<T>,
    kernel: usize,
    stride: usize,
    pad: usize,
) -> Result<(Tensor<T>, Vec<usize>)> {
    let (mb, c, s) = row_dims(x, "temporal_max_pool")?;
    if kernel == 0 {
        return Err(Error::invalid("temporal_max_pool", "kernel must be >= 1"));
    }
    let so = out_len(s, kernel, stride, pad)?;
    let mut out = Tensor::zeros(pooled_shape(x.rank(), mb, c, so));
    let mut argmax = vec![0usize; mb * c * so];
    let data = x.data();
    for row in 0..mb * c {
        let x_row = &data[row * s..(row + 1) * s];
        for t in 0..so {
            let start = (t * stride) as isize - pad as isize;
            let mut best: Option<(T, usize)> = None;
            for k in 0..kernel {
                let u = start + k as isize;
                if u < 0 || u as usize >= s {
                    continue;
                }
                let v = x_row[u as usize];
                if best.map_or(true, |(bv, _)| v > bv) {
                    best = Some((v, u as usize));
                }
            }
            let (v, u) = best.ok_or_else(|| {
                Error::invalid(
                    "temporal_max_pool",
                    format!("window {t} covers only padding (kernel {kernel}, pad {pad})"),
                )
            })?;
            out.data_mut()[row * so + t] = v;
            argmax[row * so + t] = row * s + u;
        }
    }
    Ok((out, argmax))
}

pub(crate) fn pool_bwd<T: Real>(dy: &[T], picked: &[usize], dx: &mut [T]) {
    for (&g, &u) in dy.iter().zip(picked) {
        dx[u] += g;
    }
}

/// Temporal max pooling with negative-infinity padding semantics.
pub fn temporal_max_pool<T: Real>(
    x: &Tensor<T>,
    kernel: usize,
    stride: usize,
    pad: usize,
) -> Result<Tensor<T>> {
    Ok(max_pool_fwd(x, kernel, stride, pad)?.0)
}

/// Forward k-max; returns the output and, per output element, the flat index
/// of the selected input element, in original temporal order.
pub(crate) fn k_max_fwd<T: Real>(x: &Tensor<T>, k: usize) -> Result<(Tensor<T>, Vec<usize>)> {
    let (mb, c, s) = row_dims(x, "k_max_pool")?;
    if k == 0 {
        return Err(Error::invalid("k_max_pool", "k must be >= 1"));
    }
    if k > s {
        return Err(Error::invalid(
            "k_max_pool",
            format!("k = {k} exceeds the row length {s}"),
        ));
    }
    let mut out = Tensor::zeros(pooled_shape(x.rank(), mb, c, k));
    let mut picked = vec![0usize; mb * c * k];
    let data = x.data();
    let mut order: Vec<usize> = Vec::with_capacity(s);
    for row in 0..mb * c {
        let x_row = &data[row * s..(row + 1) * s];
        order.clear();
        order.extend(0..s);
        // value descending, position ascending on ties
        order.sort_by(|&a, &b| {
            x_row[b]
                .partial_cmp(&x_row[a])
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut sel: Vec<usize> = order[..k].to_vec();
        sel.sort_unstable();
        for (j, &u) in sel.iter().enumerate() {
            out.data_mut()[row * k + j] = x_row[u];
            picked[row * k + j] = row * s + u;
        }
    }
    Ok((out, picked))
}

/// The k largest values per row, in their original temporal order.
pub fn k_max_pool<T: Real>(x: &Tensor<T>, k: usize) -> Result<Tensor<T>> {
    Ok(k_max_fwd(x, k)?.0)
}

/// k-max with k chosen to halve the temporal resolution: `k = ceil(s / 2)`.
pub fn half_k_max_pool<T: Real>(x: &Tensor<T>) -> Result<Tensor<T>> {
    let (_, _, s) = row_dims(x, "half_k_max_pool")?;
    if s < 2 {
        return Err(Error::invalid(
            "half_k_max_pool",
            format!("row length must be >= 2, got {s}"),
        ));
    }
    k_max_pool(x, s.div_ceil(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_pool_window_example() {
        let x = Tensor::from_vec([1, 4], vec![1.0f64, 2.0, 3.0, 4.0]).unwrap();
        let y = temporal_max_pool(&x, 3, 2, 1).unwrap();
        assert_eq!(y.data(), &[2.0, 4.0]);
    }

    #[test]
    fn max_pool_constant_input() {
        let x = Tensor::filled([2, 8], 3.5f64);
        let y = temporal_max_pool(&x, 3, 2, 1).unwrap();
        assert_eq!(y.shape(), &[2, 4]);
        assert!(y.data().iter().all(|&v| v == 3.5));
    }

    #[test]
    fn max_pool_never_selects_padding_on_negative_input() {
        let x = Tensor::from_vec([1, 4], vec![-5.0f64, -2.0, -9.0, -1.0]).unwrap();
        let y = temporal_max_pool(&x, 3, 2, 1).unwrap();
        assert_eq!(y.data(), &[-2.0, -1.0]);
    }

    #[test]
    fn three_halvings_of_1024() {
        let mut s = 1024;
        for expect in [512, 256, 128] {
            s = out_len(s, 3, 2, 1).unwrap();
            assert_eq!(s, expect);
        }
    }

    #[test]
    fn k_max_keeps_temporal_order() {
        let x = Tensor::from_vec([1, 3], vec![1.0f64, 3.0, 2.0]).unwrap();
        let y = k_max_pool(&x, 2).unwrap();
        assert_eq!(y.data(), &[3.0, 2.0]);
    }

    #[test]
    fn k_max_tie_prefers_earlier_positions() {
        let x = Tensor::from_vec([1, 4], vec![5.0f64, 1.0, 5.0, 0.0]).unwrap();
        let (y, picked) = k_max_fwd(&x, 2).unwrap();
        assert_eq!(y.data(), &[5.0, 5.0]);
        assert_eq!(picked, &[0, 2]);
    }

    #[test]
    fn k_max_k_equals_s_is_identity() {
        let x = Tensor::from_vec([1, 4], vec![4.0f64, -1.0, 0.5, 2.0]).unwrap();
        let y = k_max_pool(&x, 4).unwrap();
        assert_eq!(y.data(), x.data());
    }

    #[test]
    fn k_max_k_too_large_rejected() {
        let x = Tensor::<f64>::zeros([1, 3]);
        assert!(k_max_pool(&x, 4).is_err());
    }

    #[test]
    fn half_k_max_examples() {
        let x = Tensor::from_vec([1, 4], vec![4.0f64, 1.0, 3.0, 2.0]).unwrap();
        let y = half_k_max_pool(&x).unwrap();
        assert_eq!(y.data(), &[4.0, 3.0]);

        let odd = Tensor::<f64>::zeros([1, 5]);
        assert_eq!(half_k_max_pool(&odd).unwrap().shape(), &[1, 3]);

        let wide = Tensor::<f32>::zeros([1, 1024]);
        assert_eq!(half_k_max_pool(&wide).unwrap().shape(), &[1, 512]);
    }
}
