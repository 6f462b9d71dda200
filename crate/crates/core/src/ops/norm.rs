//! Temporal batch normalization.
//!
//! Statistics for a `[batch, c, s]` activation pool the batch and temporal
//! axes jointly, so each channel normalizes over `batch * s` positions.
//! Variance is the biased (1/N) estimate, both for normalization and for the
//! running-average update.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::tensor::Tensor;

pub(crate) struct BnDims {
    pub mb: usize,
    pub c: usize,
    pub s: usize,
}

pub(crate) fn bn_dims<T: Real>(
    x: &Tensor<T>,
    gamma: &Tensor<T>,
    beta: &Tensor<T>,
) -> Result<BnDims> {
    let (mb, c, s) = match *x.shape() {
        [mb, c, s] => (mb, c, s),
        ref other => {
            return Err(Error::shape(
                "temporal_batch_norm",
                format!("input must be [batch, c, s], got {other:?}"),
            ))
        }
    };
    for (name, t) in [("gamma", gamma), ("beta", beta)] {
        if t.shape() != [c] {
            return Err(Error::shape(
                "temporal_batch_norm",
                format!("{name} must be [{c}], got {:?}", t.shape()),
            ));
        }
    }
    Ok(BnDims { mb, c, s })
}

/// Per-channel mean and biased variance over the `batch * s` positions.
pub(crate) fn batch_moments<T: Real>(x: &[T], d: &BnDims) -> (Vec<T>, Vec<T>) {
    let n = T::from_usize(d.mb * d.s);
    let mut mean = vec![T::ZERO; d.c];
    let mut var = vec![T::ZERO; d.c];
    for ch in 0..d.c {
        let mut acc = T::ZERO;
        for b in 0..d.mb {
            let row = &x[(b * d.c + ch) * d.s..(b * d.c + ch + 1) * d.s];
            for &v in row {
                acc += v;
            }
        }
        mean[ch] = acc / n;
    }
    for ch in 0..d.c {
        let m = mean[ch];
        let mut acc = T::ZERO;
        for b in 0..d.mb {
            let row = &x[(b * d.c + ch) * d.s..(b * d.c + ch + 1) * d.s];
            for &v in row {
                let dv = v - m;
                acc += dv * dv;
            }
        }
        var[ch] = acc / n;
    }
    (mean, var)
}

/// Normalizes with the given per-channel mean / inverse standard deviation.
pub(crate) fn bn_apply<T: Real>(
    x: &[T],
    mean: &[T],
    inv_std: &[T],
    gamma: &[T],
    beta: &[T],
    y: &mut [T],
    d: &BnDims,
) {
    for b in 0..d.mb {
        for ch in 0..d.c {
            let (m, is, g, be) = (mean[ch], inv_std[ch], gamma[ch], beta[ch]);
            let base = (b * d.c + ch) * d.s;
            for t in 0..d.s {
                y[base + t] = g * (x[base + t] - m) * is + be;
            }
        }
    }
}

pub(crate) fn inv_std_from_var<T: Real>(var: &[T], eps: T) -> Vec<T> {
    var.iter().map(|&v| T::ONE / (v + eps).sqrt()).collect()
}

/// Gradient through train-mode normalization (statistics depend on x).
///
/// dx = g*is * (dy - sum(dy)/N - xhat * sum(dy*xhat)/N), per channel.
pub(crate) fn bn_bwd_train<T: Real>(
    x: &[T],
    dy: &[T],
    mean: &[T],
    inv_std: &[T],
    gamma: &[T],
    dx: &mut [T],
    dgamma: &mut [T],
    dbeta: &mut [T],
    d: &BnDims,
) {
    let n = T::from_usize(d.mb * d.s);
    for ch in 0..d.c {
        let (m, is, g) = (mean[ch], inv_std[ch], gamma[ch]);
        let mut sum_dy = T::ZERO;
        let mut sum_dy_xhat = T::ZERO;
        for b in 0..d.mb {
            let base = (b * d.c + ch) * d.s;
            for t in 0..d.s {
                let xhat = (x[base + t] - m) * is;
                sum_dy += dy[base + t];
                sum_dy_xhat += dy[base + t] * xhat;
            }
        }
        dgamma[ch] += sum_dy_xhat;
        dbeta[ch] += sum_dy;
        let mean_dy = sum_dy / n;
        let mean_dy_xhat = sum_dy_xhat / n;
        for b in 0..d.mb {
            let base = (b * d.c + ch) * d.s;
            for t in 0..d.s {
                let xhat = (x[base + t] - m) * is;
                dx[base + t] += g * is * (dy[base + t] - mean_dy - xhat * mean_dy_xhat);
            }
        }
    }
}

/// Gradient through eval-mode normalization (statistics are constants).
pub(crate) fn bn_bwd_eval<T: Real>(
    x: &[T],
    dy: &[T],
    mean: &[T],
    inv_std: &[T],
    gamma: &[T],
    dx: &mut [T],
    dgamma: &mut [T],
    dbeta: &mut [T],
    d: &BnDims,
) {
    for ch in 0..d.c {
        let (m, is, g) = (mean[ch], inv_std[ch], gamma[ch]);
        for b in 0..d.mb {
            let base = (b * d.c + ch) * d.s;
            for t in 0..d.s {
                let xhat = (x[base + t] - m) * is;
                dgamma[ch] += dy[base + t] * xhat;
                dbeta[ch] += dy[base + t];
                dx[base + t] += dy[base + t] * g * is;
            }
        }
    }
}

/// Temporal batch norm as a pure function. In train mode the running
/// statistics are updated in place as
/// `running <- (1 - update_rate) * running + update_rate * batch_stat`.
#[allow(clippy::too_many_arguments)]
pub fn temporal_batch_norm<T: Real>(
    x: &Tensor<T>,
    gamma: &Tensor<T>,
    beta: &Tensor<T>,
    running_mean: &mut Tensor<T>,
    running_var: &mut Tensor<T>,
    epsilon: T,
    update_rate: T,
    train: bool,
) -> Result<Tensor<T>> {
    let d = bn_dims(x, gamma, beta)?;
    for (name, t) in [("running_mean", &*running_mean), ("running_var", &*running_var)] {
        if t.shape() != [d.c] {
            return Err(Error::shape(
                "temporal_batch_norm",
                format!("{name} must be [{}], got {:?}", d.c, t.shape()),
            ));
        }
    }
    let mut y = Tensor::zeros(x.shape().to_vec());
    if train {
        if d.mb * d.s < 2 {
            return Err(Error::invalid(
                "temporal_batch_norm",
                format!(
                    "train mode needs batch*s >= 2 positions, got {}",
                    d.mb * d.s
                ),
            ));
        }
        let (mean, var) = batch_moments(x.data(), &d);
        let inv_std = inv_std_from_var(&var, epsilon);
        bn_apply(
            x.data(),
            &mean,
            &inv_std,
            gamma.data(),
            beta.data(),
            y.data_mut(),
            &d,
        );
        let keep = T::ONE - update_rate;
        for ch in 0..d.c {
            let rm = &mut running_mean.data_mut()[ch];
            *rm = keep * *rm + update_rate * mean[ch];
            let rv = &mut running_var.data_mut()[ch];
            *rv = keep * *rv + update_rate * var[ch];
        }
    } else {
        let inv_std = inv_std_from_var(running_var.data(), epsilon);
        bn_apply(
            x.data(),
            running_mean.data(),
            &inv_std,
            gamma.data(),
            beta.data(),
            y.data_mut(),
            &d,
        );
    }
    Ok(y)
}
